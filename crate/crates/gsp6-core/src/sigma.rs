//! Explicit coset representatives `sigma_v` for `K'_{n,m} / K'_{n,m(p)}`
//! whose `u`-conjugates lie in `H`.
//!
//! A parameter vector `v` lives in `Z/p^3 x (Z/p^2)^4 x (Z/p)^5`. Its lift
//! keeps the stated digits and chooses the second digits of the five
//! `Z/p` coordinates; `t` and `t'` are then forced by the equal-determinant
//! condition on the three `GL2` factors, and the lift is accepted only if
//! the forced values agree with `v` modulo `p^2`.

use crate::cosets::{CosetKeyer, pattern_index};
use crate::levels::{forced_shape, Family, LevelSpec};
use crate::matrix::{GMatrix, Mat6};
use crate::zp::Zpn;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SigmaError {
    #[error("no lift of the parameters gives an H-shaped symplectic matrix")]
    NoHShapedLift,
    #[error("the template is not a symplectic similitude for any lift")]
    NotSymplectic,
    #[error("need m >= 1 and N >= 3(m+1), got m={m} N={big_n}")]
    Range { m: u32, big_n: u32 },
}

/// `(k, t, t', t'', t''', k', k'', r, r', s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SigmaParams {
    pub k: u64,
    pub t: u64,
    pub t1: u64,
    pub t2: u64,
    pub t3: u64,
    pub k1: u64,
    pub k2: u64,
    pub r: u64,
    pub r1: u64,
    pub s: u64,
}

/// Modulus exponent of each coordinate, in field order.
pub const PARAM_EXP: [u32; 10] = [3, 2, 2, 2, 2, 1, 1, 1, 1, 1];

impl SigmaParams {
    pub fn zero() -> Self {
        Self::from_array([0; 10])
    }

    pub fn to_array(&self) -> [u64; 10] {
        [self.k, self.t, self.t1, self.t2, self.t3, self.k1, self.k2, self.r, self.r1, self.s]
    }

    pub fn from_array(a: [u64; 10]) -> Self {
        let [k, t, t1, t2, t3, k1, k2, r, r1, s] = a;
        SigmaParams { k, t, t1, t2, t3, k1, k2, r, r1, s }
    }

    /// `p^16`.
    pub fn count(p: u64) -> u64 {
        p.pow(PARAM_EXP.iter().sum())
    }

    /// Mixed-radix decoding, last coordinate fastest.
    pub fn from_index(p: u64, mut idx: u64) -> Self {
        let mut a = [0u64; 10];
        for i in (0..10).rev() {
            let m = p.pow(PARAM_EXP[i]);
            a[i] = idx % m;
            idx /= m;
        }
        Self::from_array(a)
    }

    pub fn is_reduced(&self, p: u64) -> bool {
        self.to_array().iter().zip(PARAM_EXP).all(|(&x, e)| x < p.pow(e))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SigmaFormula {
    /// `a = r' + s + p^m t''` literal template.
    Literal,
    /// `a = r' + s + p^m t'''`, the value the template's `(1,4)` entry needs.
    Corrected,
}

/// Lifted integer values of the ten parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Lifted {
    k: u64,
    t: u64,
    t1: u64,
    t2: u64,
    t3: u64,
    k1: u64,
    k2: u64,
    r: u64,
    r1: u64,
    s: u64,
}

/// The template with `a..f` from `formula`.
fn template(r: &Zpn, m: u32, x: &Lifted, formula: SigmaFormula) -> Mat6 {
    let pm = r.p_pow(m);
    let pm2 = r.p_pow(2 * m);
    let pm3 = r.p_pow(3 * m);
    let sc = |c: u64, v: u64| r.mul(c, v);
    let one = 1 % r.q;
    let a = match formula {
        SigmaFormula::Literal => r.add(r.add(x.r1, x.s), sc(pm, x.t2)),
        SigmaFormula::Corrected => r.add(r.add(x.r1, x.s), sc(pm, x.t3)),
    };
    let b = r.add(x.r, sc(pm, x.t));
    let c = r.add(r.sub(x.r, x.s), sc(pm, x.t));
    let d = r.add(x.r1, sc(pm, x.t1));
    let e = r.add(r.sub(x.r, x.s), sc(pm, r.sub(r.add(x.t1, x.t2), x.t3)));
    let f = r.add(r.add(r.sub(x.r1, x.r), x.s), sc(pm, r.sub(x.t3, x.t2)));
    let z = 0;
    let neg = |v: u64| r.neg(sc(pm, v));
    [
        [r.add(one, sc(pm, a)), neg(x.r1), neg(x.r), sc(pm2, x.t3), sc(pm2, x.t2), sc(pm3, x.k)],
        [z, r.add(one, sc(pm, b)), neg(x.r), sc(pm, c), sc(pm, x.k1), sc(pm2, x.t)],
        [z, neg(x.r1), r.add(one, sc(pm, d)), sc(pm, x.k2), sc(pm, e), sc(pm2, x.t1)],
        [z, z, sc(pm, x.r), r.add(one, sc(pm, x.s)), sc(pm, x.r), sc(pm, x.r)],
        [z, sc(pm, x.r1), z, sc(pm, x.r1), r.add(one, sc(pm, f)), sc(pm, x.r1)],
        [z, z, z, z, z, one],
    ]
}

/// `t` and `t'` forced by `det h_1 = det h_2 = det h_3`.
fn forced_t(r: &Zpn, m: u32, x: &Lifted) -> Option<(u64, u64)> {
    let pm = r.p_pow(m);
    let f = r.add(r.add(r.sub(x.r1, x.r), x.s), r.mul(pm, r.sub(x.t3, x.t2)));
    let d2 = r.add(1 % r.q, r.mul(pm, f));
    let d3 = r.add(1 % r.q, r.mul(pm, x.s));
    let num2 = r.sub(r.add(x.t2, r.mul(r.add(x.k1, x.r), x.r1)), r.mul(x.r, f));
    let num3 = r.sub(r.add(x.t3, r.mul(r.add(x.k2, x.r1), x.r)), r.mul(x.r1, x.s));
    Some((r.mul(num2, r.inv(d2)?), r.mul(num3, r.inv(d3)?)))
}

/// Second digits chosen for `(k', k'', r, r', s)`, in that order.
pub type LiftDigits = [u64; 5];

fn lift(v: &SigmaParams, p: u64, digits: &LiftDigits) -> Lifted {
    Lifted {
        k: v.k,
        t: v.t,
        t1: v.t1,
        t2: v.t2,
        t3: v.t3,
        k1: v.k1 + p * digits[0],
        k2: v.k2 + p * digits[1],
        r: v.r + p * digits[2],
        r1: v.r1 + p * digits[3],
        s: v.s + p * digits[4],
    }
}

fn digit_tuples(p: u64) -> impl Iterator<Item = LiftDigits> {
    (0..p.pow(5)).map(move |mut i| {
        let mut d = [0u64; 5];
        for x in d.iter_mut().rev() {
            *x = i % p;
            i /= p;
        }
        d
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaLift {
    pub g: GMatrix,
    pub digits: LiftDigits,
}

/// `sigma_v` over `Z/p^N`: the first lift in lexicographic digit order that
/// satisfies the symplectic (and, for `Corrected`, the `H`-shape) condition.
pub fn sigma_matrix(v: &SigmaParams, p: u64, m: u32, big_n: u32, formula: SigmaFormula) -> Result<SigmaLift, SigmaError> {
    if m < 1 || big_n < 3 * (m + 1) {
        return Err(SigmaError::Range { m, big_n });
    }
    let r = Zpn::new(p, big_n);
    let p2 = r.p_pow(2);
    for digits in digit_tuples(p) {
        let mut x = lift(v, p, &digits);
        match formula {
            SigmaFormula::Corrected => {
                let Some((t, t1)) = forced_t(&r, m, &x) else { continue };
                if t % p2 != v.t % p2 || t1 % p2 != v.t1 % p2 {
                    continue;
                }
                x.t = t;
                x.t1 = t1;
                let m6 = template(&r, m, &x, formula);
                if let Ok(g) = GMatrix::new(r, m6) {
                    return Ok(SigmaLift { g, digits });
                }
            }
            SigmaFormula::Literal => {
                let m6 = template(&r, m, &x, formula);
                if let Ok(g) = GMatrix::new(r, m6) {
                    return Ok(SigmaLift { g, digits });
                }
            }
        }
    }
    Err(match formula {
        SigmaFormula::Corrected => SigmaError::NoHShapedLift,
        SigmaFormula::Literal => SigmaError::NotSymplectic,
    })
}

/// Whether `t ≡ t'' + k'r' + r^2 - rs` and `t' ≡ t''' + k''r + rr' - r's (mod p)`,
/// the necessary condition for a lift when `m >= 1`.
pub fn mod_p_liftable(v: &SigmaParams, p: u64) -> bool {
    let md = |x: i128| x.rem_euclid(p as i128);
    let [_, t, t1, t2, t3, k1, k2, r, r1, s] = v.to_array().map(|x| x as i128);
    md(t - (t2 + k1 * r1 + r * r - r * s)) == 0 && md(t1 - (t3 + k2 * r + r1 * r - r1 * s)) == 0
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SigmaSurvey {
    pub total: u64,
    pub lifted: u64,
    pub no_lift: u64,
    /// Lifted and in `K'_{n,m}`.
    pub in_kprime: u64,
    /// Lifted with `u sigma u^{-1} ∈ H` (round trip through the forced shape).
    pub h_shaped: u64,
    /// Distinct cosets `sigma_v^{-1} K'_{n,m(p)}`.
    pub distinct_inverse: usize,
    /// Distinct cosets `sigma_v K'_{n,m(p)}`.
    pub distinct_direct: usize,
    /// `[K'_{n,m} : K'_{n,m(p)}]` by breadth-first enumeration.
    pub bfs_index: usize,
    /// Whether every lifted vector satisfies `mod_p_liftable`.
    pub obstruction_explains: bool,
    /// Vectors satisfying `mod_p_liftable`.
    pub mod_p_candidates: u64,
}

impl SigmaSurvey {
    pub fn coverage(&self) -> bool {
        self.distinct_inverse == self.bfs_index
    }

    pub fn all_lifted(&self) -> bool {
        self.lifted == self.total
    }
}

/// Exhaustive survey over all `p^16` parameter vectors.
pub fn sigma_coset_survey(p: u64, n: u32, m: u32, big_n: u32, guard: usize) -> Result<SigmaSurvey, crate::cosets::CosetError> {
    let ring = Zpn::new(p, big_n);
    let kp = LevelSpec::new(Family::Kprime { n, m }, p);
    let kpp = LevelSpec::new(Family::KprimeP { n, m }, p);
    let keyer = CosetKeyer::new(&kpp.pattern()?, ring);
    let mut out = SigmaSurvey { obstruction_explains: true, ..Default::default() };
    let mut inv_keys = BTreeSet::new();
    let mut dir_keys = BTreeSet::new();
    for idx in 0..SigmaParams::count(p) {
        let v = SigmaParams::from_index(p, idx);
        out.total += 1;
        let res = sigma_matrix(&v, p, m, big_n, SigmaFormula::Corrected);
        out.mod_p_candidates += u64::from(mod_p_liftable(&v, p));
        if res.is_ok() && !mod_p_liftable(&v, p) {
            out.obstruction_explains = false;
        }
        let Ok(SigmaLift { g, .. }) = res else {
            out.no_lift += 1;
            continue;
        };
        out.lifted += 1;
        if kp.contains(&g)? {
            out.in_kprime += 1;
        }
        if forced_shape(&g).is_ok() {
            out.h_shaped += 1;
        }
        inv_keys.insert(keyer.key(&g.inv()));
        dir_keys.insert(keyer.key(&g));
    }
    out.distinct_inverse = inv_keys.len();
    out.distinct_direct = dir_keys.len();
    out.bfs_index = pattern_index(&kp.pattern()?, &kpp.pattern()?, ring, guard)?.len();
    Ok(out)
}

/// The lifted parameter vectors' second digits, for the fixed-lift contract.
pub fn lift_digits(v: &SigmaParams, p: u64, m: u32, big_n: u32) -> Option<LiftDigits> {
    sigma_matrix(v, p, m, big_n, SigmaFormula::Corrected).ok().map(|l| l.digits)
}

/// Vectors whose coset `sigma_v^{-1} K'_{n,m(p)}` equals that of `w`, among `candidates`.
pub fn same_coset(keyer: &CosetKeyer, a: &GMatrix, b: &GMatrix) -> bool {
    keyer.key(&a.inv()) == keyer.key(&b.inv())
}

pub fn mod_p_candidate_count(p: u64) -> u64 {
    (0..SigmaParams::count(p)).filter(|&i| mod_p_liftable(&SigmaParams::from_index(p, i), p)).count() as u64
}

/// A few fixed vectors used by tests and the CLI.
pub fn sample_params(p: u64) -> Vec<SigmaParams> {
    let n = SigmaParams::count(p);
    [0, 1, 12345 % n, n / 3, n - 1].iter().map(|&i| SigmaParams::from_index(p, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_vector_gives_identity() {
        let l = sigma_matrix(&SigmaParams::zero(), 2, 1, 8, SigmaFormula::Corrected).unwrap();
        assert!(l.g.is_identity());
        assert_eq!(l.digits, [0; 5]);
    }

    #[test]
    fn index_round_trip() {
        let v = SigmaParams::from_index(2, 40000);
        assert!(v.is_reduced(2));
        let a = v.to_array();
        let mut idx = 0u64;
        for i in 0..10 {
            idx = idx * 2u64.pow(PARAM_EXP[i]) + a[i];
        }
        assert_eq!(idx, 40000);
    }

    #[test]
    fn lifted_sigma_is_h_shaped() {
        let mut seen = 0;
        for i in (0..SigmaParams::count(2)).step_by(997) {
            let v = SigmaParams::from_index(2, i);
            if let Ok(l) = sigma_matrix(&v, 2, 1, 8, SigmaFormula::Corrected) {
                assert!(forced_shape(&l.g).is_ok(), "{v:?}");
                seen += 1;
            }
            if !mod_p_liftable(&v, 2) {
                assert!(sigma_matrix(&v, 2, 1, 8, SigmaFormula::Corrected).is_err());
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn mod_p_condition_cuts_by_p_squared() {
        assert_eq!(mod_p_candidate_count(2), 1 << 14);
    }
}
