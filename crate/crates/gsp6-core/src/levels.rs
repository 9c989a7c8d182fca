//! Congruence level groups over `Z/p^N`.
//!
//! Every group used here is a *pattern group*: `g_ij ≡ δ_ij (mod p^{E_ij})`
//! together with `nu ≡ 1 (mod p^k)`. Conjugating by a power of `eta` and
//! intersecting are exact operations on patterns, so each level group has
//! both a literal recipe (the defining intersections, evaluated on matrices)
//! and a compiled pattern.

use crate::cosets::{generator_set, sample_element};
use crate::matrix::{eta_conjugate, GMatrix, HPoint, Mat2, Mat6, ETA_EXP};
use crate::report::{Report, Witness};
use crate::zp::Zpn;
use alloc::format;
use alloc::string::String;
use core::fmt;
use core::str::FromStr;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LevelError {
    #[error("working modulus p^{have} is below the p^{need} the level needs")]
    ModulusTooSmall { need: u32, have: u32 },
    #[error("prime mismatch: level is for p = {spec}, matrix lives over p = {ring}")]
    PrimeMismatch { spec: u64, ring: u64 },
    #[error("the level is a subgroup of GL2, not of GSp6")]
    NotSixDimensional,
    #[error("cannot parse level spec: {0}")]
    Parse(String),
    #[error("parameters out of range: {0}")]
    Range(String),
    #[error("matrix is not of the u-conjugated H shape")]
    NotForcedShape,
    #[error("the constrained sampler accepted only {accepted} of {draws} draws")]
    SamplerStarved { accepted: u64, draws: u64 },
}

/// `g ≡ I` modulo `p^{e[i][j]}` entrywise and `nu ≡ 1 (mod p^{nu_exp})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    pub e: [[u32; 6]; 6],
    pub nu_exp: u32,
}

impl Pattern {
    pub fn full() -> Self {
        Pattern { e: [[0; 6]; 6], nu_exp: 0 }
    }

    /// Kernel of reduction modulo `p^d`.
    pub fn kernel(d: u32) -> Self {
        Pattern { e: [[d; 6]; 6], nu_exp: d }
    }

    /// Sixth row `≡ (0, ..., 0, 1) (mod p^n)`.
    pub fn last_row(n: u32) -> Self {
        let mut p = Self::full();
        p.e[5] = [n; 6];
        p
    }

    /// The mod-`p` shape of the refined level: rows 1-3 diagonal mod `p`,
    /// rows 4-6 unrestricted in the first three columns, `≡ I` elsewhere.
    pub fn mod_p_shape() -> Self {
        let mut p = Self::full();
        for i in 0..6 {
            for j in 0..6 {
                p.e[i][j] = if i < 3 { u32::from(i != j) } else { u32::from(j >= 3) };
            }
        }
        p
    }

    pub fn meet(&self, other: &Pattern) -> Pattern {
        let mut e = self.e;
        for i in 0..6 {
            for j in 0..6 {
                e[i][j] = e[i][j].max(other.e[i][j]);
            }
        }
        Pattern { e, nu_exp: self.nu_exp.max(other.nu_exp) }
    }

    pub fn with_nu(mut self, k: u32) -> Self {
        self.nu_exp = self.nu_exp.max(k);
        self
    }

    /// Pattern of `eta^a P eta^{-a}`.
    pub fn eta_conjugate(&self, a: i32) -> Pattern {
        let mut e = [[0u32; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                let shift = a * (ETA_EXP[i] as i32 - ETA_EXP[j] as i32);
                e[i][j] = (self.e[i][j] as i32 + shift).max(0) as u32;
            }
        }
        Pattern { e, nu_exp: self.nu_exp }
    }

    /// `E_ik + E_kj >= E_ij` for all `i, j, k`: the pattern is closed under products.
    pub fn is_closed(&self) -> bool {
        (0..6).all(|i| {
            (0..6).all(|j| (0..6).all(|k| self.e[i][k] + self.e[k][j] >= self.e[i][j]))
        })
    }

    pub fn max_exponent(&self) -> u32 {
        self.e.iter().flatten().copied().max().unwrap_or(0).max(self.nu_exp)
    }

    /// Whether `other ⊆ self` as patterns.
    pub fn contains_pattern(&self, other: &Pattern) -> bool {
        (0..6).all(|i| (0..6).all(|j| other.e[i][j] >= self.e[i][j])) && other.nu_exp >= self.nu_exp
    }

    pub fn contains_matrix(&self, r: &Zpn, m: &Mat6, nu: u64) -> bool {
        for i in 0..6 {
            for j in 0..6 {
                let want = u64::from(i == j) % r.q;
                if !r.congruent(m[i][j], want, self.e[i][j]) {
                    return false;
                }
            }
        }
        r.congruent(nu, 1 % r.q, self.nu_exp)
    }

    pub fn contains(&self, g: &GMatrix) -> bool {
        self.contains_matrix(&g.ring, &g.m, g.nu)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Kernel of reduction modulo `p^d`.
    KG { d: u32 },
    /// Sixth row `≡ (0, ..., 0, 1) (mod p^n)`.
    K { n: u32 },
    /// `K_n` with the mod-`p` shape.
    K0 { n: u32 },
    /// `K0` with `nu ≡ 1 (mod p^m)`.
    Knm { n: u32, m: u32 },
    /// Negative control: `K_n` with `nu ≡ 1 (mod p^m)` but without the mod-`p` shape.
    Control { n: u32, m: u32 },
    /// `K_n ∩ eta^m K_n eta^{-m} ∩ K_G(p^m)`.
    Kprime { n: u32, m: u32 },
    /// `K_n ∩ eta^{m+1} K_n eta^{-(m+1)} ∩ K_G(p^m)`.
    KprimeP { n: u32, m: u32 },
    /// The `GL2` level `g ≡ I mod [[1, 1], [p^n, p^n]]`.
    K1 { n: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelSpec {
    pub family: Family,
    pub p: u64,
}

impl LevelSpec {
    pub fn new(family: Family, p: u64) -> Self {
        LevelSpec { family, p }
    }

    /// The compiled pattern.
    pub fn pattern(&self) -> Result<Pattern, LevelError> {
        Ok(match self.family {
            Family::KG { d } => Pattern::kernel(d),
            Family::K { n } => Pattern::last_row(n),
            Family::K0 { n } => Pattern::last_row(n).meet(&Pattern::mod_p_shape()),
            Family::Knm { n, m } => Pattern::last_row(n).meet(&Pattern::mod_p_shape()).with_nu(m),
            Family::Control { n, m } => Pattern::last_row(n).with_nu(m),
            Family::Kprime { n, m } => prime_pattern(n, m, m),
            Family::KprimeP { n, m } => prime_pattern(n, m + 1, m),
            Family::K1 { .. } => return Err(LevelError::NotSixDimensional),
        })
    }

    /// Smallest `N` for which membership is decided exactly.
    pub fn required_precision(&self) -> u32 {
        match self.family {
            Family::K1 { n } => n,
            _ => self.pattern().map(|p| p.max_exponent()).unwrap_or(0),
        }
    }

    fn check_ring(&self, r: &Zpn) -> Result<(), LevelError> {
        if r.p != self.p {
            return Err(LevelError::PrimeMismatch { spec: self.p, ring: r.p });
        }
        let need = self.required_precision();
        if r.n < need {
            return Err(LevelError::ModulusTooSmall { need, have: r.n });
        }
        Ok(())
    }

    /// Membership, using the defining intersections for the primed families.
    pub fn contains(&self, g: &GMatrix) -> Result<bool, LevelError> {
        self.check_ring(&g.ring)?;
        Ok(match self.family {
            Family::Kprime { n, m } => recipe_contains(g, n, m, m),
            Family::KprimeP { n, m } => recipe_contains(g, n, m + 1, m),
            _ => self.pattern()?.contains(g),
        })
    }

    pub fn contains_gl2(&self, r: &Zpn, a: &Mat2) -> Result<bool, LevelError> {
        match self.family {
            Family::K1 { n } => {
                if r.n < n {
                    return Err(LevelError::ModulusTooSmall { need: n, have: r.n });
                }
                Ok(r.congruent(a[1][0], 0, n) && r.congruent(a[1][1], 1 % r.q, n))
            }
            _ => Err(LevelError::NotSixDimensional),
        }
    }
}

fn prime_pattern(n: u32, shift: u32, m: u32) -> Pattern {
    let kn = Pattern::last_row(n);
    kn.meet(&kn.eta_conjugate(shift as i32)).meet(&Pattern::kernel(m))
}

fn last_row_ok(r: &Zpn, m: &Mat6, n: u32) -> bool {
    (0..6).all(|j| r.congruent(m[5][j], u64::from(j == 5) % r.q, n))
}

/// `g ∈ K_n ∩ eta^a K_n eta^{-a} ∩ K_G(p^m)` evaluated literally:
/// `eta^{-a} g eta^a` is formed (it must be integral) and its last row tested.
pub fn recipe_contains(g: &GMatrix, n: u32, a: u32, m: u32) -> bool {
    let r = &g.ring;
    if !last_row_ok(r, &g.m, n) || !Pattern::kernel(m).contains(g) {
        return false;
    }
    match eta_conjugate(r, &g.m, a as i32) {
        Some(c) => last_row_ok(r, &c, n),
        None => false,
    }
}

impl fmt::Display for LevelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        match self.family {
            Family::KG { d } => write!(f, "KG d={d} p={p}"),
            Family::K { n } => write!(f, "K n={n} p={p}"),
            Family::K0 { n } => write!(f, "K0 n={n} p={p}"),
            Family::Knm { n, m } => write!(f, "Knm n={n} m={m} p={p}"),
            Family::Control { n, m } => write!(f, "Control n={n} m={m} p={p}"),
            Family::Kprime { n, m } => write!(f, "Kprime n={n} m={m} p={p}"),
            Family::KprimeP { n, m } => write!(f, "KprimeP n={n} m={m} p={p}"),
            Family::K1 { n } => write!(f, "K1 n={n} p={p}"),
        }
    }
}

/// Parses `"<family> key=value ..."`, e.g. `"Kprime n=6 m=1 p=2"`.
impl FromStr for LevelSpec {
    type Err = LevelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut it = s.split_whitespace();
        let name = it.next().ok_or_else(|| LevelError::Parse("empty spec".into()))?;
        let (mut n, mut m, mut d, mut p) = (None, None, None, None);
        for kv in it {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| LevelError::Parse(format!("expected key=value, got {kv:?}")))?;
            let val: u64 = v.parse().map_err(|_| LevelError::Parse(format!("bad number {v:?}")))?;
            match k {
                "n" => n = Some(val as u32),
                "m" => m = Some(val as u32),
                "d" => d = Some(val as u32),
                "p" => p = Some(val),
                _ => return Err(LevelError::Parse(format!("unknown key {k:?}"))),
            }
        }
        let need = |x: Option<u32>, k: &str| {
            x.ok_or_else(|| LevelError::Parse(format!("{name} needs {k}=")))
        };
        let family = match name.to_ascii_lowercase().as_str() {
            "kg" => Family::KG { d: need(d, "d")? },
            "k" | "kn" => Family::K { n: need(n, "n")? },
            "k0" | "kn0" => Family::K0 { n: need(n, "n")? },
            "knm" => Family::Knm { n: need(n, "n")?, m: need(m, "m")? },
            "control" => Family::Control { n: need(n, "n")?, m: need(m, "m")? },
            "kprime" => Family::Kprime { n: need(n, "n")?, m: need(m, "m")? },
            "kprimep" | "kprime(p)" => Family::KprimeP { n: need(n, "n")?, m: need(m, "m")? },
            "k1" => Family::K1 { n: need(n, "n")? },
            other => return Err(LevelError::Parse(format!("unknown family {other:?}"))),
        };
        let p = p.unwrap_or(2);
        if !crate::zp::is_prime(p) {
            return Err(LevelError::Range(format!("p = {p} is not prime")));
        }
        Ok(LevelSpec { family, p })
    }
}

/// How the `(1,1)` entry of the primed exponent-matrix patterns is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DisplayReading {
    /// `g_11 ≡ 1 (mod p^n)` read literally.
    Literal,
    /// `g_11 ≡ nu (mod p^n)`, which is what the defining intersections give.
    MultiplierAware,
}

/// Displayed exponent matrix of `K'_{n,m}` (`refined = false`) or `K'_{n,m(p)}`.
pub fn display_exponents(n: u32, m: u32, refined: bool) -> [[u32; 6]; 6] {
    let h = if refined { m + 1 } else { m };
    let mid = if refined { m + 1 } else { m };
    [
        [n, h, h, 2 * h, 2 * h, 3 * h],
        [n, m, m, mid, mid, 2 * h],
        [n, m, m, mid, mid, 2 * h],
        [n, m, m, m, m, h],
        [n, m, m, m, m, h],
        [n; 6],
    ]
}

pub fn display_contains(g: &GMatrix, e: &[[u32; 6]; 6], reading: DisplayReading, n: u32, m: u32) -> bool {
    let r = &g.ring;
    for i in 0..6 {
        for j in 0..6 {
            let ok = if (i, j) == (0, 0) && reading == DisplayReading::MultiplierAware {
                r.congruent(g.m[0][0], g.nu, n) && r.congruent(g.nu, 1 % r.q, m)
            } else {
                r.congruent(g.m[i][j], u64::from(i == j) % r.q, e[i][j])
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Draw an element of the group generated by a loosened copy of `base`:
/// each exponent drops by one with probability `loosen`.
pub fn straddling_sample(base: &Pattern, ring: Zpn, loosen: f64, rng: &mut ChaCha8Rng) -> GMatrix {
    let mut e = base.e;
    for row in e.iter_mut() {
        for x in row.iter_mut() {
            if *x > 0 && rng.gen_bool(loosen) {
                *x -= 1;
            }
        }
    }
    let nu_exp = if base.nu_exp > 0 && rng.gen_bool(loosen) { base.nu_exp - 1 } else { base.nu_exp };
    let gens = generator_set(&Pattern { e, nu_exp }, ring);
    sample_element(&gens, rng, 2)
}

/// Compare the defining intersections with the exponent-matrix patterns on
/// samples straddling the group boundary. `corrupt` lowers the `(1,6)`
/// display exponent by one (fault injection).
#[allow(clippy::too_many_arguments)]
pub fn level_equivalence_check(
    p: u64,
    n: u32,
    m: u32,
    big_n: u32,
    trials: u64,
    reading: DisplayReading,
    corrupt: bool,
    rng: &mut ChaCha8Rng,
) -> Report {
    let ring = Zpn::new(p, big_n.max(n).max(3 * (m + 1)));
    let mut rep = Report::new(format!("level_equivalence p={p} n={n} m={m} {reading:?}"));
    let regime = if n >= 3 * m + 3 { "n>=3m+3" } else if n > m { "m<n<3m+3" } else { "n<=m" };
    rep.value("regime", regime);
    let mut members = [0u64; 2];
    for t in 0..trials {
        let refined = t % 2 == 1;
        let a = if refined { m + 1 } else { m };
        let base = prime_pattern(n, a, m);
        let g = straddling_sample(&base, ring, 0.15, rng);
        let conj = recipe_contains(&g, n, a, m);
        let mut e = display_exponents(n, m, refined);
        if corrupt {
            e[0][5] -= 1;
        }
        let disp = display_contains(&g, &e, reading, n, m);
        members[refined as usize] += conj as u64;
        rep.check(conj == disp, || {
            Witness::matrix(format!("refined={refined} recipe={conj} display={disp}"), &g.m)
        });
    }
    rep.value("members_Kprime", members[0]);
    rep.value("members_KprimeP", members[1]);
    rep
}

/// Sampled inclusions, each counted under its own key:
/// `K'_{n,m} ⊇ K'_{n,m(p)} ⊇ K'_{n,m+1}` (`chain`), `K'_{n',m} ⊆ K_G(p^m)`
/// (`kernel`), `eta^{-m} K'_{n',m} eta^m ⊆ K_n ∩ {nu ≡ 1 mod p^m}` (`eta_coarse`)
/// and the same inside `K_{n,m}` (`eta_refined`), where `n' = n + 3(m+1)`.
/// The report's own counters cover the first three; `eta_refined` is only
/// recorded, with its first counterexample.
pub fn tower_and_inclusion_checks(p: u64, n: u32, m: u32, big_n: u32, trials: u64, rng: &mut ChaCha8Rng) -> Report {
    let n2 = n + 3 * (m + 1);
    let ring = Zpn::new(p, big_n.max(n2 + 3 * m + 1));
    let mut rep = Report::new(format!("tower p={p} n={n} m={m}"));
    rep.value("N", ring.n);
    let kp = LevelSpec::new(Family::Kprime { n, m }, p);
    let kpp = LevelSpec::new(Family::KprimeP { n, m }, p);
    let knext = LevelSpec::new(Family::Kprime { n, m: m + 1 }, p);
    let knm = LevelSpec::new(Family::Knm { n, m }, p).pattern().expect("six-dimensional");
    let coarse = LevelSpec::new(Family::Control { n, m }, p).pattern().expect("six-dimensional");
    let kbig = LevelSpec::new(Family::Kprime { n: n2, m }, p);
    let pat = |s: &LevelSpec| s.pattern().expect("six-dimensional");
    let gens_pp = generator_set(&pat(&kpp), ring);
    let gens_next = generator_set(&pat(&knext), ring);
    let gens_big = generator_set(&pat(&kbig), ring);
    let mut refined_fail = 0u64;
    let mut first: Option<Mat6> = None;
    for _ in 0..trials {
        let g = sample_element(&gens_pp, rng, 2);
        let ok = kpp.contains(&g).unwrap() && kp.contains(&g).unwrap();
        rep.check(ok, || Witness::matrix("chain: K'(p) element outside K'", &g.m));
        let g = sample_element(&gens_next, rng, 2);
        let ok = knext.contains(&g).unwrap() && kpp.contains(&g).unwrap();
        rep.check(ok, || Witness::matrix("chain: K'_{m+1} element outside K'(p)", &g.m));
        let g = sample_element(&gens_big, rng, 2);
        let ok = kbig.contains(&g).unwrap() && Pattern::kernel(m).contains(&g);
        rep.check(ok, || Witness::matrix("kernel: K'_{n',m} element outside K_G(p^m)", &g.m));
        let c = eta_conjugate(&ring, &g.m, m as i32);
        let ok = c.map(|c| coarse.contains_matrix(&ring, &c, g.nu)).unwrap_or(false);
        rep.check(ok, || Witness::matrix("eta_coarse: conjugate outside K_n with nu ≡ 1", &g.m));
        if !c.map(|c| knm.contains_matrix(&ring, &c, g.nu)).unwrap_or(false) {
            refined_fail += 1;
            first.get_or_insert(g.m);
        }
    }
    rep.value("eta_refined_trials", trials);
    rep.value("eta_refined_violations", refined_fail);
    if let Some(w) = first {
        rep.value("eta_refined_first_witness", format!("{w:?}"));
    }
    rep
}

/// Parameters `(a_i, b_i, c_i, d_i)` of `u^{-1} Delta(h) u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ForcedShape {
    /// `[[a, b], [c, d]]` per factor.
    pub f: [Mat2; 3],
}

impl ForcedShape {
    /// The shape written out entry by entry.
    pub fn reconstruct(&self, r: &Zpn) -> Mat6 {
        let [a1, b1, c1, d1] = flat(&self.f[0]);
        let [a2, b2, c2, d2] = flat(&self.f[1]);
        let [a3, b3, c3, d3] = flat(&self.f[2]);
        let s = |xs: &[(i64, u64)]| {
            xs.iter().fold(0u64, |acc, &(k, x)| r.add(acc, r.mul(r.from_i64(k), x)))
        };
        let z = 0u64;
        [
            [a1, r.neg(c2), r.neg(c3), s(&[(1, a1), (-1, c2), (-1, d3)]), s(&[(1, a1), (-1, c3), (-1, d2)]), s(&[(1, b1), (-1, c2), (-1, c3)])],
            [r.neg(c1), a2, r.neg(c3), s(&[(1, a2), (-1, c1), (-1, d3)]), s(&[(1, b2), (-1, c1), (-1, c3)]), s(&[(1, a2), (-1, c3), (-1, d1)])],
            [r.neg(c1), r.neg(c2), a3, s(&[(1, b3), (-1, c1), (-1, c2)]), s(&[(1, a3), (-1, c1), (-1, d2)]), s(&[(1, a3), (-1, c2), (-1, d1)])],
            [z, z, c3, d3, c3, c3],
            [z, c2, z, c2, d2, c2],
            [c1, z, z, c1, c1, d1],
        ]
    }
}

fn flat(m: &Mat2) -> [u64; 4] {
    [m[0][0], m[0][1], m[1][0], m[1][1]]
}

/// Extract the `H`-parameters of `g` from `u g u^{-1}`; the reconstruction
/// must reproduce `g`.
pub fn forced_shape(g: &GMatrix) -> Result<ForcedShape, LevelError> {
    let r = g.ring;
    let h = HPoint::project(&GMatrix::u(r).mul(g).mul(&GMatrix::u_inv(r))).ok_or(LevelError::NotForcedShape)?;
    let fs = ForcedShape { f: h.f };
    if fs.reconstruct(&r) != g.m {
        return Err(LevelError::NotForcedShape);
    }
    Ok(fs)
}

/// Random `h` with every factor `≡ I (mod p^e)` and equal determinants.
pub fn sample_h_congruent(ring: Zpn, e: u32, rng: &mut ChaCha8Rng) -> HPoint {
    let pe = ring.p_pow(e);
    let small = |rng: &mut ChaCha8Rng| ring.mul(pe, rng.gen_range(0..ring.q));
    let a1: Mat2 = [
        [ring.add(1 % ring.q, small(rng)), small(rng)],
        [small(rng), ring.add(1 % ring.q, small(rng))],
    ];
    let det = crate::matrix::det2(&ring, &a1);
    let follow = |rng: &mut ChaCha8Rng| -> Mat2 {
        let b = small(rng);
        let c = small(rng);
        let d = ring.add(1 % ring.q, small(rng));
        let a = ring.mul(ring.add(det, ring.mul(b, c)), ring.inv(d).expect("unit"));
        [[a, b], [c, d]]
    };
    let a2 = follow(rng);
    let a3 = follow(rng);
    HPoint::new(ring, [a1, a2, a3]).expect("equal unit determinants")
}

/// Constraint for the forced-shape sampler: entries of `u^{-1} Delta(h) u`
/// are steered towards `K'_{n,hi-1(p)}` (`hi = m + 1`) or `K'_{n,m}` (`hi = m`).
#[derive(Clone, Copy, Debug)]
pub struct ShapeConstraint {
    pub n: u32,
    pub hi: u32,
    /// Probability of relaxing each targeted valuation by one.
    pub loosen: f64,
}

/// Draw `h` in the forced-shape parametrization; `None` when a pivot is not a unit.
pub fn sample_constrained_h(ring: Zpn, c: ShapeConstraint, rng: &mut ChaCha8Rng) -> Option<HPoint> {
    let r = ring;
    let at = |e: u32, rng: &mut ChaCha8Rng| {
        let e = if e > 0 && rng.gen_bool(c.loosen) { e - 1 } else { e };
        r.mul(r.p_pow(e), rng.gen_range(0..r.q))
    };
    let one = 1 % r.q;
    let hi = c.hi;
    let c1 = at(c.n, rng);
    let d1 = r.add(one, at(c.n, rng));
    let c2 = at(hi, rng);
    let c3 = at(hi, rng);
    let b1 = r.add(at(3 * hi, rng), r.add(c2, c3));
    let b2 = r.add(at(hi, rng), r.add(c1, c3));
    let b3 = r.add(at(hi, rng), r.add(c1, c2));
    let a2 = r.add(r.add(d1, c3), at(2 * hi, rng));
    let a3 = r.add(r.add(d1, c2), at(2 * hi, rng));
    let d3 = r.sub(r.sub(a2, c1), at(hi, rng));
    let nu = r.sub(r.mul(a3, d3), r.mul(b3, c3));
    let d2 = r.mul(r.add(nu, r.mul(b2, c2)), r.inv(a2)?);
    let a1 = r.mul(r.add(nu, r.mul(b1, c1)), r.inv(d1)?);
    HPoint::new(r, [[[a1, b1], [c1, d1]], [[a2, b2], [c2, d2]], [[a3, b3], [c3, d3]]]).ok()
}

/// Forward direction of the intersection property on `target` accepted samples:
/// `u^{-1} Delta(h) u ∈ K'_{n,m(p)}` implies membership in `K'_{n,m+1}`,
/// `c2 ≡ c3 ≡ 0` and `a_i ≡ d_i ≡ 1 (mod p^{m+1})`; followed by the reverse
/// inclusion on sampled elements of `K'_{n,m+1}`.
pub fn intersection_check(
    p: u64,
    n: u32,
    m: u32,
    target: u64,
    rng: &mut ChaCha8Rng,
) -> Result<Report, LevelError> {
    if n < 3 * m + 3 || m < 1 {
        return Err(LevelError::Range(format!("need n >= 3m+3 and m >= 1, got n={n} m={m}")));
    }
    let ring = Zpn::new(p, n.max(3 * (m + 1)) + 2);
    let kpp = LevelSpec::new(Family::KprimeP { n, m }, p);
    let knext = LevelSpec::new(Family::Kprime { n, m: m + 1 }, p);
    let mut rep = Report::new(format!("intersection p={p} n={n} m={m}"));
    let c = ShapeConstraint { n, hi: m + 1, loosen: 0.1 };
    let (mut draws, mut accepted) = (0u64, 0u64);
    let cap = target * 1000;
    while accepted < target {
        draws += 1;
        if draws > cap {
            return Err(LevelError::SamplerStarved { accepted, draws });
        }
        let Some(h) = sample_constrained_h(ring, c, rng) else { continue };
        let g = crate::matrix::u_conjugate_of_h(&h);
        if !kpp.contains(&g)? {
            continue;
        }
        accepted += 1;
        rep.check(knext.contains(&g)?, || Witness::matrix("in K'(p) but not K'_{m+1}", &g.m));
        let fs = forced_shape(&g);
        let deduced = match &fs {
            Ok(fs) => {
                let one = 1 % ring.q;
                let e = m + 1;
                ring.congruent(fs.f[1][1][0], 0, e)
                    && ring.congruent(fs.f[2][1][0], 0, e)
                    && fs.f.iter().all(|f| ring.congruent(f[0][0], one, e) && ring.congruent(f[1][1], one, e))
            }
            Err(_) => false,
        };
        rep.check(deduced, || Witness::matrix("entry deductions or round trip fail", &g.m));
    }
    rep.value("draws", draws);
    rep.value("accepted", accepted);
    let gens = generator_set(&knext.pattern()?, ring);
    let reverse = target.min(2000);
    for _ in 0..reverse {
        let g = sample_element(&gens, rng, 2);
        rep.check(kpp.contains(&g)?, || Witness::matrix("K'_{m+1} element outside K'(p)", &g.m));
    }
    rep.value("reverse_samples", reverse);
    Ok(rep)
}
