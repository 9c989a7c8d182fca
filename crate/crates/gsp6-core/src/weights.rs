//! Dominant weights of `C2`/`C3`, dimension formulas and Freudenthal characters.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Series {
    C2,
    C3,
}

impl Series {
    pub fn rank(self) -> usize {
        match self {
            Series::C2 => 2,
            Series::C3 => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("expected {expected} entries, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("entries must be non-negative and weakly decreasing")]
    NotDominant,
}

/// A dominant weight: `l1 >= l2 (>= l3) >= 0`. For `C2` the third slot is 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DominantWeight {
    series: Series,
    e: [i64; 3],
}

impl DominantWeight {
    pub fn new(series: Series, entries: &[i64]) -> Result<Self, WeightError> {
        let n = series.rank();
        if entries.len() != n {
            return Err(WeightError::WrongLength { expected: n, got: entries.len() });
        }
        if entries.windows(2).any(|w| w[0] < w[1]) || entries[n - 1] < 0 {
            return Err(WeightError::NotDominant);
        }
        let mut e = [0; 3];
        e[..n].copy_from_slice(entries);
        Ok(DominantWeight { series, e })
    }

    pub fn c3(l1: i64, l2: i64, l3: i64) -> Result<Self, WeightError> {
        Self::new(Series::C3, &[l1, l2, l3])
    }

    pub fn c2(m1: i64, m2: i64) -> Result<Self, WeightError> {
        Self::new(Series::C2, &[m1, m2])
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn entries(&self) -> &[i64] {
        &self.e[..self.series.rank()]
    }

    /// Zero-padded to length 3.
    pub fn padded(&self) -> [i64; 3] {
        self.e
    }

    pub fn size(&self) -> i64 {
        self.e.iter().sum()
    }

    /// Fundamental-weight coordinates `(a, b, c)`; `c = 0` for `C2`.
    pub fn abc(&self) -> (i64, i64, i64) {
        match self.series {
            Series::C3 => (self.e[0] - self.e[1], self.e[1] - self.e[2], self.e[2]),
            Series::C2 => (self.e[0] - self.e[1], self.e[1], 0),
        }
    }

    /// All dominant weights of the series with `|w| <= bound`.
    pub fn all_up_to(series: Series, bound: i64) -> Vec<DominantWeight> {
        let mut out = Vec::new();
        for l1 in 0..=bound {
            for l2 in 0..=l1 {
                if series == Series::C2 {
                    if l1 + l2 <= bound {
                        out.push(Self::c2(l1, l2).unwrap());
                    }
                    continue;
                }
                for l3 in 0..=l2 {
                    if l1 + l2 + l3 <= bound {
                        out.push(Self::c3(l1, l2, l3).unwrap());
                    }
                }
            }
        }
        out
    }

    /// All `C3` weights with `l1 <= bound`.
    pub fn c3_with_top_at_most(bound: i64) -> Vec<DominantWeight> {
        let mut out = Vec::new();
        for l1 in 0..=bound {
            for l2 in 0..=l1 {
                for l3 in 0..=l2 {
                    out.push(Self::c3(l1, l2, l3).unwrap());
                }
            }
        }
        out
    }
}

impl core::fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self.series {
            Series::C2 => write!(f, "({},{})", self.e[0], self.e[1]),
            Series::C3 => write!(f, "({},{},{})", self.e[0], self.e[1], self.e[2]),
        }
    }
}

/// The dimension polynomials, divided exactly by 6 (`C2`) or 720 (`C3`).
pub fn closed_form_dimension(w: &DominantWeight) -> u128 {
    let (a, b, c) = w.abc();
    let (a, b, c) = (a as i128, b as i128, c as i128);
    let (num, den) = match w.series() {
        Series::C2 => ((a + 1) * (b + 1) * (a + b + 2) * (a + 2 * b + 3), 6),
        Series::C3 => (
            (a + 1)
                * (a + 2 * (b + c) + 5)
                * (a + b + 2)
                * (a + b + 2 * c + 4)
                * (b + 1)
                * (b + 2 * c + 3)
                * (a + b + c + 3)
                * (b + c + 2)
                * (c + 1),
            720,
        ),
    };
    assert_eq!(num % den, 0, "dimension polynomial not divisible");
    (num / den) as u128
}

/// Positive roots of `C_n` in the epsilon basis.
pub fn positive_roots(series: Series) -> Vec<[i64; 3]> {
    let n = series.rank();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut a = [0; 3];
            a[i] = 1;
            a[j] = -1;
            out.push(a);
            let mut b = [0; 3];
            b[i] = 1;
            b[j] = 1;
            out.push(b);
        }
        let mut c = [0; 3];
        c[i] = 2;
        out.push(c);
    }
    out
}

pub fn rho(series: Series) -> [i64; 3] {
    match series {
        Series::C2 => [2, 1, 0],
        Series::C3 => [3, 2, 1],
    }
}

fn dot(a: &[i64; 3], b: &[i64; 3]) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Weyl's product over positive roots of `(l + rho, a) / (rho, a)`.
pub fn weyl_dimension(w: &DominantWeight) -> u128 {
    let rho = rho(w.series());
    let lr = add3(&w.padded(), &rho);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for a in positive_roots(w.series()) {
        num *= dot(&lr, &a) as u128;
        den *= dot(&rho, &a) as u128;
    }
    assert_eq!(num % den, 0);
    num / den
}

fn add3(a: &[i64; 3], b: &[i64; 3]) -> [i64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Dominant representative under signed permutations.
pub fn dominant_rep(v: &[i64; 3], series: Series) -> [i64; 3] {
    let n = series.rank();
    let mut a: Vec<i64> = v[..n].iter().map(|x| x.abs()).collect();
    a.sort_unstable_by(|x, y| y.cmp(x));
    let mut out = [0; 3];
    out[..n].copy_from_slice(&a);
    out
}

/// Whether `lambda - mu` is a non-negative combination of simple roots.
pub fn dominates(lambda: &[i64; 3], mu: &[i64; 3], series: Series) -> bool {
    let n = series.rank();
    let d: Vec<i64> = (0..n).map(|i| lambda[i] - mu[i]).collect();
    let total: i64 = d.iter().sum();
    if total < 0 || total % 2 != 0 {
        return false;
    }
    let mut partial = 0;
    for x in d.iter().take(n - 1) {
        partial += x;
        if partial < 0 {
            return false;
        }
    }
    true
}

/// Sparse map from torus exponents to multiplicities, plus a `nu` twist.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FormalCharacter {
    pub terms: BTreeMap<[i64; 3], i64>,
    pub multiplier_twist: i64,
}

impl FormalCharacter {
    pub fn add_term(&mut self, w: [i64; 3], m: i64) {
        let e = self.terms.entry(w).or_insert(0);
        *e += m;
        if *e == 0 {
            self.terms.remove(&w);
        }
    }

    pub fn get(&self, w: &[i64; 3]) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn total(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Invariance under all signed permutations of the first `rank` coordinates.
    pub fn is_weyl_invariant(&self, series: Series) -> bool {
        self.terms.iter().all(|(w, &m)| {
            signed_permutations(w, series).iter().all(|v| self.get(v) == m)
        })
    }
}

/// The Weyl-group orbit of `w` (distinct elements).
pub fn signed_permutations(w: &[i64; 3], series: Series) -> Vec<[i64; 3]> {
    let n = series.rank();
    let perms: &[[usize; 3]] = if n == 2 {
        &[[0, 1, 2], [1, 0, 2]]
    } else {
        &[[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
    };
    let mut out = Vec::new();
    for p in perms {
        for signs in 0..(1u32 << n) {
            let mut v = [0; 3];
            for i in 0..n {
                let s = if signs >> i & 1 == 1 { -1 } else { 1 };
                v[i] = s * w[p[i]];
            }
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

/// Dominant weights below `lambda`, ordered from the top down.
fn dominant_weights_below(lambda: &DominantWeight) -> Vec<[i64; 3]> {
    let s = lambda.series();
    let n = s.rank();
    let l = lambda.padded();
    let top = l[0];
    let mut out = Vec::new();
    for a in 0..=top {
        for b in 0..=a {
            let cs: Vec<i64> = if n == 3 { (0..=b).collect() } else { alloc::vec![0] };
            for c in cs {
                let mu = [a, b, c];
                if dominates(&l, &mu, s) {
                    out.push(mu);
                }
            }
        }
    }
    // `|mu + rho|^2` strictly decreases down the dominance order; the
    // coordinate sum does not (roots `e_i - e_j` keep it).
    let r = rho(s);
    out.sort_by_key(|mu| {
        let v = add3(mu, &r);
        core::cmp::Reverse(dot(&v, &v))
    });
    out
}

/// Freudenthal's recursion for the dominant multiplicities of `lambda`.
pub fn dominant_multiplicities(lambda: &DominantWeight) -> BTreeMap<[i64; 3], i64> {
    let s = lambda.series();
    let l = lambda.padded();
    let rho = rho(s);
    let roots = positive_roots(s);
    let lr = add3(&l, &rho);
    let norm_top = dot(&lr, &lr);
    let mut mult: BTreeMap<[i64; 3], i64> = BTreeMap::new();
    let lookup = |mult: &BTreeMap<[i64; 3], i64>, v: &[i64; 3]| -> i64 {
        let d = dominant_rep(v, s);
        if !dominates(&l, &d, s) {
            return 0;
        }
        mult.get(&d).copied().unwrap_or(0)
    };
    for mu in dominant_weights_below(lambda) {
        if mu == l {
            mult.insert(mu, 1);
            continue;
        }
        let mr = add3(&mu, &rho);
        let denom = norm_top - dot(&mr, &mr);
        let mut num = 0i64;
        for a in &roots {
            let mut j = 1;
            loop {
                let v = [mu[0] + j * a[0], mu[1] + j * a[1], mu[2] + j * a[2]];
                let d = dominant_rep(&v, s);
                if !dominates(&l, &d, s) {
                    break;
                }
                num += lookup(&mult, &v) * dot(&v, a);
                j += 1;
            }
        }
        let num = 2 * num;
        assert!(denom > 0 && num % denom == 0, "Freudenthal division not exact");
        let m = num / denom;
        if m != 0 {
            mult.insert(mu, m);
        }
    }
    mult
}

/// The full character of `V^lambda` (twist 0).
pub fn character(lambda: &DominantWeight) -> FormalCharacter {
    let s = lambda.series();
    let mut ch = FormalCharacter::default();
    for (mu, m) in dominant_multiplicities(lambda) {
        for v in signed_permutations(&mu, s) {
            ch.add_term(v, m);
        }
    }
    ch
}

pub fn weight_multiplicity(lambda: &DominantWeight, target: &[i64]) -> i64 {
    let s = lambda.series();
    let mut t = [0; 3];
    for (i, x) in target.iter().take(s.rank()).enumerate() {
        t[i] = *x;
    }
    let d = dominant_rep(&t, s);
    if !dominates(&lambda.padded(), &d, s) {
        return 0;
    }
    dominant_multiplicities(lambda).get(&d).copied().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_dimensions() {
        assert_eq!(closed_form_dimension(&DominantWeight::c3(0, 0, 0).unwrap()), 1);
        assert_eq!(closed_form_dimension(&DominantWeight::c3(1, 0, 0).unwrap()), 6);
        assert_eq!(closed_form_dimension(&DominantWeight::c3(1, 1, 0).unwrap()), 14);
        assert_eq!(closed_form_dimension(&DominantWeight::c3(1, 1, 1).unwrap()), 14);
        assert_eq!(closed_form_dimension(&DominantWeight::c2(1, 1).unwrap()), 5);
        assert_eq!(weyl_dimension(&DominantWeight::c2(1, 0).unwrap()), 4);
    }

    #[test]
    fn rejects_non_dominant() {
        assert_eq!(DominantWeight::c3(1, 2, 0), Err(WeightError::NotDominant));
        assert!(DominantWeight::c2(1, -1).is_err());
        assert!(DominantWeight::new(Series::C2, &[1, 0, 0]).is_err());
    }

    #[test]
    fn small_characters() {
        let ch = character(&DominantWeight::c3(1, 1, 0).unwrap());
        assert_eq!(ch.terms.len(), 13);
        assert_eq!(ch.get(&[0, 0, 0]), 2);
        assert_eq!(ch.total(), 14);
        let ch = character(&DominantWeight::c2(1, 1).unwrap());
        assert_eq!(ch.terms.len(), 5);
        assert_eq!(ch.get(&[0, 0, 0]), 1);
        let w = DominantWeight::c3(1, 0, 0).unwrap();
        assert_eq!(weight_multiplicity(&w, &[1, 0, 0]), 1);
        assert_eq!(weight_multiplicity(&w, &[2, 0, 0]), 0);
    }
}
