//! Chevalley generators of `sp6` in the basis `e1,e2,e3,f3,f2,f1`, their
//! derivation action on tensors, torus weights, and Casimir operators.

use crate::matrix::{j_int, IntMat6, H_SLOTS};
use crate::tensor::{TensorElement, TensorError};
use crate::weights::{positive_roots, Series};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LieKind {
    /// Root vector `X_alpha` (negative roots are transposes of positive ones).
    Root([i64; 3]),
    /// `E_ii - E_{5-i,5-i}`.
    Cartan(usize),
    /// Raising operator of the `i`-th `GL2` factor of `H` (`f_i -> e_i`).
    HRaising(usize),
    HLowering(usize),
    /// Raising operator of `sp4` acting on `e1, e2, f2, f1`.
    Sp4Raising([i64; 3]),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieGenerator {
    pub kind: LieKind,
    pub matrix: IntMat6,
}

/// Torus weight of a basis position: `(epsilon part, nu exponent)`.
pub fn position_weight(i: usize) -> ([i64; 3], i64) {
    let mut w = [0; 3];
    if i < 3 {
        w[i] = 1;
        (w, 0)
    } else {
        w[5 - i] = -1;
        (w, 1)
    }
}

fn unit(i: usize, j: usize) -> IntMat6 {
    let mut m = [[0i64; 6]; 6];
    m[i][j] = 1;
    m
}

fn add_into(a: &mut IntMat6, b: &IntMat6, s: i64) {
    for i in 0..6 {
        for j in 0..6 {
            a[i][j] += s * b[i][j];
        }
    }
}

fn matmul(a: &IntMat6, b: &IntMat6) -> IntMat6 {
    let mut o = [[0i64; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            o[i][j] = (0..6).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    o
}

fn transpose(a: &IntMat6) -> IntMat6 {
    let mut o = [[0i64; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            o[j][i] = a[i][j];
        }
    }
    o
}

/// `X^t J + J X`; zero exactly on `sp6`, `dnu * J` on `gsp6`.
pub fn symplectic_defect(x: &IntMat6) -> IntMat6 {
    let j = j_int();
    let mut d = matmul(&transpose(x), &j);
    add_into(&mut d, &matmul(&j, x), 1);
    d
}

/// Derivative of the multiplier along `x`.
pub fn dnu(x: &IntMat6) -> i64 {
    symplectic_defect(x)[0][5]
}

/// The matrix `E_ij + s E_{5-j,5-i}` lying in `sp6`.
pub fn sp_element_through(i: usize, j: usize) -> IntMat6 {
    let (pi, pj) = (5 - j, 5 - i);
    if (pi, pj) == (i, j) {
        return unit(i, j);
    }
    for s in [1, -1] {
        let mut x = unit(i, j);
        add_into(&mut x, &unit(pi, pj), s);
        if symplectic_defect(&x) == [[0; 6]; 6] {
            return x;
        }
    }
    unreachable!("every matrix unit has a symplectic partner")
}

/// Root vector for `alpha` (epsilon coordinates), or `None` if not a root.
pub fn root_vector(alpha: [i64; 3]) -> Option<IntMat6> {
    let positive = positive_roots(Series::C3);
    let (base, neg) = if positive.contains(&alpha) {
        (alpha, false)
    } else if positive.contains(&[-alpha[0], -alpha[1], -alpha[2]]) {
        ([-alpha[0], -alpha[1], -alpha[2]], true)
    } else {
        return None;
    };
    for i in 0..6 {
        for j in 0..6 {
            if i == j {
                continue;
            }
            let (wi, _) = position_weight(i);
            let (wj, _) = position_weight(j);
            let d = [wi[0] - wj[0], wi[1] - wj[1], wi[2] - wj[2]];
            if d == base {
                let x = sp_element_through(i, j);
                return Some(if neg { transpose(&x) } else { x });
            }
        }
    }
    None
}

pub fn cartan(i: usize) -> IntMat6 {
    let mut h = unit(i, i);
    add_into(&mut h, &unit(5 - i, 5 - i), -1);
    h
}

pub fn h_raising(factor: usize) -> LieGenerator {
    let (x, y) = H_SLOTS[factor];
    LieGenerator { kind: LieKind::HRaising(factor), matrix: unit(x, y) }
}

pub fn h_lowering(factor: usize) -> LieGenerator {
    let (x, y) = H_SLOTS[factor];
    LieGenerator { kind: LieKind::HLowering(factor), matrix: unit(y, x) }
}

/// Positive roots of the `sp4` on `e1, e2, f2, f1`.
pub const SP4_POSITIVE: [[i64; 3]; 4] = [[1, -1, 0], [1, 1, 0], [2, 0, 0], [0, 2, 0]];

pub fn sp4_raising() -> Vec<LieGenerator> {
    SP4_POSITIVE
        .iter()
        .map(|&a| LieGenerator {
            kind: LieKind::Sp4Raising(a),
            matrix: root_vector(a).expect("sp4 root"),
        })
        .collect()
}

pub fn positive_root_generators() -> Vec<LieGenerator> {
    positive_roots(Series::C3)
        .into_iter()
        .map(|a| LieGenerator { kind: LieKind::Root(a), matrix: root_vector(a).unwrap() })
        .collect()
}

pub fn negative_root_generators() -> Vec<LieGenerator> {
    positive_roots(Series::C3)
        .into_iter()
        .map(|a| {
            let n = [-a[0], -a[1], -a[2]];
            LieGenerator { kind: LieKind::Root(n), matrix: root_vector(n).unwrap() }
        })
        .collect()
}

pub fn all_generators() -> Vec<LieGenerator> {
    let mut out = positive_root_generators();
    out.extend(negative_root_generators());
    for i in 0..3 {
        out.push(LieGenerator { kind: LieKind::Cartan(i), matrix: cartan(i) });
        out.push(h_raising(i));
        out.push(h_lowering(i));
    }
    out.extend(sp4_raising());
    out
}

/// Derivation action of a matrix on every wedge factor of every slot; the
/// twist contributes `twist * dnu(x)`.
pub fn apply_lie(x: &IntMat6, v: &TensorElement) -> TensorElement {
    let mut entries = Vec::new();
    for a in 0..6 {
        for b in 0..6 {
            if x[a][b] != 0 {
                entries.push((a, b, x[a][b] as i128));
            }
        }
    }
    let mut out = TensorElement { terms: BTreeMap::new(), ..v.clone() };
    let tw = v.twist as i128 * dnu(x) as i128;
    for (key, &c) in &v.terms {
        if tw != 0 {
            out.add_term(key.clone(), c * tw);
        }
        for (s, &m) in key.iter().enumerate() {
            for &(a, b, xab) in &entries {
                if m >> b & 1 == 0 {
                    continue;
                }
                if a == b {
                    out.add_term(key.clone(), c * xab);
                    continue;
                }
                if m >> a & 1 == 1 {
                    continue;
                }
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                let between = ((m >> (lo + 1)) & ((1u8 << (hi - lo - 1)).wrapping_sub(1))).count_ones();
                let sign = if between.is_multiple_of(2) { 1 } else { -1 };
                let mut nk = key.clone();
                nk[s] = (m & !(1 << b)) | (1 << a);
                out.add_term(nk, c * xab * sign);
            }
        }
    }
    out
}

/// `x^n / n!`, failing if the division is not exact.
pub fn apply_divided_power(
    x: &IntMat6,
    v: &TensorElement,
    n: u32,
) -> Result<TensorElement, TensorError> {
    let mut w = v.clone();
    let mut fact: i128 = 1;
    for k in 1..=n {
        w = apply_lie(x, &w);
        fact *= k as i128;
    }
    if v.modulus.is_some() {
        // Over Z/q only exact integer lifts are meaningful.
        return w.lift().div_exact(fact).map(|t| t.reduce(v.modulus.unwrap()));
    }
    w.div_exact(fact)
}

pub fn apply_generator(
    gen: &LieGenerator,
    v: &TensorElement,
    divided_power: u32,
) -> Result<TensorElement, TensorError> {
    apply_divided_power(&gen.matrix, v, divided_power.max(1))
}

/// Torus weight of one key (epsilon part, nu exponent), ignoring the twist.
pub fn key_weight(key: &[u8]) -> ([i64; 3], i64) {
    let mut w = [0i64; 3];
    let mut nu = 0;
    for &m in key {
        for i in 0..6 {
            if m >> i & 1 == 1 {
                let (pw, pn) = position_weight(i);
                for k in 0..3 {
                    w[k] += pw[k];
                }
                nu += pn;
            }
        }
    }
    (w, nu)
}

/// Evaluation of a weight on `S = diag(x^3, x^2, x^2, x, x, 1)`.
pub fn s_weight(w: &[i64; 3], nu: i64) -> i64 {
    3 * w[0] + 2 * w[1] + 2 * w[2] + 3 * nu
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GradedWeight {
    pub torus_weight: [i64; 3],
    pub multiplier_twist: i64,
    pub s_weight: i64,
    /// `(k1, k2, k3)` for `Sym^k1 ⊠ Sym^k2 ⊠ Sym^k3`.
    pub h_weight: [i64; 3],
    pub det_twist: i64,
}

impl GradedWeight {
    pub fn of(w: [i64; 3], nu: i64) -> Self {
        GradedWeight {
            torus_weight: w,
            multiplier_twist: nu,
            s_weight: s_weight(&w, nu),
            h_weight: w,
            det_twist: nu,
        }
    }
}

/// The common weight of all terms (twist included), if `v` is a weight vector.
pub fn weight_of(v: &TensorElement) -> Option<GradedWeight> {
    let mut it = v.terms.keys().map(|k| key_weight(k));
    let first = it.next()?;
    if it.any(|w| w != first) {
        return None;
    }
    Some(GradedWeight::of(first.0, first.1 + v.twist))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HighestCheck {
    pub highest: bool,
    pub weight: Option<GradedWeight>,
}

/// Whether all three `H`-raising operators kill `v` and `v` is a weight vector.
pub fn is_h_highest(v: &TensorElement) -> HighestCheck {
    let weight = weight_of(v);
    let killed = (0..3).all(|i| apply_lie(&h_raising(i).matrix, v).is_zero());
    HighestCheck { highest: killed && weight.is_some() && !v.is_zero(), weight }
}

/// Twice the `sp4` Casimir for the trace form; on `V^mu` it is the scalar
/// `mu1 (mu1 + 4) + mu2 (mu2 + 2)`.
pub fn sp4_casimir_twice(v: &TensorElement) -> TensorElement {
    let mut out = TensorElement { terms: BTreeMap::new(), ..v.clone() };
    let mut acc = |t: TensorElement, s: i128| {
        for (k, c) in t.terms {
            out.add_term(k, c * s);
        }
    };
    for i in 0..2 {
        let h = cartan(i);
        acc(apply_lie(&h, &apply_lie(&h, v)), 1);
    }
    for a in SP4_POSITIVE {
        let x = root_vector(a).unwrap();
        let y = transpose(&x);
        let long = a.iter().any(|&c| c.abs() == 2);
        let s = if long { 2 } else { 1 };
        acc(apply_lie(&x, &apply_lie(&y, v)), s);
        acc(apply_lie(&y, &apply_lie(&x, v)), s);
    }
    out
}

pub fn sp4_casimir_value_twice(mu1: i64, mu2: i64) -> i128 {
    (mu1 * (mu1 + 4) + mu2 * (mu2 + 2)) as i128
}

/// Twice the Casimir of the `SL2` factor on `e3, f3`.
pub fn sl2_third_casimir_twice(v: &TensorElement) -> TensorElement {
    let h = cartan(2);
    let x = unit(2, 3);
    let y = unit(3, 2);
    let mut out = apply_lie(&h, &apply_lie(&h, v));
    for t in [apply_lie(&x, &apply_lie(&y, v)), apply_lie(&y, &apply_lie(&x, v))] {
        for (k, c) in t.terms {
            out.add_term(k, 2 * c);
        }
    }
    out
}

/// Torus weight restricted to the `sp4` coordinates `(eps1, eps2)`.
pub fn sp4_torus_weight(v: &TensorElement) -> Option<[i64; 2]> {
    weight_of(v).map(|w| [w.torus_weight[0], w.torus_weight[1]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{e, f};

    #[test]
    fn all_root_vectors_are_symplectic() {
        for g in all_generators() {
            assert_eq!(symplectic_defect(&g.matrix), [[0; 6]; 6], "{:?}", g.kind);
        }
        assert_eq!(positive_roots(Series::C3).len(), 9);
    }

    #[test]
    fn raising_factor_one() {
        let r = h_raising(0);
        let out = apply_generator(&r, &TensorElement::basis(f(1)), 1).unwrap();
        assert_eq!(out, TensorElement::basis(e(1)));
        assert!(apply_generator(&r, &TensorElement::basis(e(1)), 1).unwrap().is_zero());
    }

    #[test]
    fn casimir_on_standard() {
        let v = TensorElement::basis(e(1));
        let c = sp4_casimir_twice(&v);
        assert_eq!(c, v.scale(5));
        let inv = TensorElement::wedge(&[e(1), f(1)])
            .add(&TensorElement::wedge(&[e(2), f(2)]))
            .unwrap();
        assert!(sp4_casimir_twice(&inv).is_zero());
    }

    #[test]
    fn divided_square_on_e1e1() {
        let v = TensorElement::basis(e(1)).tensor_power(2);
        let fl = root_vector([-2, 0, 0]).unwrap();
        let out = apply_divided_power(&fl, &v, 2).unwrap();
        assert_eq!(out, TensorElement::basis(f(1)).tensor_power(2));
    }
}
