//! Explicit `H`-highest weight vectors, their `S`-torus grading, the action
//! of `u^{-1}` followed by the normalized `eta` scaling, Klingen invariance of
//! `e1^k`, and divided-power integrality.

use crate::branching::top_edge;
use crate::lie::{apply_divided_power, apply_lie, negative_root_generators, sp4_casimir_twice, sp4_raising};
use crate::matrix::{u_int, u_inv_int, GMatrix, ETA_EXP};
use crate::tensor::{apply_matrix, apply_gmatrix, e, f, Key, TensorElement, TensorError};
use crate::weights::{character, DominantWeight};
use crate::zp::Zpn;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

fn wedge(ix: &[usize]) -> TensorElement {
    TensorElement::wedge(ix)
}

fn lin(parts: &[(i128, &[usize])]) -> TensorElement {
    let mut out = TensorElement::zero(vec![parts[0].1.len() as u8]);
    for &(c, ix) in parts {
        out = out.add(&wedge(ix).scale(c)).expect("same shape");
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicVectors {
    pub w: TensorElement,
    pub x: TensorElement,
    pub y: TensorElement,
    pub z: TensorElement,
    pub x_prime: TensorElement,
    pub y_prime: TensorElement,
    pub z_prime: TensorElement,
}

pub fn basic_vectors() -> BasicVectors {
    BasicVectors {
        w: TensorElement::basis(e(1)),
        x: lin(&[(1, &[e(1), f(1)]), (-1, &[e(2), f(2)])]),
        y: lin(&[(1, &[e(2), f(2)]), (-1, &[e(3), f(3)])]),
        z: lin(&[(1, &[e(1), e(2), f(2)]), (-1, &[e(1), e(3), f(3)])]),
        x_prime: lin(&[(2, &[e(1), e(2)]), (-1, &[e(1), e(3)])]),
        y_prime: lin(&[(1, &[e(1), e(2)]), (-1, &[e(1), e(3)])]),
        z_prime: wedge(&[e(1), e(2), e(3)]).scale(2),
    }
}

impl BasicVectors {
    /// Fault injection for the verification harness: `X'` with its sign flipped.
    pub fn with_flipped_x_prime(mut self) -> Self {
        self.x_prime = self.x_prime.scale(-1);
        self
    }
}

/// `W^a ⊗ X^b ⊗ Y^c ⊗ Z^d` (or the primed variant) in the ambient tensor product.
pub fn cartan_tensor(a: usize, b: usize, c: usize, d: usize, primed: bool) -> TensorElement {
    let v = basic_vectors();
    let (x, y, z) = if primed { (v.x_prime, v.y_prime, v.z_prime) } else { (v.x, v.y, v.z) };
    let parts = [v.w.tensor_power(a), x.tensor_power(b), y.tensor_power(c), z.tensor_power(d)];
    let mut out = TensorElement::scalar(1);
    for p in &parts {
        out = out.tensor(p).expect("integer tensors");
    }
    out
}

/// `(mu1 - mu2 - l3, l2 - l3 - mu2, mu2, l3)`, if all are non-negative.
pub fn cartan_exponents(lambda: &DominantWeight, mu: &DominantWeight) -> Option<[usize; 4]> {
    let l = lambda.padded();
    let m = mu.padded();
    let ex = [m[0] - m[1] - l[2], l[1] - l[2] - m[1], m[1], l[2]];
    if ex.iter().any(|&x| x < 0) {
        return None;
    }
    Some(ex.map(|x| x as usize))
}

pub fn highest_vector(lambda: &DominantWeight, mu: &DominantWeight, primed: bool) -> Option<TensorElement> {
    let [a, b, c, d] = cartan_exponents(lambda, mu)?;
    Some(cartan_tensor(a, b, c, d, primed))
}

/// All `(mu, v)` on the `k = l1 - l2 + l3` edge of the region.
pub fn edge_vectors(lambda: &DominantWeight) -> Vec<(DominantWeight, TensorElement)> {
    top_edge(lambda)
        .into_iter()
        .filter_map(|mu| highest_vector(lambda, &mu, false).map(|v| (mu, v)))
        .collect()
}

/// `e1^(l1-l2) ⊗ (e1^e2)^(l2-l3) ⊗ (e1^e2^e3)^l3`, the highest weight vector
/// of the fundamental realization.
pub fn fundamental_highest(lambda: &DominantWeight) -> TensorElement {
    let l = lambda.padded();
    let parts = [
        wedge(&[e(1)]).tensor_power((l[0] - l[1]) as usize),
        wedge(&[e(1), e(2)]).tensor_power((l[1] - l[2]) as usize),
        wedge(&[e(1), e(2), e(3)]).tensor_power(l[2] as usize),
    ];
    let mut out = TensorElement::scalar(1);
    for p in &parts {
        out = out.tensor(p).unwrap();
    }
    out
}

/// `S`-weight of a key with the given total multiplier twist.
pub fn key_s_weight(key: &[u8], twist: i64) -> i64 {
    let mut s = 3 * twist;
    for &m in key {
        for (i, &w) in ETA_EXP.iter().enumerate() {
            if m >> i & 1 == 1 {
                s += w as i64;
            }
        }
    }
    s
}

/// Multiplier twist of the `lambda`-realization inside tensors of degree `|lambda|`.
pub fn realization_twist(lambda: &DominantWeight) -> i64 {
    -lambda.size()
}

/// `[-3|lambda|, -(l2 + l3)]`.
pub fn s_range(lambda: &DominantWeight) -> (i64, i64) {
    let l = lambda.padded();
    (-3 * lambda.size(), -(l[1] + l[2]))
}

/// Split `v` into `S`-eigencomponents; `extra_twist` is added to `v.twist`.
pub fn graded_weights(v: &TensorElement, extra_twist: i64) -> BTreeMap<i64, TensorElement> {
    let t = v.twist + extra_twist;
    v.split_by(|k| key_s_weight(k, t))
}

pub fn s_top_projection(v: &TensorElement, lambda: &DominantWeight) -> TensorElement {
    let top = s_range(lambda).1;
    graded_weights(v, realization_twist(lambda))
        .remove(&top)
        .unwrap_or_else(|| TensorElement { terms: BTreeMap::new(), ..v.clone() })
}

/// The exponent `m (-s - (l2 + l3))` of `p` applied to the weight-`s` part.
pub fn grading_exponent(s: i64, lambda: &DominantWeight, m: u32) -> i64 {
    m as i64 * (-s + s_range(lambda).1)
}

/// Multiply each `S`-component by `p^{grading_exponent}` over `ring`.
pub fn eta_normalized_scale(
    v: &TensorElement,
    lambda: &DominantWeight,
    m: u32,
    ring: &Zpn,
) -> Result<TensorElement, TensorError> {
    let (lo, hi) = s_range(lambda);
    let q = ring.q as i128;
    let mut out = TensorElement { terms: BTreeMap::new(), ..v.clone() };
    out.modulus = Some(q);
    for (s, comp) in graded_weights(v, realization_twist(lambda)) {
        if s < lo || s > hi {
            return Err(TensorError::SWeightOutOfRange { s, lo, hi });
        }
        let ex = grading_exponent(s, lambda, m);
        let factor = if ex as u64 >= ring.n as u64 { 0 } else { ring.p_pow(ex as u32) as i128 };
        for (k, c) in comp.terms {
            out.add_term(k, c.rem_euclid(q) * factor);
        }
    }
    Ok(out)
}

fn widen(m: &[[i64; 6]; 6]) -> [[i128; 6]; 6] {
    m.map(|r| r.map(|x| x as i128))
}

/// Apply `u^{-1}` (`direction < 0`) or `u` (`direction > 0`).
pub fn u_conjugate(v: &TensorElement, direction: i32) -> TensorElement {
    let g = if direction < 0 { u_inv_int() } else { u_int() };
    apply_matrix(&widen(&g), v).expect("u is unipotent")
}

/// `p^{-m(l2+l3)} eta^{-m} u^{-1} v` modulo `p^m`, realized as graded scaling.
pub fn normalized_limit(
    v: &TensorElement,
    lambda: &DominantWeight,
    m: u32,
    p: u64,
) -> Result<TensorElement, TensorError> {
    eta_normalized_scale(&u_conjugate(v, -1), lambda, m, &Zpn::new(p, m))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignTerm {
    pub key: Key,
    pub computed: i128,
    pub reference: i128,
}

impl SignTerm {
    pub fn agrees(&self) -> bool {
        self.computed == self.reference
    }

    pub fn same_up_to_sign(&self) -> bool {
        self.computed.abs() == self.reference.abs()
    }
}

/// Term-by-term comparison of a computed integer vector with a reference.
pub fn sign_report(computed: &TensorElement, reference: &TensorElement) -> Vec<SignTerm> {
    let mut keys: Vec<Key> = computed.terms.keys().chain(reference.terms.keys()).cloned().collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|k| SignTerm { computed: computed.coeff(&k), reference: reference.coeff(&k), key: k })
        .collect()
}

/// Number of keys of the fundamental realization at each `S`-weight,
/// by convolution over slots (with the realization twist applied).
pub fn s_weight_profile(lambda: &DominantWeight) -> BTreeMap<i64, u128> {
    let l = lambda.padded();
    let slot_profile = |d: u32| {
        let mut h: BTreeMap<i64, u128> = BTreeMap::new();
        for m in 0u8..64 {
            if m.count_ones() == d {
                *h.entry(key_s_weight(&[m], 0)).or_insert(0) += 1;
            }
        }
        h
    };
    let mut acc: BTreeMap<i64, u128> = BTreeMap::from([(3 * realization_twist(lambda), 1)]);
    for (d, count) in [(1, l[0] - l[1]), (2, l[1] - l[2]), (3, l[2])] {
        let sp = slot_profile(d);
        for _ in 0..count {
            let mut next = BTreeMap::new();
            for (&a, &x) in &acc {
                for (&b, &y) in &sp {
                    *next.entry(a + b).or_insert(0) += x * y;
                }
            }
            acc = next;
        }
    }
    acc
}

/// Every key of the fundamental realization (only sensible for small `lambda`).
pub fn realization_keys(lambda: &DominantWeight) -> Vec<Key> {
    let l = lambda.padded();
    let mut degrees = Vec::new();
    degrees.extend(core::iter::repeat_n(1u32, (l[0] - l[1]) as usize));
    degrees.extend(core::iter::repeat_n(2u32, (l[1] - l[2]) as usize));
    degrees.extend(core::iter::repeat_n(3u32, l[2] as usize));
    let mut keys: Vec<Key> = vec![Vec::new()];
    for d in degrees {
        let masks: Vec<u8> = (0u8..64).filter(|m| m.count_ones() == d).collect();
        let mut next = Vec::with_capacity(keys.len() * masks.len());
        for k in &keys {
            for &m in &masks {
                let mut nk = k.clone();
                nk.push(m);
                next.push(nk);
            }
        }
        keys = next;
    }
    keys
}

/// `S`-weights of `V^lambda` itself, read from its character.
pub fn character_s_weights(lambda: &DominantWeight) -> BTreeMap<i64, i64> {
    let total = lambda.size();
    let mut out = BTreeMap::new();
    for (w, &mult) in &character(lambda).terms {
        let sum: i64 = w.iter().sum();
        let c = (total - sum) / 2 - total;
        *out.entry(3 * w[0] + 2 * w[1] + 2 * w[2] + 3 * c).or_insert(0) += mult;
    }
    out
}

/// `e1^{⊗k}` with multiplier twist `-k`.
pub fn klingen_vector(k: usize) -> TensorElement {
    TensorElement::basis(e(1)).tensor_power(k).with_twist(-(k as i64))
}

/// Whether `g` fixes `e1^{⊗k} ⊗ nu^{-k}` exactly over its ring.
pub fn klingen_invariance(k: usize, g: &GMatrix) -> bool {
    let v = klingen_vector(k);
    match apply_gmatrix(g, &v) {
        Ok(w) => w == v.reduce(g.ring.q as i128),
        Err(_) => false,
    }
}

/// `diag(nu(A), A, 1)` for a similitude `A` of the middle four coordinates.
pub fn klingen_levi(ring: Zpn, a: &[[u64; 4]; 4]) -> Option<GMatrix> {
    let mut m = [[0u64; 6]; 6];
    for i in 0..4 {
        for j in 0..4 {
            m[i + 1][j + 1] = a[i][j];
        }
    }
    m[5][5] = 1;
    // nu(A) is read off the (e2, f2) pairing.
    let nu = (0..4).fold(0u64, |acc, k| {
        let j4 = [1i64, 1, -1, -1];
        ring.add(acc, ring.mul(ring.mul(a[k][0], a[3 - k][3]), ring.from_i64(j4[k])))
    });
    m[0][0] = nu;
    GMatrix::new(ring, m).ok()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KostantOutcome {
    pub words: u64,
    /// First word (negative root index, divided power) with an inexact division.
    pub failure: Option<Vec<(usize, u32)>>,
}

impl KostantOutcome {
    pub fn integral(&self) -> bool {
        self.failure.is_none()
    }
}

/// Apply every word of divided powers `f_alpha^{(n)}` of total degree at most
/// `depth` to the fundamental highest weight vector.
pub fn kostant_integrality(lambda: &DominantWeight, depth: u32) -> KostantOutcome {
    let gens: Vec<_> = negative_root_generators().into_iter().map(|g| g.matrix).collect();
    let mut out = KostantOutcome { words: 0, failure: None };
    let mut word = Vec::new();
    walk(&gens, &fundamental_highest(lambda), depth, &mut word, &mut out);
    out
}

fn walk(
    gens: &[[[i64; 6]; 6]],
    v: &TensorElement,
    left: u32,
    word: &mut Vec<(usize, u32)>,
    out: &mut KostantOutcome,
) {
    for (i, x) in gens.iter().enumerate() {
        for n in 1..=left {
            if out.failure.is_some() {
                return;
            }
            word.push((i, n));
            out.words += 1;
            match apply_divided_power(x, v, n) {
                Err(_) => {
                    out.failure = Some(word.clone());
                    word.pop();
                    return;
                }
                Ok(w) if w.is_zero() => {
                    word.pop();
                    break;
                }
                Ok(w) => walk(gens, &w, left - n, word, out),
            }
            word.pop();
        }
    }
}

/// `sp4` data of a vector: raising operators kill it, its `(eps1, eps2)`
/// torus weight, and the scalar by which twice the Casimir acts (if any).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sp4Data {
    pub raising_kill: bool,
    pub torus: Option<[i64; 2]>,
    pub casimir_twice: Option<i128>,
}

pub fn sp4_data(v: &TensorElement) -> Sp4Data {
    let raising_kill = sp4_raising().iter().all(|g| apply_lie(&g.matrix, v).is_zero());
    let torus = crate::lie::sp4_torus_weight(v);
    let c = sp4_casimir_twice(v);
    let casimir_twice = v.terms.iter().next().and_then(|(k, &a)| {
        let b = c.coeff(k);
        if b % a != 0 {
            return None;
        }
        let s = b / a;
        (c == v.scale(s)).then_some(s)
    });
    let casimir_twice = if v.is_zero() { None } else { casimir_twice };
    Sp4Data { raising_kill, torus, casimir_twice }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branching::c3;
    use crate::lie::is_h_highest;

    #[test]
    fn reference_u_actions() {
        let b = basic_vectors();
        assert_eq!(u_conjugate(&b.w, -1), b.w);
        let want = b
            .x
            .add(&lin(&[(-2, &[e(1), e(2)]), (-1, &[e(1), e(3)]), (1, &[e(2), e(3)])]))
            .unwrap();
        assert_eq!(u_conjugate(&b.x, -1), want);
        let want_z = b.z.sub(&wedge(&[e(1), e(2), e(3)]).scale(2)).unwrap();
        assert_eq!(u_conjugate(&b.z, -1), want_z);
        assert_eq!(u_conjugate(&u_conjugate(&b.y, -1), 1), b.y);
    }

    #[test]
    fn s_weights_of_examples() {
        let g = graded_weights(&TensorElement::basis(e(1)), realization_twist(&c3([1, 0, 0])));
        assert_eq!(g.keys().copied().collect::<Vec<_>>(), vec![0]);
        let l = c3([1, 1, 0]);
        let g = graded_weights(&basic_vectors().y, realization_twist(&l));
        assert_eq!(g.keys().copied().collect::<Vec<_>>(), vec![-3]);
        let g = graded_weights(&wedge(&[e(1), e(2)]), realization_twist(&l));
        assert_eq!(g.keys().copied().collect::<Vec<_>>(), vec![-1]);
    }

    #[test]
    fn scaling_of_y() {
        let l = c3([1, 1, 0]);
        let r = Zpn::new(3, 4);
        let y = basic_vectors().y;
        let out = eta_normalized_scale(&y, &l, 1, &r).unwrap();
        assert_eq!(out, y.scale(9).reduce(81));
    }

    #[test]
    fn x_is_h_highest() {
        let h = is_h_highest(&basic_vectors().x);
        assert!(h.highest);
        let w = h.weight.unwrap();
        assert_eq!((w.h_weight, w.det_twist), ([0, 0, 0], 1));
        assert!(!is_h_highest(&TensorElement::basis(f(1))).highest);
    }

    #[test]
    fn kostant_small() {
        let o = kostant_integrality(&c3([2, 0, 0]), 3);
        assert!(o.integral());
        assert!(o.words > 0);
    }

    #[test]
    fn klingen_identity() {
        let r = Zpn::new(5, 3);
        assert!(klingen_invariance(3, &GMatrix::identity(r)));
    }
}
