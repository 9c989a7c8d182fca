//! Sparse tensors of wedge monomials over `V = <e1,e2,e3,f3,f2,f1>`.
//!
//! A wedge monomial is a bit mask over the six basis positions; a tensor
//! key is one mask per slot. Coefficients are integers, optionally reduced
//! modulo a fixed `q`. The power of the multiplier character `nu` is an
//! integer tag.

use crate::matrix::{int_multiplier, GMatrix};
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

pub type Key = Vec<u8>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("coefficient rings differ ({0:?} vs {1:?})")]
    RingMismatch(Option<i128>, Option<i128>),
    #[error("slot signatures differ")]
    ShapeMismatch,
    #[error("matrix is not a symplectic similitude")]
    NotSimilitude,
    #[error("multiplier {0} cannot be inverted for a negative twist")]
    MultiplierNotInvertible(i128),
    #[error("division by {0} is not exact")]
    InexactDivision(i128),
    #[error("S-weight {s} outside [{lo}, {hi}]")]
    SWeightOutOfRange { s: i64, lo: i64, hi: i64 },
}

/// Human-readable names of the basis positions.
pub const BASIS_NAMES: [&str; 6] = ["e1", "e2", "e3", "f3", "f2", "f1"];

/// Position of `e_i` (1-based `i`).
pub const fn e(i: usize) -> usize {
    i - 1
}

/// Position of `f_i` (1-based `i`).
pub const fn f(i: usize) -> usize {
    6 - i
}

/// Sorted wedge of basis positions as `(sign, mask)`; `None` if repeated.
pub fn wedge_mask(indices: &[usize]) -> Option<(i128, u8)> {
    let mut inversions = 0;
    let mut mask = 0u8;
    for (a, &i) in indices.iter().enumerate() {
        if mask >> i & 1 == 1 {
            return None;
        }
        mask |= 1 << i;
        inversions += indices[a + 1..].iter().filter(|&&j| j < i).count();
    }
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    Some((sign, mask))
}

pub fn mask_indices(mask: u8) -> Vec<usize> {
    (0..6).filter(|i| mask >> i & 1 == 1).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    /// Wedge degree of each slot.
    pub slots: Vec<u8>,
    pub terms: BTreeMap<Key, i128>,
    /// Exponent of the multiplier character.
    pub twist: i64,
    /// `Some(q)` when coefficients live in `Z/q`.
    pub modulus: Option<i128>,
}

impl TensorElement {
    pub fn zero(slots: Vec<u8>) -> Self {
        TensorElement { slots, terms: BTreeMap::new(), twist: 0, modulus: None }
    }

    /// The empty tensor product (scalar `c`).
    pub fn scalar(c: i128) -> Self {
        let mut t = Self::zero(Vec::new());
        t.add_term(Vec::new(), c);
        t
    }

    /// A single wedge `b_{i1} ∧ ... ∧ b_{ik}` of basis positions.
    pub fn wedge(indices: &[usize]) -> Self {
        let mut t = Self::zero(vec![indices.len() as u8]);
        if let Some((s, m)) = wedge_mask(indices) {
            t.add_term(vec![m], s);
        }
        t
    }

    pub fn basis(i: usize) -> Self {
        Self::wedge(&[i])
    }

    pub fn with_twist(mut self, twist: i64) -> Self {
        self.twist = twist;
        self
    }

    fn norm(&self, c: i128) -> i128 {
        match self.modulus {
            Some(q) => c.rem_euclid(q),
            None => c,
        }
    }

    pub fn add_term(&mut self, key: Key, c: i128) {
        let c = self.norm(c);
        if c == 0 {
            return;
        }
        let q = self.modulus;
        let e = self.terms.entry(key.clone()).or_insert(0);
        *e += c;
        if let Some(q) = q {
            *e = e.rem_euclid(q);
        }
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &[u8]) -> i128 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    fn compatible(&self, other: &Self) -> Result<(), TensorError> {
        if self.modulus != other.modulus {
            return Err(TensorError::RingMismatch(self.modulus, other.modulus));
        }
        if self.slots != other.slots {
            return Err(TensorError::ShapeMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, TensorError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (k, &c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, TensorError> {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, c: i128) -> Self {
        let mut out = TensorElement { terms: BTreeMap::new(), ..self.clone() };
        for (k, &v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    /// Reduce coefficients modulo `q`.
    pub fn reduce(&self, q: i128) -> Self {
        let mut out =
            TensorElement { terms: BTreeMap::new(), modulus: Some(q), ..self.clone() };
        for (k, &v) in &self.terms {
            out.add_term(k.clone(), v);
        }
        out
    }

    /// Forget the modulus, keeping representatives in `[0, q)`.
    pub fn lift(&self) -> Self {
        TensorElement { modulus: None, ..self.clone() }
    }

    /// Tensor product; twists add.
    pub fn tensor(&self, other: &Self) -> Result<Self, TensorError> {
        if self.modulus != other.modulus {
            return Err(TensorError::RingMismatch(self.modulus, other.modulus));
        }
        let mut slots = self.slots.clone();
        slots.extend_from_slice(&other.slots);
        let mut out = TensorElement {
            slots,
            terms: BTreeMap::new(),
            twist: self.twist + other.twist,
            modulus: self.modulus,
        };
        for (k1, &c1) in &self.terms {
            for (k2, &c2) in &other.terms {
                let mut k = k1.clone();
                k.extend_from_slice(k2);
                out.add_term(k, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn tensor_power(&self, n: usize) -> Self {
        let mut acc = TensorElement::scalar(1);
        acc.modulus = self.modulus;
        if let Some(q) = self.modulus {
            acc = acc.reduce(q);
        }
        for _ in 0..n {
            acc = acc.tensor(self).expect("same ring");
        }
        acc
    }

    /// Exact division of every coefficient.
    pub fn div_exact(&self, d: i128) -> Result<Self, TensorError> {
        let mut out = TensorElement { terms: BTreeMap::new(), ..self.clone() };
        for (k, &v) in &self.terms {
            if v % d != 0 {
                return Err(TensorError::InexactDivision(d));
            }
            out.add_term(k.clone(), v / d);
        }
        Ok(out)
    }

    /// Components grouped by a key function on monomials.
    pub fn split_by<K: Ord, F: Fn(&[u8]) -> K>(&self, f: F) -> BTreeMap<K, TensorElement> {
        let mut out: BTreeMap<K, TensorElement> = BTreeMap::new();
        for (k, &c) in &self.terms {
            out.entry(f(k))
                .or_insert_with(|| TensorElement { terms: BTreeMap::new(), ..self.clone() })
                .add_term(k.clone(), c);
        }
        out
    }
}

/// Minor of `g` with rows `rows` and columns `cols` (Leibniz expansion).
fn minor(g: &[[i128; 6]; 6], rows: &[usize], cols: &[usize]) -> i128 {
    match rows.len() {
        0 => 1,
        1 => g[rows[0]][cols[0]],
        _ => {
            let mut acc = 0i128;
            for (k, &c) in cols.iter().enumerate() {
                let x = g[rows[0]][c];
                if x == 0 {
                    continue;
                }
                let rest: Vec<usize> =
                    cols.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, &c)| c).collect();
                let s = if k % 2 == 0 { 1 } else { -1 };
                acc += s * x * minor(g, &rows[1..], &rest);
            }
            acc
        }
    }
}

fn masks_of_degree(d: u8) -> Vec<u8> {
    (0u8..64).filter(|m| m.count_ones() == d as u32).collect()
}

fn modpow(mut a: i128, mut e: u64, q: Option<i128>) -> i128 {
    let mut r = 1i128;
    while e > 0 {
        if e & 1 == 1 {
            r *= a;
            if let Some(q) = q {
                r = r.rem_euclid(q);
            }
        }
        a *= a;
        if let Some(q) = q {
            a = a.rem_euclid(q);
        }
        e >>= 1;
    }
    r
}

fn mod_inverse(a: i128, q: i128) -> Option<i128> {
    let (mut r0, mut r1) = (q, a.rem_euclid(q));
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(q))
}

/// Slot-wise action of an integer matrix `g` with multiplier `nu`.
/// Works for non-invertible `g` as long as the twist is non-negative.
pub fn apply_matrix_with_nu(
    g: &[[i128; 6]; 6],
    nu: i128,
    v: &TensorElement,
) -> Result<TensorElement, TensorError> {
    let q = v.modulus;
    let factor = if v.twist >= 0 {
        modpow(nu, v.twist as u64, q)
    } else {
        let inv = match q {
            None if nu == 1 || nu == -1 => nu,
            Some(q) => mod_inverse(nu, q).ok_or(TensorError::MultiplierNotInvertible(nu))?,
            None => return Err(TensorError::MultiplierNotInvertible(nu)),
        };
        modpow(inv, (-v.twist) as u64, q)
    };
    // Images of each wedge monomial, computed once per (degree, mask).
    let mut images: BTreeMap<u8, Vec<(u8, i128)>> = BTreeMap::new();
    for key in v.terms.keys() {
        for &m in key {
            if images.contains_key(&m) {
                continue;
            }
            let cols = mask_indices(m);
            let mut img = Vec::new();
            for target in masks_of_degree(m.count_ones() as u8) {
                let rows = mask_indices(target);
                let c = minor(g, &rows, &cols);
                if c != 0 {
                    img.push((target, c));
                }
            }
            images.insert(m, img);
        }
    }
    let mut out = TensorElement { terms: BTreeMap::new(), ..v.clone() };
    for (key, &c) in &v.terms {
        let mut partial: Vec<(Key, i128)> = vec![(Vec::new(), c * factor)];
        for m in key {
            let mut next = Vec::new();
            for (k, a) in &partial {
                for &(t, b) in &images[m] {
                    let mut nk = k.clone();
                    nk.push(t);
                    let mut val = a * b;
                    if let Some(q) = q {
                        val = val.rem_euclid(q);
                    }
                    next.push((nk, val));
                }
            }
            partial = next;
        }
        for (k, a) in partial {
            out.add_term(k, a);
        }
    }
    Ok(out)
}

/// Slot-wise action of an integer symplectic similitude.
pub fn apply_matrix(g: &[[i128; 6]; 6], v: &TensorElement) -> Result<TensorElement, TensorError> {
    let nu = int_multiplier(g).ok_or(TensorError::NotSimilitude)?;
    apply_matrix_with_nu(g, nu, v)
}

/// Action of a residue matrix; integer tensors are first reduced mod `p^N`.
pub fn apply_gmatrix(g: &GMatrix, v: &TensorElement) -> Result<TensorElement, TensorError> {
    let q = g.ring.q as i128;
    let v = match v.modulus {
        None => v.reduce(q),
        Some(m) if m == q => v.clone(),
        Some(m) => return Err(TensorError::RingMismatch(Some(m), Some(q))),
    };
    let mut gi = [[0i128; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            gi[i][j] = g.m[i][j] as i128;
        }
    }
    apply_matrix_with_nu(&gi, g.nu as i128, &v)
}

/// Render as `c*e1^e2 ⊗ f1 + ...` for text output.
pub fn render(v: &TensorElement) -> alloc::string::String {
    use alloc::string::String;
    use core::fmt::Write;
    if v.is_zero() {
        return String::from("0");
    }
    let mut s = String::new();
    for (i, (k, &c)) in v.terms.iter().enumerate() {
        if i > 0 {
            s.push_str(if c < 0 { " - " } else { " + " });
        } else if c < 0 {
            s.push('-');
        }
        let a = c.abs();
        if a != 1 || k.is_empty() {
            let _ = write!(s, "{a}*");
        }
        let slots: Vec<String> = k
            .iter()
            .map(|&m| {
                let names: Vec<&str> = mask_indices(m).iter().map(|&i| BASIS_NAMES[i]).collect();
                names.join("^")
            })
            .collect();
        s.push_str(&slots.join(" (x) "));
    }
    if v.twist != 0 {
        let _ = write!(s, " [nu^{}]", v.twist);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::u_inv_int;

    fn to128(m: &crate::matrix::IntMat6) -> [[i128; 6]; 6] {
        let mut o = [[0i128; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                o[i][j] = m[i][j] as i128;
            }
        }
        o
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge_mask(&[1, 0]), Some((-1, 0b11)));
        assert_eq!(wedge_mask(&[0, 1]), Some((1, 0b11)));
        assert_eq!(wedge_mask(&[2, 0, 1]), Some((1, 0b111)));
        assert_eq!(wedge_mask(&[1, 1]), None);
    }

    #[test]
    fn u_inverse_on_f3() {
        let v = TensorElement::basis(f(3));
        let w = apply_matrix(&to128(&u_inv_int()), &v).unwrap();
        let expect = TensorElement::basis(f(3))
            .sub(&TensorElement::basis(e(1)))
            .unwrap()
            .sub(&TensorElement::basis(e(2)))
            .unwrap();
        assert_eq!(w, expect);
    }

    #[test]
    fn identity_acts_trivially() {
        let v = TensorElement::wedge(&[e(1), f(1)])
            .tensor(&TensorElement::basis(e(2)))
            .unwrap()
            .with_twist(-2);
        let id = to128(&crate::matrix::int_identity());
        assert_eq!(apply_matrix(&id, &v).unwrap(), v);
    }
}
