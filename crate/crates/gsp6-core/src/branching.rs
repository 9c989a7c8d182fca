//! Restriction of `Sp6` representations to `Sp4 x SL2` and to `H`.

use crate::weights::{character, DominantWeight, Series};
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

/// One `V^mu ⊠ (Sym^r1 ⊗ Sym^r2 ⊗ Sym^r3)` summand.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BranchingConstituent {
    pub mu: DominantWeight,
    pub r: [i64; 3],
}

/// An irreducible `H`-module `Sym^k1 ⊠ Sym^k2 ⊠ Sym^k3 ⊗ det^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HConstituent {
    pub k: [i64; 3],
    pub det_twist: i64,
}

pub type HMultiset = BTreeMap<HConstituent, u64>;

/// Whether `mu` doubly interlaces `lambda`.
pub fn doubly_interlaces(lambda: &DominantWeight, mu: &DominantWeight) -> bool {
    let l = lambda.padded();
    let m = mu.padded();
    l[0] >= m[0] && m[0] >= l[2] && l[1] >= m[1] && m[1] >= 0
}

/// One constituent per doubly interlacing `mu`, with `r_i = x_i - y_i` read
/// off the decreasing rearrangement of `{l1, l2, l3, mu1, mu2, 0}`.
pub fn branch_c3_to_c2xa1(lambda: &DominantWeight) -> Vec<BranchingConstituent> {
    let l = lambda.padded();
    let mut out = Vec::new();
    for m1 in l[2]..=l[0] {
        for m2 in 0..=l[1].min(m1) {
            let mu = DominantWeight::c2(m1, m2).unwrap();
            let mut all = [l[0], l[1], l[2], m1, m2, 0];
            all.sort_unstable_by(|a, b| b.cmp(a));
            let r = [all[0] - all[1], all[2] - all[3], all[4] - all[5]];
            out.push(BranchingConstituent { mu, r });
        }
    }
    out
}

/// Pairs `(mu1 - x - y, mu2 - y + x)` for `0 <= x <= mu1 - mu2`, `0 <= y <= mu2`.
pub fn branch_c2_to_a1xa1(mu: &DominantWeight) -> Vec<(i64, i64)> {
    let m = mu.padded();
    let mut out = Vec::new();
    for x in 0..=(m[0] - m[1]) {
        for y in 0..=m[1] {
            out.push((m[0] - x - y, m[1] - y + x));
        }
    }
    out
}

/// Degrees of `Sym^r1 ⊗ Sym^r2 ⊗ Sym^r3` by iterated Clebsch-Gordan,
/// sorted decreasingly.
pub fn expand_sl2_tensor(r: [i64; 3]) -> Vec<i64> {
    let mut degrees = vec![r[0]];
    for &next in &r[1..] {
        let mut acc = Vec::new();
        for &d in &degrees {
            for i in 0..=d.min(next) {
                acc.push(d + next - 2 * i);
            }
        }
        degrees = acc;
    }
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    degrees
}

/// Flatten the `Sp4 x SL2` branching down to `H`, recovering the `det`
/// twist from the central character `|lambda| = k1 + k2 + k3 + 2 j`.
pub fn flattened_branch_h(lambda: &DominantWeight) -> HMultiset {
    let total = lambda.size();
    let mut out = HMultiset::new();
    for c in branch_c3_to_c2xa1(lambda) {
        let k3s = expand_sl2_tensor(c.r);
        for (k1, k2) in branch_c2_to_a1xa1(&c.mu) {
            for &k3 in &k3s {
                let s = k1 + k2 + k3;
                assert_eq!((total - s) % 2, 0, "central character parity");
                let h = HConstituent { k: [k1, k2, k3], det_twist: (total - s) / 2 };
                *out.entry(h).or_insert(0) += 1;
            }
        }
    }
    out
}

/// Independent decomposition: restrict the character to the `SL2^3` torus
/// and peel off products of `SL2` characters, largest first in the order
/// `(k1 + k2 + k3, k1, k2)`.
pub fn oracle_branch_h(lambda: &DominantWeight) -> HMultiset {
    let total = lambda.size();
    let mut rest: BTreeMap<[i64; 3], i64> = character(lambda).terms;
    let mut out = HMultiset::new();
    while let Some((&top, &m)) = rest
        .iter()
        .max_by_key(|(w, _)| (w[0] + w[1] + w[2], w[0], w[1]))
    {
        assert!(m > 0, "peeling produced a negative multiplicity at {top:?}");
        assert!(top.iter().all(|&k| k >= 0), "peeled top weight is not dominant");
        for a in (-top[0]..=top[0]).step_by(2) {
            for b in (-top[1]..=top[1]).step_by(2) {
                for c in (-top[2]..=top[2]).step_by(2) {
                    let e = rest.entry([a, b, c]).or_insert(0);
                    *e -= m;
                    assert!(*e >= 0, "peeling produced a negative multiplicity");
                    if *e == 0 {
                        rest.remove(&[a, b, c]);
                    }
                }
            }
        }
        let s: i64 = top.iter().sum();
        let h = HConstituent { k: top, det_twist: (total - s) / 2 };
        *out.entry(h).or_insert(0) += m as u64;
    }
    out
}

/// The pure `(k, 0, 0)` part of an `H`-multiset as `(k, multiplicity, twist)`.
pub fn pure_sym_part(ms: &HMultiset) -> Vec<(i64, u64, i64)> {
    ms.iter()
        .filter(|(h, _)| h.k[1] == 0 && h.k[2] == 0)
        .map(|(h, &m)| (h.k[0], m, h.det_twist))
        .collect()
}

/// Closed form for the `Sym^(k,0,0)` constituents: `k` from
/// `|l1 - l2 - l3|` to `l1 - l2 + l3` in steps of 2, each with
/// multiplicity `l2 - l3 + 1` and twist `(|lambda| - k) / 2`.
pub fn sym_constituents(lambda: &DominantWeight) -> Vec<(i64, u64, i64)> {
    let l = lambda.padded();
    let total = lambda.size();
    let lo = (l[0] - l[1] - l[2]).abs();
    let hi = l[0] - l[1] + l[2];
    let r = (l[1] - l[2] + 1) as u64;
    (lo..=hi)
        .filter(|k| (k - total).rem_euclid(2) == 0)
        .map(|k| (k, r, (total - k) / 2))
        .collect()
}

/// Lattice points of the region `A(lambda)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionA {
    pub lambda: DominantWeight,
    /// Sorted `(mu1, mu2)` pairs.
    pub points: Vec<(i64, i64)>,
    pub k_values: Vec<i64>,
    pub r: i64,
}

/// Whether `(m1, m2)` satisfies the four inequalities and the parity rule.
pub fn in_region(lambda: &DominantWeight, m1: i64, m2: i64) -> bool {
    let l = lambda.padded();
    let k = m1 - m2;
    let s = m1 + m2;
    (s - lambda.size()).rem_euclid(2) == 0
        && k <= l[0] - l[1] + l[2]
        && k >= (l[0] - l[1] - l[2]).abs()
        && s >= l[0] - l[1] + l[2]
        && s <= l[0] + l[1] - l[2]
}

pub fn region_a(lambda: &DominantWeight) -> RegionA {
    let l = lambda.padded();
    let bound = l[0] + l[1] + l[2];
    let mut points = Vec::new();
    for m1 in 0..=bound {
        for m2 in 0..=m1 {
            if in_region(lambda, m1, m2) {
                points.push((m1, m2));
            }
        }
    }
    let mut k_values: Vec<i64> = points.iter().map(|(a, b)| a - b).collect();
    k_values.sort_unstable();
    k_values.dedup();
    RegionA { lambda: *lambda, points, k_values, r: l[1] - l[2] + 1 }
}

/// The `mu` on the edge `k = l1 - l2 + l3` of `A(lambda)`.
pub fn top_edge(lambda: &DominantWeight) -> Vec<DominantWeight> {
    let l = lambda.padded();
    let k = l[0] - l[1] + l[2];
    region_a(lambda)
        .points
        .into_iter()
        .filter(|(a, b)| a - b == k)
        .map(|(a, b)| DominantWeight::c2(a, b).unwrap())
        .collect()
}

/// Largest multiplicity of any `V^mu ⊠ Sym^d` in the `Sp4 x SL2` restriction,
/// and the same restricted to `d = 0`.
pub fn h_prime_max_multiplicities(lambda: &DominantWeight) -> (u64, u64) {
    let mut counts: BTreeMap<(DominantWeight, i64), u64> = BTreeMap::new();
    for c in branch_c3_to_c2xa1(lambda) {
        for d in expand_sl2_tensor(c.r) {
            *counts.entry((c.mu, d)).or_insert(0) += 1;
        }
    }
    let all = counts.values().copied().max().unwrap_or(0);
    let zero = counts
        .iter()
        .filter(|((_, d), _)| *d == 0)
        .map(|(_, &m)| m)
        .max()
        .unwrap_or(0);
    (all, zero)
}

/// Total dimension of an `H`-multiset.
pub fn h_dimension(ms: &HMultiset) -> u128 {
    ms.iter()
        .map(|(h, &m)| m as u128 * h.k.iter().map(|&k| (k + 1) as u128).product::<u128>())
        .sum()
}

/// `Series` helper for callers that only hold entries.
pub fn c3(l: [i64; 3]) -> DominantWeight {
    DominantWeight::new(Series::C3, &l).expect("dominant C3 weight")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::closed_form_dimension;

    #[test]
    fn standard_and_adjoint_like() {
        let b = branch_c3_to_c2xa1(&c3([1, 0, 0]));
        let got: Vec<_> = b.iter().map(|c| (c.mu.padded(), c.r)).collect();
        assert_eq!(got, vec![([0, 0, 0], [1, 0, 0]), ([1, 0, 0], [0, 0, 0])]);
        let b = branch_c3_to_c2xa1(&c3([1, 1, 0]));
        let dims: u128 = b
            .iter()
            .map(|c| {
                closed_form_dimension(&c.mu)
                    * c.r.iter().map(|&x| (x + 1) as u128).product::<u128>()
            })
            .sum();
        assert_eq!(dims, 14);
    }

    #[test]
    fn clebsch_gordan() {
        assert_eq!(expand_sl2_tensor([1, 1, 0]), vec![2, 0]);
        assert_eq!(expand_sl2_tensor([0, 0, 0]), vec![0]);
        assert_eq!(expand_sl2_tensor([1, 1, 1]), vec![3, 1, 1]);
    }

    #[test]
    fn region_9_6_2() {
        let reg = region_a(&c3([9, 6, 2]));
        assert_eq!(reg.points.len(), 15);
        assert_eq!(reg.k_values, vec![1, 3, 5]);
        assert_eq!(reg.r, 5);
        let reg = region_a(&c3([2, 1, 0]));
        assert_eq!(reg.points, vec![(1, 0), (2, 1)]);
    }

    #[test]
    fn oracle_small() {
        let o = oracle_branch_h(&c3([1, 0, 0]));
        assert_eq!(o.len(), 3);
        assert!(o.keys().all(|h| h.det_twist == 0));
        let o = oracle_branch_h(&c3([1, 1, 0]));
        assert_eq!(o[&HConstituent { k: [0, 0, 0], det_twist: 1 }], 2);
        assert_eq!(h_dimension(&o), 14);
    }
}
