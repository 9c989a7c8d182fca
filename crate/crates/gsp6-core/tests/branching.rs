//! Branching to `H` and to `Sp4 x SL2` against character-level oracles.

use gsp6_core::branching::{
    c3, expand_sl2_tensor, flattened_branch_h, h_dimension, h_prime_max_multiplicities,
    oracle_branch_h, pure_sym_part, region_a, sym_constituents, top_edge, HConstituent, HMultiset,
};
use gsp6_core::weights::{character, closed_form_dimension, DominantWeight};

/// Multiplicity of `Sym^k1 ⊠ Sym^k2 ⊠ Sym^k3` from the restricted character:
/// `sum_s (-1)^|s| ch(k + 2 s)` over `s ∈ {0,1}^3`.
fn inclusion_exclusion(lambda: &DominantWeight) -> HMultiset {
    let ch = character(lambda);
    let total = lambda.size();
    let mut out = HMultiset::new();
    for w in ch.terms.keys().filter(|w| w.iter().all(|&x| x >= 0)) {
        let mut m = 0i64;
        for s in 0..8u8 {
            let shifted = [
                w[0] + 2 * i64::from(s & 1),
                w[1] + 2 * i64::from(s >> 1 & 1),
                w[2] + 2 * i64::from(s >> 2 & 1),
            ];
            let sign = if s.count_ones() % 2 == 0 { 1 } else { -1 };
            m += sign * ch.get(&shifted);
        }
        assert!(m >= 0, "{lambda:?} {w:?}");
        if m > 0 {
            let h = HConstituent { k: *w, det_twist: (total - w.iter().sum::<i64>()) / 2 };
            out.insert(h, m as u64);
        }
    }
    out
}

#[test]
fn flattened_law_matches_both_oracles() {
    for l in DominantWeight::c3_with_top_at_most(4) {
        let flat = flattened_branch_h(&l);
        assert_eq!(flat, oracle_branch_h(&l), "{l:?}");
        assert_eq!(flat, inclusion_exclusion(&l), "{l:?}");
        assert_eq!(h_dimension(&flat), closed_form_dimension(&l), "{l:?}");
    }
}

#[test]
fn sym_part_closed_form() {
    for l in DominantWeight::c3_with_top_at_most(4) {
        assert_eq!(sym_constituents(&l), pure_sym_part(&inclusion_exclusion(&l)), "{l:?}");
    }
}

#[test]
fn rank_two_weight_frozen() {
    let got = flattened_branch_h(&c3([1, 1, 0]));
    let h = |k: [i64; 3], det_twist| HConstituent { k, det_twist };
    let want = HMultiset::from([
        (h([0, 0, 0], 1), 2),
        (h([0, 1, 1], 0), 1),
        (h([1, 0, 1], 0), 1),
        (h([1, 1, 0], 0), 1),
    ]);
    assert_eq!(got, want);
}

#[test]
fn clebsch_gordan_against_characters() {
    let sl2 = |k: i64| -> Vec<i64> { (0..=k).map(|i| k - 2 * i).collect() };
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                let mut lhs: Vec<i64> = Vec::new();
                for x in sl2(a) {
                    for y in sl2(b) {
                        for z in sl2(c) {
                            lhs.push(x + y + z);
                        }
                    }
                }
                let mut rhs: Vec<i64> = expand_sl2_tensor([a, b, c]).into_iter().flat_map(sl2).collect();
                lhs.sort_unstable();
                rhs.sort_unstable();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn region_of_nine_six_two() {
    let r = region_a(&c3([9, 6, 2]));
    assert_eq!(r.points.len(), 15);
    assert_eq!(r.k_values, vec![1, 3, 5]);
    assert_eq!(r.r, 5);
    assert_eq!(top_edge(&c3([9, 6, 2])).len(), 5);
    let origin = region_a(&c3([0, 0, 0]));
    assert_eq!(origin.points, vec![(0, 0)]);
}

#[test]
fn region_rows_have_r_points() {
    for l in DominantWeight::c3_with_top_at_most(5) {
        let reg = region_a(&l);
        for &k in &reg.k_values {
            let row = reg.points.iter().filter(|(a, b)| a - b == k).count() as i64;
            assert_eq!(row, reg.r, "{l:?} k={k}");
        }
        let sym = sym_constituents(&l);
        assert_eq!(sym.iter().map(|x| x.0).collect::<Vec<_>>(), reg.k_values, "{l:?}");
    }
}

#[test]
fn multiplicity_one_fails_beyond_d_zero() {
    let (all, zero) = h_prime_max_multiplicities(&c3([3, 2, 1]));
    assert!(all > 1);
    assert_eq!(zero, 1);
    for l in DominantWeight::c3_with_top_at_most(4) {
        assert!(h_prime_max_multiplicities(&l).1 <= 1, "{l:?}");
    }
}
