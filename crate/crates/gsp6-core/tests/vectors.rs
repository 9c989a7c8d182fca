//! Highest weight vectors, `u`-conjugation, the graded `eta` scaling,
//! Klingen invariance and divided-power integrality.

use gsp6_core::branching::{c3, top_edge};
use gsp6_core::explicit::*;
use gsp6_core::lie::{is_h_highest, sp4_casimir_value_twice};
use gsp6_core::matrix::GMatrix;
use gsp6_core::tensor::{e, f, TensorElement};
use gsp6_core::weights::DominantWeight;
use gsp6_core::zp::Zpn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn wedge(ix: &[usize]) -> TensorElement {
    TensorElement::wedge(ix)
}

fn sum(parts: &[(i128, &[usize])]) -> TensorElement {
    let mut out = TensorElement::zero(vec![parts[0].1.len() as u8]);
    for &(c, ix) in parts {
        out = out.add(&wedge(ix).scale(c)).unwrap();
    }
    out
}

#[test]
fn four_u_inverse_formulas() {
    let b = basic_vectors();
    assert_eq!(u_conjugate(&b.w, -1), b.w);
    let x = b.x.add(&sum(&[(-2, &[e(1), e(2)]), (-1, &[e(1), e(3)]), (1, &[e(2), e(3)])])).unwrap();
    assert_eq!(u_conjugate(&b.x, -1), x);
    let y = b.y.add(&sum(&[(-2, &[e(2), e(3)]), (-1, &[e(1), e(3)]), (1, &[e(1), e(2)])])).unwrap();
    assert_eq!(u_conjugate(&b.y, -1), y);
    let z = b.z.add(&sum(&[(-2, &[e(1), e(2), e(3)])])).unwrap();
    assert_eq!(u_conjugate(&b.z, -1), z);
    for v in [&b.w, &b.x, &b.y, &b.z] {
        assert_eq!(u_conjugate(&u_conjugate(v, -1), 1), *v);
    }
}

/// Per-term signs of the top projection relative to the primed vectors.
#[test]
fn limit_sign_pattern() {
    let b = basic_vectors();
    let cases = [
        (&b.x, c3([1, 1, 0]), &b.x_prime, vec![-1, 1]),
        (&b.y, c3([1, 1, 0]), &b.y_prime, vec![1, 1]),
        (&b.z, c3([1, 1, 1]), &b.z_prime, vec![-1]),
    ];
    for (v, l, reference, signs) in cases {
        let top = s_top_projection(&u_conjugate(v, -1), &l);
        let rep = sign_report(&top, reference);
        assert!(rep.iter().all(|t| t.same_up_to_sign()));
        let got: Vec<i32> = rep.iter().map(|t| if t.agrees() { 1 } else { -1 }).collect();
        assert_eq!(got, signs);
    }
    let flipped = basic_vectors().with_flipped_x_prime();
    let top = s_top_projection(&u_conjugate(&b.x, -1), &c3([1, 1, 0]));
    let got: Vec<bool> = sign_report(&top, &flipped.x_prime).iter().map(|t| t.agrees()).collect();
    assert_eq!(got, vec![true, false]);
}

#[test]
fn limits_are_top_projection_for_every_m() {
    let b = basic_vectors();
    for (v, l) in [(&b.w, c3([1, 0, 0])), (&b.x, c3([1, 1, 0])), (&b.y, c3([1, 1, 0])), (&b.z, c3([1, 1, 1]))] {
        let top = s_top_projection(&u_conjugate(v, -1), &l);
        for p in [2u64, 3, 5] {
            for m in 1..=3 {
                let q = p.pow(m) as i128;
                let lim = normalized_limit(v, &l, m, p).unwrap();
                assert_eq!(lim.terms, top.reduce(q).terms, "p={p} m={m}");
            }
        }
    }
    assert!(s_top_projection(&b.x, &c3([1, 1, 0])).is_zero());
}

#[test]
fn graded_scaling_examples() {
    let l = c3([1, 1, 0]);
    let r = Zpn::new(5, 4);
    let y = basic_vectors().y;
    assert_eq!(eta_normalized_scale(&y, &l, 1, &r).unwrap(), y.scale(25).reduce(625));
    let top = wedge(&[e(1), e(2)]);
    assert_eq!(eta_normalized_scale(&top, &l, 1, &r).unwrap(), top.reduce(625));
    assert!(eta_normalized_scale(&wedge(&[e(1), e(2), e(3)]), &l, 1, &r).is_err());
}

#[test]
fn edge_vectors_are_h_highest() {
    for l in DominantWeight::c3_with_top_at_most(3) {
        let p = l.padded();
        let k = p[0] - p[1] + p[2];
        let edge = edge_vectors(&l);
        assert_eq!(edge.len(), top_edge(&l).len(), "{l:?}");
        for (mu, v) in edge {
            let h = is_h_highest(&v);
            assert!(h.highest, "{l:?} {mu:?}");
            let w = h.weight.unwrap();
            assert_eq!((w.h_weight, w.det_twist), ([k, 0, 0], p[1]), "{l:?} {mu:?}");
        }
    }
}

#[test]
fn sp4_data_of_the_building_blocks() {
    let b = basic_vectors();
    let w = sp4_data(&b.w);
    assert!(w.raising_kill);
    assert_eq!((w.torus, w.casimir_twice), (Some([1, 0]), Some(sp4_casimir_value_twice(1, 0))));
    let z = sp4_data(&b.z);
    assert!(z.raising_kill);
    assert_eq!(z.torus, Some([1, 0]));
    // X and Y have Sp4 torus weight 0 and are not killed by the Sp4 raising
    // operators: neither spans a V^(1,1)-highest line.
    for v in [&b.x, &b.y] {
        let d = sp4_data(v);
        assert!(!d.raising_kill);
        assert_eq!(d.torus, Some([0, 0]));
    }
    assert_eq!(sp4_data(&b.x).casimir_twice, Some(8));
    assert_eq!(sp4_data(&b.y).casimir_twice, None);
}

#[test]
fn products_of_highest_vectors_stay_highest() {
    let b = basic_vectors();
    let vs = [&b.w, &b.x, &b.y, &b.z];
    for a in vs {
        for c in vs {
            assert!(is_h_highest(&a.tensor(c).unwrap()).highest);
        }
    }
}

#[test]
fn grading_profile_matches_keys() {
    for l in [[1, 0, 0], [1, 1, 0], [1, 1, 1], [2, 1, 0], [2, 2, 1]] {
        let l = c3(l);
        let mut counts = std::collections::BTreeMap::new();
        for k in realization_keys(&l) {
            *counts.entry(key_s_weight(&k, realization_twist(&l))).or_insert(0u128) += 1;
        }
        assert_eq!(counts, s_weight_profile(&l), "{l:?}");
    }
}

#[test]
fn grading_exponents_on_random_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let mut v = [rng.gen_range(0..=6), rng.gen_range(0..=6), rng.gen_range(0..=6)];
        v.sort_unstable_by(|a, b| b.cmp(a));
        let l = c3(v);
        let (lo, hi) = s_range(&l);
        let prof = s_weight_profile(&l);
        assert!(prof.get(&hi).is_some_and(|&c| c > 0), "{l:?}");
        for &s in prof.keys() {
            assert!(s >= lo && s <= hi);
            let ex = grading_exponent(s, &l, 1);
            assert!(ex >= 0);
            assert_eq!(ex == 0, s == hi);
        }
        for s in character_s_weights(&l).keys() {
            assert!(*s >= lo && *s <= hi, "{l:?} {s}");
        }
    }
}

#[test]
fn klingen_levi_and_unipotents_fix_e1_power() {
    let ring = Zpn::new(7, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    // Unipotent radical: e1 is fixed by I + t X for X in the root spaces with
    // target e1 only.
    for alpha in [[1, -1, 0], [1, 1, 0], [1, 0, -1], [1, 0, 1], [2, 0, 0]] {
        let x = gsp6_core::lie::root_vector(alpha).unwrap();
        let t = rng.gen_range(0..ring.q);
        let g = gsp6_core::cosets::root_element(ring, &x, t);
        for k in 1..=5 {
            assert!(klingen_invariance(k, &g), "{alpha:?}");
        }
    }
    let diag = |d: [u64; 6]| {
        let mut m = [[0u64; 6]; 6];
        for i in 0..6 {
            m[i][i] = d[i];
        }
        GMatrix::new(ring, m).unwrap()
    };
    // diag(nu, a, b, nu/b, nu/a, 1): a Levi element.
    let (a, bb, nu) = (3u64, 5u64, 2u64);
    let g = diag([nu, a, bb, ring.mul(nu, ring.inv(bb).unwrap()), ring.mul(nu, ring.inv(a).unwrap()), 1]);
    assert!(klingen_invariance(4, &g));
    // diag(a, a, a, b, b, b) scales e1 ⊗ nu^-1 by b^-1.
    assert!(!klingen_invariance(2, &diag([3, 3, 3, 2, 2, 2])));
    assert!(klingen_invariance(2, &diag([3, 3, 3, 1, 1, 1])));
}

#[test]
fn kostant_words_divide_exactly() {
    for l in [[1, 0, 0], [1, 1, 0], [1, 1, 1], [2, 0, 0], [2, 1, 0]] {
        let o = kostant_integrality(&c3(l), 4);
        assert!(o.integral(), "{l:?} {:?}", o.failure);
    }
    assert_eq!(kostant_integrality(&c3([1, 0, 0]), 4).words, 259);
    assert_eq!(kostant_integrality(&c3([2, 1, 0]), 4).words, 4949);
}

#[test]
fn f1_is_not_h_highest() {
    assert!(!is_h_highest(&TensorElement::basis(f(1))).highest);
}
