//! Level predicates, the `Delta` embedding and the forced shape.

use gsp6_core::centralizer::random_h;
use gsp6_core::cosets::{generator_set, root_element, sample_element};
use gsp6_core::levels::*;
use gsp6_core::lie::root_vector;
use gsp6_core::matrix::{eta_diag, ETA_EXP, u_conjugate_of_h, GMatrix, HPoint};
use gsp6_core::zp::Zpn;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn families(n: u32, m: u32, d: u32) -> Vec<Family> {
    vec![
        Family::KG { d },
        Family::K { n },
        Family::K0 { n },
        Family::Knm { n, m },
        Family::Control { n, m },
        Family::Kprime { n, m },
        Family::KprimeP { n, m },
    ]
}

#[test]
fn multipliers() {
    let r = Zpn::new(3, 4);
    assert_eq!(GMatrix::identity(r).nu, 1);
    assert!(GMatrix::new(r, eta_diag(&r, 1)).is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let h = random_h(&Zpn::new(5, 1), &mut rng);
        assert_eq!(h.embed().nu, h.det());
    }
    let w1 = GMatrix::w1(r);
    assert_eq!(w1.nu, 1);
}

#[test]
fn delta_places_first_factor_in_the_corners() {
    let r = Zpn::new(7, 1);
    let a = [[2, 3], [4, 5]];
    let det = gsp6_core::matrix::det2(&r, &a);
    // Other factors with the same determinant: diag(det, 1).
    let d = [[det, 0], [0, 1]];
    let g = HPoint::new(r, [a, d, d]).unwrap().embed();
    assert_eq!([g.m[0][0], g.m[0][5], g.m[5][0], g.m[5][5]], [2, 3, 4, 5]);
    assert!(HPoint::identity(r).embed().is_identity());
}

#[test]
fn delta_in_k_n_iff_first_factor_in_k1() {
    let (p, n) = (3u64, 2u32);
    let r = Zpn::new(p, 4);
    let kn = LevelSpec::new(Family::K { n }, p);
    let k1 = LevelSpec::new(Family::K1 { n }, p);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut seen = [0u32; 2];
    for _ in 0..2000 {
        let mut h = random_h(&r, &mut rng);
        if rng.gen_bool(0.5) {
            // Push the first factor towards K1(n): bottom row (p^n x, 1).
            let c = r.mul(r.p_pow(n), rng.gen_range(0..r.q));
            let b = rng.gen_range(0..r.q);
            let a = r.add(h.det(), r.mul(b, c));
            h = HPoint::new(r, [[[a, b], [c, 1]], h.f[1], h.f[2]]).unwrap();
        }
        let inside = k1.contains_gl2(&r, &h.f[0]).unwrap();
        seen[inside as usize] += 1;
        assert_eq!(kn.contains(&h.embed()).unwrap(), inside);
    }
    assert!(seen[0] > 100 && seen[1] > 100);
}

#[test]
fn identity_in_every_family() {
    let r = Zpn::new(2, 12);
    for fam in families(6, 1, 3) {
        let spec = LevelSpec::new(fam, 2);
        assert!(spec.contains(&GMatrix::identity(r)).unwrap(), "{spec}");
    }
}

#[test]
fn corner_exponent_of_refined_level() {
    for m in 1..=2u32 {
        let n = 3 * m + 3;
        let r = Zpn::new(2, 3 * (m + 1) + 2);
        let kpp = LevelSpec::new(Family::KprimeP { n, m }, 2);
        let x = root_vector([2, 0, 0]).unwrap();
        let at = |e: u32| root_element(r, &x, r.p_pow(e));
        assert!(kpp.contains(&at(3 * (m + 1))).unwrap());
        assert!(!kpp.contains(&at(3 * (m + 1) - 1)).unwrap());
        assert_eq!(display_exponents(n, m, true)[0][5], 3 * (m + 1));
    }
}

#[test]
fn last_row_noise_separates_k_n_and_k_n_plus_one() {
    let r = Zpn::new(2, 10);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let gens = generator_set(&Pattern::last_row(6), r);
    let (k6, k7) = (LevelSpec::new(Family::K { n: 6 }, 2), LevelSpec::new(Family::K { n: 7 }, 2));
    let mut strict = 0;
    for _ in 0..300 {
        let g = sample_element(&gens, &mut rng, 2);
        assert!(k6.contains(&g).unwrap());
        strict += u32::from(!k7.contains(&g).unwrap());
    }
    assert!(strict > 0);
}

#[test]
fn modulus_and_prime_errors() {
    let spec = LevelSpec::new(Family::Kprime { n: 6, m: 1 }, 2);
    assert!(matches!(
        spec.contains(&GMatrix::identity(Zpn::new(2, 3))),
        Err(LevelError::ModulusTooSmall { .. })
    ));
    assert!(matches!(
        spec.contains(&GMatrix::identity(Zpn::new(3, 12))),
        Err(LevelError::PrimeMismatch { .. })
    ));
    assert!(LevelSpec::new(Family::K1 { n: 2 }, 2).pattern().is_err());
    assert!("Kprime n=6 p=4 m=1".parse::<LevelSpec>().is_err());
    assert!("Kprime n=6".parse::<LevelSpec>().is_err());
}

#[test]
fn forced_shape_round_trip() {
    let r = Zpn::new(3, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let h = random_h(&r, &mut rng);
        let g = u_conjugate_of_h(&h);
        let fs = forced_shape(&g).unwrap();
        assert_eq!(fs.f, h.f);
        assert_eq!(fs.reconstruct(&r), g.m);
    }
    let id = forced_shape(&GMatrix::identity(r)).unwrap();
    assert_eq!(id.f, [[[1, 0], [0, 1]]; 3]);
    let bad = root_element(r, &root_vector([-1, 1, 0]).unwrap(), 3);
    assert_eq!(forced_shape(&bad), Err(LevelError::NotForcedShape));
}

#[test]
fn sampled_h_is_congruent_and_equal_determinant() {
    let r = Zpn::new(2, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut rng2 = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..1000 {
        let h = sample_h_congruent(r, 1, &mut rng);
        assert_eq!(h, sample_h_congruent(r, 1, &mut rng2));
        assert!(Pattern::kernel(1).contains(&h.embed()));
        let d = gsp6_core::matrix::det2(&r, &h.f[0]);
        assert!(h.f.iter().all(|f| gsp6_core::matrix::det2(&r, f) == d));
    }
}

#[test]
fn exponent_patterns_with_multiplier_reading() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let rep = level_equivalence_check(2, 8, 1, 10, 2000, DisplayReading::MultiplierAware, false, &mut rng);
    assert_eq!(rep.violations, 0, "{:?}", rep.witnesses.first());
    let rep = level_equivalence_check(2, 8, 1, 10, 2000, DisplayReading::MultiplierAware, true, &mut rng);
    assert!(rep.violations > 0);
}

/// The literal `(1,1)` reading rejects `diag(nu, nu, nu, 1, 1, 1)`-type members.
#[test]
fn literal_reading_mismatch_witness() {
    let r = Zpn::new(2, 10);
    let nu = 3u64;
    let mut m = [[0u64; 6]; 6];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = if i < 3 { nu } else { 1 };
    }
    let g = GMatrix::new(r, m).unwrap();
    let (n, mm) = (8, 1);
    assert!(recipe_contains(&g, n, mm, mm));
    let e = display_exponents(n, mm, false);
    assert!(!display_contains(&g, &e, DisplayReading::Literal, n, mm));
    assert!(display_contains(&g, &e, DisplayReading::MultiplierAware, n, mm));
}

#[test]
fn intersection_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for p in [2, 3] {
        let rep = intersection_check(p, 6, 1, 1000, &mut rng).unwrap();
        assert!(rep.passed(), "{:?}", rep.witnesses.first());
    }
    assert!(matches!(intersection_check(2, 5, 1, 10, &mut rng), Err(LevelError::Range(_))));
}

#[test]
fn tower_counters() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let rep = tower_and_inclusion_checks(2, 6, 1, 8, 2000, &mut rng);
    assert!(rep.passed(), "{:?}", rep.witnesses.first());
    let refined: u64 = rep.get("eta_refined_violations").unwrap().parse().unwrap();
    assert!(refined > 0);
}

fn family_strategy() -> impl Strategy<Value = Family> {
    (1u32..20, 1u32..6, 1u32..6, 0usize..7).prop_map(|(n, m, d, i)| families(n, m, d)[i])
}

proptest! {
    #[test]
    fn spec_display_parses_back(fam in family_strategy(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let spec = LevelSpec::new(fam, p);
        prop_assert_eq!(spec.to_string().parse::<LevelSpec>().unwrap(), spec);
    }

    #[test]
    fn compiled_patterns_are_closed(fam in family_strategy()) {
        let pat = LevelSpec::new(fam, 2).pattern().unwrap();
        prop_assert!(pat.is_closed());
    }

    #[test]
    fn eta_round_trip_only_tightens(fam in family_strategy(), a in 0i32..3) {
        let pat = LevelSpec::new(fam, 2).pattern().unwrap();
        let fwd = pat.eta_conjugate(a);
        let back = fwd.eta_conjugate(-a);
        prop_assert!(pat.contains_pattern(&back));
        let clamped = (0..6).any(|i| (0..6).any(|j| {
            pat.e[i][j] as i32 + a * (ETA_EXP[i] as i32 - ETA_EXP[j] as i32) < 0
        }));
        if !clamped {
            prop_assert_eq!(back, pat);
        }
    }
}
