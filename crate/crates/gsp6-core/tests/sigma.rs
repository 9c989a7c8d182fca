//! Coset representatives `sigma_v` for `[K'_{6,1} : K'_{6,1(p)}]` at `p = 2`.

use gsp6_core::sigma::*;
use gsp6_core::cosets::CosetKeyer;
use gsp6_core::levels::{Family, LevelSpec};
use gsp6_core::matrix::{HPoint, GMatrix};
use gsp6_core::zp::Zpn;

#[test]
fn zero_parameters() {
    for f in [SigmaFormula::Literal, SigmaFormula::Corrected] {
        assert!(sigma_matrix(&SigmaParams::zero(), 2, 1, 8, f).unwrap().g.is_identity());
    }
}

#[test]
fn exhaustive_survey_frozen() {
    let s = sigma_coset_survey(2, 6, 1, 8, 1 << 20).unwrap();
    assert_eq!(s.total, 65536);
    assert_eq!((s.lifted, s.no_lift), (15232, 50304));
    assert_eq!((s.in_kprime, s.h_shaped), (15232, 15232));
    assert_eq!((s.distinct_inverse, s.distinct_direct, s.bfs_index), (4096, 4096, 4096));
    assert_eq!(s.mod_p_candidates, 16384);
    assert!(s.obstruction_explains);
    assert!(s.coverage());
    assert!(!s.all_lifted());
}

#[test]
fn literal_template_counts() {
    let mut counts = [0u32; 4];
    for i in 0..SigmaParams::count(2) {
        let v = SigmaParams::from_index(2, i);
        let a = sigma_matrix(&v, 2, 1, 8, SigmaFormula::Literal).is_ok();
        let b = sigma_matrix(&v, 2, 1, 8, SigmaFormula::Corrected).is_ok();
        counts[usize::from(a) * 2 + usize::from(b)] += 1;
    }
    // Every vector the literal template handles is also handled by the corrected one.
    assert_eq!(counts, [50304, 14248, 0, 984]);
}

#[test]
fn lifts_are_members_with_h_shape() {
    let ring = Zpn::new(2, 8);
    let kp = LevelSpec::new(Family::Kprime { n: 6, m: 1 }, 2);
    for v in sample_params(2).into_iter().chain((0..4096).map(|i| SigmaParams::from_index(2, i * 16 + 5))) {
        let Ok(l) = sigma_matrix(&v, 2, 1, 8, SigmaFormula::Corrected) else {
            continue;
        };
        assert!(mod_p_liftable(&v, 2));
        assert!(kp.contains(&l.g).unwrap());
        let conj = GMatrix::u(ring).mul(&l.g).mul(&GMatrix::u_inv(ring));
        assert!(HPoint::project(&conj).is_some());
        assert_eq!(lift_digits(&v, 2, 1, 8), Some(l.digits));
    }
}

#[test]
fn distinct_vectors_can_share_a_coset() {
    let ring = Zpn::new(2, 8);
    let kpp = LevelSpec::new(Family::KprimeP { n: 6, m: 1 }, 2).pattern().unwrap();
    let keyer = CosetKeyer::new(&kpp, ring);
    let lifted: Vec<GMatrix> = (0..SigmaParams::count(2))
        .filter_map(|i| sigma_matrix(&SigmaParams::from_index(2, i), 2, 1, 8, SigmaFormula::Corrected).ok())
        .map(|l| l.g)
        .take(2000)
        .collect();
    let mut keys = std::collections::BTreeMap::new();
    for g in &lifted {
        keys.entry(keyer.key(&g.inv())).or_insert_with(Vec::new).push(g.clone());
    }
    let shared = keys.values().find(|v| v.len() > 1).expect("repeated coset");
    assert!(same_coset(&keyer, &shared[0], &shared[1]));
}

#[test]
fn range_errors() {
    assert!(matches!(
        sigma_matrix(&SigmaParams::zero(), 2, 1, 3, SigmaFormula::Corrected),
        Err(SigmaError::Range { .. })
    ));
}
