use gsp6_core::centralizer::{centralizer_check, commutant_basis, commutant_dimension};
use gsp6_core::zp::Zpn;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn similitudes_in_the_commutant_come_from_h() {
    for l in [3, 5] {
        let mut rng = ChaCha8Rng::seed_from_u64(l);
        let rep = centralizer_check(l, 1000, &mut rng);
        assert!(rep.passed(), "{:?}", rep.witnesses.first());
        assert_eq!(rep.get("dimension"), Some("12"));
        assert_eq!(rep.get("similitudes_found"), Some("1000"));
    }
}

/// Basis elements are supported on the three `2 x 2` blocks of `Delta`.
#[test]
fn basis_support() {
    let blocks = [0usize, 1, 2, 2, 1, 0];
    for b in commutant_basis(&Zpn::new(5, 1)) {
        for (k, &x) in b.iter().enumerate() {
            if x != 0 {
                assert_eq!(blocks[k / 6], blocks[k % 6]);
            }
        }
    }
    assert_eq!(commutant_dimension(11), 12);
}
