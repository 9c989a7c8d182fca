//! The common centralizer of `w1 = diag(-1,1,1,1,1,-1)` and
//! `w2 = diag(1,-1,1,1,-1,1)` in `M_6(F_l)`, and its similitudes.

use crate::cosets::{generator_set, sample_element};
use crate::levels::Pattern;
use crate::matrix::{det2, GMatrix, HPoint, Mat2};
use crate::report::{Report, Witness};
use crate::zp::Zpn;
use alloc::format;
use alloc::vec::Vec;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Basis of the solution space of `M w_i = w_i M` (as flattened 6x6 matrices),
/// by Gaussian elimination on the 72 x 36 system over `F_l`.
pub fn commutant_basis(r: &Zpn) -> Vec<[u64; 36]> {
    let w1 = GMatrix::w1(*r).m;
    let w2 = GMatrix::w2(*r).m;
    let mut rows: Vec<[u64; 36]> = Vec::new();
    for w in [&w1, &w2] {
        for i in 0..6 {
            for j in 0..6 {
                // (M w - w M)_{ij} = sum_k M_ik w_kj - w_ik M_kj
                let mut row = [0u64; 36];
                for k in 0..6 {
                    row[i * 6 + k] = r.add(row[i * 6 + k], w[k][j]);
                    row[k * 6 + j] = r.sub(row[k * 6 + j], w[i][k]);
                }
                rows.push(row);
            }
        }
    }
    nullspace(r, rows)
}

fn nullspace(r: &Zpn, mut rows: Vec<[u64; 36]>) -> Vec<[u64; 36]> {
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for c in 0..36 {
        let Some(pr) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(rank, pr);
        let inv = r.inv(rows[rank][c]).expect("field");
        for x in rows[rank].iter_mut() {
            *x = r.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][c] != 0 {
                let f = rows[i][c];
                for k in 0..36 {
                    rows[i][k] = r.sub(rows[i][k], r.mul(f, rows[rank][k]));
                }
            }
        }
        pivot_cols.push(c);
        rank += 1;
    }
    let free: Vec<usize> = (0..36).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = [0u64; 36];
            v[fc] = 1;
            for (ri, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = r.neg(rows[ri][fc]);
            }
            v
        })
        .collect()
}

fn unflatten(v: &[u64; 36]) -> [[u64; 6]; 6] {
    core::array::from_fn(|i| core::array::from_fn(|j| v[i * 6 + j]))
}

/// A uniform-ish point of `H(F_l)`.
pub fn random_h(r: &Zpn, rng: &mut ChaCha8Rng) -> HPoint {
    let mut x = || rng.gen_range(0..r.q);
    let a1: Mat2 = loop {
        let a = [[x(), x()], [x(), x()]];
        if r.is_unit(det2(r, &a)) {
            break a;
        }
    };
    let det = det2(r, &a1);
    let mut follow = || -> Mat2 {
        loop {
            let (b, c, d) = (x(), x(), x());
            if let Some(di) = r.inv(d) {
                return [[r.mul(r.add(det, r.mul(b, c)), di), b], [c, d]];
            }
        }
    };
    let (a2, a3) = (follow(), follow());
    HPoint::new(*r, [a1, a2, a3]).expect("equal unit determinants")
}

/// Dimension of the commutant, `Delta(H)` commuting with `w1, w2`, random
/// similitudes in the commutant projecting to `H`, and `w1 K_G(d) w1 = K_G(d)`.
pub fn centralizer_check(l: u64, samples: u64, rng: &mut ChaCha8Rng) -> Report {
    let r = Zpn::new(l, 1);
    let mut rep = Report::new(format!("centralizer l={l}"));
    let basis = commutant_basis(&r);
    rep.value("dimension", basis.len());
    rep.check(basis.len() == 12, || Witness::text("dimension", format!("{}", basis.len())));
    let (w1, w2) = (GMatrix::w1(r), GMatrix::w2(r));
    for _ in 0..samples.min(200) {
        let h = random_h(&r, rng).embed();
        let ok = h.mul(&w1) == w1.mul(&h) && h.mul(&w2) == w2.mul(&h);
        rep.check(ok, || Witness::matrix("Delta(h) does not commute", &h.m));
    }
    let (mut draws, mut found) = (0u64, 0u64);
    while found < samples && draws < samples * 1000 {
        draws += 1;
        let mut v = [0u64; 36];
        for b in &basis {
            let c = rng.gen_range(0..l);
            for k in 0..36 {
                v[k] = r.add(v[k], r.mul(c, b[k]));
            }
        }
        let Ok(g) = GMatrix::new(r, unflatten(&v)) else { continue };
        found += 1;
        let ok = HPoint::project(&g).map(|h| h.embed() == g).unwrap_or(false);
        rep.check(ok, || Witness::matrix("similitude in commutant outside H", &g.m));
    }
    rep.value("similitudes_found", found);
    rep.value("similitude_draws", draws);
    rep.check(found == samples, || Witness::text("sampler", format!("{found} of {samples}")));
    for d in 1..=3u32 {
        let ring = Zpn::new(l, d + 2);
        let gens = generator_set(&Pattern::kernel(d), ring);
        let w = GMatrix::w1(ring);
        for _ in 0..20 {
            let g = sample_element(&gens, rng, 2);
            let c = w.mul(&g).mul(&w);
            rep.check(Pattern::kernel(d).contains(&c), || Witness::matrix(format!("w1 g w1 leaves K_G(p^{d})"), &c.m));
        }
    }
    rep
}

/// The `l = 2` degeneracy: `w1 = w2 = I` modulo 2 and the commutant is everything.
pub fn commutant_dimension(l: u64) -> usize {
    commutant_basis(&Zpn::new(l, 1)).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn dimension_twelve_for_odd_primes() {
        for l in [3, 5, 7] {
            assert_eq!(commutant_dimension(l), 12);
        }
        assert_eq!(commutant_dimension(2), 36);
    }

    #[test]
    fn check_passes_at_three() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rep = centralizer_check(3, 100, &mut rng);
        assert!(rep.passed(), "{rep:?}");
    }
}
