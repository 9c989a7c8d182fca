//! 6x6 matrices over `Z/p^N`, the symplectic form, and the fixed elements
//! `u`, `eta`, `w1`, `w2`, together with the embedding of `H`.
//!
//! Basis order is `e1, e2, e3, f3, f2, f1` (positions `0..6`).

use crate::zp::Zpn;
use thiserror::Error;

pub type Mat6 = [[u64; 6]; 6];
pub type IntMat6 = [[i64; 6]; 6];

/// Exponents of `eta(x) = diag(x^3, x^2, x^2, x, x, 1)`.
pub const ETA_EXP: [u32; 6] = [3, 2, 2, 1, 1, 0];

/// The matrix `T` in the off-diagonal block of `u`.
pub const T_BLOCK: [[i64; 3]; 3] = [[1, 1, 0], [1, 0, 1], [0, 1, 1]];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix is not a symplectic similitude")]
    NotSimilitude,
    #[error("multiplier {0} is not invertible")]
    MultiplierNotUnit(u64),
    #[error("determinants of the H components differ or are not units")]
    BadHPoint,
    #[error("matrix is not invertible")]
    Singular,
}

/// `J = (0 I'; -I' 0)` with `I'` the 3x3 anti-identity.
pub fn j_int() -> IntMat6 {
    let mut j = [[0i64; 6]; 6];
    for (i, row) in j.iter_mut().enumerate() {
        row[5 - i] = if i < 3 { 1 } else { -1 };
    }
    j
}

pub fn identity() -> Mat6 {
    let mut m = [[0u64; 6]; 6];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

pub fn int_identity() -> IntMat6 {
    let mut m = [[0i64; 6]; 6];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

pub fn from_int(r: &Zpn, m: &IntMat6) -> Mat6 {
    let mut out = [[0u64; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            out[i][j] = r.from_i64(m[i][j]);
        }
    }
    out
}

/// Signed representatives, for display and for integer tensor actions.
pub fn to_signed(r: &Zpn, m: &Mat6) -> [[i128; 6]; 6] {
    let mut out = [[0i128; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            out[i][j] = r.signed(m[i][j]);
        }
    }
    out
}

pub fn mul(r: &Zpn, a: &Mat6, b: &Mat6) -> Mat6 {
    let q = r.q as u128;
    let mut out = [[0u64; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            let mut s: u128 = 0;
            for k in 0..6 {
                s += a[i][k] as u128 * b[k][j] as u128;
            }
            out[i][j] = (s % q) as u64;
        }
    }
    out
}

/// Single entry of a product, used by early-exit membership tests.
#[inline]
pub fn mul_entry(r: &Zpn, a: &Mat6, b: &Mat6, i: usize, j: usize) -> u64 {
    let mut s: u128 = 0;
    for k in 0..6 {
        s += a[i][k] as u128 * b[k][j] as u128;
    }
    (s % r.q as u128) as u64
}

pub fn transpose(a: &Mat6) -> Mat6 {
    let mut out = [[0u64; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            out[j][i] = a[i][j];
        }
    }
    out
}

pub fn scale(r: &Zpn, a: &Mat6, c: u64) -> Mat6 {
    let mut out = *a;
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x = r.mul(*x, c);
        }
    }
    out
}

pub fn add(r: &Zpn, a: &Mat6, b: &Mat6) -> Mat6 {
    let mut out = *a;
    for i in 0..6 {
        for j in 0..6 {
            out[i][j] = r.add(a[i][j], b[i][j]);
        }
    }
    out
}

/// Inverse by Gaussian elimination with unit pivots.
pub fn inverse(r: &Zpn, a: &Mat6) -> Option<Mat6> {
    let mut m = *a;
    let mut inv = identity();
    for c in 0..6 {
        let piv = (c..6).find(|&i| r.is_unit(m[i][c]))?;
        m.swap(c, piv);
        inv.swap(c, piv);
        let s = r.inv(m[c][c])?;
        for j in 0..6 {
            m[c][j] = r.mul(m[c][j], s);
            inv[c][j] = r.mul(inv[c][j], s);
        }
        for i in 0..6 {
            if i != c && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..6 {
                    m[i][j] = r.sub(m[i][j], r.mul(f, m[c][j]));
                    inv[i][j] = r.sub(inv[i][j], r.mul(f, inv[c][j]));
                }
            }
        }
    }
    Some(inv)
}

/// `A^t J A` for a residue matrix.
pub fn gram(r: &Zpn, a: &Mat6) -> Mat6 {
    let j = from_int(r, &j_int());
    mul(r, &transpose(a), &mul(r, &j, a))
}

/// The unique `nu` with `A^t J A = nu J`, which must be a unit.
pub fn symplectic_multiplier(r: &Zpn, a: &Mat6) -> Result<u64, MatrixError> {
    let g = gram(r, a);
    let nu = g[0][5];
    let j = j_int();
    for i in 0..6 {
        for k in 0..6 {
            let want = r.mul(nu, r.from_i64(j[i][k]));
            if g[i][k] != want {
                return Err(MatrixError::NotSimilitude);
            }
        }
    }
    if !r.is_unit(nu) {
        return Err(MatrixError::MultiplierNotUnit(nu));
    }
    Ok(nu)
}

/// Exact multiplier over the integers (no unit requirement).
pub fn int_multiplier(a: &[[i128; 6]; 6]) -> Option<i128> {
    let j = j_int();
    let mut ja = [[0i128; 6]; 6];
    for i in 0..6 {
        for k in 0..6 {
            ja[i][k] = (0..6).map(|l| j[i][l] as i128 * a[l][k]).sum();
        }
    }
    let mut g = [[0i128; 6]; 6];
    for i in 0..6 {
        for k in 0..6 {
            g[i][k] = (0..6).map(|l| a[l][i] * ja[l][k]).sum();
        }
    }
    let nu = g[0][5];
    for i in 0..6 {
        for k in 0..6 {
            if g[i][k] != nu * j[i][k] as i128 {
                return None;
            }
        }
    }
    Some(nu)
}

/// `u = (I T; 0 I)`.
pub fn u_int() -> IntMat6 {
    let mut m = int_identity();
    for i in 0..3 {
        for j in 0..3 {
            m[i][3 + j] = T_BLOCK[i][j];
        }
    }
    m
}

/// `u^{-1} = (I -T; 0 I)`.
pub fn u_inv_int() -> IntMat6 {
    let mut m = int_identity();
    for i in 0..3 {
        for j in 0..3 {
            m[i][3 + j] = -T_BLOCK[i][j];
        }
    }
    m
}

/// `eta(p^a)` as a residue matrix (not invertible for `a > 0`).
pub fn eta_diag(r: &Zpn, a: u32) -> Mat6 {
    let mut m = [[0u64; 6]; 6];
    for i in 0..6 {
        m[i][i] = r.p_pow(a * ETA_EXP[i]);
    }
    m
}

pub fn w1_int() -> IntMat6 {
    let mut m = int_identity();
    m[0][0] = -1;
    m[5][5] = -1;
    m
}

pub fn w2_int() -> IntMat6 {
    let mut m = int_identity();
    m[1][1] = -1;
    m[4][4] = -1;
    m
}

/// `eta^{-a} g eta^{a}` for `a` of either sign. Entry `(i, j)` is scaled by
/// `p^{a (e_j - e_i)}`; returns `None` when a negative shift meets an entry
/// of too small valuation. Entries produced by division are only meaningful
/// modulo `p^{N - shift}`.
pub fn eta_conjugate(r: &Zpn, g: &Mat6, a: i32) -> Option<Mat6> {
    let mut out = [[0u64; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            let s = a * (ETA_EXP[j] as i32 - ETA_EXP[i] as i32);
            out[i][j] = if s >= 0 {
                r.mul(g[i][j], r.p_pow(s as u32))
            } else {
                r.div_p_pow(g[i][j], (-s) as u32)?
            };
        }
    }
    Some(out)
}

/// A symplectic similitude over `Z/p^N`, carrying its multiplier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GMatrix {
    pub ring: Zpn,
    pub m: Mat6,
    pub nu: u64,
}

impl GMatrix {
    pub fn new(ring: Zpn, m: Mat6) -> Result<Self, MatrixError> {
        let nu = symplectic_multiplier(&ring, &m)?;
        Ok(GMatrix { ring, m, nu })
    }

    pub fn from_int(ring: Zpn, m: &IntMat6) -> Result<Self, MatrixError> {
        Self::new(ring, from_int(&ring, m))
    }

    pub fn identity(ring: Zpn) -> Self {
        GMatrix { ring, m: identity(), nu: 1 % ring.q }
    }

    pub fn u(ring: Zpn) -> Self {
        Self::from_int(ring, &u_int()).expect("u is symplectic")
    }

    pub fn u_inv(ring: Zpn) -> Self {
        Self::from_int(ring, &u_inv_int()).expect("u^-1 is symplectic")
    }

    pub fn w1(ring: Zpn) -> Self {
        Self::from_int(ring, &w1_int()).expect("w1 is symplectic")
    }

    pub fn w2(ring: Zpn) -> Self {
        Self::from_int(ring, &w2_int()).expect("w2 is symplectic")
    }

    pub fn mul(&self, other: &GMatrix) -> GMatrix {
        GMatrix {
            ring: self.ring,
            m: mul(&self.ring, &self.m, &other.m),
            nu: self.ring.mul(self.nu, other.nu),
        }
    }

    /// `g^{-1} = nu^{-1} J^{-1} g^t J`.
    pub fn inv(&self) -> GMatrix {
        let r = &self.ring;
        let j = from_int(r, &j_int());
        let mut jinv = j;
        for row in jinv.iter_mut() {
            for x in row.iter_mut() {
                *x = r.neg(*x);
            }
        }
        let nu_inv = r.inv(self.nu).expect("multiplier is a unit");
        let m = scale(r, &mul(r, &jinv, &mul(r, &transpose(&self.m), &j)), nu_inv);
        GMatrix { ring: *r, m, nu: nu_inv }
    }

    pub fn pow(&self, mut e: u64) -> GMatrix {
        let mut base = self.clone();
        let mut acc = GMatrix::identity(self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn conjugate_by(&self, x: &GMatrix) -> GMatrix {
        x.mul(self).mul(&x.inv())
    }

    /// Re-run the similitude check; used after arithmetic paths that bypass
    /// the constructor.
    pub fn revalidate(&self) -> Result<(), MatrixError> {
        let nu = symplectic_multiplier(&self.ring, &self.m)?;
        if nu != self.nu {
            return Err(MatrixError::NotSimilitude);
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.m == identity()
    }
}

/// A 2x2 matrix over `Z/p^N`, `[[a, b], [c, d]]`.
pub type Mat2 = [[u64; 2]; 2];

pub fn det2(r: &Zpn, m: &Mat2) -> u64 {
    r.sub(r.mul(m[0][0], m[1][1]), r.mul(m[0][1], m[1][0]))
}

/// Positions of the three `GL2` factors inside the 6-dimensional space.
pub const H_SLOTS: [(usize, usize); 3] = [(0, 5), (1, 4), (2, 3)];

/// A point of `H = GL2 x_det GL2 x_det GL2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPoint {
    pub ring: Zpn,
    pub f: [Mat2; 3],
}

impl HPoint {
    pub fn new(ring: Zpn, f: [Mat2; 3]) -> Result<Self, MatrixError> {
        let d = det2(&ring, &f[0]);
        if !ring.is_unit(d) || det2(&ring, &f[1]) != d || det2(&ring, &f[2]) != d {
            return Err(MatrixError::BadHPoint);
        }
        Ok(HPoint { ring, f })
    }

    pub fn identity(ring: Zpn) -> Self {
        let i = [[1, 0], [0, 1]];
        HPoint { ring, f: [i, i, i] }
    }

    pub fn det(&self) -> u64 {
        det2(&self.ring, &self.f[0])
    }

    /// The embedding `Delta`: factor `i` acts on the plane `H_SLOTS[i]`.
    pub fn embed(&self) -> GMatrix {
        let mut m = [[0u64; 6]; 6];
        for (k, &(x, y)) in H_SLOTS.iter().enumerate() {
            let f = &self.f[k];
            m[x][x] = f[0][0];
            m[x][y] = f[0][1];
            m[y][x] = f[1][0];
            m[y][y] = f[1][1];
        }
        GMatrix { ring: self.ring, m, nu: self.det() }
    }

    /// Inverse of `embed` on block-shaped matrices.
    pub fn project(g: &GMatrix) -> Option<HPoint> {
        let mut f = [[[0u64; 2]; 2]; 3];
        let mut seen = [[false; 6]; 6];
        for (k, &(x, y)) in H_SLOTS.iter().enumerate() {
            f[k] = [[g.m[x][x], g.m[x][y]], [g.m[y][x], g.m[y][y]]];
            for &a in &[x, y] {
                for &b in &[x, y] {
                    seen[a][b] = true;
                }
            }
        }
        for i in 0..6 {
            for j in 0..6 {
                if !seen[i][j] && g.m[i][j] != 0 {
                    return None;
                }
            }
        }
        HPoint::new(g.ring, f).ok()
    }
}

/// `u^{-1} Delta(h) u`.
pub fn u_conjugate_of_h(h: &HPoint) -> GMatrix {
    let r = h.ring;
    GMatrix::u_inv(r).mul(&h.embed()).mul(&GMatrix::u(r))
}
