//! Arithmetic in `Z/p^N`.

/// The ring `Z/p^N`, elements stored as residues in `[0, p^N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Zpn {
    pub p: u64,
    pub n: u32,
    pub q: u64,
}

impl Zpn {
    /// Panics if `p^n` overflows 62 bits.
    pub fn new(p: u64, n: u32) -> Self {
        assert!(p >= 2, "modulus base must be at least 2");
        let mut q: u64 = 1;
        for _ in 0..n {
            q = q.checked_mul(p).filter(|&x| x < (1 << 62)).expect("p^N too large");
        }
        Zpn { p, n, q }
    }

    #[inline]
    pub fn reduce(&self, x: i128) -> u64 {
        x.rem_euclid(self.q as i128) as u64
    }

    #[inline]
    pub fn from_i64(&self, x: i64) -> u64 {
        self.reduce(x as i128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.q;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// `p^e` reduced; zero once `e >= n`.
    pub fn p_pow(&self, e: u32) -> u64 {
        if e >= self.n {
            0
        } else {
            self.p.pow(e)
        }
    }

    /// p-adic valuation of a residue, capped at `n` (so `val(0) == n`).
    pub fn val(&self, a: u64) -> u32 {
        if a == 0 {
            return self.n;
        }
        let mut v = 0;
        let mut x = a;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p)
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        let (mut r0, mut r1) = (self.q as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let k = r0 / r1;
            (r0, r1) = (r1, r0 - k * r1);
            (t0, t1) = (t1, t0 - k * t1);
        }
        if r0 != 1 {
            return None;
        }
        Some(self.reduce(t0))
    }

    /// Exact division `a / p^e` when `p^e | a`; the quotient is only
    /// determined modulo `p^(n-e)` and is returned as that residue.
    pub fn div_p_pow(&self, a: u64, e: u32) -> Option<u64> {
        if e == 0 {
            return Some(a);
        }
        if self.val(a) < e {
            return None;
        }
        Some(a / self.p.pow(e))
    }

    /// Signed representative in `(-q/2, q/2]`.
    pub fn signed(&self, a: u64) -> i128 {
        let a = a as i128;
        let q = self.q as i128;
        if a > q / 2 {
            a - q
        } else {
            a
        }
    }

    /// Whether `a ≡ b (mod p^e)`; `e` larger than `n` is treated as `n`.
    #[inline]
    pub fn congruent(&self, a: u64, b: u64, e: u32) -> bool {
        let m = self.p_pow(e.min(self.n));
        let m = if m == 0 { self.q } else { m };
        (a % m) == (b % m)
    }

    /// A generator of the cyclic group `mu_{p-1}` (Teichmüller lift of a
    /// primitive root), or `q - 1` when `p = 2`.
    pub fn root_of_unity(&self) -> u64 {
        if self.p == 2 {
            return self.neg(1);
        }
        let g = (2..self.p)
            .find(|&g| is_primitive_root(g, self.p))
            .expect("odd prime has a primitive root");
        // g^(p^(n-1)) is the Teichmüller representative.
        self.pow(g, self.p.pow(self.n.saturating_sub(1)))
    }
}

fn is_primitive_root(g: u64, p: u64) -> bool {
    let phi = p - 1;
    let mut f = phi;
    let mut d = 2;
    let mut factors = alloc::vec::Vec::new();
    while d * d <= f {
        if f.is_multiple_of(d) {
            factors.push(d);
            while f.is_multiple_of(d) {
                f /= d;
            }
        }
        d += 1;
    }
    if f > 1 {
        factors.push(f);
    }
    let r = Zpn { p, n: 1, q: p };
    factors.iter().all(|&l| r.pow(g, phi / l) != 1)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_valuation() {
        let r = Zpn::new(3, 5);
        for a in 1..r.q {
            if let Some(b) = r.inv(a) {
                assert_eq!(r.mul(a, b), 1);
            } else {
                assert!(r.val(a) > 0);
            }
        }
        assert_eq!(r.val(0), 5);
        assert_eq!(r.val(18), 2);
        assert_eq!(r.div_p_pow(18, 2), Some(2));
        assert_eq!(r.div_p_pow(18, 3), None);
    }

    #[test]
    fn teichmuller() {
        let r = Zpn::new(5, 6);
        let w = r.root_of_unity();
        assert_eq!(r.pow(w, 4), 1);
        assert_ne!(r.pow(w, 2), 1);
        let r2 = Zpn::new(2, 6);
        assert_eq!(r2.mul(r2.root_of_unity(), r2.root_of_unity()), 1);
    }
}
