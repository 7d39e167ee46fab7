use crate::arith::{mul_mod, pow_mod};

/// Polynomial over F_p, lowest degree first, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { p, coeffs }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    pub fn rem(&self, m: &FpPoly) -> FpPoly {
        let dm = m.degree().expect("reduction modulo zero polynomial");
        let mut r = self.coeffs.clone();
        let inv = self.inv(m.coeffs[dm]);
        let p = self.p;
        while r.len() > dm {
            let top = r.len() - 1;
            let c = mul_mod(r[top], inv, p);
            if c != 0 {
                let shift = top - dm;
                for (j, &mj) in m.coeffs.iter().enumerate() {
                    r[shift + j] = (r[shift + j] + p - mul_mod(c, mj, p)) % p;
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        FpPoly::new(p, r)
    }

    /// Monic gcd (the zero polynomial when both inputs vanish).
    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> FpPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lc) => {
                let inv = self.inv(lc);
                FpPoly::new(self.p, self.coeffs.iter().map(|&c| mul_mod(c, inv, self.p)).collect())
            }
        }
    }

    pub fn mul_mod(&self, other: &FpPoly, m: &FpPoly) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::new(self.p, Vec::new());
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        FpPoly::new(p, out).rem(m)
    }

    /// `T^exp mod m`.
    pub fn x_pow_mod(p: u64, mut exp: u64, m: &FpPoly) -> FpPoly {
        let mut acc = FpPoly::new(p, vec![1]).rem(m);
        let mut base = FpPoly::new(p, vec![0, 1]).rem(m);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            base = base.mul_mod(&base, m);
            exp >>= 1;
        }
        acc
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        FpPoly::new(self.p, (0..n).map(|i| (get(&self.coeffs, i) + get(&other.coeffs, i)) % self.p).collect())
    }

    /// Resultant over F_p by the Euclidean algorithm.
    pub fn resultant(&self, other: &FpPoly) -> u64 {
        let p = self.p;
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut acc = 1u64;
        loop {
            let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
                return 0;
            };
            if db == 0 {
                return mul_mod(acc, pow_mod(b.coeffs[0], da as u64, p), p);
            }
            let r = a.rem(&b);
            if r.is_zero() {
                return 0;
            }
            let dr = r.degree().unwrap();
            // Res(a, b) = (-1)^(da db) lc(b)^(da - dr) Res(b, r)
            acc = mul_mod(acc, pow_mod(b.coeffs[db], (da - dr) as u64, p), p);
            if da % 2 == 1 && db % 2 == 1 {
                acc = (p - acc) % p;
            }
            a = b;
            b = r;
        }
    }
}
