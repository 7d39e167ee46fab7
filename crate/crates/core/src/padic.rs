//! Elements of Z_ell known modulo ell^N.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{self, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// An element of Z_ell known modulo ell^precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TruncatedPadic {
    ell: u64,
    precision: u32,
    residue: u64,
}

/// `ell^precision`, rejecting moduli that do not fit in 63 bits.
pub fn modulus(ell: u64, precision: u32) -> Result<u64> {
    match arith::checked_pow(ell, precision) {
        Some(m) if m < (1 << 63) => Ok(m),
        _ => Err(Error::ModulusOverflow { ell, precision }),
    }
}

impl TruncatedPadic {
    pub fn new(ell: u64, precision: u32, residue: u64) -> Result<Self> {
        arith::require_prime(ell)?;
        if precision == 0 {
            return Err(Error::Mismatch("precision must be at least 1".into()));
        }
        let m = modulus(ell, precision)?;
        Ok(Self { ell, precision, residue: residue % m })
    }

    pub fn zero(ell: u64, precision: u32) -> Result<Self> {
        Self::new(ell, precision, 0)
    }

    pub fn from_integer(ell: u64, precision: u32, value: i64) -> Result<Self> {
        let zero = Self::zero(ell, precision)?;
        let m = zero.modulus() as i128;
        let r = (value as i128).rem_euclid(m) as u64;
        Ok(Self { residue: r, ..zero })
    }

    /// Builds `d_0 + d_1 ell + d_2 ell^2 + ...`; missing digits are zero.
    pub fn from_digits(ell: u64, precision: u32, digits: &[u64]) -> Result<Self> {
        let zero = Self::zero(ell, precision)?;
        if digits.len() > precision as usize {
            return Err(Error::Mismatch(format!("{} digits given for precision {precision}", digits.len())));
        }
        let mut residue = 0u64;
        let mut place = 1u64;
        for &d in digits {
            if d >= ell {
                return Err(Error::Mismatch(format!("digit {d} out of range for ell = {ell}")));
            }
            residue += d * place;
            place = place.saturating_mul(ell);
        }
        Ok(Self { residue, ..zero })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.ell.pow(self.precision)
    }

    /// The image in Z/ell^n.
    pub fn reduce(&self, n: u32) -> Result<u64> {
        if n > self.precision {
            return Err(Error::PrecisionExceeded { level: n, precision: self.precision });
        }
        Ok(self.residue % self.ell.pow(n))
    }

    pub fn truncate(&self, n: u32) -> Result<Self> {
        let residue = self.reduce(n)?;
        Self::new(self.ell, n, residue)
    }

    /// Base-ell digits, lowest first, exactly `precision` of them.
    pub fn digits(&self) -> Vec<u64> {
        let mut r = self.residue;
        (0..self.precision)
            .map(|_| {
                let d = r % self.ell;
                r /= self.ell;
                d
            })
            .collect()
    }

    /// ell-adic valuation, or `None` when the element is zero to this precision.
    pub fn valuation(&self) -> Option<u32> {
        if self.residue == 0 {
            return None;
        }
        let mut r = self.residue;
        let mut v = 0;
        while r.is_multiple_of(self.ell) {
            r /= self.ell;
            v += 1;
        }
        Some(v)
    }

    /// Representative of least absolute value (ties resolve to the positive side).
    pub fn signed_lift(&self) -> i128 {
        let m = self.modulus() as i128;
        let r = self.residue as i128;
        if 2 * r > m {
            r - m
        } else {
            r
        }
    }

    fn common(&self, other: &Self) -> Result<(u32, u64)> {
        if self.ell != other.ell {
            return Err(Error::Mismatch(format!("ell {} vs {}", self.ell, other.ell)));
        }
        let n = self.precision.min(other.precision);
        Ok((n, self.ell.pow(n)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (n, m) = self.common(other)?;
        let s = ((self.residue % m) as u128 + (other.residue % m) as u128) % m as u128;
        Ok(Self { ell: self.ell, precision: n, residue: s as u64 })
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus();
        Self { residue: (m - self.residue) % m, ..*self }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (n, m) = self.common(other)?;
        Ok(Self { ell: self.ell, precision: n, residue: mul_mod(self.residue, other.residue, m) })
    }
}

impl fmt::Display for TruncatedPadic {
    /// Digits in the positional style `d0.d1d2d3...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.digits();
        let sep = if self.ell < 10 { "" } else { "," };
        write!(f, "{}.", digits[0])?;
        let rest: Vec<String> = digits[1..].iter().map(|d| d.to_string()).collect();
        write!(f, "{}... (mod {}^{})", rest.join(sep), self.ell, self.precision)
    }
}

/// Square root of `radicand` in Z_ell to `precision` digits, by Hensel lifting.
///
/// `branch` selects the root by its residue mod ell (mod 8 when ell = 2).
pub fn padic_sqrt(radicand: i64, ell: u64, precision: u32, branch: Option<u64>) -> Result<TruncatedPadic> {
    arith::require_prime(ell)?;
    let non_residue = Error::NonResidue { radicand, ell };
    if ell == 2 {
        if (radicand as i128).rem_euclid(8) != 1 {
            return Err(non_residue);
        }
        let branch = branch.ok_or(Error::AmbiguousBranch { radicand, ell })?;
        let bad_branch = Error::BadBranch { radicand, ell, branch };
        // work at >= 3 bits so the mod-8 selector is meaningful
        let work = precision.max(3);
        let m = modulus(2, work + 2)?;
        let d = (radicand as i128).rem_euclid(m as i128) as u64;
        // invariant: x^2 = d mod 2^k, and x agrees with a true root mod 2^(k-1)
        let mut x = 1u64;
        for k in 3..work + 2 {
            let next = 1u64 << (k + 1);
            if mul_mod(x, x, next) != d % next {
                x += 1 << (k - 1);
            }
        }
        let out_mod = 1u64 << work;
        let mut root = x % out_mod;
        if root % 8 != branch % 8 {
            root = (out_mod - root) % out_mod;
        }
        if branch >= 8 || root % 8 != branch {
            return Err(bad_branch);
        }
        return TruncatedPadic::new(2, precision, root);
    }
    let m = modulus(ell, precision)?;
    let d = (radicand as i128).rem_euclid(m as i128) as u64;
    if d.is_multiple_of(ell) || pow_mod(d % ell, (ell - 1) / 2, ell) != 1 {
        return Err(non_residue);
    }
    let branch = branch.ok_or(Error::AmbiguousBranch { radicand, ell })?;
    if branch >= ell || mul_mod(branch, branch, ell) != d % ell {
        return Err(Error::BadBranch { radicand, ell, branch });
    }
    // Newton: x <- x - (x^2 - d) / (2x), doubling the known digits each step
    let mut x = branch;
    let mut known = 1u32;
    while known < precision {
        known = (known * 2).min(precision);
        let mk = ell.pow(known);
        let fx = (mul_mod(x, x, mk) + mk - d % mk) % mk;
        let inv = mod_inverse(mul_mod(2, x, mk), mk).ok_or(Error::Inconsistent("2x not invertible".into()))?;
        x = (x + mk - mul_mod(fx, inv, mk)) % mk;
    }
    TruncatedPadic::new(ell, precision, x)
}

/// Inverse of `a` modulo `m` when it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}
