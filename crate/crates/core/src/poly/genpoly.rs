use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::intpoly::{write_term, IntPoly};
use crate::arith;
use crate::error::{Error, Result};
use crate::graph::Voltage;
use crate::padic::{self, TruncatedPadic};

/// A finitely supported sum `sum lambda_a T^a` with exponents `a` in Z_ell known mod ell^N.
///
/// Exponents are stored as residues in `[0, ell^N)`. When every exponent comes from
/// voltages declared as integers, `exponent_bound` holds a bound `B` with `|a| <= B`
/// for the true integer exponents, which is what allows lifting back to Laurent form.
#[derive(Clone, Debug)]
pub struct GenPoly {
    ell: u64,
    precision: u32,
    terms: BTreeMap<u64, BigInt>,
    exponent_bound: Option<u64>,
}

impl PartialEq for GenPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ell == other.ell
            && self.precision == other.precision
            && self.terms == other.terms
            && self.is_integral() == other.is_integral()
    }
}

impl Eq for GenPoly {}

impl GenPoly {
    pub fn zero(ell: u64, precision: u32) -> Result<Self> {
        padic::modulus(ell, precision)?;
        Ok(Self { ell, precision, terms: BTreeMap::new(), exponent_bound: Some(0) })
    }

    pub fn constant(ell: u64, precision: u32, c: BigInt) -> Result<Self> {
        let mut out = Self::zero(ell, precision)?;
        if !c.is_zero() {
            out.terms.insert(0, c);
        }
        Ok(out)
    }

    /// `c * T^e` for a voltage `e`.
    pub fn monomial(c: BigInt, e: &Voltage) -> Self {
        let value = e.value();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(value.residue(), c);
        }
        Self {
            ell: value.ell(),
            precision: value.precision(),
            terms,
            exponent_bound: e.as_integer().map(|a| a.unsigned_abs()),
        }
    }

    /// Builds an integral-exponent polynomial from `(exponent, coefficient)` pairs.
    pub fn from_laurent(ell: u64, precision: u32, terms: &[(i64, i64)]) -> Result<Self> {
        let mut out = Self::zero(ell, precision)?;
        for &(e, c) in terms {
            let v = Voltage::integer(ell, precision, e)?;
            out = out.add(&Self::monomial(BigInt::from(c), &v));
        }
        Ok(out)
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> u64 {
        self.ell.pow(self.precision)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(exponent residue, coefficient)` pairs in residue order.
    pub fn terms(&self) -> impl Iterator<Item = (TruncatedPadic, &BigInt)> + '_ {
        self.terms.iter().map(|(&e, c)| (TruncatedPadic::new(self.ell, self.precision, e).expect("valid modulus"), c))
    }

    /// True iff every exponent is a declared integer.
    pub fn is_integral(&self) -> bool {
        self.exponent_bound.is_some()
    }

    pub fn exponent_bound(&self) -> Option<u64> {
        self.exponent_bound
    }

    fn at_precision(&self, n: u32) -> Self {
        if n == self.precision {
            return self.clone();
        }
        let m = self.ell.pow(n);
        let mut terms: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (&e, c) in &self.terms {
            *terms.entry(e % m).or_default() += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Self { ell: self.ell, precision: n, terms, exponent_bound: self.exponent_bound }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        assert_eq!(self.ell, other.ell, "generalized polynomials over different ell");
        let n = self.precision.min(other.precision);
        (self.at_precision(n), other.at_precision(n))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.aligned(other);
        for (e, c) in b.terms {
            *a.terms.entry(e).or_default() += c;
        }
        a.terms.retain(|_, c| !c.is_zero());
        a.exponent_bound = match (self.exponent_bound, other.exponent_bound) {
            (Some(x), Some(y)) => Some(x.max(y)),
            _ => None,
        };
        a
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let m = a.modulus();
        let mut terms: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (&ea, ca) in &a.terms {
            for (&eb, cb) in &b.terms {
                let e = ((ea as u128 + eb as u128) % m as u128) as u64;
                *terms.entry(e).or_default() += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        let exponent_bound = match (self.exponent_bound, other.exponent_bound) {
            (Some(x), Some(y)) => x.checked_add(y),
            _ => None,
        };
        Self { ell: a.ell, precision: a.precision, terms, exponent_bound }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// `P(T^-1)`.
    pub fn invert_exponents(&self) -> Self {
        self.compose_power_signed(-1)
    }

    /// `P(T^c)`.
    pub fn compose_power(&self, c: u64) -> Self {
        self.compose_power_signed(c as i64)
    }

    fn compose_power_signed(&self, c: i64) -> Self {
        let m = self.modulus() as i128;
        let mut terms: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (&e, coeff) in &self.terms {
            let ne = (e as i128 * c as i128).rem_euclid(m) as u64;
            *terms.entry(ne).or_default() += coeff;
        }
        terms.retain(|_, c| !c.is_zero());
        Self {
            ell: self.ell,
            precision: self.precision,
            terms,
            exponent_bound: self.exponent_bound.and_then(|b| b.checked_mul(c.unsigned_abs())),
        }
    }

    /// Signed integer exponents, for integral polynomials whose exponents lift unambiguously.
    pub fn laurent_terms(&self) -> Result<Vec<(i64, BigInt)>> {
        let bound = self.exponent_bound.ok_or(Error::NonIntegralExponents)?;
        let modulus = self.modulus();
        if bound.saturating_mul(2) >= modulus {
            return Err(Error::ExponentLiftAmbiguous { bound, modulus });
        }
        let mut out: Vec<(i64, BigInt)> = self.terms().map(|(e, c)| (e.signed_lift() as i64, c.clone())).collect();
        out.sort_by_key(|(e, _)| *e);
        Ok(out)
    }

    /// Returns `(mu, g)` with `self = p^mu * g` and `g` of p-content zero.
    pub fn mu_invariant(&self, p: u64) -> Result<(u32, GenPoly)> {
        let mu = self.terms.values().filter_map(|c| arith::ord_p(c, p)).min().ok_or(Error::ZeroPolynomial)?;
        let divisor = BigInt::from(p).pow(mu);
        let mut g = self.clone();
        for c in g.terms.values_mut() {
            *c = &*c / &divisor;
        }
        Ok((mu, g))
    }

    /// `(U, b)` with `U(T) = T^b P(T)` in Z[T] and `U(0) != 0`.
    pub fn integerize(&self) -> Result<(IntPoly, i64)> {
        let terms = self.laurent_terms()?;
        let (Some(lo), Some(hi)) = (terms.first().map(|t| t.0), terms.last().map(|t| t.0)) else {
            return Err(Error::ZeroPolynomial);
        };
        let mut coeffs = vec![BigInt::zero(); (hi - lo) as usize + 1];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] = c;
        }
        Ok((IntPoly::new(coeffs), -lo))
    }

    /// The image in Z[T]/(T^(ell^n) - 1), as a polynomial of degree below ell^n.
    ///
    /// Beyond the stored precision this is only defined for integral exponents.
    pub fn reduce_level(&self, n: u32) -> Result<IntPoly> {
        let size = arith::checked_pow(self.ell, n)
            .filter(|&s| s <= 1 << 26)
            .ok_or(Error::ModulusOverflow { ell: self.ell, precision: n })?;
        let mut coeffs = vec![BigInt::zero(); size as usize];
        if n <= self.precision {
            for (&e, c) in &self.terms {
                coeffs[(e % size) as usize] += c;
            }
        } else {
            if !self.is_integral() {
                return Err(Error::PrecisionExceeded { level: n, precision: self.precision });
            }
            for (e, c) in self.laurent_terms()? {
                coeffs[(e as i128).rem_euclid(size as i128) as usize] += c;
            }
        }
        Ok(IntPoly::new(coeffs))
    }

    pub fn one_like(&self) -> Self {
        Self::constant(self.ell, self.precision, BigInt::one()).expect("valid modulus")
    }

    pub fn zero_like(&self) -> Self {
        Self::zero(self.ell, self.precision).expect("valid modulus")
    }
}

impl fmt::Display for GenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if let Ok(terms) = self.laurent_terms() {
            for (i, (e, c)) in terms.iter().enumerate() {
                write_term(f, c, *e, i == 0)?;
            }
            return Ok(());
        }
        for (i, (e, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})T^[{}]", e.residue())?;
        }
        write!(f, "  (exponents mod {}^{})", self.ell, self.precision)
    }
}
