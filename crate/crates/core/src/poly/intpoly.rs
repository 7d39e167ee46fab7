use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::fp::FpPoly;
use crate::arith;
use crate::error::{Error, Result};

/// Dense polynomial over Z, lowest degree first, without trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * T^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// `T - 1`.
    pub fn t_minus_one() -> Self {
        Self::from_i64(&[-1, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Content carrying the sign of the leading coefficient, so that the primitive
    /// part has positive leading coefficient.
    pub fn signed_content(&self) -> BigInt {
        let c = self.content();
        match self.leading() {
            Some(lc) if lc.is_negative() => -c,
            _ => c,
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Division of every coefficient by `c`, which must be exact.
    pub fn div_scalar(&self, c: &BigInt) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|x| {
                    debug_assert!((x % c).is_zero());
                    x / c
                })
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// Quotient and remainder by a divisor whose leading coefficient is a unit.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> (IntPoly, IntPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lc = divisor.leading().unwrap();
        assert!(lc.abs().is_one(), "divisor must be monic up to sign");
        if self.coeffs.len() <= dd {
            return (IntPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * lc;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (IntPoly::new(quot), IntPoly::new(rem))
    }

    /// Exact quotient by a monic divisor, or `None` when it does not divide.
    pub fn div_exact_monic(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let (q, r) = self.div_rem_monic(divisor);
        r.is_zero().then_some(q)
    }

    /// `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        let db = b.degree().expect("pseudo-division by zero");
        let Some(da) = self.degree() else {
            return IntPoly::zero();
        };
        if da < db {
            return self.clone();
        }
        let lc = b.leading().unwrap();
        let mut r = self.coeffs.clone();
        let mut steps = da - db + 1;
        for k in (db..=da).rev() {
            // r <- lc * r - r[k] * T^(k-db) * b
            let top = r[k].clone();
            for c in r.iter_mut().take(k + 1) {
                *c *= lc;
            }
            if !top.is_zero() {
                for (j, bj) in b.coeffs.iter().enumerate() {
                    r[k - db + j] -= &top * bj;
                }
            }
            r[k] = BigInt::zero();
            steps -= 1;
        }
        debug_assert_eq!(steps, 0);
        r.truncate(db);
        IntPoly::new(r)
    }

    /// Reverses the coefficient order, i.e. `T^deg * P(1/T)`.
    pub fn reversed(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        (0..e).fold(IntPoly::constant(BigInt::one()), |acc, _| &acc * self)
    }

    /// Coefficients reduced into `[0, p)`.
    pub fn mod_p(&self, p: u64) -> Vec<u64> {
        let pb = BigInt::from(p);
        self.coeffs
            .iter()
            .map(|c| {
                let r = c.mod_floor(&pb);
                r.to_u64_digits().1.first().copied().unwrap_or(0)
            })
            .collect()
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            write_term(f, c, i as i64, first)?;
            first = false;
        }
        Ok(())
    }
}

/// Writes `c*T^e` with a leading sign, as part of a sum.
pub(crate) fn write_term(f: &mut fmt::Formatter<'_>, c: &BigInt, e: i64, first: bool) -> fmt::Result {
    let mag = c.abs();
    if first {
        if c.is_negative() {
            write!(f, "-")?;
        }
    } else {
        write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
    }
    let var = match e {
        0 => String::new(),
        1 => "T".into(),
        _ => format!("T^{e}"),
    };
    if e == 0 {
        write!(f, "{mag}")
    } else if mag.is_one() {
        write!(f, "{var}")
    } else {
        write!(f, "{mag}{var}")
    }
}

/// `(m, U1)` with `U = (T - 1)^m U1` and `U1(1) != 0`.
pub fn unit_root_factor(u: &IntPoly) -> Result<(u32, IntPoly)> {
    if u.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let x = IntPoly::t_minus_one();
    let mut rest = u.clone();
    let mut m = 0;
    while rest.eval_i64(1).is_zero() {
        rest = rest.div_exact_monic(&x).expect("root at 1");
        m += 1;
    }
    if m == 0 {
        return Err(Error::NoUnitRoot);
    }
    Ok((m, rest))
}

/// Resultant by the subresultant pseudo-remainder sequence.
pub fn resultant(a: &IntPoly, b: &IntPoly) -> Result<BigInt> {
    let (Some(mut da), Some(mut db)) = (a.degree(), b.degree()) else {
        return Err(Error::ZeroPolynomial);
    };
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut sign = false;
    if da < db {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut da, &mut db);
        sign = da % 2 == 1 && db % 2 == 1;
    }
    if db == 0 {
        let r = b.coeffs[0].pow(da as u32);
        return Ok(if sign { -r } else { r });
    }
    let ca = a.content();
    let cb = b.content();
    a = a.div_scalar(&ca);
    b = b.div_scalar(&cb);
    let t = ca.pow(db as u32) * cb.pow(da as u32);
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            sign = !sign;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return Ok(BigInt::zero());
        }
        a = b;
        b = r.div_scalar(&(&g * h.pow(delta)));
        g = a.leading().unwrap().clone();
        h = if delta == 0 { h } else { g.pow(delta) / h.pow(delta - 1) };
        if b.degree() == Some(0) {
            let da = a.degree().unwrap() as u32;
            let lb = b.coeffs[0].clone();
            let h_final = lb.pow(da) / h.pow(da - 1);
            let r = t * h_final;
            return Ok(if sign { -r } else { r });
        }
    }
}

/// Resultant computed modulo 62-bit primes and recombined, using the
/// Hadamard-type bound `|Res(a, b)| <= |a|_2^deg b * |b|_2^deg a`.
pub fn resultant_multimodular(a: &IntPoly, b: &IntPoly) -> Result<BigInt> {
    let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
        return Err(Error::ZeroPolynomial);
    };
    let log_norm = |p: &IntPoly| {
        let sq: BigInt = p.coeffs.iter().map(|c| c * c).sum();
        0.5 * bits_log2(&sq)
    };
    let bound = (db as f64 * log_norm(a) + da as f64 * log_norm(b)).ceil() as u64 + 2;
    let primes = arith::crt_primes(bound + 1);
    let residues: Vec<(u64, u64)> = primes
        .par_iter()
        .map(|&p| {
            let (ra, rb) = (FpPoly::new(p, a.mod_p(p)), FpPoly::new(p, b.mod_p(p)));
            // a leading coefficient vanishing mod p changes the resultant
            if ra.degree() != Some(da) || rb.degree() != Some(db) {
                (p, modular_fallback(a, b, p))
            } else {
                (p, ra.resultant(&rb))
            }
        })
        .collect();
    Ok(arith::crt_symmetric(&residues))
}

fn modular_fallback(a: &IntPoly, b: &IntPoly, p: u64) -> u64 {
    let r = resultant(a, b).expect("nonzero inputs");
    let m = r.mod_floor(&BigInt::from(p));
    m.to_u64_digits().1.first().copied().unwrap_or(0)
}

fn bits_log2(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 52 {
        let v = x.to_u64_digits().1.first().copied().unwrap_or(0) as f64;
        return if v == 0.0 { 0.0 } else { v.log2() };
    }
    let shift = bits - 52;
    let top = (x >> shift as usize).to_u64_digits().1.first().copied().unwrap_or(0) as f64;
    top.log2() + shift as f64
}

/// The d-th cyclotomic polynomial, from `prod_{e | d} (T^e - 1)^mu(d/e)`.
pub fn cyclotomic(d: u64) -> IntPoly {
    assert!(d >= 1);
    let mut num = IntPoly::constant(BigInt::one());
    let mut den = IntPoly::constant(BigInt::one());
    for e in arith::divisors(d) {
        let factor = &IntPoly::monomial(BigInt::one(), e as usize) - &IntPoly::constant(BigInt::one());
        match arith::mobius(d / e) {
            1 => num = &num * &factor,
            -1 => den = &den * &factor,
            _ => {}
        }
    }
    num.div_exact_monic(&den).expect("cyclotomic identity")
}

/// Phi_(ell^i)(T) = Phi_ell(T^(ell^(i-1))) for prime `ell` and `i >= 1`.
pub fn cyclotomic_prime_power(ell: u64, i: u32) -> IntPoly {
    assert!(i >= 1);
    let step = ell.pow(i - 1) as usize;
    let mut coeffs = vec![BigInt::zero(); step * (ell as usize - 1) + 1];
    for k in 0..ell as usize {
        coeffs[k * step] = BigInt::one();
    }
    IntPoly::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn unit_root_factors() {
        let (m, u1) = unit_root_factor(&p(&[-3, 6, -3])).unwrap();
        assert_eq!((m, u1), (2, p(&[-3])));
        // -(T - 1)^2 (1 + 4T + 10T^2 + 4T^3 + T^4)
        let u1 = p(&[-1, -4, -10, -4, -1]);
        let u = &(&IntPoly::t_minus_one() * &IntPoly::t_minus_one()) * &u1;
        assert_eq!(unit_root_factor(&u).unwrap(), (2, u1));
        assert_eq!(unit_root_factor(&p(&[7])).unwrap_err(), Error::NoUnitRoot);
    }

    #[test]
    fn multimodular_resultant_matches() {
        let phi = cyclotomic_prime_power(5, 1);
        assert_eq!(resultant_multimodular(&phi, &p(&[-3, 6, -3])).unwrap(), BigInt::from(2025));
        let big = cyclotomic_prime_power(3, 3);
        let q = p(&[5, -1, -3, 0, 7, 2, -9, 1, 1, 4]);
        assert_eq!(resultant_multimodular(&big, &q).unwrap(), resultant(&big, &q).unwrap());
        // leading coefficient divisible by one of the CRT primes is handled
        let lc = BigInt::from((1u64 << 62) - 57);
        let r = IntPoly::new(vec![BigInt::from(3), BigInt::one(), lc]);
        assert_eq!(resultant_multimodular(&q, &r).unwrap(), resultant(&q, &r).unwrap());
    }

    /// Determinant of the Sylvester matrix, independent of the PRS route.
    fn sylvester_resultant(a: &IntPoly, b: &IntPoly) -> BigInt {
        let (m, n) = (a.degree().unwrap(), b.degree().unwrap());
        let size = m + n;
        let mut rows = Vec::new();
        for i in 0..n {
            let mut row = vec![BigInt::zero(); size];
            for (j, c) in a.coeffs().iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        for i in 0..m {
            let mut row = vec![BigInt::zero(); size];
            for (j, c) in b.coeffs().iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        crate::matrix_tree::det_bareiss(&rows)
    }

    #[test]
    fn resultant_examples() {
        let phi5 = cyclotomic(5);
        assert_eq!(resultant(&phi5, &p(&[-1, 1])).unwrap(), BigInt::from(5));
        assert_eq!(resultant(&phi5, &p(&[-3, 6, -3])).unwrap(), BigInt::from(2025));
        assert_eq!(resultant(&p(&[-1, 1]), &p(&[1, 1])).unwrap(), BigInt::from(2));
        assert_eq!(resultant(&p(&[]), &p(&[1, 1])), Err(Error::ZeroPolynomial));
        assert_eq!(resultant(&p(&[7]), &p(&[1, 0, 1])).unwrap(), BigInt::from(49));
        assert!(resultant(&p(&[-1, 0, 1]), &p(&[1, 1])).unwrap().is_zero());
    }

    #[test]
    fn resultant_matches_sylvester() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let da = rng.gen_range(1..7);
            let db = rng.gen_range(1..7);
            let mut ca: Vec<i64> = (0..=da).map(|_| rng.gen_range(-9..=9)).collect();
            let mut cb: Vec<i64> = (0..=db).map(|_| rng.gen_range(-9..=9)).collect();
            ca[da] = rng.gen_range(1..=5);
            cb[db] = -rng.gen_range(1..=5);
            let (a, b) = (p(&ca), p(&cb));
            assert_eq!(resultant(&a, &b).unwrap(), sylvester_resultant(&a, &b), "{a} / {b}");
        }
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(1), p(&[-1, 1]));
        assert_eq!(cyclotomic(3), p(&[1, 1, 1]));
        assert_eq!(cyclotomic(4), p(&[1, 0, 1]));
        assert_eq!(cyclotomic(12), p(&[1, 0, -1, 0, 1]));
        for d in 1..60 {
            assert_eq!(cyclotomic(d).degree().unwrap() as u64, arith::euler_phi(d));
        }
        assert_eq!(cyclotomic_prime_power(3, 2), cyclotomic(9));
        assert_eq!(cyclotomic_prime_power(2, 4), cyclotomic(16));
        assert_eq!(cyclotomic_prime_power(5, 1), cyclotomic(5));
    }

    #[test]
    fn division_and_pseudo_remainder() {
        let u = p(&[-3, 6, -3]);
        let (q, r) = u.div_rem_monic(&IntPoly::t_minus_one());
        assert_eq!((q, r), (p(&[3, -3]), IntPoly::zero()));
        let a = p(&[1, 2, 3, 4]);
        let b = p(&[1, 2]);
        // 2^3 * a(-1/2) = 2
        assert_eq!(a.pseudo_rem(&b), p(&[2]));
        assert!(p(&[1, 2, 1]).is_palindromic());
        assert_eq!(p(&[1, 2, 3]).reversed(), p(&[3, 2, 1]));
        assert_eq!(p(&[-4, 6]).signed_content(), BigInt::from(2));
        assert_eq!(p(&[4, -6]).signed_content(), BigInt::from(-2));
    }
}
