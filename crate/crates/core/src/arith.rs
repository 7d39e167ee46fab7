//! Small-integer number theory shared by the rest of the crate.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn mul_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    if let (Ok(a64), Ok(b64), Ok(m64)) = (u64::try_from(a), u64::try_from(b), u64::try_from(m)) {
        return mul_mod(a64, b64, m64) as u128;
    }
    // double-and-add; only reached for moduli above 2^64
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod_u128(acc, a, m);
        }
        a = add_mod_u128(a, a, m);
        b >>= 1;
    }
    acc
}

fn add_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    let (s, over) = a.overflowing_add(b);
    if over || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

fn pow_mod_u128(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u128(acc, base, m);
        }
        base = mul_mod_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Bases for which Miller-Rabin is deterministic below 3.3 * 10^24.
const MR_BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Bound below which [`MR_BASES`] certify primality.
pub const MR_DETERMINISTIC_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

fn miller_rabin_u128(n: u128, bases: &[u128]) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in bases {
        let mut x = pow_mod_u128(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u128(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Deterministic primality for `n` below [`MR_DETERMINISTIC_BOUND`].
pub fn is_prime_small(n: u128) -> bool {
    debug_assert!(n < MR_DETERMINISTIC_BOUND);
    miller_rabin_u128(n, &MR_BASES)
}

pub fn is_prime(n: u64) -> bool {
    is_prime_small(n as u128)
}

/// Strong probable-prime test on arbitrary integers with the fixed base set.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Ok(small) = u128::try_from(n) {
        if small < MR_DETERMINISTIC_BOUND {
            return is_prime_small(small);
        }
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// `base^exp` as a `u64`, or `None` on overflow.
pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

/// Euler phi of `ell^i` for prime `ell`.
pub fn phi_prime_power(ell: u64, i: u32) -> u64 {
    if i == 0 {
        1
    } else {
        (ell - 1) * ell.pow(i - 1)
    }
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            while n.is_multiple_of(q) {
                n /= q;
            }
            result -= result / q;
        }
        q += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Prime factors of `n` with multiplicity, by trial division.
pub fn small_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q * q <= n {
        let mut e = 0;
        while n.is_multiple_of(q) {
            n /= q;
            e += 1;
        }
        if e > 0 {
            out.push((q, e));
        }
        q += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..).take_while(|d| d * d <= n).filter(|d| n.is_multiple_of(*d)).collect();
    let upper: Vec<u64> = out.iter().rev().map(|d| n / d).filter(|&q| q * q != n).collect();
    out.extend(upper);
    out
}

pub fn mobius(n: u64) -> i32 {
    let mut sign = 1;
    for (_, e) in small_factors(n) {
        if e > 1 {
            return 0;
        }
        sign = -sign;
    }
    sign
}

/// Multiplicative order of `a` modulo `m`, where `a` is a unit and `phi` is `phi(m)`.
pub fn multiplicative_order(a: u64, m: u64, phi: u64) -> u64 {
    let mut order = phi;
    for (q, _) in small_factors(phi) {
        while order.is_multiple_of(q) && pow_mod(a, order / q, m) == 1 {
            order /= q;
        }
    }
    order
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn ord_p(n: &BigInt, p: u64) -> Option<u32> {
    ord_p_unsigned(n.magnitude(), p)
}

pub fn ord_p_unsigned(n: &BigUint, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p_big = BigUint::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&p_big);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// All primes `<= n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

/// Distinct primes just below 2^62 whose product has at least `bits` bits.
pub fn crt_primes(bits: u64) -> Vec<u64> {
    let count = bits.div_ceil(61) as usize;
    let mut out = Vec::with_capacity(count);
    let mut candidate = (1u64 << 62) - 1;
    while out.len() < count {
        if is_prime(candidate) {
            out.push(candidate);
        }
        candidate -= 2;
    }
    out
}

/// The residue of least absolute value modulo the product of the primes.
pub fn crt_symmetric(residues: &[(u64, u64)]) -> BigInt {
    let mut value = BigUint::zero();
    let mut modulus = BigUint::one();
    for &(p, r) in residues {
        let p_big = BigUint::from(p);
        let current = (&value % &p_big).to_u64_digits().first().copied().unwrap_or(0);
        let m_mod_p = (&modulus % &p_big).to_u64_digits().first().copied().unwrap_or(0);
        let inv = crate::padic::mod_inverse(m_mod_p, p).expect("distinct primes");
        let t = mul_mod((r + p - current) % p, inv, p);
        value += &modulus * t;
        modulus *= p_big;
    }
    let half = &modulus >> 1;
    if value > half {
        BigInt::from(value) - BigInt::from(modulus)
    } else {
        BigInt::from(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_range_matches_sieve() {
        let sieve = primes_up_to(10_000);
        let tested: Vec<u64> = (0..=10_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, tested);
    }

    #[test]
    fn primality_large() {
        assert!(is_prime(22_480_434_859_526_947));
        assert!(is_prime(886_538_753));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2, 3, 5, 7
        assert!(is_probable_prime(&(BigUint::from(2u32).pow(127) - 1u32)));
        assert!(!is_probable_prime(&(BigUint::from(2u32).pow(128) + 1u32)));
    }

    #[test]
    fn orders() {
        assert_eq!(multiplicative_order(2, 9, 6), 6);
        assert_eq!(multiplicative_order(17, 9, 6), 2);
        assert_eq!(multiplicative_order(109, 81, 54), 3);
    }

    #[test]
    fn valuations() {
        assert_eq!(ord_p(&BigInt::from(-48), 2), Some(4));
        assert_eq!(ord_p(&BigInt::from(7), 3), Some(0));
        assert_eq!(ord_p(&BigInt::zero(), 3), None);
    }

    #[test]
    fn mobius_and_phi() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(euler_phi(36), 12);
        assert_eq!(phi_prime_power(5, 3), 100);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }
}
