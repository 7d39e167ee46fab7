//! Budgeted factorization of spanning-tree counts.
//!
//! Trial division, perfect-power extraction and Brent's variant of Pollard rho.
//! Every reported prime carries a certificate: deterministic Miller-Rabin below
//! 3.3e24, a Pocklington proof above. Anything not split within budget is
//! left in the cofactor.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, is_prime_small, MR_DETERMINISTIC_BOUND};

const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;
const MAX_CERTIFICATE_DEPTH: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorBudget {
    pub trial_bound: u64,
    /// Total rho iterations per number.
    pub rho_iterations: u64,
    pub time_limit: Option<Duration>,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget { trial_bound: DEFAULT_TRIAL_BOUND, rho_iterations: 10_000_000, time_limit: None }
    }
}

impl FactorBudget {
    pub fn trial_only(bound: u64) -> Self {
        FactorBudget { trial_bound: bound, rho_iterations: 0, time_limit: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    pub value: BigUint,
    /// Certified primes in increasing order with exponents.
    pub factors: Vec<(BigUint, u32)>,
    /// Unfactored part, coprime to every listed prime; 1 when complete.
    pub cofactor: BigUint,
}

impl FactoredInteger {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    /// Number of distinct prime factors; a lower bound when incomplete.
    pub fn omega(&self) -> usize {
        self.factors.len() + usize::from(!self.is_complete())
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors.iter().find(|(q, _)| q == p).map_or(0, |(_, e)| *e)
    }

    /// `2^4 * 3^2 * 17 [* C]` style rendering.
    pub fn render(&self) -> String {
        if self.value.is_one() {
            return "1".to_string();
        }
        let mut parts: Vec<String> =
            self.factors.iter().map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") }).collect();
        if !self.is_complete() {
            parts.push(format!("[{}]", self.cofactor));
        }
        parts.join(" * ")
    }
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| arith::primes_up_to(DEFAULT_TRIAL_BOUND))
}

fn primes_to(bound: u64) -> Vec<u64> {
    if bound <= DEFAULT_TRIAL_BOUND {
        let all = small_primes();
        all[..all.partition_point(|&p| p <= bound)].to_vec()
    } else {
        arith::primes_up_to(bound)
    }
}

fn rem_u64(n: &BigUint, p: u64) -> u64 {
    let mut r: u128 = 0;
    for d in n.iter_u64_digits().rev() {
        r = ((r << 64) | d as u128) % p as u128;
    }
    r as u64
}

struct Factorer {
    budget: FactorBudget,
    deadline: Option<Instant>,
}

impl Factorer {
    fn out_of_time(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn run(&self, n: &BigUint, hints: &[BigUint], depth: u32) -> FactoredInteger {
        let mut found: BTreeMap<BigUint, u32> = BTreeMap::new();
        let mut rest = n.clone();
        if rest.is_zero() {
            return FactoredInteger { value: n.clone(), factors: Vec::new(), cofactor: rest };
        }
        for h in hints {
            if *h > BigUint::one() && (&rest % h).is_zero() && self.certify(h, depth) {
                let e = divide_out(&mut rest, h);
                *found.entry(h.clone()).or_default() += e;
            }
        }
        for p in primes_to(self.budget.trial_bound) {
            if rest.is_one() {
                break;
            }
            if rem_u64(&rest, p) == 0 {
                let pb = BigUint::from(p);
                let e = divide_out(&mut rest, &pb);
                *found.entry(pb).or_default() += e;
            }
            if let Some(r) = rest.to_u64() {
                if p.saturating_mul(p) > r {
                    break;
                }
            }
        }
        let mut stuck: Vec<(BigUint, u32)> = Vec::new();
        let mut queue: Vec<(BigUint, u32)> = if rest.is_one() { Vec::new() } else { vec![(rest, 1)] };
        while let Some((m, mult)) = queue.pop() {
            if m.is_one() {
                continue;
            }
            if self.certify(&m, depth) {
                *found.entry(m).or_default() += mult;
                continue;
            }
            if let Some((root, k)) = perfect_power(&m) {
                queue.push((root, mult * k));
                continue;
            }
            if arith::is_probable_prime(&m) || self.out_of_time() {
                stuck.push((m, mult));
                continue;
            }
            match self.rho(&m) {
                Some(d) => {
                    let other = &m / &d;
                    queue.push((d, mult));
                    queue.push((other, mult));
                }
                None => stuck.push((m, mult)),
            }
        }
        // keep the cofactor coprime to the listed primes
        let mut cofactor = BigUint::one();
        for (mut m, mult) in stuck {
            for (p, e) in found.iter_mut() {
                let k = divide_out(&mut m, p);
                *e += k * mult;
            }
            cofactor *= m.pow(mult);
        }
        FactoredInteger { value: n.clone(), factors: found.into_iter().collect(), cofactor }
    }

    fn certify(&self, n: &BigUint, depth: u32) -> bool {
        if let Some(small) = n.to_u128() {
            if small < MR_DETERMINISTIC_BOUND {
                return is_prime_small(small);
            }
        }
        if !arith::is_probable_prime(n) || depth >= MAX_CERTIFICATE_DEPTH {
            return false;
        }
        self.pocklington(n, depth)
    }

    /// Proves `n` prime from a certified factored part `F > sqrt(n)` of `n - 1`.
    fn pocklington(&self, n: &BigUint, depth: u32) -> bool {
        let n_minus_1 = n - 1u32;
        let partial = self.run(&n_minus_1, &[], depth + 1);
        let covered: BigUint = partial.factors.iter().map(|(q, e)| q.pow(*e)).product();
        if &covered * &covered <= *n {
            return false;
        }
        let one = BigUint::one();
        partial.factors.iter().all(|(q, _)| {
            (2u32..200).any(|a| {
                let a = BigUint::from(a);
                if a.modpow(&n_minus_1, n) != one {
                    return false;
                }
                let t = a.modpow(&(&n_minus_1 / q), n);
                let t = if t.is_zero() { n - 1u32 } else { t - 1u32 };
                t.gcd(n).is_one()
            })
        })
    }

    fn rho(&self, n: &BigUint) -> Option<BigUint> {
        if n.is_even() {
            return Some(BigUint::from(2u32));
        }
        let mut remaining = self.budget.rho_iterations;
        let mut c = 1u64;
        while remaining > 0 && c < 64 && !self.out_of_time() {
            let (d, used) = match n.to_u64() {
                Some(small) => {
                    let (d, used) = rho_u64(small, c, remaining);
                    (d.map(BigUint::from), used)
                }
                None => rho_big(n, c, remaining, self.deadline),
            };
            remaining = remaining.saturating_sub(used);
            if let Some(d) = d {
                if !d.is_one() && d != *n {
                    return Some(d);
                }
            }
            c += 1;
        }
        None
    }
}

fn divide_out(n: &mut BigUint, p: &BigUint) -> u32 {
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        *n = q;
        e += 1;
    }
}

/// `(r, k)` with `r^k = n`, `k > 1` prime, when such exists.
fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    let bits = n.bits() as u32;
    for k in arith::primes_up_to(u64::from(bits)) {
        let k = k as u32;
        let r = n.nth_root(k);
        if r.pow(k) == *n {
            return Some((r, k));
        }
    }
    None
}

const BATCH: u64 = 128;

fn rho_u64(n: u64, c: u64, limit: u64) -> (Option<u64>, u64) {
    let f = |x: u64| ((arith::mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
    let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
    let mut x = y;
    let mut ys = y;
    let mut used = 0;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = arith::mul_mod(q, x.abs_diff(y), n);
            }
            used += BATCH.min(r - k);
            g = q.gcd(&n);
            k += BATCH;
        }
        r *= 2;
        if used >= limit {
            break;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    ((g > 1 && g < n).then_some(g), used)
}

fn rho_big(n: &BigUint, c: u64, limit: u64, deadline: Option<Instant>) -> (Option<BigUint>, u64) {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let one = BigUint::one();
    let mut y = BigUint::from(2u32);
    let (mut r, mut used) = (1u64, 0u64);
    let mut q = one.clone();
    let mut g = one.clone();
    let mut x = y.clone();
    let mut ys = y.clone();
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..BATCH.min(r - k) {
                y = f(&y);
                q = (&q * diff(&x, &y)) % n;
            }
            used += BATCH.min(r - k);
            g = q.gcd(n);
            k += BATCH;
        }
        r *= 2;
        if used >= limit || deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
    }
    if g == *n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    let ok = !g.is_one() && g != *n;
    (ok.then_some(g), used)
}

pub fn factor_kappa(n: &BigUint, budget: &FactorBudget) -> FactoredInteger {
    factor_with_hints(n, budget, &[])
}

/// Like [`factor_kappa`], trying the primes in `hints` first.
pub fn factor_with_hints(n: &BigUint, budget: &FactorBudget, hints: &[BigUint]) -> FactoredInteger {
    let f = Factorer { budget: *budget, deadline: budget.time_limit.map(|d| Instant::now() + d) };
    f.run(n, hints, 0)
}

/// Whether `n` is prime, with a certificate found within the default budget.
pub fn is_certified_prime(n: &BigUint) -> bool {
    Factorer { budget: FactorBudget::default(), deadline: None }.certify(n, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(s: &str) -> BigUint {
        s.parse().unwrap()
    }

    fn product(fs: &[(u64, u32)]) -> BigUint {
        fs.iter().map(|&(p, e)| BigUint::from(p).pow(e)).product()
    }

    #[test]
    fn trivial_inputs() {
        let one = factor_kappa(&BigUint::one(), &FactorBudget::default());
        assert!(one.factors.is_empty() && one.is_complete());
        assert_eq!(one.omega(), 0);
        let f = factor_kappa(&BigUint::from(405u32), &FactorBudget::default());
        assert_eq!(f.render(), "3^4 * 5");
    }

    #[test]
    fn table_row_with_large_primes() {
        let n = product(&[(2, 4), (3, 4), (127, 2), (1621, 2), (3295783, 2), (22480434859526947, 2)]);
        let f = factor_kappa(&n, &FactorBudget::default());
        assert!(f.is_complete());
        assert_eq!(f.omega(), 6);
        assert_eq!(f.exponent_of(&big("22480434859526947")), 2);
    }

    #[test]
    fn semiprime_needs_rho() {
        let n = BigUint::from(1_000_003u64) * BigUint::from(998_244_353u64) * BigUint::from(1_000_000_007u64);
        let f = factor_kappa(&n, &FactorBudget::default());
        assert!(f.is_complete());
        assert_eq!(f.factors.len(), 3);
    }

    #[test]
    fn exhausted_budget_leaves_cofactor() {
        let n = BigUint::from(4u32) * BigUint::from(998_244_353u64) * BigUint::from(1_000_000_007u64);
        let f = factor_kappa(&n, &FactorBudget::trial_only(1000));
        assert_eq!(f.factors, vec![(BigUint::from(2u32), 2)]);
        assert_eq!(f.cofactor, BigUint::from(998_244_353u64) * BigUint::from(1_000_000_007u64));
        assert_eq!(f.omega(), 2);
        assert!(f.render().ends_with(']'));
    }

    #[test]
    fn pocklington_above_miller_rabin_range() {
        // 2^89 - 1 and 2^127 - 1 are prime
        let m89 = (BigUint::one() << 89u32) - 1u32;
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert!(is_certified_prime(&m89));
        assert!(is_certified_prime(&m127));
        assert!(!is_certified_prime(&(&m89 * &m127)));
        let f = factor_kappa(&(&m89 * &m89 * 9u32), &FactorBudget::default());
        assert_eq!(f.render(), format!("3^2 * {m89}^2"));
    }

    #[test]
    fn hints_are_used() {
        let p = BigUint::from(886538753u64);
        let n = &p * &p * 1024u32;
        let f = factor_with_hints(&n, &FactorBudget::trial_only(10), std::slice::from_ref(&p));
        assert!(f.is_complete());
        assert_eq!(f.exponent_of(&p), 2);
    }
}
