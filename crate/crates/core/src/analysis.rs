//! p-adic behaviour of spanning-tree counts along a tower: level norms,
//! inertia data, the stabilization level `n0`, the constants `mu` and `nu`,
//! and an exact fit of the ell-part law.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, checked_pow, multiplicative_order, ord_p, ord_p_unsigned, phi_prime_power};
use crate::cover::derived_graph;
use crate::error::{Error, Result};
use crate::graph::VoltageAssignment;
use crate::matrix_tree::{spanning_tree_count_with, DeterminantConfig};
use crate::poly::{cyclotomic_prime_power, resultant_multimodular, FpPoly, GenPoly, IntPoly};
use crate::tower::{Tower, TowerTable};

/// Norms of cyclotomic degree up to this are computed on demand when `nu`
/// needs a level the table does not cover.
pub const ON_DEMAND_NORM_DEGREE: u64 = 256;

/// `N_i = prod f(zeta)` over the primitive `ell^i`-th roots of unity, as
/// `Res(Phi_(ell^i), P)` with `P` the level-`i` reduction of `f`. `N_0 = 1`.
pub fn level_norm(f: &GenPoly, i: u32) -> Result<BigInt> {
    if i == 0 {
        return Ok(BigInt::one());
    }
    let phi = cyclotomic_prime_power(f.ell(), i);
    let (_, r) = f.reduce_level(i)?.div_rem_monic(&phi);
    if r.is_zero() {
        return Ok(BigInt::zero());
    }
    resultant_multimodular(&phi, &r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InertiaData {
    /// Order of `p` modulo `ell^i`.
    pub f: u64,
    /// Number of primes above `p` in the `ell^i`-th cyclotomic field.
    pub r: u64,
}

pub fn inertia_degree(p: u64, ell: u64, i: u32) -> Result<InertiaData> {
    arith::require_prime(p)?;
    arith::require_prime(ell)?;
    if p == ell {
        return Err(Error::PrimeEqualsEll(p));
    }
    if i == 0 {
        return Ok(InertiaData { f: 1, r: 1 });
    }
    let m = checked_pow(ell, i).ok_or(Error::ModulusOverflow { ell, precision: i })?;
    let phi = phi_prime_power(ell, i);
    let f = multiplicative_order(p % m, m, phi);
    Ok(InertiaData { f, r: phi / f })
}

/// The number of primes above `p` once it no longer changes with the level.
pub fn eventual_prime_count(p: u64, ell: u64) -> Result<u64> {
    let start = if ell == 2 { 2 } else { 1 };
    let mut i = start;
    loop {
        let here = inertia_degree(p, ell, i)?;
        let next = inertia_degree(p, ell, i + 1)?;
        if next.f == ell * here.f {
            return Ok(here.r);
        }
        i += 1;
    }
}

/// Whether `u` has a root of exact order `ell^i` over an algebraic closure of F_p.
fn has_root_of_order(u: &FpPoly, ell: u64, i: u32) -> bool {
    if u.degree().unwrap_or(0) == 0 {
        return false;
    }
    let p = u.characteristic();
    // Phi_(ell^i)(T) = sum_(k < ell) T^(k ell^(i-1)), reduced modulo u
    let x = FpPoly::x_pow_mod(p, ell.pow(i - 1), u);
    let mut power = FpPoly::new(p, vec![1]).rem(u);
    let mut phi = FpPoly::new(p, Vec::new());
    for _ in 0..ell {
        phi = phi.add(&power);
        power = power.mul_mod(&x, u);
    }
    u.gcd(&phi).degree().unwrap_or(0) > 0
}

/// Details of an `n0` computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct N0Search {
    pub n0: u32,
    /// True when all levels past the search range are provably good.
    pub certified: bool,
    pub checked_up_to: u32,
    /// Levels `i` at which `g` vanishes modulo a prime above `p` at a
    /// primitive `ell^i`-th root of unity.
    pub bad_levels: Vec<u32>,
}

/// Scans levels for roots of `g mod p` among ell-power roots of unity.
///
/// With integral exponents the scan stops at the first level whose inertia
/// degree exceeds the degree of the reduction, which certifies the answer.
/// Otherwise it runs to `max_level`.
pub fn n0_details(g: &GenPoly, p: u64, max_level: u32) -> Result<N0Search> {
    let ell = g.ell();
    if p == ell {
        return Err(Error::PrimeEqualsEll(p));
    }
    let (mu, _) = g.mu_invariant(p)?;
    if mu > 0 {
        return Err(Error::Inapplicable(mu));
    }
    let mut bad_levels = Vec::new();
    if g.is_integral() {
        let (u, _) = g.integerize()?;
        let ubar = FpPoly::new(p, u.mod_p(p));
        let d = ubar.degree().unwrap_or(0) as u64;
        let mut i = 1;
        while inertia_degree(p, ell, i)?.f <= d {
            if has_root_of_order(&ubar, ell, i) {
                bad_levels.push(i);
            }
            i += 1;
        }
        let n0 = bad_levels.last().map_or(1, |&b| b + 1);
        return Ok(N0Search { n0, certified: true, checked_up_to: i - 1, bad_levels });
    }
    for i in 1..=max_level {
        let phi = FpPoly::new(p, cyclotomic_prime_power(ell, i).mod_p(p));
        let reduced = FpPoly::new(p, g.reduce_level(i)?.mod_p(p)).rem(&phi);
        if phi.gcd(&reduced).degree().unwrap_or(0) > 0 {
            bad_levels.push(i);
        }
    }
    let n0 = bad_levels.last().map_or(1, |&b| b + 1);
    Ok(N0Search { n0, certified: false, checked_up_to: max_level, bad_levels })
}

/// The least `n0 >= 1` past which `g` has no zero modulo primes above `p` at
/// ell-power roots of unity. Uncertified results come back as
/// [`Error::Inconclusive`].
pub fn n0_search(g: &GenPoly, p: u64, max_level: u32) -> Result<u32> {
    let s = n0_details(g, p, max_level)?;
    if s.certified {
        Ok(s.n0)
    } else {
        Err(Error::Inconclusive { empirical: s.n0, checked_up_to: s.checked_up_to })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizationBounds {
    /// Degree of `U mod p`.
    pub reduced_degree: usize,
    /// Least `i` with inertia degree above `reduced_degree`.
    pub n1: u32,
    pub eventual_prime_count: u64,
    /// `log_ell(r ell / (ell - 1) deg U mod p)`, absent when that degree is 0.
    pub log_bound: Option<f64>,
    /// First integer level beyond `log_bound`.
    pub log_level: u32,
}

pub fn stabilization_bounds(u: &IntPoly, p: u64, ell: u64) -> Result<StabilizationBounds> {
    arith::require_prime(p)?;
    if p == ell {
        return Err(Error::PrimeEqualsEll(p));
    }
    let mu = u.coeffs().iter().filter_map(|c| ord_p(c, p)).min().ok_or(Error::ZeroPolynomial)?;
    if mu > 0 {
        return Err(Error::Inapplicable(mu));
    }
    let d = FpPoly::new(p, u.mod_p(p)).degree().unwrap_or(0);
    let mut n1 = 1;
    while inertia_degree(p, ell, n1)?.f <= d as u64 {
        n1 += 1;
    }
    let r = eventual_prime_count(p, ell)?;
    let log_bound = (d > 0).then(|| (r as f64 * ell as f64 / (ell as f64 - 1.0) * d as f64).ln() / (ell as f64).ln());
    let log_level = log_bound.map_or(1, |b| (b.floor() as u32 + 1).max(1));
    Ok(StabilizationBounds { reduced_degree: d, n1, eventual_prime_count: r, log_bound, log_level })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum N0Status {
    Certified,
    /// No certificate exists for ell-adic exponents; levels up to the bound were scanned.
    Empirical {
        checked_up_to: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeAnalysisReport {
    pub p: u64,
    pub ell: u64,
    pub mu: u32,
    pub n0: u32,
    pub n0_status: N0Status,
    /// Absent only when a norm needed for it is out of reach.
    pub nu: Option<i64>,
    pub bad_levels: Vec<u32>,
    pub stabilization: Option<StabilizationBounds>,
    /// `ord_p(kappa_n)` for `n = 0..=depth`.
    pub observed: Vec<u32>,
    /// `mu ell^n + nu` from `n0` on; exact level values below.
    pub predicted: Vec<Option<i64>>,
    /// Whether `p` divides some `kappa_n`; `None` when undecided.
    pub divides_any: Option<bool>,
}

impl PrimeAnalysisReport {
    /// Predicted and observed agree at every computed level `n >= n0`.
    pub fn law_holds(&self) -> bool {
        self.observed
            .iter()
            .zip(&self.predicted)
            .enumerate()
            .filter(|(n, _)| *n as u32 >= self.n0)
            .all(|(_, (&o, pr))| pr.is_none_or(|v| v == o as i64))
    }

    /// Levels `n >= n0` where a prediction was compared with an observation.
    pub fn checked_levels(&self) -> Vec<u32> {
        self.predicted
            .iter()
            .enumerate()
            .filter(|(n, pr)| *n as u32 >= self.n0 && pr.is_some())
            .map(|(n, _)| n as u32)
            .collect()
    }
}

/// Full analysis of `p` on a tower whose exact data is in `table`.
pub fn analyze_prime(tower: &Tower, table: &TowerTable, p: u64) -> Result<PrimeAnalysisReport> {
    arith::require_prime(p)?;
    let ell = tower.ell();
    if p == ell {
        return Err(Error::PrimeEqualsEll(p));
    }
    let (mu, g) = tower.f().mu_invariant(p)?;
    let search = n0_details(&g, p, tower.precision())?;
    let n0 = search.n0;
    let n0_status = if search.certified {
        N0Status::Certified
    } else {
        N0Status::Empirical { checked_up_to: search.checked_up_to }
    };

    let norm_valuation = |i: u32| -> Option<i64> {
        if let Some(n) = table.norm(i) {
            return ord_p(n, p).map(i64::from);
        }
        if phi_prime_power(ell, i) > ON_DEMAND_NORM_DEGREE {
            return None;
        }
        level_norm(tower.f(), i).ok().and_then(|n| ord_p(&n, p)).map(i64::from)
    };
    let base = ord_p_unsigned(tower.kappa_base(), p).unwrap_or(0) as i64;
    let ell_pow = |n: u32| checked_pow(ell, n).map(|v| v as i64);
    let mu_i = mu as i64;
    let nu = (|| {
        let mut acc = base;
        for i in 1..n0 {
            acc += norm_valuation(i)?;
        }
        // at n0 itself the norm valuation is phi(ell^n0) mu; use the computed one when available
        let top = norm_valuation(n0).unwrap_or(phi_prime_power(ell, n0) as i64 * mu_i);
        Some(acc + top - mu_i * ell_pow(n0)?)
    })();

    let observed = table.valuations(p);
    let predicted =
        (0..=table.depth())
            .map(|n| {
                if n >= n0 {
                    nu.and_then(|v| Some(mu_i * ell_pow(n)? + v))
                } else {
                    Some(observed[n as usize] as i64)
                }
            })
            .collect();

    let divides_any = if mu > 0 || base > 0 || observed.iter().any(|&v| v > 0) {
        Some(true)
    } else if search.certified {
        Some(n0 > 1)
    } else {
        None
    };

    let stabilization = if tower.is_integral() && mu == 0 {
        let (u, _) = tower.f().integerize()?;
        Some(stabilization_bounds(&u, p, ell)?)
    } else {
        None
    };

    Ok(PrimeAnalysisReport {
        p,
        ell,
        mu,
        n0,
        n0_status,
        nu,
        bad_levels: search.bad_levels,
        stabilization,
        observed,
        predicted,
        divides_any,
    })
}

/// Exact fit of `mu ell^n + lambda n + nu` to the tail of a valuation sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllFit {
    pub mu: i64,
    pub lambda: i64,
    pub nu: i64,
    pub onset: u32,
}

/// Finds the least onset `n >= 1` such that one law with integer `mu, lambda >= 0`
/// matches every value from `n` on, with at least three points in the tail.
/// `Ok(None)` when no onset works.
pub fn iwasawa_fit_ell(ell: u64, observed: &[u32]) -> Result<Option<EllFit>> {
    if observed.len() < 4 {
        return Err(Error::InsufficientData { needed: 4, got: observed.len() });
    }
    let y: Vec<i128> = observed.iter().map(|&v| v as i128).collect();
    let l = ell as i128;
    let pow = |n: usize| l.checked_pow(n as u32);
    for k in 1..=y.len() - 3 {
        let Some(lk) = pow(k) else { break };
        let d1 = y[k + 1] - y[k];
        let d2 = y[k + 2] - y[k + 1];
        let denom = lk * (l - 1) * (l - 1);
        if (d2 - d1) % denom != 0 {
            continue;
        }
        let mu = (d2 - d1) / denom;
        let lambda = d1 - mu * lk * (l - 1);
        if mu < 0 || lambda < 0 {
            continue;
        }
        let nu = y[k] - mu * lk - lambda * k as i128;
        let fits = (k..y.len()).all(|n| pow(n).is_some_and(|ln| mu * ln + lambda * n as i128 + nu == y[n]));
        if fits {
            return Ok(Some(EllFit { mu: mu as i64, lambda: lambda as i64, nu: nu as i64, onset: k as u32 }));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductIdentityCheck {
    pub holds: bool,
    /// `ell^n kappa_n - kappa_X prod_(i <= n) N_i` for `n = 1..=depth`.
    pub residuals: Vec<BigInt>,
}

/// Compares Matrix-Tree counts on explicit covers with level norms.
pub fn verify_product_identity(
    va: &VoltageAssignment,
    f: &GenPoly,
    depth: u32,
    config: &DeterminantConfig,
) -> Result<ProductIdentityCheck> {
    let kappa_x = BigInt::from_biguint(Sign::Plus, spanning_tree_count_with(va.graph(), config)?);
    let mut product = kappa_x;
    let mut ell_pow = BigInt::one();
    let mut residuals = Vec::with_capacity(depth as usize);
    for n in 1..=depth {
        product *= level_norm(f, n)?;
        ell_pow *= va.ell();
        let cover = derived_graph(va, n)?;
        let kappa: BigUint = if cover.is_connected() { cover.spanning_tree_count(config)? } else { BigUint::zero() };
        residuals.push(&ell_pow * BigInt::from_biguint(Sign::Plus, kappa) - &product);
    }
    Ok(ProductIdentityCheck { holds: residuals.iter().all(Zero::is_zero), residuals })
}
