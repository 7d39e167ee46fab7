//! Exact spanning-tree counts via the Matrix-Tree theorem.
//!
//! Small minors use fraction-free (Bareiss) elimination over big integers. Larger
//! ones are solved modulo a set of 62-bit primes whose product exceeds an a-priori
//! bound on the determinant, then combined by the Chinese remainder theorem.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith;
use crate::error::{Error, Result};
use crate::graph::Multigraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeterminantConfig {
    /// Largest dimension handled by Bareiss elimination; above it the multi-modular route runs.
    pub bareiss_max_dim: usize,
}

impl Default for DeterminantConfig {
    fn default() -> Self {
        Self { bareiss_max_dim: 48 }
    }
}

/// Laplacian `D - A`. Loops cancel out; parallel edges add up.
pub fn laplacian(graph: &Multigraph) -> Vec<Vec<i64>> {
    let g = graph.vertex_count();
    let mut l = vec![vec![0i64; g]; g];
    for e in graph.edges() {
        if e.is_loop() {
            continue;
        }
        l[e.tail][e.tail] += 1;
        l[e.head][e.head] += 1;
        l[e.tail][e.head] -= 1;
        l[e.head][e.tail] -= 1;
    }
    l
}

pub fn spanning_tree_count(graph: &Multigraph) -> Result<BigUint> {
    spanning_tree_count_with(graph, &DeterminantConfig::default())
}

pub fn spanning_tree_count_with(graph: &Multigraph, config: &DeterminantConfig) -> Result<BigUint> {
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    let l = laplacian(graph);
    let minor: Vec<Vec<i64>> = l[1..].iter().map(|row| row[1..].to_vec()).collect();
    let det = if minor.len() <= config.bareiss_max_dim {
        det_bareiss(&to_big(&minor))
    } else {
        // orient every spanning tree towards vertex 0: each other vertex picks one incident edge
        let bound_bits: f64 = minor.iter().enumerate().map(|(i, row)| (row[i] as f64).log2()).sum();
        det_multimodular(&minor, bound_bits.ceil() as u64 + 2)
    };
    det.to_biguint().ok_or_else(|| Error::Inconsistent("negative Laplacian minor".into()))
}

fn to_big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Fraction-free Gaussian elimination.
pub fn det_bareiss(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            for j in k + 1..n {
                let v = &row[j] * &pivot_row[k] - &row[k] * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Determinant of an integer matrix whose absolute value is below `2^bound_bits`.
pub fn det_multimodular(m: &[Vec<i64>], bound_bits: u64) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    // product of primes must exceed twice the bound for the symmetric lift
    let primes = arith::crt_primes(bound_bits + 1);
    let residues: Vec<(u64, u64)> = primes.par_iter().map(|&p| (p, det_mod_prime(m, p))).collect();
    arith::crt_symmetric(&residues)
}

/// Montgomery arithmetic modulo an odd `n < 2^63`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Montgomery {
    n: u64,
    neg_inv: u64,
    r2: u64,
}

impl Montgomery {
    pub(crate) fn new(n: u64) -> Self {
        debug_assert!(n % 2 == 1 && n < 1 << 63);
        let mut inv = 1u64;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % n as u128) as u64;
        Self { n, neg_inv: inv.wrapping_neg(), r2: arith::mul_mod(r, r, n) }
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.n as u128) >> 64) as u64;
        if u >= self.n {
            u - self.n
        } else {
            u
        }
    }

    #[inline]
    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    pub(crate) fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }

    pub(crate) fn enter(&self, a: u64) -> u64 {
        self.mul(a % self.n, self.r2)
    }

    pub(crate) fn leave(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    pub(crate) fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = self.enter(1);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub(crate) fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.n - 2)
    }
}

fn det_mod_prime(m: &[Vec<i64>], p: u64) -> u64 {
    let n = m.len();
    let mont = Montgomery::new(p);
    let mut a: Vec<u64> =
        m.iter().flat_map(|row| row.iter().map(|&x| mont.enter(x.rem_euclid(p as i64) as u64))).collect();
    let mut det = mont.enter(1);
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| a[i * n + k] != 0) else {
            return 0;
        };
        if piv != k {
            for j in k..n {
                a.swap(piv * n + j, k * n + j);
            }
            det = mont.sub(0, det);
        }
        let pivot = a[k * n + k];
        det = mont.mul(det, pivot);
        let inv = mont.inv(pivot);
        let (head, tail) = a.split_at_mut((k + 1) * n);
        let pivot_row = &head[k * n..];
        for row in tail.chunks_exact_mut(n) {
            if row[k] == 0 {
                continue;
            }
            let factor = mont.mul(row[k], inv);
            row[k] = 0;
            for j in k + 1..n {
                if pivot_row[j] != 0 {
                    row[j] = mont.sub(row[j], mont.mul(factor, pivot_row[j]));
                }
            }
        }
    }
    mont.leave(det)
}

/// Bits of the Hadamard bound on `|det m|`.
pub fn hadamard_bits(m: &[Vec<i64>]) -> u64 {
    let bits: f64 = m
        .iter()
        .map(|row| {
            let norm2: f64 = row.iter().map(|&x| (x as f64) * (x as f64)).sum();
            if norm2 == 0.0 {
                0.0
            } else {
                0.5 * norm2.log2()
            }
        })
        .sum();
    bits.ceil().max(0.0) as u64 + 1
}
