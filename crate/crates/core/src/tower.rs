//! A tower bundled with its determinant polynomial and exact level data.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::analysis::level_norm;
use crate::cover::derived_graph;
use crate::error::{Error, Result};
use crate::graph::VoltageAssignment;
use crate::matrix_tree::{spanning_tree_count, DeterminantConfig};
use crate::poly::{voltage_matrix, GenPoly};

/// How many levels get a Matrix-Tree cross-check unless told otherwise.
pub fn default_matrix_tree_level(ell: u64) -> u32 {
    match ell {
        2 => 5,
        3 => 3,
        _ => 2,
    }
}

#[derive(Debug, Clone)]
pub struct Tower {
    va: VoltageAssignment,
    f: GenPoly,
    kappa_base: BigUint,
}

impl Tower {
    /// Checks the standing hypotheses and level-1 connectivity, then computes
    /// `f(T) = det M(T)` and the base count.
    pub fn new(va: VoltageAssignment) -> Result<Self> {
        let report = va.graph().validate();
        if !report.is_valid() {
            let msgs: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
            return Err(Error::InvalidGraph(msgs.join("; ")));
        }
        if !va.cycle_voltages_generate(1)? {
            return Err(Error::DisconnectedTower(1));
        }
        let f = voltage_matrix(&va).determinant();
        let kappa_base = spanning_tree_count(va.graph())?;
        Ok(Tower { va, f, kappa_base })
    }

    pub fn voltage_assignment(&self) -> &VoltageAssignment {
        &self.va
    }

    pub fn f(&self) -> &GenPoly {
        &self.f
    }

    pub fn kappa_base(&self) -> &BigUint {
        &self.kappa_base
    }

    pub fn ell(&self) -> u64 {
        self.va.ell()
    }

    pub fn precision(&self) -> u32 {
        self.va.precision()
    }

    pub fn is_integral(&self) -> bool {
        self.va.is_integral()
    }

    /// Highest level the voltages determine. Integral towers are unbounded.
    pub fn max_level(&self) -> Option<u32> {
        if self.is_integral() {
            None
        } else {
            Some(self.precision())
        }
    }

    pub fn check_level(&self, n: u32) -> Result<()> {
        match self.max_level() {
            Some(p) if n > p => Err(Error::PrecisionExceeded { level: n, precision: p }),
            _ => Ok(()),
        }
    }

    /// `kappa_n` by the Matrix-Tree theorem on the explicit level-`n` cover.
    pub fn kappa_matrix_tree(&self, n: u32, config: &DeterminantConfig) -> Result<BigUint> {
        self.check_level(n)?;
        derived_graph(&self.va, n)?.spanning_tree_count(config)
    }

    /// Level norms `N_1..N_depth` and counts `kappa_0..kappa_depth` by the
    /// resultant route, with Matrix-Tree agreement enforced up to `cross_check`.
    pub fn table(&self, depth: u32, cross_check: u32, config: &DeterminantConfig) -> Result<TowerTable> {
        self.check_level(depth)?;
        let norms: Vec<BigInt> = (1..=depth).into_par_iter().map(|i| level_norm(&self.f, i)).collect::<Result<_>>()?;
        let mut kappas = Vec::with_capacity(depth as usize + 1);
        let ell = BigInt::from(self.ell());
        let mut acc = BigInt::from_biguint(Sign::Plus, self.kappa_base.clone());
        let mut ell_pow = BigInt::one();
        kappas.push(self.kappa_base.clone());
        for (i, norm) in norms.iter().enumerate() {
            acc *= norm;
            ell_pow *= &ell;
            if !(&acc % &ell_pow).is_zero() {
                return Err(Error::Inconsistent(format!("ell^{} does not divide the norm product", i + 1)));
            }
            let k = &acc / &ell_pow;
            if !k.is_positive() {
                return Err(Error::Inconsistent(format!("non-positive count {k} at level {}", i + 1)));
            }
            kappas.push(k.magnitude().clone());
        }
        let checked = cross_check.min(depth);
        let direct: Vec<BigUint> =
            (0..=checked).into_par_iter().map(|n| self.kappa_matrix_tree(n, config)).collect::<Result<_>>()?;
        for (n, k) in direct.iter().enumerate() {
            if *k != kappas[n] {
                return Err(Error::Inconsistent(format!(
                    "level {n}: Matrix-Tree gives {k}, resultant route gives {}",
                    kappas[n]
                )));
            }
        }
        Ok(TowerTable { ell: self.ell(), norms, kappas, matrix_tree_checked: checked })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerTable {
    pub ell: u64,
    /// `norms[i - 1]` is `N_i`.
    pub norms: Vec<BigInt>,
    /// `kappas[n]` is `kappa_n`.
    pub kappas: Vec<BigUint>,
    /// Levels `0..=matrix_tree_checked` were confirmed on the explicit cover.
    pub matrix_tree_checked: u32,
}

impl TowerTable {
    pub fn depth(&self) -> u32 {
        self.kappas.len() as u32 - 1
    }

    pub fn norm(&self, i: u32) -> Option<&BigInt> {
        if i == 0 {
            None
        } else {
            self.norms.get(i as usize - 1)
        }
    }

    pub fn valuations(&self, p: u64) -> Vec<u32> {
        self.kappas.iter().map(|k| crate::arith::ord_p_unsigned(k, p).unwrap_or(0)).collect()
    }
}
