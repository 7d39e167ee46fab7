//! Recomputes the corpus and compares every row exactly.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};

use crate::analysis::{iwasawa_fit_ell, level_norm};
use crate::corpus::CorpusEntry;
use crate::error::Result;
use crate::matrix_tree::DeterminantConfig;
use crate::omega::classify_omega;
use crate::tower::{default_matrix_tree_level, Tower};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SelftestStatus {
    /// Levels `0..=levels_checked` matched; `complete` when that is the whole table.
    Pass {
        levels_checked: u32,
        complete: bool,
    },
    Fail {
        diffs: Vec<String>,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestItem {
    pub name: String,
    pub status: SelftestStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestReport {
    pub items: Vec<SelftestItem>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        !self.items.iter().any(|i| matches!(i.status, SelftestStatus::Fail { .. }))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            match &item.status {
                SelftestStatus::Pass { levels_checked, complete } => {
                    let note = if *complete { "" } else { " (time budget reached, table truncated)" };
                    out.push_str(&format!("PASS {} levels 0..={levels_checked}{note}\n", item.name));
                }
                SelftestStatus::Fail { diffs } => {
                    out.push_str(&format!("FAIL {}\n", item.name));
                    for d in diffs {
                        out.push_str(&format!("  {d}\n"));
                    }
                }
                SelftestStatus::Skipped { reason } => {
                    out.push_str(&format!("SKIP {}: {reason}\n", item.name));
                }
            }
        }
        out
    }
}

/// Runs every entry; `budget` bounds the whole run, `None` means unbounded.
pub fn run_selftest(corpus: &[CorpusEntry], budget: Option<Duration>) -> SelftestReport {
    let deadline = budget.map(|b| Instant::now() + b);
    let expired = || deadline.is_some_and(|d| Instant::now() >= d);
    let items = corpus
        .iter()
        .map(|entry| {
            let status = if expired() {
                SelftestStatus::Skipped { reason: "time budget exhausted".into() }
            } else {
                check_entry(entry, &expired)
                    .unwrap_or_else(|e| SelftestStatus::Fail { diffs: vec![format!("error: {e}")] })
            };
            SelftestItem { name: entry.name.to_string(), status }
        })
        .collect();
    SelftestReport { items }
}

fn check_entry(entry: &CorpusEntry, expired: &dyn Fn() -> bool) -> Result<SelftestStatus> {
    let tower = Tower::new(entry.spec.build()?)?;
    let mut diffs = Vec::new();
    let config = DeterminantConfig::default();
    let cross_check = default_matrix_tree_level(tower.ell());
    let ell = BigInt::from(tower.ell());

    let mut product = BigInt::from_biguint(Sign::Plus, tower.kappa_base().clone());
    let mut ell_pow = BigInt::one();
    let mut computed: Vec<BigUint> = vec![tower.kappa_base().clone()];
    for n in 1..=entry.depth() {
        if expired() {
            break;
        }
        product *= level_norm(tower.f(), n)?;
        ell_pow *= &ell;
        let (q, r) = (&product / &ell_pow, &product % &ell_pow);
        if !r.is_zero() || !q.is_positive() {
            diffs.push(format!("level {n}: norm product {product} is not a positive multiple of ell^{n}"));
            break;
        }
        computed.push(q.magnitude().clone());
    }
    for (n, k) in computed.iter().enumerate() {
        let want = entry.expected_kappa(n as u32);
        if *k != want {
            diffs.push(format!("kappa_{n}: expected {want}, computed {k}"));
        }
        if (n as u32) <= cross_check && !expired() {
            let direct = tower.kappa_matrix_tree(n as u32, &config)?;
            if direct != *k {
                diffs.push(format!("kappa_{n}: Matrix-Tree gives {direct}, norms give {k}"));
            }
        }
    }
    let verdict = classify_omega(tower.f())?.verdict;
    if verdict != entry.verdict {
        diffs.push(format!("verdict: expected {}, computed {verdict}", entry.verdict));
    }
    let levels_checked = computed.len() as u32 - 1;
    let complete = levels_checked == entry.depth();
    if let (Some(want), true) = (entry.ell_fit, complete) {
        let vals: Vec<u32> =
            computed.iter().map(|k| crate::arith::ord_p_unsigned(k, tower.ell()).unwrap_or(0)).collect();
        let got = iwasawa_fit_ell(tower.ell(), &vals)?;
        if got != Some(want) {
            diffs.push(format!("ell-part fit: expected {want:?}, computed {got:?}"));
        }
    }
    Ok(if diffs.is_empty() {
        SelftestStatus::Pass { levels_checked, complete }
    } else {
        SelftestStatus::Fail { diffs }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::corpus;

    #[test]
    fn small_entries_pass_and_faults_are_caught() {
        let mut c: Vec<CorpusEntry> = corpus().into_iter().filter(|e| e.name.starts_with("dipole")).collect();
        let r = run_selftest(&c, None);
        assert!(r.passed(), "{}", r.render());
        c[0].expected[3] = vec![(2, 17), (17, 3)];
        let r = run_selftest(&c, None);
        assert!(!r.passed());
        assert!(r.render().contains("kappa_3"));
    }

    #[test]
    fn empty_budget_skips() {
        let r = run_selftest(&corpus(), Some(Duration::ZERO));
        assert!(r.passed());
        assert!(r.items.iter().all(|i| matches!(i.status, SelftestStatus::Skipped { .. })));
    }
}
