mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ltower_core::analysis::analyze_prime;
use ltower_core::arith::primes_up_to;
use ltower_core::corpus::{find, CorpusEntry};
use ltower_core::{
    classify_omega, factor_kappa, iwasawa_fit_ell, spanning_tree_count, verify_product_identity, voltage_matrix,
    DeterminantConfig, EllFit, FactorBudget, OmegaVerdict, Tower, TowerTable,
};
use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = std::result::Result<String, String>;

/// Label, check and time limit in seconds.
type Criterion = (&'static str, fn() -> Check, u64);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

/// Builds the named corpus tower, computes its table and checks every count and factorization.
fn corpus_table(
    name: &str,
    depth: u32,
    cross_check: u32,
) -> std::result::Result<(CorpusEntry, Tower, TowerTable), String> {
    let entry = find(name).ok_or_else(|| format!("no corpus entry {name}"))?;
    let tower = Tower::new(entry.spec.build().map_err(e)?).map_err(e)?;
    let table = tower.table(depth, cross_check, &DeterminantConfig::default()).map_err(e)?;
    for (n, k) in table.kappas.iter().enumerate() {
        let want = entry.expected_kappa(n as u32);
        ensure!(*k == want, "{name}: kappa_{n} = {k}, expected {want}");
        let fac = factor_kappa(k, &FactorBudget::default());
        ensure!(fac.is_complete(), "{name}: kappa_{n} not fully factored: {}", fac.render());
        let mut want: Vec<(BigUint, u32)> = entry.expected[n].iter().map(|&(p, a)| (BigUint::from(p), a)).collect();
        let mut got = fac.factors.clone();
        want.sort();
        got.sort();
        ensure!(got == want, "{name}: kappa_{n} factors as {}", fac.render());
    }
    Ok((entry, tower, table))
}

fn fit_of(table: &TowerTable) -> std::result::Result<Option<EllFit>, String> {
    iwasawa_fit_ell(table.ell, &table.valuations(table.ell)).map_err(e)
}

fn criterion_1() -> Check {
    let (_, _, table) = corpus_table("bouquet3-ell5", 4, 2)?;
    ensure!(table.matrix_tree_checked == 2, "Matrix-Tree cross-check stopped at {}", table.matrix_tree_checked);
    Ok("kappa_1..kappa_4 exact; Matrix-Tree agrees at levels 0..2".into())
}

fn criterion_2() -> Check {
    let (_, tower, table) = corpus_table("bouquet4-ell3-a", 4, 3)?;
    let r2 = analyze_prime(&tower, &table, 2).map_err(e)?;
    ensure!((r2.mu, r2.n0, r2.nu) == (1, 2, Some(1)), "p=2: (mu, n0, nu) = ({}, {}, {:?})", r2.mu, r2.n0, r2.nu);
    for n in 1..=4u32 {
        ensure!(r2.observed[n as usize] == 3u32.pow(n) + 1, "ord_2(kappa_{n}) = {}", r2.observed[n as usize]);
    }
    ensure!(r2.law_holds(), "p=2 prediction disagrees with observation");
    let r17 = analyze_prime(&tower, &table, 17).map_err(e)?;
    ensure!(r17.observed[2..].iter().all(|&v| v == 2), "p=17 observed {:?}", r17.observed);
    ensure!(r17.law_holds() && r17.nu == Some(2) && r17.mu == 0, "p=17 law: mu {} nu {:?}", r17.mu, r17.nu);
    Ok("table through kappa_4; p=2 gives (1, 2, 1); p=17 constant 2 from n=2".into())
}

fn criterion_3() -> Check {
    let (_, tower, table) = corpus_table("theta-ell5", 4, 2)?;
    let verdict = classify_omega(tower.f()).map_err(e)?.verdict;
    ensure!(verdict == OmegaVerdict::Bounded, "verdict {verdict}");
    for (n, k) in table.kappas.iter().enumerate() {
        let fac = factor_kappa(k, &FactorBudget::default());
        ensure!(
            fac.primes().all(|p| [2u32, 3, 5].iter().any(|&q| *p == BigUint::from(q))),
            "kappa_{n} = {}",
            fac.render()
        );
    }
    let r2 = analyze_prime(&tower, &table, 2).map_err(e)?;
    for n in 1..=3u32 {
        ensure!(r2.observed[n as usize] == 5u32.pow(n) - 1, "ord_2(kappa_{n}) = {}", r2.observed[n as usize]);
    }
    Ok("bounded; support in {2, 3, 5}; ord_2 = 5^n - 1 at n=1..3".into())
}

fn criterion_4() -> Check {
    let (_, tower, table) = corpus_table("bouquet4-ell3-b", 4, 3)?;
    let verdict = classify_omega(tower.f()).map_err(e)?.verdict;
    ensure!(verdict == OmegaVerdict::Unbounded, "verdict {verdict}");
    let want: [(u64, [u32; 5]); 3] = [(2, [0, 4, 4, 4, 4]), (3, [0, 1, 2, 3, 4]), (127, [0, 0, 2, 2, 2])];
    for (p, vals) in want {
        ensure!(table.valuations(p) == vals, "ord_{p}: {:?}", table.valuations(p));
    }
    for p in [2, 127] {
        let r = analyze_prime(&tower, &table, p).map_err(e)?;
        ensure!(r.law_holds(), "p={p}: prediction disagrees");
    }
    Ok("table through kappa_4 fully factored; unbounded; ord_2, ord_3, ord_127 exact".into())
}

fn criterion_5() -> Check {
    let (_, tower, table) = corpus_table("dipole4-ell2", 6, 5)?;
    let fit = fit_of(&table)?;
    ensure!(fit == Some(EllFit { mu: 0, lambda: 5, nu: 2, onset: 2 }), "fit {fit:?}");
    let verdict = classify_omega(tower.f()).map_err(e)?.verdict;
    ensure!(verdict == OmegaVerdict::Unbounded, "verdict {verdict}");
    Ok("table through kappa_6; fit (0, 5, 2) from n=2; unbounded".into())
}

fn criterion_6() -> Check {
    let (_, tower, table) = corpus_table("sqrt17-ell2", 7, 5)?;
    ensure!(tower.precision() >= 8, "precision {}", tower.precision());
    let fit = fit_of(&table)?;
    ensure!(fit == Some(EllFit { mu: 0, lambda: 5, nu: -3, onset: 3 }), "fit {fit:?}");
    let verdict = classify_omega(tower.f()).map_err(e)?.verdict;
    ensure!(verdict == OmegaVerdict::Inapplicable, "verdict {verdict}");
    let r17 = analyze_prime(&tower, &table, 17).map_err(e)?;
    ensure!(r17.observed == [0, 0, 0, 0, 2, 2, 2, 2], "ord_17 observed {:?}", r17.observed);
    Ok("table through kappa_7; fit (0, 5, -3) from n=3; inapplicable; ord_17 = 0,0,0,0,2,2,2,2".into())
}

fn criterion_7() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed_0007);
    let config = DeterminantConfig::default();
    let primes = primes_up_to(50);
    let mut compared = 0usize;
    for case in 0..200 {
        let tower = common::random_tower(&mut rng, &[2, 3, 5], 4, 6, 10, 8);
        let va = tower.voltage_assignment();
        let label = format!("case {case} (ell={}, voltages {:?})", tower.ell(), va.reduced(3).unwrap());
        let check = verify_product_identity(va, tower.f(), 3, &config).map_err(e)?;
        ensure!(check.holds, "{label}: product identity residuals {:?}", check.residuals);
        let table = tower.table(3, 0, &config).map_err(e)?;
        for n in 0..3 {
            ensure!(
                (&table.kappas[n + 1] % &table.kappas[n]) == BigUint::default(),
                "{label}: kappa_{n} does not divide kappa_{}",
                n + 1
            );
        }
        let f = tower.f();
        ensure!(f.invert_exponents() == *f, "{label}: f(T) != f(1/T)");
        let (u, _) = f.integerize().map_err(e)?;
        ensure!(u.is_palindromic() && u.eval_i64(1) == Default::default(), "{label}: U not palindromic or U(1) != 0");
        ensure!(voltage_matrix(va).determinant() == *f, "{label}: determinant not reproducible");
        for &p in primes.iter().filter(|&&p| p != tower.ell()) {
            let r = analyze_prime(&tower, &table, p).map_err(e)?;
            ensure!(r.law_holds(), "{label}: p={p} predicted {:?} observed {:?}", r.predicted, r.observed);
            compared += r.checked_levels().len();
        }
    }
    Ok(format!("200 random towers to depth 3; {compared} (p, n) valuation comparisons"))
}

fn criterion_8() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed_0008);
    let mut done = 0;
    while done < 100 {
        let g = rng.gen_range(1..=5);
        let s = rng.gen_range(0..=8);
        let graph = common::random_multigraph(&mut rng, g, s);
        if !graph.is_connected() {
            continue;
        }
        let fast = spanning_tree_count(&graph).map_err(e)?;
        let slow = common::brute_force_trees(&graph);
        ensure!(fast == BigUint::from(slow), "graph {:?}: {fast} vs brute force {slow}", graph.edges());
        done += 1;
    }
    Ok("100 random graphs with at most 8 edges".into())
}

fn criterion_9() -> Check {
    let names = ["bouquet3-ell5", "bouquet4-ell3-a", "theta-ell5", "bouquet4-ell3-b", "dipole4-ell2", "sqrt17-ell2"];
    let mut compared = 0usize;
    for name in names {
        let entry = find(name).unwrap();
        let tower = Tower::new(entry.spec.build().map_err(e)?).map_err(e)?;
        let table = tower.table(entry.depth(), 0, &DeterminantConfig::default()).map_err(e)?;
        let ell = tower.ell();
        for p in primes_up_to(100).into_iter().filter(|&p| p != ell) {
            let r = analyze_prime(&tower, &table, p).map_err(e)?;
            for n in r.n0..table.depth() {
                let diff = r.observed[n as usize + 1] as i64 - r.observed[n as usize] as i64;
                let want = r.mu as i64 * (ell.pow(n + 1) - ell.pow(n)) as i64;
                ensure!(diff == want, "{name}, p={p}, n={n}: difference {diff}, law gives {want}");
                compared += 1;
            }
        }
    }
    Ok(format!("six corpus towers, primes up to 100; {compared} differences"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 corpus exactness, bouquet of three loops, ell=5", criterion_1, 60),
        ("2 bouquet of four loops (1,1,2,2), ell=3", criterion_2, 60),
        ("3 theta graph, ell=5", criterion_3, 120),
        ("4 bouquet of four loops (1,2,2,2), ell=3", criterion_4, 120),
        ("5 four-edge dipole, ell=2", criterion_5, 60),
        ("6 sqrt(17) voltage, ell=2", criterion_6, 120),
        ("7 property suite on random towers", criterion_7, 600),
        ("8 Matrix-Tree against brute force", criterion_8, 60),
        ("9 tail law on the corpus", criterion_9, 300),
    ];
    let mut failed = 0;
    for (label, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > Duration::from_secs(limit) => {
                Err(format!("{msg}, but took {elapsed:.1?} (limit {limit} s)"))
            }
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {label}: {msg} [{elapsed:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {label}: {msg} [{elapsed:.2?}]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
