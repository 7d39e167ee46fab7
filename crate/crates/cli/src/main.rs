mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use ltower_core::analysis::analyze_prime;
use ltower_core::arith::is_prime;
use ltower_core::corpus::corpus;
use ltower_core::io::{level_entries, OmegaDigest, PrimeDigest, TaggedVoltage, TowerSpec};
use ltower_core::selftest::{run_selftest, SelftestStatus};
use ltower_core::{
    build_report, classify_omega, iwasawa_fit_ell, omega_sequence, padic_sqrt, DeterminantConfig, Error, FactorBudget,
    ReportOptions, Tower, TowerTable,
};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "ltower", version, about = "Spanning-tree counts in abelian l-towers of multigraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a tower description and level-1 connectivity.
    Validate { file: PathBuf },
    /// Exact kappa_0..kappa_n with factorizations.
    Count {
        file: PathBuf,
        #[command(flatten)]
        opts: Common,
    },
    /// Valuation law for one prime, or the ell-part fit when p = ell.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        opts: Common,
    },
    /// Whether the number of prime factors of kappa_n stays bounded.
    Classify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Full run report.
    Report {
        file: PathBuf,
        /// Extra primes to analyze.
        #[arg(long)]
        p: Vec<u64>,
        #[command(flatten)]
        opts: Common,
    },
    /// Recompute the built-in corpus and compare exactly.
    Selftest {
        #[arg(long, default_value_t = 300_000)]
        budget_ms: u64,
        #[arg(long)]
        json: bool,
    },
    /// Square root in Z_ell, for writing sqrt voltages.
    Sqrt {
        #[arg(allow_negative_numbers = true)]
        radicand: i64,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        precision: u32,
        #[arg(long)]
        branch: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 4)]
    levels: u32,
    /// Time limit for factoring each kappa_n.
    #[arg(long)]
    budget_ms: Option<u64>,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    matrix_tree_max_level: Option<u32>,
}

impl Common {
    fn budget(&self) -> FactorBudget {
        FactorBudget { time_limit: self.budget_ms.map(Duration::from_millis), ..FactorBudget::default() }
    }

    fn cross_check(&self, tower: &Tower) -> u32 {
        self.matrix_tree_max_level.unwrap_or_else(|| ltower_core::tower::default_matrix_tree_level(tower.ell()))
    }
}

enum Failure {
    Domain(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn load(path: &Path) -> Result<Tower, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let spec = TowerSpec::parse(&text)?;
    Ok(Tower::new(spec.build()?)?)
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn table(tower: &Tower, opts: &Common) -> Result<TowerTable, Failure> {
    Ok(tower.table(opts.levels, opts.cross_check(tower).min(opts.levels), &DeterminantConfig::default())?)
}

fn validate(file: &Path) -> Outcome {
    let text = std::fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    let va = TowerSpec::parse(&text)?.build()?;
    let g = va.graph();
    let report = g.validate();
    if !report.is_valid() {
        let msgs: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        return Err(Failure::Domain(format!("invalid graph: {}", msgs.join("; "))));
    }
    if !va.cycle_voltages_generate(1)? {
        return Err(Error::DisconnectedTower(1).into());
    }
    println!(
        "valid: {} vertices, {} edges, chi = {}, ell = {}, precision = {}, level-1 cover connected",
        g.vertex_count(),
        g.edge_count(),
        report.euler_characteristic,
        va.ell(),
        va.precision()
    );
    Ok(())
}

fn count(file: &Path, opts: &Common) -> Outcome {
    let tower = load(file)?;
    let table = table(&tower, opts)?;
    let rows = level_entries(&table, &omega_sequence(&table, &opts.budget()));
    if opts.json {
        print_json(&rows);
    } else {
        print!("{}", render::levels(&rows));
    }
    if rows.iter().any(|r| !r.factorization_complete) {
        eprintln!("warning: factoring budget exhausted; bracketed cofactors are unfactored and omega is a lower bound");
    }
    Ok(())
}

#[derive(Serialize)]
struct EllPart {
    ell: u64,
    observed: Vec<u32>,
    fit: Option<ltower_core::EllFit>,
}

fn analyze(file: &Path, p: u64, opts: &Common) -> Outcome {
    if !is_prime(p) {
        return Err(Failure::Usage(format!("--p {p} is not prime")));
    }
    let tower = load(file)?;
    let table = table(&tower, opts)?;
    if p == tower.ell() {
        eprintln!("note: p = ell; reporting the ell-part fit instead");
        let observed = table.valuations(p);
        let fit = iwasawa_fit_ell(p, &observed)?;
        if fit.is_none() {
            eprintln!("warning: inconclusive; no exact law fits the computed levels");
        }
        if opts.json {
            print_json(&EllPart { ell: p, observed, fit });
        } else {
            print!("{}", render::ell_fit(p, &observed, fit));
        }
        return Ok(());
    }
    let r = analyze_prime(&tower, &table, p)?;
    if let ltower_core::N0Status::Empirical { checked_up_to } = r.n0_status {
        eprintln!("warning: inconclusive; n0 is empirical (levels up to {checked_up_to} scanned, no certificate for ell-adic voltages)");
    }
    if r.nu.is_none() {
        eprintln!("warning: inconclusive; nu_p needs a norm beyond the on-demand limit");
    }
    if opts.json {
        print_json(&PrimeDigest::from(&r));
    } else {
        print!("{}", render::prime(&r));
    }
    if r.law_holds() {
        Ok(())
    } else {
        Err(Failure::Domain("predicted valuations disagree with the computed counts".into()))
    }
}

fn classify(file: &Path, json: bool) -> Outcome {
    let tower = load(file)?;
    let digest = OmegaDigest::from(&classify_omega(tower.f())?);
    if json {
        print_json(&digest);
    } else {
        print!("{}", render::omega(&digest));
    }
    Ok(())
}

fn report(file: &Path, extra: &[u64], opts: &Common) -> Outcome {
    if let Some(&p) = extra.iter().find(|&&p| !is_prime(p)) {
        return Err(Failure::Usage(format!("--p {p} is not prime")));
    }
    let tower = load(file)?;
    let mut ro = ReportOptions::new(&tower, opts.levels);
    ro.primes.extend_from_slice(extra);
    ro.matrix_tree_max_level = opts.cross_check(&tower).min(opts.levels);
    ro.budget = opts.budget();
    let r = build_report(&tower, &ro)?;
    if opts.json {
        println!("{}", r.to_json());
    } else {
        print!("{}", render::report(&r));
    }
    Ok(())
}

#[derive(Serialize)]
struct SelftestLine {
    name: String,
    status: &'static str,
    levels_checked: Option<u32>,
    detail: Vec<String>,
}

fn selftest(budget_ms: u64, json: bool) -> Outcome {
    let report = run_selftest(&corpus(), Some(Duration::from_millis(budget_ms)));
    for item in &report.items {
        match &item.status {
            SelftestStatus::Skipped { reason } => eprintln!("warning: {} skipped: {reason}", item.name),
            SelftestStatus::Pass { complete: false, levels_checked } => {
                eprintln!("warning: {} checked only through level {levels_checked}", item.name)
            }
            _ => {}
        }
    }
    if json {
        let lines: Vec<SelftestLine> = report
            .items
            .iter()
            .map(|i| match &i.status {
                SelftestStatus::Pass { levels_checked, .. } => SelftestLine {
                    name: i.name.clone(),
                    status: "pass",
                    levels_checked: Some(*levels_checked),
                    detail: vec![],
                },
                SelftestStatus::Fail { diffs } => {
                    SelftestLine { name: i.name.clone(), status: "fail", levels_checked: None, detail: diffs.clone() }
                }
                SelftestStatus::Skipped { reason } => SelftestLine {
                    name: i.name.clone(),
                    status: "skipped",
                    levels_checked: None,
                    detail: vec![reason.clone()],
                },
            })
            .collect();
        print_json(&lines);
    } else {
        print!("{}", report.render());
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Domain("corpus mismatch".into()))
    }
}

#[derive(Serialize)]
struct SqrtOut {
    residue: u64,
    digits: Vec<u64>,
    voltage: TaggedVoltage,
}

fn sqrt(radicand: i64, ell: u64, precision: u32, branch: Option<u64>, json: bool) -> Outcome {
    if !is_prime(ell) {
        return Err(Failure::Usage(format!("--ell {ell} is not prime")));
    }
    let root = padic_sqrt(radicand, ell, precision, branch)?;
    let out = SqrtOut {
        residue: root.residue(),
        digits: root.digits(),
        voltage: TaggedVoltage::Padic { digits: root.digits() },
    };
    if json {
        print_json(&out);
    } else {
        println!("{root}");
        println!("residue mod {ell}^{precision}: {}", out.residue);
        println!("voltage: {}", serde_json::to_string(&out.voltage).expect("serializable"));
    }
    Ok(())
}

fn configure_threads() {
    if let Some(n) = std::env::var("LTOWER_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let outcome = match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Count { file, opts } => count(file, opts),
        Command::Analyze { file, p, opts } => analyze(file, *p, opts),
        Command::Classify { file, json } => classify(file, *json),
        Command::Report { file, p, opts } => report(file, p, opts),
        Command::Selftest { budget_ms, json } => selftest(*budget_ms, *json),
        Command::Sqrt { radicand, ell, precision, branch, json } => sqrt(*radicand, *ell, *precision, *branch, *json),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
