//! JSON documents: the tower description read by the tools and the run report
//! they write. Big integers travel as decimal strings.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::analysis::{analyze_prime, iwasawa_fit_ell, EllFit, N0Status, PrimeAnalysisReport};
use crate::arith;
use crate::error::{Error, Result};
use crate::factor::FactorBudget;
use crate::graph::{Edge, Multigraph, Voltage, VoltageAssignment};
use crate::matrix_tree::DeterminantConfig;
use crate::omega::{classify_omega, omega_sequence, OmegaClassification, OmegaRow, OmegaVerdict};
use crate::padic::{padic_sqrt, TruncatedPadic};
use crate::poly::{GenPoly, IntPoly};
use crate::tower::{Tower, TowerTable};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSpec {
    pub ell: u64,
    pub precision: u32,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub tail: String,
    pub head: String,
    pub voltage: VoltageSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VoltageSpec {
    /// A rational integer, written as a decimal string.
    Integer(String),
    Tagged(TaggedVoltage),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum TaggedVoltage {
    /// Base-ell digits, least significant first.
    Padic { digits: Vec<u64> },
    /// The square root of `radicand` whose residue mod ell (mod 8 for ell = 2) is `branch`.
    Sqrt { radicand: i64, branch: u64 },
}

impl VoltageSpec {
    pub fn integer(a: i64) -> Self {
        VoltageSpec::Integer(a.to_string())
    }

    fn resolve(&self, ell: u64, precision: u32) -> Result<Voltage> {
        match self {
            VoltageSpec::Integer(s) => {
                let a: i64 = s.trim().parse().map_err(|_| Error::Parse(format!("bad integer voltage {s:?}")))?;
                Voltage::integer(ell, precision, a)
            }
            VoltageSpec::Tagged(TaggedVoltage::Padic { digits }) => {
                Ok(Voltage::padic(TruncatedPadic::from_digits(ell, precision, digits)?))
            }
            VoltageSpec::Tagged(TaggedVoltage::Sqrt { radicand, branch }) => {
                Ok(Voltage::padic(padic_sqrt(*radicand, ell, precision, Some(*branch))?))
            }
        }
    }
}

impl TowerSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Resolves names and voltages. Unknown vertex names are parse errors.
    pub fn build(&self) -> Result<VoltageAssignment> {
        let index = |name: &str| {
            self.vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::Parse(format!("undeclared vertex {name:?}")))
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut voltages = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            edges.push(Edge::new(index(&e.tail)?, index(&e.head)?));
            voltages.push(e.voltage.resolve(self.ell, self.precision)?);
        }
        arith::require_prime(self.ell)?;
        let graph = Multigraph::new(self.vertices.clone(), edges)?;
        VoltageAssignment::new(graph, voltages)
    }

    /// The document describing `va`; ell-adic voltages are written as digits.
    pub fn from_assignment(va: &VoltageAssignment) -> Self {
        let names = va.graph().vertex_names().to_vec();
        let edges = va
            .graph()
            .edges()
            .iter()
            .zip(va.voltages())
            .map(|(e, v)| EdgeSpec {
                tail: names[e.tail].clone(),
                head: names[e.head].clone(),
                voltage: match v.as_integer() {
                    Some(a) => VoltageSpec::integer(a),
                    None => VoltageSpec::Tagged(TaggedVoltage::Padic { digits: v.value().digits() }),
                },
            })
            .collect();
        TowerSpec { ell: va.ell(), precision: va.precision(), vertices: names, edges }
    }
}

/// A polynomial as sparse `exponent: coefficient` pairs. Exponents are signed
/// integers for integral polynomials and residues mod `exponent_modulus` otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDigest {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent_modulus: Option<String>,
    pub terms: Vec<(String, String)>,
}

impl PolyDigest {
    pub fn of_genpoly(f: &GenPoly) -> Self {
        match f.laurent_terms() {
            Ok(terms) if f.is_integral() => PolyDigest {
                exponent_modulus: None,
                terms: terms.into_iter().map(|(e, c)| (e.to_string(), c.to_string())).collect(),
            },
            _ => PolyDigest {
                exponent_modulus: Some(f.modulus().to_string()),
                terms: f.terms().map(|(e, c)| (e.residue().to_string(), c.to_string())).collect(),
            },
        }
    }

    pub fn of_intpoly(p: &IntPoly) -> Self {
        PolyDigest {
            exponent_modulus: None,
            terms: p
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                .map(|(e, c)| (e.to_string(), c.to_string()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelEntry {
    pub level: u32,
    pub kappa: String,
    /// `N_level`; absent at level 0.
    pub norm: Option<String>,
    pub factorization: String,
    pub omega: usize,
    pub factorization_complete: bool,
    pub matrix_tree_checked: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeDigest {
    pub p: u64,
    pub mu: u32,
    pub n0: u32,
    pub n0_certified: bool,
    pub nu: Option<i64>,
    pub n1: Option<u32>,
    pub log_bound: Option<f64>,
    pub observed: Vec<u32>,
    pub predicted: Vec<Option<i64>>,
    pub divides_any: Option<bool>,
    pub law_holds: bool,
}

impl From<&PrimeAnalysisReport> for PrimeDigest {
    fn from(r: &PrimeAnalysisReport) -> Self {
        PrimeDigest {
            p: r.p,
            mu: r.mu,
            n0: r.n0,
            n0_certified: r.n0_status == N0Status::Certified,
            nu: r.nu,
            n1: r.stabilization.as_ref().map(|s| s.n1),
            log_bound: r.stabilization.as_ref().and_then(|s| s.log_bound),
            observed: r.observed.clone(),
            predicted: r.predicted.clone(),
            divides_any: r.divides_any,
            law_holds: r.law_holds(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaDigest {
    pub verdict: OmegaVerdict,
    pub m: Option<u32>,
    pub content: Option<String>,
    pub cyclotomic_factors: Vec<(u64, u32)>,
    pub non_cyclotomic_part: Option<PolyDigest>,
    pub content_primes: Vec<String>,
}

impl From<&OmegaClassification> for OmegaDigest {
    fn from(c: &OmegaClassification) -> Self {
        match &c.decomposition {
            Some(d) => OmegaDigest {
                verdict: c.verdict,
                m: Some(d.m),
                content: Some(d.content.to_string()),
                cyclotomic_factors: d.cyclotomic_factors.clone(),
                non_cyclotomic_part: Some(PolyDigest::of_intpoly(&d.non_cyclotomic_part)),
                content_primes: d.content_primes.iter().map(|p| p.to_string()).collect(),
            },
            None => OmegaDigest {
                verdict: c.verdict,
                m: None,
                content: None,
                cyclotomic_factors: Vec::new(),
                non_cyclotomic_part: None,
                content_primes: Vec::new(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub ell: u64,
    pub precision: u32,
    pub integral: bool,
    pub f: PolyDigest,
    pub levels: Vec<LevelEntry>,
    pub primes: Vec<PrimeDigest>,
    pub omega: OmegaDigest,
    pub ell_fit: Option<EllFit>,
    /// Wall-clock time; not part of the content.
    pub timing_ms: u64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// The report with its timing zeroed, for comparisons.
    pub fn content(&self) -> RunReport {
        RunReport { timing_ms: 0, ..self.clone() }
    }
}

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub levels: u32,
    /// Primes to analyze besides those found in the factorizations.
    pub primes: Vec<u64>,
    pub matrix_tree_max_level: u32,
    pub budget: FactorBudget,
    pub determinant: DeterminantConfig,
}

impl ReportOptions {
    pub fn new(tower: &Tower, levels: u32) -> Self {
        ReportOptions {
            levels,
            primes: arith::primes_up_to(100),
            matrix_tree_max_level: crate::tower::default_matrix_tree_level(tower.ell()),
            budget: FactorBudget::default(),
            determinant: DeterminantConfig::default(),
        }
    }
}

pub fn level_entries(table: &TowerTable, rows: &[OmegaRow]) -> Vec<LevelEntry> {
    rows.iter()
        .map(|row| LevelEntry {
            level: row.level,
            kappa: table.kappas[row.level as usize].to_string(),
            norm: table.norm(row.level).map(|n| n.to_string()),
            factorization: row.factorization.render(),
            omega: row.omega,
            factorization_complete: row.complete,
            matrix_tree_checked: row.level <= table.matrix_tree_checked,
        })
        .collect()
}

pub fn build_report(tower: &Tower, opts: &ReportOptions) -> Result<RunReport> {
    let start = Instant::now();
    let table = tower.table(opts.levels, opts.matrix_tree_max_level, &opts.determinant)?;
    let rows = omega_sequence(&table, &opts.budget);
    let levels = level_entries(&table, &rows);

    let mut primes: Vec<u64> = opts.primes.clone();
    for row in &rows {
        primes.extend(row.factorization.primes().filter_map(num_traits::ToPrimitive::to_u64));
    }
    primes.sort_unstable();
    primes.dedup();
    primes.retain(|&p| p != tower.ell());
    let primes = primes
        .iter()
        .map(|&p| analyze_prime(tower, &table, p).map(|r| PrimeDigest::from(&r)))
        .collect::<Result<Vec<_>>>()?;

    let omega = OmegaDigest::from(&classify_omega(tower.f())?);
    let ell_fit = match iwasawa_fit_ell(tower.ell(), &table.valuations(tower.ell())) {
        Ok(fit) => fit,
        Err(Error::InsufficientData { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(RunReport {
        ell: tower.ell(),
        precision: tower.precision(),
        integral: tower.is_integral(),
        f: PolyDigest::of_genpoly(tower.f()),
        levels,
        primes,
        omega,
        ell_fit,
        timing_ms: start.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_SPEC: &str = r#"{
        "ell": 2, "precision": 10, "vertices": ["v"],
        "edges": [
            {"tail": "v", "head": "v", "voltage": {"kind": "sqrt", "radicand": 17, "branch": 1}},
            {"tail": "v", "head": "v", "voltage": "5"}
        ]
    }"#;

    #[test]
    fn parse_and_round_trip() {
        let spec = TowerSpec::parse(SQRT_SPEC).unwrap();
        assert_eq!(TowerSpec::parse(&spec.to_json()).unwrap(), spec);
        let va = spec.build().unwrap();
        assert!(!va.is_integral());
        assert_eq!(va.voltages()[0].value().reduce(5).unwrap(), 9);
        let again = TowerSpec::from_assignment(&va).build().unwrap();
        assert_eq!(again.voltages()[0].value(), va.voltages()[0].value());
        assert!(!again.is_integral());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(TowerSpec::parse("{"), Err(Error::Parse(_))));
        let bad = SQRT_SPEC.replace("\"head\": \"v\", \"voltage\": \"5\"", "\"head\": \"w\", \"voltage\": \"5\"");
        assert!(matches!(TowerSpec::parse(&bad).unwrap().build(), Err(Error::Parse(_))));
        let bad = SQRT_SPEC.replace("\"5\"", "\"five\"");
        assert!(matches!(TowerSpec::parse(&bad).unwrap().build(), Err(Error::Parse(_))));
    }

    #[test]
    fn report_is_deterministic() {
        let va = TowerSpec::parse(SQRT_SPEC).unwrap().build().unwrap();
        let tower = Tower::new(va).unwrap();
        let opts = ReportOptions::new(&tower, 4);
        let a = build_report(&tower, &opts).unwrap();
        let b = build_report(&tower, &opts).unwrap();
        assert_eq!(a.content().to_json(), b.content().to_json());
        assert_eq!(a.omega.verdict, OmegaVerdict::Inapplicable);
        assert_eq!(a.levels[4].factorization, "2^17 * 17^2");
        let back: RunReport = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(back, a);
    }
}
