//! Exact spanning-tree counts in abelian ell-towers of multigraphs and the
//! p-adic valuation laws they obey.
//!
//! A tower is given by a connected multigraph with a voltage in Z_ell on each
//! section edge. Level `n` is the derived cover with group Z/ell^n. The
//! generalized polynomial `f(T) = det M(T)` controls everything: its values at
//! ell-power roots of unity multiply up to the spanning-tree counts, its p-content
//! gives the growth rate of `ord_p(kappa_n)`, and its cyclotomic factorization
//! decides whether the number of primes dividing `kappa_n` stays bounded.

pub mod analysis;
pub mod arith;
pub mod corpus;
pub mod cover;
pub mod error;
pub mod factor;
pub mod graph;
pub mod io;
pub mod matrix_tree;
pub mod omega;
pub mod padic;
pub mod poly;
pub mod selftest;
pub mod tower;

pub use analysis::{
    analyze_prime, inertia_degree, iwasawa_fit_ell, level_norm, n0_search, stabilization_bounds,
    verify_product_identity, EllFit, InertiaData, N0Status, PrimeAnalysisReport, StabilizationBounds,
};
pub use cover::{derived_graph, DerivedCover};
pub use error::{Error, Result};
pub use factor::{factor_kappa, FactorBudget, FactoredInteger};
pub use io::{build_report, ReportOptions, RunReport, TowerSpec};

pub use graph::{normalize_voltages, Edge, Multigraph, ValidationReport, Violation, Voltage, VoltageAssignment};
pub use matrix_tree::{spanning_tree_count, DeterminantConfig};
pub use omega::{classify_omega, omega_sequence, strip_cyclotomics, OmegaClassification, OmegaVerdict};
pub use padic::{padic_sqrt, TruncatedPadic};
pub use poly::{cyclotomic, resultant, unit_root_factor, voltage_matrix, GenPoly, GenPolyMatrix, IntPoly};
pub use tower::{Tower, TowerTable};
