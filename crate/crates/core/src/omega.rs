//! Whether the number of distinct primes dividing `kappa_n` stays bounded.
//!
//! For integral exponents it is bounded exactly when every root of `U(T)` is a
//! root of unity. Those roots come from cyclotomic factors, so trial division
//! by `Phi_d` for all `d` with `phi(d) <= deg` settles it.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::euler_phi;
use crate::error::Result;
use crate::factor::{factor_with_hints, FactorBudget, FactoredInteger};
use crate::poly::{cyclotomic, unit_root_factor, GenPoly, IntPoly};
use crate::tower::TowerTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OmegaVerdict {
    Bounded,
    Unbounded,
    /// Exponents are not declared integral; no criterion is available.
    Inapplicable,
}

impl std::fmt::Display for OmegaVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OmegaVerdict::Bounded => "bounded",
            OmegaVerdict::Unbounded => "unbounded",
            OmegaVerdict::Inapplicable => "inapplicable",
        })
    }
}

/// `U = content * (T - 1)^m * prod Phi_d^e * non_cyclotomic_part`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicDecomposition {
    pub u: IntPoly,
    pub b: i64,
    pub m: u32,
    pub content: BigInt,
    pub cyclotomic_factors: Vec<(u64, u32)>,
    /// Primitive with positive leading coefficient.
    pub non_cyclotomic_part: IntPoly,
    pub content_primes: Vec<BigUint>,
}

impl CyclotomicDecomposition {
    pub fn reconstruct(&self) -> IntPoly {
        let mut acc = self.non_cyclotomic_part.scale(&self.content);
        acc = &acc * &IntPoly::t_minus_one().pow(self.m);
        for &(d, e) in &self.cyclotomic_factors {
            acc = &acc * &cyclotomic(d).pow(e);
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaClassification {
    pub verdict: OmegaVerdict,
    /// Absent exactly when the verdict is inapplicable.
    pub decomposition: Option<CyclotomicDecomposition>,
}

/// Divides out every cyclotomic factor of `u1`. Returns the factors found
/// with multiplicities and what is left, content included.
pub fn strip_cyclotomics(u1: &IntPoly) -> (Vec<(u64, u32)>, IntPoly) {
    let mut rest = u1.clone();
    let mut factors = Vec::new();
    let Some(deg) = rest.degree() else {
        return (factors, rest);
    };
    let limit = 2 * (deg as u64) * (deg as u64) + 2;
    for d in 1..=limit {
        let current = rest.degree().unwrap_or(0) as u64;
        if current == 0 {
            break;
        }
        if euler_phi(d) > current {
            continue;
        }
        let phi = cyclotomic(d);
        let mut e = 0;
        while let Some(q) = rest.div_exact_monic(&phi) {
            rest = q;
            e += 1;
        }
        if e > 0 {
            factors.push((d, e));
        }
    }
    (factors, rest)
}

pub fn classify_omega(f: &GenPoly) -> Result<OmegaClassification> {
    if !f.is_integral() {
        return Ok(OmegaClassification { verdict: OmegaVerdict::Inapplicable, decomposition: None });
    }
    let (u, b) = f.integerize()?;
    let (m, u1) = unit_root_factor(&u)?;
    let (cyclotomic_factors, rest) = strip_cyclotomics(&u1);
    let content = rest.signed_content();
    let non_cyclotomic_part = rest.div_scalar(&content);
    let verdict = if non_cyclotomic_part.is_constant() { OmegaVerdict::Bounded } else { OmegaVerdict::Unbounded };
    let content_primes =
        factor_with_hints(content.magnitude(), &FactorBudget::default(), &[]).primes().cloned().collect();
    Ok(OmegaClassification {
        verdict,
        decomposition: Some(CyclotomicDecomposition {
            u,
            b,
            m,
            content,
            cyclotomic_factors,
            non_cyclotomic_part,
            content_primes,
        }),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaRow {
    pub level: u32,
    /// A lower bound when `complete` is false.
    pub omega: usize,
    pub complete: bool,
    pub factorization: FactoredInteger,
}

/// Factors each `kappa_n`, feeding the primes of one level to the next.
pub fn omega_sequence(table: &TowerTable, budget: &FactorBudget) -> Vec<OmegaRow> {
    let mut hints: Vec<BigUint> = Vec::new();
    let mut rows = Vec::with_capacity(table.kappas.len());
    for (n, kappa) in table.kappas.iter().enumerate() {
        let factorization = factor_with_hints(kappa, budget, &hints);
        hints = factorization.primes().filter(|p| **p > BigUint::one()).cloned().collect();
        rows.push(OmegaRow {
            level: n as u32,
            omega: factorization.omega(),
            complete: factorization.is_complete(),
            factorization,
        });
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, Multigraph, VoltageAssignment};
    use crate::poly::voltage_matrix;

    fn f_of(g: Multigraph, ell: u64, v: &[i64]) -> GenPoly {
        voltage_matrix(&VoltageAssignment::from_integers(g, ell, 6, v).unwrap()).determinant()
    }

    #[test]
    fn strips() {
        let phi3 = cyclotomic(3);
        let u1 = (&phi3 * &phi3).scale(&BigInt::from(-2));
        let (fs, rest) = strip_cyclotomics(&u1);
        assert_eq!(fs, vec![(3, 2)]);
        assert_eq!(rest, IntPoly::from_i64(&[-2]));
        let (fs, rest) = strip_cyclotomics(&IntPoly::from_i64(&[7]));
        assert!(fs.is_empty());
        assert_eq!(rest, IntPoly::from_i64(&[7]));
        let u1 = IntPoly::from_i64(&[-1, -4, -10, -4, -1]);
        assert_eq!(strip_cyclotomics(&u1), (vec![], u1));
    }

    #[test]
    fn verdicts() {
        let c = classify_omega(&f_of(Multigraph::bouquet(4), 3, &[1, 1, 2, 2])).unwrap();
        assert_eq!(c.verdict, OmegaVerdict::Unbounded);
        let d = c.decomposition.unwrap();
        assert_eq!(d.non_cyclotomic_part, IntPoly::from_i64(&[1, 3, 1]));
        assert_eq!(d.content, BigInt::from(-2));
        assert_eq!(d.reconstruct(), d.u);

        let theta = Multigraph::with_vertex_count(2, vec![Edge::new(0, 1), Edge::new(1, 0), Edge::new(1, 0)]).unwrap();
        let c = classify_omega(&f_of(theta, 5, &[1, 2, 2])).unwrap();
        assert_eq!(c.verdict, OmegaVerdict::Bounded);
        let d = c.decomposition.unwrap();
        assert_eq!((d.m, d.cyclotomic_factors.clone()), (2, vec![(3, 2)]));
        assert_eq!(d.content_primes, vec![BigUint::from(2u32)]);
        assert_eq!(d.reconstruct(), d.u);

        let root = crate::padic::padic_sqrt(17, 2, 10, Some(1)).unwrap();
        let va = VoltageAssignment::new(
            Multigraph::bouquet(2),
            vec![crate::graph::Voltage::padic(root), crate::graph::Voltage::integer(2, 10, 5).unwrap()],
        )
        .unwrap();
        let c = classify_omega(&voltage_matrix(&va).determinant()).unwrap();
        assert_eq!(c.verdict, OmegaVerdict::Inapplicable);
        assert!(c.decomposition.is_none());
    }
}
