use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::genpoly::GenPoly;
use crate::graph::VoltageAssignment;

/// The commutative-ring operations the determinant routines need.
pub trait Ring: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
}

impl Ring for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
}

impl Ring for GenPoly {
    fn zero_like(&self) -> Self {
        GenPoly::zero_like(self)
    }
    fn one_like(&self) -> Self {
        GenPoly::one_like(self)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
}

/// Laplace expansion along the first row.
pub fn det_cofactor<R: Ring>(m: &[Vec<R>]) -> R {
    fn expand<R: Ring>(m: &[Vec<R>], row: usize, cols: &mut Vec<usize>) -> R {
        if row == m.len() {
            return m[0][0].one_like();
        }
        let mut acc = m[0][0].zero_like();
        for k in 0..cols.len() {
            let col = cols[k];
            let entry = &m[row][col];
            if entry.is_zero_elem() {
                continue;
            }
            cols.remove(k);
            let minor = expand(m, row + 1, cols);
            cols.insert(k, col);
            let term = entry.times(&minor);
            acc = if k % 2 == 0 { acc.plus(&term) } else { acc.minus(&term) };
        }
        acc
    }
    assert!(!m.is_empty(), "empty matrix");
    expand(m, 0, &mut (0..m.len()).collect())
}

/// Coefficients `[1, c_1, ..., c_n]` of `det(xI - m)`, division-free (Samuelson-Berkowitz).
pub fn charpoly_berkowitz<R: Ring>(m: &[Vec<R>]) -> Vec<R> {
    let n = m.len();
    let a = &m[0][0];
    let one = a.one_like();
    if n == 1 {
        return vec![one, a.negated()];
    }
    let row: Vec<R> = m[0][1..].to_vec();
    let sub: Vec<Vec<R>> = m[1..].iter().map(|r| r[1..].to_vec()).collect();
    // diags = [1, -a, -R C, -R A C, ..., -R A^(n-2) C]
    let mut diags = vec![one, a.negated()];
    let mut vec_c: Vec<R> = m[1..].iter().map(|r| r[0].clone()).collect();
    for step in 0..n - 1 {
        let dot = row.iter().zip(&vec_c).fold(a.zero_like(), |acc, (x, y)| acc.plus(&x.times(y)));
        diags.push(dot.negated());
        if step + 1 < n - 1 {
            vec_c = sub
                .iter()
                .map(|r| r.iter().zip(&vec_c).fold(a.zero_like(), |acc, (x, y)| acc.plus(&x.times(y))))
                .collect();
        }
    }
    let inner = charpoly_berkowitz(&sub);
    (0..=n)
        .map(|i| {
            (0..n.min(i + 1)).fold(a.zero_like(), |acc, j| {
                if diags[i - j].is_zero_elem() || inner[j].is_zero_elem() {
                    acc
                } else {
                    acc.plus(&diags[i - j].times(&inner[j]))
                }
            })
        })
        .collect()
}

pub fn det_berkowitz<R: Ring>(m: &[Vec<R>]) -> R {
    let c = charpoly_berkowitz(m).pop().expect("nonempty");
    if m.len() % 2 == 1 {
        c.negated()
    } else {
        c
    }
}

/// Square matrix of generalized polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenPolyMatrix {
    rows: Vec<Vec<GenPoly>>,
}

/// Largest dimension for which [`GenPolyMatrix::determinant`] expands cofactors.
pub const COFACTOR_MAX_DIM: usize = 6;

impl GenPolyMatrix {
    pub fn new(rows: Vec<Vec<GenPoly>>) -> Self {
        assert!(!rows.is_empty() && rows.iter().all(|r| r.len() == rows.len()), "square matrix required");
        Self { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &GenPoly {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<GenPoly>] {
        &self.rows
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim();
        Self::new((0..n).map(|i| (0..n).map(|j| self.rows[j][i].clone()).collect()).collect())
    }

    /// Entrywise `T -> T^-1`.
    pub fn invert_exponents(&self) -> Self {
        Self::new(self.rows.iter().map(|r| r.iter().map(GenPoly::invert_exponents).collect()).collect())
    }

    pub fn determinant(&self) -> GenPoly {
        if self.dim() <= COFACTOR_MAX_DIM {
            det_cofactor(&self.rows)
        } else {
            det_berkowitz(&self.rows)
        }
    }
}

/// `M(T) = D - sum T^alpha(s) E_(tail,head) - sum T^-alpha(s) E_(head,tail)`.
pub fn voltage_matrix(va: &VoltageAssignment) -> GenPolyMatrix {
    let graph = va.graph();
    let g = graph.vertex_count();
    let zero = GenPoly::zero(va.ell(), va.precision()).expect("validated voltages");
    let mut rows = vec![vec![zero.clone(); g]; g];
    for (i, &d) in graph.valencies().iter().enumerate() {
        rows[i][i] = GenPoly::constant(va.ell(), va.precision(), BigInt::from(d)).expect("validated voltages");
    }
    for (e, v) in graph.edges().iter().zip(va.voltages()) {
        let fwd = GenPoly::monomial(BigInt::one(), v);
        let back = GenPoly::monomial(BigInt::one(), &v.neg());
        rows[e.tail][e.head] = rows[e.tail][e.head].sub(&fwd);
        rows[e.head][e.tail] = rows[e.head][e.tail].sub(&back);
    }
    GenPolyMatrix::new(rows)
}
