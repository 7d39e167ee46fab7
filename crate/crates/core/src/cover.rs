//! Derived covers X(Z/ell^n, S, alpha_n).

use num_bigint::BigUint;

use crate::error::Result;
use crate::graph::{Edge, Multigraph, VoltageAssignment};
use crate::matrix_tree::{self, DeterminantConfig};

/// The level-`n` derived multigraph of a voltage assignment.
///
/// Vertex `(v, a)` has index `a * g + v`; edge `(s, a)` has index `s * ell^n + a`
/// and joins `(tail(s), a)` to `(head(s), a + alpha_n(s))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedCover {
    level: u32,
    ell: u64,
    base_vertices: usize,
    base_edges: usize,
    graph: Multigraph,
}

impl DerivedCover {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// Order of the covering group Z/ell^n.
    pub fn degree(&self) -> usize {
        self.ell.pow(self.level) as usize
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn vertex_of(&self, index: usize) -> (usize, u64) {
        (index % self.base_vertices, (index / self.base_vertices) as u64)
    }

    pub fn edge_of(&self, index: usize) -> (usize, u64) {
        let d = self.degree();
        (index / d, (index % d) as u64)
    }

    /// Image of each cover edge under the projection to the base, as base (tail, head).
    pub fn project(&self) -> Vec<Edge> {
        self.graph.edges().iter().map(|e| Edge::new(self.vertex_of(e.tail).0, self.vertex_of(e.head).0)).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.graph.is_connected()
    }

    pub fn base_edge_count(&self) -> usize {
        self.base_edges
    }

    pub fn spanning_tree_count(&self, config: &DeterminantConfig) -> Result<BigUint> {
        matrix_tree::spanning_tree_count_with(&self.graph, config)
    }
}

pub fn derived_graph(va: &VoltageAssignment, n: u32) -> Result<DerivedCover> {
    let shifts = va.reduced(n)?;
    let base = va.graph();
    let g = base.vertex_count();
    let d = va.ell().pow(n);
    let mut edges = Vec::with_capacity(base.edge_count() * d as usize);
    for (e, &shift) in base.edges().iter().zip(&shifts) {
        for a in 0..d {
            let b = (a + shift) % d;
            edges.push(Edge::new(a as usize * g + e.tail, b as usize * g + e.head));
        }
    }
    let names = (0..d).flat_map(|a| base.vertex_names().iter().map(move |v| format!("({v},{a})"))).collect();
    Ok(DerivedCover {
        level: n,
        ell: va.ell(),
        base_vertices: g,
        base_edges: base.edge_count(),
        graph: Multigraph::new(names, edges)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::graph::Multigraph;

    #[test]
    fn sizes_and_projection() {
        let va = VoltageAssignment::from_integers(Multigraph::bouquet(3), 5, 3, &[1, 1, 1]).unwrap();
        let c = derived_graph(&va, 1).unwrap();
        assert_eq!(c.graph().vertex_count(), 5);
        assert_eq!(c.graph().edge_count(), 15);
        assert!(c.project().iter().all(|e| *e == Edge::new(0, 0)));
        assert!(c.graph().valencies().iter().all(|&v| v == 6));
        assert_eq!(c.graph().euler_characteristic(), 5 * -2);
    }

    #[test]
    fn level_zero_is_base() {
        let g = Multigraph::with_vertex_count(2, vec![Edge::new(0, 1), Edge::new(1, 0), Edge::new(1, 0)]).unwrap();
        let va = VoltageAssignment::from_integers(g.clone(), 5, 3, &[1, 2, 2]).unwrap();
        let c = derived_graph(&va, 0).unwrap();
        assert_eq!(c.graph().edges(), g.edges());
    }

    #[test]
    fn connectivity_examples() {
        let va = VoltageAssignment::from_integers(Multigraph::bouquet(2), 3, 3, &[0, 0]).unwrap();
        assert!(!derived_graph(&va, 1).unwrap().is_connected());

        let va = VoltageAssignment::from_integers(Multigraph::bouquet(4), 3, 3, &[1, 1, 2, 2]).unwrap();
        assert!(derived_graph(&va, 2).unwrap().is_connected());

        let va = VoltageAssignment::from_integers(Multigraph::bouquet(1), 3, 2, &[3]).unwrap();
        assert!(!derived_graph(&va, 1).unwrap().is_connected());
        assert!(!derived_graph(&va, 2).unwrap().is_connected());
        assert!(!va.cycle_voltages_generate(2).unwrap());
    }

    #[test]
    fn precision_guard() {
        use crate::graph::Voltage;
        let root = crate::padic::padic_sqrt(17, 2, 3, Some(1)).unwrap();
        let vs = vec![Voltage::padic(root), Voltage::integer(2, 3, 5).unwrap()];
        let va = VoltageAssignment::new(Multigraph::bouquet(2), vs).unwrap();
        assert_eq!(derived_graph(&va, 4).unwrap_err(), Error::PrecisionExceeded { level: 4, precision: 3 });
        // declared integers reduce exactly at any level
        let va = VoltageAssignment::from_integers(Multigraph::bouquet(2), 2, 3, &[1, 5]).unwrap();
        assert_eq!(derived_graph(&va, 4).unwrap().graph().vertex_count(), 16);
    }
}
