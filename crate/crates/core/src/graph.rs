//! Multigraphs with a directed section of their edges, and voltage data on that section.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::TruncatedPadic;

/// A directed section edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
}

impl Edge {
    pub fn new(tail: usize, head: usize) -> Self {
        Self { tail, head }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// A finite multigraph. Loops and parallel edges are allowed; edge order is significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    vertex_names: Vec<String>,
    edges: Vec<Edge>,
}

impl Multigraph {
    pub fn new(vertex_names: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let g = vertex_names.len();
        if g == 0 {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        if let Some(e) = edges.iter().find(|e| e.tail >= g || e.head >= g) {
            return Err(Error::InvalidGraph(format!("edge {}->{} references a missing vertex", e.tail, e.head)));
        }
        Ok(Self { vertex_names, edges })
    }

    /// Vertices named `v1, ..., vg`.
    pub fn with_vertex_count(g: usize, edges: Vec<Edge>) -> Result<Self> {
        Self::new((1..=g).map(|i| format!("v{i}")).collect(), edges)
    }

    /// The bouquet with `t` loops on a single vertex.
    pub fn bouquet(t: usize) -> Self {
        Self { vertex_names: vec!["v".into()], edges: vec![Edge::new(0, 0); t] }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Valencies; a loop contributes 2 at its vertex.
    pub fn valencies(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for e in &self.edges {
            deg[e.tail] += 1;
            deg[e.head] += 1;
        }
        deg
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64
    }

    /// Incident edge indices per vertex, in edge order (loops listed once).
    pub(crate) fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_count()];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.tail].push(i);
            if !e.is_loop() {
                inc[e.head].push(i);
            }
        }
        inc
    }

    pub fn component_count(&self) -> usize {
        let g = self.vertex_count();
        let mut parent: Vec<usize> = (0..g).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut count = g;
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.tail), find(&mut parent, e.head));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub fn validate(&self) -> ValidationReport {
        let valencies = self.valencies();
        let mut violations = Vec::new();
        let components = self.component_count();
        if components != 1 {
            violations.push(Violation::Disconnected { components });
        }
        for (vertex, &valency) in valencies.iter().enumerate() {
            if valency < 2 {
                violations.push(Violation::LowValency { vertex, valency });
            }
        }
        let chi = self.euler_characteristic();
        if chi == 0 {
            violations.push(Violation::ZeroEulerCharacteristic);
        }
        ValidationReport {
            euler_characteristic: chi,
            min_valency: valencies.into_iter().min().unwrap_or(0),
            violations,
        }
    }

    /// Breadth-first spanning tree from vertex 0, always taking the lowest-index edge.
    pub fn bfs_spanning_tree(&self) -> Result<Vec<usize>> {
        let inc = self.incidence();
        let mut seen = vec![false; self.vertex_count()];
        let mut tree = Vec::with_capacity(self.vertex_count() - 1);
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &ei in &inc[v] {
                let e = self.edges[ei];
                let w = if e.tail == v { e.head } else { e.tail };
                if !seen[w] {
                    seen[w] = true;
                    tree.push(ei);
                    queue.push_back(w);
                }
            }
        }
        if tree.len() + 1 != self.vertex_count() {
            return Err(Error::Disconnected);
        }
        tree.sort_unstable();
        Ok(tree)
    }

    /// Checks that `tree` lists the edges of a spanning tree.
    pub fn check_spanning_tree(&self, tree: &[usize]) -> Result<()> {
        if tree.len() + 1 != self.vertex_count() || tree.iter().any(|&i| i >= self.edge_count()) {
            return Err(Error::InvalidGraph("not a spanning tree".into()));
        }
        let edges = tree.iter().map(|&i| self.edges[i]).collect();
        let sub = Multigraph { vertex_names: self.vertex_names.clone(), edges };
        if sub.is_connected() {
            Ok(())
        } else {
            Err(Error::InvalidGraph("not a spanning tree".into()))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    Disconnected { components: usize },
    LowValency { vertex: usize, valency: usize },
    ZeroEulerCharacteristic,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Disconnected { components } => write!(f, "graph has {components} components"),
            Violation::LowValency { vertex, valency } => write!(f, "vertex {vertex} has valency {valency} < 2"),
            Violation::ZeroEulerCharacteristic => write!(f, "Euler characteristic is zero"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub euler_characteristic: i64,
    pub min_valency: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A voltage in Z_ell together with whether it was declared as a rational integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Voltage {
    value: TruncatedPadic,
    integer: Option<i64>,
}

impl Voltage {
    pub fn integer(ell: u64, precision: u32, value: i64) -> Result<Self> {
        Ok(Self { value: TruncatedPadic::from_integer(ell, precision, value)?, integer: Some(value) })
    }

    /// An ell-adic voltage; never treated as integral, whatever its residue.
    pub fn padic(value: TruncatedPadic) -> Self {
        Self { value, integer: None }
    }

    pub fn value(&self) -> TruncatedPadic {
        self.value
    }

    pub fn as_integer(&self) -> Option<i64> {
        self.integer
    }

    pub fn is_integral(&self) -> bool {
        self.integer.is_some()
    }

    /// The image in Z/ell^n. Declared integers reduce at any level; ell-adic
    /// voltages only up to their precision.
    pub fn reduce(&self, n: u32) -> Result<u64> {
        match self.integer {
            Some(a) if n > self.value.precision() => {
                let m = crate::padic::modulus(self.value.ell(), n)?;
                Ok((a as i128).rem_euclid(m as i128) as u64)
            }
            _ => self.value.reduce(n),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let integer = match (self.integer, other.integer) {
            (Some(a), Some(b)) => a.checked_add(b),
            _ => None,
        };
        Ok(Self { value: self.value.add(&other.value)?, integer })
    }

    pub fn neg(&self) -> Self {
        Self { value: self.value.neg(), integer: self.integer.map(|a| -a) }
    }
}

impl fmt::Display for Voltage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.integer {
            Some(a) => write!(f, "{a}"),
            None => write!(f, "{}", self.value),
        }
    }
}

/// A multigraph together with one voltage in Z_ell per section edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoltageAssignment {
    graph: Multigraph,
    ell: u64,
    precision: u32,
    voltages: Vec<Voltage>,
}

impl VoltageAssignment {
    pub fn new(graph: Multigraph, voltages: Vec<Voltage>) -> Result<Self> {
        if voltages.len() != graph.edge_count() {
            return Err(Error::Mismatch(format!("{} voltages for {} edges", voltages.len(), graph.edge_count())));
        }
        let first = voltages.first().ok_or_else(|| Error::InvalidGraph("no edges".into()))?.value();
        let (ell, precision) = (first.ell(), first.precision());
        if voltages.iter().any(|v| v.value().ell() != ell || v.value().precision() != precision) {
            return Err(Error::Mismatch("voltages must share ell and precision".into()));
        }
        Ok(Self { graph, ell, precision, voltages })
    }

    pub fn from_integers(graph: Multigraph, ell: u64, precision: u32, voltages: &[i64]) -> Result<Self> {
        let voltages = voltages.iter().map(|&a| Voltage::integer(ell, precision, a)).collect::<Result<Vec<_>>>()?;
        Self::new(graph, voltages)
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn voltages(&self) -> &[Voltage] {
        &self.voltages
    }

    pub fn is_integral(&self) -> bool {
        self.voltages.iter().all(Voltage::is_integral)
    }

    /// Voltage reductions modulo ell^n.
    pub fn reduced(&self, n: u32) -> Result<Vec<u64>> {
        self.voltages.iter().map(|v| v.reduce(n)).collect()
    }

    /// Cycle voltages with respect to a spanning tree (default: [`Multigraph::bfs_spanning_tree`]).
    pub fn normalize(&self, tree: Option<&[usize]>) -> Result<VoltageAssignment> {
        normalize_voltages(&self.graph, &self.voltages, tree)
    }

    /// Whether the normalized cycle voltages generate Z/ell^n.
    pub fn cycle_voltages_generate(&self, n: u32) -> Result<bool> {
        if n == 0 {
            return Ok(true);
        }
        let normalized = self.normalize(None)?;
        for v in normalized.voltages() {
            // the subgroup they generate is ell^(min valuation) Z/ell^n
            if v.reduce(n)? % self.ell != 0 {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Replaces each voltage by the voltage of its fundamental cycle: the tree path from
/// head to tail followed by the edge itself. Tree edges get voltage 0.
pub fn normalize_voltages(
    graph: &Multigraph,
    voltages: &[Voltage],
    tree: Option<&[usize]>,
) -> Result<VoltageAssignment> {
    if voltages.len() != graph.edge_count() {
        return Err(Error::Mismatch("one voltage per section edge required".into()));
    }
    let tree = match tree {
        Some(t) => {
            graph.check_spanning_tree(t)?;
            t.to_vec()
        }
        None => graph.bfs_spanning_tree()?,
    };
    let first = voltages.first().ok_or_else(|| Error::InvalidGraph("no edges".into()))?.value();
    let zero = Voltage::integer(first.ell(), first.precision(), 0)?;

    // potential[v] = voltage of the tree path from vertex 0 to v
    let g = graph.vertex_count();
    let mut tree_inc = vec![Vec::new(); g];
    for &ei in &tree {
        let e = graph.edges()[ei];
        tree_inc[e.tail].push(ei);
        tree_inc[e.head].push(ei);
    }
    let mut potential: Vec<Option<Voltage>> = vec![None; g];
    potential[0] = Some(zero);
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        let pv = potential[v].expect("visited");
        for &ei in &tree_inc[v] {
            let e = graph.edges()[ei];
            let (w, step) = if e.tail == v { (e.head, voltages[ei]) } else { (e.tail, voltages[ei].neg()) };
            if potential[w].is_none() {
                potential[w] = Some(pv.add(&step)?);
                queue.push_back(w);
            }
        }
    }
    let normalized = graph
        .edges()
        .iter()
        .zip(voltages)
        .map(|(e, a)| {
            let pt = potential[e.tail].expect("spanning");
            let ph = potential[e.head].expect("spanning");
            a.add(&pt)?.add(&ph.neg())
        })
        .collect::<Result<Vec<_>>>()?;
    VoltageAssignment::new(graph.clone(), normalized)
}
