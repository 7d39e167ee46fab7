#![allow(dead_code)]

use ltower_core::{Edge, Multigraph, Tower, VoltageAssignment};
use rand::rngs::StdRng;
use rand::Rng;

/// Random multigraph on `g` vertices with `s` edges, loops and parallel edges allowed.
pub fn random_multigraph(rng: &mut StdRng, g: usize, s: usize) -> Multigraph {
    let edges = (0..s).map(|_| Edge::new(rng.gen_range(0..g), rng.gen_range(0..g))).collect();
    Multigraph::with_vertex_count(g, edges).unwrap()
}

/// Rejection-samples a graph meeting the standing hypotheses with a tower connected at every level.
pub fn random_tower(rng: &mut StdRng, ells: &[u64], max_g: usize, max_s: usize, max_abs: i64, precision: u32) -> Tower {
    loop {
        let g = rng.gen_range(1..=max_g);
        let s = rng.gen_range(g.max(2)..=max_s);
        let graph = random_multigraph(rng, g, s);
        if !graph.validate().is_valid() {
            continue;
        }
        let ell = ells[rng.gen_range(0..ells.len())];
        let volts: Vec<i64> = (0..s).map(|_| rng.gen_range(-max_abs..=max_abs)).collect();
        let va = VoltageAssignment::from_integers(graph, ell, precision, &volts).unwrap();
        if let Ok(t) = Tower::new(va) {
            return t;
        }
    }
}

/// Counts spanning trees by testing every `(g - 1)`-subset of edges for acyclicity.
pub fn brute_force_trees(graph: &Multigraph) -> u64 {
    let g = graph.vertex_count();
    let edges = graph.edges();
    let k = g - 1;
    let mut count = 0;
    for mask in 0u32..(1 << edges.len()) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let mut parent: Vec<usize> = (0..g).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let acyclic = (0..edges.len()).filter(|i| mask >> i & 1 == 1).all(|i| {
            let (a, b) = (root(&mut parent, edges[i].tail), root(&mut parent, edges[i].head));
            parent[a] = b;
            a != b
        });
        if acyclic {
            count += 1;
        }
    }
    count
}
