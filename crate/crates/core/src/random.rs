//! Seeded random instance generators for tests, experiments and the CLI.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{DiGraph, VertexId};
use crate::multigraph::WeightedMultigraph;

/// A random DAG on `n` vertices: vertices are ranked by a random permutation
/// and each forward pair (by rank) becomes an edge with probability `density`.
pub fn random_dag<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> DiGraph {
    let mut rank: Vec<usize> = (0..n).collect();
    rank.shuffle(rng);
    let mut g = DiGraph::with_vertices(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                g.add_edge(VertexId(rank[a]), VertexId(rank[b]))
                    .expect("distinct forward pair");
            }
        }
    }
    g
}

/// A random weighted multigraph on `n` vertices; each pair is present with
/// probability `density` and weighted uniformly in `1..=max_weight`.
pub fn random_multigraph<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    density: f64,
    max_weight: u64,
) -> WeightedMultigraph {
    let mut mg = WeightedMultigraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                let w = rng.gen_range(1..=max_weight);
                mg.add_edge(VertexId(u), VertexId(v), w)
                    .expect("distinct in-range pair");
            }
        }
    }
    mg
}
