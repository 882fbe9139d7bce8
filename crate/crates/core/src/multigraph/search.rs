//! Exhaustive search for small weighted multigraphs without a majority
//! k-coloring.
//!
//! Instances are weight vectors over the `v(v-1)/2` vertex pairs with total
//! weight bounded. Up to six vertices, instances are reduced to isomorphism
//! classes: a per-vertex signature (weighted degree, sorted incident weights)
//! buckets candidates and a permutation search confirms isomorphism within a
//! bucket.
//!
//! Cost model: for each vertex count `v` with `p` pairs, at most
//! `C(W + p, p)` weight vectors, each tested against `k^v` colorings. The sum
//! over `v` is compared with the budget before any work starts.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::graph::VertexId;

use super::{is_majority, MultigraphError, WeightedMultigraph};

pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

/// Largest vertex count for which instances are reduced up to isomorphism.
const ISO_LIMIT: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_vertices: usize,
    pub max_total_weight: u64,
    /// Per-edge weight cap; `Some(1)` gives simple graphs.
    pub max_edge_weight: Option<u64>,
    pub k: u32,
    pub budget: u128,
}

impl SearchBounds {
    pub fn new(k: u32, max_vertices: usize, max_total_weight: u64) -> Self {
        SearchBounds {
            max_vertices,
            max_total_weight,
            max_edge_weight: None,
            k,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_edge_cap(mut self, cap: u64) -> Self {
        self.max_edge_weight = Some(cap);
        self
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn estimate(&self) -> u128 {
        (1..=self.max_vertices)
            .map(|v| {
                let pairs = (v * (v - 1) / 2) as u128;
                binomial(self.max_total_weight as u128 + pairs, pairs)
                    .saturating_mul((self.k as u128).saturating_pow(v as u32))
            })
            .fold(0u128, u128::saturating_add)
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    /// Weight vectors enumerated, before isomorphism reduction.
    pub instances_examined: u64,
    /// Instances whose colorability was actually tested.
    pub classes_tested: u64,
    pub non_colorable: Vec<WeightedMultigraph>,
}

fn pair_list(v: usize) -> Vec<(usize, usize)> {
    (0..v)
        .flat_map(|a| (a + 1..v).map(move |b| (a, b)))
        .collect()
}

fn weight_vectors(pairs: usize, total: u64, cap: u64) -> Vec<Vec<u64>> {
    fn go(i: usize, left: u64, cap: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for w in 0..=left.min(cap) {
            cur[i] = w;
            go(i + 1, left - w, cap, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    go(0, total, cap, &mut vec![0; pairs], &mut out);
    out
}

/// Dense symmetric weight matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Matrix {
    n: usize,
    w: Vec<u64>,
}

impl Matrix {
    fn from_vector(n: usize, pairs: &[(usize, usize)], weights: &[u64]) -> Self {
        let mut w = vec![0; n * n];
        for (&(a, b), &x) in pairs.iter().zip(weights) {
            w[a * n + b] = x;
            w[b * n + a] = x;
        }
        Matrix { n, w }
    }

    fn at(&self, a: usize, b: usize) -> u64 {
        self.w[a * self.n + b]
    }

    fn vertex_invariant(&self, v: usize) -> (u64, Vec<u64>) {
        let mut incident: Vec<u64> = (0..self.n)
            .map(|u| self.at(v, u))
            .filter(|&x| x > 0)
            .collect();
        incident.sort_unstable();
        (incident.iter().sum(), incident)
    }

    fn signature(&self) -> Vec<(u64, Vec<u64>)> {
        let mut sig: Vec<_> = (0..self.n).map(|v| self.vertex_invariant(v)).collect();
        sig.sort();
        sig
    }

    fn isomorphic(&self, other: &Matrix) -> bool {
        if self.n != other.n {
            return false;
        }
        let inv_a: Vec<_> = (0..self.n).map(|v| self.vertex_invariant(v)).collect();
        let inv_b: Vec<_> = (0..other.n).map(|v| other.vertex_invariant(v)).collect();
        let mut map = vec![usize::MAX; self.n];
        let mut used = vec![false; self.n];
        self.extend_map(other, &inv_a, &inv_b, 0, &mut map, &mut used)
    }

    fn extend_map(
        &self,
        other: &Matrix,
        inv_a: &[(u64, Vec<u64>)],
        inv_b: &[(u64, Vec<u64>)],
        i: usize,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if i == self.n {
            return true;
        }
        for j in 0..self.n {
            if used[j] || inv_a[i] != inv_b[j] {
                continue;
            }
            if (0..i).any(|p| self.at(p, i) != other.at(map[p], j)) {
                continue;
            }
            map[i] = j;
            used[j] = true;
            if self.extend_map(other, inv_a, inv_b, i + 1, map, used) {
                return true;
            }
            used[j] = false;
        }
        map[i] = usize::MAX;
        false
    }

    fn to_multigraph(&self) -> WeightedMultigraph {
        let mut mg = WeightedMultigraph::new(self.n);
        for a in 0..self.n {
            for b in a + 1..self.n {
                let x = self.at(a, b);
                if x > 0 {
                    mg.add_edge(VertexId(a), VertexId(b), x)
                        .expect("valid pair with positive weight");
                }
            }
        }
        mg
    }
}

/// Whether some k-coloring is a majority coloring. Colors are introduced in
/// order (vertex `i` uses at most one color beyond those seen), which covers
/// every coloring up to renaming.
fn has_majority_coloring(mg: &WeightedMultigraph, k: u32) -> bool {
    fn go(mg: &WeightedMultigraph, k: u32, colors: &mut Vec<u32>, used: u32) -> bool {
        if colors.len() == mg.vertex_count() {
            return is_majority(mg, colors);
        }
        for c in 0..k.min(used + 1) {
            colors.push(c);
            let found = go(mg, k, colors, used.max(c + 1));
            colors.pop();
            if found {
                return true;
            }
        }
        false
    }
    go(mg, k, &mut Vec::with_capacity(mg.vertex_count()), 0)
}

pub fn search_non_k_colorable(bounds: &SearchBounds) -> Result<SearchReport, MultigraphError> {
    let estimate = bounds.estimate();
    if estimate > bounds.budget {
        return Err(MultigraphError::BudgetExceeded {
            estimate,
            budget: bounds.budget,
        });
    }
    let cap = bounds.max_edge_weight.unwrap_or(bounds.max_total_weight);
    let mut report = SearchReport {
        instances_examined: 0,
        classes_tested: 0,
        non_colorable: Vec::new(),
    };
    for v in 1..=bounds.max_vertices {
        let pairs = pair_list(v);
        let vectors = weight_vectors(pairs.len(), bounds.max_total_weight, cap);
        report.instances_examined += vectors.len() as u64;

        let candidates: Vec<Matrix> = if v <= ISO_LIMIT {
            let mut buckets: HashMap<Vec<(u64, Vec<u64>)>, Vec<usize>> = HashMap::new();
            let mut reps: Vec<Matrix> = Vec::new();
            for wv in &vectors {
                let m = Matrix::from_vector(v, &pairs, wv);
                let bucket = buckets.entry(m.signature()).or_default();
                if bucket.iter().any(|&r| reps[r].isomorphic(&m)) {
                    continue;
                }
                bucket.push(reps.len());
                reps.push(m);
            }
            reps
        } else {
            vectors
                .iter()
                .map(|wv| Matrix::from_vector(v, &pairs, wv))
                .collect()
        };
        report.classes_tested += candidates.len() as u64;

        let found: Vec<WeightedMultigraph> = candidates
            .par_iter()
            .map(Matrix::to_multigraph)
            .filter(|mg| !has_majority_coloring(mg, bounds.k))
            .collect();
        report.non_colorable.extend(found);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_color_fails_on_a_single_edge() {
        let r = search_non_k_colorable(&SearchBounds::new(1, 2, 1)).unwrap();
        assert_eq!(r.non_colorable.len(), 1);
        let g = &r.non_colorable[0];
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.to_text(), "0 1 1\n");
    }

    #[test]
    fn two_colors_always_suffice_on_small_simple_graphs() {
        let r = search_non_k_colorable(&SearchBounds::new(2, 4, 6).with_edge_cap(1)).unwrap();
        assert!(r.non_colorable.is_empty());
        // 1 + 2 + 4 + 11 simple graphs on up to 4 vertices
        assert_eq!(r.classes_tested, 18);
    }

    #[test]
    fn isomorphism_classes_on_three_vertices() {
        // weighted graphs on 3 vertices with total weight <= 2:
        // empty, one edge w1, one edge w2, two edges w1+w1 (path)
        let r = search_non_k_colorable(&SearchBounds::new(2, 3, 2)).unwrap();
        let three = r.classes_tested - 1 - 3; // minus v=1 (1) and v=2 (weights 0,1,2)
        assert_eq!(three, 4);
        assert_eq!(r.instances_examined, 1 + 3 + 10);
    }

    #[test]
    fn budget_is_enforced() {
        let bounds = SearchBounds::new(3, 6, 30).with_budget(1000);
        assert!(matches!(
            search_non_k_colorable(&bounds),
            Err(MultigraphError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn isomorphism_check() {
        let pairs = pair_list(3);
        let a = Matrix::from_vector(3, &pairs, &[1, 0, 2]);
        let b = Matrix::from_vector(3, &pairs, &[2, 1, 0]);
        let c = Matrix::from_vector(3, &pairs, &[2, 0, 2]);
        assert!(a.isomorphic(&b));
        assert!(!a.isomorphic(&c));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(14, 6), 3003);
        assert_eq!(binomial(5, 0), 1);
    }
}
