//! Enumeration of majority k-colorings.
//!
//! Without an extension rule the search assigns every vertex, in reverse
//! topological order when the graph is acyclic, and checks a vertex as soon
//! as it and all of its out-neighbors carry colors. With an extension rule
//! only the free vertices are searched; each complete free assignment is
//! handed to the rule, which must color everything else, and the full
//! coloring is then verified.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{topological_sort, DiGraph, VertexId};

use super::{vertex_record, MajorityError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("extension rule conflict: {0}")]
pub struct ExtensionConflict(pub String);

/// Deterministically colors the non-free vertices from a free assignment.
///
/// On entry exactly the free vertices are `Some`; on success every entry must
/// be `Some`.
pub trait ExtensionRule: Sync {
    fn extend(&self, g: &DiGraph, colors: &mut [Option<u32>]) -> Result<(), ExtensionConflict>;
}

/// Majority colorings projected onto `free` (ascending vertex order), sorted
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationResult {
    pub free: Vec<VertexId>,
    pub patterns: Vec<Vec<u32>>,
}

pub struct Enumeration<'a> {
    graph: &'a DiGraph,
    palette: u32,
    free: Option<Vec<VertexId>>,
    fixed: BTreeMap<VertexId, u32>,
    rule: Option<&'a dyn ExtensionRule>,
    jobs: usize,
}

impl<'a> Enumeration<'a> {
    pub fn new(graph: &'a DiGraph, palette: u32) -> Self {
        Enumeration {
            graph,
            palette,
            free: None,
            fixed: BTreeMap::new(),
            rule: None,
            jobs: 1,
        }
    }

    pub fn free(mut self, free: impl IntoIterator<Item = VertexId>) -> Self {
        self.free = Some(free.into_iter().collect());
        self
    }

    /// Pins a free vertex to one color.
    pub fn fix(mut self, v: VertexId, color: u32) -> Self {
        self.fixed.insert(v, color);
        self
    }

    pub fn rule(mut self, rule: &'a dyn ExtensionRule) -> Self {
        self.rule = Some(rule);
        self
    }

    pub fn jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    fn free_set(&self) -> Result<Vec<VertexId>, MajorityError> {
        let n = self.graph.vertex_count();
        let free: Vec<VertexId> = match &self.free {
            None => self.graph.vertices().collect(),
            Some(list) => {
                let set: BTreeSet<VertexId> = list.iter().copied().collect();
                if set.len() != list.len() {
                    return Err(MajorityError::InvalidFreeSet("duplicate vertex".into()));
                }
                if let Some(v) = set.iter().find(|v| v.0 >= n) {
                    return Err(MajorityError::InvalidFreeSet(format!(
                        "vertex {v} out of range"
                    )));
                }
                set.into_iter().collect()
            }
        };
        if self.rule.is_none() && free.len() != n {
            return Err(MajorityError::InvalidFreeSet(
                "without an extension rule every vertex must be free".into(),
            ));
        }
        for (&v, &c) in &self.fixed {
            if free.binary_search(&v).is_err() {
                return Err(MajorityError::InvalidFreeSet(format!(
                    "fixed vertex {v} is not free"
                )));
            }
            if c >= self.palette {
                return Err(MajorityError::InvalidFreeSet(format!(
                    "fixed color {c} outside palette {}",
                    self.palette
                )));
            }
        }
        Ok(free)
    }

    pub fn run(&self) -> Result<EnumerationResult, MajorityError> {
        if self.palette == 0 {
            return Err(MajorityError::InvalidFreeSet("palette must be positive".into()));
        }
        let g = self.graph;
        let free = self.free_set()?;
        let n = g.vertex_count();
        let mut is_free = vec![false; n];
        for v in &free {
            is_free[v.0] = true;
        }

        let order: Vec<VertexId> = match topological_sort(g) {
            Ok(topo) => topo.into_iter().rev().filter(|v| is_free[v.0]).collect(),
            Err(_) => free.clone(),
        };
        let domain: Vec<Option<u32>> = order.iter().map(|v| self.fixed.get(v).copied()).collect();
        let checkable: Vec<bool> = g
            .vertices()
            .map(|v| is_free[v.0] && g.out_neighbors(v).iter().all(|u| is_free[u.0]))
            .collect();
        let in_adj = g.in_adjacency();

        let template = Search {
            g,
            palette: self.palette,
            order: &order,
            checkable: &checkable,
            in_adj: &in_adj,
            rule: self.rule,
            free: &free,
            domain,
            colors: vec![None; n],
            remaining: g.vertices().map(|v| g.out_degree(v)).collect(),
            found: Vec::new(),
        };

        let mut patterns = if self.jobs <= 1 {
            let mut search = template;
            search.rec(0)?;
            search.found
        } else {
            let prefixes = template.split_prefixes(self.jobs * 4);
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.jobs)
                .build()
                .map_err(|e| MajorityError::InvalidFreeSet(e.to_string()))?;
            let parts: Vec<Result<Vec<Vec<u32>>, ExtensionConflict>> = pool.install(|| {
                prefixes
                    .into_par_iter()
                    .map(|domain| {
                        let mut search = template.with_domain(domain);
                        search.rec(0).map(|_| search.found)
                    })
                    .collect()
            });
            let mut all = Vec::new();
            for part in parts {
                all.extend(part?);
            }
            all
        };
        patterns.sort_unstable();
        Ok(EnumerationResult { free, patterns })
    }
}

struct Search<'s> {
    g: &'s DiGraph,
    palette: u32,
    order: &'s [VertexId],
    checkable: &'s [bool],
    in_adj: &'s [Vec<VertexId>],
    rule: Option<&'s dyn ExtensionRule>,
    free: &'s [VertexId],
    domain: Vec<Option<u32>>,
    colors: Vec<Option<u32>>,
    remaining: Vec<usize>,
    found: Vec<Vec<u32>>,
}

impl<'s> Search<'s> {
    fn with_domain(&self, domain: Vec<Option<u32>>) -> Search<'s> {
        Search {
            domain,
            colors: self.colors.clone(),
            remaining: self.remaining.clone(),
            found: Vec::new(),
            ..*self
        }
    }

    /// Pins the first few unfixed positions to every combination of colors,
    /// producing at least `target` independent sub-searches when possible.
    fn split_prefixes(&self, target: usize) -> Vec<Vec<Option<u32>>> {
        let mut prefixes = vec![self.domain.clone()];
        for pos in 0..self.order.len() {
            if prefixes.len() >= target {
                break;
            }
            if self.domain[pos].is_some() {
                continue;
            }
            prefixes = prefixes
                .into_iter()
                .flat_map(|d| {
                    (0..self.palette).map(move |c| {
                        let mut d = d.clone();
                        d[pos] = Some(c);
                        d
                    })
                })
                .collect();
        }
        prefixes
    }

    fn satisfied(&self, v: VertexId) -> bool {
        let own = self.colors[v.0];
        let mono = self
            .g
            .out_neighbors(v)
            .iter()
            .filter(|u| self.colors[u.0] == own)
            .count();
        2 * mono <= self.g.out_degree(v)
    }

    fn complete(&self, v: VertexId) -> bool {
        self.checkable[v.0] && self.colors[v.0].is_some() && self.remaining[v.0] == 0
    }

    fn consistent_after(&self, v: VertexId) -> bool {
        if self.complete(v) && !self.satisfied(v) {
            return false;
        }
        self.in_adj[v.0]
            .iter()
            .all(|&u| !self.complete(u) || self.satisfied(u))
    }

    fn assign(&mut self, v: VertexId, c: u32) {
        self.colors[v.0] = Some(c);
        for &u in &self.in_adj[v.0] {
            self.remaining[u.0] -= 1;
        }
    }

    fn unassign(&mut self, v: VertexId) {
        self.colors[v.0] = None;
        for &u in &self.in_adj[v.0] {
            self.remaining[u.0] += 1;
        }
    }

    fn rec(&mut self, pos: usize) -> Result<(), ExtensionConflict> {
        if pos == self.order.len() {
            return self.leaf();
        }
        let v = self.order[pos];
        let (lo, hi) = match self.domain[pos] {
            Some(c) => (c, c + 1),
            None => (0, self.palette),
        };
        for c in lo..hi {
            self.assign(v, c);
            if self.consistent_after(v) {
                self.rec(pos + 1)?;
            }
            self.unassign(v);
        }
        Ok(())
    }

    fn leaf(&mut self) -> Result<(), ExtensionConflict> {
        if let Some(rule) = self.rule {
            let mut full = self.colors.clone();
            rule.extend(self.g, &mut full)?;
            let mut colors = Vec::with_capacity(full.len());
            for (v, c) in full.into_iter().enumerate() {
                match c {
                    Some(c) if c < self.palette => colors.push(c),
                    Some(c) => {
                        return Err(ExtensionConflict(format!(
                            "rule gave vertex {v} color {c} outside the palette"
                        )))
                    }
                    None => {
                        return Err(ExtensionConflict(format!("rule left vertex {v} uncolored")))
                    }
                }
            }
            if !self
                .g
                .vertices()
                .all(|v| vertex_record(self.g, &colors, v).satisfied)
            {
                return Ok(());
            }
        }
        let pattern = self
            .free
            .iter()
            .map(|v| self.colors[v.0].expect("free vertices are assigned at a leaf"))
            .collect();
        self.found.push(pattern);
        Ok(())
    }
}

/// Convenience wrapper over [`Enumeration`].
pub fn enumerate_majority_colorings(
    g: &DiGraph,
    k: u32,
    free: Option<&[VertexId]>,
    rule: Option<&dyn ExtensionRule>,
) -> Result<EnumerationResult, MajorityError> {
    let mut e = Enumeration::new(g, k);
    if let Some(free) = free {
        e = e.free(free.iter().copied());
    }
    if let Some(rule) = rule {
        e = e.rule(rule);
    }
    e.run()
}

/// Every majority k-coloring, found by checking all k^V colorings in
/// lexicographic order. Intended as an oracle for small graphs.
pub fn brute_force_colorings(g: &DiGraph, k: u32) -> Vec<Vec<u32>> {
    let n = g.vertex_count();
    let mut colors = vec![0u32; n];
    let mut found = Vec::new();
    loop {
        if g.vertices().all(|v| vertex_record(g, &colors, v).satisfied) {
            found.push(colors.clone());
        }
        // odometer, last vertex fastest
        let mut i = n;
        loop {
            if i == 0 {
                return found;
            }
            i -= 1;
            colors[i] += 1;
            if colors[i] < k {
                break;
            }
            colors[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_dag;
    use proptest::prelude::*;
    use rand::SeedableRng;

    #[test]
    fn single_edge_two_colors() {
        let g = DiGraph::from_edges(2, &[(0, 1)]).unwrap();
        let r = enumerate_majority_colorings(&g, 2, None, None).unwrap();
        assert_eq!(r.patterns, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn single_vertex_one_color() {
        let g = DiGraph::with_vertices(1);
        let r = enumerate_majority_colorings(&g, 1, None, None).unwrap();
        assert_eq!(r.patterns, vec![vec![0]]);
    }

    #[test]
    fn empty_graph_has_one_empty_coloring() {
        let g = DiGraph::new();
        assert_eq!(brute_force_colorings(&g, 2), vec![Vec::<u32>::new()]);
        let r = enumerate_majority_colorings(&g, 2, None, None).unwrap();
        assert_eq!(r.patterns, vec![Vec::<u32>::new()]);
    }

    #[test]
    fn free_set_must_be_total_without_rule() {
        let g = DiGraph::with_vertices(2);
        assert!(matches!(
            enumerate_majority_colorings(&g, 2, Some(&[VertexId(0)]), None),
            Err(MajorityError::InvalidFreeSet(_))
        ));
    }

    #[test]
    fn fixed_vertex_restricts_results() {
        let g = DiGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let r = Enumeration::new(&g, 2).fix(VertexId(2), 0).run().unwrap();
        assert_eq!(r.patterns, vec![vec![0, 1, 0]]);
    }

    struct Broken;
    impl ExtensionRule for Broken {
        fn extend(&self, _: &DiGraph, _: &mut [Option<u32>]) -> Result<(), ExtensionConflict> {
            Err(ExtensionConflict("not unique".into()))
        }
    }

    struct Lazy;
    impl ExtensionRule for Lazy {
        fn extend(&self, _: &DiGraph, _: &mut [Option<u32>]) -> Result<(), ExtensionConflict> {
            Ok(())
        }
    }

    #[test]
    fn rule_failures_surface() {
        let g = DiGraph::from_edges(2, &[(0, 1)]).unwrap();
        let free = [VertexId(1)];
        assert!(matches!(
            enumerate_majority_colorings(&g, 2, Some(&free), Some(&Broken)),
            Err(MajorityError::ExtensionConflict(_))
        ));
        assert!(matches!(
            enumerate_majority_colorings(&g, 2, Some(&free), Some(&Lazy)),
            Err(MajorityError::ExtensionConflict(_))
        ));
    }

    /// Colors each non-free vertex opposite to its first out-neighbor, in
    /// reverse topological order.
    struct Opposite;
    impl ExtensionRule for Opposite {
        fn extend(&self, g: &DiGraph, colors: &mut [Option<u32>]) -> Result<(), ExtensionConflict> {
            let order = topological_sort(g).map_err(|e| ExtensionConflict(e.to_string()))?;
            for &v in order.iter().rev() {
                if colors[v.0].is_none() {
                    let first = g.out_neighbors(v).first().and_then(|u| colors[u.0]);
                    colors[v.0] = Some(first.map_or(0, |c| 1 - c));
                }
            }
            Ok(())
        }
    }

    #[test]
    fn rule_mode_on_path_matches_brute_force() {
        // every vertex on a path has out-degree <= 1, so colors are forced upstream
        let g = DiGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let free = [VertexId(4)];
        let r = enumerate_majority_colorings(&g, 2, Some(&free), Some(&Opposite)).unwrap();
        let projected: BTreeSet<Vec<u32>> = brute_force_colorings(&g, 2)
            .into_iter()
            .map(|c| vec![c[4]])
            .collect();
        assert_eq!(r.patterns, projected.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn parallel_and_serial_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let g = random_dag(&mut rng, 14, 0.3);
            let serial = Enumeration::new(&g, 2).run().unwrap();
            let parallel = Enumeration::new(&g, 2).jobs(4).run().unwrap();
            assert_eq!(serial, parallel);
        }
    }

    fn arb_digraph(max_n: usize) -> impl Strategy<Value = DiGraph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..(2 * n)).prop_map(move |pairs| {
                let mut g = DiGraph::with_vertices(n);
                for (u, v) in pairs {
                    let _ = g.add_edge(VertexId(u), VertexId(v));
                }
                g
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn backtracking_equals_brute_force(g in arb_digraph(9), k in 1u32..4) {
            let r = enumerate_majority_colorings(&g, k, None, None).unwrap();
            prop_assert_eq!(r.patterns, brute_force_colorings(&g, k));
        }
    }
}
