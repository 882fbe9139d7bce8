//! Finite truncations `G_n` of the counterexample DAG and their triplet
//! labeling.
//!
//! `G_n` holds the path `v_1 -> ... -> v_n`, the anchor `T`, one chained OR
//! gadget `OR_{i,j}` over `(v_i, ..., v_j)` for every `2 <= i < j <= n`, and a
//! hookup edge from `v_{i-1}` to the output of each `OR_{i,j}`.
//!
//! Ids are laid out deterministically: `v_i` is `i - 1`, `T` is `n`, and the
//! gadgets follow in lexicographic `(i, j)` order with stage vertices in
//! `(a, b, t', c)` order.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::gadgets::{build_or_chain, forced_extension, GadgetError, GadgetHandle};
use crate::graph::{topological_sort, DiGraph, TripletLabel, VertexId, VertexNames};
use crate::majority::{color_for_truth, ExtensionConflict, ExtensionRule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CounterexampleError {
    #[error("truncation depth must be at least 2, got {0}")]
    DepthTooSmall(usize),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationSpec {
    pub n: usize,
    /// `path[i - 1]` is `v_i`.
    pub path: Vec<VertexId>,
    pub anchor: VertexId,
    pub gadgets: BTreeMap<(usize, usize), GadgetHandle>,
}

impl TruncationSpec {
    /// `v_i`, 1-based.
    pub fn path_vertex(&self, i: usize) -> VertexId {
        self.path[i - 1]
    }

    pub fn gadget(&self, i: usize, j: usize) -> Option<&GadgetHandle> {
        self.gadgets.get(&(i, j))
    }

    pub fn names(&self) -> VertexNames {
        let mut names = VertexNames::new();
        for (i, &v) in self.path.iter().enumerate() {
            names.insert(v, format!("v{}", i + 1));
        }
        names.insert(self.anchor, "T".into());
        for (&(i, j), h) in &self.gadgets {
            for (s, stage) in h.stages.iter().enumerate() {
                for (v, role) in stage.vertices().into_iter().zip(["a", "b", "t'", "c"]) {
                    names.insert(v, format!("OR[{i},{j}].{}.{role}", s + 1));
                }
            }
        }
        names
    }
}

pub fn build_truncation(n: usize) -> Result<(DiGraph, TruncationSpec), CounterexampleError> {
    if n < 2 {
        return Err(CounterexampleError::DepthTooSmall(n));
    }
    let mut g = DiGraph::with_vertices(n + 1);
    let path: Vec<VertexId> = (0..n).map(VertexId).collect();
    let anchor = VertexId(n);
    for w in path.windows(2) {
        g.add_edge(w[0], w[1]).expect("fresh path edge");
    }
    let mut gadgets = BTreeMap::new();
    for i in 2..=n {
        for j in i + 1..=n {
            let h = build_or_chain(&mut g, anchor, &path[i - 1..j])?;
            g.add_edge(path[i - 2], h.output).expect("fresh hookup edge");
            gadgets.insert((i, j), h);
        }
    }
    Ok((
        g,
        TruncationSpec {
            n,
            path,
            anchor,
            gadgets,
        },
    ))
}

/// Triplet labels indexed by vertex id; the anchor is unlabeled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaLabeling {
    pub labels: Vec<Option<TripletLabel>>,
}

impl SigmaLabeling {
    pub fn get(&self, v: VertexId) -> Option<TripletLabel> {
        self.labels.get(v.0).copied().flatten()
    }

    pub fn set(&mut self, v: VertexId, label: Option<TripletLabel>) {
        self.labels[v.0] = label;
    }
}

/// Position of each internal vertex in the min-index topological order of
/// the gadget's internal vertices taken in isolation.
fn local_order(h: &GadgetHandle) -> BTreeMap<VertexId, usize> {
    let internal: Vec<VertexId> = h.internal.iter().copied().collect();
    let local = |v: VertexId| internal.binary_search(&v).ok();
    let mut iso = DiGraph::with_vertices(internal.len());
    for (u, v) in h.edges() {
        if let (Some(a), Some(b)) = (local(u), local(v)) {
            iso.add_edge(VertexId(a), VertexId(b))
                .expect("gadget edges are simple");
        }
    }
    let order = topological_sort(&iso).expect("gadgets are acyclic");
    order
        .into_iter()
        .enumerate()
        .map(|(pos, v)| (internal[v.0], pos))
        .collect()
}

/// `v_i -> (i, 0, 0)`; a non-path vertex `v` of `OR_{i,j}` gets
/// `(i - 1, j, position of v in the gadget's own topological order)`.
pub fn sigma_label(g: &DiGraph, spec: &TruncationSpec) -> SigmaLabeling {
    let mut labels = vec![None; g.vertex_count()];
    for (i, &v) in spec.path.iter().enumerate() {
        labels[v.0] = Some(TripletLabel(i + 1, 0, 0));
    }
    for (&(i, j), h) in &spec.gadgets {
        for (v, pos) in local_order(h) {
            labels[v.0] = Some(TripletLabel(i - 1, j, pos));
        }
    }
    SigmaLabeling { labels }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaCheck {
    pub edges_checked: usize,
    pub first_violation: Option<(VertexId, VertexId)>,
}

impl SigmaCheck {
    pub fn ok(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Checks that labels strictly increase along every edge not touching the
/// anchor, and that the anchor is only ever entered from labeled vertices.
pub fn verify_sigma(g: &DiGraph, spec: &TruncationSpec, labels: &SigmaLabeling) -> SigmaCheck {
    let edges = g.sorted_edges();
    let first_violation = edges.iter().copied().find(|&(u, v)| {
        if u == spec.anchor {
            return true;
        }
        let Some(lu) = labels.get(u) else {
            return true;
        };
        if v == spec.anchor {
            return false;
        }
        labels.get(v).map_or(true, |lv| lu >= lv)
    });
    SigmaCheck {
        edges_checked: edges.len(),
        first_violation,
    }
}

/// Colors every gadget vertex of a truncation from the path and anchor colors
/// using the closed-form forced extension.
pub struct GadgetExtension<'a> {
    spec: &'a TruncationSpec,
}

impl<'a> GadgetExtension<'a> {
    pub fn new(spec: &'a TruncationSpec) -> Self {
        GadgetExtension { spec }
    }
}

impl ExtensionRule for GadgetExtension<'_> {
    fn extend(&self, _: &DiGraph, colors: &mut [Option<u32>]) -> Result<(), ExtensionConflict> {
        let anchor_color = colors[self.spec.anchor.0]
            .ok_or_else(|| ExtensionConflict("anchor is not colored".into()))?;
        if anchor_color > 1 {
            return Err(ExtensionConflict("gadget extension needs 2 colors".into()));
        }
        for h in self.spec.gadgets.values() {
            let truths = h
                .inputs
                .iter()
                .map(|x| {
                    colors[x.0]
                        .map(|c| c == anchor_color)
                        .ok_or_else(|| ExtensionConflict(format!("input {x} is not colored")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let ext =
                forced_extension(h, &truths).map_err(|e| ExtensionConflict(e.to_string()))?;
            for (v, t) in ext {
                colors[v.0] = Some(color_for_truth(t, anchor_color));
            }
        }
        Ok(())
    }
}
