//! Majority colorings of finite digraphs.
//!
//! A coloring is a majority coloring when every vertex has at least as many
//! bichromatic out-edges as monochromatic ones. Sinks are always satisfied.

mod enumerate;
mod greedy;
mod prefix;

pub use enumerate::{
    brute_force_colorings, enumerate_majority_colorings, Enumeration, EnumerationResult,
    ExtensionConflict, ExtensionRule,
};
pub use greedy::greedy_dag_2color;
pub use prefix::{feasible_prefix_set, feasible_prefix_set_exhaustive, PrefixSet};

use thiserror::Error;

use crate::graph::{Coloring, CycleFound, DiGraph, PaletteMismatch, VertexId};

#[derive(Debug, Error)]
pub enum MajorityError {
    #[error(transparent)]
    PaletteMismatch(#[from] PaletteMismatch),
    #[error("coloring covers {coloring} vertices but graph has {graph}")]
    LengthMismatch { coloring: usize, graph: usize },
    #[error("graph is not a DAG: {0}")]
    NotADag(#[from] CycleFound),
    #[error(transparent)]
    ExtensionConflict(#[from] ExtensionConflict),
    #[error("invalid free set: {0}")]
    InvalidFreeSet(String),
    #[error("truncation: {0}")]
    Truncation(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VertexRecord {
    pub mono: usize,
    pub diff: usize,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeficiencyReport {
    pub vertices: Vec<VertexRecord>,
    pub first_violation: Option<VertexId>,
}

impl DeficiencyReport {
    pub fn is_satisfied(&self) -> bool {
        self.first_violation.is_none()
    }

    pub fn violations(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.satisfied)
            .map(|(v, _)| VertexId(v))
    }
}

/// Counts monochromatic and bichromatic out-edges of `v`.
pub(crate) fn vertex_record(g: &DiGraph, colors: &[u32], v: VertexId) -> VertexRecord {
    let own = colors[v.0];
    let mono = g
        .out_neighbors(v)
        .iter()
        .filter(|u| colors[u.0] == own)
        .count();
    let diff = g.out_degree(v) - mono;
    VertexRecord {
        mono,
        diff,
        satisfied: diff >= mono,
    }
}

pub fn verify(g: &DiGraph, c: &Coloring) -> Result<DeficiencyReport, MajorityError> {
    if c.len() != g.vertex_count() {
        return Err(MajorityError::LengthMismatch {
            coloring: c.len(),
            graph: g.vertex_count(),
        });
    }
    c.check_palette()?;
    let vertices: Vec<_> = g
        .vertices()
        .map(|v| vertex_record(g, c.as_slice(), v))
        .collect();
    let first_violation = vertices.iter().position(|r| !r.satisfied).map(VertexId);
    Ok(DeficiencyReport {
        vertices,
        first_violation,
    })
}

/// Boolean reading of a 2-coloring relative to an anchor vertex: a vertex is
/// `true` when it shares the anchor's color.
#[derive(Clone, Copy, Debug)]
pub struct TruthView<'a> {
    anchor: VertexId,
    coloring: &'a Coloring,
}

impl<'a> TruthView<'a> {
    pub fn new(anchor: VertexId, coloring: &'a Coloring) -> Result<Self, MajorityError> {
        if coloring.palette_size() != 2 {
            return Err(MajorityError::InvalidFreeSet(format!(
                "truth view needs palette 2, got {}",
                coloring.palette_size()
            )));
        }
        if anchor.0 >= coloring.len() {
            return Err(MajorityError::LengthMismatch {
                coloring: coloring.len(),
                graph: anchor.0 + 1,
            });
        }
        Ok(TruthView { anchor, coloring })
    }

    pub fn anchor(&self) -> VertexId {
        self.anchor
    }

    pub fn truth(&self, v: VertexId) -> bool {
        self.coloring.color(v) == self.coloring.color(self.anchor)
    }
}

/// Color of a vertex with the given truth, when the anchor has color `anchor_color`.
pub(crate) fn color_for_truth(truth: bool, anchor_color: u32) -> u32 {
    if truth {
        anchor_color
    } else {
        1 - anchor_color
    }
}
