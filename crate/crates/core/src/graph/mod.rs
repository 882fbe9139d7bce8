//! Simple finite directed graphs with dense vertex ids.
//!
//! Only out-adjacency is stored: the majority condition looks at out-edges
//! alone. Everything else in the crate builds on [`DiGraph`].

mod dot;
mod text;
mod topo;

pub use dot::{from_dot, to_dot, DotStyle};
pub use text::{from_text, to_text, ParseError};
pub use topo::{topological_sort, CycleFound};

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Dense vertex index into a [`DiGraph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(i)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EdgeError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge {0} -> {1} already present")]
    DuplicateEdge(VertexId, VertexId),
    #[error("vertex {vertex} out of range (vertex count {count})")]
    OutOfRange { vertex: VertexId, count: usize },
}

/// Optional human-readable vertex names produced by builders.
pub type VertexNames = BTreeMap<VertexId, String>;

/// A simple directed graph: no self-loops, no parallel edges.
///
/// Equality compares edge sets, so two graphs that differ only in the order
/// edges were inserted are equal.
#[derive(Clone, Debug, Default)]
pub struct DiGraph {
    out: Vec<Vec<VertexId>>,
}

impl DiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        DiGraph {
            out: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list, rejecting anything non-simple.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, EdgeError> {
        let mut g = Self::with_vertices(n);
        for &(u, v) in edges {
            g.add_edge(VertexId(u), VertexId(v))?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.out.push(Vec::new());
        VertexId(self.out.len() - 1)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), EdgeError> {
        let count = self.vertex_count();
        for w in [u, v] {
            if w.0 >= count {
                return Err(EdgeError::OutOfRange { vertex: w, count });
            }
        }
        if u == v {
            return Err(EdgeError::SelfLoop(u));
        }
        if self.out[u.0].contains(&v) {
            return Err(EdgeError::DuplicateEdge(u, v));
        }
        self.out[u.0].push(v);
        Ok(())
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.0 < self.vertex_count()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.out.get(u.0).is_some_and(|o| o.contains(&v))
    }

    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.out[v.0]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out[v.0].len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_count()).map(VertexId)
    }

    /// All edges in insertion order per source vertex.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, outs)| outs.iter().map(move |&v| (VertexId(u), v)))
    }

    /// Edges sorted lexicographically by `(source, target)`.
    pub fn sorted_edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut edges: Vec<_> = self.edges().collect();
        edges.sort_unstable();
        edges
    }

    /// In-adjacency lists, derived on demand.
    pub fn in_adjacency(&self) -> Vec<Vec<VertexId>> {
        let mut incoming = vec![Vec::new(); self.vertex_count()];
        for (u, v) in self.edges() {
            incoming[v.0].push(u);
        }
        incoming
    }
}

impl PartialEq for DiGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count() == other.vertex_count() && self.sorted_edges() == other.sorted_edges()
    }
}

impl Eq for DiGraph {}

/// A total vertex coloring with colors in `0..palette_size`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    palette_size: u32,
    colors: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("vertex {vertex} has color {color}, palette size is {palette_size}")]
pub struct PaletteMismatch {
    pub vertex: VertexId,
    pub color: u32,
    pub palette_size: u32,
}

impl Coloring {
    pub fn new(palette_size: u32, colors: Vec<u32>) -> Result<Self, PaletteMismatch> {
        let c = Coloring {
            palette_size,
            colors,
        };
        c.check_palette()?;
        Ok(c)
    }

    /// Builds a coloring without range checks; [`Coloring::check_palette`]
    /// reports any out-of-palette color later.
    pub fn new_unchecked(palette_size: u32, colors: Vec<u32>) -> Self {
        Coloring {
            palette_size,
            colors,
        }
    }

    pub fn uniform(palette_size: u32, n: usize, color: u32) -> Self {
        Coloring::new_unchecked(palette_size, vec![color; n])
    }

    pub fn check_palette(&self) -> Result<(), PaletteMismatch> {
        match self
            .colors
            .iter()
            .enumerate()
            .find(|(_, &c)| c >= self.palette_size)
        {
            Some((v, &color)) => Err(PaletteMismatch {
                vertex: VertexId(v),
                color,
                palette_size: self.palette_size,
            }),
            None => Ok(()),
        }
    }

    pub fn palette_size(&self) -> u32 {
        self.palette_size
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, v: VertexId) -> u32 {
        self.colors[v.0]
    }

    pub fn set(&mut self, v: VertexId, color: u32) {
        self.colors[v.0] = color;
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.colors
    }

    /// Exchanges colors 0 and 1; other colors are untouched.
    pub fn swapped(&self) -> Coloring {
        let colors = self
            .colors
            .iter()
            .map(|&c| match c {
                0 => 1,
                1 => 0,
                c => c,
            })
            .collect();
        Coloring::new_unchecked(self.palette_size, colors)
    }
}

/// Lexicographically ordered triplet used as a topological certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TripletLabel(pub usize, pub usize, pub usize);

impl fmt::Display for TripletLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0, self.1, self.2)
    }
}
