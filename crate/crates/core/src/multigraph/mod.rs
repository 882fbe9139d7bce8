//! Majority colorings of finite weighted undirected multigraphs.
//!
//! A vertex is satisfied when the total weight of its bichromatic incident
//! edges is at least the total weight of its monochromatic ones. Parallel
//! edges are merged by summing their weights.

mod search;

pub use search::{search_non_k_colorable, SearchBounds, SearchReport, DEFAULT_BUDGET};

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Coloring, PaletteMismatch, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultigraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("vertex {vertex} out of range (vertex count {count})")]
    OutOfRange { vertex: VertexId, count: usize },
    #[error("edge weights must be positive")]
    ZeroWeight,
    #[error(transparent)]
    PaletteMismatch(#[from] PaletteMismatch),
    #[error("coloring covers {coloring} vertices but graph has {graph}")]
    LengthMismatch { coloring: usize, graph: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("estimated cost {estimate} exceeds budget {budget}")]
    BudgetExceeded { estimate: u128, budget: u128 },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WeightedMultigraph {
    vertex_count: usize,
    /// Keyed by `(u, v)` with `u < v`.
    weights: BTreeMap<(usize, usize), u64>,
}

impl WeightedMultigraph {
    pub fn new(vertex_count: usize) -> Self {
        WeightedMultigraph {
            vertex_count,
            weights: BTreeMap::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Adds weight `w` between `u` and `v`, merging with any existing edge.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, w: u64) -> Result<(), MultigraphError> {
        for x in [u, v] {
            if x.0 >= self.vertex_count {
                return Err(MultigraphError::OutOfRange {
                    vertex: x,
                    count: self.vertex_count,
                });
            }
        }
        if u == v {
            return Err(MultigraphError::SelfLoop(u));
        }
        if w == 0 {
            return Err(MultigraphError::ZeroWeight);
        }
        *self.weights.entry((u.0.min(v.0), u.0.max(v.0))).or_insert(0) += w;
        Ok(())
    }

    pub fn weight(&self, u: VertexId, v: VertexId) -> u64 {
        let key = (u.0.min(v.0), u.0.max(v.0));
        self.weights.get(&key).copied().unwrap_or(0)
    }

    /// Edges as `(u, v, w)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, u64)> + '_ {
        self.weights
            .iter()
            .map(|(&(u, v), &w)| (VertexId(u), VertexId(v), w))
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.values().sum()
    }

    pub fn incidence(&self) -> Vec<Vec<(VertexId, u64)>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for (u, v, w) in self.edges() {
            inc[u.0].push((v, w));
            inc[v.0].push((u, w));
        }
        inc
    }

    /// Parses lines `u v w`; blank lines and `#` comments are skipped. The
    /// vertex count is one more than the largest id mentioned.
    pub fn parse(input: &str) -> Result<Self, MultigraphError> {
        let mut triples = Vec::new();
        for (i, raw) in input.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| MultigraphError::Parse {
                line: i + 1,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(parse_err(format!("expected `u v w`, got {line:?}")));
            }
            let num = |s: &str| {
                s.parse::<u64>()
                    .map_err(|_| parse_err(format!("`{s}` is not a non-negative integer")))
            };
            let (u, v, w) = (num(fields[0])?, num(fields[1])?, num(fields[2])?);
            triples.push((i + 1, u as usize, v as usize, w));
        }
        let n = triples
            .iter()
            .map(|&(_, u, v, _)| u.max(v) + 1)
            .max()
            .unwrap_or(0);
        let mut mg = WeightedMultigraph::new(n);
        for (line, u, v, w) in triples {
            mg.add_edge(VertexId(u), VertexId(v), w)
                .map_err(|e| MultigraphError::Parse {
                    line,
                    message: e.to_string(),
                })?;
        }
        Ok(mg)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (u, v, w) in self.edges() {
            let _ = writeln!(out, "{u} {v} {w}");
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightedRecord {
    pub mono_weight: u64,
    pub diff_weight: u64,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedReport {
    pub vertices: Vec<WeightedRecord>,
}

impl WeightedReport {
    pub fn is_satisfied(&self) -> bool {
        self.vertices.iter().all(|r| r.satisfied)
    }

    pub fn first_violation(&self) -> Option<VertexId> {
        self.vertices.iter().position(|r| !r.satisfied).map(VertexId)
    }
}

fn weighted_records(mg: &WeightedMultigraph, colors: &[u32]) -> Vec<WeightedRecord> {
    let mut mono = vec![0u64; mg.vertex_count];
    let mut diff = vec![0u64; mg.vertex_count];
    for (u, v, w) in mg.edges() {
        let bucket = if colors[u.0] == colors[v.0] {
            &mut mono
        } else {
            &mut diff
        };
        bucket[u.0] += w;
        bucket[v.0] += w;
    }
    mono.into_iter()
        .zip(diff)
        .map(|(m, d)| WeightedRecord {
            mono_weight: m,
            diff_weight: d,
            satisfied: d >= m,
        })
        .collect()
}

pub fn verify_weighted(
    mg: &WeightedMultigraph,
    c: &Coloring,
) -> Result<WeightedReport, MultigraphError> {
    if c.len() != mg.vertex_count {
        return Err(MultigraphError::LengthMismatch {
            coloring: c.len(),
            graph: mg.vertex_count,
        });
    }
    c.check_palette()?;
    Ok(WeightedReport {
        vertices: weighted_records(mg, c.as_slice()),
    })
}

pub(crate) fn is_majority(mg: &WeightedMultigraph, colors: &[u32]) -> bool {
    weighted_records(mg, colors).iter().all(|r| r.satisfied)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSearchOutcome {
    pub coloring: Coloring,
    pub flips: u64,
}

/// Max-cut local search from the all-zero coloring: flip the smallest-index
/// violated vertex until none is left. Each flip raises the cut weight by at
/// least one, so there are at most `total_weight` flips.
pub fn local_search_2color(mg: &WeightedMultigraph) -> LocalSearchOutcome {
    let inc = mg.incidence();
    let n = mg.vertex_count;
    let mut colors = vec![0u32; n];
    // mono weight per vertex; all-zero start makes every edge monochromatic
    let mut mono: Vec<u64> = inc.iter().map(|e| e.iter().map(|&(_, w)| w).sum()).collect();
    let degree = mono.clone();
    let mut flips = 0u64;
    let mut v = 0;
    while v < n {
        if 2 * mono[v] <= degree[v] {
            v += 1;
            continue;
        }
        colors[v] = 1 - colors[v];
        mono[v] = degree[v] - mono[v];
        let mut restart = v + 1;
        for &(u, w) in &inc[v] {
            if colors[u.0] == colors[v] {
                mono[u.0] += w;
                restart = restart.min(u.0);
            } else {
                mono[u.0] -= w;
            }
        }
        flips += 1;
        v = restart;
    }
    LocalSearchOutcome {
        coloring: Coloring::new_unchecked(2, colors),
        flips,
    }
}
