//! OR gadgets over an anchor vertex `T`.
//!
//! A binary stage on inputs `x`, `y` adds four vertices:
//!
//! ```text
//!   a -> x     b -> y     t' -> T
//!   c -> a     c -> b     c -> t'
//! ```
//!
//! In a majority 2-coloring an out-degree-1 vertex takes the color opposite
//! its only target, so `a`, `b`, `t'` read as `!x`, `!y`, `false` relative to
//! `T`. The collector `c` has out-degree 3 and may share its color with at
//! most one target, which leaves `c = x || y` as the only option. Chains
//! feed each stage's `c` into the next stage as its first input.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{DiGraph, EdgeError, VertexId};

/// Largest internal vertex set [`verify_or_semantics`] will enumerate.
pub const DEFAULT_EXHAUSTION_BOUND: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("an OR chain needs at least 2 inputs, got {0}")]
    ChainTooShort(usize),
    #[error("gadget terminals must be distinct existing vertices: {0}")]
    BadTerminals(String),
    #[error(transparent)]
    Edge(#[from] EdgeError),
    #[error("{internal} internal vertices exceed the exhaustion bound {bound}")]
    TooLarge { internal: usize, bound: usize },
    #[error("gadget expects {expected} input truths, got {got}")]
    InputArity { expected: usize, got: usize },
    #[error("binary stage extension is not unique; no closed-form extension")]
    NotUnique,
}

/// The four vertices added by one binary stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stage {
    pub inputs: [VertexId; 2],
    pub neg_first: VertexId,
    pub neg_second: VertexId,
    pub neg_anchor: VertexId,
    pub collector: VertexId,
}

impl Stage {
    /// Stage vertices in creation order `(a, b, t', c)`.
    pub fn vertices(&self) -> [VertexId; 4] {
        [self.neg_first, self.neg_second, self.neg_anchor, self.collector]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetHandle {
    pub anchor: VertexId,
    pub inputs: Vec<VertexId>,
    pub output: VertexId,
    pub internal: BTreeSet<VertexId>,
    pub stages: Vec<Stage>,
}

impl GadgetHandle {
    /// The gadget's full vertex set `{anchor} ∪ inputs ∪ internal`.
    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        let mut all = self.internal.clone();
        all.insert(self.anchor);
        all.extend(self.inputs.iter().copied());
        all
    }

    /// Edges added by the builder, stage by stage.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.stages
            .iter()
            .flat_map(|s| {
                [
                    (s.neg_first, s.inputs[0]),
                    (s.neg_second, s.inputs[1]),
                    (s.neg_anchor, self.anchor),
                    (s.collector, s.neg_first),
                    (s.collector, s.neg_second),
                    (s.collector, s.neg_anchor),
                ]
            })
            .collect()
    }
}

pub fn build_or2(
    g: &mut DiGraph,
    anchor: VertexId,
    x: VertexId,
    y: VertexId,
) -> Result<GadgetHandle, GadgetError> {
    for v in [anchor, x, y] {
        if !g.contains(v) {
            return Err(GadgetError::BadTerminals(format!("vertex {v} does not exist")));
        }
    }
    if anchor == x || anchor == y || x == y {
        return Err(GadgetError::BadTerminals(format!(
            "anchor {anchor}, inputs {x}, {y}"
        )));
    }
    let a = g.add_vertex();
    let b = g.add_vertex();
    let t = g.add_vertex();
    let c = g.add_vertex();
    g.add_edge(a, x)?;
    g.add_edge(b, y)?;
    g.add_edge(t, anchor)?;
    g.add_edge(c, a)?;
    g.add_edge(c, b)?;
    g.add_edge(c, t)?;
    Ok(GadgetHandle {
        anchor,
        inputs: vec![x, y],
        output: c,
        internal: [a, b, t, c].into_iter().collect(),
        stages: vec![Stage {
            inputs: [x, y],
            neg_first: a,
            neg_second: b,
            neg_anchor: t,
            collector: c,
        }],
    })
}

/// `OR(u_1, ..., u_k)` as a left-leaning chain of binary stages.
pub fn build_or_chain(
    g: &mut DiGraph,
    anchor: VertexId,
    inputs: &[VertexId],
) -> Result<GadgetHandle, GadgetError> {
    let k = inputs.len();
    if k < 2 {
        return Err(GadgetError::ChainTooShort(k));
    }
    let distinct: BTreeSet<_> = inputs.iter().collect();
    if distinct.len() != k || distinct.contains(&anchor) {
        return Err(GadgetError::BadTerminals(
            "inputs must be distinct and differ from the anchor".into(),
        ));
    }
    if k == 2 {
        return build_or2(g, anchor, inputs[0], inputs[1]);
    }
    let mut head = build_or_chain(g, anchor, &inputs[..k - 1])?;
    let last = build_or2(g, anchor, head.output, inputs[k - 1])?;
    head.inputs.push(inputs[k - 1]);
    head.output = last.output;
    head.internal.extend(last.internal);
    head.stages.extend(last.stages);
    Ok(head)
}

/// True iff no internal vertex has an out-edge leaving the gadget's vertex set.
pub fn is_valid_gadget(g: &DiGraph, h: &GadgetHandle) -> bool {
    let all = h.vertex_set();
    h.internal
        .iter()
        .all(|&v| g.out_neighbors(v).iter().all(|u| all.contains(u)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecoloringOutcome {
    pub inputs: Vec<bool>,
    /// Number of accepted internal assignments.
    pub extensions: usize,
    pub extension_exists: bool,
    pub extension_unique: bool,
    /// Output truth shared by every accepted extension; `None` when there is
    /// none or they disagree.
    pub output_truth: Option<bool>,
    /// Truth of each internal vertex (ascending id) in the unique extension.
    pub extension: Option<Vec<(VertexId, bool)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemanticsReport {
    /// One entry per input precoloring, lexicographic with `false < true`.
    pub rows: Vec<PrecoloringOutcome>,
    pub is_or: bool,
}

impl SemanticsReport {
    pub fn all_unique(&self) -> bool {
        self.rows.iter().all(|r| r.extension_unique)
    }
}

pub fn verify_or_semantics(g: &DiGraph, h: &GadgetHandle) -> Result<SemanticsReport, GadgetError> {
    verify_or_semantics_bounded(g, h, DEFAULT_EXHAUSTION_BOUND)
}

#[derive(Clone, Copy)]
enum Target {
    Internal(usize),
    Anchor,
    Input(usize),
}

/// Exhaustively checks the gadget's forcing behavior. The anchor has color 0
/// and an input reading `true` shares that color. Only internal vertices'
/// majority conditions are checked.
pub fn verify_or_semantics_bounded(
    g: &DiGraph,
    h: &GadgetHandle,
    bound: usize,
) -> Result<SemanticsReport, GadgetError> {
    let internal: Vec<VertexId> = h.internal.iter().copied().collect();
    let m = internal.len();
    if m > bound || m >= 64 {
        return Err(GadgetError::TooLarge { internal: m, bound });
    }
    let index_of = |v: VertexId| internal.binary_search(&v).ok();
    let mut targets: Vec<Vec<Target>> = Vec::with_capacity(m);
    for &v in &internal {
        let mut ts = Vec::new();
        for &u in g.out_neighbors(v) {
            let t = if let Some(i) = index_of(u) {
                Target::Internal(i)
            } else if u == h.anchor {
                Target::Anchor
            } else if let Some(p) = h.inputs.iter().position(|&x| x == u) {
                Target::Input(p)
            } else {
                return Err(GadgetError::BadTerminals(format!(
                    "internal vertex {v} points outside the gadget to {u}"
                )));
            };
            ts.push(t);
        }
        targets.push(ts);
    }
    let output_idx = index_of(h.output)
        .ok_or_else(|| GadgetError::BadTerminals("output is not internal".into()))?;

    let k = h.inputs.len();
    let rows: Vec<PrecoloringOutcome> = (0u64..1 << k)
        .into_par_iter()
        .map(|bits| {
            // most significant bit is the first input, giving lexicographic order
            let inputs: Vec<bool> = (0..k).map(|p| bits >> (k - 1 - p) & 1 == 1).collect();
            let input_color: Vec<u32> = inputs.iter().map(|&t| u32::from(!t)).collect();
            let mut extensions = 0usize;
            let mut first: Option<u64> = None;
            let mut output_truth: Option<bool> = None;
            let mut disagree = false;
            for mask in 0u64..1 << m {
                let color = |t: &Target| match *t {
                    Target::Internal(i) => (mask >> i & 1) as u32,
                    Target::Anchor => 0,
                    Target::Input(p) => input_color[p],
                };
                let ok = targets.iter().enumerate().all(|(i, ts)| {
                    let own = (mask >> i & 1) as u32;
                    let mono = ts.iter().filter(|t| color(t) == own).count();
                    2 * mono <= ts.len()
                });
                if !ok {
                    continue;
                }
                extensions += 1;
                let out = mask >> output_idx & 1 == 0;
                match output_truth {
                    None if first.is_none() => output_truth = Some(out),
                    Some(prev) if prev != out => disagree = true,
                    _ => {}
                }
                first.get_or_insert(mask);
            }
            if disagree {
                output_truth = None;
            }
            let extension = (extensions == 1).then(|| {
                let mask = first.expect("one extension recorded");
                internal
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| (v, mask >> i & 1 == 0))
                    .collect()
            });
            PrecoloringOutcome {
                inputs,
                extensions,
                extension_exists: extensions > 0,
                extension_unique: extensions == 1,
                output_truth,
                extension,
            }
        })
        .collect();

    let is_or = rows
        .iter()
        .all(|r| r.extension_exists && r.output_truth == Some(r.inputs.iter().any(|&t| t)));
    Ok(SemanticsReport { rows, is_or })
}

/// Whether the binary stage has a unique, OR-computing extension for all
/// four precolorings, checked once per process by exhaustive enumeration.
fn binary_stage_certified() -> bool {
    static CERTIFIED: OnceLock<bool> = OnceLock::new();
    *CERTIFIED.get_or_init(|| {
        let mut g = DiGraph::with_vertices(3);
        let Ok(h) = build_or2(&mut g, VertexId(0), VertexId(1), VertexId(2)) else {
            return false;
        };
        verify_or_semantics(&g, &h).is_ok_and(|r| r.is_or && r.all_unique())
    })
}

/// The unique internal extension for the given input truths, as truth values
/// per stage vertex in `(a, b, t', c)` order, stage by stage.
pub fn forced_extension(
    h: &GadgetHandle,
    input_truths: &[bool],
) -> Result<Vec<(VertexId, bool)>, GadgetError> {
    if input_truths.len() != h.inputs.len() {
        return Err(GadgetError::InputArity {
            expected: h.inputs.len(),
            got: input_truths.len(),
        });
    }
    if !binary_stage_certified() {
        return Err(GadgetError::NotUnique);
    }
    let mut out = Vec::with_capacity(4 * h.stages.len());
    let mut carry = input_truths[0];
    for (stage, &next) in h.stages.iter().zip(&input_truths[1..]) {
        let c = carry || next;
        out.push((stage.neg_first, !carry));
        out.push((stage.neg_second, !next));
        out.push((stage.neg_anchor, false));
        out.push((stage.collector, c));
        carry = c;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majority::verify;
    use crate::graph::Coloring;

    fn isolated_chain(k: usize) -> (DiGraph, GadgetHandle) {
        let mut g = DiGraph::with_vertices(k + 1);
        let inputs: Vec<_> = (1..=k).map(VertexId).collect();
        let h = build_or_chain(&mut g, VertexId(0), &inputs).unwrap();
        (g, h)
    }

    #[test]
    fn binary_gadget_shape() {
        let (g, h) = isolated_chain(2);
        assert_eq!(g.vertex_count(), 7);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.out_degree(h.output), 3);
        let s = h.stages[0];
        for v in [s.neg_first, s.neg_second, s.neg_anchor] {
            assert_eq!(g.out_degree(v), 1);
        }
        assert!(h.internal.contains(&h.output));
        assert!(!h.internal.contains(&h.anchor));
        assert!(is_valid_gadget(&g, &h));
    }

    #[test]
    fn chain_sizes() {
        let (g, h) = isolated_chain(3);
        assert_eq!(h.stages.len(), 2);
        assert_eq!(h.internal.len(), 8);
        assert_eq!(g.edge_count(), 12);
        let (_, h) = isolated_chain(5);
        assert_eq!(h.stages.len(), 4);
        assert_eq!(h.internal.len(), 16);
        assert_eq!(h.stages[1].inputs[0], h.stages[0].collector);
    }

    #[test]
    fn chain_of_two_is_binary_gadget() {
        let mut a = DiGraph::with_vertices(3);
        let ha = build_or2(&mut a, VertexId(0), VertexId(1), VertexId(2)).unwrap();
        let (b, hb) = isolated_chain(2);
        assert_eq!(a, b);
        assert_eq!(ha, hb);
    }

    #[test]
    fn builder_errors() {
        let mut g = DiGraph::with_vertices(3);
        assert_eq!(
            build_or_chain(&mut g, VertexId(0), &[VertexId(1)]),
            Err(GadgetError::ChainTooShort(1))
        );
        assert!(matches!(
            build_or2(&mut g, VertexId(0), VertexId(0), VertexId(1)),
            Err(GadgetError::BadTerminals(_))
        ));
        assert!(matches!(
            build_or2(&mut g, VertexId(0), VertexId(1), VertexId(7)),
            Err(GadgetError::BadTerminals(_))
        ));
        assert_eq!(g.vertex_count(), 3);
    }

    #[test]
    fn escaping_edge_breaks_validity() {
        let (mut g, h) = isolated_chain(2);
        let outside = g.add_vertex();
        g.add_edge(h.stages[0].neg_first, outside).unwrap();
        assert!(!is_valid_gadget(&g, &h));
    }

    #[test]
    fn inputs_and_anchor_gain_no_out_edges() {
        let (g, h) = isolated_chain(4);
        assert_eq!(g.out_degree(h.anchor), 0);
        for &x in &h.inputs {
            assert_eq!(g.out_degree(x), 0);
        }
    }

    #[test]
    fn binary_truth_table() {
        let (g, h) = isolated_chain(2);
        let report = verify_or_semantics(&g, &h).unwrap();
        assert!(report.is_or);
        let tt = &report.rows[3];
        assert_eq!(tt.inputs, vec![true, true]);
        assert!(tt.extension_unique);
        assert_eq!(tt.output_truth, Some(true));
        let s = h.stages[0];
        let ext = tt.extension.as_ref().unwrap();
        let truth = |v| ext.iter().find(|(u, _)| *u == v).unwrap().1;
        assert!(!truth(s.neg_first));
        assert!(!truth(s.neg_second));
        assert!(!truth(s.neg_anchor));
        assert!(truth(s.collector));
        assert_eq!(report.rows[0].output_truth, Some(false));
    }

    #[test]
    fn chain_of_three_computes_or() {
        let (g, h) = isolated_chain(3);
        let report = verify_or_semantics(&g, &h).unwrap();
        assert_eq!(report.rows.len(), 8);
        assert!(report.is_or);
        assert!(report.all_unique());
    }

    #[test]
    fn exhaustion_bound_is_enforced() {
        let (g, h) = isolated_chain(3);
        assert_eq!(
            verify_or_semantics_bounded(&g, &h, 7),
            Err(GadgetError::TooLarge {
                internal: 8,
                bound: 7
            })
        );
    }

    #[test]
    fn forced_extension_matches_oracle() {
        for k in 2..=4 {
            let (g, h) = isolated_chain(k);
            let report = verify_or_semantics(&g, &h).unwrap();
            for row in &report.rows {
                let mut forced = forced_extension(&h, &row.inputs).unwrap();
                forced.sort();
                assert_eq!(Some(forced), row.extension, "k={k} inputs={:?}", row.inputs);
            }
        }
    }

    #[test]
    fn forced_extension_examples() {
        let (_, h) = isolated_chain(2);
        let ext = forced_extension(&h, &[true, false]).unwrap();
        let truths: Vec<bool> = ext.iter().map(|&(_, t)| t).collect();
        assert_eq!(truths, vec![false, true, false, true]);
        let ext = forced_extension(&h, &[false, false]).unwrap();
        assert!(!ext[3].1);

        let (_, h) = isolated_chain(3);
        let ext = forced_extension(&h, &[false, false, true]).unwrap();
        assert!(!ext[3].1);
        assert!(ext[7].1);
        assert_eq!(
            forced_extension(&h, &[true]),
            Err(GadgetError::InputArity {
                expected: 3,
                got: 1
            })
        );
    }

    #[test]
    fn negators_oppose_their_target() {
        let (g, h) = isolated_chain(3);
        let report = verify_or_semantics(&g, &h).unwrap();
        for row in &report.rows {
            let ext = row.extension.as_ref().unwrap();
            let mut colors = vec![0u32; g.vertex_count()];
            for (p, &x) in h.inputs.iter().enumerate() {
                colors[x.0] = u32::from(!row.inputs[p]);
            }
            for &(v, t) in ext {
                colors[v.0] = u32::from(!t);
            }
            for s in &h.stages {
                for v in [s.neg_first, s.neg_second, s.neg_anchor] {
                    let target = g.out_neighbors(v)[0];
                    assert_ne!(colors[v.0], colors[target.0]);
                }
            }
            // the full isolated gadget coloring is a majority coloring
            let c = Coloring::new(2, colors).unwrap();
            assert!(verify(&g, &c).unwrap().is_satisfied());
        }
    }
}
