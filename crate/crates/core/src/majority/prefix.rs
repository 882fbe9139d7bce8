use std::collections::BTreeSet;

use crate::counterexample::{build_truncation, GadgetExtension};
use crate::graph::VertexId;

use super::{Enumeration, MajorityError};

/// Truth patterns on `(v_1, ..., v_m)`.
pub type PrefixSet = BTreeSet<Vec<bool>>;

fn check_bounds(n: usize, m: usize) -> Result<(), MajorityError> {
    if n < 2 || m == 0 || m > n {
        return Err(MajorityError::Truncation(format!(
            "need n >= 2 and 1 <= m <= n, got n={n}, m={m}"
        )));
    }
    Ok(())
}

/// Truth patterns of `v_1..v_m` realized by some majority 2-coloring of
/// `G_n`. The anchor is pinned to color 0, so truth is `color == 0`; only the
/// path and anchor are searched and gadget colors come from the forced
/// extension.
pub fn feasible_prefix_set(n: usize, m: usize, jobs: usize) -> Result<PrefixSet, MajorityError> {
    check_bounds(n, m)?;
    let (g, spec) = build_truncation(n).map_err(|e| MajorityError::Truncation(e.to_string()))?;
    let rule = GadgetExtension::new(&spec);
    let mut free: Vec<VertexId> = spec.path.clone();
    free.push(spec.anchor);
    let result = Enumeration::new(&g, 2)
        .free(free)
        .fix(spec.anchor, 0)
        .rule(&rule)
        .jobs(jobs)
        .run()?;
    // free vertices are in id order, so the path comes first
    Ok(result
        .patterns
        .iter()
        .map(|p| p[..m].iter().map(|&c| c == 0).collect())
        .collect())
}

/// Same set as [`feasible_prefix_set`], found by backtracking over every
/// vertex of `G_n` with no knowledge of the gadgets.
pub fn feasible_prefix_set_exhaustive(n: usize, m: usize) -> Result<PrefixSet, MajorityError> {
    check_bounds(n, m)?;
    let (g, spec) = build_truncation(n).map_err(|e| MajorityError::Truncation(e.to_string()))?;
    let result = Enumeration::new(&g, 2).fix(spec.anchor, 0).run()?;
    Ok(result
        .patterns
        .iter()
        .map(|p| spec.path[..m].iter().map(|v| p[v.0] == 0).collect())
        .collect())
}
