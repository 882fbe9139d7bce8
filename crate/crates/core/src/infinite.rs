//! Symbolic majority check on the infinite counterexample graph.
//!
//! Path colorings are described relative to the anchor by a finite set of
//! exceptional positions. The output of `OR_{i,j}` reads the OR of
//! `v_i..v_j` (gadget forcing), so every out-neighbor of a path vertex has a
//! truth value computable in closed form, and the counts of true and false
//! out-neighbors are either finite or countably infinite.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// Only the support positions are true.
    FiniteTrue,
    /// Only the support positions are false.
    FiniteFalse,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::FiniteTrue => "finite-true",
            Mode::FiniteFalse => "finite-false",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "true" | "finite-true" => Ok(Mode::FiniteTrue),
            "false" | "finite-false" => Ok(Mode::FiniteFalse),
            other => Err(format!("unknown mode `{other}` (expected true or false)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SupportColoring {
    mode: Mode,
    support: BTreeSet<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("path positions start at 1")]
pub struct ZeroPosition;

impl SupportColoring {
    pub fn new(mode: Mode, support: impl IntoIterator<Item = u64>) -> Result<Self, ZeroPosition> {
        let support: BTreeSet<u64> = support.into_iter().collect();
        if support.contains(&0) {
            return Err(ZeroPosition);
        }
        Ok(SupportColoring { mode, support })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn support(&self) -> &BTreeSet<u64> {
        &self.support
    }

    /// Truth of `v_i`.
    pub fn truth(&self, i: u64) -> bool {
        let listed = self.support.contains(&i);
        match self.mode {
            Mode::FiniteTrue => listed,
            Mode::FiniteFalse => !listed,
        }
    }

    fn max_support(&self) -> u64 {
        self.support.last().copied().unwrap_or(0)
    }

    /// Position from which every out-profile is identical.
    pub fn tail_position(&self) -> u64 {
        self.max_support() + 2
    }
}

impl fmt::Display for SupportColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.support.iter().map(u64::to_string).collect();
        write!(f, "{} {{{}}}", self.mode, items.join(","))
    }
}

/// A cardinality: a finite count or countably infinite.
///
/// Ordered with every finite value below `Infinite`; two infinite counts
/// compare equal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedCount {
    Finite(u64),
    Infinite,
}

impl Add for ExtendedCount {
    type Output = ExtendedCount;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExtendedCount::Finite(a), ExtendedCount::Finite(b)) => ExtendedCount::Finite(a + b),
            _ => ExtendedCount::Infinite,
        }
    }
}

impl fmt::Display for ExtendedCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedCount::Finite(n) => write!(f, "{n}"),
            ExtendedCount::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutProfile {
    pub true_count: ExtendedCount,
    pub false_count: ExtendedCount,
}

/// Truth counts over the out-neighbors of `v_i`: the successor `v_{i+1}` and
/// the outputs of `OR_{i+1,j}` for every `j >= i + 2`.
pub fn out_profile(i: u64, d: &SupportColoring) -> OutProfile {
    use ExtendedCount::{Finite, Infinite};
    assert!(i >= 1, "path positions start at 1");

    let lo = i + 1;
    let (true_outputs, false_outputs) = match d.mode {
        Mode::FiniteTrue => match d.support.range(lo..).next() {
            // outputs with j >= first true position are true, earlier ones false
            Some(&s) => (Infinite, Finite(s.saturating_sub(i + 2))),
            None => (Finite(0), Infinite),
        },
        Mode::FiniteFalse => {
            // outputs stay false while [lo, j] is inside the support
            let mut r = i;
            while d.support.contains(&(r + 1)) {
                r += 1;
            }
            (Infinite, Finite(r.saturating_sub(i + 1)))
        }
    };
    let succ = d.truth(lo);
    OutProfile {
        true_count: true_outputs + Finite(u64::from(succ)),
        false_count: false_outputs + Finite(u64::from(!succ)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolicVerdict {
    Feasible,
    /// Smallest path position whose majority condition fails.
    Violation(u64),
}

/// Evaluates the majority condition at path positions `1..=tail_position`;
/// every later position has the same profile and truth as the tail.
pub fn check_symbolic(d: &SupportColoring) -> SymbolicVerdict {
    for i in 1..=d.tail_position() {
        let profile = out_profile(i, d);
        let (mono, diff) = if d.truth(i) {
            (profile.true_count, profile.false_count)
        } else {
            (profile.false_count, profile.true_count)
        };
        if diff < mono {
            return SymbolicVerdict::Violation(i);
        }
    }
    SymbolicVerdict::Feasible
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    /// `(description, witness)` ordered by mode, support size, then support.
    pub entries: Vec<(SupportColoring, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("description {0} admits a majority 2-coloring")]
pub struct SweepFailure(pub SupportColoring);

fn subsets_of_size(max_position: u64, size: usize) -> Vec<Vec<u64>> {
    fn go(start: u64, max: u64, left: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for x in start..=max {
            cur.push(x);
            go(x + 1, max, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, max_position, size, &mut Vec::new(), &mut out);
    out
}

/// Every description in both modes with support of size at most
/// `max_support_size` inside `[1, max_position]`.
pub fn sweep_descriptions(max_support_size: usize, max_position: u64) -> Vec<SupportColoring> {
    let mut all = Vec::new();
    for mode in [Mode::FiniteTrue, Mode::FiniteFalse] {
        for size in 0..=max_support_size {
            for subset in subsets_of_size(max_position, size) {
                all.push(SupportColoring {
                    mode,
                    support: subset.into_iter().collect(),
                });
            }
        }
    }
    all
}

/// Checks that every swept description is violated somewhere on the path.
///
/// A majority 2-coloring of the infinite graph would have at most one true
/// path vertex (a true `v_i` followed by a later true vertex sees infinitely
/// many true outputs), so it would be a finite-true description with support
/// of size at most one. A sweep with `max_support_size >= 1` therefore covers
/// every candidate up to the position bound.
pub fn theorem_sweep(
    max_support_size: usize,
    max_position: u64,
) -> Result<SweepReport, SweepFailure> {
    let verdicts: Vec<(SupportColoring, SymbolicVerdict)> =
        sweep_descriptions(max_support_size, max_position)
            .into_par_iter()
            .map(|d| {
                let v = check_symbolic(&d);
                (d, v)
            })
            .collect();
    let mut entries = Vec::with_capacity(verdicts.len());
    for (d, v) in verdicts {
        match v {
            SymbolicVerdict::Violation(w) => entries.push((d, w)),
            SymbolicVerdict::Feasible => return Err(SweepFailure(d)),
        }
    }
    Ok(SweepReport { entries })
}
