//! Cross-checks between independent routes: brute force against the
//! enumerators, and the symbolic infinite model against finite truncations.

use std::collections::BTreeSet;

use majority_lab::counterexample::{build_truncation, GadgetExtension};
use majority_lab::infinite::{check_symbolic, sweep_descriptions, SupportColoring, SymbolicVerdict};
use majority_lab::majority::{
    brute_force_colorings, feasible_prefix_set, feasible_prefix_set_exhaustive, Enumeration,
    PrefixSet,
};
use majority_lab::random::random_dag;
use majority_lab::majority::{verify, ExtensionRule};
use majority_lab::{Coloring, DiGraph, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pats(list: &[&str]) -> PrefixSet {
    list.iter()
        .map(|s| s.chars().map(|c| c == 'T').collect())
        .collect()
}

#[test]
fn truncation_three_propagation_equals_brute_force() {
    let (g, spec) = build_truncation(3).unwrap();
    assert_eq!(g.vertex_count(), 8);
    let rule = GadgetExtension::new(&spec);
    let mut free = spec.path.clone();
    free.push(spec.anchor);
    let propagated = Enumeration::new(&g, 2)
        .free(free.clone())
        .rule(&rule)
        .run()
        .unwrap();
    let brute: BTreeSet<Vec<u32>> = brute_force_colorings(&g, 2)
        .into_iter()
        .map(|c| free.iter().map(|v| c[v.0]).collect())
        .collect();
    assert_eq!(propagated.patterns, brute.into_iter().collect::<Vec<_>>());
    // both anchor colors appear, each with three path patterns
    assert_eq!(propagated.patterns.len(), 6);
}

#[test]
fn depth_three_single_prefix_from_brute_force() {
    let (g, spec) = build_truncation(3).unwrap();
    let v1 = spec.path_vertex(1);
    let brute: PrefixSet = brute_force_colorings(&g, 2)
        .into_iter()
        .filter(|c| c[spec.anchor.0] == 0)
        .map(|c| vec![c[v1.0] == 0])
        .collect();
    assert_eq!(brute, pats(&["F", "T"]));
    assert_eq!(feasible_prefix_set(3, 1, 1).unwrap(), brute);
}

#[test]
fn prefix_sets_agree_with_exhaustive_search_up_to_eight() {
    for n in 2..=8 {
        let m = n.min(3);
        assert_eq!(
            feasible_prefix_set(n, m, 2).unwrap(),
            feasible_prefix_set_exhaustive(n, m).unwrap(),
            "n={n}"
        );
    }
}

/// Frozen from the exhaustive search over every vertex of `G_n`.
#[test]
fn prefix_table_regression() {
    let expected = [
        (3, pats(&["FFT", "FTF", "TFT"])),
        (4, pats(&["FFT", "FTF", "TFF"])),
        (5, pats(&["FFF", "FFT", "FTF", "TFF"])),
        (6, pats(&["FFF", "FFT", "FTF", "TFF"])),
        (7, pats(&["FFF", "FFT", "FTF", "TFF"])),
        (8, pats(&["FFF", "FFT", "FTF", "TFF"])),
    ];
    for (n, set) in expected {
        assert_eq!(feasible_prefix_set(n, 3, 1).unwrap(), set, "n={n}");
    }
}

#[test]
fn full_path_patterns_end_bichromatic() {
    // every feasible full-path pattern of G_n ends with v_{n-1} != v_n
    for n in 2..=8 {
        for p in feasible_prefix_set(n, n, 1).unwrap() {
            assert_ne!(p[n - 2], p[n - 1], "n={n} {p:?}");
        }
    }
}

fn full_pattern(d: &SupportColoring, n: usize) -> Vec<bool> {
    (1..=n as u64).map(|i| d.truth(i)).collect()
}

/// Colors `G_n` by following `d` on the path, pinning the anchor to color 0
/// and filling the gadgets with their forced extension.
fn truncation_coloring(d: &SupportColoring, n: usize) -> (DiGraph, Coloring, VertexId) {
    let (g, spec) = build_truncation(n).unwrap();
    let mut colors = vec![None; g.vertex_count()];
    colors[spec.anchor.0] = Some(0);
    for (i, &v) in spec.path.iter().enumerate() {
        colors[v.0] = Some(u32::from(!d.truth(i as u64 + 1)));
    }
    GadgetExtension::new(&spec).extend(&g, &mut colors).unwrap();
    let c = Coloring::new(2, colors.into_iter().map(Option::unwrap).collect()).unwrap();
    (g, c, spec.path_vertex(1))
}

/// A description the symbolic checker rejects at witness `w` also fails at
/// `v_w` on every large enough truncation that follows it along the whole
/// path: the witness keeps gaining monochromatic out-neighbors as `n` grows
/// while its bichromatic ones stay bounded.
#[test]
fn symbolic_violations_persist_in_truncations() {
    let full_sets: Vec<PrefixSet> = (0..=8)
        .map(|n| {
            if n < 2 {
                PrefixSet::new()
            } else {
                feasible_prefix_set(n, n, 1).unwrap()
            }
        })
        .collect();
    for d in sweep_descriptions(3, 3) {
        let SymbolicVerdict::Violation(w) = check_symbolic(&d) else {
            panic!("{d} should be violated");
        };
        let w = w as usize;
        let witness_violated: Vec<(usize, bool)> = (w + 1..=8)
            .map(|n| {
                let (g, c, v1) = truncation_coloring(&d, n);
                let report = verify(&g, &c).unwrap();
                (n, !report.vertices[v1.0 + w - 1].satisfied)
            })
            .collect();
        let first = witness_violated
            .iter()
            .position(|&(_, bad)| bad)
            .unwrap_or_else(|| panic!("{d}: witness {w} satisfied in every truncation up to 8"));
        for &(n, bad) in &witness_violated[first..] {
            assert!(bad, "{d}: witness {w} satisfied again at n={n}");
            assert!(!full_sets[n].contains(&full_pattern(&d, n)), "{d} feasible at n={n}");
        }
    }
}

#[test]
fn random_dag_enumeration_equals_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..30 {
        let n = rng.gen_range(1..=12);
        let density = rng.gen_range(0.05..0.5);
        let g = random_dag(&mut rng, n, density);
        let k = rng.gen_range(1..=3);
        let result = Enumeration::new(&g, k).run().unwrap();
        assert_eq!(result.patterns, brute_force_colorings(&g, k));
        assert_eq!(result.free, (0..n).map(VertexId).collect::<Vec<_>>());
    }
}
