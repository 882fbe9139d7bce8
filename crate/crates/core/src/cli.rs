//! Command-line front end.
//!
//! [`dispatch`] parses arguments, runs the requested command and returns the
//! captured output, so the binary is a thin wrapper and tests can drive the
//! CLI in-process. Exit codes: 0 pass, 1 property violated, 2 usage or IO
//! error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::counterexample::{build_truncation, sigma_label, verify_sigma};
use crate::gadgets::{build_or_chain, is_valid_gadget, verify_or_semantics};
use crate::graph::{
    from_dot, from_text, to_dot, to_text, topological_sort, Coloring, DiGraph, DotStyle, VertexId,
    VertexNames,
};
use crate::infinite::{check_symbolic, theorem_sweep, Mode, SupportColoring, SymbolicVerdict};
use crate::majority::{feasible_prefix_set, greedy_dag_2color, verify, Enumeration};
use crate::multigraph::{
    local_search_2color, search_non_k_colorable, SearchBounds, WeightedMultigraph, DEFAULT_BUDGET,
};
use crate::random::random_dag;

/// Environment variable capping the multigraph search budget.
pub const BUDGET_ENV: &str = "MAJORITY_LAB_BUDGET";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: u8,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "majority-lab", version, about = "Majority colorings of directed graphs")]
struct Cli {
    /// Seed for randomized generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel searches.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Group,
}

#[derive(Subcommand, Debug)]
enum Group {
    /// Verify and enumerate majority colorings.
    #[command(subcommand)]
    Majority(MajorityCmd),
    /// Build and check OR gadgets.
    #[command(subcommand)]
    Gadget(GadgetCmd),
    /// Finite truncations of the counterexample graph.
    #[command(subcommand)]
    Counterexample(CounterexampleCmd),
    /// Symbolic checks on the infinite graph.
    #[command(subcommand)]
    Infinite(InfiniteCmd),
    /// Weighted undirected multigraphs.
    #[command(subcommand)]
    Multigraph(MultigraphCmd),
    /// Graph file utilities.
    #[command(subcommand)]
    Graph(GraphCmd),
}

#[derive(Subcommand, Debug)]
enum MajorityCmd {
    /// Check a coloring; exit 1 if some vertex is violated.
    Verify {
        graph: PathBuf,
        coloring: PathBuf,
        /// Palette size; defaults to the largest color plus one.
        #[arg(long)]
        colors: Option<u32>,
    },
    /// List majority colorings, one per line.
    Enumerate {
        graph: PathBuf,
        #[arg(long)]
        colors: u32,
        /// Project colorings onto these vertices (comma separated).
        #[arg(long, value_delimiter = ',')]
        free: Option<Vec<usize>>,
    },
    /// Feasible truth patterns on v_1..v_m across truncations, as CSV.
    PrefixExperiment {
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Subcommand, Debug)]
enum GadgetCmd {
    /// Print the exhaustive truth table of an isolated chain gadget.
    Verify(GadgetArgs),
    /// Render an isolated chain gadget as DOT.
    Dot(GadgetArgs),
}

#[derive(Args, Debug)]
struct GadgetArgs {
    #[arg(long)]
    inputs: usize,
}

#[derive(Subcommand, Debug)]
enum CounterexampleCmd {
    /// Build G_n and write it as graph text.
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check gadget validity, acyclicity and the triplet labeling of G_n.
    Verify {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    True,
    False,
}

#[derive(Subcommand, Debug)]
enum InfiniteCmd {
    /// Check one finitely described path coloring.
    Check {
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Comma-separated path positions (1-based); may be empty.
        #[arg(long, default_value = "")]
        support: String,
    },
    /// Check every description up to the given bounds.
    Sweep {
        #[arg(long)]
        max_size: usize,
        #[arg(long)]
        max_pos: u64,
    },
}

#[derive(Subcommand, Debug)]
enum MultigraphCmd {
    /// Majority 2-color a multigraph file by local search.
    Solve { file: PathBuf },
    /// Search small multigraphs with no majority k-coloring.
    Search {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        max_v: usize,
        #[arg(long)]
        max_w: u64,
        /// Cap on each edge weight.
        #[arg(long)]
        max_edge_w: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Dot,
}

#[derive(Subcommand, Debug)]
enum GraphCmd {
    /// Convert between graph text and DOT (input format is detected).
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: Option<Format>,
    },
    /// Emit a seeded random DAG as graph text.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.2)]
        density: f64,
    },
}

/// A command's outcome before it is turned into a [`CommandResult`].
struct Outcome {
    passed: bool,
    stdout: String,
}

impl Outcome {
    fn pass(stdout: String) -> Self {
        Outcome {
            passed: true,
            stdout,
        }
    }
}

type CliResult = Result<Outcome, String>;

pub fn dispatch<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                CommandResult {
                    exit_code: 2,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                CommandResult {
                    exit_code: 0,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    match run(&cli) {
        Ok(o) => CommandResult {
            exit_code: if o.passed { 0 } else { 1 },
            stdout: o.stdout,
            stderr: String::new(),
        },
        Err(msg) => CommandResult {
            exit_code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Group::Majority(cmd) => majority_cmd(cmd, cli.jobs),
        Group::Gadget(cmd) => gadget_cmd(cmd),
        Group::Counterexample(cmd) => counterexample_cmd(cmd),
        Group::Infinite(cmd) => infinite_cmd(cmd),
        Group::Multigraph(cmd) => multigraph_cmd(cmd),
        Group::Graph(cmd) => graph_cmd(cmd, cli.seed),
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<(), String> {
    fs::write(path, contents).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_graph(path: &Path) -> Result<DiGraph, String> {
    let text = read(path)?;
    from_text(&text)
        .map(|(g, _)| g)
        .map_err(|e| format!("{}: {e}", path.display()))
}

/// Parses lines `vertex_id color`; every vertex must appear exactly once.
pub fn parse_coloring(
    input: &str,
    vertex_count: usize,
    palette: Option<u32>,
) -> Result<Coloring, String> {
    let mut colors: Vec<Option<u32>> = vec![None; vertex_count];
    for (i, raw) in input.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [v, c] = fields[..] else {
            return Err(format!("line {}: expected `vertex_id color`", i + 1));
        };
        let v: usize = v
            .parse()
            .map_err(|_| format!("line {}: bad vertex id `{v}`", i + 1))?;
        let c: u32 = c
            .parse()
            .map_err(|_| format!("line {}: bad color `{c}`", i + 1))?;
        let slot = colors
            .get_mut(v)
            .ok_or_else(|| format!("line {}: vertex {v} out of range", i + 1))?;
        if slot.replace(c).is_some() {
            return Err(format!("line {}: vertex {v} colored twice", i + 1));
        }
    }
    let colors: Vec<u32> = colors
        .into_iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| format!("vertex {v} has no color")))
        .collect::<Result<_, _>>()?;
    let palette = palette.unwrap_or_else(|| colors.iter().max().map_or(1, |m| m + 1));
    Coloring::new(palette, colors).map_err(|e| e.to_string())
}

pub fn format_coloring(c: &Coloring) -> String {
    let mut out = String::new();
    for (v, color) in c.as_slice().iter().enumerate() {
        let _ = writeln!(out, "{v} {color}");
    }
    out
}

fn pattern_string(p: &[bool]) -> String {
    p.iter().map(|&t| if t { 'T' } else { 'F' }).collect()
}

fn majority_cmd(cmd: &MajorityCmd, jobs: usize) -> CliResult {
    match cmd {
        MajorityCmd::Verify {
            graph,
            coloring,
            colors,
        } => {
            let g = read_graph(graph)?;
            let c = parse_coloring(&read(coloring)?, g.vertex_count(), *colors)?;
            let report = verify(&g, &c).map_err(|e| e.to_string())?;
            let mut out = String::from("vertex mono diff satisfied\n");
            for (v, r) in report.vertices.iter().enumerate() {
                let _ = writeln!(out, "{v} {} {} {}", r.mono, r.diff, r.satisfied);
            }
            let _ = writeln!(out, "satisfied: {}", report.is_satisfied());
            if let Some(v) = report.first_violation {
                let _ = writeln!(out, "first_violation: {v}");
            }
            Ok(Outcome {
                passed: report.is_satisfied(),
                stdout: out,
            })
        }
        MajorityCmd::Enumerate {
            graph,
            colors,
            free,
        } => {
            let g = read_graph(graph)?;
            let result = Enumeration::new(&g, *colors)
                .jobs(jobs)
                .run()
                .map_err(|e| e.to_string())?;
            let project: Vec<usize> = match free {
                Some(list) => {
                    let set: BTreeSet<usize> = list.iter().copied().collect();
                    if let Some(v) = set.iter().find(|&&v| v >= g.vertex_count()) {
                        return Err(format!("free vertex {v} out of range"));
                    }
                    set.into_iter().collect()
                }
                None => (0..g.vertex_count()).collect(),
            };
            let patterns: BTreeSet<Vec<u32>> = result
                .patterns
                .iter()
                .map(|p| project.iter().map(|&v| p[v]).collect())
                .collect();
            let mut out = String::new();
            let ids: Vec<String> = project.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "# vertices: {}", ids.join(" "));
            for p in &patterns {
                let cs: Vec<String> = p.iter().map(u32::to_string).collect();
                let _ = writeln!(out, "{}", cs.join(" "));
            }
            Ok(Outcome::pass(out))
        }
        MajorityCmd::PrefixExperiment { max_n, m } => {
            if *m == 0 || *max_n < 2 || *m > *max_n {
                return Err(format!("need 1 <= m <= max-n and max-n >= 2, got m={m}, max-n={max_n}"));
            }
            let mut out = String::from("n,m,count,patterns\n");
            for n in (*m).max(2)..=*max_n {
                let set = feasible_prefix_set(n, *m, jobs).map_err(|e| e.to_string())?;
                let pats: Vec<String> = set.iter().map(|p| pattern_string(p)).collect();
                let _ = writeln!(out, "{n},{m},{},{}", set.len(), pats.join(";"));
            }
            Ok(Outcome::pass(out))
        }
    }
}

fn isolated_chain(k: usize) -> Result<(DiGraph, crate::gadgets::GadgetHandle), String> {
    let mut g = DiGraph::with_vertices(k + 1);
    let inputs: Vec<VertexId> = (1..=k).map(VertexId).collect();
    let h = build_or_chain(&mut g, VertexId(0), &inputs).map_err(|e| e.to_string())?;
    Ok((g, h))
}

fn gadget_cmd(cmd: &GadgetCmd) -> CliResult {
    match cmd {
        GadgetCmd::Verify(args) => {
            let (g, h) = isolated_chain(args.inputs)?;
            let report = verify_or_semantics(&g, &h).map_err(|e| e.to_string())?;
            let mut out = String::from("inputs output extensions unique\n");
            for row in &report.rows {
                let output = match row.output_truth {
                    Some(true) => "T",
                    Some(false) => "F",
                    None => "?",
                };
                let _ = writeln!(
                    out,
                    "{} {output} {} {}",
                    pattern_string(&row.inputs),
                    row.extensions,
                    row.extension_unique
                );
            }
            let _ = writeln!(out, "valid: {}", is_valid_gadget(&g, &h));
            let _ = writeln!(out, "is_or: {}", report.is_or);
            let _ = writeln!(out, "unique: {}", report.all_unique());
            Ok(Outcome {
                passed: report.is_or && report.all_unique(),
                stdout: out,
            })
        }
        GadgetCmd::Dot(args) => {
            let (g, h) = isolated_chain(args.inputs)?;
            let mut names = VertexNames::new();
            names.insert(h.anchor, "T".into());
            for (p, &x) in h.inputs.iter().enumerate() {
                names.insert(x, format!("u{}", p + 1));
            }
            for (s, stage) in h.stages.iter().enumerate() {
                for (v, role) in stage.vertices().into_iter().zip(["a", "b", "t'", "c"]) {
                    names.insert(v, format!("{}.{role}", s + 1));
                }
            }
            let mut style = DotStyle {
                names: Some(&names),
                ..Default::default()
            };
            style.attributes.insert(h.anchor, "shape=doublecircle".into());
            for &x in &h.inputs {
                style.attributes.insert(x, "shape=box".into());
            }
            for &v in &h.internal {
                style.attributes.insert(v, "shape=ellipse".into());
            }
            style
                .attributes
                .insert(h.output, "shape=ellipse, peripheries=2".into());
            Ok(Outcome::pass(to_dot(&g, &style)))
        }
    }
}

fn counterexample_cmd(cmd: &CounterexampleCmd) -> CliResult {
    match cmd {
        CounterexampleCmd::Build { n, out, dot } => {
            let (g, spec) = build_truncation(*n).map_err(|e| e.to_string())?;
            let names = spec.names();
            let text = to_text(&g, Some(&names));
            if let Some(path) = dot {
                let style = DotStyle {
                    names: Some(&names),
                    ..Default::default()
                };
                write(path, &to_dot(&g, &style))?;
            }
            match out {
                Some(path) => {
                    write(path, &text)?;
                    Ok(Outcome::pass(format!(
                        "n={n} vertices={} edges={} gadgets={}\n",
                        g.vertex_count(),
                        g.edge_count(),
                        spec.gadgets.len()
                    )))
                }
                None => Ok(Outcome::pass(text)),
            }
        }
        CounterexampleCmd::Verify { n } => {
            let (g, spec) = build_truncation(*n).map_err(|e| e.to_string())?;
            let mut out = String::new();
            let mut passed = true;
            let mut line = |name: &str, ok: bool, detail: String| {
                passed &= ok;
                let verdict = if ok { "pass" } else { "FAIL" };
                let _ = writeln!(out, "{}", format!("{name}: {verdict} {detail}").trim_end());
            };
            line(
                "size",
                true,
                format!(
                    "vertices={} edges={} gadgets={}",
                    g.vertex_count(),
                    g.edge_count(),
                    spec.gadgets.len()
                ),
            );
            let invalid: Vec<String> = spec
                .gadgets
                .iter()
                .filter(|(_, h)| !is_valid_gadget(&g, h))
                .map(|((i, j), _)| format!("OR[{i},{j}]"))
                .collect();
            line("validity", invalid.is_empty(), invalid.join(" "));
            let topo = topological_sort(&g);
            line(
                "acyclic",
                topo.is_ok(),
                topo.err().map(|e| e.to_string()).unwrap_or_default(),
            );
            let anchor_deg = g.out_degree(spec.anchor);
            line("anchor_sink", anchor_deg == 0, format!("out_degree={anchor_deg}"));
            let sigma = verify_sigma(&g, &spec, &sigma_label(&g, &spec));
            line(
                "sigma",
                sigma.ok(),
                match sigma.first_violation {
                    Some((u, v)) => format!("violation {u}->{v}"),
                    None => format!("edges_checked={}", sigma.edges_checked),
                },
            );
            let greedy_ok = greedy_dag_2color(&g)
                .ok()
                .and_then(|c| verify(&g, &c).ok())
                .is_some_and(|r| r.is_satisfied());
            line("greedy_2color", greedy_ok, String::new());
            Ok(Outcome {
                passed,
                stdout: out,
            })
        }
    }
}

fn infinite_cmd(cmd: &InfiniteCmd) -> CliResult {
    match cmd {
        InfiniteCmd::Check { mode, support } => {
            let mode = match mode {
                ModeArg::True => Mode::FiniteTrue,
                ModeArg::False => Mode::FiniteFalse,
            };
            let positions = support
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<u64>().map_err(|_| format!("bad position `{s}`")))
                .collect::<Result<Vec<_>, _>>()?;
            let d = SupportColoring::new(mode, positions).map_err(|e| e.to_string())?;
            match check_symbolic(&d) {
                SymbolicVerdict::Feasible => Ok(Outcome::pass(format!("{d}: feasible\n"))),
                SymbolicVerdict::Violation(w) => Ok(Outcome {
                    passed: false,
                    stdout: format!("{d}: violation at {w}\n"),
                }),
            }
        }
        InfiniteCmd::Sweep { max_size, max_pos } => match theorem_sweep(*max_size, *max_pos) {
            Ok(report) => {
                let mut out = String::from("description,witness\n");
                for (d, w) in &report.entries {
                    let _ = writeln!(out, "{d},{w}");
                }
                let _ = writeln!(out, "# {} descriptions, all violated", report.entries.len());
                Ok(Outcome::pass(out))
            }
            Err(failure) => Ok(Outcome {
                passed: false,
                stdout: format!("{failure}\n"),
            }),
        },
    }
}

fn budget_from_env() -> Result<u128, String> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{BUDGET_ENV}={v:?} is not an integer")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn multigraph_cmd(cmd: &MultigraphCmd) -> CliResult {
    match cmd {
        MultigraphCmd::Solve { file } => {
            let mg = WeightedMultigraph::parse(&read(file)?)
                .map_err(|e| format!("{}: {e}", file.display()))?;
            let outcome = local_search_2color(&mg);
            let mut out = format_coloring(&outcome.coloring);
            let _ = writeln!(
                out,
                "# flips {} total_weight {}",
                outcome.flips,
                mg.total_weight()
            );
            Ok(Outcome::pass(out))
        }
        MultigraphCmd::Search {
            k,
            max_v,
            max_w,
            max_edge_w,
        } => {
            let mut bounds = SearchBounds::new(*k, *max_v, *max_w).with_budget(budget_from_env()?);
            if let Some(cap) = max_edge_w {
                bounds = bounds.with_edge_cap(*cap);
            }
            let report = search_non_k_colorable(&bounds).map_err(|e| e.to_string())?;
            let mut out = format!(
                "k={k} max_v={max_v} max_w={max_w} examined={} classes={} findings={}\n",
                report.instances_examined,
                report.classes_tested,
                report.non_colorable.len()
            );
            for (i, mg) in report.non_colorable.iter().enumerate() {
                let _ = writeln!(out, "# instance {i}: {} vertices", mg.vertex_count());
                out.push_str(&mg.to_text());
            }
            Ok(Outcome {
                passed: report.non_colorable.is_empty(),
                stdout: out,
            })
        }
    }
}

fn graph_cmd(cmd: &GraphCmd, seed: u64) -> CliResult {
    match cmd {
        GraphCmd::Convert { input, to } => {
            let text = read(input)?;
            let is_dot = text.trim_start().starts_with("digraph");
            let (g, names) = if is_dot {
                from_dot(&text).map_err(|e| e.to_string())?
            } else {
                from_text(&text).map_err(|e| e.to_string())?
            };
            let target = to.unwrap_or(if is_dot { Format::Text } else { Format::Dot });
            let out = match target {
                Format::Text => to_text(&g, Some(&names)),
                Format::Dot => to_dot(
                    &g,
                    &DotStyle {
                        names: Some(&names),
                        ..Default::default()
                    },
                ),
            };
            Ok(Outcome::pass(out))
        }
        GraphCmd::Random { n, density } => {
            if !(0.0..=1.0).contains(density) {
                return Err(format!("density {density} outside [0, 1]"));
            }
            let g = random_dag(&mut ChaCha8Rng::seed_from_u64(seed), *n, *density);
            Ok(Outcome::pass(to_text(&g, None)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> CommandResult {
        dispatch(std::iter::once("majority-lab").chain(args.iter().copied()))
    }

    #[test]
    fn counterexample_verify_passes() {
        let r = run(&["counterexample", "verify", "--n", "4"]);
        assert_eq!(r.exit_code, 0, "{}", r.stdout);
        assert!(r.stdout.contains("sigma: pass"));
    }

    #[test]
    fn infinite_check_all_false() {
        let r = run(&["infinite", "check", "--mode", "true", "--support", ""]);
        assert_eq!(r.exit_code, 1);
        assert_eq!(r.stdout, "finite-true {}: violation at 1\n");
    }

    #[test]
    fn unknown_subcommand_is_usage_error() {
        assert_eq!(run(&["frobnicate"]).exit_code, 2);
        assert_eq!(run(&["infinite", "check", "--mode", "maybe"]).exit_code, 2);
    }

    #[test]
    fn help_exits_zero() {
        let r = run(&["--help"]);
        assert_eq!(r.exit_code, 0);
        assert!(r.stdout.contains("counterexample"));
    }

    #[test]
    fn coloring_file_parsing() {
        let c = parse_coloring("1 0\n0 1\n", 2, None).unwrap();
        assert_eq!(c.as_slice(), &[1, 0]);
        assert_eq!(c.palette_size(), 2);
        assert!(parse_coloring("0 1\n", 2, None).is_err());
        assert!(parse_coloring("0 1\n0 1\n1 0\n", 2, None).is_err());
        assert!(parse_coloring("0 3\n1 0\n", 2, Some(2)).is_err());
        assert!(parse_coloring("5 0\n", 2, None).is_err());
    }

    #[test]
    fn gadget_verify_table() {
        let r = run(&["gadget", "verify", "--inputs", "2"]);
        assert_eq!(r.exit_code, 0);
        assert_eq!(
            r.stdout,
            "inputs output extensions unique\nFF F 1 true\nFT T 1 true\nTF T 1 true\nTT T 1 true\nvalid: true\nis_or: true\nunique: true\n"
        );
    }

    #[test]
    fn prefix_experiment_csv() {
        let r = run(&["majority", "prefix-experiment", "--max-n", "3", "--m", "2"]);
        assert_eq!(r.exit_code, 0);
        let mut lines = r.stdout.lines();
        assert_eq!(lines.next(), Some("n,m,count,patterns"));
        assert_eq!(lines.next(), Some("2,2,2,FT;TF"));
        assert!(lines.next().unwrap().starts_with("3,2,"));
    }
}
