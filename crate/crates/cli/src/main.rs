//! `pchordal`: recognition, certification, hierarchies and isomorphism of proper chordal
//! graphs from the command line.
//!
//! Exit codes: 0 success or positive verdict, 1 negative verdict, 2 input error.

mod input;
mod selftest;

use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use proper_chordal::graph::{generate, write_edge_list};
use proper_chordal::hierarchy::{enumerate_realizations, FpqHierarchy, HierarchyError};
use proper_chordal::isomorphism::{code_of, isomorphic, IsoError};
use proper_chordal::oracle::{brute_isomorphic, brute_recognize, pattern_free_tree_layouts};
use proper_chordal::patterns::{builtin_pattern_set, treelayout_occurrences};
use proper_chordal::recognition::{attempt_root, recognize_with, Verdict};
use proper_chordal::treelayout::check_tree_layout;
use proper_chordal::{Graph, GraphKind, PatternSet, Strategy, TreeLayout, Vertex};

use input::{budget_from_env, load_graph, load_layout, resolve_vertex};

#[derive(Parser)]
#[command(name = "pchordal", version, about = "Proper chordal graphs: recognition, hierarchies and isomorphism")]
struct Cli {
    /// Run per-root work on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a graph is proper chordal and list its feasible roots.
    Recognize {
        /// Edge-list file, `-` for stdin, or a generator such as `cevenol` or `k_sun:3`.
        file: String,
        #[arg(long)]
        root: Option<String>,
        /// Stop at the first feasible root.
        #[arg(long)]
        verdict_only: bool,
    },
    /// Write an indifference tree-layout as JSON after re-checking it against the proper patterns.
    Certify {
        file: String,
        /// Defaults to the first feasible root.
        #[arg(long)]
        root: Option<String>,
        /// Output path, `-` for stdout.
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Print the canonical hierarchy of all indifference tree-layouts at a root.
    Hierarchy {
        file: String,
        #[arg(long)]
        root: String,
        #[command(flatten)]
        format: HierarchyFormat,
        /// Keep the ancestor counts on skeleton edges.
        #[arg(long)]
        decorated: bool,
    },
    /// Test two proper chordal graphs for isomorphism and print a bijection.
    Isomorphic { file1: String, file2: String },
    /// Print a generated graph as an edge list.
    Generate {
        /// k_sun, k_fan, path, clique, star, trivially_perfect, proper_interval, cevenol, fig8,
        /// fig9_g, fig9_gprime or fig10.
        kind: String,
        args: Vec<String>,
    },
    /// Check that a JSON tree-layout is a tree-layout of the graph free of a pattern set.
    CheckLayout {
        file: String,
        layout: String,
        /// chordal, int, proper, indifference, cograph, bip, forest, cocomp, comp, trivper or clique.
        #[arg(long)]
        patterns: String,
    },
    /// Print every indifference tree-layout rooted at a vertex, one JSON document per line.
    Enumerate {
        file: String,
        #[arg(long)]
        root: String,
        #[arg(long, default_value_t = 10_000)]
        limit: u128,
    },
    /// Exhaustive reference searches for small graphs.
    Oracle {
        #[command(subcommand)]
        query: OracleQuery,
    },
    /// Run the oracle-equivalence suites at reduced scale.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct HierarchyFormat {
    #[arg(long)]
    dot: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum OracleQuery {
    /// Search all tree-layouts for an indifference one.
    Recognize { file: String },
    /// Search all bijections.
    Isomorphic { file1: String, file2: String },
    /// List the tree-layouts free of a pattern set.
    Layouts {
        file: String,
        #[arg(long)]
        root: Option<String>,
        #[arg(long, default_value = "proper")]
        patterns: String,
    },
}

enum Outcome {
    Positive,
    Negative,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let strategy = if cli.sequential { Strategy::Sequential } else { Strategy::default() };
    let mut out = String::new();
    let result = run(cli.command, strategy, &mut out);
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(2);
    }
    match result {
        Ok(Outcome::Positive) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, strategy: Strategy, out: &mut String) -> Result<Outcome> {
    match command {
        Command::Recognize { file, root, verdict_only } => recognize_cmd(&file, root.as_deref(), verdict_only, strategy, out),
        Command::Certify { file, root, out: path } => certify(&file, root.as_deref(), &path, strategy, out),
        Command::Hierarchy { file, root, format, decorated } => hierarchy_cmd(&file, &root, &format, decorated, out),
        Command::Isomorphic { file1, file2 } => isomorphic_cmd(&file1, &file2, out),
        Command::Generate { kind, args } => {
            let args: Vec<&str> = args.iter().map(String::as_str).collect();
            let g = generate(GraphKind::parse(&kind, &args)?)?;
            out.push_str(&write_edge_list(&g));
            Ok(Outcome::Positive)
        }
        Command::CheckLayout { file, layout, patterns } => {
            let g = load_graph(&file)?;
            let t = load_layout(&layout, &g)?;
            let ps = builtin_pattern_set(&patterns)?;
            Ok(report_check(&g, &t, &ps, out))
        }
        Command::Enumerate { file, root, limit } => enumerate_cmd(&file, &root, limit, out),
        Command::Oracle { query } => oracle_cmd(query, out),
        Command::Selftest { seed } => {
            let mut ok = true;
            for r in selftest::run(seed, budget_from_env()?) {
                let status = if r.failures.is_empty() { "PASS" } else { "FAIL" };
                ok &= r.failures.is_empty();
                let _ = writeln!(out, "{status} {} [{} cases, {} failures; {:.1}s]", r.name, r.cases, r.failures.len(), r.seconds);
                for f in r.failures.iter().take(5) {
                    eprintln!("  {}: {f}", r.name);
                }
            }
            Ok(if ok { Outcome::Positive } else { Outcome::Negative })
        }
    }
}

fn labels(g: &Graph, vs: impl IntoIterator<Item = Vertex>) -> String {
    vs.into_iter().map(|v| g.label(v)).collect::<Vec<_>>().join(" ")
}

fn recognize_cmd(file: &str, root: Option<&str>, verdict_only: bool, strategy: Strategy, out: &mut String) -> Result<Outcome> {
    let g = load_graph(file)?;
    if let Some(spec) = root {
        let x = resolve_vertex(&g, spec)?;
        return Ok(match attempt_root(&g, x)? {
            Ok(_) => {
                let _ = writeln!(out, "proper chordal at root {}", g.label(x));
                Outcome::Positive
            }
            Err(stage) => {
                let _ = writeln!(out, "not proper chordal at root {} ({stage})", g.label(x));
                Outcome::Negative
            }
        });
    }
    let r = recognize_with(&g, strategy, verdict_only)?;
    let _ = writeln!(out, "{}", r.verdict);
    if r.verdict == Verdict::NotProperChordal {
        return Ok(Outcome::Negative);
    }
    if !verdict_only {
        let _ = writeln!(out, "feasible roots: {}", labels(&g, r.feasible_roots().iter()));
    }
    Ok(Outcome::Positive)
}

/// Prints `ok` or the first offending pattern occurrence.
fn report_check(g: &Graph, t: &TreeLayout, ps: &PatternSet, out: &mut String) -> Outcome {
    if let Err(e) = check_tree_layout(g, t) {
        let _ = writeln!(out, "not a tree-layout: {e}");
        return Outcome::Negative;
    }
    for (i, p) in ps.patterns.iter().enumerate() {
        if let Some(occ) = treelayout_occurrences(g, t, p).into_iter().next() {
            let _ = writeln!(out, "pattern {} of {} occurs at {}", i + 1, ps.name, labels(g, occ));
            return Outcome::Negative;
        }
    }
    let _ = writeln!(out, "ok");
    Outcome::Positive
}

fn certify(file: &str, root: Option<&str>, path: &str, strategy: Strategy, out: &mut String) -> Result<Outcome> {
    let g = load_graph(file)?;
    let witness = match root {
        Some(spec) => {
            let x = resolve_vertex(&g, spec)?;
            attempt_root(&g, x)?.ok()
        }
        None => recognize_with(&g, strategy, true)?.witnesses.into_iter().next(),
    };
    let Some(w) = witness else {
        eprintln!("not proper chordal");
        return Ok(Outcome::Negative);
    };
    let mut check = String::new();
    if let Outcome::Negative = report_check(&g, &w.layout, &builtin_pattern_set("proper")?, &mut check) {
        bail!("internal error: witness failed re-validation: {}", check.trim());
    }
    let json = w.layout.to_json();
    if path == "-" {
        let _ = writeln!(out, "{json}");
    } else {
        std::fs::write(path, format!("{json}\n")).with_context(|| format!("writing `{path}`"))?;
        eprintln!("certified at root {}: {path}", g.label(w.root));
    }
    Ok(Outcome::Positive)
}

fn hierarchy_at(g: &Graph, spec: &str) -> Result<Option<FpqHierarchy>> {
    let x = resolve_vertex(g, spec)?;
    Ok(attempt_root(g, x)?.ok().map(|w| w.hierarchy))
}

fn hierarchy_cmd(file: &str, root: &str, format: &HierarchyFormat, decorated: bool, out: &mut String) -> Result<Outcome> {
    let g = load_graph(file)?;
    let Some(mut h) = hierarchy_at(&g, root)? else {
        eprintln!("not proper chordal at root {root}");
        return Ok(Outcome::Negative);
    };
    if !decorated {
        h = h.without_decoration();
    }
    let label = |v: Vertex| g.label(v);
    if format.json {
        let _ = writeln!(out, "{}", h.to_json());
    } else if format.dot {
        out.push_str(&h.to_dot_with(&label));
    } else {
        for (i, t) in h.trees().iter().enumerate() {
            let _ = writeln!(out, "T{i} {}", t.to_sexpr_with(&label));
        }
        for e in h.skeleton() {
            let _ = write!(out, "T{} -> T{} node {} [{},{}]", e.tree, e.host_tree, e.host_node, e.a, e.b);
            if let Some(k) = e.a_hat {
                let _ = write!(out, " ({k})");
            }
            out.push('\n');
        }
        if decorated {
            let _ = writeln!(out, "code {}", code_of(&h)?);
        }
    }
    Ok(Outcome::Positive)
}

fn isomorphic_cmd(file1: &str, file2: &str, out: &mut String) -> Result<Outcome> {
    let g1 = load_graph(file1)?;
    let g2 = load_graph(file2)?;
    let found = match isomorphic(&g1, &g2) {
        Ok(f) => f,
        Err(IsoError::NotProperChordal(i)) => bail!("graph {i} is not proper chordal"),
        Err(e) => return Err(e.into()),
    };
    Ok(print_bijection(&g1, &g2, found, out))
}

fn print_bijection(g1: &Graph, g2: &Graph, f: Option<Vec<Vertex>>, out: &mut String) -> Outcome {
    match f {
        Some(f) => {
            let _ = writeln!(out, "ISOMORPHIC");
            for (u, &v) in f.iter().enumerate() {
                let _ = writeln!(out, "{} -> {}", g1.label(u), g2.label(v));
            }
            Outcome::Positive
        }
        None => {
            let _ = writeln!(out, "NOT-ISOMORPHIC");
            Outcome::Negative
        }
    }
}

fn enumerate_cmd(file: &str, root: &str, limit: u128, out: &mut String) -> Result<Outcome> {
    let g = load_graph(file)?;
    let Some(h) = hierarchy_at(&g, root)? else {
        eprintln!("not proper chordal at root {root}");
        return Ok(Outcome::Negative);
    };
    let layouts = match enumerate_realizations(&h, limit) {
        Ok(v) => v,
        Err(HierarchyError::LimitExceeded { count, limit }) => bail!("{count} tree-layouts exceed --limit {limit}"),
        Err(e) => return Err(e.into()),
    };
    for t in &layouts {
        let _ = writeln!(out, "{}", t.to_json());
    }
    eprintln!("{} tree-layouts", layouts.len());
    Ok(Outcome::Positive)
}

fn oracle_cmd(query: OracleQuery, out: &mut String) -> Result<Outcome> {
    let budget = budget_from_env()?;
    match query {
        OracleQuery::Recognize { file } => {
            let g = load_graph(&file)?;
            let accepted = brute_recognize(&g, budget)?;
            let verdict = if accepted { Verdict::ProperChordal } else { Verdict::NotProperChordal };
            let _ = writeln!(out, "{verdict}");
            Ok(if accepted { Outcome::Positive } else { Outcome::Negative })
        }
        OracleQuery::Isomorphic { file1, file2 } => {
            let g1 = load_graph(&file1)?;
            let g2 = load_graph(&file2)?;
            let f = brute_isomorphic(&g1, &g2, budget)?;
            Ok(print_bijection(&g1, &g2, f, out))
        }
        OracleQuery::Layouts { file, root, patterns } => {
            let g = load_graph(&file)?;
            let root = root.map(|r| resolve_vertex(&g, &r)).transpose()?;
            let ps = builtin_pattern_set(&patterns)?;
            let layouts = pattern_free_tree_layouts(&g, root, &ps, budget)?;
            for t in &layouts {
                let _ = writeln!(out, "{}", t.to_json());
            }
            eprintln!("{} tree-layouts", layouts.len());
            Ok(if layouts.is_empty() { Outcome::Negative } else { Outcome::Positive })
        }
    }
}
