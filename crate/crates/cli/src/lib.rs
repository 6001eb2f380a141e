//! `twtree` command-line interface.
//!
//! Exit codes: 0 success, 1 non-isomorphic inputs, 2 unreadable input or
//! input that is not a tree where one is required, 3 size guard.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use twtree::graph::{as_tree, bfs_levels, parse_edge_list, parse_parent_array, Graph, RootedTree};
use twtree::iso_cert::{certificate, module_invariants};
use twtree::report::{analyze, export_dot, render_text};
use twtree::scan::{conjecture_scan, Model, ScanConfig};
use twtree::{Error, DEFAULT_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NON_ISO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SIZE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "twtree", version, about = "Terwilliger algebras of rooted trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Edgelist,
    Parents,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Edgelist => "edgelist",
            Format::Parents => "parents",
        }
    }
}

#[derive(clap::Args, Debug)]
struct CapArg {
    /// Largest n for which algebra closures are attempted.
    #[arg(long, env = "TWTREE_CAP", default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Level structure, classes, orbits, dimensions and certificate of a rooted graph.
    Analyze {
        /// Input file, or - for stdin.
        path: PathBuf,
        #[arg(long, default_value_t = 0)]
        root: usize,
        #[arg(long, value_enum, default_value_t = Format::Edgelist)]
        format: Format,
        #[arg(long, conflicts_with = "text")]
        json: bool,
        #[arg(long)]
        text: bool,
        /// Print elapsed time to stderr.
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Decide whether two rooted trees are isomorphic.
    Iso {
        path_a: PathBuf,
        path_b: PathBuf,
        #[arg(long, default_value_t = 0)]
        root_a: usize,
        #[arg(long, default_value_t = 0)]
        root_b: usize,
        #[arg(long, value_enum, default_value_t = Format::Edgelist)]
        format: Format,
        /// Decide from invariants of the principal modules instead of certificates.
        #[arg(long)]
        via_module: bool,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Estimate how often T(x0) is the full matrix algebra on random graphs.
    Scan {
        /// `tree` or `gnp:<p>`.
        #[arg(long, default_value = "tree")]
        model: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Require T(x0) = End(V) for every base vertex.
        #[arg(long)]
        all_roots: bool,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Graphviz rendering with one rank per level and orbit colors.
    ExportDot {
        path: PathBuf,
        #[arg(long, default_value_t = 0)]
        root: usize,
        #[arg(long, value_enum, default_value_t = Format::Edgelist)]
        format: Format,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(err: &Error) -> Self {
        let code = match err {
            Error::SizeGuard { .. } => EXIT_SIZE,
            _ => EXIT_INPUT,
        };
        Outcome { code, stdout: String::new(), stderr: format!("error: {err}\n") }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    match cli.command {
        Command::Analyze { path, root, format, json: _, text, timings, cap } => {
            let start = Instant::now();
            let result = read_graph(&path, format).and_then(|g| analyze(&g, root, format.name(), cap.cap));
            match result {
                Ok(report) => {
                    let stdout = if text {
                        render_text(&report)
                    } else {
                        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
                    };
                    let mut out = Outcome::ok(stdout);
                    if timings {
                        out.stderr = format!("analyze: {:.3} ms\n", start.elapsed().as_secs_f64() * 1e3);
                    }
                    out
                }
                Err(e) => Outcome::fail(&e),
            }
        }
        Command::Iso { path_a, path_b, root_a, root_b, format, via_module, cap } => {
            match iso(&path_a, &path_b, root_a, root_b, format, via_module.then_some(cap.cap)) {
                Ok(out) => out,
                Err(e) => Outcome::fail(&e),
            }
        }
        Command::Scan { model, n, trials, seed, all_roots, cap } => {
            let result = model
                .parse::<Model>()
                .and_then(|model| conjecture_scan(&ScanConfig { model, n, trials, seed, all_roots, cap: cap.cap }));
            match result {
                Ok(stats) => Outcome::ok(serde_json::to_string_pretty(&stats).expect("stats serialize") + "\n"),
                Err(e) => Outcome::fail(&e),
            }
        }
        Command::ExportDot { path, root, format } => {
            match read_graph(&path, format).and_then(|g| export_dot(&g, root)) {
                Ok(dot) => Outcome::ok(dot),
                Err(e) => Outcome::fail(&e),
            }
        }
    }
}

fn read_graph(path: &Path, format: Format) -> twtree::Result<Graph> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    match format {
        Format::Edgelist => parse_edge_list(&text),
        Format::Parents => parse_parent_array(&text),
    }
}

fn read_tree(path: &Path, format: Format, root: usize) -> twtree::Result<RootedTree> {
    as_tree(&bfs_levels(&read_graph(path, format)?, root)?)
}

fn iso(a: &Path, b: &Path, root_a: usize, root_b: usize, format: Format, module_cap: Option<usize>) -> twtree::Result<Outcome> {
    let ta = read_tree(a, format, root_a)?;
    let tb = read_tree(b, format, root_b)?;
    let (ca, cb) = (certificate(&ta).0, certificate(&tb).0);
    let same = match module_cap {
        Some(cap) => module_invariants(&ta, cap)? == module_invariants(&tb, cap)?,
        None => ca == cb,
    };
    let verdict = if same { "ISO" } else { "NON-ISO" };
    Ok(Outcome {
        code: if same { EXIT_OK } else { EXIT_NON_ISO },
        stdout: format!("{verdict} {ca} {cb}\n"),
        stderr: String::new(),
    })
}
