//! Monte Carlo estimate of how often `T(x₀) = End(V)` for random graphs.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{bfs_levels, random_connected_graph, random_tree, Graph, DEFAULT_REJECTION_BUDGET};
use crate::talgebra::{build_operators, is_full_endomorphism};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Model {
    /// Uniform labeled trees.
    Tree,
    /// `G(n, p)` conditioned on connectivity by rejection.
    Gnp(f64),
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Tree => f.write_str("tree"),
            Model::Gnp(p) => write!(f, "gnp:{p}"),
        }
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "tree" {
            return Ok(Model::Tree);
        }
        let p = s
            .strip_prefix("gnp:")
            .and_then(|p| p.parse::<f64>().ok())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown model {s:?}, expected tree or gnp:<p>")))?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("edge probability {p} outside [0, 1]")));
        }
        Ok(Model::Gnp(p))
    }
}

impl Serialize for Model {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanFailure {
    pub trial: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerN {
    pub n: usize,
    pub evaluated: u64,
    pub hits: u64,
}

/// One sampled instance, enough to replay it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanInstance {
    pub trial: u64,
    pub seed: u64,
    pub hash: String,
    pub full: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanStats {
    pub model: Model,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub all_roots: bool,
    pub hits: u64,
    pub fraction: f64,
    pub failures: Vec<ScanFailure>,
    pub per_n: Vec<PerN>,
    pub instances: Vec<ScanInstance>,
}

#[derive(Clone, Copy, Debug)]
pub struct ScanConfig {
    pub model: Model,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub all_roots: bool,
    pub cap: usize,
}

fn sample(model: Model, n: usize, seed: u64) -> Result<Graph> {
    match model {
        Model::Tree => Ok(random_tree(n, seed)?.graph().clone()),
        Model::Gnp(p) => random_connected_graph(n, p, seed, DEFAULT_REJECTION_BUDGET),
    }
}

fn run_trial(cfg: &ScanConfig, trial: u64) -> std::result::Result<ScanInstance, ScanFailure> {
    let seed = cfg.seed.wrapping_add(trial);
    let fail = |e: Error| ScanFailure { trial, reason: e.to_string() };
    let graph = sample(cfg.model, cfg.n, seed).map_err(fail)?;
    let roots = if cfg.all_roots { 0..cfg.n } else { 0..1 };
    let mut full = true;
    for root in roots {
        let ops = build_operators(&bfs_levels(&graph, root).map_err(fail)?);
        if !is_full_endomorphism(&ops, cfg.cap).map_err(fail)? {
            full = false;
            break;
        }
    }
    Ok(ScanInstance { trial, seed, hash: graph.content_hash(), full })
}

/// Runs `trials` independent trials; trial `k` uses seed `seed + k` and base
/// vertex 0 (every vertex with `all_roots`, where a hit needs all of them).
/// Output does not depend on how trials are scheduled.
pub fn conjecture_scan(cfg: &ScanConfig) -> Result<ScanStats> {
    if cfg.n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if cfg.n > cfg.cap {
        return Err(Error::SizeGuard { n: cfg.n, cap: cfg.cap });
    }

    #[cfg(feature = "parallel")]
    let outcomes: Vec<_> = {
        use rayon::prelude::*;
        (0..cfg.trials).into_par_iter().map(|k| run_trial(cfg, k)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<_> = (0..cfg.trials).map(|k| run_trial(cfg, k)).collect();

    let mut instances = Vec::new();
    let mut failures = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(inst) => instances.push(inst),
            Err(f) => failures.push(f),
        }
    }
    let evaluated = instances.len() as u64;
    let hits = instances.iter().filter(|i| i.full).count() as u64;
    let fraction = if evaluated == 0 { 0.0 } else { hits as f64 / evaluated as f64 };
    Ok(ScanStats {
        model: cfg.model,
        n: cfg.n,
        trials: cfg.trials,
        seed: cfg.seed,
        all_roots: cfg.all_roots,
        hits,
        fraction,
        failures,
        per_n: vec![PerN { n: cfg.n, evaluated, hits }],
        instances,
    })
}
