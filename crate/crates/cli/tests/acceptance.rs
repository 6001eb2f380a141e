//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use twtree::graph::{bfs_levels, random_connected_graph, random_tree, subtree, Graph, RootedTree, DEFAULT_REJECTION_BUDGET};
use twtree::iso_cert::{brute_force_rooted_iso, certificate, enumerate_rooted_trees, module_invariants, rooted_isomorphic};
use twtree::orbits::{brute_force_aut, brute_force_is_rigid, orbit_closure, orbit_partition, verify_theorem4};
use twtree::refinement::{class_projectors, level_classes, verify_lemma6};
use twtree::talgebra::{
    build_operators, eq17_on, eq18_on, principal_module, t_algebra, treeness_check, verify_eq20, verify_prop1,
    verify_rigidity_equivalence, Treeness,
};
use twtree::DEFAULT_CAP;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fail<E: std::fmt::Debug>(context: impl std::fmt::Display) -> impl FnOnce(E) -> String {
    move |e| format!("{context}: {e:?}")
}

/// Every rooted tree with at most 9 vertices, then 500 random trees with
/// 10 to 25 vertices.
fn corpus() -> Vec<RootedTree> {
    let mut trees: Vec<RootedTree> = (1..=9).flat_map(|n| enumerate_rooted_trees(n).unwrap()).collect();
    trees.extend((0..500u64).map(|k| random_tree(10 + (k % 16) as usize, 1_000 + k).unwrap()));
    trees
}

fn describe(t: &RootedTree) -> String {
    format!("n={} cert={}", t.n(), certificate(t).0)
}

fn principal_module_is_orbit_span(corpus: &[RootedTree]) -> Outcome {
    let enumerated: Vec<usize> = (1..=9).map(|n| enumerate_rooted_trees(n).unwrap().len()).collect();
    ensure!(enumerated == [1, 1, 2, 4, 9, 20, 48, 115, 286], "enumeration counts {enumerated:?}");
    for t in corpus {
        ensure!(verify_theorem4(t, DEFAULT_CAP).map_err(fail(describe(t)))?, "W0 != orbit-sum span for {}", describe(t));
        if t.n() <= 9 {
            let mut fast = orbit_partition(t, &level_classes(t)).orbits().to_vec();
            let mut slow = orbit_closure(t.n(), &brute_force_aut(t).unwrap());
            fast.sort();
            slow.sort();
            ensure!(fast == slow, "orbits disagree with brute force for {}", describe(t));
        }
    }
    Ok(format!("{} trees, orbits cross-checked by brute force for n <= 9", corpus.len()))
}

fn level_classes_agree(corpus: &[RootedTree]) -> Outcome {
    let mut memberships = 0;
    for t in corpus {
        verify_lemma6(t).map_err(fail(describe(t)))?;
        let cp = level_classes(t);
        for (i, level) in t.levels().iter().enumerate() {
            let mut by_cert: BTreeMap<String, Vec<usize>> = BTreeMap::new();
            for &x in level {
                by_cert.entry(certificate(&subtree(t, x).0).0.to_string()).or_default().push(x);
            }
            let from_certs: Vec<Vec<usize>> = by_cert.into_values().collect();
            ensure!(from_certs == cp.level(i), "level {i} classes differ from certificate classes for {}", describe(t));
        }
        if t.n() <= 16 {
            let algebra = t_algebra(&build_operators(t.rooted_graph()), DEFAULT_CAP).map_err(fail(describe(t)))?;
            for ((i, alpha), p) in class_projectors(&cp, t.n()) {
                ensure!(algebra.contains(&p), "E*_{i}({alpha}) not in T for {}", describe(t));
                memberships += 1;
            }
        }
    }
    Ok(format!("{} trees, {memberships} projector memberships", corpus.len()))
}

fn shuffled(t: &RootedTree, seed: u64) -> RootedTree {
    let mut perm: Vec<usize> = (0..t.n()).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    t.relabeled(&perm).unwrap()
}

fn recognition_agrees() -> Outcome {
    let trees: Vec<RootedTree> = (1..=9).flat_map(|n| enumerate_rooted_trees(n).unwrap()).collect();
    let copies: Vec<RootedTree> = trees.iter().enumerate().map(|(k, t)| shuffled(t, k as u64)).collect();
    let bundles: Vec<_> = trees.iter().map(|t| module_invariants(t, DEFAULT_CAP).unwrap()).collect();
    let copy_bundles: Vec<_> = copies.iter().map(|t| module_invariants(t, DEFAULT_CAP).unwrap()).collect();
    let mut pairs = 0usize;
    let mut iso_pairs = 0usize;
    for (a, (ta, ba)) in trees.iter().zip(&bundles).enumerate() {
        for (b, (tb, bb)) in trees.iter().zip(&bundles).chain(copies.iter().zip(&copy_bundles)).enumerate() {
            let by_cert = rooted_isomorphic(ta, tb);
            let by_search = brute_force_rooted_iso(ta, tb).unwrap();
            let by_module = ba == bb;
            ensure!(
                by_cert == by_search && by_search == by_module,
                "pair ({a}, {b}): certificate {by_cert}, search {by_search}, module {by_module}"
            );
            pairs += 1;
            iso_pairs += usize::from(by_cert);
        }
    }
    ensure!(iso_pairs == 2 * trees.len(), "expected each tree to match itself and its copy, got {iso_pairs} iso pairs");
    Ok(format!("{pairs} pairs, {iso_pairs} isomorphic, zero discrepancies"))
}

fn rigidity_equivalence() -> Outcome {
    let mut trees: Vec<RootedTree> = (1..=8).flat_map(|n| enumerate_rooted_trees(n).unwrap()).collect();
    trees.extend((0..200u64).map(|k| random_tree(1 + (k % 16) as usize, 4_000 + k).unwrap()));
    let mut rigid = 0;
    for t in &trees {
        ensure!(verify_rigidity_equivalence(t, DEFAULT_CAP).map_err(fail(describe(t)))?, "equivalence fails for {}", describe(t));
        rigid += usize::from(brute_force_is_rigid(t));
    }

    // a tree scan counts exactly the rigid samples
    let stats = twtree::scan::conjecture_scan(&twtree::scan::ScanConfig {
        model: twtree::scan::Model::Tree,
        n: 8,
        trials: 500,
        seed: 7,
        all_roots: false,
        cap: DEFAULT_CAP,
    })
    .map_err(fail("scan"))?;
    let oracle = (0..500u64).filter(|&k| brute_force_is_rigid(&random_tree(8, 7 + k).unwrap())).count() as u64;
    ensure!(stats.hits == oracle, "scan hits {} but {oracle} rigid samples", stats.hits);
    Ok(format!("{} trees ({rigid} rigid); scan n=8 hits {} of 500 match brute force", trees.len(), stats.hits))
}

fn cycle(n: usize) -> Graph {
    Graph::new(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
}

fn treeness_operators(corpus: &[RootedTree]) -> Outcome {
    let zero = BigInt::from(0);
    let mut identities = 0;
    for t in corpus {
        let rg = t.rooted_graph();
        for i in 0..=t.depth() {
            let (c, s) = eq17_on(rg, i).unwrap();
            ensure!(c == s && s == BigInt::from(t.levels()[i].len()), "walk norms at level {i} for {}", describe(t));
            ensure!(eq18_on(rg, i).unwrap() == zero, "intra-level form nonzero at level {i} for {}", describe(t));
            identities += 1;
        }
    }
    for k in 1..=6 {
        let rg = bfs_levels(&cycle(2 * k + 1), 0).unwrap();
        ensure!(eq18_on(&rg, k).unwrap() > zero, "C{} shows no intra-level edge at level {k}", 2 * k + 1);
        ensure!(treeness_check(&rg) != Treeness::Tree, "C{} accepted as a tree", 2 * k + 1);
        // even cycles are invisible to the intra-level form but still rejected
        let even = bfs_levels(&cycle(2 * k + 2), 0).unwrap();
        ensure!((0..=even.depth()).all(|i| eq18_on(&even, i).unwrap() == zero), "C{} has an intra-level edge", 2 * k + 2);
        ensure!(treeness_check(&even) != Treeness::Tree, "C{} accepted as a tree", 2 * k + 2);
    }
    let mut graphs = 0;
    let mut trees = 0;
    for k in 0..500u64 {
        let n = 2 + (k % 13) as usize;
        let g = random_connected_graph(n, 0.4, 9_000 + k, DEFAULT_REJECTION_BUDGET).map_err(fail(format!("sample {k}")))?;
        let rg = bfs_levels(&g, 0).unwrap();
        let is_tree = treeness_check(&rg) == Treeness::Tree;
        ensure!(is_tree == (g.edge_count() + 1 == n), "treeness verdict wrong on sample {k}");
        for i in 0..=rg.depth() {
            let (c, s) = eq17_on(&rg, i).unwrap();
            ensure!(c == s, "walk identity fails on sample {k} at level {i}: {c} != {s}");
            identities += 1;
        }
        graphs += 1;
        trees += usize::from(is_tree);
    }
    Ok(format!("{identities} level identities; odd cycles C3..C13 detected; {graphs} random graphs ({trees} trees)"))
}

fn hat_correspondence_and_irreducibility(corpus: &[RootedTree]) -> Outcome {
    let mut checked = 0;
    for k in 0..300u64 {
        let t = random_tree(2 + (k % 19) as usize, 20_000 + k).unwrap();
        for alpha in 0..level_classes(&t).class_count(1) {
            ensure!(verify_eq20(&t, alpha, DEFAULT_CAP).map_err(fail(describe(&t)))?, "hat correspondence fails, class {alpha} of {}", describe(&t));
            checked += 1;
        }
    }
    let mut irreducible = 0;
    for t in corpus.iter().filter(|t| t.n() <= 16) {
        let ops = build_operators(t.rooted_graph());
        ensure!(verify_prop1(&ops, DEFAULT_CAP).map_err(fail(describe(t)))?, "W0 reducible for {}", describe(t));
        ensure!(principal_module(&ops, DEFAULT_CAP).unwrap().dim() >= 1, "empty W0");
        irreducible += 1;
    }
    Ok(format!("{checked} level-one classes over 300 trees; {irreducible} trees with scalar commutant on W0"))
}

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn twtree(args: &[&str], threads: Option<&str>) -> (i32, Vec<u8>) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_twtree"));
    cmd.args(args).env_remove("TWTREE_CAP");
    if let Some(t) = threads {
        cmd.env("RAYON_NUM_THREADS", t);
    }
    let out = cmd.output().expect("run twtree");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn cli_determinism() -> Outcome {
    let (t6, shuffled, star2, path3, triangle, parents) =
        (data("t6.edges"), data("t6_shuffled.edges"), data("star2.edges"), data("path3.edges"), data("triangle.edges"), data("t6.parents"));
    let invocations: Vec<(Vec<&str>, i32)> = vec![
        (vec!["analyze", &t6, "--json"], 0),
        (vec!["analyze", &t6, "--text"], 0),
        (vec!["analyze", &parents, "--format", "parents"], 0),
        (vec!["analyze", &triangle], 0),
        (vec!["analyze", &t6, "--root", "4"], 0),
        (vec!["iso", &t6, &shuffled, "--root-b", "2"], 0),
        (vec!["iso", &t6, &shuffled, "--root-b", "2", "--via-module"], 0),
        (vec!["iso", &star2, &path3], 1),
        (vec!["iso", &t6, &triangle], 2),
        (vec!["export-dot", &t6], 0),
        (vec!["export-dot", &triangle], 0),
        (vec!["scan", "--model", "tree", "--n", "8", "--trials", "500", "--seed", "7"], 0),
        (vec!["scan", "--model", "gnp:0.5", "--n", "6", "--trials", "200", "--seed", "11"], 0),
        (vec!["scan", "--model", "tree", "--n", "40", "--trials", "1"], 3),
    ];
    for (args, expected) in &invocations {
        let first = twtree(args, None);
        let second = twtree(args, None);
        ensure!(first.0 == *expected, "{args:?} exited {} (expected {expected})", first.0);
        ensure!(first == second, "{args:?} is not byte-reproducible");
    }

    // replay a recorded scan from its own JSON, on one thread and on many
    let (_, recorded) = twtree(&["scan", "--model", "gnp:0.5", "--n", "6", "--trials", "200", "--seed", "11"], None);
    let stats: Value = serde_json::from_slice(&recorded).map_err(fail("scan JSON"))?;
    let replay_args: Vec<String> = vec![
        "scan".into(),
        "--model".into(),
        stats["model"].as_str().unwrap_or_default().into(),
        "--n".into(),
        stats["n"].to_string(),
        "--trials".into(),
        stats["trials"].to_string(),
        "--seed".into(),
        stats["seed"].to_string(),
    ];
    let replay_refs: Vec<&str> = replay_args.iter().map(String::as_str).collect();
    ensure!(twtree(&replay_refs, Some("1")).1 == recorded, "single-threaded replay differs");
    ensure!(twtree(&replay_refs, Some("4")).1 == recorded, "four-thread replay differs");
    let instances = stats["instances"].as_array().cloned().unwrap_or_default();
    ensure!(!instances.is_empty(), "scan recorded no instances");
    for inst in &instances {
        let seed = inst["seed"].as_u64().unwrap_or_default();
        let g = random_connected_graph(6, 0.5, seed, DEFAULT_REJECTION_BUDGET).map_err(fail("resample"))?;
        ensure!(inst["hash"].as_str() == Some(g.content_hash().as_str()), "instance seed {seed} does not resample the same graph");
    }
    Ok(format!("{} invocations reproducible; scan replayed from {} recorded instances", invocations.len(), instances.len()))
}

type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() {
    let start = Instant::now();
    let corpus = corpus();
    let criteria: Vec<(&str, Check)> = vec![
        ("principal module equals the orbit-sum span", Box::new(|| principal_module_is_orbit_span(&corpus))),
        ("counting, eigenspace and certificate classes agree; class projectors lie in T", Box::new(|| level_classes_agree(&corpus))),
        ("certificates, brute-force search and module bundles agree on all pairs", Box::new(recognition_agrees)),
        ("trivial automorphism group iff T = End(V) iff dim W0 = n", Box::new(rigidity_equivalence)),
        ("walk identities and treeness detection", Box::new(|| treeness_operators(&corpus))),
        ("hat-module correspondence and irreducibility of W0", Box::new(|| hat_correspondence_and_irreducibility(&corpus))),
        ("CLI byte-determinism and scan replay", Box::new(cli_determinism)),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  criterion {} ({secs:.1}s): {name} -- {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {} ({secs:.1}s): {name} -- {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
