use serde_json::Value;
use twtree_cli::{run, EXIT_INPUT, EXIT_NON_ISO, EXIT_OK, EXIT_SIZE};

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn json(args: &[&str]) -> Value {
    let out = run(std::iter::once("twtree").chain(args.iter().copied()));
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn exit(args: &[&str]) -> i32 {
    run(std::iter::once("twtree").chain(args.iter().copied())).code
}

#[test]
fn analyze_t6() {
    let r = json(&["analyze", &data("t6.edges")]);
    assert_eq!(r["dims"]["W0"], 5);
    assert!(r["dims"]["T"].as_u64().unwrap() < 36);
    assert_eq!(r["dims"]["n2"], 36);
    assert_eq!(r["flags"]["H_trivial"], false);
    assert_eq!(r["orbits"], serde_json::json!([[0], [1], [2], [3, 4], [5]]));
    assert_eq!(r["dims"]["T"], 26);
    let mut from_parents = json(&["analyze", &data("t6.parents"), "--format", "parents"]);
    assert_eq!(from_parents["input"]["format"], "parents");
    from_parents["input"]["format"] = "edgelist".into();
    assert_eq!(from_parents, r);
}

#[test]
fn analyze_path_and_triangle() {
    let p = json(&["analyze", &data("path3.edges")]);
    assert_eq!((p["dims"]["W0"].as_u64(), p["dims"]["T"].as_u64()), (Some(3), Some(9)));
    assert_eq!(p["flags"]["T_full"], true);
    let t = json(&["analyze", &data("triangle.edges")]);
    assert_eq!(t["flags"]["is_tree"], false);
    assert_eq!(t["witness"]["kind"], "intra-level-edge");
    let c4 = json(&["analyze", &data("c4.edges")]);
    assert_eq!(c4["witness"]["kind"], "multi-parent");
}

#[test]
fn analyze_errors_and_cap() {
    assert_eq!(exit(&["analyze", &data("missing.edges")]), EXIT_INPUT);
    assert_eq!(exit(&["analyze", &data("t6.edges"), "--root", "9"]), EXIT_INPUT);
    assert_eq!(exit(&["analyze", &data("t6.parents")]), EXIT_INPUT);
    let capped = json(&["analyze", &data("t6.edges"), "--cap", "3"]);
    assert!(capped["dims"]["T"].is_null());
    assert_eq!(capped["certificate"], "((()())(()))");
}

#[test]
fn text_renders_the_same_report() {
    let out = run(["twtree", "analyze", &data("t6.edges"), "--text"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("dim W0    5"));
    assert!(out.stdout.contains("orbits    {0} {1} {2} {3,4} {5}"));
}

#[test]
fn iso_examples() {
    let out = run(["twtree", "iso", &data("t6.edges"), &data("t6_shuffled.edges"), "--root-b", "2"]);
    assert_eq!((out.code, out.stdout.as_str()), (EXIT_OK, "ISO ((()())(())) ((()())(()))\n"));
    let out = run(["twtree", "iso", &data("star2.edges"), &data("path3.edges")]);
    assert_eq!((out.code, out.stdout.as_str()), (EXIT_NON_ISO, "NON-ISO (()()) ((()))\n"));
    assert_eq!(exit(&["iso", &data("star2.edges"), &data("path3.edges"), "--via-module"]), EXIT_NON_ISO);
    assert_eq!(exit(&["iso", &data("t6.edges"), &data("triangle.edges")]), EXIT_INPUT);
    assert_eq!(exit(&["iso", &data("t6.edges"), &data("t6.edges"), "--via-module", "--cap", "4"]), EXIT_SIZE);
}

#[test]
fn scan_examples() {
    let s = json(&["scan", "--model", "tree", "--n", "1", "--trials", "10"]);
    assert_eq!(s["fraction"], 1.0);
    let g = json(&["scan", "--model", "gnp:0.5", "--n", "6", "--trials", "200"]);
    assert_eq!(g["trials"], 200);
    let evaluated = g["per_n"][0]["evaluated"].as_u64().unwrap();
    assert_eq!(evaluated + g["failures"].as_array().unwrap().len() as u64, 200);
    assert_eq!(exit(&["scan", "--n", "33"]), EXIT_SIZE);
    assert_eq!(exit(&["scan", "--model", "grid", "--n", "3"]), EXIT_INPUT);
}

#[test]
fn dot_examples() {
    let out = run(["twtree", "export-dot", &data("single.edges")]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("{ rank=same; 0; }"));
    assert!(!out.stdout.contains("->"));
    assert_eq!(exit(&["export-dot", &data("missing.edges")]), EXIT_INPUT);
}

#[test]
fn help_is_not_an_error() {
    let out = run(["twtree", "--help"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("export-dot"));
}
