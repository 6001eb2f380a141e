//! The analysis report (schema `v1`) and DOT export.
//!
//! JSON is the machine interface; [`render_text`] is a thin view of the same
//! data. Nothing in a report depends on wall-clock time.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::graph::{as_tree, bfs_levels, Graph, RootedGraph, TreeWitness};
use crate::iso_cert::{certificate, Certificate};
use crate::orbits::{automorphism_order, orbit_partition};
use crate::refinement::level_classes;
use crate::talgebra::{build_operators, principal_module, t_algebra, treeness_check, Treeness};

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputEcho {
    pub format: String,
    pub n: usize,
    pub edges: usize,
    pub root: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dims {
    #[serde(rename = "W0")]
    pub w0: Option<usize>,
    #[serde(rename = "T")]
    pub t: Option<usize>,
    pub n2: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub is_tree: bool,
    #[serde(rename = "H_trivial")]
    pub h_trivial: Option<bool>,
    #[serde(rename = "T_full")]
    pub t_full: Option<bool>,
}

/// Fields that only make sense for trees are `null` otherwise; algebraic
/// dimensions are `null` when `n` exceeds the closure cap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub input: InputEcho,
    pub cap: usize,
    pub levels: Vec<Vec<usize>>,
    pub witness: Option<TreeWitness>,
    pub classes: Option<Vec<Vec<Vec<usize>>>>,
    pub orbits: Option<Vec<Vec<usize>>>,
    pub dims: Dims,
    pub flags: Flags,
    /// `|Aut|` of the rooted tree, in decimal.
    pub aut_order: Option<String>,
    pub certificate: Option<Certificate>,
}

pub fn analyze(graph: &Graph, root: usize, format: &str, cap: usize) -> Result<Report> {
    let rg = bfs_levels(graph, root)?;
    let n = graph.n();
    let mut report = Report {
        schema: SCHEMA_VERSION,
        input: InputEcho { format: format.to_string(), n, edges: graph.edge_count(), root },
        cap,
        levels: rg.levels().to_vec(),
        witness: None,
        classes: None,
        orbits: None,
        dims: Dims { w0: None, t: None, n2: n * n },
        flags: Flags { is_tree: false, h_trivial: None, t_full: None },
        aut_order: None,
        certificate: None,
    };

    match treeness_check(&rg) {
        Treeness::Tree => {
            let t = as_tree(&rg)?;
            let cp = level_classes(&t);
            let op = orbit_partition(&t, &cp);
            report.flags.is_tree = true;
            report.flags.h_trivial = Some(op.is_trivial());
            report.aut_order = Some(automorphism_order(&t, &cp).to_string());
            report.certificate = Some(certificate(&t).0);
            report.classes = Some(cp.classes().to_vec());
            report.orbits = Some(op.orbits().to_vec());
        }
        Treeness::NotATree { witness } => report.witness = Some(witness),
    }

    if n <= cap {
        let ops = build_operators(&rg);
        let dim_t = t_algebra(&ops, cap)?.dim();
        report.dims.w0 = Some(principal_module(&ops, cap)?.dim());
        report.dims.t = Some(dim_t);
        report.flags.t_full = Some(dim_t == n * n);
    }
    Ok(report)
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

fn groups(list: &[Vec<usize>]) -> String {
    list.iter()
        .map(|g| format!("{{{}}}", g.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "input     {} n={} edges={} root={}", r.input.format, r.input.n, r.input.edges, r.input.root);
    let _ = writeln!(out, "tree      {}", if r.flags.is_tree { "yes" } else { "no" });
    if let Some(w) = &r.witness {
        let _ = writeln!(out, "witness   {w}");
    }
    for (i, level) in r.levels.iter().enumerate() {
        let _ = writeln!(out, "level {i:<3} {}", groups(std::slice::from_ref(level)));
    }
    if let Some(classes) = &r.classes {
        for (i, level) in classes.iter().enumerate() {
            let _ = writeln!(out, "classes {i:<2}{}", groups(level));
        }
    }
    if let Some(orbits) = &r.orbits {
        let _ = writeln!(out, "orbits    {}", groups(orbits));
    }
    let _ = writeln!(out, "dim W0    {}", opt(&r.dims.w0));
    let _ = writeln!(out, "dim T     {} (n^2 = {})", opt(&r.dims.t), r.dims.n2);
    let _ = writeln!(out, "H trivial {}", opt(&r.flags.h_trivial));
    let _ = writeln!(out, "T full    {}", opt(&r.flags.t_full));
    if let Some(order) = &r.aut_order {
        let _ = writeln!(out, "|Aut|     {order}");
    }
    if let Some(c) = &r.certificate {
        let _ = writeln!(out, "cert      {c}");
    }
    out
}

const PALETTE: [&str; 12] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd",
    "#ccebc5", "#ffed6f",
];

/// DOT digraph with one `rank=same` group per level. Trees get one fill
/// color per orbit; other graphs are drawn uncolored, with edges inside a
/// level undirected.
pub fn export_dot(graph: &Graph, root: usize) -> Result<String> {
    let rg = bfs_levels(graph, root)?;
    let colors: Option<Vec<usize>> = match treeness_check(&rg) {
        Treeness::Tree => {
            let t = as_tree(&rg)?;
            let op = orbit_partition(&t, &level_classes(&t));
            Some((0..graph.n()).map(|v| op.orbit_of(v)).collect())
        }
        Treeness::NotATree { .. } => None,
    };
    Ok(dot_text(&rg, colors.as_deref()))
}

fn dot_text(rg: &RootedGraph, orbit_of: Option<&[usize]>) -> String {
    let mut out = String::from("digraph twtree {\n  node [shape=circle];\n");
    for level in rg.levels() {
        let names: Vec<String> = level.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }}", names.join("; "));
    }
    if let Some(orbit_of) = orbit_of {
        for v in 0..rg.n() {
            let color = PALETTE[orbit_of[v] % PALETTE.len()];
            let _ = writeln!(out, "  {v} [style=filled, fillcolor=\"{color}\", group=o{}];", orbit_of[v]);
        }
    } else {
        for v in 0..rg.n() {
            let _ = writeln!(out, "  {v};");
        }
    }
    for &(u, v) in rg.graph().edges() {
        let (lu, lv) = (rg.level_of(u), rg.level_of(v));
        if lu == lv {
            let _ = writeln!(out, "  {u} -> {v} [dir=none];");
        } else if lu < lv {
            let _ = writeln!(out, "  {u} -> {v};");
        } else {
            let _ = writeln!(out, "  {v} -> {u};");
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;
    use crate::linalg::DEFAULT_CAP;

    const T6: &str = "6\n0 1\n0 2\n1 3\n1 4\n2 5\n";

    #[test]
    fn t6_report() {
        let r = analyze(&parse_edge_list(T6).unwrap(), 0, "edgelist", DEFAULT_CAP).unwrap();
        assert_eq!(r.dims.w0, Some(5));
        assert!(r.dims.t.unwrap() < 36);
        assert_eq!(r.dims.n2, 36);
        assert_eq!(r.flags.h_trivial, Some(false));
        assert_eq!(r.aut_order.as_deref(), Some("2"));
        assert_eq!(r.certificate.as_ref().unwrap().as_str(), "((()())(()))");
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["schema"], "v1");
        assert_eq!(json["dims"]["W0"], 5);
    }

    #[test]
    fn path_report_is_full() {
        let r = analyze(&parse_edge_list("3\n0 1\n1 2\n").unwrap(), 0, "edgelist", DEFAULT_CAP).unwrap();
        assert_eq!((r.dims.w0, r.dims.t, r.flags.t_full), (Some(3), Some(9), Some(true)));
    }

    #[test]
    fn triangle_report() {
        let r = analyze(&parse_edge_list("3\n0 1\n1 2\n0 2\n").unwrap(), 0, "edgelist", DEFAULT_CAP).unwrap();
        assert!(!r.flags.is_tree);
        assert_eq!(r.witness, Some(TreeWitness::IntraLevelEdge { level: 1, edge: (1, 2) }));
        assert!(r.certificate.is_none());
        let text = render_text(&r);
        assert!(text.contains("witness   edge {1, 2} inside level 1"));
    }

    #[test]
    fn over_cap_leaves_dims_empty() {
        let r = analyze(&parse_edge_list(T6).unwrap(), 0, "edgelist", 4).unwrap();
        assert_eq!((r.dims.w0, r.dims.t), (None, None));
        assert!(r.certificate.is_some());
    }

    #[test]
    fn dot_examples() {
        let single = export_dot(&Graph::new(1, []).unwrap(), 0).unwrap();
        assert_eq!(single.matches("fillcolor").count(), 1);

        let dot = export_dot(&parse_edge_list(T6).unwrap(), 0).unwrap();
        assert_eq!(dot.matches(" -> ").count(), 5);
        let color_of = |v: usize| {
            let line = dot.lines().find(|l| l.trim_start().starts_with(&format!("{v} ["))).unwrap();
            line.split("fillcolor=").nth(1).unwrap().split(',').next().unwrap().to_string()
        };
        assert_eq!(color_of(3), color_of(4));
        assert_ne!(color_of(3), color_of(5));

        let cycle = export_dot(&parse_edge_list("3\n0 1\n1 2\n0 2\n").unwrap(), 0).unwrap();
        assert!(!cycle.contains("fillcolor"));
        assert!(cycle.contains("1 -> 2 [dir=none]"));
        assert!(cycle.contains("rank=same; 1; 2;"));
    }
}
