//! Finite simple connected graphs, their BFS level structure from a base
//! vertex, and rooted trees.

use std::collections::{BTreeSet, BinaryHeap, VecDeque};
use std::cmp::Reverse;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Rejection budget used by [`random_connected_graph`] unless overridden.
pub const DEFAULT_REJECTION_BUDGET: usize = 10_000;

/// Finite simple connected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, rejecting loops, repeated edges and disconnected input.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parse { line: 1, message: "vertex count must be at least 1".into() });
        }
        let mut seen = BTreeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::NotSimple(format!("loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::NotSimple(format!("repeated edge {{{}, {}}}", u.min(v), u.max(v))));
            }
        }
        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in &seen {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for adj in &mut neighbors {
            adj.sort_unstable();
        }
        let g = Graph { n, edges: seen.into_iter().collect(), neighbors };
        if !g.is_connected() {
            return Err(Error::NotConnected);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors[u].binary_search(&v).is_ok()
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.neighbors[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Edge-list text: the vertex count, then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// SHA-256 of the edge-list text, hex encoded.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_edge_list().as_bytes()))
    }
}

/// Parses the edge-list format: first line `n`, then `u v` per line.
/// Blank lines and `#` comments are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (first, header) = lines.next().ok_or(Error::Parse { line: 1, message: "missing vertex count".into() })?;
    let n: usize = header
        .parse()
        .map_err(|_| Error::Parse { line: first, message: format!("expected vertex count, found {header:?}") })?;
    let mut edges = Vec::new();
    for (line, content) in lines {
        let fields: Vec<&str> = content.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse { line, message: format!("expected vertex index, found {s:?}") })
        };
        match fields.as_slice() {
            [u, v] => edges.push((parse(u)?, parse(v)?)),
            _ => return Err(Error::Parse { line, message: format!("expected \"u v\", found {content:?}") }),
        }
    }
    Graph::new(n, edges)
}

/// Parses the parent-array format: one line `p₁ p₂ … p_{n−1}` where `pᵢ` is
/// the parent of vertex `i`; vertex 0 is the root. Empty input is the
/// single-vertex tree.
pub fn parse_parent_array(text: &str) -> Result<Graph> {
    let content: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    if content.len() > 1 {
        return Err(Error::Parse { line: 2, message: "parent array must be a single line".into() });
    }
    let parents = content
        .first()
        .map(|l| {
            l.split_whitespace()
                .map(|s| s.parse::<usize>().map_err(|_| Error::Parse { line: 1, message: format!("expected parent index, found {s:?}") }))
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?
        .unwrap_or_default();
    let n = parents.len() + 1;
    Graph::new(n, parents.iter().enumerate().map(|(i, &p)| (i + 1, p)))
}

/// Serializes a tree rooted at 0 in parent-array form.
pub fn to_parent_array(t: &RootedTree) -> Result<String> {
    if t.root() != 0 {
        return Err(Error::InvalidArgument("parent arrays are rooted at vertex 0".into()));
    }
    let parents: Vec<String> = (1..t.n()).map(|v| t.parent(v).expect("non-root vertex").to_string()).collect();
    Ok(format!("{}\n", parents.join(" ")))
}

/// A graph with a base vertex and its distance partition `X_0, …, X_D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedGraph {
    graph: Graph,
    root: usize,
    levels: Vec<Vec<usize>>,
    level_of: Vec<usize>,
    parent_of: Vec<Vec<usize>>,
}

/// Breadth-first distance partition from `root`. Neighbours are visited in
/// ascending order; the partition itself does not depend on that order.
pub fn bfs_levels(graph: &Graph, root: usize) -> Result<RootedGraph> {
    let n = graph.n();
    if root >= n {
        return Err(Error::VertexOutOfRange { vertex: root, n });
    }
    let mut level_of = vec![usize::MAX; n];
    let mut levels: Vec<Vec<usize>> = vec![vec![root]];
    level_of[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &w in graph.neighbors(u) {
            if level_of[w] == usize::MAX {
                level_of[w] = level_of[u] + 1;
                if levels.len() <= level_of[w] {
                    levels.push(Vec::new());
                }
                levels[level_of[w]].push(w);
                queue.push_back(w);
            }
        }
    }
    for level in &mut levels {
        level.sort_unstable();
    }
    let parent_of = (0..n)
        .map(|v| graph.neighbors(v).iter().copied().filter(|&w| level_of[w] + 1 == level_of[v]).collect())
        .collect();
    Ok(RootedGraph { graph: graph.clone(), root, levels, level_of, parent_of })
}

impl RootedGraph {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// `D`, the eccentricity of the root.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> &[usize] {
        &self.levels[i]
    }

    pub fn level_of(&self, v: usize) -> usize {
        self.level_of[v]
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.parent_of[v]
    }

    /// Lowest-level edge joining two vertices of the same level, if any.
    pub fn first_intra_level_edge(&self) -> Option<(usize, usize, usize)> {
        self.graph
            .edges()
            .iter()
            .filter(|&&(u, v)| self.level_of[u] == self.level_of[v])
            .map(|&(u, v)| (self.level_of[u], u, v))
            .min()
    }

    pub fn first_multi_parent(&self) -> Option<usize> {
        (0..self.n()).find(|&v| self.parent_of[v].len() > 1)
    }
}

/// Why a rooted graph is not a tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TreeWitness {
    IntraLevelEdge { level: usize, edge: (usize, usize) },
    MultiParent { vertex: usize, parents: Vec<usize> },
}

impl fmt::Display for TreeWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeWitness::IntraLevelEdge { level, edge } => {
                write!(f, "edge {{{}, {}}} inside level {level}", edge.0, edge.1)
            }
            TreeWitness::MultiParent { vertex, parents } => {
                write!(f, "vertex {vertex} has parents {parents:?}")
            }
        }
    }
}

/// Reports the first obstruction: intra-level edges are checked before
/// vertices with several parents.
pub fn tree_witness(rg: &RootedGraph) -> Option<TreeWitness> {
    if let Some((level, u, v)) = rg.first_intra_level_edge() {
        return Some(TreeWitness::IntraLevelEdge { level, edge: (u, v) });
    }
    rg.first_multi_parent().map(|v| TreeWitness::MultiParent { vertex: v, parents: rg.parents(v).to_vec() })
}

/// A rooted graph whose underlying graph is a tree. Children lists are
/// stored in canonical order: ascending certificate, ties by vertex index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    rg: RootedGraph,
    children: Vec<Vec<usize>>,
}

pub fn as_tree(rg: &RootedGraph) -> Result<RootedTree> {
    if rg.graph.edge_count() + 1 != rg.n() {
        let witness = tree_witness(rg).expect("a connected graph with a cycle has an obstruction");
        return Err(Error::NotATree(witness));
    }
    let mut children = vec![Vec::new(); rg.n()];
    for v in 0..rg.n() {
        if let [p] = rg.parents(v) {
            children[*p].push(v);
        }
    }
    let rank = crate::refinement::subtree_ranks(rg.levels(), &children);
    for list in &mut children {
        list.sort_by_key(|&c| (rank[c], c));
    }
    Ok(RootedTree { rg: rg.clone(), children })
}

impl RootedTree {
    /// Tree from a parent array (`parents[i]` is the parent of vertex `i+1`),
    /// rooted at 0.
    pub fn from_parents(parents: &[usize]) -> Result<Self> {
        let g = Graph::new(parents.len() + 1, parents.iter().enumerate().map(|(i, &p)| (i + 1, p)))?;
        as_tree(&bfs_levels(&g, 0)?)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)], root: usize) -> Result<Self> {
        as_tree(&bfs_levels(&Graph::new(n, edges.iter().copied())?, root)?)
    }

    pub fn rooted_graph(&self) -> &RootedGraph {
        &self.rg
    }

    pub fn graph(&self) -> &Graph {
        &self.rg.graph
    }

    pub fn n(&self) -> usize {
        self.rg.n()
    }

    pub fn root(&self) -> usize {
        self.rg.root
    }

    pub fn depth(&self) -> usize {
        self.rg.depth()
    }

    pub fn levels(&self) -> &[Vec<usize>] {
        &self.rg.levels
    }

    pub fn level_of(&self, v: usize) -> usize {
        self.rg.level_of[v]
    }

    /// `ψ(v)`: the unique neighbour one level up.
    pub fn parent(&self, v: usize) -> Option<usize> {
        self.rg.parent_of[v].first().copied()
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn all_children(&self) -> &[Vec<usize>] {
        &self.children
    }

    /// Vertices of `Γ^(x)` in preorder (canonical child order), starting at `x`.
    pub fn descendants(&self, x: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![x];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children[v].iter().rev());
        }
        out
    }

    /// Copy of this tree with vertex `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        assert_eq!(perm.len(), self.n(), "permutation length mismatch");
        let edges: Vec<(usize, usize)> = self.graph().edges().iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        Self::from_edges(self.n(), &edges, perm[self.root()])
    }
}

/// The rooted subtree `Γ^(x)`, reindexed with `x ↦ 0` and the remaining
/// vertices in ascending original order. Returns the tree and the map from
/// new indices back to `t`'s vertices.
pub fn subtree(t: &RootedTree, x: usize) -> (RootedTree, Vec<usize>) {
    let mut members = t.descendants(x);
    members[1..].sort_unstable();
    let mut new_index = vec![usize::MAX; t.n()];
    for (i, &v) in members.iter().enumerate() {
        new_index[v] = i;
    }
    let edges: Vec<(usize, usize)> =
        members[1..].iter().map(|&v| (new_index[t.parent(v).expect("non-root")], new_index[v])).collect();
    let sub = RootedTree::from_edges(members.len(), &edges, 0).expect("subtree of a tree is a tree");
    (sub, members)
}

/// Uniform labelled tree on `n` vertices via Prüfer decoding, rooted at 0.
pub fn random_tree(n: usize, seed: u64) -> Result<RootedTree> {
    if n == 0 {
        return Err(Error::InvalidArgument("a tree needs at least one vertex".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = if n <= 2 {
        (1..n).map(|v| (0, v)).collect()
    } else {
        let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
        prufer_decode(n, &code)
    };
    RootedTree::from_edges(n, &edges, 0)
}

fn prufer_decode(n: usize, code: &[usize]) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> = (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let Reverse(leaf) = leaves.pop().expect("Prüfer decoding always has a leaf");
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.push(Reverse(c));
        }
    }
    let Reverse(u) = leaves.pop().expect("two leaves remain");
    let Reverse(v) = leaves.pop().expect("two leaves remain");
    edges.push((u, v));
    edges
}

/// Erdős–Rényi `G(n, p)` conditioned on connectivity by rejection.
pub fn random_connected_graph(n: usize, p: f64, seed: u64, budget: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidArgument("a graph needs at least one vertex".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget.max(1) {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        match Graph::new(n, edges) {
            Ok(g) => return Ok(g),
            Err(Error::NotConnected) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GiveUp { attempts: budget.max(1) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::t6;

    #[test]
    fn parse_examples() {
        let g = parse_edge_list("3\n0 1\n1 2").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        let single = parse_edge_list("1").unwrap();
        assert_eq!((single.n(), single.edge_count()), (1, 0));
        assert!(matches!(parse_edge_list("3\n0 1\n0 1"), Err(Error::NotSimple(_))));
        assert!(matches!(parse_edge_list("3\n0 0\n1 2"), Err(Error::NotSimple(_))));
        assert!(matches!(parse_edge_list("4\n0 1\n2 3"), Err(Error::NotConnected)));
        assert!(matches!(parse_edge_list("3\n0 1 2"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("x"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("2\n0 5"), Err(Error::VertexOutOfRange { vertex: 5, n: 2 })));
    }

    #[test]
    fn parent_array_roundtrip() {
        let g = parse_parent_array("0 0 1 1 2\n").unwrap();
        assert_eq!(g.n(), 6);
        let t = as_tree(&bfs_levels(&g, 0).unwrap()).unwrap();
        assert_eq!(to_parent_array(&t).unwrap(), "0 0 1 1 2\n");
        assert_eq!(parse_parent_array("").unwrap().n(), 1);
        assert_eq!(parse_parent_array("\n").unwrap().n(), 1);
        assert!(matches!(parse_parent_array("0 2"), Err(Error::NotSimple(_))));
        assert!(matches!(parse_parent_array("2 3 1"), Err(Error::NotConnected)));
    }

    #[test]
    fn bfs_examples() {
        let path = parse_edge_list("3\n0 1\n1 2").unwrap();
        let rg = bfs_levels(&path, 0).unwrap();
        assert_eq!(rg.levels(), &[vec![0], vec![1], vec![2]]);
        assert_eq!(rg.depth(), 2);

        let c4 = parse_edge_list("4\n0 1\n1 2\n2 3\n3 0").unwrap();
        let rg = bfs_levels(&c4, 0).unwrap();
        assert_eq!(rg.levels(), &[vec![0], vec![1, 3], vec![2]]);
        assert_eq!(rg.parents(2), &[1, 3]);

        let star = parse_edge_list("4\n0 1\n0 2\n0 3").unwrap();
        let rg = bfs_levels(&star, 0).unwrap();
        assert_eq!(rg.levels(), &[vec![0], vec![1, 2, 3]]);
        assert_eq!(rg.depth(), 1);
        assert!(bfs_levels(&star, 4).is_err());
    }

    #[test]
    fn bfs_levels_match_exhaustive_distances() {
        // Floyd–Warshall as an independent distance oracle.
        let g = parse_edge_list("7\n0 1\n1 2\n2 3\n3 0\n2 4\n4 5\n5 6\n6 4").unwrap();
        let n = g.n();
        let mut d = vec![vec![usize::MAX / 2; n]; n];
        for v in 0..n {
            d[v][v] = 0;
        }
        for &(u, v) in g.edges() {
            d[u][v] = 1;
            d[v][u] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
                }
            }
        }
        for root in 0..n {
            let rg = bfs_levels(&g, root).unwrap();
            for v in 0..n {
                assert_eq!(rg.level_of(v), d[root][v]);
            }
        }
    }

    #[test]
    fn as_tree_examples() {
        let path = parse_edge_list("3\n0 1\n1 2").unwrap();
        assert!(as_tree(&bfs_levels(&path, 0).unwrap()).is_ok());

        let c4 = parse_edge_list("4\n0 1\n1 2\n2 3\n3 0").unwrap();
        let err = as_tree(&bfs_levels(&c4, 0).unwrap()).unwrap_err();
        assert_eq!(err, Error::NotATree(TreeWitness::MultiParent { vertex: 2, parents: vec![1, 3] }));

        let tri = parse_edge_list("3\n0 1\n1 2\n2 0").unwrap();
        let err = as_tree(&bfs_levels(&tri, 0).unwrap()).unwrap_err();
        assert_eq!(err, Error::NotATree(TreeWitness::IntraLevelEdge { level: 1, edge: (1, 2) }));
    }

    #[test]
    fn subtree_examples() {
        let t = t6();
        let (whole, map) = subtree(&t, 0);
        assert_eq!(map, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(whole.graph(), t.graph());

        let (s, map) = subtree(&t, 1);
        assert_eq!(map, vec![1, 3, 4]);
        assert_eq!(s.levels(), &[vec![0], vec![1, 2]]);

        let (leaf, map) = subtree(&t, 5);
        assert_eq!((leaf.n(), map), (1, vec![5]));
    }

    #[test]
    fn canonical_children_order() {
        // children(0) = {1, 2}: cert(1) = "(()())" < cert(2) = "(())"
        assert_eq!(t6().children(0), &[1, 2]);
        let swapped = RootedTree::from_parents(&[0, 0, 2, 2, 1]).unwrap();
        assert_eq!(swapped.children(0), &[2, 1]);
    }

    #[test]
    fn random_tree_contract() {
        assert_eq!(random_tree(1, 5).unwrap().n(), 1);
        assert_eq!(random_tree(3, 11).unwrap(), random_tree(3, 11).unwrap());
        for seed in 1..=1000 {
            let t = random_tree(8, seed).unwrap();
            assert_eq!(t.graph().edge_count(), 7);
        }
    }

    #[test]
    fn random_tree_is_uniform_on_small_n() {
        // 4^2 = 16 labelled trees on 4 vertices; each should appear.
        let mut seen = BTreeSet::new();
        for seed in 0..2000 {
            seen.insert(random_tree(4, seed).unwrap().graph().edges().to_vec());
        }
        assert_eq!(seen.len(), 16);
    }

    #[test]
    fn random_graph_contract() {
        assert_eq!(random_connected_graph(2, 1.0, 0, 10).unwrap().edges(), &[(0, 1)]);
        assert_eq!(random_connected_graph(5, 0.0, 0, 10), Err(Error::GiveUp { attempts: 10 }));
        let a = random_connected_graph(6, 0.5, 42, DEFAULT_REJECTION_BUDGET).unwrap();
        assert_eq!(a, random_connected_graph(6, 0.5, 42, DEFAULT_REJECTION_BUDGET).unwrap());
        assert!(random_connected_graph(3, 1.5, 0, 10).is_err());
    }
}
