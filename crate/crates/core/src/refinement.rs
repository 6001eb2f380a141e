//! Level classes `X_i(α)`: vertices of one level grouped by the isomorphism
//! type of their rooted subtree, computed bottom-up from child-class counts.
//!
//! Labels within a level are ordered like the canonical certificates of the
//! classes. A certificate is `"(" + sorted child certificates + ")"`, and no
//! certificate is a proper prefix of another, so comparing two of them is the
//! same as comparing their sorted child-label sequences element-wise with the
//! rule that a sequence which runs out first is the *larger* one (`")"`
//! sorts after `"("`). That lets labels be assigned without building strings.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::RootedTree;
use crate::linalg::{row_basis, span_closure, RatMatrix, RatVector, Rational};

/// Sparse count vector `β ↦ n_β(x)` over the next level's labels, sorted by label.
pub type ChildCounts = Vec<(usize, usize)>;

fn counts_of(children: &[usize], rank: &[usize]) -> ChildCounts {
    let mut labels: Vec<usize> = children.iter().map(|&c| rank[c]).collect();
    labels.sort_unstable();
    let mut out: ChildCounts = Vec::new();
    for l in labels {
        match out.last_mut() {
            Some((last, count)) if *last == l => *count += 1,
            _ => out.push((l, 1)),
        }
    }
    out
}

/// Certificate order on count vectors, see the module docs.
fn certificate_order(a: &ChildCounts, b: &ChildCounts) -> Ordering {
    let expand = |c: &ChildCounts| c.iter().flat_map(|&(l, k)| std::iter::repeat_n(l, k)).collect::<Vec<_>>();
    let (ea, eb) = (expand(a), expand(b));
    for (x, y) in ea.iter().zip(&eb) {
        if x != y {
            return x.cmp(y);
        }
    }
    eb.len().cmp(&ea.len())
}

struct LevelPass {
    rank: Vec<usize>,
    counts: Vec<ChildCounts>,
    distinct: Vec<Vec<ChildCounts>>,
}

fn refine_levels(levels: &[Vec<usize>], children: &[Vec<usize>]) -> LevelPass {
    let n = children.len();
    let mut rank = vec![0; n];
    let mut counts = vec![Vec::new(); n];
    let mut distinct = vec![Vec::new(); levels.len()];
    for (i, level) in levels.iter().enumerate().rev() {
        for &x in level {
            counts[x] = counts_of(&children[x], &rank);
        }
        let mut sigs: Vec<ChildCounts> = level.iter().map(|&x| counts[x].clone()).collect();
        sigs.sort_by(certificate_order);
        sigs.dedup();
        for &x in level {
            rank[x] = sigs.binary_search_by(|s| certificate_order(s, &counts[x])).expect("signature present");
        }
        distinct[i] = sigs;
    }
    LevelPass { rank, counts, distinct }
}

/// Per-level rank of every vertex's subtree in certificate order.
pub(crate) fn subtree_ranks(levels: &[Vec<usize>], children: &[Vec<usize>]) -> Vec<usize> {
    refine_levels(levels, children).rank
}

/// The partition `X_i = ⋃_α X_i(α)` with canonical labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassPartition {
    /// `classes[i][α]` lists the vertices of `X_i(α)` in ascending order.
    classes: Vec<Vec<Vec<usize>>>,
    #[serde(skip)]
    label_of: Vec<usize>,
    #[serde(skip)]
    counts: Vec<ChildCounts>,
    /// `signatures[i][α]`: the counts `n_β` shared by every vertex of `X_i(α)`.
    signatures: Vec<Vec<ChildCounts>>,
}

impl ClassPartition {
    pub fn depth(&self) -> usize {
        self.classes.len() - 1
    }

    pub fn classes(&self) -> &[Vec<Vec<usize>>] {
        &self.classes
    }

    pub fn level(&self, i: usize) -> &[Vec<usize>] {
        &self.classes[i]
    }

    /// `|Λ_i|`.
    pub fn class_count(&self, i: usize) -> usize {
        self.classes[i].len()
    }

    pub fn label_of(&self, v: usize) -> usize {
        self.label_of[v]
    }

    /// `n_β(x)` for one `β`.
    pub fn count(&self, x: usize, beta: usize) -> usize {
        self.counts[x].iter().find(|&&(l, _)| l == beta).map_or(0, |&(_, k)| k)
    }

    pub fn counts(&self, x: usize) -> &ChildCounts {
        &self.counts[x]
    }

    pub fn signature(&self, i: usize, alpha: usize) -> &ChildCounts {
        &self.signatures[i][alpha]
    }
}

/// Bottom-up refinement: at the deepest level every vertex shares one label;
/// above it, two vertices share a label exactly when their child-class
/// count vectors agree.
pub fn level_classes(t: &RootedTree) -> ClassPartition {
    let pass = refine_levels(t.levels(), t.all_children());
    let classes = t
        .levels()
        .iter()
        .enumerate()
        .map(|(i, level)| {
            let mut groups = vec![Vec::new(); pass.distinct[i].len()];
            for &x in level {
                groups[pass.rank[x]].push(x);
            }
            groups
        })
        .collect();
    ClassPartition { classes, label_of: pass.rank, counts: pass.counts, signatures: pass.distinct }
}

/// Diagonal projector `E*_i(α)` for every `(i, α)`.
pub fn class_projectors(cp: &ClassPartition, n: usize) -> BTreeMap<(usize, usize), RatMatrix> {
    let mut out = BTreeMap::new();
    for (i, level) in cp.classes.iter().enumerate() {
        for (alpha, class) in level.iter().enumerate() {
            out.insert((i, alpha), RatMatrix::diagonal_projector(n, class.iter().copied()));
        }
    }
    out
}

/// Summary of a successful operator-form check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma6Report {
    pub levels_checked: usize,
    pub operators_checked: usize,
}

/// Verifies the operator form of the level-class construction on explicit
/// matrices: every `M = E*_i A E*_{i+1}(β) A E*_i` is diagonal with entry
/// `n_β(x)` at `x ∈ X_i`, the common eigenspaces of these operators are the
/// classes `X_i(α)`, and the unital algebra they generate on `V*_i` is
/// spanned by the class projectors.
pub fn verify_lemma6(t: &RootedTree) -> Result<Lemma6Report> {
    let n = t.n();
    let cp = level_classes(t);
    let projectors = class_projectors(&cp, n);
    let adjacency = crate::talgebra::adjacency_matrix(t.graph());
    let d = t.depth();
    if cp.class_count(d) != 1 {
        return Err(Error::Mismatch(format!("deepest level has {} classes", cp.class_count(d))));
    }
    let mut operators_checked = 0;
    for i in 0..d {
        let level = &t.levels()[i];
        let e_i = RatMatrix::diagonal_projector(n, level.iter().copied());
        let mut diagonals: Vec<RatVector> = Vec::new();
        for beta in 0..cp.class_count(i + 1) {
            let b = e_i.mul(&adjacency).mul(&projectors[&(i + 1, beta)]);
            let m = b.mul(&adjacency).mul(&e_i);
            operators_checked += 1;
            if !m.is_diagonal() {
                return Err(Error::Mismatch(format!("level {i}, class {beta}: operator is not diagonal")));
            }
            for v in 0..n {
                let expected = if t.level_of(v) == i { cp.count(v, beta) } else { 0 };
                if m[(v, v)] != Rational::from(expected) {
                    return Err(Error::Mismatch(format!(
                        "level {i}, class {beta}: eigenvalue at vertex {v} is {}, expected {expected}",
                        m[(v, v)]
                    )));
                }
            }
            diagonals.push(level.iter().map(|&x| m[(x, x)].clone()).collect());
        }

        // common eigenspaces, read off the diagonals
        let mut eigen_classes: BTreeMap<Vec<Rational>, Vec<usize>> = BTreeMap::new();
        for (k, &x) in level.iter().enumerate() {
            eigen_classes.entry(diagonals.iter().map(|dg| dg[k].clone()).collect()).or_default().push(x);
        }
        let mut from_eigen: Vec<Vec<usize>> = eigen_classes.into_values().collect();
        let mut from_counts = cp.level(i).to_vec();
        from_eigen.sort();
        from_counts.sort();
        if from_eigen != from_counts {
            return Err(Error::Mismatch(format!("level {i}: eigenspace classes differ from counting classes")));
        }

        // unital algebra generated on V*_i, as vectors of diagonal entries
        let width = level.len();
        let ops: Vec<RatMatrix> = diagonals
            .iter()
            .map(|dg| {
                let mut m = RatMatrix::zeros(width, width);
                for (k, x) in dg.iter().enumerate() {
                    m[(k, k)] = x.clone();
                }
                m
            })
            .collect();
        let unit = vec![Rational::one(); width];
        let generated = span_closure(width, &[unit], &ops);
        let indicators: Vec<RatVector> = cp
            .level(i)
            .iter()
            .map(|class| {
                let mut v = vec![Rational::zero(); width];
                for x in class {
                    v[level.binary_search(x).expect("class member in level")] = Rational::one();
                }
                v
            })
            .collect();
        if generated != row_basis(indicators) {
            return Err(Error::Mismatch(format!("level {i}: generated algebra is not spanned by the class projectors")));
        }
    }
    Ok(Lemma6Report { levels_checked: d + 1, operators_checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{path, star, t6};
    use crate::graph::random_tree;

    #[test]
    fn t6_classes() {
        let cp = level_classes(&t6());
        assert_eq!(cp.level(2), &[vec![3, 4, 5]]);
        assert_eq!(cp.level(1), &[vec![1], vec![2]]);
        assert_eq!(cp.level(0), &[vec![0]]);
        assert_eq!(cp.count(1, 0), 2);
        assert_eq!(cp.count(2, 0), 1);
        assert_eq!(cp.counts(0), &vec![(0, 1), (1, 1)]);
    }

    #[test]
    fn star_and_path_classes() {
        for k in 1..6 {
            let cp = level_classes(&star(k));
            assert_eq!((cp.class_count(0), cp.class_count(1)), (1, 1));
        }
        let cp = level_classes(&path(5));
        for i in 0..5 {
            assert_eq!(cp.level(i), &[vec![i]]);
        }
    }

    #[test]
    fn projectors_partition_identity() {
        let t = t6();
        let cp = level_classes(&t);
        let ps = class_projectors(&cp, t.n());
        assert_eq!(ps[&(2, 0)], RatMatrix::diagonal_projector(6, [3, 4, 5]));
        let sum = ps.values().fold(RatMatrix::zeros(6, 6), |acc, p| acc.add(p));
        assert_eq!(sum, RatMatrix::identity(6));
        for (a, p) in &ps {
            for (b, q) in &ps {
                let expected = if a == b { p.clone() } else { RatMatrix::zeros(6, 6) };
                assert_eq!(p.mul(q), expected);
            }
        }
        let single = level_classes(&path(1));
        assert_eq!(class_projectors(&single, 1)[&(0, 0)], RatMatrix::identity(1));
    }

    #[test]
    fn lemma6_on_t6_and_paths() {
        let t = t6();
        let report = verify_lemma6(&t).unwrap();
        assert_eq!(report.levels_checked, 3);
        assert!(verify_lemma6(&path(4)).is_ok());
        assert!(verify_lemma6(&path(1)).is_ok());
    }

    #[test]
    fn lemma6_on_random_trees() {
        for seed in 0..200 {
            let n = 2 + (seed as usize % 29);
            let t = random_tree(n, seed).unwrap();
            verify_lemma6(&t).unwrap();
        }
    }

    #[test]
    fn labels_follow_certificate_order() {
        let t = t6();
        let cp = level_classes(&t);
        // "(()())" (vertex 1) sorts before "(())" (vertex 2)
        assert!(cp.label_of(1) < cp.label_of(2));
    }
}
