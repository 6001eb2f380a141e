//! Canonical parenthesis certificates for rooted trees.
//!
//! `cert(leaf) = "()"`, `cert(x) = "(" + sorted child certificates + ")"`.
//! Equal certificates mean isomorphic rooted trees; the string has length
//! `2n` and can be turned back into a tree.

mod invariants;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::RootedTree;

pub use invariants::{module_invariants, InvariantBundle, LevelOneEntry};

/// Largest tree size accepted by the exhaustive routines here.
pub const ENUMERATION_CAP: usize = 12;
pub const BRUTE_FORCE_ISO_CAP: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Certificate(String);

impl Certificate {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Number of vertices of the tree it describes.
    pub fn size(&self) -> usize {
        self.0.len() / 2
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Certificate {
    type Err = Error;

    /// Accepts a single balanced parenthesis group; surrounding whitespace
    /// is ignored. The string need not be in canonical order.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut depth: usize = 0;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth = depth.checked_sub(1).ok_or_else(|| Error::Malformed(format!("unmatched ')' at {i}")))?;
                    if depth == 0 && i + 1 != s.len() {
                        return Err(Error::Malformed("more than one top-level group".into()));
                    }
                }
                other => return Err(Error::Malformed(format!("unexpected character {other:?} at {i}"))),
            }
        }
        if s.is_empty() || depth != 0 {
            return Err(Error::Malformed("unbalanced or empty".into()));
        }
        Ok(Certificate(s.to_string()))
    }
}

/// Canonical certificate of `t`, plus each vertex's children in canonical
/// order (ascending certificate, ties by index). `t` is not modified.
pub fn certificate(t: &RootedTree) -> (Certificate, Vec<Vec<usize>>) {
    let n = t.n();
    let mut certs: Vec<String> = vec![String::new(); n];
    let mut order: Vec<Vec<usize>> = vec![Vec::new(); n];
    for level in t.levels().iter().rev() {
        for &x in level {
            let mut kids: Vec<(String, usize)> =
                t.children(x).iter().map(|&c| (std::mem::take(&mut certs[c]), c)).collect();
            kids.sort();
            let mut s = String::with_capacity(2 + kids.iter().map(|(k, _)| k.len()).sum::<usize>());
            s.push('(');
            for (k, _) in &kids {
                s.push_str(k);
            }
            s.push(')');
            order[x] = kids.into_iter().map(|(_, c)| c).collect();
            certs[x] = s;
        }
    }
    (Certificate(std::mem::take(&mut certs[t.root()])), order)
}

pub fn rooted_isomorphic(a: &RootedTree, b: &RootedTree) -> bool {
    a.n() == b.n() && certificate(a).0 == certificate(b).0
}

/// Isomorphism by recursive backtracking over child matchings, with no
/// canonical forms involved.
pub fn brute_force_rooted_iso(a: &RootedTree, b: &RootedTree) -> Result<bool> {
    for t in [a, b] {
        if t.n() > BRUTE_FORCE_ISO_CAP {
            return Err(Error::SizeGuard { n: t.n(), cap: BRUTE_FORCE_ISO_CAP });
        }
    }
    if a.n() != b.n() {
        return Ok(false);
    }
    let size = |t: &RootedTree| {
        let mut s = vec![1usize; t.n()];
        for level in t.levels().iter().rev() {
            for &x in level {
                s[x] += t.children(x).iter().map(|&c| s[c]).sum::<usize>();
            }
        }
        s
    };
    let (sa, sb) = (size(a), size(b));
    let mut memo = HashMap::new();
    Ok(iso_at(a, b, a.root(), b.root(), &sa, &sb, &mut memo))
}

fn iso_at(
    a: &RootedTree,
    b: &RootedTree,
    x: usize,
    y: usize,
    sa: &[usize],
    sb: &[usize],
    memo: &mut HashMap<(usize, usize), bool>,
) -> bool {
    if let Some(&r) = memo.get(&(x, y)) {
        return r;
    }
    let (cx, cy) = (a.children(x), b.children(y));
    let result = sa[x] == sb[y] && cx.len() == cy.len() && {
        let mut used = vec![false; cy.len()];
        match_children(a, b, cx, cy, 0, &mut used, sa, sb, memo)
    };
    memo.insert((x, y), result);
    result
}

#[allow(clippy::too_many_arguments)]
fn match_children(
    a: &RootedTree,
    b: &RootedTree,
    cx: &[usize],
    cy: &[usize],
    k: usize,
    used: &mut Vec<bool>,
    sa: &[usize],
    sb: &[usize],
    memo: &mut HashMap<(usize, usize), bool>,
) -> bool {
    if k == cx.len() {
        return true;
    }
    for j in 0..cy.len() {
        if used[j] || !iso_at(a, b, cx[k], cy[j], sa, sb, memo) {
            continue;
        }
        used[j] = true;
        if match_children(a, b, cx, cy, k + 1, used, sa, sb, memo) {
            used[j] = false;
            return true;
        }
        used[j] = false;
    }
    false
}

/// A tree with the given certificate, vertices numbered in preorder.
pub fn reconstruct(c: &Certificate) -> Result<RootedTree> {
    let mut parents = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut next = 0;
    for ch in c.as_str().chars() {
        match ch {
            '(' => {
                if let Some(&p) = stack.last() {
                    parents.push(p);
                }
                stack.push(next);
                next += 1;
            }
            ')' => {
                stack.pop().ok_or_else(|| Error::Malformed("unmatched ')'".into()))?;
            }
            other => return Err(Error::Malformed(format!("unexpected character {other:?}"))),
        }
    }
    if !stack.is_empty() || next == 0 {
        return Err(Error::Malformed("unbalanced or empty".into()));
    }
    RootedTree::from_parents(&parents)
}

/// One representative per isomorphism class of rooted trees on `n`
/// vertices, in certificate order. Generated by attaching a leaf to every
/// vertex of every class on `n − 1` vertices and deduplicating by
/// certificate.
pub fn enumerate_rooted_trees(n: usize) -> Result<Vec<RootedTree>> {
    if n == 0 {
        return Err(Error::InvalidArgument("trees have at least one vertex".into()));
    }
    if n > ENUMERATION_CAP {
        return Err(Error::SizeGuard { n, cap: ENUMERATION_CAP });
    }
    let mut layer: BTreeSet<String> = BTreeSet::from(["()".to_string()]);
    for _ in 1..n {
        let mut next = BTreeSet::new();
        for cert in &layer {
            for (i, ch) in cert.char_indices() {
                if ch == '(' {
                    let grown = format!("{}(){}", &cert[..=i], &cert[i + 1..]);
                    let tree = reconstruct(&Certificate(grown))?;
                    next.insert(certificate(&tree).0 .0);
                }
            }
        }
        layer = next;
    }
    layer.into_iter().map(|c| reconstruct(&Certificate(c))).collect()
}
