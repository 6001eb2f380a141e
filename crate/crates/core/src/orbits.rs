//! Orbits of `H = Aut(Γ^(x₀))` on the vertex set.
//!
//! Production path: top-down, two vertices of a level share an orbit exactly
//! when their parents do and their rooted subtrees are isomorphic (same
//! level-class label). No group elements are built. The backtracking
//! enumerator below is the independent oracle.

use std::ops::ControlFlow;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::RootedTree;
use crate::linalg::{equal_subspace, row_basis, span_closure, unit_vector, RatVector, Rational};
use crate::refinement::{level_classes, ClassPartition};

/// Size limit for exhaustive automorphism listing.
pub const BRUTE_FORCE_CAP: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitInfo {
    pub level: usize,
    pub label: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitPartition {
    /// Sorted by (level, class label, smallest vertex); members ascending.
    orbits: Vec<Vec<usize>>,
    #[serde(skip)]
    orbit_of: Vec<usize>,
    #[serde(skip)]
    info: Vec<OrbitInfo>,
}

impl OrbitPartition {
    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn orbit_of(&self, v: usize) -> usize {
        self.orbit_of[v]
    }

    pub fn info(&self, orbit: usize) -> &OrbitInfo {
        &self.info[orbit]
    }

    /// `H = 1` exactly when every orbit is a singleton.
    pub fn is_trivial(&self) -> bool {
        self.orbits.len() == self.orbit_of.len()
    }
}

pub fn orbit_partition(t: &RootedTree, cp: &ClassPartition) -> OrbitPartition {
    let n = t.n();
    let mut orbit_of = vec![usize::MAX; n];
    let mut keyed: Vec<((usize, usize, usize), Vec<usize>)> = Vec::new();
    orbit_of[t.root()] = 0;
    keyed.push(((0, 0, t.root()), vec![t.root()]));
    for (i, level) in t.levels().iter().enumerate().skip(1) {
        let mut groups: std::collections::BTreeMap<(usize, usize), Vec<usize>> = Default::default();
        for &x in level {
            let parent = t.parent(x).expect("non-root vertex has a parent");
            groups.entry((orbit_of[parent], cp.label_of(x))).or_default().push(x);
        }
        let mut level_orbits: Vec<((usize, usize, usize), Vec<usize>)> = groups
            .into_iter()
            .map(|((_, label), members)| ((i, label, members[0]), members))
            .collect();
        level_orbits.sort();
        for (key, members) in level_orbits {
            for &x in &members {
                orbit_of[x] = keyed.len();
            }
            keyed.push((key, members));
        }
    }
    let info = keyed.iter().map(|&((level, label, _), _)| OrbitInfo { level, label }).collect();
    OrbitPartition { orbits: keyed.into_iter().map(|(_, m)| m).collect(), orbit_of, info }
}

/// `Y̲ = Σ_{y∈Y} y` for every orbit, in orbit order.
pub fn orbit_sums(op: &OrbitPartition, n: usize) -> Vec<RatVector> {
    op.orbits
        .iter()
        .map(|orbit| {
            let mut v = vec![Rational::zero(); n];
            for &y in orbit {
                v[y] = Rational::one();
            }
            v
        })
        .collect()
}

/// Checks that the principal module `T x₀` equals the span of the orbit sums.
/// The closure uses only `A` and the level projectors.
pub fn verify_theorem4(t: &RootedTree, cap: usize) -> Result<bool> {
    let n = t.n();
    if n > cap {
        return Err(Error::SizeGuard { n, cap });
    }
    let ops = crate::talgebra::build_operators(t.rooted_graph());
    let w0 = span_closure(n, &[unit_vector(n, t.root())], &ops.generators());
    let cp = level_classes(t);
    let sums = row_basis(orbit_sums(&orbit_partition(t, &cp), n));
    Ok(equal_subspace(&w0, &sums))
}

/// Checks `Y̲ = E*_i(α) A Z̲` with `Z = ψ(Y)` for every orbit below the root,
/// and that each such `Z` is itself an orbit.
pub fn verify_eq16(t: &RootedTree) -> bool {
    let n = t.n();
    let cp = level_classes(t);
    let op = orbit_partition(t, &cp);
    for (k, orbit) in op.orbits.iter().enumerate() {
        let OrbitInfo { level, label } = op.info[k];
        if level == 0 {
            continue;
        }
        let mut z: Vec<usize> = orbit.iter().map(|&y| t.parent(y).expect("non-root")).collect();
        z.sort_unstable();
        z.dedup();
        if op.orbits[op.orbit_of[z[0]]] != z {
            return false;
        }
        let mut image = vec![Rational::zero(); n];
        for &zv in &z {
            for &w in t.graph().neighbors(zv) {
                image[w] = &image[w] + &Rational::one();
            }
        }
        for (v, x) in image.iter_mut().enumerate() {
            if t.level_of(v) != level || cp.label_of(v) != label {
                *x = Rational::zero();
            }
        }
        let mut expected = vec![Rational::zero(); n];
        for &y in orbit {
            expected[y] = Rational::one();
        }
        if image != expected {
            return false;
        }
    }
    true
}

/// `|H|` as the product over vertices of `Π_β n_β(x)!`.
pub fn automorphism_order(t: &RootedTree, cp: &ClassPartition) -> BigUint {
    let mut order = BigUint::one();
    for x in 0..t.n() {
        for &(_, k) in cp.counts(x) {
            for f in 2..=k {
                order *= f;
            }
        }
    }
    order
}

/// Visits every root-fixing automorphism (as `perm[v] = image of v`) found
/// by backtracking over level- and parent-respecting assignments.
fn search_automorphisms(t: &RootedTree, mut visit: impl FnMut(&[usize]) -> ControlFlow<()>) {
    let n = t.n();
    let order: Vec<usize> = t.levels().iter().flatten().copied().collect();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    perm[t.root()] = t.root();
    used[t.root()] = true;

    fn is_automorphism(t: &RootedTree, perm: &[usize]) -> bool {
        t.graph().edges().iter().all(|&(u, v)| t.graph().has_edge(perm[u], perm[v]))
    }

    fn go(
        t: &RootedTree,
        order: &[usize],
        pos: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if pos == order.len() {
            if is_automorphism(t, perm) {
                return visit(perm);
            }
            return ControlFlow::Continue(());
        }
        let v = order[pos];
        let target_parent = perm[t.parent(v).expect("non-root")];
        let degree = t.graph().neighbors(v).len();
        for &w in t.children(target_parent) {
            if used[w] || t.graph().neighbors(w).len() != degree {
                continue;
            }
            perm[v] = w;
            used[w] = true;
            let flow = go(t, order, pos + 1, perm, used, visit);
            used[w] = false;
            perm[v] = usize::MAX;
            flow?;
        }
        ControlFlow::Continue(())
    }

    let _ = go(t, &order, 1, &mut perm, &mut used, &mut visit);
}

/// Every automorphism of the rooted tree, by exhaustive search.
pub fn brute_force_aut(t: &RootedTree) -> Result<Vec<Vec<usize>>> {
    if t.n() > BRUTE_FORCE_CAP {
        return Err(Error::SizeGuard { n: t.n(), cap: BRUTE_FORCE_CAP });
    }
    let mut all = Vec::new();
    search_automorphisms(t, |p| {
        all.push(p.to_vec());
        ControlFlow::Continue(())
    });
    all.sort();
    Ok(all)
}

/// Whether the identity is the only automorphism; the search stops at the
/// first non-identity map, so it needs no size cap.
pub fn brute_force_is_rigid(t: &RootedTree) -> bool {
    let mut rigid = true;
    search_automorphisms(t, |p| {
        if p.iter().enumerate().any(|(v, &w)| v != w) {
            rigid = false;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    rigid
}

/// Orbits generated by a list of permutations, each sorted, ordered by
/// smallest member.
pub fn orbit_closure(n: usize, perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], v: usize) -> usize {
        let mut r = v;
        while parent[r] != r {
            r = parent[r];
        }
        let mut v = v;
        while parent[v] != r {
            let next = parent[v];
            parent[v] = r;
            v = next;
        }
        r
    }
    for p in perms {
        for (v, &w) in p.iter().enumerate() {
            let (a, b) = (find(&mut parent, v), find(&mut parent, w));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for v in 0..n {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    groups.into_values().collect()
}
