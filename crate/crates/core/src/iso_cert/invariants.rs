//! Isomorphism invariants read only from the principal module.
//!
//! The input is `W₀` as an abstract presentation: the restrictions of `A`
//! and the `E*_i` in some basis, the Gram matrix of that basis, and the
//! coordinates of `x₀`. No vertex of the tree is consulted. Class projectors
//! are recovered by splitting each `E*_i` along the spectra of
//! `E*_i A F_β A E*_i`, level-one class sizes come from norm ratios, and the
//! same procedure recurses into the cyclic module of each level-one class
//! inside the hat algebra.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::RootedTree;
use crate::linalg::{dot, span_closure, RatMatrix, RatVector, Rational, SubspaceBasis};
use crate::talgebra::{build_operators, principal_module};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct InvariantBundle {
    pub depth: usize,
    /// `|Λ_i|` for every level.
    pub class_counts: Vec<usize>,
    /// One entry per level-one class, sorted.
    pub level_one: Vec<LevelOneEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LevelOneEntry {
    /// `|X_1(α)|`.
    pub multiplicity: usize,
    /// Bundle of the rooted subtree shared by the vertices of `X_1(α)`.
    pub subtree: InvariantBundle,
}

struct Presentation {
    adjacency: RatMatrix,
    projectors: Vec<RatMatrix>,
    gram: RatMatrix,
    base: RatVector,
}

impl Presentation {
    fn new(adjacency: RatMatrix, mut projectors: Vec<RatMatrix>, gram: RatMatrix, base: RatVector) -> Self {
        while projectors.len() > 1 && projectors.last().is_some_and(RatMatrix::is_zero) {
            projectors.pop();
        }
        Presentation { adjacency, projectors, gram, base }
    }

    fn dim(&self) -> usize {
        self.base.len()
    }

    fn depth(&self) -> usize {
        self.projectors.len() - 1
    }

    fn inner(&self, u: &[Rational], v: &[Rational]) -> Rational {
        dot(u, &self.gram.mul_vec(v))
    }
}

/// Invariant bundle of `t` computed from `W₀` alone. Two rooted trees get
/// equal bundles exactly when they are isomorphic.
pub fn module_invariants(t: &RootedTree, cap: usize) -> Result<InvariantBundle> {
    let ops = build_operators(t.rooted_graph());
    let w0 = principal_module(&ops, cap)?;
    let p = Presentation::new(w0.adjacency().clone(), w0.projectors().to_vec(), w0.gram(), w0.base().clone());
    bundle_of(&p)
}

fn bundle_of(p: &Presentation) -> Result<InvariantBundle> {
    let depth = p.depth();
    let classes = split_levels(p)?;
    let class_counts = classes.iter().map(Vec::len).collect();
    let mut level_one = Vec::new();
    if depth > 0 {
        let d = p.dim();
        let off_root = RatMatrix::identity(d).sub(&p.projectors[0]);
        let mut ops = vec![off_root.mul(&p.adjacency).mul(&off_root)];
        ops.extend(p.projectors[1..].iter().cloned());
        let base_norm = p.inner(&p.base, &p.base);
        let a_base = p.adjacency.mul_vec(&p.base);
        for f in &classes[1] {
            let v = f.mul_vec(&a_base);
            let ratio = &p.inner(&v, &v) / &base_norm;
            let multiplicity = ratio
                .to_i64()
                .filter(|&m| m > 0)
                .ok_or_else(|| Error::Mismatch(format!("level-one norm ratio {ratio} is not a positive integer")))?;
            let sub = span_closure(d, std::slice::from_ref(&v), &ops);
            let subtree = bundle_of(&sub_presentation(p, &sub, &ops, &v)?)?;
            level_one.push(LevelOneEntry { multiplicity: multiplicity as usize, subtree });
        }
        level_one.sort();
    }
    Ok(InvariantBundle { depth, class_counts, level_one })
}

/// Restricts `Â` and `E*_1..E*_D` to `sub` and re-indexes levels from 1.
fn sub_presentation(p: &Presentation, sub: &SubspaceBasis, ops: &[RatMatrix], v: &RatVector) -> Result<Presentation> {
    let adjacency = sub.restrict(&ops[0])?;
    let projectors = ops[1..].iter().map(|m| sub.restrict(m)).collect::<Result<Vec<_>>>()?;
    let k = sub.dim();
    let mut gram = RatMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = p.inner(&sub.basis()[i], &sub.basis()[j]);
        }
    }
    let base = sub.coordinates(v).expect("seed lies in its closure");
    Ok(Presentation::new(adjacency, projectors, gram, base))
}

/// Class projectors per level, deepest level first in the computation and
/// each level sorted by its eigenvalue label.
fn split_levels(p: &Presentation) -> Result<Vec<Vec<RatMatrix>>> {
    let depth = p.depth();
    let mut classes: Vec<Vec<RatMatrix>> = vec![Vec::new(); depth + 1];
    classes[depth] = vec![p.projectors[depth].clone()];
    for i in (0..depth).rev() {
        let e_i = &p.projectors[i];
        let mut parts: Vec<(Vec<i64>, RatMatrix)> = vec![(Vec::new(), e_i.clone())];
        for f in &classes[i + 1] {
            let m = e_i.mul(&p.adjacency).mul(f).mul(&p.adjacency).mul(e_i);
            let mut next = Vec::new();
            for (label, q) in parts {
                for (lambda, proj) in eigen_split(&m, &q)? {
                    let mut l = label.clone();
                    l.push(lambda);
                    next.push((l, proj));
                }
            }
            parts = next;
        }
        parts.sort_by(|a, b| a.0.cmp(&b.0));
        classes[i] = parts.into_iter().map(|(_, q)| q).collect();
    }
    Ok(classes)
}

/// Splits the range of the projector `q` into eigenspaces of `m`, which
/// commutes with `q` and has non-negative integer eigenvalues there.
fn eigen_split(m: &RatMatrix, q: &RatMatrix) -> Result<Vec<(i64, RatMatrix)>> {
    let mq = m.mul(q);
    let total = q.rank();
    let trace = mq.trace().to_i64().filter(|&t| t >= 0).ok_or_else(|| {
        Error::Mismatch(format!("trace {} is not a non-negative integer", mq.trace()))
    })?;
    let mut spectrum = Vec::new();
    let mut found = 0;
    for lambda in 0..=trace {
        if found == total {
            break;
        }
        let shifted = mq.sub(&q.scale(&Rational::from(lambda)));
        let mult = total - shifted.rank();
        if mult > 0 {
            spectrum.push(lambda);
            found += mult;
        }
    }
    if found != total {
        return Err(Error::Mismatch("operator has a non-integer spectrum on a level".into()));
    }
    if spectrum.len() == 1 {
        return Ok(vec![(spectrum[0], q.clone())]);
    }
    let n = m.rows();
    let id = RatMatrix::identity(n);
    Ok(spectrum
        .iter()
        .map(|&lambda| {
            let mut proj = q.clone();
            for &mu in spectrum.iter().filter(|&&mu| mu != lambda) {
                let factor = m.sub(&id.scale(&Rational::from(mu))).scale(&Rational::from(lambda - mu).recip());
                proj = proj.mul(&factor);
            }
            (lambda, proj)
        })
        .collect())
}
