//! The Terwilliger algebra `T(x₀) = ⟨A, E*_0, …, E*_D⟩` of a rooted graph,
//! its principal module `W₀ = T x₀`, and the operator identities used to
//! recognise trees.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{tree_witness, Graph, RootedGraph, RootedTree, TreeWitness};
use crate::linalg::{
    block_algebra_closure, commutant_dim, row_basis, span_closure, unit_vector, AlgebraBasis, Echelon, Insertion,
    RatMatrix, RatVector, Rational, SubspaceBasis,
};
use crate::orbits::brute_force_is_rigid;
use crate::refinement::level_classes;

pub fn adjacency_matrix(g: &Graph) -> RatMatrix {
    let mut a = RatMatrix::zeros(g.n(), g.n());
    for &(u, v) in g.edges() {
        a[(u, v)] = Rational::one();
        a[(v, u)] = Rational::one();
    }
    a
}

/// Generators of `T(x₀)` on the standard module `V = QX`.
#[derive(Clone, Debug)]
pub struct TOperators {
    rg: RootedGraph,
    adjacency: RatMatrix,
    projectors: Vec<RatMatrix>,
}

pub fn build_operators(rg: &RootedGraph) -> TOperators {
    let n = rg.n();
    TOperators {
        rg: rg.clone(),
        adjacency: adjacency_matrix(rg.graph()),
        projectors: rg.levels().iter().map(|l| RatMatrix::diagonal_projector(n, l.iter().copied())).collect(),
    }
}

impl TOperators {
    pub fn n(&self) -> usize {
        self.rg.n()
    }

    pub fn depth(&self) -> usize {
        self.rg.depth()
    }

    pub fn root(&self) -> usize {
        self.rg.root()
    }

    pub fn rooted_graph(&self) -> &RootedGraph {
        &self.rg
    }

    pub fn adjacency(&self) -> &RatMatrix {
        &self.adjacency
    }

    /// `E*_0, …, E*_D`.
    pub fn projectors(&self) -> &[RatMatrix] {
        &self.projectors
    }

    /// `A` followed by the level projectors.
    pub fn generators(&self) -> Vec<RatMatrix> {
        std::iter::once(self.adjacency.clone()).chain(self.projectors.iter().cloned()).collect()
    }
}

/// `W₀ = T x₀` with the generators restricted to it.
#[derive(Clone, Debug)]
pub struct PrincipalModule {
    basis: SubspaceBasis,
    adjacency: RatMatrix,
    projectors: Vec<RatMatrix>,
    base: RatVector,
}

impl PrincipalModule {
    pub fn basis(&self) -> &SubspaceBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// `A|_{W₀}` in the RREF basis of `W₀`.
    pub fn adjacency(&self) -> &RatMatrix {
        &self.adjacency
    }

    /// `E*_i|_{W₀}` in the RREF basis of `W₀`.
    pub fn projectors(&self) -> &[RatMatrix] {
        &self.projectors
    }

    /// Coordinates of `x₀` in the RREF basis of `W₀`.
    pub fn base(&self) -> &RatVector {
        &self.base
    }

    pub fn gram(&self) -> RatMatrix {
        self.basis.gram()
    }
}

pub fn principal_module(ops: &TOperators, cap: usize) -> Result<PrincipalModule> {
    let n = ops.n();
    if n > cap {
        return Err(Error::SizeGuard { n, cap });
    }
    let x0 = unit_vector(n, ops.root());
    let basis = span_closure(n, std::slice::from_ref(&x0), &ops.generators());
    let adjacency = basis.restrict(&ops.adjacency)?;
    let projectors = ops.projectors.iter().map(|p| basis.restrict(p)).collect::<Result<_>>()?;
    let base = basis.coordinates(&x0).expect("x₀ lies in its own closure");
    Ok(PrincipalModule { basis, adjacency, projectors, base })
}

/// The algebra `T(x₀)` itself.
pub fn t_algebra(ops: &TOperators, cap: usize) -> Result<AlgebraBasis> {
    block_algebra_closure(&ops.adjacency, ops.rooted_graph().levels(), cap)
}

pub fn dim_t(ops: &TOperators, cap: usize) -> Result<usize> {
    Ok(t_algebra(ops, cap)?.dim())
}

pub fn is_full_endomorphism(ops: &TOperators, cap: usize) -> Result<bool> {
    Ok(t_algebra(ops, cap)?.is_full())
}

/// Irreducibility of `W₀` as a `T`-module: its commutant is the scalars.
pub fn verify_prop1(ops: &TOperators, cap: usize) -> Result<bool> {
    let algebra = t_algebra(ops, cap)?;
    let w0 = principal_module(ops, cap)?;
    verify_prop1_with(&algebra, &w0)
}

pub fn verify_prop1_with(algebra: &AlgebraBasis, w0: &PrincipalModule) -> Result<bool> {
    Ok(commutant_dim(algebra, w0.basis())? == 1)
}

/// For trees: `H = 1 ⟺ dim T = n² ⟺ dim W₀ = n`, all three compared.
pub fn verify_rigidity_equivalence(t: &RootedTree, cap: usize) -> Result<bool> {
    let n = t.n();
    let ops = build_operators(t.rooted_graph());
    let rigid = brute_force_is_rigid(t);
    let full = is_full_endomorphism(&ops, cap)?;
    let w0_full = principal_module(&ops, cap)?.dim() == n;
    Ok(rigid == full && full == w0_full)
}

/// Every basis element of `T` commutes with every automorphism of the rooted
/// tree (as a permutation matrix).
pub fn verify_centralizer_containment(t: &RootedTree, cap: usize) -> Result<bool> {
    let perms = crate::orbits::brute_force_aut(t)?;
    let algebra = t_algebra(&build_operators(t.rooted_graph()), cap)?;
    let n = t.n();
    let basis = algebra.basis();
    for p in &perms {
        let mut pm = RatMatrix::zeros(n, n);
        for (v, &w) in p.iter().enumerate() {
            pm[(w, v)] = Rational::one();
        }
        if basis.iter().any(|b| pm.mul(b) != b.mul(&pm)) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn adjacency_apply(g: &Graph, v: &[BigInt]) -> Vec<BigInt> {
    (0..g.n()).map(|u| g.neighbors(u).iter().fold(BigInt::zero(), |acc, &w| acc + &v[w])).collect()
}

fn level_mask(rg: &RootedGraph, i: usize, v: &mut [BigInt]) {
    for (u, x) in v.iter_mut().enumerate() {
        if rg.level_of(u) != i {
            *x = BigInt::zero();
        }
    }
}

/// `E*_i A^i E*_0 x₀`, built by repeated sparse products.
fn shell_walks(rg: &RootedGraph, i: usize) -> Vec<BigInt> {
    let g = rg.graph();
    let mut w = vec![BigInt::zero(); g.n()];
    w[rg.root()] = BigInt::from(1);
    for _ in 0..i {
        w = adjacency_apply(g, &w);
    }
    level_mask(rg, i, &mut w);
    w
}

/// Coefficient `c` in `E*_0 A^i · v = c x₀`.
fn root_coefficient(rg: &RootedGraph, i: usize, mut v: Vec<BigInt>) -> BigInt {
    for _ in 0..i {
        v = adjacency_apply(rg.graph(), &v);
    }
    v.swap_remove(rg.root())
}

fn check_level(rg: &RootedGraph, i: usize) -> Result<()> {
    if i > rg.depth() {
        return Err(Error::InvalidArgument(format!("level {i} exceeds depth {}", rg.depth())));
    }
    Ok(())
}

/// Returns `(c, s)` with `E*_0 A^i E*_i A^i E*_0 x₀ = c x₀` and
/// `s = ‖E*_i A^i x₀‖²`.
pub fn eval_eq17(ops: &TOperators, i: usize) -> Result<(BigInt, BigInt)> {
    eq17_on(&ops.rg, i)
}

pub fn eq17_on(rg: &RootedGraph, i: usize) -> Result<(BigInt, BigInt)> {
    check_level(rg, i)?;
    let u = shell_walks(rg, i);
    let s = u.iter().map(|x| x * x).sum();
    let c = root_coefficient(rg, i, u);
    Ok((c, s))
}

/// Returns `c` with `E*_0 A^i E*_i A E*_i A^i E*_0 x₀ = c x₀`.
pub fn eval_eq18(ops: &TOperators, i: usize) -> Result<BigInt> {
    eq18_on(&ops.rg, i)
}

pub fn eq18_on(rg: &RootedGraph, i: usize) -> Result<BigInt> {
    check_level(rg, i)?;
    let u = shell_walks(rg, i);
    let mut v = adjacency_apply(rg.graph(), &u);
    level_mask(rg, i, &mut v);
    Ok(root_coefficient(rg, i, v))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Treeness {
    Tree,
    NotATree { witness: TreeWitness },
}

/// Tree iff the shell walk form vanishes on every level and every non-root
/// vertex has exactly one parent. The second test is needed: even cycles
/// put no edge inside a level.
pub fn treeness_check(rg: &RootedGraph) -> Treeness {
    for i in 0..=rg.depth() {
        let c = eq18_on(rg, i).expect("level within depth");
        if !c.is_zero() {
            let (u, v) = rg
                .graph()
                .edges()
                .iter()
                .copied()
                .find(|&(u, v)| rg.level_of(u) == i && rg.level_of(v) == i)
                .expect("a positive form comes from an intra-level edge");
            return Treeness::NotATree { witness: TreeWitness::IntraLevelEdge { level: i, edge: (u, v) } };
        }
    }
    match tree_witness(rg) {
        Some(witness) => Treeness::NotATree { witness },
        None => Treeness::Tree,
    }
}

/// `Â = (Σ_{j≥1} E*_j) A (Σ_{i≥1} E*_i)` and `E*_1, …, E*_D`, restricted to
/// `V̂ = ⊕_{i≥1} V*_i`.
#[derive(Clone, Debug)]
pub struct HatOperators {
    /// `vertices[k]` is the vertex of coordinate `k`, ascending.
    pub vertices: Vec<usize>,
    pub adjacency: RatMatrix,
    pub projectors: Vec<RatMatrix>,
}

impl HatOperators {
    pub fn dim(&self) -> usize {
        self.vertices.len()
    }

    pub fn generators(&self) -> Vec<RatMatrix> {
        std::iter::once(self.adjacency.clone()).chain(self.projectors.iter().cloned()).collect()
    }

    pub fn coordinate(&self, v: usize) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }
}

pub fn hat_operators(ops: &TOperators) -> Result<HatOperators> {
    if ops.depth() == 0 {
        return Err(Error::Degenerate("the hat algebra needs depth at least 1".into()));
    }
    let rg = &ops.rg;
    let vertices: Vec<usize> = (0..ops.n()).filter(|&v| v != rg.root()).collect();
    let m = vertices.len();
    let mut adjacency = RatMatrix::zeros(m, m);
    for (a, &u) in vertices.iter().enumerate() {
        for (b, &v) in vertices.iter().enumerate() {
            adjacency[(a, b)] = ops.adjacency[(u, v)].clone();
        }
    }
    let projectors = (1..=ops.depth())
        .map(|i| RatMatrix::diagonal_projector(m, (0..m).filter(|&k| rg.level_of(vertices[k]) == i)))
        .collect();
    Ok(HatOperators { vertices, adjacency, projectors })
}

/// Checks `T̂ X₁(α)̲ ≅ T̂ x` for a representative `x ∈ X₁(α)` under
/// `a X₁(α)̲ ↦ a x`: the map is well defined on every generated word, it
/// is a bijection onto `T̂ x`, and the restricted generators agree as
/// matrices in corresponding bases.
pub fn verify_eq20(t: &RootedTree, alpha: usize, cap: usize) -> Result<bool> {
    let n = t.n();
    if n > cap {
        return Err(Error::SizeGuard { n, cap });
    }
    let ops = build_operators(t.rooted_graph());
    let hat = hat_operators(&ops)?;
    let cp = level_classes(t);
    let class = cp
        .level(1)
        .get(alpha)
        .ok_or_else(|| Error::InvalidArgument(format!("no level-1 class with label {alpha}")))?;
    let m = hat.dim();
    let mut sum = vec![Rational::zero(); m];
    for &x in class {
        sum[hat.coordinate(x).expect("level-1 vertex")] = Rational::one();
    }
    let rep = unit_vector(m, hat.coordinate(class[0]).expect("level-1 vertex"));
    let gens = hat.generators();

    let mut left = Echelon::tracking(m);
    let mut pairs: Vec<(RatVector, RatVector)> = Vec::new();
    left.insert(sum.clone());
    pairs.push((sum, rep.clone()));
    let mut next = 0;
    while next < pairs.len() {
        for g in &gens {
            let u = g.mul_vec(&pairs[next].0);
            let v = g.mul_vec(&pairs[next].1);
            match left.insert(u.clone()) {
                Insertion::Added(_) => pairs.push((u, v)),
                Insertion::Dependent(coeffs) => {
                    let coeffs = coeffs.expect("tracking echelon");
                    let mut combo = vec![Rational::zero(); m];
                    for (c, (_, pv)) in coeffs.iter().zip(&pairs) {
                        for (acc, x) in combo.iter_mut().zip(pv) {
                            if !x.is_zero() {
                                *acc = &*acc + &(c * x);
                            }
                        }
                    }
                    if combo != v {
                        return Ok(false);
                    }
                }
            }
        }
        next += 1;
    }

    let mut right = Echelon::tracking(m);
    for (_, v) in &pairs {
        if !matches!(right.insert(v.clone()), Insertion::Added(_)) {
            return Ok(false);
        }
    }
    let target = span_closure(m, &[rep], &gens);
    if target.dim() != pairs.len() {
        return Ok(false);
    }
    for g in &gens {
        for (u, v) in &pairs {
            let lu = left.solve(&g.mul_vec(u));
            let rv = right.solve(&g.mul_vec(v));
            if lu.is_none() || lu != rv {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Span of the orbit sums, for comparisons against `W₀`.
pub fn orbit_span(t: &RootedTree) -> SubspaceBasis {
    let cp = level_classes(t);
    let op = crate::orbits::orbit_partition(t, &cp);
    row_basis(crate::orbits::orbit_sums(&op, t.n()))
}
