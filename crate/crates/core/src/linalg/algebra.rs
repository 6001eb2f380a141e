use std::collections::VecDeque;

use super::{Echelon, Insertion, RatMatrix, SubspaceBasis};
use crate::error::{Error, Result};

/// Default bound on the matrix size accepted by algebra closures. Memory is
/// `Θ(dim · n²)` and `dim` can reach `n²`.
pub const DEFAULT_CAP: usize = 32;

/// Spanning basis of the unital matrix algebra generated by `generators`.
///
/// Elements are echelonized as row-major `n²`-vectors. The generators are
/// kept alongside: a matrix commutes with the whole algebra exactly when it
/// commutes with each generator.
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    n: usize,
    generators: Vec<RatMatrix>,
    span: SubspaceBasis,
}

impl AlgebraBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn generators(&self) -> &[RatMatrix] {
        &self.generators
    }

    /// The reduced basis, reshaped into matrices.
    pub fn basis(&self) -> Vec<RatMatrix> {
        self.span.basis().iter().map(|v| RatMatrix::from_flat(self.n, v.clone())).collect()
    }

    pub fn contains(&self, m: &RatMatrix) -> bool {
        assert_eq!((m.rows(), m.cols()), (self.n, self.n), "shape mismatch");
        self.span.contains(m.as_flat())
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.n * self.n
    }
}

/// Closes `{I} ∪ generators` under left multiplication by the generators.
///
/// Every word `g₁g₂…g_k` is `g₁ · (g₂…g_k)`, so left products alone reach the
/// whole algebra; right-closure follows and is asserted in tests.
pub fn algebra_closure(n: usize, generators: &[RatMatrix], cap: usize) -> Result<AlgebraBasis> {
    if n > cap {
        return Err(Error::SizeGuard { n, cap });
    }
    for g in generators {
        assert!(g.is_square() && g.rows() == n, "generator shape mismatch");
    }
    let mut e = Echelon::new(n * n);
    let mut queue = VecDeque::new();
    let offer = |m: RatMatrix, e: &mut Echelon, queue: &mut VecDeque<RatMatrix>| {
        if let Insertion::Added(_) = e.insert(m.as_flat().to_vec()) {
            queue.push_back(RatMatrix::from_flat(n, e.newest().expect("just added").to_vec()));
        }
    };
    offer(RatMatrix::identity(n), &mut e, &mut queue);
    for g in generators {
        offer(g.clone(), &mut e, &mut queue);
    }
    while let Some(m) = queue.pop_front() {
        if e.is_full() {
            break;
        }
        for g in generators {
            offer(g.mul(&m), &mut e, &mut queue);
        }
    }
    Ok(AlgebraBasis { n, generators: generators.to_vec(), span: SubspaceBasis::from_echelon(&e) })
}

/// The unital algebra generated by `a` and the coordinate projectors of the
/// partition `blocks` (each block sorted ascending).
///
/// The projectors sum to `I`, so the algebra is the direct sum of its blocks
/// `E_i T E_j`, and block `(i, j)` is spanned by `δ_ij E_i` together with the
/// products `a_{i k₁} a_{k₁ k₂} ⋯ a_{k_m j}` of blocks of `a`. Each block is
/// closed separately under left multiplication, which keeps every echelon at
/// `|block_i| · |block_j|` coordinates instead of `n²`.
///
/// Each block column is first closed modulo a prime. Vectors independent
/// mod p are independent over Q, so a column that fills up mod p is the full
/// column over Q and needs no rational arithmetic; any other column is
/// closed exactly.
pub fn block_algebra_closure(a: &RatMatrix, blocks: &[Vec<usize>], cap: usize) -> Result<AlgebraBasis> {
    let n = a.rows();
    if n > cap {
        return Err(Error::SizeGuard { n, cap });
    }
    assert!(a.is_square(), "generator shape mismatch");
    assert_eq!(blocks.iter().map(Vec::len).sum::<usize>(), n, "blocks must partition the coordinates");
    let sub = |rows: &[usize], cols: &[usize]| {
        RatMatrix::from_rows(rows.iter().map(|&r| cols.iter().map(|&c| a[(r, c)].clone()).collect()).collect())
    };
    let m = blocks.len();
    let pieces: Vec<Vec<Option<RatMatrix>>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|k| Some(sub(&blocks[i], &blocks[k])).filter(|b| !b.is_zero()))
                .collect()
        })
        .collect();

    let modular: Option<Vec<Vec<Option<ModMatrix>>>> = pieces
        .iter()
        .map(|row| row.iter().map(|p| match p { Some(p) => ModMatrix::reduce(p).map(Some), None => Some(None) }).collect::<Option<Vec<_>>>())
        .collect();

    let mut rows = Vec::new();
    for j in 0..m {
        let width = blocks[j].len();
        let full = modular.as_ref().is_some_and(|mp| column_fills_mod_p(mp, blocks, j));
        let column: Vec<SubspaceBasis> = if full {
            (0..m).map(|i| SubspaceBasis::full(blocks[i].len() * width)).collect()
        } else {
            exact_column(&pieces, blocks, j)
        };
        for (i, span) in column.into_iter().enumerate() {
            for local in span.basis() {
                let mut global = super::zero_vector(n * n);
                for (idx, x) in local.iter().enumerate() {
                    global[blocks[i][idx / width] * n + blocks[j][idx % width]] = x.clone();
                }
                rows.push(global);
            }
        }
    }
    let mut generators = vec![a.clone()];
    generators.extend(blocks.iter().map(|b| RatMatrix::diagonal_projector(n, b.iter().copied())));
    Ok(AlgebraBasis { n, generators, span: SubspaceBasis::from_reduced_rows(n * n, rows) })
}

fn exact_column(pieces: &[Vec<Option<RatMatrix>>], blocks: &[Vec<usize>], j: usize) -> Vec<SubspaceBasis> {
    let m = blocks.len();
    let mut echelons: Vec<Echelon> = (0..m).map(|i| Echelon::new(blocks[i].len() * blocks[j].len())).collect();
    let mut queue = VecDeque::new();
    let start = RatMatrix::identity(blocks[j].len());
    echelons[j].insert(start.as_flat().to_vec());
    queue.push_back((j, start));
    while let Some((k, x)) = queue.pop_front() {
        for i in 0..m {
            let Some(piece) = &pieces[i][k] else { continue };
            if echelons[i].is_full() {
                continue;
            }
            let y = piece.mul(&x);
            if let Insertion::Added(_) = echelons[i].insert(y.as_flat().to_vec()) {
                let row = echelons[i].newest().expect("just added").to_vec();
                queue.push_back((i, RatMatrix::from_flat_shape(y.rows(), y.cols(), row)));
            }
        }
    }
    echelons.iter().map(SubspaceBasis::from_echelon).collect()
}

const PRIME: u64 = 2_147_483_647;

fn inv_mod(a: u64) -> u64 {
    // Fermat: a^(p-2)
    let (mut base, mut exp, mut acc) = (a % PRIME, PRIME - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % PRIME;
        }
        base = base * base % PRIME;
        exp >>= 1;
    }
    acc
}

#[derive(Clone)]
struct ModMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl ModMatrix {
    /// Reduction mod p; `None` unless every entry is an integer.
    fn reduce(m: &RatMatrix) -> Option<ModMatrix> {
        let entries = m
            .as_flat()
            .iter()
            .map(|x| x.to_i64().map(|v| v.rem_euclid(PRIME as i64) as u64))
            .collect::<Option<Vec<_>>>()?;
        Some(ModMatrix { rows: m.rows(), cols: m.cols(), entries })
    }

    fn mul(&self, rhs: &ModMatrix) -> ModMatrix {
        let mut entries = vec![0u64; self.rows * rhs.cols];
        for r in 0..self.rows {
            for t in 0..self.cols {
                let a = self.entries[r * self.cols + t];
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let e = &mut entries[r * rhs.cols + c];
                    *e = (*e + a * rhs.entries[t * rhs.cols + c]) % PRIME;
                }
            }
        }
        ModMatrix { rows: self.rows, cols: rhs.cols, entries }
    }
}

/// Fully reduced echelon form over `Z/p`.
struct ModEchelon {
    len: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl ModEchelon {
    fn new(len: usize) -> Self {
        ModEchelon { len, rows: Vec::new() }
    }

    fn is_full(&self) -> bool {
        self.rows.len() == self.len
    }

    fn insert(&mut self, mut v: Vec<u64>) -> Option<&[u64]> {
        for (p, row) in &self.rows {
            let c = v[*p];
            if c != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = (*x + (PRIME - c) * r) % PRIME;
                }
            }
        }
        let pivot = v.iter().position(|&x| x != 0)?;
        let inv = inv_mod(v[pivot]);
        for x in v.iter_mut() {
            *x = *x * inv % PRIME;
        }
        for (_, row) in self.rows.iter_mut() {
            let c = row[pivot];
            if c != 0 {
                for (r, x) in row.iter_mut().zip(&v) {
                    *r = (*r + (PRIME - c) * x) % PRIME;
                }
            }
        }
        self.rows.push((pivot, v));
        self.rows.last().map(|(_, r)| r.as_slice())
    }
}

/// Whether every block of column `j` is the full matrix space mod p.
fn column_fills_mod_p(pieces: &[Vec<Option<ModMatrix>>], blocks: &[Vec<usize>], j: usize) -> bool {
    let m = blocks.len();
    let width = blocks[j].len();
    let mut echelons: Vec<ModEchelon> = (0..m).map(|i| ModEchelon::new(blocks[i].len() * width)).collect();
    let mut start = ModMatrix { rows: width, cols: width, entries: vec![0; width * width] };
    for k in 0..width {
        start.entries[k * width + k] = 1;
    }
    echelons[j].insert(start.entries.clone());
    let mut queue = VecDeque::from([(j, start)]);
    while let Some((k, x)) = queue.pop_front() {
        if echelons.iter().all(ModEchelon::is_full) {
            return true;
        }
        for i in 0..m {
            let Some(piece) = &pieces[i][k] else { continue };
            if echelons[i].is_full() {
                continue;
            }
            let y = piece.mul(&x);
            if let Some(row) = echelons[i].insert(y.entries) {
                queue.push_back((i, ModMatrix { rows: y.rows, cols: y.cols, entries: row.to_vec() }));
            }
        }
    }
    echelons.iter().all(ModEchelon::is_full)
}

/// Dimension of the commutant of the algebra acting on `carrier`.
///
/// Each generator is restricted to the carrier and the linear system
/// `XM = MX` is solved exactly for the `k × k` unknown `X`. The carrier is an
/// irreducible module exactly when the answer is 1.
pub fn commutant_dim(algebra: &AlgebraBasis, carrier: &SubspaceBasis) -> Result<usize> {
    assert_eq!(carrier.ambient_dim(), algebra.n(), "carrier lives in a different space");
    let k = carrier.dim();
    let restricted: Vec<RatMatrix> =
        algebra.generators().iter().map(|g| carrier.restrict(g)).collect::<Result<_>>()?;
    Ok(commutant_dim_of(k, &restricted))
}

/// Dimension of `{X : XM = MX for every M in mats}` for `k × k` matrices.
pub(crate) fn commutant_dim_of(k: usize, mats: &[RatMatrix]) -> usize {
    let unknowns = k * k;
    let mut e = Echelon::new(unknowns);
    // (XM - MX)[r][c] = Σ_t X[r][t] M[t][c] - Σ_t M[r][t] X[t][c]
    'outer: for m in mats {
        for r in 0..k {
            for c in 0..k {
                if e.is_full() {
                    break 'outer;
                }
                let mut eq = vec![super::Rational::zero(); unknowns];
                for t in 0..k {
                    let a = &m[(t, c)];
                    if !a.is_zero() {
                        eq[r * k + t] = &eq[r * k + t] + a;
                    }
                    let b = &m[(r, t)];
                    if !b.is_zero() {
                        eq[t * k + c] = &eq[t * k + c] - b;
                    }
                }
                e.insert(eq);
            }
        }
    }
    unknowns - e.rank()
}
