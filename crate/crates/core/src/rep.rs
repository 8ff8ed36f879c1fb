//! Finite-dimensional representations of bound quivers over `F_p`.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::algebra::{BoundQuiver, Relation};
use crate::error::{Error, Result};
use crate::field::{Mat, PrimeField};

/// Default cap on the total dimension for brute-force submodule enumeration.
pub const DEFAULT_SUBMODULE_BUDGET: usize = 12;

/// A representation: a vector space per vertex and a matrix per arrow, with
/// the matrix of `a: s -> t` of shape `dims[t] x dims[s]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    algebra: Arc<BoundQuiver>,
    field: PrimeField,
    dims: Vec<usize>,
    mats: Vec<Mat>,
}

impl Representation {
    /// Builds a representation and checks shapes and every relation.
    pub fn new(algebra: Arc<BoundQuiver>, field: PrimeField, dims: Vec<usize>, mats: Vec<Mat>) -> Result<Self> {
        let rep = Self::unchecked(algebra, field, dims, mats)?;
        rep.check_relations()?;
        Ok(rep)
    }

    /// Shape-checked only; the relations are not evaluated.
    pub fn unchecked(algebra: Arc<BoundQuiver>, field: PrimeField, dims: Vec<usize>, mats: Vec<Mat>) -> Result<Self> {
        let q = algebra.quiver();
        if dims.len() != q.vertex_count() {
            return Err(Error::ShapeMismatch(format!(
                "{} dimensions for {} vertices",
                dims.len(),
                q.vertex_count()
            )));
        }
        if mats.len() != q.arrows().len() {
            return Err(Error::ShapeMismatch(format!("{} matrices for {} arrows", mats.len(), q.arrows().len())));
        }
        for (a, m) in q.arrows().iter().zip(&mats) {
            if m.rows() != dims[a.target] || m.cols() != dims[a.source] {
                return Err(Error::ShapeMismatch(format!(
                    "arrow {:?} needs a {}x{} matrix, got {}x{}",
                    a.id,
                    dims[a.target],
                    dims[a.source],
                    m.rows(),
                    m.cols()
                )));
            }
            if m.to_rows().iter().flatten().any(|&v| v >= field.p()) {
                return Err(Error::ShapeMismatch(format!("arrow {:?} has entries outside F_{}", a.id, field.p())));
            }
        }
        Ok(Self { algebra, field, dims, mats })
    }

    pub fn zero(algebra: Arc<BoundQuiver>, field: PrimeField) -> Self {
        let n = algebra.vertex_count();
        let mats = algebra.quiver().arrows().iter().map(|_| Mat::zeros(0, 0)).collect();
        Self { algebra, field, dims: vec![0; n], mats }
    }

    pub fn algebra(&self) -> &Arc<BoundQuiver> {
        &self.algebra
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_vector(&self) -> Vec<i64> {
        self.dims.iter().map(|&d| d as i64).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn mats(&self) -> &[Mat] {
        &self.mats
    }

    pub fn mat(&self, arrow: usize) -> &Mat {
        &self.mats[arrow]
    }

    /// Matrix of a composable word (functional order).
    pub fn eval_word(&self, word: &[usize]) -> Mat {
        let q = self.algebra.quiver();
        let src = q.arrow(*word.last().expect("empty word")).source;
        let mut acc = Mat::identity(self.dims[src]);
        for &a in word.iter().rev() {
            acc = self.field.matmul(&self.mats[a], &acc);
        }
        acc
    }

    pub fn eval_relation(&self, r: &Relation) -> Mat {
        let f = self.field;
        let mut acc: Option<Mat> = None;
        for (c, w) in r.terms() {
            let term = f.scale(f.reduce(*c), &self.eval_word(w));
            acc = Some(match acc {
                None => term,
                Some(m) => f.matadd(&m, &term),
            });
        }
        acc.unwrap_or_else(|| Mat::zeros(0, 0))
    }

    pub fn check_relations(&self) -> Result<()> {
        for r in self.algebra.relations() {
            if !self.eval_relation(r).is_zero() {
                return Err(Error::RelationViolated { relation: r.display(self.algebra.quiver()) });
            }
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        if self.algebra != other.algebra || self.field != other.field {
            return Err(Error::ShapeMismatch("direct sum of modules over different algebras".into()));
        }
        let q = self.algebra.quiver();
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let mats = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let (m, n) = (&self.mats[i], &other.mats[i]);
                let mut out = Mat::zeros(dims[a.target], dims[a.source]);
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        out.set(r, c, m.get(r, c));
                    }
                }
                for r in 0..n.rows() {
                    for c in 0..n.cols() {
                        out.set(m.rows() + r, m.cols() + c, n.get(r, c));
                    }
                }
                out
            })
            .collect();
        Ok(Representation { algebra: self.algebra.clone(), field: self.field, dims, mats })
    }

    /// Conjugates by random invertible base changes at every vertex; the
    /// result is isomorphic to `self`.
    pub fn rebase(&self, changes: &[Mat]) -> Result<Representation> {
        let f = self.field;
        for (v, g) in changes.iter().enumerate() {
            if g.rows() != self.dims[v] || !f.is_invertible(g) {
                return Err(Error::ShapeMismatch(format!("base change at vertex {v} is not invertible")));
            }
        }
        let q = self.algebra.quiver();
        let inverses: Vec<Mat> = changes
            .iter()
            .map(|g| f.solve(g, &Mat::identity(g.rows())).expect("invertible"))
            .collect();
        let mats = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| f.matmul(&f.matmul(&changes[a.target], &self.mats[i]), &inverses[a.source]))
            .collect();
        Ok(Representation { algebra: self.algebra.clone(), field: f, dims: self.dims.clone(), mats })
    }
}

/// One-dimensional at `i`, zero elsewhere.
pub fn simple(algebra: &Arc<BoundQuiver>, field: PrimeField, i: usize) -> Result<Representation> {
    let n = algebra.vertex_count();
    if i >= n {
        return Err(Error::VertexOutOfRange { index: i, n });
    }
    let mut dims = vec![0; n];
    dims[i] = 1;
    let mats = algebra
        .quiver()
        .arrows()
        .iter()
        .map(|a| Mat::zeros(dims[a.target], dims[a.source]))
        .collect();
    Representation::new(algebra.clone(), field, dims, mats)
}

/// Indecomposable projective at `i`: paths starting at `i` modulo the relations.
pub fn projective(algebra: &Arc<BoundQuiver>, field: PrimeField, i: usize) -> Result<Representation> {
    let n = algebra.vertex_count();
    if i >= n {
        return Err(Error::VertexOutOfRange { index: i, n });
    }
    let (dims, mats) = path_module(algebra, field, i)?;
    Representation::new(algebra.clone(), field, dims, mats)
}

/// Indecomposable injective at `i`, the dual of the right projective at `i`.
pub fn injective(algebra: &Arc<BoundQuiver>, field: PrimeField, i: usize) -> Result<Representation> {
    let n = algebra.vertex_count();
    if i >= n {
        return Err(Error::VertexOutOfRange { index: i, n });
    }
    let op = Arc::new(algebra.opposite());
    let (dims, mats) = path_module(&op, field, i)?;
    let mats = mats.iter().map(Mat::transpose).collect();
    Representation::new(algebra.clone(), field, dims, mats)
}

fn path_module(algebra: &BoundQuiver, field: PrimeField, i: usize) -> Result<(Vec<usize>, Vec<Mat>)> {
    let q = algebra.quiver();
    let pq = algebra.paths_from(i, field)?;
    let words = pq.basis_words();
    let n = q.vertex_count();
    // local index of every basis word at its target vertex
    let mut dims = vec![0usize; n];
    let mut local = Vec::with_capacity(words.len());
    for w in &words {
        let v = pq.word_target(q, w);
        local.push(dims[v]);
        dims[v] += 1;
    }
    let mut mats: Vec<Mat> = q.arrows().iter().map(|a| Mat::zeros(dims[a.target], dims[a.source])).collect();
    for (col, w) in words.iter().enumerate() {
        let v = pq.word_target(q, w);
        for a in q.arrows_from(v) {
            let mut aw = vec![a];
            aw.extend_from_slice(w);
            let coords = pq.reduce(&aw);
            for (b, &c) in coords.iter().enumerate() {
                if c != 0 {
                    mats[a].set(local[b], local[col], c);
                }
            }
        }
    }
    Ok((dims, mats))
}

fn same_algebra(m: &Representation, n: &Representation) -> Result<()> {
    if m.field != n.field || !(Arc::ptr_eq(&m.algebra, &n.algebra) || m.algebra == n.algebra) {
        return Err(Error::ShapeMismatch("modules over different algebras or fields".into()));
    }
    Ok(())
}

/// Linear system whose solutions are the morphisms `M -> N`, with the
/// per-vertex block offsets of the unknowns.
fn hom_system(m: &Representation, n: &Representation) -> (Mat, Vec<usize>) {
    let f = m.field;
    let q = m.algebra.quiver();
    let mut offsets = Vec::with_capacity(m.dims.len());
    let mut unknowns = 0;
    for v in 0..m.dims.len() {
        offsets.push(unknowns);
        unknowns += n.dims[v] * m.dims[v];
    }
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (ai, a) in q.arrows().iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let (ma, na) = (&m.mats[ai], &n.mats[ai]);
        // (f_t M_a - N_a f_s)[r, c] = 0
        for r in 0..n.dims[t] {
            for c in 0..m.dims[s] {
                let mut row = vec![0u32; unknowns];
                for l in 0..m.dims[t] {
                    let idx = offsets[t] + r * m.dims[t] + l;
                    row[idx] = f.add(row[idx], ma.get(l, c));
                }
                for l in 0..n.dims[s] {
                    let idx = offsets[s] + l * m.dims[s] + c;
                    row[idx] = f.sub(row[idx], na.get(r, l));
                }
                rows.push(row);
            }
        }
    }
    (Mat::from_rows(&rows, unknowns), offsets)
}

/// `dim Hom(M, N)` over `F_p`.
pub fn hom_dim(m: &Representation, n: &Representation) -> Result<usize> {
    same_algebra(m, n)?;
    let (sys, _) = hom_system(m, n);
    Ok(sys.cols() - m.field.rank(&sys))
}

/// A basis of `Hom(M, N)`; each morphism is given by its per-vertex matrices.
pub fn hom_basis(m: &Representation, n: &Representation) -> Result<Vec<Vec<Mat>>> {
    same_algebra(m, n)?;
    let (sys, offsets) = hom_system(m, n);
    let ns = m.field.nullspace(&sys);
    let mut out = Vec::with_capacity(ns.cols());
    for b in 0..ns.cols() {
        let maps = (0..m.dims.len())
            .map(|v| {
                let mut fv = Mat::zeros(n.dims[v], m.dims[v]);
                for r in 0..n.dims[v] {
                    for c in 0..m.dims[v] {
                        fv.set(r, c, ns.get(offsets[v] + r * m.dims[v] + c, b));
                    }
                }
                fv
            })
            .collect();
        out.push(maps);
    }
    Ok(out)
}

/// One-dimensional endomorphism ring.
pub fn is_schurian(m: &Representation) -> bool {
    m.total_dim() > 0 && hom_dim(m, m).map(|d| d == 1).unwrap_or(false)
}

/// Isomorphism test for an indecomposable `m` (local endomorphism ring):
/// `m ≅ n` iff some composite `g ∘ f` of basis morphisms is invertible.
pub fn is_isomorphic(m: &Representation, n: &Representation) -> Result<bool> {
    if m.dims != n.dims {
        return Ok(false);
    }
    let forward = hom_basis(m, n)?;
    if forward.is_empty() {
        return Ok(false);
    }
    let backward = hom_basis(n, m)?;
    let f = m.field;
    for fm in &forward {
        for gm in &backward {
            let invertible = (0..m.dims.len()).all(|v| f.is_invertible(&f.matmul(&gm[v], &fm[v])));
            if invertible {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// An arrow-stable tuple of subspaces, each given by a column basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submodule {
    pub bases: Vec<Mat>,
}

impl Submodule {
    pub fn dim_vector(&self) -> Vec<i64> {
        self.bases.iter().map(|b| b.cols() as i64).collect()
    }

    pub fn contains(&self, other: &Submodule, field: PrimeField) -> bool {
        self.bases.iter().zip(&other.bases).all(|(sup, sub)| field.col_contained(sub, sup))
    }
}

/// All subspaces of `F_p^d`, each as a `d x r` column basis in reduced form.
fn all_subspaces(field: PrimeField, d: usize) -> Vec<Mat> {
    let p = field.p();
    let mut out = Vec::new();
    for mask in 0u32..(1 << d) {
        let pivots: Vec<usize> = (0..d).filter(|&c| mask & (1 << c) != 0).collect();
        let r = pivots.len();
        // free positions: row k, columns after pivot k that are not pivots
        let free: Vec<(usize, usize)> = (0..r)
            .flat_map(|k| ((pivots[k] + 1)..d).filter(|c| !pivots.contains(c)).map(move |c| (k, c)))
            .collect();
        let combos = (p as u64).pow(free.len() as u32);
        for code in 0..combos {
            let mut rows = Mat::zeros(r, d);
            for (k, &pc) in pivots.iter().enumerate() {
                rows.set(k, pc, 1);
            }
            let mut x = code;
            for &(k, c) in &free {
                rows.set(k, c, (x % p as u64) as u32);
                x /= p as u64;
            }
            out.push(rows.transpose());
        }
    }
    out
}

/// Every submodule of `M`, by exhaustive search over subspace tuples.
pub fn submodules(m: &Representation, budget: usize) -> Result<Vec<Submodule>> {
    let total = m.total_dim();
    if total > budget {
        return Err(Error::SubmoduleBudget { total, limit: budget });
    }
    let f = m.field;
    let q = m.algebra.quiver();
    let n = m.dims.len();
    let choices: Vec<Vec<Mat>> = m.dims.iter().map(|&d| all_subspaces(f, d)).collect();
    let mut out = Vec::new();
    let mut current: Vec<Mat> = Vec::with_capacity(n);
    fn stable(m: &Representation, q: &crate::quiver::Quiver, cur: &[Mat], v: usize) -> bool {
        let f = m.field;
        q.arrows().iter().enumerate().all(|(ai, a)| {
            // only arrows whose endpoints are both assigned and one of them is v
            if (a.source != v && a.target != v) || a.source > v || a.target > v {
                return true;
            }
            let image = f.matmul(&m.mats[ai], &cur[a.source]);
            f.col_contained(&image, &cur[a.target])
        })
    }
    fn rec(
        m: &Representation,
        q: &crate::quiver::Quiver,
        choices: &[Vec<Mat>],
        cur: &mut Vec<Mat>,
        out: &mut Vec<Submodule>,
    ) {
        let v = cur.len();
        if v == choices.len() {
            out.push(Submodule { bases: cur.clone() });
            return;
        }
        for u in &choices[v] {
            cur.push(u.clone());
            if stable(m, q, cur, v) {
                rec(m, q, choices, cur, out);
            }
            cur.pop();
        }
    }
    rec(m, q, &choices, &mut current, &mut out);
    Ok(out)
}

/// `{ dim M' : M' ⊆ M }`, including `0` and `dim M`.
pub fn submodule_dimvecs(m: &Representation, budget: usize) -> Result<BTreeSet<Vec<i64>>> {
    Ok(submodules(m, budget)?.iter().map(Submodule::dim_vector).collect())
}
