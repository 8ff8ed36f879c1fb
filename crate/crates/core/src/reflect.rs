//! Reflection at a vertex: the dimension-vector involution `phi_k` and the
//! equivalence `psi_k` between `S_k^perp` over `J(Q, W)` and `^perp S_k'` over
//! the mutated Jacobian algebra, with its inverse and iterates.

use std::sync::Arc;

use crate::algebra::BoundQuiver;
use crate::catalog::{Catalog, CatalogEntry};
use crate::error::{Error, Result};
use crate::field::{Mat, PrimeField};
use crate::qp::{QpMutation, QuiverWithPotential};
use crate::quiver::{Quiver, Word};
use crate::rep::{is_isomorphic, simple, Representation};

/// `y_i = x_i` for `i != k` and `y_k = -x_k + sum over arrows k -> j of x_j`.
pub fn phi_k(x: &[i64], q: &Quiver, k: usize) -> Vec<i64> {
    let mut y = x.to_vec();
    y[k] = -x[k] + q.arrows_from(k).map(|a| x[q.arrow(a).target]).sum::<i64>();
    y
}

/// The matrix of [`phi_k`] acting on column vectors.
pub fn phi_matrix(q: &Quiver, k: usize) -> Vec<Vec<i64>> {
    let n = q.vertex_count();
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    m[k][k] = -1;
    for a in q.arrows_from(k) {
        m[k][q.arrow(a).target] += 1;
    }
    m
}

fn int_matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter().map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect()).collect()
}

pub fn int_identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn apply_int(m: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

/// The data of one mutation step needed to move representations across it.
#[derive(Clone, Debug)]
pub struct ReflectionContext {
    mutation: QpMutation,
    source: Arc<BoundQuiver>,
    target: Arc<BoundQuiver>,
    field: PrimeField,
}

impl ReflectionContext {
    pub fn new(qp: &QuiverWithPotential, k: usize, field: PrimeField) -> Result<Self> {
        let mutation = QpMutation::new(qp, k)?;
        let source = Arc::new(qp.algebra()?);
        let target = Arc::new(mutation.target.algebra()?);
        Ok(Self { mutation, source, target, field })
    }

    pub fn k(&self) -> usize {
        self.mutation.k
    }

    pub fn mutation(&self) -> &QpMutation {
        &self.mutation
    }

    pub fn source_qp(&self) -> &QuiverWithPotential {
        &self.mutation.source
    }

    pub fn target_qp(&self) -> &QuiverWithPotential {
        &self.mutation.target
    }

    pub fn source(&self) -> &Arc<BoundQuiver> {
        &self.source
    }

    pub fn target(&self) -> &Arc<BoundQuiver> {
        &self.target
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Vertices `i` with an arrow `i -> k`.
    pub fn i_set(&self) -> Vec<usize> {
        self.mutation.alphas.iter().map(|a| a.vertex).collect()
    }

    /// Vertices `j` with an arrow `k -> j`.
    pub fn j_set(&self) -> Vec<usize> {
        self.mutation.betas.iter().map(|b| b.vertex).collect()
    }

    /// Pairs `(i, j)` closed by an arrow `j -> i`.
    pub fn p_pairs(&self) -> Vec<(usize, usize)> {
        self.mutation.triangles.iter().map(|t| (t.i, t.j)).collect()
    }

    /// The remaining pairs of `I x J`.
    pub fn p_prime_pairs(&self) -> Vec<(usize, usize)> {
        self.mutation.open.iter().map(|o| (o.i, o.j)).collect()
    }

    pub fn phi(&self, x: &[i64]) -> Vec<i64> {
        phi_k(x, self.mutation.source.quiver(), self.k())
    }

    fn alpha_old(&self, i: usize) -> usize {
        self.mutation.alphas.iter().find(|a| a.vertex == i).expect("alpha").old
    }

    fn alpha_new(&self, i: usize) -> usize {
        self.mutation.alphas.iter().find(|a| a.vertex == i).expect("alpha").new
    }

    fn beta_old(&self, j: usize) -> usize {
        self.mutation.betas.iter().find(|b| b.vertex == j).expect("beta").old
    }

    fn beta_new(&self, j: usize) -> usize {
        self.mutation.betas.iter().find(|b| b.vertex == j).expect("beta").new
    }

    /// `sum c * word`, evaluated on `rep`; words are in source arrow indices and
    /// translated through the kept-arrow map when `rep` lives on the target.
    fn eval_sum(&self, rep: &Representation, terms: &[(i64, Word)], on_target: bool, from: usize, to: usize) -> Mat {
        let f = self.field;
        let mut acc = Mat::zeros(rep.dims()[to], rep.dims()[from]);
        for (c, w) in terms {
            let word: Word = if on_target {
                w.iter().map(|&a| self.mutation.kept[a].expect("kept arrow")).collect()
            } else {
                w.clone()
            };
            acc = f.matadd(&acc, &f.scale(f.reduce(*c), &rep.eval_word(&word)));
        }
        acc
    }

    /// The required value of `alpha_i* beta_j*: X_j -> X_i`: `c_p gamma_p` on `P`,
    /// `-G_ij` on `P'`, evaluated on a source representation.
    fn alpha_beta_star(&self, x: &Representation, i: usize, j: usize) -> Mat {
        let f = self.field;
        if let Some(t) = self.mutation.triangles.iter().find(|t| t.i == i && t.j == j) {
            f.scale(f.reduce(t.sign), x.mat(t.gamma))
        } else {
            let o = self.mutation.open.iter().find(|o| o.i == i && o.j == j).expect("pair");
            let g = self.eval_sum(x, &o.g, false, j, i);
            f.scale(f.reduce(-1), &g)
        }
    }

    /// The required value of `beta_j alpha_i: X_i -> X_j` read off a target
    /// representation: `gamma*_ij` on `P'`, `-F~_ij` on `P`.
    fn beta_alpha(&self, y: &Representation, i: usize, j: usize) -> Mat {
        let f = self.field;
        if let Some(t) = self.mutation.triangles.iter().find(|t| t.i == i && t.j == j) {
            f.scale(f.reduce(-1), &self.eval_sum(y, &t.f, true, i, j))
        } else {
            let o = self.mutation.open.iter().find(|o| o.i == i && o.j == j).expect("pair");
            y.mat(o.gamma_star).clone()
        }
    }

    fn check_source(&self, x: &Representation) -> Result<()> {
        if x.algebra().as_ref() != self.source.as_ref() || x.field() != self.field {
            return Err(Error::ShapeMismatch("representation is not over the source algebra".into()));
        }
        Ok(())
    }

    fn check_target(&self, y: &Representation) -> Result<()> {
        if y.algebra().as_ref() != self.target.as_ref() || y.field() != self.field {
            return Err(Error::ShapeMismatch("representation is not over the mutated algebra".into()));
        }
        Ok(())
    }

    /// Fills in the arrows that `psi` and its mirror copy unchanged from `x`, plus
    /// `gamma*_ij = beta_j alpha_i` for the open pairs.
    fn common_target_mats(&self, x: &Representation) -> Vec<Option<Mat>> {
        let f = self.field;
        let mut mats: Vec<Option<Mat>> = vec![None; self.target.quiver().arrows().len()];
        for (old, new) in self.mutation.kept.iter().enumerate() {
            if let Some(new) = new {
                mats[*new] = Some(x.mat(old).clone());
            }
        }
        for o in &self.mutation.open {
            mats[o.gamma_star] = Some(f.matmul(x.mat(self.beta_old(o.j)), x.mat(self.alpha_old(o.i))));
        }
        mats
    }

    /// `psi_k` on an object of `S_k^perp`: `Y_k` is the cokernel of `X_k -> sum X_j`.
    pub fn psi(&self, x: &Representation) -> Result<Representation> {
        self.check_source(x)?;
        let f = self.field;
        let k = self.k();
        let dk = x.dims()[k];
        let js = self.j_set();
        let blocks: Vec<Mat> = js.iter().map(|&j| x.mat(self.beta_old(j)).clone()).collect();
        let big = Mat::vstack_all(&blocks, dk);
        if f.rank(&big) != dk {
            return Err(Error::Precondition(format!(
                "Hom(S_{}, X) != 0: the maps out of vertex {} are not jointly injective",
                self.source.quiver().label(k),
                self.source.quiver().label(k)
            )));
        }
        let pi = f.left_nullspace(&big);
        let new_dk = pi.rows();
        let mut offsets = Vec::with_capacity(js.len());
        let mut off = 0;
        for &j in &js {
            offsets.push(off);
            off += x.dims()[j];
        }
        let section = f.solve(&pi, &Mat::identity(new_dk)).expect("cokernel projection is surjective");
        let mut mats = self.common_target_mats(x);
        for (b, &j) in js.iter().enumerate() {
            mats[self.beta_new(j)] = Some(pi.col_block(offsets[b], x.dims()[j]));
        }
        for i in self.i_set() {
            let rblocks: Vec<Mat> = js.iter().map(|&j| self.alpha_beta_star(x, i, j)).collect();
            let r = Mat::hstack_all(&rblocks, x.dims()[i]);
            if !f.matmul(&r, &big).is_zero() {
                return Err(Error::RelationViolated {
                    relation: format!("derivative at the arrows into {}", self.source.quiver().label(i)),
                });
            }
            mats[self.alpha_new(i)] = Some(f.matmul(&r, &section));
        }
        let mut dims = x.dims().to_vec();
        dims[k] = new_dk;
        Representation::new(self.target.clone(), f, dims, mats.into_iter().map(|m| m.expect("every arrow set")).collect())
    }

    /// The inverse of [`psi`](Self::psi) on `^perp S_k'`: `X_k` is the kernel of `sum Y_j -> Y_k`.
    pub fn psi_inverse(&self, y: &Representation) -> Result<Representation> {
        self.check_target(y)?;
        let f = self.field;
        let k = self.k();
        let dk = y.dims()[k];
        let js = self.j_set();
        let blocks: Vec<Mat> = js.iter().map(|&j| y.mat(self.beta_new(j)).clone()).collect();
        let big = Mat::hstack_all(&blocks, dk);
        if f.rank(&big) != dk {
            return Err(Error::Precondition(format!(
                "Hom(Y, S_{}') != 0: the maps into vertex {} are not jointly surjective",
                self.target.quiver().label(k),
                self.target.quiver().label(k)
            )));
        }
        let kernel = f.nullspace(&big);
        let new_dk = kernel.cols();
        let mut mats: Vec<Option<Mat>> = vec![None; self.source.quiver().arrows().len()];
        for (old, new) in self.mutation.kept.iter().enumerate() {
            if let Some(new) = new {
                mats[old] = Some(y.mat(*new).clone());
            }
        }
        let mut off = 0;
        for &j in &js {
            mats[self.beta_old(j)] = Some(kernel.row_block(off, y.dims()[j]));
            off += y.dims()[j];
        }
        for i in self.i_set() {
            let rhs_blocks: Vec<Mat> = js.iter().map(|&j| self.beta_alpha(y, i, j)).collect();
            let rhs = Mat::vstack_all(&rhs_blocks, y.dims()[i]);
            let a = f.solve(&kernel, &rhs).ok_or_else(|| Error::RelationViolated {
                relation: format!("derivative at the arrow {}", self.target.quiver().arrow(self.alpha_new(i)).id),
            })?;
            mats[self.alpha_old(i)] = Some(a);
        }
        for t in &self.mutation.triangles {
            let ab = f.matmul(y.mat(self.alpha_new(t.i)), y.mat(self.beta_new(t.j)));
            mats[t.gamma] = Some(f.scale(f.reduce(t.sign), &ab));
        }
        let mut dims = y.dims().to_vec();
        dims[k] = new_dk;
        Representation::new(self.source.clone(), f, dims, mats.into_iter().map(|m| m.expect("every arrow set")).collect())
    }

    /// The mirror reflection on `^perp S_k`: `Y_k` is the kernel of `sum X_i -> X_k`,
    /// landing in `S_k'^perp` over the mutated algebra.
    pub fn psi_check(&self, x: &Representation) -> Result<Representation> {
        self.check_source(x)?;
        let f = self.field;
        let k = self.k();
        let dk = x.dims()[k];
        let is = self.i_set();
        let blocks: Vec<Mat> = is.iter().map(|&i| x.mat(self.alpha_old(i)).clone()).collect();
        let big = Mat::hstack_all(&blocks, dk);
        if f.rank(&big) != dk {
            return Err(Error::Precondition(format!(
                "Hom(X, S_{}) != 0: the maps into vertex {} are not jointly surjective",
                self.source.quiver().label(k),
                self.source.quiver().label(k)
            )));
        }
        let kernel = f.nullspace(&big);
        let new_dk = kernel.cols();
        let mut mats = self.common_target_mats(x);
        let mut off = 0;
        for &i in &is {
            mats[self.alpha_new(i)] = Some(kernel.row_block(off, x.dims()[i]));
            off += x.dims()[i];
        }
        for j in self.j_set() {
            let rhs_blocks: Vec<Mat> = is.iter().map(|&i| self.alpha_beta_star(x, i, j)).collect();
            let rhs = Mat::vstack_all(&rhs_blocks, x.dims()[j]);
            let b = f.solve(&kernel, &rhs).ok_or_else(|| Error::RelationViolated {
                relation: format!("derivative at the arrow {}", self.source.quiver().arrow(self.beta_old(j)).id),
            })?;
            mats[self.beta_new(j)] = Some(b);
        }
        let mut dims = x.dims().to_vec();
        dims[k] = new_dk;
        Representation::new(self.target.clone(), f, dims, mats.into_iter().map(|m| m.expect("every arrow set")).collect())
    }

    /// Does `Hom(S_k, x)` vanish?
    pub fn in_perp(&self, x: &Representation) -> bool {
        let k = self.k();
        let blocks: Vec<Mat> = self.j_set().iter().map(|&j| x.mat(self.beta_old(j)).clone()).collect();
        self.field.rank(&Mat::vstack_all(&blocks, x.dims()[k])) == x.dims()[k]
    }

    /// Does `Hom(x, S_k)` vanish?
    pub fn in_left_perp(&self, x: &Representation) -> bool {
        let k = self.k();
        let blocks: Vec<Mat> = self.i_set().iter().map(|&i| x.mat(self.alpha_old(i)).clone()).collect();
        self.field.rank(&Mat::hstack_all(&blocks, x.dims()[k])) == x.dims()[k]
    }
}

/// The indecomposables of the mutated algebra obtained from a complete source
/// catalog: `S_k'`, `psi(S_k^perp)` and the mirror image of `^perp S_k`, up to
/// isomorphism.
#[derive(Clone, Debug)]
pub struct MutatedCatalog {
    pub catalog: Catalog,
    /// For each source catalog index in `S_k^perp`, the index of its `psi` image.
    pub psi_image: Vec<Option<usize>>,
    /// Index of `S_k'`.
    pub simple_k: usize,
}

pub fn mutated_catalog(ctx: &ReflectionContext, cat: &Catalog) -> Result<MutatedCatalog> {
    let f = ctx.field();
    let k = ctx.k();
    let label = ctx.target().quiver().label(k).to_string();
    let mut reps: Vec<(String, Representation)> = vec![(format!("S{label}'"), simple(ctx.target(), f, k)?)];
    let mut psi_names: Vec<Option<String>> = vec![None; cat.len()];
    for x in 0..cat.len() {
        let m = cat.module(x);
        if m.dims()[k] == m.total_dim() {
            continue;
        }
        if ctx.in_perp(m) {
            let name = format!("psi({})", cat.entry(x).name);
            reps.push((name.clone(), ctx.psi(m)?));
            psi_names[x] = Some(name);
        }
    }
    for x in 0..cat.len() {
        let m = cat.module(x);
        if m.dims()[k] == m.total_dim() || !ctx.in_left_perp(m) {
            continue;
        }
        let y = ctx.psi_check(m)?;
        let mut dup = false;
        for (_, r) in &reps {
            if is_isomorphic(r, &y)? {
                dup = true;
                break;
            }
        }
        if !dup {
            reps.push((format!("psi^({})", cat.entry(x).name), y));
        }
    }
    let entries = reps.into_iter().map(|(name, module)| CatalogEntry { name, module, string: None }).collect();
    let catalog = Catalog::new(ctx.target().clone(), f, entries)?;
    let psi_image = psi_names.iter().map(|n| n.as_ref().map(|n| catalog.find(n).expect("named entry"))).collect();
    let simple_k = catalog.find(&format!("S{label}'")).expect("simple entry");
    Ok(MutatedCatalog { catalog, psi_image, simple_k })
}

/// Rotation of a sequence `S_k, M_2, ..., M_m` to `psi M_2, ..., psi M_m, S_k'`.
pub fn rotate_sequence(mc: &MutatedCatalog, seq: &[usize]) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(seq.len());
    for &x in seq.iter().skip(1) {
        out.push(mc.psi_image[x].ok_or_else(|| Error::Precondition(format!("module {x} is not in S_k^perp")))?);
    }
    out.push(mc.simple_k);
    Ok(out)
}

/// Result of reflecting a module through a sequence of mutations.
#[derive(Clone, Debug)]
pub struct IteratedReflection {
    pub module: Representation,
    pub qp: QuiverWithPotential,
    /// Integer matrix of the composite `phi`, acting on column dimension vectors.
    pub phi: Vec<Vec<i64>>,
}

/// Applies `psi_{k_1}`, then `psi_{k_2}`, ... to `x`, re-checking each precondition.
pub fn iterated_reflection(qp: &QuiverWithPotential, ks: &[usize], x: &Representation) -> Result<IteratedReflection> {
    let field = x.field();
    let mut cur = qp.clone();
    let mut module = x.clone();
    let mut phi = int_identity(qp.vertex_count());
    for (index, &k) in ks.iter().enumerate() {
        let step = |cur: &QuiverWithPotential, module: &Representation| -> Result<(ReflectionContext, Representation)> {
            let ctx = ReflectionContext::new(cur, k, field)?;
            let y = ctx.psi(module)?;
            Ok((ctx, y))
        };
        let (ctx, y) = step(&cur, &module).map_err(|e| Error::IteratedStep { index, source: Box::new(e) })?;
        phi = int_matmul(&phi_matrix(cur.quiver(), k), &phi);
        module = y;
        cur = ctx.target_qp().clone();
    }
    Ok(IteratedReflection { module, qp: cur, phi })
}
