//! Catalogs of indecomposable modules with their Hom tables, and the string
//! modules of monomial string algebras.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::BoundQuiver;
use crate::error::{Error, Result};
use crate::field::{Mat, PrimeField};
use crate::quiver::Quiver;
use crate::rep::{hom_dim, Representation};

/// Longest string considered before the algebra is declared not of finite type.
const MAX_STRING_LEN: usize = 64;

/// A letter of a string: an arrow walked forwards or backwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub arrow: usize,
    pub inverse: bool,
}

impl Letter {
    /// `(from, to)` vertices of the step.
    pub fn step(&self, q: &Quiver) -> (usize, usize) {
        let a = q.arrow(self.arrow);
        if self.inverse {
            (a.target, a.source)
        } else {
            (a.source, a.target)
        }
    }
}

/// A walk in the quiver avoiding relations; the trivial walk at a vertex has no letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StringWord {
    pub start: usize,
    pub letters: Vec<Letter>,
}

impl StringWord {
    pub fn vertices(&self, q: &Quiver) -> Vec<usize> {
        let mut out = vec![self.start];
        for l in &self.letters {
            out.push(l.step(q).1);
        }
        out
    }

    pub fn inverse(&self, q: &Quiver) -> StringWord {
        let end = *self.vertices(q).last().unwrap();
        let letters = self.letters.iter().rev().map(|l| Letter { arrow: l.arrow, inverse: !l.inverse }).collect();
        StringWord { start: end, letters }
    }

    /// Walk notation such as `3>2<4`: `>` follows an arrow, `<` walks one backwards.
    pub fn display(&self, q: &Quiver) -> String {
        let vs = self.vertices(q);
        let mut s = q.label(vs[0]).to_string();
        for (l, v) in self.letters.iter().zip(&vs[1..]) {
            s.push(if l.inverse { '<' } else { '>' });
            s.push_str(q.label(*v));
        }
        s
    }

    /// The string module: one basis vector per visited vertex, 0/1 arrow maps.
    pub fn module(&self, algebra: &Arc<BoundQuiver>, field: PrimeField) -> Result<Representation> {
        let q = algebra.quiver();
        let vs = self.vertices(q);
        let mut dims = vec![0usize; q.vertex_count()];
        let mut local = Vec::with_capacity(vs.len());
        for &v in &vs {
            local.push(dims[v]);
            dims[v] += 1;
        }
        let mut mats: Vec<Mat> = q.arrows().iter().map(|a| Mat::zeros(dims[a.target], dims[a.source])).collect();
        for (pos, l) in self.letters.iter().enumerate() {
            let (from, to) = (pos, pos + 1);
            if l.inverse {
                mats[l.arrow].set(local[from], local[to], 1);
            } else {
                mats[l.arrow].set(local[to], local[from], 1);
            }
        }
        Representation::new(algebra.clone(), field, dims, mats)
    }
}

/// Checks the string-algebra conditions for a bound quiver with monomial relations.
pub fn check_string_algebra(algebra: &BoundQuiver) -> Result<()> {
    if !algebra.is_monomial() {
        return Err(Error::Unsupported("string modules need monomial relations".into()));
    }
    let q = algebra.quiver();
    for v in 0..q.vertex_count() {
        if q.arrows_from(v).count() > 2 || q.arrows_into(v).count() > 2 {
            return Err(Error::Unsupported(format!("vertex {} has more than two arrows on one side", q.label(v))));
        }
    }
    for b in 0..q.arrows().len() {
        let s = q.arrow(b).source;
        let t = q.arrow(b).target;
        let before = q.arrows_into(s).filter(|&a| !algebra.contains_zero_relation(&[b, a])).count();
        let after = q.arrows_from(t).filter(|&c| !algebra.contains_zero_relation(&[c, b])).count();
        if before > 1 || after > 1 {
            return Err(Error::Unsupported(format!("arrow {} composes freely with two arrows", q.arrow(b).id)));
        }
    }
    Ok(())
}

fn run_is_valid(algebra: &BoundQuiver, letters: &[Letter]) -> bool {
    let last = letters[letters.len() - 1];
    if letters.len() >= 2 {
        let prev = letters[letters.len() - 2];
        if prev.arrow == last.arrow && prev.inverse != last.inverse {
            return false;
        }
    }
    // the maximal trailing run of letters of the same direction, as a path
    let run: Vec<Letter> = letters.iter().rev().take_while(|l| l.inverse == last.inverse).copied().collect();
    let path: Vec<usize> = if last.inverse {
        // walked backwards: b1^-1 b2^-1 ... is the path b1 b2 ... in functional order
        run.iter().rev().map(|l| l.arrow).collect()
    } else {
        run.iter().map(|l| l.arrow).collect()
    };
    !algebra.contains_zero_relation(&path)
}

/// Every string up to inversion, including the trivial strings.
pub fn string_words(algebra: &BoundQuiver) -> Result<Vec<StringWord>> {
    check_string_algebra(algebra)?;
    let q = algebra.quiver();
    let mut found: BTreeSet<StringWord> = BTreeSet::new();
    fn extend(
        algebra: &BoundQuiver,
        start: usize,
        end: usize,
        letters: &mut Vec<Letter>,
        found: &mut BTreeSet<StringWord>,
    ) -> Result<()> {
        let q = algebra.quiver();
        if letters.len() > MAX_STRING_LEN {
            return Err(Error::Unsupported("strings grow without bound; the algebra is not of finite type".into()));
        }
        let w = StringWord { start, letters: letters.clone() };
        let inv = w.inverse(q);
        found.insert(if inv < w { inv } else { w });
        let candidates: Vec<Letter> = q
            .arrows_from(end)
            .map(|a| Letter { arrow: a, inverse: false })
            .chain(q.arrows_into(end).map(|a| Letter { arrow: a, inverse: true }))
            .collect();
        for l in candidates {
            letters.push(l);
            if run_is_valid(algebra, letters) {
                let next = l.step(q).1;
                extend(algebra, start, next, letters, found)?;
            }
            letters.pop();
        }
        Ok(())
    }
    for v in 0..q.vertex_count() {
        extend(algebra, v, v, &mut Vec::new(), &mut found)?;
    }
    Ok(found.into_iter().collect())
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub module: Representation,
    pub string: Option<StringWord>,
}

/// Pairwise non-isomorphic indecomposables with a precomputed Hom table.
#[derive(Clone, Debug)]
pub struct Catalog {
    algebra: Arc<BoundQuiver>,
    field: PrimeField,
    entries: Vec<CatalogEntry>,
    hom: Vec<Vec<usize>>,
    heuristic: bool,
}

impl Catalog {
    /// Builds a catalog from modules assumed indecomposable and pairwise
    /// non-isomorphic. Entries are sorted by dimension vector size, then name.
    pub fn new(algebra: Arc<BoundQuiver>, field: PrimeField, mut entries: Vec<CatalogEntry>) -> Result<Self> {
        for e in &entries {
            if e.module.algebra().as_ref() != algebra.as_ref() || e.module.field() != field {
                return Err(Error::ShapeMismatch(format!("module {} is over a different algebra", e.name)));
            }
        }
        entries.sort_by(|a, b| {
            let ka = (a.module.total_dim(), std::cmp::Reverse(a.module.dims().to_vec()), a.name.clone());
            let kb = (b.module.total_dim(), std::cmp::Reverse(b.module.dims().to_vec()), b.name.clone());
            ka.cmp(&kb)
        });
        let n = entries.len();
        let hom: Vec<Vec<usize>> = (0..n)
            .into_par_iter()
            .map(|i| (0..n).map(|j| hom_dim(&entries[i].module, &entries[j].module)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(Self { algebra, field, entries, hom, heuristic: false })
    }

    /// Complete catalog of string modules of a string algebra of finite type.
    pub fn strings(algebra: Arc<BoundQuiver>, field: PrimeField) -> Result<Self> {
        let words = string_words(&algebra)?;
        let q = algebra.quiver();
        let entries = words
            .into_iter()
            .map(|w| {
                let module = w.module(&algebra, field)?;
                let name = if w.letters.is_empty() { format!("S{}", q.label(w.start)) } else { w.display(q) };
                Ok(CatalogEntry { name, module, string: Some(w) })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(algebra, field, entries)
    }

    /// User-supplied modules; isomorphism classes are only told apart by
    /// dimension vector and Hom dimensions, so the catalog is flagged heuristic.
    pub fn from_modules(algebra: Arc<BoundQuiver>, field: PrimeField, modules: Vec<Representation>) -> Result<Self> {
        let mut kept: Vec<Representation> = Vec::new();
        for m in modules {
            m.check_relations()?;
            let mut duplicate = false;
            for k in &kept {
                if k.dims() == m.dims() && hom_dim(k, &m)? == 1 && hom_dim(&m, k)? == 1 {
                    duplicate = true;
                    break;
                }
            }
            if !duplicate {
                kept.push(m);
            }
        }
        let entries = kept
            .into_iter()
            .enumerate()
            .map(|(i, module)| CatalogEntry { name: format!("M{}", i + 1), module, string: None })
            .collect();
        let mut cat = Self::new(algebra, field, entries)?;
        cat.heuristic = true;
        Ok(cat)
    }

    pub fn algebra(&self) -> &Arc<BoundQuiver> {
        &self.algebra
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &CatalogEntry {
        &self.entries[i]
    }

    pub fn module(&self, i: usize) -> &Representation {
        &self.entries[i].module
    }

    pub fn dims(&self, i: usize) -> Vec<i64> {
        self.entries[i].module.dim_vector()
    }

    /// `dim Hom(M_i, M_j)`.
    pub fn hom(&self, i: usize, j: usize) -> usize {
        self.hom[i][j]
    }

    pub fn hom_table(&self) -> &[Vec<usize>] {
        &self.hom
    }

    pub fn is_schurian(&self, i: usize) -> bool {
        self.hom[i][i] == 1
    }

    pub fn schurian_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_schurian(i)).collect()
    }

    /// True when isomorphism classes were identified heuristically.
    pub fn is_heuristic(&self) -> bool {
        self.heuristic
    }

    pub fn find_by_dims(&self, dims: &[i64]) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.dims(i) == dims).collect()
    }

    /// The unique module with the given dimension vector, if exactly one exists.
    pub fn unique_by_dims(&self, dims: &[i64]) -> Option<usize> {
        match self.find_by_dims(dims).as_slice() {
            [i] => Some(*i),
            _ => None,
        }
    }

    /// Sorted labels of the support, e.g. `134`.
    pub fn support_label(&self, i: usize) -> String {
        let q = self.algebra.quiver();
        let dims = self.entries[i].module.dims();
        (0..dims.len()).filter(|&v| dims[v] > 0).map(|v| q.label(v)).collect::<Vec<_>>().join("")
    }

    /// Finds a module by name, support label or `S<label>`.
    pub fn find(&self, key: &str) -> Option<usize> {
        (0..self.len())
            .find(|&i| self.entries[i].name == key)
            .or_else(|| {
                let matches: Vec<usize> = (0..self.len()).filter(|&i| self.support_label(i) == key).collect();
                (matches.len() == 1).then(|| matches[0])
            })
    }

    pub fn simple_index(&self, v: usize) -> Option<usize> {
        let mut e = vec![0i64; self.algebra.vertex_count()];
        e[v] = 1;
        self.unique_by_dims(&e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_a3_has_six_strings() {
        let q = Quiver::from_edges(3, &[("a", 0, 1), ("b", 1, 2)]).unwrap();
        let alg = Arc::new(BoundQuiver::new(q, vec![]).unwrap());
        let cat = Catalog::strings(alg, PrimeField::new(2).unwrap()).unwrap();
        assert_eq!(cat.len(), 6);
        assert_eq!(cat.schurian_indices().len(), 6);
    }

    #[test]
    fn oriented_cycle_without_relations_is_rejected() {
        let q = Quiver::from_edges(2, &[("a", 0, 1), ("b", 1, 0)]).unwrap();
        let alg = BoundQuiver::new(q, vec![]).unwrap();
        assert!(string_words(&alg).is_err());
    }

    #[test]
    fn kronecker_is_not_a_string_algebra_of_finite_type() {
        let q = Quiver::from_edges(2, &[("a", 0, 1), ("b", 0, 1)]).unwrap();
        let alg = BoundQuiver::new(q, vec![]).unwrap();
        assert!(string_words(&alg).is_err());
    }
}
