//! Bound quiver algebras `KQ/I` with `I` generated by finitely many relations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Mat, PrimeField};
use crate::quiver::{Quiver, Word};

/// An integer linear combination of parallel paths, read modulo `p` when
/// evaluated. Terms are merged and sorted; zero coefficients are dropped.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    terms: Vec<(i64, Word)>,
}

impl Relation {
    pub fn new(terms: impl IntoIterator<Item = (i64, Word)>) -> Self {
        let mut merged: BTreeMap<Word, i64> = BTreeMap::new();
        for (c, w) in terms {
            *merged.entry(w).or_insert(0) += c;
        }
        let terms = merged.into_iter().filter(|(_, c)| *c != 0).map(|(w, c)| (c, w)).collect();
        Self { terms }
    }

    pub fn monomial(word: Word) -> Self {
        Self::new([(1, word)])
    }

    pub fn terms(&self) -> &[(i64, Word)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (c, w)) in self.terms.iter().enumerate() {
            let body = q.format_word(w);
            match (idx, *c) {
                (0, 1) => s.push_str(&body),
                (0, -1) => s.push_str(&format!("-{body}")),
                (0, c) => s.push_str(&format!("{c}{body}")),
                (_, 1) => s.push_str(&format!(" + {body}")),
                (_, -1) => s.push_str(&format!(" - {body}")),
                (_, c) if c < 0 => s.push_str(&format!(" - {}{body}", -c)),
                (_, c) => s.push_str(&format!(" + {c}{body}")),
            }
        }
        s
    }
}

/// A quiver together with the relations generating its ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundQuiver {
    quiver: Quiver,
    relations: Vec<Relation>,
}

impl BoundQuiver {
    pub fn new(quiver: Quiver, relations: Vec<Relation>) -> Result<Self> {
        for r in &relations {
            let mut ends = None;
            for (_, w) in r.terms() {
                let e = quiver.word_endpoints(w).ok_or_else(|| Error::NonComposable {
                    kind: "path",
                    word: quiver.format_word(w),
                })?;
                if *ends.get_or_insert(e) != e {
                    return Err(Error::NonComposable { kind: "relation", word: r.display(&quiver) });
                }
            }
        }
        let relations = relations.into_iter().filter(|r| !r.is_zero()).collect();
        Ok(Self { quiver, relations })
    }

    /// `KQ / rad^m`: every path of length `m` is a zero relation.
    pub fn truncated(quiver: Quiver, m: usize) -> Result<Self> {
        let relations = quiver.words_of_length(m).into_iter().map(Relation::monomial).collect();
        Self::new(quiver, relations)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    pub fn is_monomial(&self) -> bool {
        self.relations.iter().all(Relation::is_monomial)
    }

    /// Same relations read in the opposite quiver (words reversed).
    pub fn opposite(&self) -> BoundQuiver {
        let relations = self
            .relations
            .iter()
            .map(|r| Relation::new(r.terms().iter().map(|(c, w)| (*c, w.iter().rev().copied().collect()))))
            .collect();
        BoundQuiver { quiver: self.quiver.opposite(), relations }
    }

    /// Does `word` contain a monomial relation as a contiguous subword?
    pub fn contains_zero_relation(&self, word: &[usize]) -> bool {
        self.relations.iter().filter(|r| r.is_monomial()).any(|r| {
            let z = &r.terms()[0].1;
            z.len() <= word.len() && word.windows(z.len()).any(|win| win == z.as_slice())
        })
    }

    /// `e_? Λ e_i`: the paths starting at `i` modulo the ideal, as a quotient
    /// of a truncated path space. Fails if no nilpotency bound is found.
    pub(crate) fn paths_from(&self, i: usize, field: PrimeField) -> Result<PathQuotient> {
        const MAX_LEN: usize = 48;
        for len in 1..=MAX_LEN {
            if let Some(pq) = self.try_paths_from(i, field, len) {
                return Ok(pq);
            }
        }
        Err(Error::Unsupported(format!(
            "no nilpotency bound up to path length {MAX_LEN}; the algebra looks infinite-dimensional"
        )))
    }

    fn try_paths_from(&self, i: usize, field: PrimeField, len: usize) -> Option<PathQuotient> {
        let q = &self.quiver;
        // Paths from i of length 0..=len; index 0 is the trivial path.
        let mut by_len: Vec<Vec<Word>> = vec![vec![Vec::new()]];
        for l in 1..=len {
            let mut next = Vec::new();
            for w in &by_len[l - 1] {
                let tgt = if w.is_empty() { i } else { q.arrow(w[0]).target };
                for a in q.arrows_from(tgt) {
                    let mut nw = Vec::with_capacity(w.len() + 1);
                    nw.push(a);
                    nw.extend_from_slice(w);
                    next.push(nw);
                }
            }
            by_len.push(next);
        }
        // Columns ordered longest first so pivots land on long paths.
        let columns: Vec<Word> = by_len.iter().rev().flatten().cloned().collect();
        let index: HashMap<Word, usize> = columns.iter().cloned().enumerate().map(|(k, w)| (w, k)).collect();
        let endpoint = |w: &Word| if w.is_empty() { i } else { q.arrow(w[0]).target };

        // Genuine ideal elements u r v with every term of length <= len.
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for r in &self.relations {
            let (r_src, r_tgt) = q.word_endpoints(&r.terms()[0].1).unwrap();
            let max_term = r.terms().iter().map(|(_, w)| w.len()).max().unwrap();
            for vs in by_len.iter().take(len + 1) {
                for v in vs.iter().filter(|v| endpoint(v) == r_src) {
                    if v.len() + max_term > len {
                        continue;
                    }
                    let room = len - v.len() - max_term;
                    for u in lefts_from(q, r_tgt, room) {
                        let mut row = vec![0u32; columns.len()];
                        for (c, w) in r.terms() {
                            let mut full = u.clone();
                            full.extend_from_slice(w);
                            full.extend_from_slice(v);
                            let col = index[&full];
                            row[col] = field.add(row[col], field.reduce(*c));
                        }
                        rows.push(row);
                    }
                }
            }
        }
        let gens = Mat::from_rows(&rows, columns.len());
        let (rref, pivots) = field.rref(&gens);
        // Every path of the top length must be in the ideal.
        let top_in_ideal = by_len[len].iter().all(|w| {
            let mut e = Mat::zeros(1, columns.len());
            e.set(0, index[w], 1);
            field.rank(&gens.vstack(&e)) == pivots.len()
        });
        if !top_in_ideal {
            return None;
        }
        let basis: Vec<usize> =
            (0..columns.len()).filter(|c| !pivots.contains(c) && columns[*c].len() < len).collect();
        Some(PathQuotient { start: i, columns, index, rref, pivots, basis, field, len })
    }
}

/// Left factors `u` with `source(u) = v` and `|u| <= room`, including the trivial path.
fn lefts_from(q: &Quiver, v: usize, room: usize) -> Vec<Word> {
    let mut all = vec![Vec::new()];
    let mut frontier: Vec<(Word, usize)> = vec![(Vec::new(), v)];
    for _ in 0..room {
        let mut next = Vec::new();
        for (w, end) in &frontier {
            for a in q.arrows_from(*end) {
                let mut nw = vec![a];
                nw.extend_from_slice(w);
                all.push(nw.clone());
                next.push((nw, q.arrow(a).target));
            }
        }
        frontier = next;
    }
    all
}

impl fmt::Display for BoundQuiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relations.iter().map(|r| r.display(&self.quiver)).collect();
        write!(f, "{} vertices, {} arrows, relations [{}]", self.vertex_count(), self.quiver.arrows().len(), rels.join(", "))
    }
}

/// Quotient of the truncated path space from a fixed vertex.
pub(crate) struct PathQuotient {
    start: usize,
    columns: Vec<Word>,
    index: HashMap<Word, usize>,
    rref: Mat,
    pivots: Vec<usize>,
    basis: Vec<usize>,
    field: PrimeField,
    len: usize,
}

impl PathQuotient {
    /// Quotient basis paths, in column order.
    pub fn basis_words(&self) -> Vec<&Word> {
        self.basis.iter().map(|&c| &self.columns[c]).collect()
    }

    pub fn word_target(&self, q: &Quiver, w: &Word) -> usize {
        if w.is_empty() {
            self.start
        } else {
            q.arrow(w[0]).target
        }
    }

    /// Coordinates of a path in the quotient basis (zero beyond the truncation).
    pub fn reduce(&self, w: &Word) -> Vec<u32> {
        let mut v = vec![0u32; self.columns.len()];
        if w.len() < self.len {
            v[self.index[w]] = 1;
        }
        let f = self.field;
        for (row, &pc) in self.pivots.iter().enumerate() {
            let c = v[pc];
            if c == 0 {
                continue;
            }
            for j in 0..self.columns.len() {
                v[j] = f.sub(v[j], f.mul(c, self.rref.get(row, j)));
            }
        }
        self.basis.iter().map(|&b| v[b]).collect()
    }
}
