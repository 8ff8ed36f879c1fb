//! Extended exchange matrices, matrix mutation, c-vectors, and exhaustive
//! search for (maximal) green sequences.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quiver::Quiver;

/// Default node budget for green-sequence searches.
pub const DEFAULT_BUDGET: usize = 20_000_000;

/// A `2n x n` integer matrix: the exchange matrix `B` over the c-matrix `C`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtExchangeMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl ExtExchangeMatrix {
    /// Builds from the principal part and the c-part, both given as `n` rows.
    pub fn from_parts(b: &[Vec<i64>], c: &[Vec<i64>]) -> Result<Self> {
        let n = b.len();
        if c.len() != n || b.iter().chain(c).any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch(format!("exchange matrix parts must be {n}x{n}")));
        }
        for i in 0..n {
            for j in 0..n {
                if b[i][j] != -b[j][i] {
                    return Err(Error::ShapeMismatch("principal part is not skew-symmetric".into()));
                }
            }
        }
        let entries = b.iter().chain(c).flatten().copied().collect();
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry of the full `2n x n` matrix.
    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.n + col]
    }

    pub fn b(&self, i: usize, j: usize) -> i64 {
        self.get(i, j)
    }

    pub fn c(&self, i: usize, j: usize) -> i64 {
        self.get(self.n + i, j)
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n.max(1)).take(2 * self.n).map(|r| r.to_vec()).collect()
    }

    pub fn b_matrix(&self) -> Vec<Vec<i64>> {
        self.rows()[..self.n].to_vec()
    }

    pub fn c_matrix(&self) -> Vec<Vec<i64>> {
        self.rows()[self.n..].to_vec()
    }

    fn check(&self, k: usize) -> Result<()> {
        if k >= self.n {
            return Err(Error::VertexOutOfRange { index: k, n: self.n });
        }
        Ok(())
    }

    /// Fomin-Zelevinsky mutation at `k`, applied to all `2n` rows.
    pub fn mutate(&self, k: usize) -> Result<Self> {
        self.check(k)?;
        let n = self.n;
        let mut out = self.entries.clone();
        for i in 0..2 * n {
            for j in 0..n {
                let v = if i == k || j == k {
                    self.get(i, j).checked_neg().ok_or(Error::Overflow)?
                } else {
                    let (bik, bkj) = (self.get(i, k), self.get(k, j));
                    // b_ij + (|b_ik| b_kj + b_ik |b_kj|) / 2
                    let t1 = bik.checked_abs().and_then(|a| a.checked_mul(bkj)).ok_or(Error::Overflow)?;
                    let t2 = bkj.checked_abs().and_then(|a| a.checked_mul(bik)).ok_or(Error::Overflow)?;
                    let sum = t1.checked_add(t2).ok_or(Error::Overflow)?;
                    self.get(i, j).checked_add(sum / 2).ok_or(Error::Overflow)?
                };
                out[i * n + j] = v;
            }
        }
        Ok(Self { n, entries: out })
    }

    /// The `k`-th column of the c-part.
    pub fn c_vector(&self, k: usize) -> Result<Vec<i64>> {
        self.check(k)?;
        Ok((0..self.n).map(|i| self.c(i, k)).collect())
    }

    /// Nonzero and entrywise nonnegative c-vector.
    pub fn is_green(&self, k: usize) -> Result<bool> {
        let c = self.c_vector(k)?;
        Ok(c.iter().all(|&x| x >= 0) && c.iter().any(|&x| x != 0))
    }

    pub fn green_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&k| self.is_green(k).unwrap_or(false)).collect()
    }

    /// Index of the first column of `C` violating sign coherence, if any.
    pub fn sign_incoherent_column(&self) -> Option<usize> {
        (0..self.n).find(|&k| {
            let col: Vec<i64> = (0..self.n).map(|i| self.c(i, k)).collect();
            let pos = col.iter().any(|&x| x > 0);
            let neg = col.iter().any(|&x| x < 0);
            (pos && neg) || (!pos && !neg)
        })
    }
}

/// `b_ij = #(i -> j) - #(j -> i)` and `c = I`.
pub fn initial_seed(q: &Quiver) -> Result<ExtExchangeMatrix> {
    q.check_no_loops_or_two_cycles()?;
    let n = q.vertex_count();
    let mut b = vec![vec![0i64; n]; n];
    for a in q.arrows() {
        b[a.source][a.target] += 1;
        b[a.target][a.source] -= 1;
    }
    let c = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect::<Vec<_>>();
    ExtExchangeMatrix::from_parts(&b, &c)
}

pub fn mutate(m: &ExtExchangeMatrix, k: usize) -> Result<ExtExchangeMatrix> {
    m.mutate(k)
}

pub fn c_vector(m: &ExtExchangeMatrix, k: usize) -> Result<Vec<i64>> {
    m.c_vector(k)
}

pub fn is_green(m: &ExtExchangeMatrix, k: usize) -> Result<bool> {
    m.is_green(k)
}

/// Applies a list of mutations in order, returning every intermediate matrix
/// (the first entry is `m` itself).
pub fn mutation_chain(m: &ExtExchangeMatrix, ks: &[usize]) -> Result<Vec<ExtExchangeMatrix>> {
    let mut out = vec![m.clone()];
    for &k in ks {
        let next = out.last().unwrap().mutate(k)?;
        out.push(next);
    }
    Ok(out)
}

/// Mutation indices with the c-vector at each step, taken just before the mutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GreenSequence {
    pub indices: Vec<usize>,
    pub c_vectors: Vec<Vec<i64>>,
}

impl GreenSequence {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Replays the sequence from `seed`, checking each step is green.
    pub fn replay(seed: &ExtExchangeMatrix, indices: &[usize]) -> Result<(GreenSequence, ExtExchangeMatrix)> {
        let mut m = seed.clone();
        let mut c_vectors = Vec::with_capacity(indices.len());
        for (pos, &k) in indices.iter().enumerate() {
            if !m.is_green(k)? {
                return Err(Error::Precondition(format!("step {} mutates at a red vertex", pos + 1)));
            }
            c_vectors.push(m.c_vector(k)?);
            m = m.mutate(k)?;
        }
        Ok((GreenSequence { indices: indices.to_vec(), c_vectors }, m))
    }

    /// Sorted c-vectors: the key identifying sequences that differ by reordering.
    pub fn class_key(&self) -> Vec<Vec<i64>> {
        let mut key = self.c_vectors.clone();
        key.sort();
        key
    }
}

struct Search<'a> {
    max_len: usize,
    maximal_only: bool,
    budget: usize,
    nodes: &'a AtomicUsize,
}

impl Search<'_> {
    fn dfs(
        &self,
        m: &ExtExchangeMatrix,
        indices: &mut Vec<usize>,
        cvecs: &mut Vec<Vec<i64>>,
        out: &mut Vec<GreenSequence>,
    ) -> Result<bool> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Ok(false);
        }
        if let Some(column) = m.sign_incoherent_column() {
            return Err(Error::SignCoherence { column, indices: indices.clone() });
        }
        let green = m.green_vertices();
        if !indices.is_empty() && (!self.maximal_only || green.is_empty()) {
            out.push(GreenSequence { indices: indices.clone(), c_vectors: cvecs.clone() });
        }
        if indices.len() >= self.max_len {
            return Ok(true);
        }
        for k in green {
            cvecs.push(m.c_vector(k)?);
            indices.push(k);
            let next = m.mutate(k)?;
            let complete = self.dfs(&next, indices, cvecs, out)?;
            indices.pop();
            cvecs.pop();
            if !complete {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Depth-first enumeration of green sequences from `seed`, in lexicographic
/// order of the mutation indices. With `maximal_only`, only sequences ending
/// at a seed without green vertices are returned.
pub fn enumerate_green_sequences(
    seed: &ExtExchangeMatrix,
    max_len: usize,
    maximal_only: bool,
    budget: usize,
) -> Result<Vec<GreenSequence>> {
    let nodes = AtomicUsize::new(1);
    let search = Search { max_len, maximal_only, budget, nodes: &nodes };
    let roots = seed.green_vertices();
    if roots.is_empty() || max_len == 0 {
        return Ok(Vec::new());
    }
    let branches: Vec<Result<(bool, Vec<GreenSequence>)>> = roots
        .par_iter()
        .map(|&k| {
            let mut out = Vec::new();
            let mut indices = vec![k];
            let mut cvecs = vec![seed.c_vector(k)?];
            let next = seed.mutate(k)?;
            let complete = search.dfs(&next, &mut indices, &mut cvecs, &mut out)?;
            Ok((complete, out))
        })
        .collect();
    let mut found = Vec::new();
    let mut complete = true;
    for b in branches {
        let (c, seqs) = b?;
        complete &= c;
        found.extend(seqs);
    }
    if !complete {
        return Err(Error::GreenBudgetExceeded { budget, found: Box::new(found) });
    }
    Ok(found)
}

/// All maximal green sequences with no length cap.
pub fn maximal_green_sequences(seed: &ExtExchangeMatrix, budget: usize) -> Result<Vec<GreenSequence>> {
    enumerate_green_sequences(seed, usize::MAX, true, budget)
}

/// `(min, max)` length over all maximal green sequences.
pub fn mgs_length_extrema(seed: &ExtExchangeMatrix, budget: usize) -> Result<(usize, usize)> {
    let all = maximal_green_sequences(seed, budget)?;
    let min = all.iter().map(GreenSequence::len).min().unwrap_or(0);
    let max = all.iter().map(GreenSequence::len).max().unwrap_or(0);
    Ok((min, max))
}

/// Groups sequences by their c-vector multiset; two sequences are equivalent
/// when they mutate along the same c-vectors in a different order.
pub fn mgs_classes(seqs: &[GreenSequence]) -> BTreeMap<Vec<Vec<i64>>, Vec<usize>> {
    let mut classes: BTreeMap<Vec<Vec<i64>>, Vec<usize>> = BTreeMap::new();
    for (idx, s) in seqs.iter().enumerate() {
        classes.entry(s.class_key()).or_default().push(idx);
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_seed() {
        let q = Quiver::from_edges(2, &[("a", 0, 1)]).unwrap();
        let m = initial_seed(&q).unwrap();
        assert_eq!(m.b_matrix(), vec![vec![0, 1], vec![-1, 0]]);
        assert_eq!(m.c_matrix(), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn a2_has_two_maximal_green_sequences() {
        let q = Quiver::from_edges(2, &[("a", 0, 1)]).unwrap();
        let m = initial_seed(&q).unwrap();
        let all = maximal_green_sequences(&m, DEFAULT_BUDGET).unwrap();
        let idx: Vec<Vec<usize>> = all.iter().map(|s| s.indices.clone()).collect();
        assert_eq!(idx, vec![vec![0, 1, 0], vec![1, 0]]);
    }

    #[test]
    fn rejects_two_cycles() {
        let q = Quiver::from_edges(2, &[("a", 0, 1), ("b", 1, 0)]).unwrap();
        assert!(initial_seed(&q).is_err());
    }

    #[test]
    fn out_of_range_vertex() {
        let q = Quiver::from_edges(2, &[("a", 0, 1)]).unwrap();
        let m = initial_seed(&q).unwrap();
        assert!(matches!(m.mutate(2), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn overflow_is_reported() {
        let big = i64::MAX / 2 + 1;
        let b = vec![vec![0, big, 0], vec![-big, 0, big], vec![0, -big, 0]];
        let c = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let m = ExtExchangeMatrix::from_parts(&b, &c).unwrap();
        assert!(matches!(m.mutate(1), Err(Error::Overflow)));
    }

    #[test]
    fn budget_exhaustion_returns_partial_results() {
        let q = Quiver::from_edges(3, &[("a", 0, 1), ("b", 1, 2)]).unwrap();
        let m = initial_seed(&q).unwrap();
        match maximal_green_sequences(&m, 5) {
            Err(Error::GreenBudgetExceeded { budget, .. }) => assert_eq!(budget, 5),
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
