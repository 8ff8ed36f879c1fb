//! Forward hom-orthogonal sequences of Schurian modules, torsion pairs on a
//! catalog, and exhaustive enumeration of maximal sequences.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::exchange::{initial_seed, maximal_green_sequences};
use crate::qp::QuiverWithPotential;
use crate::rep::DEFAULT_SUBMODULE_BUDGET;
use crate::walls::{random_generic_path, realize_polygonal, realize_sequence, WallSet};

/// Catalog indices of `M_1, ..., M_m` with cached dimension vectors and Hom table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FhoSequence {
    pub modules: Vec<usize>,
    pub dim_vectors: Vec<Vec<i64>>,
    pub hom_table: Vec<Vec<usize>>,
}

impl FhoSequence {
    pub fn new(cat: &Catalog, modules: &[usize]) -> Self {
        let dim_vectors = modules.iter().map(|&i| cat.dims(i)).collect();
        let hom_table = modules.iter().map(|&i| modules.iter().map(|&j| cat.hom(i, j)).collect()).collect();
        Self { modules: modules.to_vec(), dim_vectors, hom_table }
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }
}

/// `(G, F)` restricted to the catalog: `F = M^perp`, `G = ^perp F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionPair {
    pub torsion: Vec<usize>,
    pub torsion_free: Vec<usize>,
}

pub fn torsion_pair(cat: &Catalog, ms: &[usize]) -> TorsionPair {
    let torsion_free: Vec<usize> = (0..cat.len()).filter(|&y| ms.iter().all(|&m| cat.hom(m, y) == 0)).collect();
    let torsion = (0..cat.len()).filter(|&x| torsion_free.iter().all(|&y| cat.hom(x, y) == 0)).collect();
    TorsionPair { torsion, torsion_free }
}

/// Every module is Schurian and `Hom(M_i, M_j) = 0` for `i < j`.
pub fn is_weakly_fho(cat: &Catalog, seq: &[usize]) -> bool {
    seq.iter().all(|&i| cat.is_schurian(i))
        && (0..seq.len()).all(|i| (i + 1..seq.len()).all(|j| cat.hom(seq[i], seq[j]) == 0))
}

/// Why `x` cannot be inserted: `Hom(M_from, x) != 0` forces `x` before position
/// `from`, `Hom(x, M_to) != 0` forces it after position `to`, and `from <= to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InsertionObstruction {
    pub from: usize,
    pub to: usize,
}

/// Positions `p` such that inserting `x` before `seq[p]` keeps the sequence weakly FHO,
/// or the obstruction when there is none.
pub fn insertion_slots(cat: &Catalog, seq: &[usize], x: usize) -> std::result::Result<Vec<usize>, InsertionObstruction> {
    let first_in = seq.iter().position(|&m| cat.hom(m, x) != 0);
    let last_out = seq.iter().rposition(|&m| cat.hom(x, m) != 0);
    let lo = last_out.map_or(0, |a| a + 1);
    let hi = first_in.unwrap_or(seq.len());
    if lo <= hi {
        Ok((lo..=hi).collect())
    } else {
        Err(InsertionObstruction { from: first_in.unwrap(), to: last_out.unwrap() })
    }
}

fn insertable(cat: &Catalog, seq: &[usize], x: usize) -> bool {
    !seq.contains(&x) && cat.is_schurian(x) && insertion_slots(cat, seq, x).is_ok()
}

/// Weakly FHO, `F(M)` empty on the catalog, and no Schurian module insertable.
pub fn is_maximal_fho(cat: &Catalog, seq: &[usize]) -> bool {
    is_weakly_fho(cat, seq)
        && torsion_pair(cat, seq).torsion_free.is_empty()
        && !(0..cat.len()).any(|x| insertable(cat, seq, x))
}

/// Maximal inside its own torsion class: no Schurian module of `G(M)` is insertable.
pub fn is_maximal_in_torsion_class(cat: &Catalog, seq: &[usize]) -> bool {
    is_weakly_fho(cat, seq) && !torsion_pair(cat, seq).torsion.iter().any(|&x| insertable(cat, seq, x))
}

struct Enumeration<'a> {
    cat: &'a Catalog,
    schurian: Vec<usize>,
    budget: usize,
    nodes: &'a AtomicUsize,
}

impl Enumeration<'_> {
    fn dfs(&self, seq: &mut Vec<usize>, out: &mut Vec<FhoSequence>) -> bool {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return false;
        }
        let cat = self.cat;
        let next: Vec<usize> = self
            .schurian
            .iter()
            .copied()
            .filter(|&x| !seq.contains(&x) && seq.iter().all(|&m| cat.hom(m, x) == 0))
            .collect();
        if next.is_empty() {
            if is_maximal_fho(cat, seq) {
                out.push(FhoSequence::new(cat, seq));
            }
            return true;
        }
        for x in next {
            seq.push(x);
            // every prefix of a maximal sequence is maximal in its torsion class
            if is_maximal_in_torsion_class(cat, seq) && !self.dfs(seq, out) {
                seq.pop();
                return false;
            }
            seq.pop();
        }
        true
    }
}

/// All maximal forward hom-orthogonal sequences over a complete catalog, in
/// lexicographic order of catalog indices.
pub fn enumerate_maximal_fho(cat: &Catalog, budget: usize) -> Result<Vec<FhoSequence>> {
    let nodes = AtomicUsize::new(1);
    let schurian = cat.schurian_indices();
    let e = Enumeration { cat, schurian: schurian.clone(), budget, nodes: &nodes };
    let branches: Vec<(bool, Vec<FhoSequence>)> = schurian
        .par_iter()
        .map(|&x| {
            let mut seq = vec![x];
            let mut out = Vec::new();
            let ok = !is_maximal_in_torsion_class(cat, &seq) || e.dfs(&mut seq, &mut out);
            (ok, out)
        })
        .collect();
    let mut complete = true;
    let mut found = Vec::new();
    for (ok, seqs) in branches {
        complete &= ok;
        found.extend(seqs);
    }
    if !complete {
        return Err(Error::FhoBudgetExceeded { budget, found: Box::new(found) });
    }
    Ok(found)
}

/// Maps dimension vectors of a sequence back to catalog indices (each must be unique).
pub fn sequence_from_dims(cat: &Catalog, dims: &[Vec<i64>]) -> Result<Vec<usize>> {
    dims.iter()
        .map(|d| {
            cat.unique_by_dims(d)
                .ok_or_else(|| Error::Precondition(format!("no unique catalog module with dimension vector {d:?}")))
        })
        .collect()
}

/// Sampling and search limits for [`verify_equivalence`].
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Random straight green paths to sample.
    pub samples: usize,
    pub seed: u64,
    /// Node budget for both exhaustive enumerations.
    pub budget: usize,
    /// Largest module total dimension for submodule enumeration.
    pub submodule_budget: usize,
    /// Resampling cap for non-generic bases and perturbations.
    pub retries: usize,
    /// Decide, by linear feasibility, whether unsampled sequences are crossed by some straight line.
    pub line_search: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { samples: 200, seed: 0, budget: 50_000_000, submodule_budget: DEFAULT_SUBMODULE_BUDGET, retries: 50, line_search: true }
    }
}

/// Dimension-vector sequences produced by the three characterizations and
/// how the crossing side was covered.
#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub mgs: BTreeSet<Vec<Vec<i64>>>,
    pub fho: BTreeSet<Vec<Vec<i64>>>,
    /// Crossing sequences of the sampled straight paths.
    pub sampled: BTreeSet<Vec<Vec<i64>>>,
    pub samples: usize,
    /// Sequences crossed by some straight path `x + t 1`, sampled or solved for.
    pub line_realized: usize,
    /// Sequences no straight path crosses; the cone of admissible bases is empty.
    pub line_unrealizable: Vec<Vec<Vec<i64>>>,
    /// Sequences not covered by the line search; `None` when it was skipped.
    pub line_unknown: Option<usize>,
    /// Sequences crossed by a constructed polygonal green path.
    pub polygonal_realized: usize,
    pub mgs_equals_fho: bool,
    /// Every sampled crossing sequence is a maximal FHO sequence.
    pub crossings_are_fho: bool,
    /// Every maximal FHO sequence is crossed by some green path.
    pub paths_cover: bool,
    /// First sequence that breaks the equivalence, if any.
    pub offending: Option<Vec<Vec<i64>>>,
    pub passed: bool,
}

/// Compares maximal green sequences, maximal FHO sequences and the walls
/// crossed by green paths on a finite-type algebra with a complete catalog.
pub fn verify_equivalence(qp: &QuiverWithPotential, cat: &Catalog, opts: &VerifyOptions) -> Result<EquivalenceReport> {
    let seed = initial_seed(qp.quiver())?;
    let mgs: BTreeSet<Vec<Vec<i64>>> =
        maximal_green_sequences(&seed, opts.budget)?.into_iter().map(|g| g.c_vectors).collect();
    let fho_seqs = enumerate_maximal_fho(cat, opts.budget)?;
    let fho: BTreeSet<Vec<Vec<i64>>> = fho_seqs.iter().map(|s| s.dim_vectors.clone()).collect();
    let walls = WallSet::new(cat, opts.submodule_budget)?;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut sampled = BTreeSet::new();
    for _ in 0..opts.samples {
        let (_, c) = random_generic_path(&walls, &mut rng, opts.retries)?;
        sampled.insert(c.into_iter().map(|r| r.dims).collect::<Vec<_>>());
    }

    let missing: Vec<&FhoSequence> = fho_seqs.iter().filter(|s| !sampled.contains(&s.dim_vectors)).collect();
    let (line_realized, line_unrealizable, line_unknown) = if opts.line_search {
        let solved: Vec<Option<bool>> = missing
            .par_iter()
            .enumerate()
            .map(|(i, s)| {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ (i as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
                match realize_sequence(&walls, &s.modules, &mut rng, opts.retries) {
                    Ok(Some(_)) => Some(true),
                    Ok(None) => Some(false),
                    Err(_) => None,
                }
            })
            .collect();
        let unreal = missing.iter().zip(&solved).filter(|(_, r)| **r == Some(false)).map(|(s, _)| s.dim_vectors.clone()).collect();
        let unknown = solved.iter().filter(|r| r.is_none()).count();
        let realized = fho.intersection(&sampled).count() + solved.iter().filter(|r| **r == Some(true)).count();
        (realized, unreal, Some(unknown))
    } else {
        (fho.intersection(&sampled).count(), Vec::new(), None)
    };

    let polygonal: Vec<bool> = fho_seqs
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(i as u64));
            realize_polygonal(&walls, &s.modules, &seed, &mut rng, opts.retries).is_ok()
        })
        .collect();
    let polygonal_realized = polygonal.iter().filter(|&&b| b).count();

    let mgs_equals_fho = mgs == fho;
    let crossings_are_fho = sampled.is_subset(&fho);
    let paths_cover = polygonal_realized == fho_seqs.len() && mgs.is_subset(&fho);
    let offending = mgs
        .symmetric_difference(&fho)
        .chain(sampled.difference(&fho))
        .next()
        .cloned()
        .or_else(|| fho_seqs.iter().zip(&polygonal).find(|(_, &ok)| !ok).map(|(s, _)| s.dim_vectors.clone()));
    Ok(EquivalenceReport {
        passed: mgs_equals_fho && crossings_are_fho && paths_cover,
        mgs,
        fho,
        sampled,
        samples: opts.samples,
        line_realized,
        line_unrealizable,
        line_unknown,
        polygonal_realized,
        mgs_equals_fho,
        crossings_are_fho,
        paths_cover,
        offending,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::named;
    use std::sync::Arc;

    fn a3() -> Catalog {
        Catalog::strings(Arc::new(named::a3_cycle().algebra().unwrap()), PrimeField::new(2).unwrap()).unwrap()
    }

    #[test]
    fn a3_has_nine_maximal_sequences() {
        let cat = a3();
        let seqs = enumerate_maximal_fho(&cat, 1_000_000).unwrap();
        assert_eq!(seqs.len(), 9);
        assert!(seqs.iter().all(|s| s.len() == 4 || s.len() == 5));
    }

    #[test]
    fn torsion_pair_of_everything() {
        let cat = a3();
        let all: Vec<usize> = (0..cat.len()).collect();
        let tp = torsion_pair(&cat, &all);
        assert!(tp.torsion_free.is_empty());
        assert_eq!(tp.torsion.len(), cat.len());
    }

    #[test]
    fn budget_exhaustion_keeps_partial_results() {
        assert!(matches!(enumerate_maximal_fho(&a3(), 2), Err(Error::FhoBudgetExceeded { .. })));
    }

    #[test]
    fn one_vertex_algebra() {
        let qp = named::linear(1);
        let cat = Catalog::strings(Arc::new(qp.algebra().unwrap()), PrimeField::new(2).unwrap()).unwrap();
        let r = verify_equivalence(&qp, &cat, &VerifyOptions { samples: 10, ..VerifyOptions::default() }).unwrap();
        assert!(r.passed);
        assert_eq!(r.fho.iter().cloned().collect::<Vec<_>>(), vec![vec![vec![1]]]);
    }
}
