//! Cuts of a potential, the alternating-diagram test for tilted cuts, module
//! counts, maximal green sequences built from cuts, and length bounds.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::algebra::{BoundQuiver, Relation};
use crate::catalog::{Catalog, StringWord};
use crate::error::{Error, Result};
use crate::exchange::{initial_seed, mgs_length_extrema, ExtExchangeMatrix, GreenSequence};
use crate::fho::is_maximal_fho;
use crate::qp::QuiverWithPotential;
use crate::quiver::{Arrow, Quiver};

/// One arrow deleted from every potential cycle, and the algebra left behind.
#[derive(Clone, Debug)]
pub struct Cut {
    /// Deleted arrows, as sorted source arrow indices.
    pub deleted: Vec<usize>,
    pub deleted_ids: Vec<String>,
    /// The quiver without the deleted arrows, with the Jacobian relations that avoid them.
    pub residual: BoundQuiver,
}

impl Cut {
    pub fn new(qp: &QuiverWithPotential, deleted: &[usize]) -> Result<Self> {
        let q = qp.quiver();
        let mut deleted = deleted.to_vec();
        deleted.sort_unstable();
        deleted.dedup();
        let mut map = vec![None; q.arrows().len()];
        let mut arrows: Vec<Arrow> = Vec::new();
        for (i, a) in q.arrows().iter().enumerate() {
            if !deleted.contains(&i) {
                map[i] = Some(arrows.len());
                arrows.push(a.clone());
            }
        }
        let relations = qp
            .jacobian_relations()
            .into_iter()
            .filter(|r| r.terms().iter().all(|(_, w)| w.iter().all(|a| map[*a].is_some())))
            .map(|r| Relation::new(r.terms().iter().map(|(c, w)| (*c, w.iter().map(|a| map[*a].unwrap()).collect()))))
            .collect();
        let residual = BoundQuiver::new(Quiver::new(q.labels().to_vec(), arrows)?, relations)?;
        let deleted_ids = deleted.iter().map(|&a| q.arrow(a).id.clone()).collect();
        Ok(Self { deleted, deleted_ids, residual })
    }

    pub fn by_ids(qp: &QuiverWithPotential, ids: &[&str]) -> Result<Self> {
        let idx = ids.iter().map(|id| qp.quiver().arrow_index(id)).collect::<Result<Vec<_>>>()?;
        Self::new(qp, &idx)
    }
}

/// Every choice of one arrow per potential cycle, without repeats.
pub fn cuts(qp: &QuiverWithPotential) -> Result<Vec<Cut>> {
    let mut choices: BTreeSet<Vec<usize>> = BTreeSet::new();
    choices.insert(Vec::new());
    for t in qp.potential() {
        let arrows: BTreeSet<usize> = t.cycle.iter().copied().collect();
        let mut next = BTreeSet::new();
        for c in &choices {
            for &a in &arrows {
                let mut d = c.clone();
                if !d.contains(&a) {
                    d.push(a);
                    d.sort_unstable();
                }
                next.insert(d);
            }
        }
        choices = next;
    }
    choices.iter().map(|d| Cut::new(qp, d)).collect()
}

/// Direction of a deleted arrow relative to the walk along a string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Orientation {
    Forward,
    Backward,
}

/// The orientations of the deleted arrows met along the string, in order;
/// everything between them collapses to a point.
pub fn module_diagram(word: &StringWord, cut: &Cut) -> Vec<Orientation> {
    word.letters
        .iter()
        .filter(|l| cut.deleted.contains(&l.arrow))
        .map(|l| if l.inverse { Orientation::Backward } else { Orientation::Forward })
        .collect()
}

pub fn is_alternating(diagram: &[Orientation]) -> bool {
    diagram.windows(2).all(|w| w[0] != w[1])
}

/// Every catalog module has an alternating diagram. Only defined when every
/// potential cycle is a triangle and the catalog consists of string modules.
pub fn assem_tilted(qp: &QuiverWithPotential, cut: &Cut, cat: &Catalog) -> Result<bool> {
    if qp.potential().iter().any(|t| t.cycle.len() != 3) {
        return Err(Error::Unsupported("the alternating test needs a potential made of triangles".into()));
    }
    let mut ok = true;
    for e in cat.entries() {
        let w = e.string.as_ref().ok_or_else(|| Error::Unsupported(format!("module {} is not a string module", e.name)))?;
        ok &= is_alternating(&module_diagram(w, cut));
    }
    Ok(ok)
}

/// Catalog modules vanishing on every deleted arrow.
pub fn c_modules(cut: &Cut, cat: &Catalog) -> Vec<usize> {
    (0..cat.len()).filter(|&i| cut.deleted.iter().all(|&a| cat.module(i).mat(a).is_zero())).collect()
}

pub fn c_module_count(cut: &Cut, cat: &Catalog) -> usize {
    c_modules(cut, cat).len()
}

/// Orders `modules` so that `Hom(M_i, M_j) = 0` for `i < j`: a topological order
/// of the reversed nonzero-Hom digraph, smallest index first. `None` if that
/// digraph has a cycle.
pub fn hom_order(cat: &Catalog, modules: &[usize]) -> Option<Vec<usize>> {
    let n = modules.len();
    // a must come after b when Hom(M_a, M_b) != 0
    let mut indeg = vec![0usize; n];
    for a in 0..n {
        for b in 0..n {
            if a != b && cat.hom(modules[a], modules[b]) != 0 {
                indeg[a] += 1;
            }
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&a| indeg[a] == 0).collect();
    let mut out = Vec::with_capacity(n);
    while let Some(&b) = ready.iter().next() {
        ready.remove(&b);
        out.push(modules[b]);
        for a in 0..n {
            if a != b && cat.hom(modules[a], modules[b]) != 0 {
                indeg[a] -= 1;
                if indeg[a] == 0 {
                    ready.insert(a);
                }
            }
        }
    }
    (out.len() == n).then_some(out)
}

/// The C-modules of a cut in hom-orthogonal order, if their Hom digraph is acyclic.
pub fn fho_from_cut(cut: &Cut, cat: &Catalog) -> Option<Vec<usize>> {
    hom_order(cat, &c_modules(cut, cat))
}

/// Replays a sequence of modules as mutations, matching each dimension vector to
/// a green c-vector. The result must end with no green vertex.
pub fn mgs_from_modules(seed: &ExtExchangeMatrix, cat: &Catalog, seq: &[usize]) -> Result<GreenSequence> {
    let mut m = seed.clone();
    let mut indices = Vec::with_capacity(seq.len());
    for &x in seq {
        let d = cat.dims(x);
        let k = (0..m.n())
            .find(|&k| m.c_vector(k).map(|c| c == d).unwrap_or(false))
            .ok_or_else(|| Error::Precondition(format!("{} is not a c-vector at step {}", cat.entry(x).name, indices.len())))?;
        indices.push(k);
        m = m.mutate(k)?;
    }
    if !m.green_vertices().is_empty() {
        return Err(Error::Precondition("the sequence leaves green vertices".into()));
    }
    Ok(GreenSequence::replay(seed, &indices)?.0)
}

/// A maximal green sequence of length `#C-modules` built from a cut whose
/// C-modules form a maximal hom-orthogonal sequence.
pub fn construct_mgs_from_cut(qp: &QuiverWithPotential, cut: &Cut, cat: &Catalog) -> Result<GreenSequence> {
    let seq = fho_from_cut(cut, cat).ok_or_else(|| Error::Precondition("the C-module Hom digraph has a cycle".into()))?;
    if !is_maximal_fho(cat, &seq) {
        return Err(Error::Precondition("the C-modules do not form a maximal hom-orthogonal sequence".into()));
    }
    mgs_from_modules(&initial_seed(qp.quiver())?, cat, &seq)
}

/// Shortest directed cycle (at least two vertices) through the allowed Schurian
/// modules in the nonzero-Hom digraph.
fn shortest_cycle(cat: &Catalog, allowed: &[usize]) -> Option<Vec<usize>> {
    let mut best: Option<Vec<usize>> = None;
    for &s in allowed {
        // BFS from s back to s
        let mut prev: Vec<Option<usize>> = vec![None; cat.len()];
        let mut seen = vec![false; cat.len()];
        let mut queue = VecDeque::from([s]);
        seen[s] = true;
        let mut closing = None;
        'bfs: while let Some(u) = queue.pop_front() {
            for &v in allowed {
                if v == u || cat.hom(u, v) == 0 {
                    continue;
                }
                if v == s {
                    closing = Some(u);
                    break 'bfs;
                }
                if !seen[v] {
                    seen[v] = true;
                    prev[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        if let Some(mut u) = closing {
            let mut cyc = vec![u];
            while u != s {
                u = prev[u].unwrap();
                cyc.push(u);
            }
            cyc.reverse();
            if best.as_ref().map_or(true, |b| cyc.len() < b.len()) {
                best = Some(cyc);
            }
        }
    }
    best
}

/// Vertex-disjoint cycles of the nonzero-Hom digraph on Schurian modules, taken
/// greedily shortest first. Each cycle must lose a module in any hom-orthogonal
/// sequence.
pub fn disjoint_hom_cycles(cat: &Catalog) -> Vec<Vec<usize>> {
    let mut allowed = cat.schurian_indices();
    let mut out = Vec::new();
    while let Some(c) = shortest_cycle(cat, &allowed) {
        allowed.retain(|x| !c.contains(x));
        out.push(c);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CutReport {
    pub deleted: Vec<String>,
    /// Alternating diagrams (triangle potentials) or an acyclic C-module Hom digraph (otherwise).
    pub tilted: bool,
    pub c_modules: usize,
    /// Length of the maximal green sequence built from the cut, if the construction succeeds.
    pub mgs_len: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub k: usize,
    pub indec_count: usize,
    pub min_len: Option<usize>,
    pub max_len: Option<usize>,
    pub lower_bound: usize,
    pub upper_bound: usize,
    /// Every upper bound that applies, by name.
    pub upper_bounds: Vec<(String, usize)>,
    pub hom_cycles: Vec<Vec<String>>,
    pub cuts: Vec<CutReport>,
    /// Longest maximal green sequence constructed from a cut.
    pub achieved: Option<usize>,
    /// The constructed length meets the upper bound.
    pub certified: bool,
    /// Maximal length equals the best cut count; `None` when the maximum is unknown
    /// and not certified.
    pub conjecture: Option<bool>,
}

fn binom2(n: usize) -> usize {
    n * (n.saturating_sub(1)) / 2
}

/// Assembles the bounds. `budget` is the node budget for exhaustive enumeration
/// of the extremal lengths; `None` skips the enumeration.
pub fn bounds_report(qp: &QuiverWithPotential, cat: &Catalog, budget: Option<usize>) -> Result<BoundsReport> {
    let n = qp.vertex_count();
    let k = qp.cycle_count();
    let indec = cat.len();
    let extrema = match budget {
        Some(b) => match mgs_length_extrema(&initial_seed(qp.quiver())?, b) {
            Ok(e) => Some(e),
            Err(Error::GreenBudgetExceeded { .. }) => None,
            Err(e) => return Err(e),
        },
        None => None,
    };
    let triangles = qp.potential().iter().all(|t| t.cycle.len() == 3);
    let mut cut_reports = Vec::new();
    for cut in cuts(qp)? {
        let tilted = if triangles && cat.entries().iter().all(|e| e.string.is_some()) {
            assem_tilted(qp, &cut, cat)?
        } else {
            fho_from_cut(&cut, cat).is_some()
        };
        let mgs_len = construct_mgs_from_cut(qp, &cut, cat).ok().map(|g| g.len());
        cut_reports.push(CutReport { deleted: cut.deleted_ids.clone(), tilted, c_modules: c_module_count(&cut, cat), mgs_len });
    }
    let lower_bound = cut_reports.iter().filter(|c| c.tilted).map(|c| c.c_modules).max().unwrap_or(0);
    let cycles = disjoint_hom_cycles(cat);
    let mut upper_bounds = vec![("indecomposables minus disjoint Hom cycles".to_string(), indec - cycles.len())];
    if triangles && indec == binom2(n + 1) {
        upper_bounds.push(("type A: binom(n+1, 2) - k".to_string(), binom2(n + 1) - k));
    }
    if let Some((p, _)) = extrema {
        upper_bounds.push(("indecomposables - min length + n".to_string(), indec + n - p));
    }
    let upper_bound = upper_bounds.iter().map(|(_, v)| *v).min().unwrap_or(indec);
    let achieved = cut_reports.iter().filter_map(|c| c.mgs_len).max();
    let certified = achieved == Some(upper_bound);
    let conjecture = match extrema {
        Some((_, m)) => Some(m == lower_bound),
        None if certified => Some(upper_bound == lower_bound),
        None => None,
    };
    Ok(BoundsReport {
        n,
        k,
        indec_count: indec,
        min_len: extrema.map(|e| e.0),
        max_len: extrema.map(|e| e.1),
        lower_bound,
        upper_bound,
        upper_bounds,
        hom_cycles: cycles.iter().map(|c| c.iter().map(|&i| cat.support_label(i)).collect()).collect(),
        cuts: cut_reports,
        achieved,
        certified,
        conjecture,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::named;
    use std::sync::Arc;

    fn cat(qp: &QuiverWithPotential) -> Catalog {
        Catalog::strings(Arc::new(qp.algebra().unwrap()), PrimeField::new(2).unwrap()).unwrap()
    }

    #[test]
    fn a3_cut_keeps_one_relation() {
        let qp = named::a3_cycle();
        let cut = Cut::by_ids(&qp, &["gamma"]).unwrap();
        assert_eq!(cut.residual.quiver().arrows().len(), 2);
        assert_eq!(cut.residual.relations().len(), 1);
        assert_eq!(cuts(&qp).unwrap().len(), 3);
    }

    #[test]
    fn diagrams_alternate() {
        assert!(is_alternating(&[Orientation::Forward, Orientation::Backward, Orientation::Forward]));
        assert!(!is_alternating(&[Orientation::Backward, Orientation::Backward]));
        assert!(is_alternating(&[]));
    }

    #[test]
    fn a5_cut_orders_c_modules() {
        let qp = named::a5_example();
        let c = cat(&qp);
        let cut = Cut::by_ids(&qp, &named::A5_CUT).unwrap();
        let seq = fho_from_cut(&cut, &c).unwrap();
        assert_eq!(seq.len(), 13);
        assert!(is_maximal_fho(&c, &seq));
        assert_eq!(construct_mgs_from_cut(&qp, &cut, &c).unwrap().len(), 13);
    }

    #[test]
    fn hom_cycles_are_disjoint_cycles() {
        let c = cat(&named::d4_cycle());
        let cycles = disjoint_hom_cycles(&c);
        let mut seen = BTreeSet::new();
        for cyc in &cycles {
            for (i, &x) in cyc.iter().enumerate() {
                assert!(seen.insert(x));
                assert_ne!(c.hom(x, cyc[(i + 1) % cyc.len()]), 0);
            }
        }
    }

    #[test]
    fn hom_order_rejects_cycles() {
        let c = cat(&named::a3_cycle());
        let all: Vec<usize> = (0..c.len()).collect();
        assert!(hom_order(&c, &all).is_none());
    }
}
