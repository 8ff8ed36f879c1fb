//! Quivers with potential, Jacobian relations, and mutation of potentials.
//!
//! Potential terms are cyclic words in functional order. Each term is stored
//! at its lexicographically smallest rotation so that equal potentials compare
//! equal.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{BoundQuiver, Relation};
use crate::error::{Error, Result};
use crate::quiver::{Arrow, Quiver, Word};

/// Largest absolute value accepted for a potential coefficient.
pub const MAX_COEFF: u64 = 1 << 30;

/// `coeff * cycle`, where the coefficient is read modulo the field prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PotentialTerm {
    pub coeff: i64,
    pub cycle: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverWithPotential {
    quiver: Quiver,
    potential: Vec<PotentialTerm>,
}

/// Relations generating the Jacobian ideal, one per arrow of the potential.
pub type RelationSet = Vec<Relation>;

fn rotate_min(cycle: &[usize]) -> Word {
    (0..cycle.len())
        .map(|r| cycle[r..].iter().chain(&cycle[..r]).copied().collect::<Word>())
        .min()
        .unwrap_or_default()
}

fn rotate_to_end(cycle: &[usize], pos: usize) -> Word {
    cycle[pos + 1..].iter().chain(&cycle[..=pos]).copied().collect()
}

fn rotate_to_front(cycle: &[usize], pos: usize) -> Word {
    cycle[pos..].iter().chain(&cycle[..pos]).copied().collect()
}

impl QuiverWithPotential {
    pub fn new(quiver: Quiver, potential: Vec<PotentialTerm>) -> Result<Self> {
        quiver.check_no_loops_or_two_cycles()?;
        let mut merged: BTreeMap<Word, i64> = BTreeMap::new();
        for t in potential {
            if t.cycle.iter().any(|&a| a >= quiver.arrows().len()) {
                return Err(Error::InvalidQuiver("potential term uses an unknown arrow".into()));
            }
            if !quiver.is_cycle(&t.cycle) {
                return Err(Error::NonComposable { kind: "cycle", word: quiver.format_word(&t.cycle) });
            }
            if t.coeff.unsigned_abs() > MAX_COEFF {
                return Err(Error::InvalidQuiver(format!("potential coefficient {} is too large", t.coeff)));
            }
            *merged.entry(rotate_min(&t.cycle)).or_insert(0) += t.coeff;
        }
        let potential = merged
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(cycle, coeff)| PotentialTerm { coeff, cycle })
            .collect();
        Ok(Self { quiver, potential })
    }

    /// The quiver with the zero potential.
    pub fn hereditary(quiver: Quiver) -> Result<Self> {
        Self::new(quiver, Vec::new())
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn potential(&self) -> &[PotentialTerm] {
        &self.potential
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    /// Number of cycles in the potential.
    pub fn cycle_count(&self) -> usize {
        self.potential.len()
    }

    /// Cyclic derivatives: `d_a (a1 ... an) = sum over a_i = a of a_{i+1} ... an a1 ... a_{i-1}`.
    pub fn jacobian_relations(&self) -> RelationSet {
        let mut by_arrow: BTreeMap<usize, Vec<(i64, Word)>> = BTreeMap::new();
        for t in &self.potential {
            for (pos, &a) in t.cycle.iter().enumerate() {
                let mut rest = rotate_to_end(&t.cycle, pos);
                rest.pop();
                by_arrow.entry(a).or_default().push((t.coeff, rest));
            }
        }
        by_arrow.into_values().map(Relation::new).filter(|r| !r.is_zero()).collect()
    }

    /// The Jacobian algebra as a bound quiver.
    pub fn algebra(&self) -> Result<BoundQuiver> {
        BoundQuiver::new(self.quiver.clone(), self.jacobian_relations())
    }

    pub fn format_term(&self, t: &PotentialTerm) -> String {
        let body = self.quiver.format_word(&t.cycle);
        match t.coeff {
            1 => body,
            -1 => format!("-{body}"),
            c => format!("{c}{body}"),
        }
    }
}

impl fmt::Display for QuiverWithPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.potential.is_empty() {
            return write!(f, "W = 0");
        }
        let terms: Vec<String> = self.potential.iter().map(|t| self.format_term(t)).collect();
        write!(f, "W = {}", terms.join(" + ").replace("+ -", "- "))
    }
}

/// An arrow at the mutation vertex: `old` indexes the source quiver, `new` the
/// mutated one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Incident {
    pub vertex: usize,
    pub old: usize,
    pub new: usize,
}

/// A pair `(i, j)` with an arrow `gamma: j -> i` closing the triangle through `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrianglePair {
    pub i: usize,
    pub j: usize,
    pub gamma: usize,
    /// Coefficient of `gamma beta_j alpha_i` in the potential, `+1` or `-1`.
    pub sign: i64,
    /// The rescaled correction `F~_p`, in source arrow indices.
    pub f: Vec<(i64, Word)>,
}

/// A pair `(i, j)` with no arrow `j -> i`; a composite arrow `i -> j` appears after mutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenPair {
    pub i: usize,
    pub j: usize,
    /// Index of the new arrow `gamma*: i -> j` in the mutated quiver.
    pub gamma_star: usize,
    /// The correction `G_p'`, in source arrow indices.
    pub g: Vec<(i64, Word)>,
}

/// Mutation of a quiver with potential at `k` together with the bookkeeping
/// needed to transport representations.
#[derive(Clone, Debug)]
pub struct QpMutation {
    pub source: QuiverWithPotential,
    pub target: QuiverWithPotential,
    pub k: usize,
    /// Arrows `alpha_i: i -> k`, becoming `alpha_i*: k -> i`.
    pub alphas: Vec<Incident>,
    /// Arrows `beta_j: k -> j`, becoming `beta_j*: j -> k`.
    pub betas: Vec<Incident>,
    pub triangles: Vec<TrianglePair>,
    pub open: Vec<OpenPair>,
    /// Index in the mutated quiver of every source arrow that survives unchanged.
    pub kept: Vec<Option<usize>>,
}

impl QpMutation {
    pub fn new(qp: &QuiverWithPotential, k: usize) -> Result<Self> {
        let q = qp.quiver();
        let n = q.vertex_count();
        if k >= n {
            return Err(Error::VertexOutOfRange { index: k, n });
        }
        let alpha_arrows: Vec<usize> = q.arrows_into(k).collect();
        let beta_arrows: Vec<usize> = q.arrows_from(k).collect();
        let is: Vec<usize> = alpha_arrows.iter().map(|&a| q.arrow(a).source).collect();
        let js: Vec<usize> = beta_arrows.iter().map(|&b| q.arrow(b).target).collect();
        for (set, name) in [(&is, "into"), (&js, "out of")] {
            let mut sorted = set.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != set.len() {
                return Err(Error::Unsupported(format!("multiple arrows {name} vertex {}", q.label(k))));
            }
        }
        let linked = |x: usize, y: usize| q.arrow_count(x, y) + q.arrow_count(y, x) > 0;
        for (a, &x) in is.iter().enumerate() {
            if is[a + 1..].iter().any(|&y| linked(x, y)) {
                return Err(Error::Unsupported("arrows between two vertices sending arrows to k".into()));
            }
            if js.iter().any(|&j| q.arrow_count(x, j) > 0) {
                return Err(Error::Unsupported("arrow i -> j parallel to a path through k".into()));
            }
            if js.iter().any(|&j| q.arrow_count(j, x) > 1) {
                return Err(Error::Unsupported("multiple arrows j -> i".into()));
            }
        }
        for (b, &x) in js.iter().enumerate() {
            if js[b + 1..].iter().any(|&y| linked(x, y)) {
                return Err(Error::Unsupported("arrows between two vertices receiving arrows from k".into()));
            }
        }

        let alpha_of = |i: usize| alpha_arrows[is.iter().position(|&x| x == i).unwrap()];
        let beta_of = |j: usize| beta_arrows[js.iter().position(|&x| x == j).unwrap()];
        let mut triangles: Vec<TrianglePair> = Vec::new();
        let mut open_pairs: Vec<(usize, usize)> = Vec::new();
        let mut sorted_is = is.clone();
        sorted_is.sort_unstable();
        let mut sorted_js = js.clone();
        sorted_js.sort_unstable();
        for &i in &sorted_is {
            for &j in &sorted_js {
                match q.arrows().iter().position(|a| a.source == j && a.target == i) {
                    Some(gamma) => triangles.push(TrianglePair { i, j, gamma, sign: 0, f: Vec::new() }),
                    None => open_pairs.push((i, j)),
                }
            }
        }
        let gammas: Vec<usize> = triangles.iter().map(|t| t.gamma).collect();
        let gamma_pos = |a: usize| gammas.iter().position(|&g| g == a);
        let mut g_terms: Vec<Vec<(i64, Word)>> = vec![Vec::new(); open_pairs.len()];
        let mut f_raw: Vec<Vec<(i64, Word)>> = vec![Vec::new(); triangles.len()];
        let mut w0: Vec<PotentialTerm> = Vec::new();

        for t in qp.potential() {
            let w = &t.cycle;
            let alpha_hits: Vec<usize> = (0..w.len()).filter(|&p| alpha_arrows.contains(&w[p])).collect();
            let gamma_hits: Vec<usize> = (0..w.len()).filter(|&p| gamma_pos(w[p]).is_some()).collect();
            if alpha_hits.len() > 1 {
                return Err(Error::Unsupported(format!(
                    "potential term {} passes through the mutation vertex twice",
                    qp.format_term(t)
                )));
            }
            if let Some(&pos) = alpha_hits.first() {
                let rot = rotate_to_end(w, pos);
                let (alpha, beta) = (rot[rot.len() - 1], rot[rot.len() - 2]);
                let (i, j) = (q.arrow(alpha).source, q.arrow(beta).target);
                let x = &rot[..rot.len() - 2];
                if let Some(tp) = triangles.iter_mut().find(|tp| tp.i == i && tp.j == j) {
                    if x != [tp.gamma] {
                        return Err(Error::Unsupported(format!(
                            "potential term {} would have to be absorbed into the arrow {}",
                            qp.format_term(t),
                            q.arrow(tp.gamma).id
                        )));
                    }
                    tp.sign += t.coeff;
                } else {
                    if x.iter().any(|&a| gamma_pos(a).is_some()) {
                        return Err(Error::Unsupported(format!(
                            "potential term {} couples a triangle arrow with a path through k",
                            qp.format_term(t)
                        )));
                    }
                    let p = open_pairs.iter().position(|&pp| pp == (i, j)).unwrap();
                    g_terms[p].push((-t.coeff, x.to_vec()));
                }
                continue;
            }
            match gamma_hits.len() {
                0 => w0.push(t.clone()),
                1 => {
                    let rot = rotate_to_front(w, gamma_hits[0]);
                    let p = gamma_pos(rot[0]).unwrap();
                    f_raw[p].push((t.coeff, rot[1..].to_vec()));
                }
                _ => {
                    return Err(Error::Unsupported(format!(
                        "potential term {} contains two triangle arrows",
                        qp.format_term(t)
                    )))
                }
            }
        }
        for (tp, f) in triangles.iter_mut().zip(f_raw) {
            match tp.sign {
                0 => {
                    return Err(Error::Degenerate(format!(
                        "no term closes the triangle {} -> {} -> {} -> {}",
                        q.label(tp.i),
                        q.label(k),
                        q.label(tp.j),
                        q.label(tp.i)
                    )))
                }
                1 | -1 => {}
                c => return Err(Error::Unsupported(format!("triangle coefficient {c} is not a unit sign"))),
            }
            tp.f = f.into_iter().map(|(c, y)| (c * tp.sign, y)).collect();
        }

        // Mutated quiver: reverse arrows at k, drop the gamma_p, add gamma*_p'.
        let mut arrows = Vec::new();
        let mut kept = vec![None; q.arrows().len()];
        let mut alphas = Vec::new();
        let mut betas = Vec::new();
        let mut ids: Vec<String> = Vec::new();
        let fresh = |base: String, ids: &Vec<String>| {
            let mut id = base;
            while ids.contains(&id) || q.arrows().iter().any(|a| a.id == id) {
                id.push('\'');
            }
            id
        };
        for (idx, a) in q.arrows().iter().enumerate() {
            if alpha_arrows.contains(&idx) {
                let id = fresh(format!("{}*", a.id), &ids);
                alphas.push(Incident { vertex: a.source, old: idx, new: arrows.len() });
                arrows.push(Arrow { id: id.clone(), source: k, target: a.source });
                ids.push(id);
            } else if beta_arrows.contains(&idx) {
                let id = fresh(format!("{}*", a.id), &ids);
                betas.push(Incident { vertex: a.target, old: idx, new: arrows.len() });
                arrows.push(Arrow { id: id.clone(), source: a.target, target: k });
                ids.push(id);
            } else if gamma_pos(idx).is_none() {
                kept[idx] = Some(arrows.len());
                arrows.push(a.clone());
                ids.push(a.id.clone());
            }
        }
        let mut open = Vec::new();
        for (&(i, j), g) in open_pairs.iter().zip(g_terms) {
            let id = fresh(format!("[{}{}]", q.arrow(beta_of(j)).id, q.arrow(alpha_of(i)).id), &ids);
            open.push(OpenPair { i, j, gamma_star: arrows.len(), g });
            arrows.push(Arrow { id: id.clone(), source: i, target: j });
            ids.push(id);
        }
        let quiver = Quiver::new(q.labels().to_vec(), arrows)?;

        let new_alpha = |i: usize| alphas.iter().find(|x| x.vertex == i).unwrap().new;
        let new_beta = |j: usize| betas.iter().find(|x| x.vertex == j).unwrap().new;
        let map = |w: &[usize]| -> Word { w.iter().map(|&a| kept[a].expect("kept arrow")).collect() };
        let mut terms = Vec::new();
        for tp in &triangles {
            for (c, y) in &tp.f {
                let mut word = vec![new_alpha(tp.i), new_beta(tp.j)];
                word.extend(map(y));
                terms.push(PotentialTerm { coeff: *c, cycle: word });
            }
        }
        for op in &open {
            terms.push(PotentialTerm { coeff: -1, cycle: vec![new_alpha(op.i), new_beta(op.j), op.gamma_star] });
            for (c, x) in &op.g {
                let mut word = map(x);
                word.push(op.gamma_star);
                terms.push(PotentialTerm { coeff: -c, cycle: word });
            }
        }
        for t in w0 {
            terms.push(PotentialTerm { coeff: t.coeff, cycle: map(&t.cycle) });
        }
        let target = QuiverWithPotential::new(quiver, terms)?;
        Ok(Self { source: qp.clone(), target, k, alphas, betas, triangles, open, kept })
    }
}

/// The mutation `mu_k(Q, W)`, reduced: the 2-cycles created at `k` are cancelled.
pub fn mutate_qp(qp: &QuiverWithPotential, k: usize) -> Result<QuiverWithPotential> {
    Ok(QpMutation::new(qp, k)?.target)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// alpha: 2 -> 1, beta: 3 -> 2, gamma: 1 -> 3, W = alpha beta gamma.
    fn a3() -> QuiverWithPotential {
        let q = Quiver::from_edges(3, &[("alpha", 1, 0), ("beta", 2, 1), ("gamma", 0, 2)]).unwrap();
        QuiverWithPotential::new(q, vec![PotentialTerm { coeff: 1, cycle: vec![0, 1, 2] }]).unwrap()
    }

    #[test]
    fn a3_relations_are_length_two_paths() {
        let rels = a3().jacobian_relations();
        let words: Vec<Word> = rels.iter().map(|r| r.terms()[0].1.clone()).collect();
        // d_alpha = beta gamma, d_beta = gamma alpha, d_gamma = alpha beta
        assert_eq!(words, vec![vec![1, 2], vec![2, 0], vec![0, 1]]);
        let alg = a3().algebra().unwrap();
        for w in &words {
            assert!(alg.quiver().word_endpoints(w).is_some());
        }
    }

    #[test]
    fn rotations_are_merged() {
        let q = a3().quiver().clone();
        let qp = QuiverWithPotential::new(
            q,
            vec![PotentialTerm { coeff: 1, cycle: vec![1, 2, 0] }, PotentialTerm { coeff: -1, cycle: vec![0, 1, 2] }],
        )
        .unwrap();
        assert!(qp.potential().is_empty());
    }

    #[test]
    fn rejects_open_words() {
        let q = a3().quiver().clone();
        assert!(QuiverWithPotential::new(q, vec![PotentialTerm { coeff: 1, cycle: vec![0, 1] }]).is_err());
    }

    #[test]
    fn mutation_at_triangle_vertex_linearises() {
        let m = QpMutation::new(&a3(), 2).unwrap();
        assert!(m.target.potential().is_empty());
        let q = m.target.quiver();
        assert_eq!(q.arrows().len(), 2);
        // gamma* : 3 -> 1 and beta* : 2 -> 3
        assert_eq!(q.arrow_count(2, 0), 1);
        assert_eq!(q.arrow_count(1, 2), 1);
    }

    #[test]
    fn mutation_creates_open_triangle() {
        // linear 1 -> 2 -> 3 mutated at 2 gains a 3-cycle with coefficient -1
        let q = Quiver::from_edges(3, &[("a", 0, 1), ("b", 1, 2)]).unwrap();
        let qp = QuiverWithPotential::hereditary(q).unwrap();
        let m = mutate_qp(&qp, 1).unwrap();
        assert_eq!(m.quiver().arrows().len(), 3);
        assert_eq!(m.potential().len(), 1);
        assert_eq!(m.potential()[0].coeff, -1);
        assert_eq!(m.quiver().arrow(2).id, "[ba]");
    }

    #[test]
    fn degenerate_triangle_is_rejected() {
        let q = a3().quiver().clone();
        let qp = QuiverWithPotential::hereditary(q).unwrap();
        assert!(matches!(mutate_qp(&qp, 2), Err(Error::Degenerate(_))));
    }
}
