//! JSON problem files, module files and mutation-sequence strings.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::BoundQuiver;
use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::field::{Mat, PrimeField};
use crate::qp::{PotentialTerm, QuiverWithPotential};
use crate::quiver::{Arrow, Quiver};
use crate::rep::Representation;

/// A vertex label given either as a string or as a bare number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Name(String),
    Number(u64),
}

impl Label {
    pub fn as_string(&self) -> String {
        match self {
            Label::Name(s) => s.clone(),
            Label::Number(n) => n.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowJson {
    pub id: String,
    pub src: Label,
    pub tgt: Label,
}

fn one() -> i64 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    #[serde(default = "one")]
    pub coeff: i64,
    /// Arrow ids, leftmost applied last.
    pub cycle: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QpJson {
    pub vertices: Vec<Label>,
    pub arrows: Vec<ArrowJson>,
    #[serde(default)]
    pub potential: Vec<TermJson>,
}

impl QpJson {
    pub fn to_qp(&self) -> Result<QuiverWithPotential> {
        let labels: Vec<String> = self.vertices.iter().map(Label::as_string).collect();
        let index = |l: &Label| {
            let s = l.as_string();
            labels.iter().position(|x| *x == s).ok_or(Error::UnknownVertex(s))
        };
        let arrows = self
            .arrows
            .iter()
            .map(|a| Ok(Arrow { id: a.id.clone(), source: index(&a.src)?, target: index(&a.tgt)? }))
            .collect::<Result<Vec<_>>>()?;
        let q = Quiver::new(labels, arrows)?;
        let potential = self
            .potential
            .iter()
            .map(|t| {
                if t.cycle.is_empty() {
                    return Err(Error::InvalidQuiver("empty potential term".into()));
                }
                let cycle = t.cycle.iter().map(|id| q.arrow_index(id)).collect::<Result<Vec<_>>>()?;
                Ok(PotentialTerm { coeff: t.coeff, cycle })
            })
            .collect::<Result<Vec<_>>>()?;
        QuiverWithPotential::new(q, potential)
    }

    pub fn from_qp(qp: &QuiverWithPotential) -> Self {
        let q = qp.quiver();
        Self {
            vertices: q.labels().iter().map(|l| Label::Name(l.clone())).collect(),
            arrows: q
                .arrows()
                .iter()
                .map(|a| ArrowJson {
                    id: a.id.clone(),
                    src: Label::Name(q.label(a.source).to_string()),
                    tgt: Label::Name(q.label(a.target).to_string()),
                })
                .collect(),
            potential: qp
                .potential()
                .iter()
                .map(|t| TermJson { coeff: t.coeff, cycle: t.cycle.iter().map(|&a| q.arrow(a).id.clone()).collect() })
                .collect(),
        }
    }
}

/// `{dims, mats}` with one `dims[tgt] x dims[src]` matrix per arrow id; missing
/// arrows act by zero and entries are read modulo the field prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson {
    pub dims: Vec<usize>,
    #[serde(default)]
    pub mats: BTreeMap<String, Vec<Vec<i64>>>,
}

/// Largest total dimension accepted from a module file.
pub const MAX_MODULE_DIM: usize = 4096;

impl ModuleJson {
    /// Shape-checked; relations are not evaluated.
    pub fn to_unchecked(&self, algebra: &Arc<BoundQuiver>, field: PrimeField) -> Result<Representation> {
        let q = algebra.quiver();
        if self.dims.len() != q.vertex_count() {
            return Err(Error::ShapeMismatch(format!("{} dimensions for {} vertices", self.dims.len(), q.vertex_count())));
        }
        if self.dims.iter().try_fold(0usize, |acc, &d| acc.checked_add(d)).map_or(true, |t| t > MAX_MODULE_DIM) {
            return Err(Error::ShapeMismatch(format!("total dimension above {MAX_MODULE_DIM}")));
        }
        for id in self.mats.keys() {
            q.arrow_index(id)?;
        }
        let mats = q
            .arrows()
            .iter()
            .map(|a| {
                let (r, c) = (self.dims[a.target], self.dims[a.source]);
                match self.mats.get(&a.id) {
                    None => Ok(Mat::zeros(r, c)),
                    Some(rows) => {
                        if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                            return Err(Error::ShapeMismatch(format!("arrow {:?} needs a {r}x{c} matrix", a.id)));
                        }
                        let rows: Vec<Vec<u32>> =
                            rows.iter().map(|row| row.iter().map(|&v| field.reduce(v)).collect()).collect();
                        Ok(Mat::from_rows(&rows, c))
                    }
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Representation::unchecked(algebra.clone(), field, self.dims.clone(), mats)
    }

    /// Shape-checked and every relation verified.
    pub fn to_module(&self, algebra: &Arc<BoundQuiver>, field: PrimeField) -> Result<Representation> {
        let m = self.to_unchecked(algebra, field)?;
        m.check_relations()?;
        Ok(m)
    }

    pub fn from_module(m: &Representation) -> Self {
        let q = m.algebra().quiver();
        let mats = q
            .arrows()
            .iter()
            .zip(m.mats())
            .filter(|(_, mat)| !mat.is_zero())
            .map(|(a, mat)| (a.id.clone(), mat.to_rows().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect()))
            .collect();
        Self { dims: m.dims().to_vec(), mats }
    }
}

fn default_prime() -> u32 {
    2
}

fn default_budget() -> usize {
    50_000_000
}

/// A quiver with potential plus run parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub qp: QpJson,
    #[serde(default = "default_prime")]
    pub field_prime: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modules: Option<Vec<ModuleJson>>,
    #[serde(default = "default_budget")]
    pub search_budget: usize,
    #[serde(default)]
    pub rng_seed: u64,
}

/// A validated problem file.
#[derive(Clone, Debug)]
pub struct Problem {
    pub file: ProblemFile,
    pub qp: QuiverWithPotential,
    pub field: PrimeField,
    pub algebra: Arc<BoundQuiver>,
    /// Explicit modules, each checked against the relations.
    pub modules: Option<Vec<Representation>>,
}

impl ProblemFile {
    pub fn from_qp(qp: &QuiverWithPotential, field_prime: u32) -> Self {
        Self { qp: QpJson::from_qp(qp), field_prime, modules: None, search_budget: default_budget(), rng_seed: 0 }
    }

    /// Builds and checks everything the file describes.
    pub fn validate(self) -> Result<Problem> {
        let field = PrimeField::new(self.field_prime)?;
        if self.search_budget == 0 {
            return Err(Error::Precondition("search_budget must be positive".into()));
        }
        let qp = self.qp.to_qp()?;
        let algebra = Arc::new(qp.algebra()?);
        let modules = match &self.modules {
            None => None,
            Some(ms) => Some(ms.iter().map(|m| m.to_module(&algebra, field)).collect::<Result<Vec<_>>>()?),
        };
        Ok(Problem { file: self, qp, field, algebra, modules })
    }
}

impl Problem {
    /// The explicit modules if given, otherwise all string modules.
    pub fn catalog(&self) -> Result<Catalog> {
        match &self.modules {
            Some(ms) => Catalog::from_modules(self.algebra.clone(), self.field, ms.clone()),
            None => Catalog::strings(self.algebra.clone(), self.field),
        }
    }
}

/// Parses and validates a problem file.
pub fn parse_problem(text: &str) -> Result<Problem> {
    let file: ProblemFile = serde_json::from_str(text)?;
    file.validate()
}

/// Parses one module file against an algebra and checks the relations.
pub fn parse_module(text: &str, algebra: &Arc<BoundQuiver>, field: PrimeField) -> Result<Representation> {
    let m: ModuleJson = serde_json::from_str(text)?;
    m.to_module(algebra, field)
}

/// Mutation indices `1..=n` separated by spaces or commas, e.g. `3 2 3 1 3`.
/// Returns zero-based indices.
pub fn parse_sequence(text: &str, n: usize) -> Result<Vec<usize>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .enumerate()
        .map(|(pos, t)| {
            let k: usize = t.parse().map_err(|_| Error::Parse(format!("position {}: {t:?} is not an index", pos + 1)))?;
            if k == 0 || k > n {
                return Err(Error::Parse(format!("position {}: index {k} is outside 1..={n}", pos + 1)));
            }
            Ok(k - 1)
        })
        .collect()
}

/// Dimension vectors separated by `;`, entries by `,`, e.g. `0,0,1; 0,1,1`.
/// Every vector must have `n` nonnegative entries.
pub fn parse_dims_sequence(text: &str, n: usize) -> Result<Vec<Vec<i64>>> {
    text.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .enumerate()
        .map(|(pos, t)| {
            let v = t
                .split(',')
                .map(|x| x.trim().parse::<i64>().ok().filter(|&d| d >= 0))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::Parse(format!("position {}: {t:?} is not a dimension vector", pos + 1)))?;
            if v.len() != n {
                return Err(Error::Parse(format!("position {}: {} entries for {n} vertices", pos + 1, v.len())));
            }
            Ok(v)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    #[test]
    fn qp_json_round_trip() {
        let qp = named::a5_example();
        let back = QpJson::from_qp(&qp).to_qp().unwrap();
        assert_eq!(back, qp);
    }

    #[test]
    fn numeric_labels() {
        let text = r#"{"qp":{"vertices":[1,2],"arrows":[{"id":"a","src":1,"tgt":2}]}}"#;
        let p = parse_problem(text).unwrap();
        assert_eq!(p.qp.quiver().arrow(0).target, 1);
        assert_eq!(p.field.p(), 2);
    }

    #[test]
    fn sequence_errors_name_position() {
        assert_eq!(parse_sequence("3 2,3 1 3", 3).unwrap(), vec![2, 1, 2, 0, 2]);
        assert!(parse_sequence("", 3).unwrap().is_empty());
        let e = parse_sequence("3 2 3 1 5", 3).unwrap_err().to_string();
        assert!(e.contains("position 5"), "{e}");
    }

    #[test]
    fn dims_sequences() {
        assert_eq!(parse_dims_sequence("0,0,1; 0,1,1;", 3).unwrap(), vec![vec![0, 0, 1], vec![0, 1, 1]]);
        assert!(parse_dims_sequence("0,0", 3).is_err());
        assert!(parse_dims_sequence("0,-1,0", 3).is_err());
    }

    #[test]
    fn relation_violation_rejected() {
        let qp = named::a3_cycle();
        let alg = Arc::new(qp.algebra().unwrap());
        let f = PrimeField::new(2).unwrap();
        // alpha beta != 0 on a module supported at 1, 2, 3
        let text = r#"{"dims":[1,1,1],"mats":{"alpha":[[1]],"beta":[[1]]}}"#;
        assert!(matches!(parse_module(text, &alg, f), Err(Error::RelationViolated { .. })));
        let ok = r#"{"dims":[1,1,0],"mats":{"alpha":[[1]]}}"#;
        let m = parse_module(ok, &alg, f).unwrap();
        assert_eq!(ModuleJson::from_module(&m).to_module(&alg, f).unwrap().dims(), m.dims());
    }

    #[test]
    fn bad_shapes_rejected() {
        let alg = Arc::new(named::a3_cycle().algebra().unwrap());
        let f = PrimeField::new(3).unwrap();
        for text in [
            r#"{"dims":[1,1],"mats":{}}"#,
            r#"{"dims":[1,1,0],"mats":{"alpha":[[1,0]]}}"#,
            r#"{"dims":[1,1,0],"mats":{"nope":[[1]]}}"#,
            r#"{"dims":[100000,0,0]}"#,
        ] {
            assert!(parse_module(text, &alg, f).is_err(), "{text}");
        }
    }
}
