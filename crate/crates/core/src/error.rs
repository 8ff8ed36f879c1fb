use thiserror::Error;

use crate::exchange::GreenSequence;
use crate::fho::FhoSequence;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a supported prime (need a prime below 65536)")]
    InvalidPrime(u32),

    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("vertex index {index} out of range for {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },

    #[error("unknown vertex label {0:?}")]
    UnknownVertex(String),

    #[error("unknown arrow id {0:?}")]
    UnknownArrow(String),

    #[error("arrow word is not a composable {kind}: {word}")]
    NonComposable { kind: &'static str, word: String },

    #[error("integer overflow in exchange-matrix mutation")]
    Overflow,

    #[error("sign coherence violated: column {column} of the c-matrix after {indices:?}")]
    SignCoherence { column: usize, indices: Vec<usize> },

    #[error("green-sequence search budget of {budget} nodes exceeded ({} sequences found)", .found.len())]
    GreenBudgetExceeded { budget: usize, found: Box<Vec<GreenSequence>> },

    #[error("hom-orthogonal search budget of {budget} nodes exceeded ({} sequences found)", .found.len())]
    FhoBudgetExceeded { budget: usize, found: Box<Vec<FhoSequence>> },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("degenerate potential: {0}")]
    Degenerate(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("relation {relation} does not vanish on the representation")]
    RelationViolated { relation: String },

    #[error("submodule enumeration needs total dimension {total} but the budget is {limit}")]
    SubmoduleBudget { total: usize, limit: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("step {index} of an iterated reflection failed: {source}")]
    IteratedStep { index: usize, source: Box<Error> },

    #[error("base point is not generic: walls of {first} and {second} are met at the same time")]
    NotGeneric { first: String, second: String },

    #[error("base point is not generic: crossing of {0} is not in the stable interior")]
    NotInterior(String),

    #[error("point lies on the wall of {0}")]
    OnWall(String),

    #[error("no Harder-Narasimhan filtration found: {0}")]
    NoFiltration(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
