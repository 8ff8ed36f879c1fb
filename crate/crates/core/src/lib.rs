//! Maximal green sequences of quivers with potential: exchange-matrix mutation,
//! forward hom-orthogonal sequences, reflection functors and wall crossings.

pub mod algebra;
pub mod bounds;
pub mod catalog;
pub mod error;
pub mod exchange;
pub mod fho;
pub mod io;
pub mod field;
pub mod lp;
pub mod named;
pub mod qp;
pub mod quiver;
pub mod rational;
pub mod reflect;
pub mod rep;
pub mod walls;

pub use error::{Error, Result};
