//! The worked examples used throughout the crate and its tests.

use crate::algebra::BoundQuiver;
use crate::error::Result;
use crate::qp::{PotentialTerm, QuiverWithPotential};
use crate::quiver::Quiver;

fn build(n: usize, edges: &[(&str, usize, usize)], cycles: &[&[&str]]) -> Result<QuiverWithPotential> {
    let edges: Vec<(&str, usize, usize)> = edges.iter().map(|&(id, s, t)| (id, s - 1, t - 1)).collect();
    let q = Quiver::from_edges(n, &edges)?;
    let potential = cycles
        .iter()
        .map(|c| {
            let cycle = c.iter().map(|id| q.arrow_index(id)).collect::<Result<Vec<_>>>()?;
            Ok(PotentialTerm { coeff: 1, cycle })
        })
        .collect::<Result<Vec<_>>>()?;
    QuiverWithPotential::new(q, potential)
}

/// Oriented triangle `alpha: 2 -> 1`, `beta: 3 -> 2`, `gamma: 1 -> 3` with
/// `W = alpha beta gamma`; the Jacobian algebra is `KQ / rad^2`.
pub fn a3_cycle() -> QuiverWithPotential {
    build(3, &[("alpha", 2, 1), ("beta", 3, 2), ("gamma", 1, 3)], &[&["alpha", "beta", "gamma"]]).expect("a3")
}

/// Cluster-tilted algebra of type `A_5`: two triangles `1 -> 2 -> 3 -> 1` and
/// `3 -> 4 -> 5 -> 3` glued at 3. The arrows `a12` and `a45` are the ones cut.
pub fn a5_example() -> QuiverWithPotential {
    build(
        5,
        &[("a12", 1, 2), ("alpha", 2, 3), ("gamma", 3, 1), ("beta", 3, 4), ("a45", 4, 5), ("delta", 5, 3)],
        &[&["gamma", "alpha", "a12"], &["delta", "a45", "beta"]],
    )
    .expect("a5")
}

/// Oriented 4-cycle `1 <- 2 <- 3 <- 4 <- 1` with `W` the cycle itself; `rad^3 = 0`.
pub fn d4_cycle() -> QuiverWithPotential {
    build(
        4,
        &[("alpha", 2, 1), ("beta", 3, 2), ("gamma", 4, 3), ("delta", 1, 4)],
        &[&["alpha", "beta", "gamma", "delta"]],
    )
    .expect("d4")
}

/// Cluster-tilted algebra of type `A_9`: four triangles `123`, `345`, `567`, `789`,
/// with `alpha`, `beta`, `gamma`, `delta` one arrow from each.
pub fn a9_example() -> QuiverWithPotential {
    build(
        9,
        &[
            ("alpha", 2, 1),
            ("a13", 1, 3),
            ("a32", 3, 2),
            ("beta", 3, 4),
            ("a45", 4, 5),
            ("a53", 5, 3),
            ("a56", 5, 6),
            ("gamma", 6, 7),
            ("a75", 7, 5),
            ("a79", 7, 9),
            ("delta", 9, 8),
            ("a87", 8, 7),
        ],
        &[
            &["alpha", "a32", "a13"],
            &["a53", "a45", "beta"],
            &["a75", "gamma", "a56"],
            &["a87", "delta", "a79"],
        ],
    )
    .expect("a9")
}

/// The four arrows whose deletion leaves a tilted algebra in [`a9_example`].
pub const A9_CUT: [&str; 4] = ["alpha", "beta", "gamma", "delta"];

/// The two arrows whose deletion leaves a tilted algebra in [`a5_example`].
pub const A5_CUT: [&str; 2] = ["a12", "a45"];

/// Cyclic quiver `1 -> 2 -> 3 -> 4 -> 1` modulo `rad^5`.
pub fn a4_rad5() -> BoundQuiver {
    let q = Quiver::from_edges(4, &[("a", 0, 1), ("b", 1, 2), ("c", 2, 3), ("d", 3, 0)]).expect("a4");
    BoundQuiver::truncated(q, 5).expect("a4 rad5")
}

/// Linear `A_n` quiver `1 -> 2 -> ... -> n` without relations.
pub fn linear(n: usize) -> QuiverWithPotential {
    let names: Vec<String> = (1..n).map(|i| format!("a{i}")).collect();
    let edges: Vec<(&str, usize, usize)> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i, i + 1)).collect();
    QuiverWithPotential::hereditary(Quiver::from_edges(n, &edges).expect("linear")).expect("linear")
}

/// The four algebras of the acceptance suite, by name.
pub fn acceptance_algebras() -> Vec<(&'static str, QuiverWithPotential)> {
    vec![("A3", a3_cycle()), ("A5", a5_example()), ("D4", d4_cycle()), ("A9", a9_example())]
}
