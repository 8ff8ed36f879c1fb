//! Exact linear feasibility over the rationals (phase-one simplex, Bland's rule).

use num_traits::{One, Signed, Zero};

use crate::rational::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

/// `coeffs . x  cmp  rhs` over free variables `x`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub cmp: Cmp,
    pub rhs: Q,
}

impl Constraint {
    pub fn new(coeffs: Vec<Q>, cmp: Cmp, rhs: Q) -> Self {
        Self { coeffs, cmp, rhs }
    }

    pub fn holds(&self, x: &[Q]) -> bool {
        let lhs = self.coeffs.iter().zip(x).fold(Q::zero(), |acc, (a, b)| acc + a * b);
        match self.cmp {
            Cmp::Le => lhs <= self.rhs,
            Cmp::Eq => lhs == self.rhs,
            Cmp::Ge => lhs >= self.rhs,
        }
    }
}

/// A point satisfying every constraint, or `None` if the system is infeasible.
pub fn feasible_point(nvars: usize, constraints: &[Constraint]) -> Option<Vec<Q>> {
    let m = constraints.len();
    if m == 0 {
        return Some(vec![Q::zero(); nvars]);
    }
    // columns: u (nvars), v (nvars), slacks (one per inequality), artificials (m)
    let slack_rows: Vec<usize> = (0..m).filter(|&r| constraints[r].cmp != Cmp::Eq).collect();
    let n_slack = slack_rows.len();
    let art0 = 2 * nvars + n_slack;
    let width = art0 + m;
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(m);
    let mut rhs: Vec<Q> = Vec::with_capacity(m);
    for (r, c) in constraints.iter().enumerate() {
        let mut row = vec![Q::zero(); width];
        for (j, a) in c.coeffs.iter().enumerate() {
            row[j] = a.clone();
            row[nvars + j] = -a.clone();
        }
        if let Some(s) = slack_rows.iter().position(|&x| x == r) {
            row[2 * nvars + s] = if c.cmp == Cmp::Le { Q::one() } else { -Q::one() };
        }
        let mut b = c.rhs.clone();
        if b.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            b = -b;
        }
        row[art0 + r] = Q::one();
        t.push(row);
        rhs.push(b);
    }
    let mut basis: Vec<usize> = (0..m).map(|r| art0 + r).collect();
    // reduced costs of the phase-one objective (sum of artificials)
    let mut cost = vec![Q::zero(); width];
    let mut value = Q::zero();
    for r in 0..m {
        for j in 0..art0 {
            cost[j] -= &t[r][j];
        }
        value -= &rhs[r];
    }
    loop {
        let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Q)> = None;
        for r in 0..m {
            if t[r][enter].is_positive() {
                let ratio = &rhs[r] / &t[r][enter];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            // unbounded direction cannot occur for a bounded-below objective
            break;
        };
        let piv = t[pr][enter].clone();
        for v in t[pr].iter_mut() {
            *v = &*v / &piv;
        }
        rhs[pr] = &rhs[pr] / &piv;
        for r in 0..m {
            if r != pr && !t[r][enter].is_zero() {
                let f = t[r][enter].clone();
                for j in 0..width {
                    let d = &f * &t[pr][j];
                    t[r][j] -= d;
                }
                let d = &f * &rhs[pr];
                rhs[r] -= d;
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for j in 0..width {
                cost[j] -= &f * &t[pr][j];
            }
            value -= &f * &rhs[pr];
        }
        basis[pr] = enter;
    }
    if !value.is_zero() {
        return None;
    }
    let mut full = vec![Q::zero(); width];
    for (r, &b) in basis.iter().enumerate() {
        full[b] = rhs[r].clone();
    }
    let x: Vec<Q> = (0..nvars).map(|j| &full[j] - &full[nvars + j]).collect();
    debug_assert!(constraints.iter().all(|c| c.holds(&x)));
    Some(x)
}
