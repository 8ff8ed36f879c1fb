//! Dense linear algebra over a prime field `F_p`.
//!
//! Matrices are small (a handful of rows and columns per vertex), so everything
//! here is plain Gaussian elimination on row-major `u32` storage.

use std::fmt;

use crate::error::{Error, Result};

/// The prime field `F_p`. Elements are stored reduced in `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 || p > 65_521 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, self.p - 2)
    }

    fn pow(&self, mut base: u32, mut exp: u32) -> u32 {
        let mut acc = 1u32;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn matmul(&self, a: &Mat, b: &Mat) -> Mat {
        assert_eq!(a.cols, b.rows, "matmul shape mismatch");
        let mut out = Mat::zeros(a.rows, b.cols);
        for i in 0..a.rows {
            for l in 0..a.cols {
                let x = a.get(i, l);
                if x == 0 {
                    continue;
                }
                for j in 0..b.cols {
                    let v = self.add(out.get(i, j), self.mul(x, b.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn matadd(&self, a: &Mat, b: &Mat) -> Mat {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols), "matadd shape mismatch");
        let data = a
            .data
            .iter()
            .zip(&b.data)
            .map(|(&x, &y)| self.add(x, y))
            .collect();
        Mat { rows: a.rows, cols: a.cols, data }
    }

    pub fn scale(&self, c: u32, a: &Mat) -> Mat {
        let data = a.data.iter().map(|&x| self.mul(c, x)).collect();
        Mat { rows: a.rows, cols: a.cols, data }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self, a: &Mat) -> (Mat, Vec<usize>) {
        let mut m = a.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            m.swap_rows(row, piv);
            let inv = self.inv(m.get(row, col));
            for j in 0..m.cols {
                let v = self.mul(inv, m.get(row, j));
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = self.sub(m.get(r, j), self.mul(factor, m.get(row, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, a: &Mat) -> usize {
        self.rref(a).1.len()
    }

    /// Basis of `{x : a x = 0}` as the columns of the returned matrix.
    pub fn nullspace(&self, a: &Mat) -> Mat {
        let (r, pivots) = self.rref(a);
        let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Mat::zeros(a.cols, free.len());
        for (b, &fc) in free.iter().enumerate() {
            basis.set(fc, b, 1);
            for (prow, &pc) in pivots.iter().enumerate() {
                basis.set(pc, b, self.neg(r.get(prow, fc)));
            }
        }
        basis
    }

    /// Basis of `{y : y a = 0}` as the rows of the returned matrix.
    pub fn left_nullspace(&self, a: &Mat) -> Mat {
        self.nullspace(&a.transpose()).transpose()
    }

    /// Some solution `x` of `a x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, a: &Mat, b: &Mat) -> Option<Mat> {
        assert_eq!(a.rows, b.rows, "solve shape mismatch");
        let aug = a.hstack(b);
        let (r, pivots) = self.rref(&aug);
        if pivots.iter().any(|&c| c >= a.cols) {
            return None;
        }
        let mut x = Mat::zeros(a.cols, b.cols);
        for (prow, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(prow, a.cols + j));
            }
        }
        Some(x)
    }

    pub fn is_invertible(&self, a: &Mat) -> bool {
        a.rows == a.cols && self.rank(a) == a.rows
    }

    /// A basis (as columns) of the column space of `a`.
    pub fn column_space(&self, a: &Mat) -> Mat {
        let (_, pivots) = self.rref(a);
        a.select_cols(&pivots)
    }

    /// Is the column space of `sub` contained in the column space of `sup`?
    pub fn col_contained(&self, sub: &Mat, sup: &Mat) -> bool {
        if sub.cols == 0 {
            return true;
        }
        self.rank(&sup.hstack(sub)) == self.rank(sup)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Row-major matrix of field elements. Zero-sized dimensions are allowed and
/// are common: a representation vanishing at a vertex has `0 x d` arrow maps.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed for the `0 x cols` case.
    pub fn from_rows(rows: &[Vec<u32>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut m = Mat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Stacks blocks vertically; `cols` fixes the width when `blocks` is empty.
    pub fn vstack_all(blocks: &[Mat], cols: usize) -> Mat {
        blocks.iter().fold(Mat::zeros(0, cols), |acc, b| acc.vstack(b))
    }

    /// Stacks blocks horizontally; `rows` fixes the height when `blocks` is empty.
    pub fn hstack_all(blocks: &[Mat], rows: usize) -> Mat {
        blocks.iter().fold(Mat::zeros(rows, 0), |acc, b| acc.hstack(b))
    }

    pub fn row_block(&self, start: usize, len: usize) -> Mat {
        let data = self.data[start * self.cols..(start + len) * self.cols].to_vec();
        Mat { rows: len, cols: self.cols, data }
    }

    pub fn col_block(&self, start: usize, len: usize) -> Mat {
        self.select_cols(&(start..start + len).collect::<Vec<_>>())
    }

    pub fn select_cols(&self, cols: &[usize]) -> Mat {
        let mut m = Mat::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (b, &c) in cols.iter().enumerate() {
                m.set(i, b, self.get(i, c));
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}{:?}", self.rows, self.cols, self.to_rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rejects_composites() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(7).is_ok());
    }

    #[test]
    fn inverse_is_inverse() {
        let k = f(7);
        for a in 1..7 {
            assert_eq!(k.mul(a, k.inv(a)), 1);
        }
    }

    #[test]
    fn nullspace_dimension_matches_rank() {
        let k = f(3);
        let a = Mat::from_rows(&[vec![1, 2, 0], vec![2, 1, 0]], 3);
        // second row = 2 * first row mod 3
        assert_eq!(k.rank(&a), 1);
        let ns = k.nullspace(&a);
        assert_eq!(ns.cols(), 2);
        assert!(k.matmul(&a, &ns).is_zero());
    }

    #[test]
    fn solve_finds_solution_or_none() {
        let k = f(2);
        let a = Mat::from_rows(&[vec![1, 1], vec![0, 1]], 2);
        let b = Mat::from_rows(&[vec![1], vec![1]], 1);
        let x = k.solve(&a, &b).unwrap();
        assert_eq!(k.matmul(&a, &x), b);
        let singular = Mat::from_rows(&[vec![1, 1], vec![1, 1]], 2);
        let bad = Mat::from_rows(&[vec![1], vec![0]], 1);
        assert!(k.solve(&singular, &bad).is_none());
    }

    #[test]
    fn empty_shapes_are_fine() {
        let k = f(2);
        let a = Mat::zeros(0, 3);
        assert_eq!(k.nullspace(&a).cols(), 3);
        let b = Mat::zeros(2, 0);
        assert_eq!(k.rank(&b), 0);
        assert_eq!(k.matmul(&b, &Mat::zeros(0, 4)), Mat::zeros(2, 4));
    }
}
