//! Sparse linear solves for the global system.

use faer::prelude::Solve;
use faer::sparse::{SparseColMat, Triplet};

use crate::error::{Error, Result};

/// Square sparse system in coordinate form. Duplicate entries are summed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseSystem {
    pub n: usize,
    pub entries: Vec<(usize, usize, f64)>,
    pub rhs: Vec<f64>,
}

impl SparseSystem {
    pub fn new(n: usize) -> Self {
        SparseSystem {
            n,
            entries: Vec::new(),
            rhs: vec![0.0; n],
        }
    }

    pub fn push(&mut self, row: usize, col: usize, val: f64) {
        if val != 0.0 {
            self.entries.push((row, col, val));
        }
    }

    /// Sorted, merged copy of the entries.
    pub fn compressed(&self) -> Vec<(usize, usize, f64)> {
        let mut e = self.entries.clone();
        e.sort_unstable_by_key(|&(r, c, _)| (c, r));
        let mut out: Vec<(usize, usize, f64)> = Vec::with_capacity(e.len());
        for (r, c, v) in e {
            match out.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => out.push((r, c, v)),
            }
        }
        out
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
        y
    }

    /// `‖Ax − b‖∞`.
    pub fn residual_norm(&self, x: &[f64]) -> f64 {
        self.apply(x)
            .iter()
            .zip(&self.rhs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub trait LinearSolver {
    fn solve(&mut self, system: &SparseSystem) -> Result<Vec<f64>>;
}

/// Sparse LU with one pass of row and column max-abs equilibration.
#[derive(Clone, Copy, Debug, Default)]
pub struct SparseLu;

impl LinearSolver for SparseLu {
    fn solve(&mut self, system: &SparseSystem) -> Result<Vec<f64>> {
        let n = system.n;
        if system.rhs.len() != n {
            return Err(Error::Contract(format!(
                "right-hand side has length {} for a system of size {n}",
                system.rhs.len()
            )));
        }
        if n == 0 {
            return Ok(Vec::new());
        }
        let entries = system.compressed();
        for &(r, c, v) in &entries {
            if r >= n || c >= n || !v.is_finite() {
                return Err(Error::Assembly(format!("invalid matrix entry ({r}, {c}) = {v}")));
            }
        }
        let mut row_scale = vec![0.0f64; n];
        for &(r, _, v) in &entries {
            row_scale[r] = row_scale[r].max(v.abs());
        }
        if let Some(r) = row_scale.iter().position(|&s| s == 0.0) {
            return Err(Error::LinearSolver(format!("row {r} of the global matrix is empty")));
        }
        let mut col_scale = vec![0.0f64; n];
        for &(r, c, v) in &entries {
            col_scale[c] = col_scale[c].max(v.abs() / row_scale[r]);
        }
        if let Some(c) = col_scale.iter().position(|&s| s == 0.0) {
            return Err(Error::LinearSolver(format!("column {c} of the global matrix is empty")));
        }
        let triplets: Vec<Triplet<usize, usize, f64>> = entries
            .iter()
            .map(|&(r, c, v)| Triplet::new(r, c, v / (row_scale[r] * col_scale[c])))
            .collect();
        let mat = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &triplets)
            .map_err(|e| Error::Assembly(format!("sparse matrix construction failed: {e:?}")))?;
        let lu = mat
            .sp_lu()
            .map_err(|e| Error::LinearSolver(format!("LU factorization failed: {e:?}")))?;
        let rhs = faer::col::Col::from_fn(n, |i| system.rhs[i] / row_scale[i]);
        let y = lu.solve(&rhs);
        let x: Vec<f64> = (0..n).map(|i| y[i] / col_scale[i]).collect();
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::LinearSolver("LU solve produced non-finite values; the matrix is singular".into()));
        }
        let scaled_res = system
            .apply(&x)
            .iter()
            .zip(&system.rhs)
            .zip(&row_scale)
            .map(|((a, b), s)| ((a - b) / s).abs())
            .fold(0.0, f64::max);
        let scaled_b = system
            .rhs
            .iter()
            .zip(&row_scale)
            .map(|(b, s)| (b / s).abs())
            .fold(0.0, f64::max);
        let scaled_x = x.iter().zip(&col_scale).map(|(v, s)| (v * s).abs()).fold(0.0, f64::max);
        if scaled_res > 1e-6 * (scaled_b + scaled_x).max(f64::MIN_POSITIVE) {
            return Err(Error::LinearSolver(format!(
                "LU solve is inaccurate (scaled residual {scaled_res:e}); the matrix is likely singular"
            )));
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_badly_scaled_system() {
        let b = [[4.0, 1.0, 0.0], [1.0, 3.0, -1.0], [0.5, 0.0, 2.0]];
        let rows = [1e9, 1e-6, 1.0];
        let cols = [1e-3, 1.0, 1e6];
        let mut s = SparseSystem::new(3);
        for i in 0..3 {
            for j in 0..3 {
                s.push(i, j, rows[i] * b[i][j] * cols[j]);
            }
        }
        let x_true = [1e3, -2.0, 5e-6];
        s.rhs = s.apply(&x_true);
        let x = SparseLu.solve(&s).unwrap();
        for (a, b) in x.iter().zip(&x_true) {
            assert!((a - b).abs() <= 1e-12 * b.abs());
        }
    }

    #[test]
    fn empty_row_is_reported() {
        let mut s = SparseSystem::new(2);
        s.push(0, 0, 1.0);
        s.push(0, 1, 1.0);
        assert!(matches!(SparseLu.solve(&s), Err(Error::LinearSolver(_))));
    }

    #[test]
    fn singular_matrix_is_reported() {
        let mut s = SparseSystem::new(2);
        s.push(0, 0, 1.0);
        s.push(0, 1, 2.0);
        s.push(1, 0, 2.0);
        s.push(1, 1, 4.0);
        s.rhs = vec![1.0, 0.0];
        assert!(SparseLu.solve(&s).is_err());
    }
}
