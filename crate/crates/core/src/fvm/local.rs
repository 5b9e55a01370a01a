//! Dense per-vertex systems shared by the flow and mechanics discretizations.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Pivot ratio below which a local system is reported as singular.
pub const SINGULAR_PIVOT_RATIO: f64 = 1e-12;

/// Largest null space accepted by the least-squares fallback.
pub const MAX_NULLITY: usize = 1;

/// Maps global stencil columns to dense local columns.
#[derive(Clone, Debug, Default)]
pub struct LocalColumns {
    pub global: Vec<usize>,
}

impl LocalColumns {
    pub fn index(&mut self, global: usize) -> usize {
        match self.global.iter().position(|&g| g == global) {
            Some(i) => i,
            None => {
                self.global.push(global);
                self.global.len() - 1
            }
        }
    }
}

/// A sparse row under construction: unknown coefficients and right-hand
/// side coefficients over global columns.
#[derive(Clone, Debug, Default)]
pub struct LocalRow {
    pub lhs: Vec<(usize, f64)>,
    pub rhs: Vec<(usize, f64)>,
}

/// `matrix · gradients = rhs · columns` around one vertex.
#[derive(Clone, Debug)]
pub struct LocalSystem {
    pub system: &'static str,
    pub vertex: usize,
    pub cells: Vec<usize>,
    pub matrix: DMatrix<f64>,
    pub rhs: DMatrix<f64>,
    pub columns: Vec<usize>,
}

impl LocalSystem {
    pub fn from_rows(
        system: &'static str,
        vertex: usize,
        cells: Vec<usize>,
        n_unknowns: usize,
        rows: &[LocalRow],
    ) -> Result<Self> {
        if rows.len() != n_unknowns {
            return Err(Error::InternalConsistency(format!(
                "{system} system at vertex {vertex}: {} equations for {n_unknowns} unknowns",
                rows.len()
            )));
        }
        let mut cols = LocalColumns::default();
        for row in rows {
            for &(c, _) in &row.rhs {
                cols.index(c);
            }
        }
        let mut matrix = DMatrix::zeros(rows.len(), n_unknowns);
        let mut rhs = DMatrix::zeros(rows.len(), cols.global.len());
        for (r, row) in rows.iter().enumerate() {
            for &(j, v) in &row.lhs {
                matrix[(r, j)] += v;
            }
            for &(c, v) in &row.rhs {
                let j = cols.index(c);
                rhs[(r, j)] += v;
            }
        }
        Ok(LocalSystem {
            system,
            vertex,
            cells,
            matrix,
            rhs,
            columns: cols.global,
        })
    }

    /// Gradient coefficients: one row per unknown, one column per entry of
    /// `columns`. Rows are equilibrated before an LU factorization with
    /// partial pivoting. A system with a null space of dimension at most
    /// [`MAX_NULLITY`] (box corners where rollers meet a traction face) is
    /// solved in the minimum-norm least-squares sense instead.
    pub fn solve(&self) -> Result<DMatrix<f64>> {
        let mut a = self.matrix.clone();
        let mut b = self.rhs.clone();
        for r in 0..a.nrows() {
            let scale = a.row(r).amax();
            if scale == 0.0 {
                return Err(self.singular(0.0));
            }
            a.row_mut(r).scale_mut(1.0 / scale);
            b.row_mut(r).scale_mut(1.0 / scale);
        }
        let lu = a.clone().lu();
        let u = lu.u();
        let diag = u.diagonal();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for d in diag.iter() {
            lo = lo.min(d.abs());
            hi = hi.max(d.abs());
        }
        let ratio = if hi > 0.0 { lo / hi } else { 0.0 };
        if ratio >= SINGULAR_PIVOT_RATIO {
            return lu.solve(&b).ok_or_else(|| self.singular(ratio));
        }
        let svd = a.svd(true, true);
        let top = svd.singular_values.max();
        let cut = top * SINGULAR_PIVOT_RATIO;
        let nullity = svd.singular_values.iter().filter(|&&s| !(s > cut)).count();
        if top == 0.0 || nullity > MAX_NULLITY {
            return Err(self.singular(ratio));
        }
        svd.solve(&b, cut).map_err(|_| self.singular(ratio))
    }

    fn singular(&self, pivot_ratio: f64) -> Error {
        Error::SingularLocalSystem {
            system: self.system,
            vertex: self.vertex,
            pivot_ratio,
        }
    }
}

/// Combine coefficient rows of the solved gradients: `Σ w_k · grad[k, :]`,
/// returned over global columns.
pub fn combine(grad: &DMatrix<f64>, columns: &[usize], terms: &[(usize, f64)], out: &mut Vec<(usize, f64)>) {
    for (j, &col) in columns.iter().enumerate() {
        let v: f64 = terms.iter().map(|&(k, w)| w * grad[(k, j)]).sum();
        if v != 0.0 {
            out.push((col, v));
        }
    }
}
