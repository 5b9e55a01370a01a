//! Row-compressed linear stencils over the unified column space.

use crate::error::{Error, Result};

/// Column layout shared by all condensed stencils:
/// `[u (cell-major, dim per cell) | p | λ (dim per contact) | mechanical bc | flow bc]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColumnSpace {
    pub dim: usize,
    pub n_cells: usize,
    pub n_contacts: usize,
    pub n_subfaces: usize,
}

impl ColumnSpace {
    pub fn u(&self, cell: usize, comp: usize) -> usize {
        cell * self.dim + comp
    }
    pub fn p_offset(&self) -> usize {
        self.n_cells * self.dim
    }
    pub fn p(&self, cell: usize) -> usize {
        self.p_offset() + cell
    }
    pub fn lambda_offset(&self) -> usize {
        self.p_offset() + self.n_cells
    }
    pub fn lambda(&self, contact: usize, comp: usize) -> usize {
        self.lambda_offset() + contact * self.dim + comp
    }
    pub fn bc_mech_offset(&self) -> usize {
        self.lambda_offset() + self.n_contacts * self.dim
    }
    pub fn bc_mech(&self, subface: usize, comp: usize) -> usize {
        self.bc_mech_offset() + subface * self.dim + comp
    }
    pub fn bc_flow_offset(&self) -> usize {
        self.bc_mech_offset() + self.n_subfaces * self.dim
    }
    pub fn bc_flow(&self, subface: usize) -> usize {
        self.bc_flow_offset() + subface
    }
    pub fn len(&self) -> usize {
        self.bc_flow_offset() + self.n_subfaces
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Assemble the full column vector from its blocks.
    pub fn gather(
        &self,
        u: &[f64],
        p: &[f64],
        lambda: &[f64],
        bc_mech: &[f64],
        bc_flow: &[f64],
    ) -> Result<Vec<f64>> {
        let expect = [
            (u.len(), self.n_cells * self.dim, "u"),
            (p.len(), self.n_cells, "p"),
            (lambda.len(), self.n_contacts * self.dim, "lambda"),
            (bc_mech.len(), self.n_subfaces * self.dim, "mechanical bc"),
            (bc_flow.len(), self.n_subfaces, "flow bc"),
        ];
        for (got, want, what) in expect {
            if got != want {
                return Err(Error::Contract(format!("{what} has length {got}, expected {want}")));
            }
        }
        let mut x = Vec::with_capacity(self.len());
        x.extend_from_slice(u);
        x.extend_from_slice(p);
        x.extend_from_slice(lambda);
        x.extend_from_slice(bc_mech);
        x.extend_from_slice(bc_flow);
        Ok(x)
    }
}

/// Sparse rows, each a list of (column, coefficient) pairs in column order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Stencil {
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

impl Stencil {
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Self {
        let mut s = Stencil {
            row_ptr: Vec::with_capacity(rows.len() + 1),
            cols: Vec::new(),
            vals: Vec::new(),
        };
        s.row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            let mut last: Option<usize> = None;
            for (c, v) in row {
                if last == Some(c) {
                    *s.vals.last_mut().unwrap() += v;
                } else {
                    s.cols.push(c);
                    s.vals.push(v);
                    last = Some(c);
                }
            }
            s.row_ptr.push(s.cols.len());
        }
        s
    }

    pub fn num_rows(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        self.cols[a..b].iter().copied().zip(self.vals[a..b].iter().copied())
    }

    pub fn apply_row(&self, r: usize, x: &[f64]) -> f64 {
        self.row(r).map(|(c, v)| v * x[c]).sum()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.num_rows()).map(|r| self.apply_row(r, x)).collect()
    }
}
