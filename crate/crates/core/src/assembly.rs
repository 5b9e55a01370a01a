//! Global system: momentum and mass balance per cell plus contact rows per
//! positive fracture subface.
//!
//! Unknown order is `[u (cell-major) | p | λ (contact-major)]`; the pressure
//! block is absent in purely mechanical runs. Rows follow the same order,
//! with momentum rows for `u`, mass rows for `p` and contact rows for `λ`.

use crate::contact::{classify, linearize_contact_rows, ContactParams, ContactPoint, ContactSet};
use crate::error::{Error, Result};
use crate::fvm::{condense, BoundaryKinds, BoundaryValues, CondensedOperators, MaterialField, Stencil};
use crate::mesh::{FracturePairing, Mesh, Point, SubGrid};
use crate::solver::SparseSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub dim: usize,
    pub n_cells: usize,
    pub n_contacts: usize,
    pub flow: bool,
}

impl Layout {
    pub fn u(&self, cell: usize, comp: usize) -> usize {
        cell * self.dim + comp
    }
    pub fn n_u(&self) -> usize {
        self.n_cells * self.dim
    }
    pub fn n_p(&self) -> usize {
        if self.flow {
            self.n_cells
        } else {
            0
        }
    }
    pub fn p(&self, cell: usize) -> Option<usize> {
        self.flow.then(|| self.n_u() + cell)
    }
    pub fn lambda(&self, contact: usize, comp: usize) -> usize {
        self.n_u() + self.n_p() + contact * self.dim + comp
    }
    pub fn len(&self) -> usize {
        self.n_u() + self.n_p() + self.n_contacts * self.dim
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Primary variables. `p` always has one entry per cell; without flow it
/// holds a fixed pressure field.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub u: Vec<f64>,
    pub p: Vec<f64>,
    pub lambda: Vec<f64>,
}

impl State {
    pub fn zeros(layout: &Layout) -> Self {
        State {
            u: vec![0.0; layout.n_u()],
            p: vec![0.0; layout.n_cells],
            lambda: vec![0.0; layout.n_contacts * layout.dim],
        }
    }

    pub fn displacement(&self, dim: usize, cell: usize) -> Point {
        let mut v = Point::zeros();
        for i in 0..dim {
            v[i] = self.u[cell * dim + i];
        }
        v
    }

    pub fn traction(&self, dim: usize, contact: usize) -> Point {
        let mut v = Point::zeros();
        for i in 0..dim {
            v[i] = self.lambda[contact * dim + i];
        }
        v
    }

    /// Flatten the unknown part of the state.
    pub fn pack(&self, layout: &Layout) -> Vec<f64> {
        let mut x = Vec::with_capacity(layout.len());
        x.extend_from_slice(&self.u);
        if layout.flow {
            x.extend_from_slice(&self.p);
        }
        x.extend_from_slice(&self.lambda);
        x
    }

    /// Inverse of [`State::pack`]; a fixed pressure is taken from `self`.
    pub fn unpack(&self, layout: &Layout, x: &[f64]) -> Result<State> {
        if x.len() != layout.len() {
            return Err(Error::Contract(format!(
                "solution vector has length {}, expected {}",
                x.len(),
                layout.len()
            )));
        }
        let nu = layout.n_u();
        let np = layout.n_p();
        Ok(State {
            u: x[..nu].to_vec(),
            p: if layout.flow {
                x[nu..nu + np].to_vec()
            } else {
                self.p.clone()
            },
            lambda: x[nu + np..].to_vec(),
        })
    }
}

/// Everything needed to assemble one time step.
#[derive(Clone, Copy, Debug)]
pub struct StepData<'a> {
    /// Boundary values at the new time level.
    pub values: &'a BoundaryValues,
    pub previous: &'a State,
    pub previous_values: &'a BoundaryValues,
    pub dt: f64,
    pub contact: ContactParams,
}

/// Mesh, discrete operators and per-contact data of one problem.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub mesh: Mesh,
    pub subgrid: SubGrid,
    pub pairing: FracturePairing,
    pub material: MaterialField,
    pub kinds: BoundaryKinds,
    pub ops: CondensedOperators,
    /// Friction coefficient per contact.
    pub friction: Vec<f64>,
    pub layout: Layout,
}

impl Discretization {
    pub fn new(
        mesh: Mesh,
        subgrid: SubGrid,
        pairing: FracturePairing,
        material: MaterialField,
        kinds: BoundaryKinds,
        friction: Vec<f64>,
        with_flow: bool,
    ) -> Result<Self> {
        if friction.len() != pairing.len() {
            return Err(Error::Contract(format!(
                "{} friction coefficients for {} contacts",
                friction.len(),
                pairing.len()
            )));
        }
        if let Some(f) = friction.iter().find(|f| !(**f > 0.0)) {
            return Err(Error::InvalidParameter(format!("friction coefficient must be positive, got {f}")));
        }
        let ops = condense(&mesh, &subgrid, &pairing, &material, &kinds, with_flow)?;
        let layout = Layout {
            dim: mesh.dim,
            n_cells: mesh.num_cells(),
            n_contacts: pairing.len(),
            flow: with_flow,
        };
        Ok(Discretization {
            mesh,
            subgrid,
            pairing,
            material,
            kinds,
            ops,
            friction,
            layout,
        })
    }

    /// Initial state with a uniform normal traction `λ = λ_n n` on every
    /// contact.
    pub fn initial_state(&self, lambda_n: f64) -> State {
        let mut s = State::zeros(&self.layout);
        let d = self.layout.dim;
        for (c, n) in self.pairing.normal.iter().enumerate() {
            for i in 0..d {
                s.lambda[c * d + i] = lambda_n * n[i];
            }
        }
        s
    }

    /// Full column vector of the condensed stencils.
    pub fn columns(&self, state: &State, values: &BoundaryValues) -> Result<Vec<f64>> {
        let (bm, bf) = self.ops.boundary_columns(values)?;
        self.ops.columns.gather(&state.u, &state.p, &state.lambda, &bm, &bf)
    }

    fn global_column(&self, col: usize) -> Option<usize> {
        let cs = &self.ops.columns;
        if col < cs.p_offset() {
            Some(col)
        } else if col < cs.lambda_offset() {
            self.layout.p(col - cs.p_offset())
        } else if col < cs.bc_mech_offset() {
            Some(self.layout.n_u() + self.layout.n_p() + col - cs.lambda_offset())
        } else {
            None
        }
    }

    /// Add `coef × stencil[r]` to `row`; known columns go to the right-hand side.
    fn add_stencil(&self, sys: &mut SparseSystem, row: usize, stencil: &Stencil, r: usize, coef: f64, known: &[f64]) {
        for (col, v) in stencil.row(r) {
            match self.global_column(col) {
                Some(g) => sys.push(row, g, coef * v),
                None => sys.rhs[row] -= coef * v * known[col],
            }
        }
    }

    /// Displacement jump `[u] = u⁺ − u⁻` on every contact.
    pub fn jumps(&self, state: &State, values: &BoundaryValues) -> Result<Vec<Point>> {
        let x = self.columns(state, values)?;
        let d = self.layout.dim;
        let disp = &self.ops.displacement;
        Ok((0..self.pairing.len())
            .map(|c| {
                let (sp, sn) = (self.pairing.positive[c], self.pairing.negative[c]);
                let mut j = Point::zeros();
                for i in 0..d {
                    j[i] = disp.apply_row(sp * d + i, &x) - disp.apply_row(sn * d + i, &x);
                }
                j
            })
            .collect())
    }

    pub fn contact_points(&self, state: &State, step: &StepData) -> Result<Vec<ContactPoint>> {
        let jumps = self.jumps(state, step.values)?;
        let prev = if step.contact.dynamic {
            self.jumps(step.previous, step.previous_values)?
        } else {
            vec![Point::zeros(); jumps.len()]
        };
        let d = self.layout.dim;
        Ok((0..self.pairing.len())
            .map(|c| {
                let mut pt = ContactPoint::new(self.pairing.normal[c], d, self.friction[c], self.pairing.gap[c]);
                pt.lambda = state.traction(d, c);
                pt.jump = jumps[c];
                pt.jump_prev = prev[c];
                pt
            })
            .collect())
    }

    pub fn classify(&self, points: &[ContactPoint], params: &ContactParams) -> Vec<ContactSet> {
        points.iter().map(|p| classify(p, params)).collect()
    }

    /// Momentum and mass rows; contact rows are left empty.
    pub fn bulk_system(&self, step: &StepData) -> Result<SparseSystem> {
        let lay = self.layout;
        let d = lay.dim;
        let mesh = &self.mesh;
        let mut sys = SparseSystem::new(lay.len());
        if step.previous.p.len() != lay.n_cells {
            return Err(Error::Contract("previous pressure has the wrong length".into()));
        }
        if lay.flow && !(step.dt > 0.0) {
            return Err(Error::InvalidParameter(format!("time step must be positive, got {}", step.dt)));
        }
        // Known columns: boundary data and, without flow, the fixed pressure.
        let zero = State::zeros(&lay);
        let fixed = State {
            p: if lay.flow { zero.p.clone() } else { step.previous.p.clone() },
            ..zero
        };
        let known = self.columns(&fixed, step.values)?;
        for (k, cell) in mesh.cells.iter().enumerate() {
            for &f in &cell.faces {
                let face = &mesh.faces[f];
                let sign = face.sign(k);
                for (local, _) in face.nodes.iter().enumerate() {
                    let s = f * d + local;
                    for i in 0..d {
                        self.add_stencil(&mut sys, lay.u(k, i), &self.ops.traction, s * d + i, sign, &known);
                    }
                    if let Some(row) = lay.p(k) {
                        self.add_stencil(&mut sys, row, &self.ops.flux, s, sign, &known);
                    }
                }
            }
            let force = self.material.body_force[k] * cell.volume;
            for i in 0..d {
                sys.rhs[lay.u(k, i)] -= force[i];
            }
        }
        if lay.flow {
            let prev = self.columns(step.previous, step.previous_values)?;
            let div = &self.ops.divergence;
            for (k, cell) in mesh.cells.iter().enumerate() {
                let row = lay.n_u() + k;
                let alpha = self.material.biot[k];
                for local in 0..cell.nodes.len() {
                    let coef = alpha * self.subgrid.subcell_volumes[k][local] / step.dt;
                    let r = k * (d + 1) + local;
                    self.add_stencil(&mut sys, row, div, r, coef, &known);
                    sys.rhs[row] += coef * div.apply_row(r, &prev);
                }
                let storage = self.material.storage[k] * cell.volume / step.dt;
                sys.push(row, row, storage);
                sys.rhs[row] += storage * step.previous.p[k] + self.material.source[k] * cell.volume;
            }
        }
        sys.entries = sys.compressed();
        Ok(sys)
    }

    /// Append the linearized contact rows for the given active sets.
    pub fn add_contact_rows(
        &self,
        sys: &mut SparseSystem,
        points: &[ContactPoint],
        sets: &[ContactSet],
        step: &StepData,
    ) -> Result<()> {
        let lay = self.layout;
        let d = lay.dim;
        if points.len() != lay.n_contacts || sets.len() != lay.n_contacts {
            return Err(Error::Contract("contact data sized inconsistently".into()));
        }
        let zero = State::zeros(&lay);
        let fixed = State {
            p: if lay.flow { zero.p.clone() } else { step.previous.p.clone() },
            ..zero
        };
        let known = self.columns(&fixed, step.values)?;
        let disp = &self.ops.displacement;
        for (c, (pt, &set)) in points.iter().zip(sets).enumerate() {
            let rows = linearize_contact_rows(pt, set, &step.contact)?;
            let (sp, sn) = (self.pairing.positive[c], self.pairing.negative[c]);
            for (r, row) in rows.iter().enumerate() {
                let g = lay.lambda(c, r);
                sys.rhs[g] += row.rhs;
                for i in 0..d {
                    sys.push(g, lay.lambda(c, i), row.lambda[i]);
                    if row.jump[i] != 0.0 {
                        self.add_stencil(sys, g, disp, sp * d + i, row.jump[i], &known);
                        self.add_stencil(sys, g, disp, sn * d + i, -row.jump[i], &known);
                    }
                }
            }
        }
        Ok(())
    }

    /// Linearized global system at `state` with the given active sets.
    pub fn assemble(&self, state: &State, step: &StepData, sets: Option<&[ContactSet]>) -> Result<(SparseSystem, Vec<ContactSet>)> {
        let mut sys = self.bulk_system(step)?;
        let points = self.contact_points(state, step)?;
        let sets = match sets {
            Some(s) => s.to_vec(),
            None => self.classify(&points, &step.contact),
        };
        self.add_contact_rows(&mut sys, &points, &sets, step)?;
        Ok((sys, sets))
    }
}
