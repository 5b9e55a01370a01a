//! MPSA local systems with weak symmetry and Biot stress.

use nalgebra::DMatrix;

use super::bc::{BcKind, BoundaryKinds};
use super::local::{combine, LocalRow, LocalSystem};
use super::material::MaterialField;
use super::stencil::ColumnSpace;
use crate::error::{Error, Result};
use crate::mesh::{FaceKind, FracturePairing, Mesh, Point, Side, SubGrid};

/// Index of gradient entry `(i, j)` (∂u_i/∂x_j) of local cell `c`.
fn gidx(d: usize, c: usize, i: usize, j: usize) -> usize {
    c * d * d + i * d + j
}

/// Local mechanics context at one vertex.
struct Patch<'a> {
    mesh: &'a Mesh,
    material: &'a MaterialField,
    cells: Vec<usize>,
    weights: Vec<f64>,
}

impl Patch<'_> {
    fn local(&self, k: usize) -> usize {
        self.cells.iter().position(|&c| c == k).unwrap()
    }

    /// Terms of `((C_K : G_K) n)_i`, scaled by `f`.
    fn stress_normal(&self, k: usize, n: &Point, i: usize, f: f64, out: &mut Vec<(usize, f64)>) {
        let d = self.mesh.dim;
        let c = self.local(k);
        let (mu, la) = (self.material.shear[k], self.material.lambda[k]);
        for j in 0..d {
            out.push((gidx(d, c, i, j), f * 2.0 * mu * n[j]));
        }
        for q in 0..d {
            out.push((gidx(d, c, q, q), f * la * n[i]));
        }
    }

    /// Terms of `−(A n)_i` with `A` the weighted skew part of the vertex stress.
    fn asymmetry_correction(&self, n: &Point, i: usize, f: f64, out: &mut Vec<(usize, f64)>) {
        let d = self.mesh.dim;
        for (c, (&k, &w)) in self.cells.iter().zip(&self.weights).enumerate() {
            let mu = self.material.shear[k];
            for j in 0..d {
                out.push((gidx(d, c, i, j), -f * w * mu * n[j]));
                out.push((gidx(d, c, j, i), f * w * mu * n[j]));
            }
        }
    }

    /// Terms of `(θ_K n)_i`.
    fn theta_normal(&self, k: usize, n: &Point, i: usize, f: f64, out: &mut Vec<(usize, f64)>) {
        self.stress_normal(k, n, i, f, out);
        self.asymmetry_correction(n, i, f, out);
    }

    /// Terms of `(G_K (x − x_K))_i`.
    fn gradient_times(&self, k: usize, dx: &Point, i: usize, f: f64, out: &mut Vec<(usize, f64)>) {
        let d = self.mesh.dim;
        let c = self.local(k);
        for j in 0..d {
            out.push((gidx(d, c, i, j), f * dx[j]));
        }
    }
}

fn patch<'a>(mesh: &'a Mesh, subgrid: &SubGrid, material: &'a MaterialField, vertex: usize) -> Patch<'a> {
    let cells = mesh.node_cells[vertex].clone();
    let vols: Vec<f64> = cells
        .iter()
        .map(|&k| subgrid.subcell_volume(mesh, k, vertex))
        .collect();
    let total: f64 = vols.iter().sum();
    Patch {
        mesh,
        material,
        weights: vols.iter().map(|v| v / total).collect(),
        cells,
    }
}

fn contact_index(pairing: &FracturePairing, s: usize) -> Result<usize> {
    pairing.contact_index[s]
        .ok_or_else(|| Error::InternalConsistency(format!("fracture subface {s} is not paired")))
}

/// Assemble traction-balance and displacement-continuity equations at `vertex`.
#[allow(clippy::too_many_arguments)]
pub fn assemble_mech_local(
    mesh: &Mesh,
    subgrid: &SubGrid,
    pairing: &FracturePairing,
    material: &MaterialField,
    kinds: &BoundaryKinds,
    cols: &ColumnSpace,
    vertex: usize,
) -> Result<LocalSystem> {
    let d = mesh.dim;
    let pt = patch(mesh, subgrid, material, vertex);
    let mut rows = Vec::new();
    for &s in &subgrid.node_subfaces[vertex] {
        let sf = &subgrid.subfaces[s];
        let face = &mesh.faces[sf.face];
        let (m, n, xs) = (sf.area, face.normal, sf.continuity_point);
        let k = face.cells[0];
        let dk = xs - mesh.cells[k].center;
        let alpha_k = material.biot[k];
        match face.kind {
            FaceKind::Interior => {
                let l = face.cells[1];
                let dl = xs - mesh.cells[l].center;
                for i in 0..d {
                    let mut t = LocalRow::default();
                    pt.stress_normal(k, &n, i, m, &mut t.lhs);
                    pt.stress_normal(l, &n, i, -m, &mut t.lhs);
                    t.rhs.push((cols.p(k), m * alpha_k * n[i]));
                    t.rhs.push((cols.p(l), -m * material.biot[l] * n[i]));
                    rows.push(t);
                }
                for i in 0..d {
                    let mut c = LocalRow::default();
                    pt.gradient_times(k, &dk, i, 1.0, &mut c.lhs);
                    pt.gradient_times(l, &dl, i, -1.0, &mut c.lhs);
                    c.rhs.push((cols.u(l, i), 1.0));
                    c.rhs.push((cols.u(k, i), -1.0));
                    rows.push(c);
                }
            }
            FaceKind::Boundary => {
                let kind = kinds.mech[s].ok_or_else(|| {
                    Error::Contract(format!("boundary subface {s} has no mechanical condition"))
                })?;
                for i in 0..d {
                    let mut row = LocalRow::default();
                    match kind[i] {
                        BcKind::Dirichlet => {
                            pt.gradient_times(k, &dk, i, 1.0, &mut row.lhs);
                            row.rhs.push((cols.bc_mech(s, i), 1.0));
                            row.rhs.push((cols.u(k, i), -1.0));
                        }
                        BcKind::Neumann => {
                            pt.theta_normal(k, &n, i, m, &mut row.lhs);
                            row.rhs.push((cols.bc_mech(s, i), m));
                            row.rhs.push((cols.p(k), m * alpha_k * n[i]));
                        }
                    }
                    rows.push(row);
                }
            }
            FaceKind::Fracture { side, .. } => {
                let c = contact_index(pairing, s)?;
                let sign = if side == Side::Positive { 1.0 } else { -1.0 };
                for i in 0..d {
                    let mut row = LocalRow::default();
                    pt.theta_normal(k, &n, i, m, &mut row.lhs);
                    row.rhs.push((cols.lambda(c, i), sign * m));
                    row.rhs.push((cols.p(k), m * alpha_k * n[i]));
                    rows.push(row);
                }
            }
        }
    }
    let n_cells = pt.cells.len();
    LocalSystem::from_rows("mechanics", vertex, pt.cells.clone(), n_cells * d * d, &rows)
}

/// Sparse row as (column, coefficient) pairs.
pub type Row = Vec<(usize, f64)>;

/// Condensed mechanics stencils produced by one vertex.
#[derive(Clone, Debug, Default)]
pub struct MechRows {
    /// (subface, component, traction row).
    pub traction: Vec<(usize, usize, Row)>,
    /// (subface, component, displacement trace row).
    pub displacement: Vec<(usize, usize, Row)>,
    /// (cell, divergence row) for the subcells of the vertex.
    pub divergence: Vec<(usize, Row)>,
}

#[allow(clippy::too_many_arguments)]
pub fn mech_rows(
    mesh: &Mesh,
    subgrid: &SubGrid,
    pairing: &FracturePairing,
    material: &MaterialField,
    kinds: &BoundaryKinds,
    cols: &ColumnSpace,
    system: &LocalSystem,
    grad: &DMatrix<f64>,
) -> Result<MechRows> {
    let d = mesh.dim;
    let vertex = system.vertex;
    let pt = patch(mesh, subgrid, material, vertex);
    let mut out = MechRows::default();
    for &s in &subgrid.node_subfaces[vertex] {
        let sf = &subgrid.subfaces[s];
        let face = &mesh.faces[sf.face];
        let (m, n) = (sf.area, face.normal);
        let k = face.cells[0];
        let dk = sf.continuity_point - mesh.cells[k].center;
        let kind = kinds.mech[s];
        for i in 0..d {
            let mut t = Vec::new();
            let comp_kind = kind.map(|kk| kk[i]);
            match face.kind {
                FaceKind::Fracture { side, .. } => {
                    let c = contact_index(pairing, s)?;
                    let sign = if side == Side::Positive { 1.0 } else { -1.0 };
                    t.push((cols.lambda(c, i), sign * m));
                }
                _ if comp_kind == Some(BcKind::Neumann) => {
                    t.push((cols.bc_mech(s, i), m));
                }
                _ => {
                    let mut terms = Vec::new();
                    pt.theta_normal(k, &n, i, m, &mut terms);
                    combine(grad, &system.columns, &terms, &mut t);
                    t.push((cols.p(k), -m * material.biot[k] * n[i]));
                }
            }
            out.traction.push((s, i, t));

            let mut u = Vec::new();
            if comp_kind == Some(BcKind::Dirichlet) {
                u.push((cols.bc_mech(s, i), 1.0));
            } else {
                let mut terms = Vec::new();
                pt.gradient_times(k, &dk, i, 1.0, &mut terms);
                combine(grad, &system.columns, &terms, &mut u);
                u.push((cols.u(k, i), 1.0));
            }
            out.displacement.push((s, i, u));
        }
    }
    for (c, &k) in pt.cells.iter().enumerate() {
        let terms: Vec<(usize, f64)> = (0..d).map(|i| (gidx(d, c, i, i), 1.0)).collect();
        let mut row = Vec::new();
        combine(grad, &system.columns, &terms, &mut row);
        out.divergence.push((k, row));
    }
    Ok(out)
}

/// Full stress `θ_K − α p_K I` rows of every cell at the vertex, row-major
/// `d × d` entries, for diagnostics such as the weak-symmetry check.
pub fn stress_rows(
    mesh: &Mesh,
    subgrid: &SubGrid,
    material: &MaterialField,
    cols: &ColumnSpace,
    system: &LocalSystem,
    grad: &DMatrix<f64>,
) -> Vec<(usize, Vec<Row>)> {
    let d = mesh.dim;
    let pt = patch(mesh, subgrid, material, system.vertex);
    let mut out = Vec::new();
    for &k in &pt.cells {
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut e = Point::zeros();
                e[j] = 1.0;
                let mut terms = Vec::new();
                pt.theta_normal(k, &e, i, 1.0, &mut terms);
                let mut row = Vec::new();
                combine(grad, &system.columns, &terms, &mut row);
                if i == j {
                    row.push((cols.p(k), -material.biot[k]));
                }
                entries.push(row);
            }
        }
        out.push((k, entries));
    }
    out
}

/// Reject vertex patches that cannot determine a weakly symmetric gradient:
/// a single cell with no Dirichlet component on any of its subfaces.
pub fn validate_vertex_patches(mesh: &Mesh, subgrid: &SubGrid, kinds: &BoundaryKinds) -> Result<()> {
    for v in 0..mesh.nodes.len() {
        if mesh.node_cells[v].len() != 1 {
            continue;
        }
        let anchored = subgrid.node_subfaces[v].iter().any(|&s| {
            kinds.mech[s].is_some_and(|k| k[..mesh.dim].contains(&BcKind::Dirichlet))
        });
        if !anchored {
            return Err(Error::Validation(format!(
                "vertex {v} at {:?} belongs to a single cell and carries only traction conditions",
                mesh.nodes[v].as_slice()
            )));
        }
    }
    Ok(())
}
