//! MPFA-O local systems for the fluid flux.

use nalgebra::DMatrix;

use super::bc::{BcKind, BoundaryKinds};
use super::local::{combine, LocalRow, LocalSystem};
use super::material::MaterialField;
use super::stencil::ColumnSpace;
use crate::error::Result;
use crate::mesh::{FaceKind, Mesh, Point, SubGrid};

fn permeability_normal(material: &MaterialField, cell: usize, n: &Point) -> Point {
    material.permeability[cell] * n
}

/// Assemble the flux-balance and pressure-continuity equations around `vertex`.
pub fn assemble_flow_local(
    mesh: &Mesh,
    subgrid: &SubGrid,
    material: &MaterialField,
    kinds: &BoundaryKinds,
    cols: &ColumnSpace,
    vertex: usize,
) -> Result<LocalSystem> {
    let d = mesh.dim;
    let cells = mesh.node_cells[vertex].clone();
    let local = |k: usize| cells.iter().position(|&c| c == k).unwrap();
    let mut rows = Vec::new();
    for &s in &subgrid.node_subfaces[vertex] {
        let sf = &subgrid.subfaces[s];
        let face = &mesh.faces[sf.face];
        let (m, n, xs) = (sf.area, face.normal, sf.continuity_point);
        let k = face.cells[0];
        let kl = local(k);
        let dk = xs - mesh.cells[k].center;
        let kn = permeability_normal(material, k, &n);
        match face.kind {
            FaceKind::Interior => {
                let l = face.cells[1];
                let ll = local(l);
                let dl = xs - mesh.cells[l].center;
                let ln = permeability_normal(material, l, &n);
                let mut flux = LocalRow::default();
                let mut cont = LocalRow::default();
                for j in 0..d {
                    flux.lhs.push((kl * d + j, m * kn[j]));
                    flux.lhs.push((ll * d + j, -m * ln[j]));
                    cont.lhs.push((kl * d + j, dk[j]));
                    cont.lhs.push((ll * d + j, -dl[j]));
                }
                cont.rhs.push((cols.p(l), 1.0));
                cont.rhs.push((cols.p(k), -1.0));
                rows.push(flux);
                rows.push(cont);
            }
            FaceKind::Boundary if kinds.flow[s] == Some(BcKind::Dirichlet) => {
                let mut row = LocalRow::default();
                for j in 0..d {
                    row.lhs.push((kl * d + j, dk[j]));
                }
                row.rhs.push((cols.bc_flow(s), 1.0));
                row.rhs.push((cols.p(k), -1.0));
                rows.push(row);
            }
            FaceKind::Boundary | FaceKind::Fracture { .. } => {
                let mut row = LocalRow::default();
                for j in 0..d {
                    row.lhs.push((kl * d + j, -m * kn[j]));
                }
                if matches!(face.kind, FaceKind::Boundary) {
                    row.rhs.push((cols.bc_flow(s), m));
                }
                rows.push(row);
            }
        }
    }
    LocalSystem::from_rows("flow", vertex, cells.clone(), cells.len() * d, &rows)
}

/// Flux stencil rows for the subfaces of the vertex, given solved gradients.
/// The flux is measured out of the first neighbour cell of each face.
pub fn flux_rows(
    mesh: &Mesh,
    subgrid: &SubGrid,
    material: &MaterialField,
    kinds: &BoundaryKinds,
    cols: &ColumnSpace,
    system: &LocalSystem,
    grad: &DMatrix<f64>,
) -> Vec<(usize, Vec<(usize, f64)>)> {
    let d = mesh.dim;
    let mut out = Vec::new();
    for &s in &subgrid.node_subfaces[system.vertex] {
        let sf = &subgrid.subfaces[s];
        let face = &mesh.faces[sf.face];
        let mut row = Vec::new();
        match face.kind {
            FaceKind::Fracture { .. } => {}
            FaceKind::Boundary if kinds.flow[s] == Some(BcKind::Neumann) => {
                row.push((cols.bc_flow(s), sf.area));
            }
            _ => {
                let k = face.cells[0];
                let kl = system.cells.iter().position(|&c| c == k).unwrap();
                let kn = permeability_normal(material, k, &face.normal);
                let terms: Vec<(usize, f64)> = (0..d).map(|j| (kl * d + j, -sf.area * kn[j])).collect();
                combine(grad, &system.columns, &terms, &mut row);
            }
        }
        out.push((s, row));
    }
    out
}

/// One-sided flux stencil of `cell` over subface `s` computed directly from
/// the gradients, without boundary overrides.
pub fn one_sided_flux(
    mesh: &Mesh,
    subgrid: &SubGrid,
    material: &MaterialField,
    system: &LocalSystem,
    grad: &DMatrix<f64>,
    s: usize,
    cell: usize,
) -> Vec<(usize, f64)> {
    let d = mesh.dim;
    let sf = &subgrid.subfaces[s];
    let face = &mesh.faces[sf.face];
    let kl = system.cells.iter().position(|&c| c == cell).unwrap();
    let kn = permeability_normal(material, cell, &face.outward_normal(cell));
    let terms: Vec<(usize, f64)> = (0..d).map(|j| (kl * d + j, -sf.area * kn[j])).collect();
    let mut row = Vec::new();
    combine(grad, &system.columns, &terms, &mut row);
    row
}
