//! Vertex-by-vertex elimination of the subcell gradients.

use rayon::prelude::*;

use super::bc::{BoundaryKinds, BoundaryValues};
use super::flow::{assemble_flow_local, flux_rows};
use super::material::MaterialField;
use super::mech::{assemble_mech_local, mech_rows, validate_vertex_patches};
use super::stencil::{ColumnSpace, Stencil};
use crate::error::{Error, Result};
use crate::mesh::{FracturePairing, Mesh, Point, SubGrid};

/// Linear reconstruction stencils over the unified [`ColumnSpace`].
#[derive(Clone, Debug, PartialEq)]
pub struct CondensedOperators {
    pub columns: ColumnSpace,
    /// One row per subface: flux out of the face's first neighbour cell.
    /// Empty rows when flow is not discretized.
    pub flux: Stencil,
    /// `dim` rows per subface: traction on the first neighbour cell.
    pub traction: Stencil,
    /// `dim` rows per subface: displacement at the continuity point, seen
    /// from the first neighbour cell.
    pub displacement: Stencil,
    /// One row per subcell, indexed `cell * (dim + 1) + local node`.
    pub divergence: Stencil,
    pub has_flow: bool,
}

/// Reconstructed subface quantities.
#[derive(Clone, Debug, PartialEq)]
pub struct SubfaceQuantities {
    pub flux: Vec<f64>,
    pub traction: Vec<Point>,
    pub displacement: Vec<Point>,
}

pub fn column_space(mesh: &Mesh, subgrid: &SubGrid, pairing: &FracturePairing) -> ColumnSpace {
    ColumnSpace {
        dim: mesh.dim,
        n_cells: mesh.num_cells(),
        n_contacts: pairing.len(),
        n_subfaces: subgrid.num_subfaces(),
    }
}

type VertexRows = (Vec<(usize, Vec<(usize, f64)>)>, super::mech::MechRows);

/// Solve every local system and collect the stencils. Local solves run in
/// parallel; rows are merged in vertex order so the result is independent of
/// scheduling.
pub fn condense(
    mesh: &Mesh,
    subgrid: &SubGrid,
    pairing: &FracturePairing,
    material: &MaterialField,
    kinds: &BoundaryKinds,
    with_flow: bool,
) -> Result<CondensedOperators> {
    material.validate_mechanics(mesh)?;
    if with_flow {
        material.validate(mesh)?;
    }
    kinds.validate(mesh, subgrid)?;
    validate_vertex_patches(mesh, subgrid, kinds)?;
    let cols = column_space(mesh, subgrid, pairing);
    let d = mesh.dim;
    let per_vertex: Vec<Result<VertexRows>> = (0..mesh.nodes.len())
        .into_par_iter()
        .map(|v| {
            let flux = if with_flow {
                let sys = assemble_flow_local(mesh, subgrid, material, kinds, &cols, v)?;
                let grad = sys.solve()?;
                flux_rows(mesh, subgrid, material, kinds, &cols, &sys, &grad)
            } else {
                Vec::new()
            };
            let sys = assemble_mech_local(mesh, subgrid, pairing, material, kinds, &cols, v)?;
            let grad = sys.solve()?;
            let mech = mech_rows(mesh, subgrid, pairing, material, kinds, &cols, &sys, &grad)?;
            Ok((flux, mech))
        })
        .collect();

    let n_sf = subgrid.num_subfaces();
    let mut flux = vec![Vec::new(); n_sf];
    let mut traction = vec![Vec::new(); n_sf * d];
    let mut displacement = vec![Vec::new(); n_sf * d];
    let mut divergence = vec![Vec::new(); mesh.num_cells() * (d + 1)];
    for (v, res) in per_vertex.into_iter().enumerate() {
        let (f, mech) = res?;
        for (s, row) in f {
            flux[s] = row;
        }
        for (s, i, row) in mech.traction {
            traction[s * d + i] = row;
        }
        for (s, i, row) in mech.displacement {
            displacement[s * d + i] = row;
        }
        for (k, row) in mech.divergence {
            let local = mesh.cells[k]
                .nodes
                .iter()
                .position(|&n| n == v)
                .ok_or_else(|| Error::InternalConsistency(format!("cell {k} lacks vertex {v}")))?;
            divergence[k * (d + 1) + local] = row;
        }
    }
    Ok(CondensedOperators {
        columns: cols,
        flux: Stencil::from_rows(flux),
        traction: Stencil::from_rows(traction),
        displacement: Stencil::from_rows(displacement),
        divergence: Stencil::from_rows(divergence),
        has_flow: with_flow,
    })
}

impl CondensedOperators {
    /// Flatten boundary values into the bc blocks of the column space.
    pub fn boundary_columns(&self, values: &BoundaryValues) -> Result<(Vec<f64>, Vec<f64>)> {
        let d = self.columns.dim;
        if values.flow.len() != self.columns.n_subfaces || values.mech.len() != self.columns.n_subfaces {
            return Err(Error::Contract("boundary values sized inconsistently with the mesh".into()));
        }
        let mut mech = Vec::with_capacity(values.mech.len() * d);
        for v in &values.mech {
            mech.extend_from_slice(&v.as_slice()[..d]);
        }
        Ok((mech, values.flow.clone()))
    }

    /// Evaluate flux, traction and displacement trace on every subface.
    pub fn reconstruct(
        &self,
        u: &[f64],
        p: &[f64],
        lambda: &[f64],
        values: &BoundaryValues,
    ) -> Result<SubfaceQuantities> {
        let (bm, bf) = self.boundary_columns(values)?;
        let x = self.columns.gather(u, p, lambda, &bm, &bf)?;
        let d = self.columns.dim;
        let n_sf = self.columns.n_subfaces;
        let to_points = |v: Vec<f64>| -> Vec<Point> {
            (0..n_sf)
                .map(|s| {
                    let mut p = Point::zeros();
                    for i in 0..d {
                        p[i] = v[s * d + i];
                    }
                    p
                })
                .collect()
        };
        let flux = if self.has_flow {
            self.flux.apply(&x)
        } else {
            vec![0.0; n_sf]
        };
        Ok(SubfaceQuantities {
            flux,
            traction: to_points(self.traction.apply(&x)),
            displacement: to_points(self.displacement.apply(&x)),
        })
    }
}
