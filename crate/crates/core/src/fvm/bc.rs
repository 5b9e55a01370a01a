//! Boundary condition kinds and values per subface.

use crate::error::{Error, Result};
use crate::mesh::{FaceKind, Mesh, Point, SubGrid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BcKind {
    Dirichlet,
    Neumann,
}

/// Condition types on the external boundary. Interior and fracture subfaces
/// carry `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryKinds {
    pub flow: Vec<Option<BcKind>>,
    /// Per Cartesian component.
    pub mech: Vec<Option<[BcKind; 3]>>,
}

/// Boundary values at continuity points: pressure or outward flux density
/// for flow, displacement or traction density per component for mechanics.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryValues {
    pub flow: Vec<f64>,
    pub mech: Vec<Point>,
}

impl BoundaryValues {
    pub fn zeros(n_subfaces: usize) -> Self {
        BoundaryValues {
            flow: vec![0.0; n_subfaces],
            mech: vec![Point::zeros(); n_subfaces],
        }
    }
}

impl BoundaryKinds {
    /// Homogeneous Neumann everywhere on the external boundary.
    pub fn all_neumann(mesh: &Mesh, subgrid: &SubGrid) -> Self {
        let mut flow = vec![None; subgrid.num_subfaces()];
        let mut mech = vec![None; subgrid.num_subfaces()];
        for (s, sf) in subgrid.subfaces.iter().enumerate() {
            if mesh.faces[sf.face].is_boundary() {
                flow[s] = Some(BcKind::Neumann);
                mech[s] = Some([BcKind::Neumann; 3]);
            }
        }
        BoundaryKinds { flow, mech }
    }

    /// Dirichlet everywhere on the external boundary.
    pub fn all_dirichlet(mesh: &Mesh, subgrid: &SubGrid) -> Self {
        let mut k = Self::all_neumann(mesh, subgrid);
        for v in k.flow.iter_mut().flatten() {
            *v = BcKind::Dirichlet;
        }
        for v in k.mech.iter_mut().flatten() {
            *v = [BcKind::Dirichlet; 3];
        }
        k
    }

    pub fn validate(&self, mesh: &Mesh, subgrid: &SubGrid) -> Result<()> {
        let n = subgrid.num_subfaces();
        if self.flow.len() != n || self.mech.len() != n {
            return Err(Error::Contract(format!(
                "boundary kinds sized {}/{}, expected {n}",
                self.flow.len(),
                self.mech.len()
            )));
        }
        for (s, sf) in subgrid.subfaces.iter().enumerate() {
            let boundary = matches!(mesh.faces[sf.face].kind, FaceKind::Boundary);
            if boundary != self.flow[s].is_some() || boundary != self.mech[s].is_some() {
                return Err(Error::Contract(format!(
                    "subface {s}: boundary conditions must be given exactly on external boundary subfaces"
                )));
            }
        }
        Ok(())
    }
}
