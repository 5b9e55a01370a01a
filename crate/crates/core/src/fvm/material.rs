//! Per-cell material parameters.

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::mesh::{Mesh, Point};

/// Lamé parameters from Young's modulus and Poisson's ratio.
pub fn lame_from_young(e: f64, nu: f64) -> (f64, f64) {
    let shear = e / (2.0 * (1.0 + nu));
    let lambda = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
    (shear, lambda)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaterialField {
    pub shear: Vec<f64>,
    pub lambda: Vec<f64>,
    pub biot: Vec<f64>,
    pub storage: Vec<f64>,
    /// Only the leading `dim × dim` block is used.
    pub permeability: Vec<Matrix3<f64>>,
    pub body_force: Vec<Point>,
    pub source: Vec<f64>,
}

/// Spatially constant material parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Homogeneous {
    pub shear: f64,
    pub lambda: f64,
    pub biot: f64,
    pub storage: f64,
    pub permeability: f64,
}

impl MaterialField {
    pub fn homogeneous(mesh: &Mesh, m: Homogeneous) -> Self {
        let n = mesh.num_cells();
        MaterialField {
            shear: vec![m.shear; n],
            lambda: vec![m.lambda; n],
            biot: vec![m.biot; n],
            storage: vec![m.storage; n],
            permeability: vec![Matrix3::identity() * m.permeability; n],
            body_force: vec![Point::zeros(); n],
            source: vec![0.0; n],
        }
    }

    /// Sample parameters at cell centers.
    pub fn sampled(mesh: &Mesh, f: impl Fn(&Point) -> Homogeneous) -> Self {
        let mut field = MaterialField::homogeneous(mesh, f(&mesh.cells[0].center));
        for (k, cell) in mesh.cells.iter().enumerate() {
            let m = f(&cell.center);
            field.shear[k] = m.shear;
            field.lambda[k] = m.lambda;
            field.biot[k] = m.biot;
            field.storage[k] = m.storage;
            field.permeability[k] = Matrix3::identity() * m.permeability;
        }
        field
    }

    /// Check array sizes and the elastic and coupling parameters.
    pub fn validate_mechanics(&self, mesh: &Mesh) -> Result<()> {
        let d = mesh.dim;
        let n = mesh.num_cells();
        let lens = [
            self.shear.len(),
            self.lambda.len(),
            self.biot.len(),
            self.storage.len(),
            self.permeability.len(),
            self.body_force.len(),
            self.source.len(),
        ];
        if lens.iter().any(|&l| l != n) {
            return Err(Error::Contract(format!(
                "material arrays have lengths {lens:?}, expected {n}"
            )));
        }
        for k in 0..n {
            let (g, l) = (self.shear[k], self.lambda[k]);
            if !(g > 0.0) || !(l > -2.0 * g / d as f64) {
                return Err(Error::InvalidParameter(format!(
                    "cell {k}: inadmissible Lamé parameters G = {g}, Λ = {l}"
                )));
            }
            if !(0.0..=1.0).contains(&self.biot[k]) {
                return Err(Error::InvalidParameter(format!(
                    "cell {k}: Biot coefficient {} outside [0, 1]",
                    self.biot[k]
                )));
            }
        }
        Ok(())
    }

    /// Full check including the fluid parameters.
    pub fn validate(&self, mesh: &Mesh) -> Result<()> {
        self.validate_mechanics(mesh)?;
        let d = mesh.dim;
        for k in 0..mesh.num_cells() {
            if !(self.storage[k] >= 0.0) {
                return Err(Error::InvalidParameter(format!("cell {k}: negative storage")));
            }
            let kk = self.permeability[k];
            let block = kk.view((0, 0), (d, d)).into_owned();
            let sym = (&block - block.transpose()).abs().max() <= 1e-12 * block.abs().max();
            if !sym || block.cholesky().is_none() {
                return Err(Error::InvalidParameter(format!(
                    "cell {k}: permeability is not symmetric positive definite"
                )));
            }
        }
        Ok(())
    }
}
