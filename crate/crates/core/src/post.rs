//! Face-wise fracture quantities derived from subface values.

use crate::assembly::{Discretization, State};
use crate::contact::ContactSet;
use crate::error::{Error, Result};
use crate::fvm::BoundaryValues;
use crate::mesh::Point;

/// Area-weighted average of the subface values on one positive fracture face.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceRecord {
    pub fracture: usize,
    pub face: usize,
    pub centroid: Point,
    pub area: f64,
    pub normal: Point,
    pub lambda: Point,
    pub jump: Point,
    pub friction: f64,
    /// Label covering the largest part of the face.
    pub set: ContactSet,
}

impl FaceRecord {
    pub fn lambda_n(&self) -> f64 {
        self.lambda.dot(&self.normal)
    }
    pub fn lambda_t(&self) -> f64 {
        (self.lambda - self.normal * self.lambda_n()).norm()
    }
    pub fn jump_n(&self) -> f64 {
        self.jump.dot(&self.normal)
    }
    pub fn jump_t(&self) -> f64 {
        (self.jump - self.normal * self.jump_n()).norm()
    }
}

/// Face records of every fracture, ordered by fracture and then by face.
pub fn fracture_faces(
    disc: &Discretization,
    state: &State,
    values: &BoundaryValues,
    sets: &[ContactSet],
) -> Result<Vec<FaceRecord>> {
    let pairing = &disc.pairing;
    if sets.len() != pairing.len() {
        return Err(Error::Contract("one set label per contact expected".into()));
    }
    let jumps = disc.jumps(state, values)?;
    let d = disc.layout.dim;
    let mut out = Vec::new();
    for (fi, fr) in disc.mesh.fractures.iter().enumerate() {
        for &(plus, _) in &fr.faces {
            let face = &disc.mesh.faces[plus];
            let mut lambda = Point::zeros();
            let mut jump = Point::zeros();
            let mut friction = 0.0;
            let mut area = 0.0;
            let mut label_area = [0.0; 3];
            for local in 0..face.nodes.len() {
                let s = plus * d + local;
                let c = pairing.contact_index[s]
                    .ok_or_else(|| Error::InternalConsistency(format!("fracture subface {s} is unpaired")))?;
                let m = disc.subgrid.subfaces[s].area;
                lambda += state.traction(d, c) * m;
                jump += jumps[c] * m;
                friction += disc.friction[c] * m;
                area += m;
                label_area[match sets[c] {
                    ContactSet::Open => 0,
                    ContactSet::Stick => 1,
                    ContactSet::Slide => 2,
                }] += m;
            }
            let best = (0..3).fold(0, |b, i| if label_area[i] > label_area[b] { i } else { b });
            out.push(FaceRecord {
                fracture: fi,
                face: plus,
                centroid: face.centroid,
                area,
                normal: face.normal,
                lambda: lambda / area,
                jump: jump / area,
                friction: friction / area,
                set: [ContactSet::Open, ContactSet::Stick, ContactSet::Slide][best],
            });
        }
    }
    Ok(out)
}
