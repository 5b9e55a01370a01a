//! Positive-to-negative fracture subface pairing.

use super::geometry::Point;
use super::subgrid::{SubGrid, SubfaceClass};
use super::{FaceKind, Mesh};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct FracturePairing {
    /// Positive subface ids, in increasing order. Contact index `i` refers to
    /// `positive[i]`.
    pub positive: Vec<usize>,
    /// `negative[i] = R(positive[i])`.
    pub negative: Vec<usize>,
    pub gap: Vec<f64>,
    pub fracture: Vec<usize>,
    /// Contact normal: outward normal of the positive side.
    pub normal: Vec<Point>,
    /// Contact index of every positive or negative subface.
    pub contact_index: Vec<Option<usize>>,
}

impl FracturePairing {
    pub fn len(&self) -> usize {
        self.positive.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positive.is_empty()
    }

    /// Inverse map: positive subface paired with a negative one.
    pub fn inverse(&self, negative_subface: usize) -> Option<usize> {
        self.contact_index[negative_subface]
            .filter(|&i| self.negative[i] == negative_subface)
            .map(|i| self.positive[i])
    }
}

pub type GapField<'a> = &'a dyn Fn(&Point) -> f64;

/// Pair every positive subface with the negative subface whose continuity
/// point is nearest in the tangential plane.
pub fn pair_fracture_sides(
    mesh: &Mesh,
    subgrid: &SubGrid,
    gap_field: Option<GapField>,
) -> Result<FracturePairing> {
    let dim = mesh.dim;
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    let mut gap = Vec::new();
    let mut fracture = Vec::new();
    let mut normal = Vec::new();
    let mut contact_index = vec![None; subgrid.subfaces.len()];
    for (s, sf) in subgrid.subfaces.iter().enumerate() {
        if sf.class != SubfaceClass::Positive {
            continue;
        }
        let face = &mesh.faces[sf.face];
        let FaceKind::Fracture { fracture: fr, twin, .. } = face.kind else {
            unreachable!("positive subface on a non-fracture face");
        };
        let n = face.normal;
        let diameter = face
            .nodes
            .iter()
            .flat_map(|&a| face.nodes.iter().map(move |&b| (a, b)))
            .map(|(a, b)| (mesh.nodes[a] - mesh.nodes[b]).norm())
            .fold(0.0, f64::max);
        let tol = 1e-8 * diameter;
        let x = sf.continuity_point;
        let mut found: Option<usize> = None;
        for i in 0..dim {
            let t = twin * dim + i;
            let y = subgrid.subfaces[t].continuity_point;
            let d = y - x;
            let tangential = (d - n * n.dot(&d)).norm();
            if tangential <= tol {
                if found.is_some() {
                    return Err(Error::Pairing(format!(
                        "positive subface {s} has several candidates on face {twin}"
                    )));
                }
                found = Some(t);
            }
        }
        let t = found.ok_or_else(|| {
            Error::Pairing(format!("positive subface {s} has no partner on face {twin}"))
        })?;
        if subgrid.subfaces[t].class != SubfaceClass::Negative || contact_index[t].is_some() {
            return Err(Error::Pairing(format!(
                "subface {t} cannot be paired with positive subface {s}"
            )));
        }
        let g = match gap_field {
            Some(field) => field(&x),
            None => (x - subgrid.subfaces[t].continuity_point).norm(),
        };
        if !(g >= 0.0) {
            return Err(Error::Pairing(format!("negative gap {g} at subface {s}")));
        }
        let idx = positive.len();
        contact_index[s] = Some(idx);
        contact_index[t] = Some(idx);
        positive.push(s);
        negative.push(t);
        gap.push(g);
        fracture.push(fr);
        normal.push(n);
    }
    let n_neg = subgrid
        .subfaces
        .iter()
        .filter(|s| s.class == SubfaceClass::Negative)
        .count();
    if n_neg != positive.len() {
        return Err(Error::Pairing(format!(
            "{} positive but {} negative subfaces",
            positive.len(),
            n_neg
        )));
    }
    Ok(FracturePairing {
        positive,
        negative,
        gap,
        fracture,
        normal,
        contact_index,
    })
}
