//! Subcells, subfaces and continuity points around each vertex.

use super::geometry::{tetrahedron_volume, triangle_area, Point};
use super::{FaceKind, Mesh, Side};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubfaceClass {
    /// On the positive fracture side.
    Positive,
    /// On the negative fracture side.
    Negative,
    /// Interior or external boundary.
    Remaining,
}

#[derive(Clone, Debug)]
pub struct Subface {
    pub face: usize,
    pub node: usize,
    pub area: f64,
    pub continuity_point: Point,
    pub class: SubfaceClass,
}

/// Subface ids are `face * dim + local node index on that face`.
#[derive(Clone, Debug)]
pub struct SubGrid {
    pub dim: usize,
    pub subfaces: Vec<Subface>,
    /// `subcell_volumes[cell][i]` belongs to node `cells[cell].nodes[i]`.
    pub subcell_volumes: Vec<Vec<f64>>,
    /// Subfaces touching each node, in increasing id order.
    pub node_subfaces: Vec<Vec<usize>>,
}

impl SubGrid {
    pub fn subface_id(&self, mesh: &Mesh, face: usize, node: usize) -> Option<usize> {
        mesh.faces[face]
            .nodes
            .iter()
            .position(|&n| n == node)
            .map(|i| face * self.dim + i)
    }

    pub fn subcell_volume(&self, mesh: &Mesh, cell: usize, node: usize) -> f64 {
        let i = mesh.cells[cell].nodes.iter().position(|&n| n == node).unwrap();
        self.subcell_volumes[cell][i]
    }

    pub fn num_subfaces(&self) -> usize {
        self.subfaces.len()
    }

    pub fn positive_subfaces(&self) -> impl Iterator<Item = usize> + '_ {
        self.subfaces
            .iter()
            .enumerate()
            .filter(|(_, s)| s.class == SubfaceClass::Positive)
            .map(|(i, _)| i)
    }
}

pub fn build_subgrid(mesh: &Mesh) -> Result<SubGrid> {
    let dim = mesh.dim;
    let mut subfaces = Vec::with_capacity(mesh.faces.len() * dim);
    let mut node_subfaces = vec![Vec::new(); mesh.nodes.len()];
    for (f, face) in mesh.faces.iter().enumerate() {
        let class = match face.kind {
            FaceKind::Fracture { side: Side::Positive, .. } => SubfaceClass::Positive,
            FaceKind::Fracture { side: Side::Negative, .. } => SubfaceClass::Negative,
            _ => SubfaceClass::Remaining,
        };
        let xf = face.centroid;
        for (i, &v) in face.nodes.iter().enumerate() {
            let xv = mesh.nodes[v];
            let area = if dim == 2 {
                (xf - xv).norm()
            } else {
                let a = 0.5 * (xv + mesh.nodes[face.nodes[(i + 1) % 3]]);
                let b = 0.5 * (xv + mesh.nodes[face.nodes[(i + 2) % 3]]);
                triangle_area(&xv, &a, &xf) + triangle_area(&xv, &xf, &b)
            };
            let continuity_point = xf - (xf - xv) / 3.0;
            if !(area > 0.0) || (continuity_point - xv).norm() <= 0.0 {
                return Err(Error::Geometry(format!(
                    "subface of face {f} at node {v} is degenerate"
                )));
            }
            node_subfaces[v].push(subfaces.len());
            subfaces.push(Subface {
                face: f,
                node: v,
                area,
                continuity_point,
                class,
            });
        }
    }

    let mut subcell_volumes = Vec::with_capacity(mesh.cells.len());
    for (c, cell) in mesh.cells.iter().enumerate() {
        let xk = cell.center;
        let mut vols = Vec::with_capacity(cell.nodes.len());
        for &v in &cell.nodes {
            let xv = mesh.nodes[v];
            let mut vol = 0.0;
            for &f in &cell.faces {
                let face = &mesh.faces[f];
                if !face.nodes.contains(&v) {
                    continue;
                }
                if dim == 2 {
                    let m = face.centroid;
                    vol += triangle_area(&xv, &m, &xk);
                } else {
                    let xf = face.centroid;
                    for &w in face.nodes.iter().filter(|&&w| w != v) {
                        let e = 0.5 * (xv + mesh.nodes[w]);
                        vol += tetrahedron_volume(&xk, &xv, &e, &xf);
                    }
                }
            }
            if !(vol > 0.0) {
                return Err(Error::Geometry(format!(
                    "subcell of cell {c} at node {v} is degenerate"
                )));
            }
            vols.push(vol);
        }
        subcell_volumes.push(vols);
    }

    Ok(SubGrid {
        dim,
        subfaces,
        subcell_volumes,
        node_subfaces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_mesh, RawMesh};

    fn single_triangle_3d_face() -> RawMesh {
        RawMesh {
            dim: 3,
            nodes: vec![
                Point::new(0.0, 0.0, 0.0),
                Point::new(1.0, 0.0, 0.0),
                Point::new(0.0, 1.0, 0.0),
                Point::new(0.0, 0.0, 1.0),
            ],
            elements: vec![vec![0, 1, 2, 3]],
            face_groups: vec![],
        }
    }

    #[test]
    fn segment_subface_geometry() {
        let raw = RawMesh {
            dim: 2,
            nodes: vec![
                Point::new(0.0, 0.0, 0.0),
                Point::new(1.0, 0.0, 0.0),
                Point::new(0.0, 1.0, 0.0),
            ],
            elements: vec![vec![0, 1, 2]],
            face_groups: vec![],
        };
        let mesh = build_mesh(&raw, &[]).unwrap();
        let sg = build_subgrid(&mesh).unwrap();
        let f = (0..mesh.faces.len())
            .find(|&f| {
                let mut n = mesh.faces[f].nodes.clone();
                n.sort();
                n == vec![0, 1]
            })
            .unwrap();
        let s = sg.subface_id(&mesh, f, 0).unwrap();
        let sf = &sg.subfaces[s];
        assert!((sf.continuity_point - Point::new(1.0 / 3.0, 0.0, 0.0)).norm() < 1e-15);
        assert!((sf.area - 0.5).abs() < 1e-15);
    }

    #[test]
    fn triangle_face_splits_into_equal_thirds() {
        let mesh = build_mesh(&single_triangle_3d_face(), &[]).unwrap();
        let sg = build_subgrid(&mesh).unwrap();
        let f = (0..mesh.faces.len())
            .find(|&f| {
                let mut n = mesh.faces[f].nodes.clone();
                n.sort();
                n == vec![0, 1, 2]
            })
            .unwrap();
        assert!((mesh.faces[f].area - 0.5).abs() < 1e-15);
        for i in 0..3 {
            assert!((sg.subfaces[f * 3 + i].area - 1.0 / 6.0).abs() < 1e-15);
        }
    }

    #[test]
    fn partitions_reproduce_measures() {
        let mesh = build_mesh(&single_triangle_3d_face(), &[]).unwrap();
        let sg = build_subgrid(&mesh).unwrap();
        for (c, cell) in mesh.cells.iter().enumerate() {
            let s: f64 = sg.subcell_volumes[c].iter().sum();
            assert!((s - cell.volume).abs() <= 1e-12 * cell.volume);
        }
        for (f, face) in mesh.faces.iter().enumerate() {
            let s: f64 = (0..3).map(|i| sg.subfaces[f * 3 + i].area).sum();
            assert!((s - face.area).abs() <= 1e-12 * face.area);
        }
    }
}
