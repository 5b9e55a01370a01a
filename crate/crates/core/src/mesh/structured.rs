//! Structured simplex meshes for rectangles and boxes with embedded fractures.
//!
//! Rectangles are split into triangles with alternating diagonals so that
//! every diagonal joins two nodes with even `i + j`. Boxes use the Kuhn
//! subdivision into six tetrahedra, mirrored in every cell with an odd index
//! along an axis. Fractures must follow mesh faces: polylines along grid lines
//! or diagonals in 2d, and planes `i_a = c` or `i_a ± i_b = c` (c even) in 3d.

use super::geometry::Point;
use super::{FaceGroup, RawMesh};
use crate::error::{Error, Result};

/// Names of the boundary groups of [`rectangle`].
pub const RECT_SIDES: [&str; 4] = ["left", "right", "bottom", "top"];
/// Names of the boundary groups of [`cuboid`].
pub const BOX_SIDES: [&str; 6] = ["west", "east", "south", "north", "bottom", "top"];

#[derive(Clone, Debug, PartialEq)]
pub struct Polyline {
    pub name: String,
    pub points: Vec<[f64; 2]>,
}

/// A planar disk given by center, radius, strike and dip (degrees). Strike is
/// measured from the x axis in the xy plane; dip is the rotation about the
/// strike line.
#[derive(Clone, Debug, PartialEq)]
pub struct Disk {
    pub name: String,
    pub center: [f64; 3],
    pub radius: f64,
    pub strike_deg: f64,
    pub dip_deg: f64,
}

impl Disk {
    pub fn normal(&self) -> Point {
        let (s, d) = (self.strike_deg.to_radians(), self.dip_deg.to_radians());
        let axis = Point::new(s.cos(), s.sin(), 0.0);
        let z = Point::new(0.0, 0.0, 1.0);
        // Rodrigues rotation of e_z about the strike line.
        z * d.cos() + axis.cross(&z) * d.sin() + axis * axis.dot(&z) * (1.0 - d.cos())
    }
}

/// A plane in index coordinates: `Σ coef[a] * i_a = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexPlane {
    pub coef: [i64; 3],
    pub rhs: i64,
}

fn snap_index(x: f64, x0: f64, h: f64, what: &str) -> Result<i64> {
    let t = (x - x0) / h;
    let r = t.round();
    if (t - r).abs() > 1e-9 * t.abs().max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "{what} coordinate {x} is not on a grid line (spacing {h})"
        )));
    }
    Ok(r as i64)
}

/// Triangulated rectangle `[x0, x1] × [y0, y1]` with `nx × ny` squares.
pub fn rectangle(
    lo: [f64; 2],
    hi: [f64; 2],
    n: [usize; 2],
    fractures: &[Polyline],
) -> Result<RawMesh> {
    let [nx, ny] = n;
    if nx == 0 || ny == 0 || !(hi[0] > lo[0]) || !(hi[1] > lo[1]) {
        return Err(Error::InvalidParameter("empty rectangle".into()));
    }
    let h = [(hi[0] - lo[0]) / nx as f64, (hi[1] - lo[1]) / ny as f64];
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            nodes.push(Point::new(lo[0] + i as f64 * h[0], lo[1] + j as f64 * h[1], 0.0));
        }
    }
    // Pin the exact upper bounds against accumulated roundoff.
    for j in 0..=ny {
        nodes[id(nx, j)].x = hi[0];
    }
    for i in 0..=nx {
        nodes[id(i, ny)].y = hi[1];
    }
    let mut elements = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            if (i + j) % 2 == 0 {
                elements.push(vec![a, b, c]);
                elements.push(vec![a, c, d]);
            } else {
                elements.push(vec![a, b, d]);
                elements.push(vec![b, c, d]);
            }
        }
    }
    let mut face_groups = vec![
        FaceGroup {
            name: RECT_SIDES[0].into(),
            faces: (0..ny).map(|j| vec![id(0, j), id(0, j + 1)]).collect(),
        },
        FaceGroup {
            name: RECT_SIDES[1].into(),
            faces: (0..ny).map(|j| vec![id(nx, j), id(nx, j + 1)]).collect(),
        },
        FaceGroup {
            name: RECT_SIDES[2].into(),
            faces: (0..nx).map(|i| vec![id(i, 0), id(i + 1, 0)]).collect(),
        },
        FaceGroup {
            name: RECT_SIDES[3].into(),
            faces: (0..nx).map(|i| vec![id(i, ny), id(i + 1, ny)]).collect(),
        },
    ];
    for frac in fractures {
        if frac.points.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "fracture '{}' needs at least two points",
                frac.name
            )));
        }
        let idx: Vec<(i64, i64)> = frac
            .points
            .iter()
            .map(|p| {
                Ok((
                    snap_index(p[0], lo[0], h[0], &frac.name)?,
                    snap_index(p[1], lo[1], h[1], &frac.name)?,
                ))
            })
            .collect::<Result<_>>()?;
        let mut faces = Vec::new();
        for w in idx.windows(2) {
            let ((i0, j0), (i1, j1)) = (w[0], w[1]);
            let (di, dj) = (i1 - i0, j1 - j0);
            if !(di == 0 || dj == 0 || di.abs() == dj.abs()) || (di == 0 && dj == 0) {
                return Err(Error::InvalidParameter(format!(
                    "fracture '{}' segment is neither axis-aligned nor diagonal",
                    frac.name
                )));
            }
            let (si, sj) = (di.signum(), dj.signum());
            let (mut i, mut j) = (i0, j0);
            while (i, j) != (i1, j1) {
                let (ni, nj) = (i + si, j + sj);
                for &(a, b) in &[(i, j), (ni, nj)] {
                    if a < 0 || b < 0 || a > nx as i64 || b > ny as i64 {
                        return Err(Error::InvalidParameter(format!(
                            "fracture '{}' leaves the domain",
                            frac.name
                        )));
                    }
                }
                if si != 0 && sj != 0 {
                    let parity = (i.min(ni) + j.min(nj)) % 2;
                    let want = if si == sj { 0 } else { 1 };
                    if parity != want {
                        return Err(Error::InvalidParameter(format!(
                            "fracture '{}' diagonal does not match the triangulation",
                            frac.name
                        )));
                    }
                }
                faces.push(vec![id(i as usize, j as usize), id(ni as usize, nj as usize)]);
                i = ni;
                j = nj;
            }
        }
        face_groups.push(FaceGroup {
            name: frac.name.clone(),
            faces,
        });
    }
    Ok(RawMesh {
        dim: 2,
        nodes,
        elements,
        face_groups,
    })
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Snap a disk to a plane of the box triangulation, in index coordinates.
pub fn snap_disk_plane(disk: &Disk, lo: [f64; 3], h: [f64; 3]) -> IndexPlane {
    let n = disk.normal();
    let center: Vec<f64> = (0..3).map(|a| (disk.center[a] - lo[a]) / h[a]).collect();
    // Normal in index space.
    let m: Vec<f64> = (0..3).map(|a| n[a] * h[a]).collect();
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| m[b].abs().partial_cmp(&m[a].abs()).unwrap());
    let (a, b) = (order[0], order[1]);
    let mut coef = [0i64; 3];
    coef[a] = 1;
    if m[b].abs() > (22.5f64).to_radians().tan() * m[a].abs() {
        coef[b] = if m[a] * m[b] > 0.0 { 1 } else { -1 };
        let c = center[a] + coef[b] as f64 * center[b];
        let rhs = 2 * (c / 2.0).round() as i64;
        IndexPlane { coef, rhs }
    } else {
        IndexPlane {
            coef,
            rhs: center[a].round() as i64,
        }
    }
}

/// Kuhn-triangulated box with `n[0] × n[1] × n[2]` cubes.
pub fn cuboid(lo: [f64; 3], hi: [f64; 3], n: [usize; 3], fractures: &[Disk]) -> Result<RawMesh> {
    if n.contains(&0) || (0..3).any(|a| !(hi[a] > lo[a])) {
        return Err(Error::InvalidParameter("empty box".into()));
    }
    let h = [
        (hi[0] - lo[0]) / n[0] as f64,
        (hi[1] - lo[1]) / n[1] as f64,
        (hi[2] - lo[2]) / n[2] as f64,
    ];
    let id = |i: usize, j: usize, k: usize| (k * (n[1] + 1) + j) * (n[0] + 1) + i;
    let mut nodes = Vec::with_capacity((n[0] + 1) * (n[1] + 1) * (n[2] + 1));
    for k in 0..=n[2] {
        for j in 0..=n[1] {
            for i in 0..=n[0] {
                let idx = [i, j, k];
                let mut p = Point::zeros();
                for a in 0..3 {
                    p[a] = if idx[a] == n[a] { hi[a] } else { lo[a] + idx[a] as f64 * h[a] };
                }
                nodes.push(p);
            }
        }
    }
    let mut elements = Vec::with_capacity(6 * n[0] * n[1] * n[2]);
    for k in 0..n[2] {
        for j in 0..n[1] {
            for i in 0..n[0] {
                let base = [i, j, k];
                let corner = |xi: [usize; 3]| {
                    let mut g = [0usize; 3];
                    for a in 0..3 {
                        let flip = base[a] % 2;
                        g[a] = base[a] + (xi[a] ^ flip);
                    }
                    id(g[0], g[1], g[2])
                };
                for perm in PERMUTATIONS {
                    let mut xi = [0usize; 3];
                    let mut tet = vec![corner(xi)];
                    for &axis in &perm {
                        xi[axis] = 1;
                        tet.push(corner(xi));
                    }
                    elements.push(tet);
                }
            }
        }
    }

    // Boundary faces: the two triangles of every boundary square, taken from
    // the cell triangulation so they match the tetrahedra.
    let mut face_groups: Vec<FaceGroup> = BOX_SIDES
        .iter()
        .map(|s| FaceGroup {
            name: s.to_string(),
            faces: Vec::new(),
        })
        .collect();
    let coords: Vec<[usize; 3]> = {
        let mut v = vec![[0usize; 3]; nodes.len()];
        for k in 0..=n[2] {
            for j in 0..=n[1] {
                for i in 0..=n[0] {
                    v[id(i, j, k)] = [i, j, k];
                }
            }
        }
        v
    };
    let mut fracture_faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); fractures.len()];
    let planes: Vec<IndexPlane> = fractures.iter().map(|d| snap_disk_plane(d, lo, h)).collect();
    let mut seen = std::collections::HashSet::new();
    for tet in &elements {
        for skip in 0..4 {
            let face: Vec<usize> = (0..4).filter(|&q| q != skip).map(|q| tet[q]).collect();
            let mut key = face.clone();
            key.sort_unstable();
            if !seen.insert(key) {
                continue;
            }
            let c: Vec<[usize; 3]> = face.iter().map(|&q| coords[q]).collect();
            for a in 0..3 {
                if c.iter().all(|x| x[a] == 0) {
                    face_groups[2 * a].faces.push(face.clone());
                } else if c.iter().all(|x| x[a] == n[a]) {
                    face_groups[2 * a + 1].faces.push(face.clone());
                }
            }
            for (fi, (disk, plane)) in fractures.iter().zip(&planes).enumerate() {
                let on_plane = c.iter().all(|x| {
                    (0..3).map(|a| plane.coef[a] * x[a] as i64).sum::<i64>() == plane.rhs
                });
                if !on_plane {
                    continue;
                }
                let centroid = face.iter().fold(Point::zeros(), |s, &q| s + nodes[q]) / 3.0;
                if (centroid - projected_center(disk, plane, lo, h)).norm() < disk.radius {
                    fracture_faces[fi].push(face.clone());
                }
            }
        }
    }
    for (disk, faces) in fractures.iter().zip(fracture_faces) {
        if faces.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "fracture '{}' covers no mesh faces",
                disk.name
            )));
        }
        face_groups.push(FaceGroup {
            name: disk.name.clone(),
            faces,
        });
    }
    Ok(RawMesh {
        dim: 3,
        nodes,
        elements,
        face_groups,
    })
}

/// Physical unit normal of a snapped plane.
pub fn plane_normal(plane: &IndexPlane, h: [f64; 3]) -> Point {
    Point::new(
        plane.coef[0] as f64 / h[0],
        plane.coef[1] as f64 / h[1],
        plane.coef[2] as f64 / h[2],
    )
    .normalize()
}

/// Orthogonal projection of the disk center onto its snapped plane.
pub fn projected_center(disk: &Disk, plane: &IndexPlane, lo: [f64; 3], h: [f64; 3]) -> Point {
    let x = Point::new(disk.center[0], disk.center[1], disk.center[2]);
    // Plane in physical coordinates: Σ coef_a (x_a - lo_a) / h_a = rhs.
    let w = Point::new(
        plane.coef[0] as f64 / h[0],
        plane.coef[1] as f64 / h[1],
        plane.coef[2] as f64 / h[2],
    );
    let offset: f64 = (0..3).map(|a| w[a] * lo[a]).sum::<f64>() + plane.rhs as f64;
    let dist = (w.dot(&x) - offset) / w.norm();
    x - w.normalize() * dist
}
