//! Cell/face/vertex topology with fracture-conforming splitting.
//!
//! A [`RawMesh`] is a neutral description: node coordinates, simplex
//! connectivity and named face groups. [`build_mesh`] enumerates faces,
//! attaches tags, duplicates every face of the requested fracture groups into
//! a positive/negative pair and splits fracture vertices whose cell star is
//! disconnected by the fracture (tip vertices keep a single copy).

pub mod geometry;
pub mod pairing;
pub mod structured;
pub mod subgrid;

use std::collections::HashMap;

use crate::error::{Error, Result};
pub use geometry::Point;
use geometry::{canonical_orientation, centroid, face_normal_and_measure, point_segment_distance, simplex_measure};
pub use pairing::{pair_fracture_sides, FracturePairing};
pub use subgrid::{build_subgrid, SubGrid, Subface, SubfaceClass};

/// Neutral in-memory mesh description.
#[derive(Clone, Debug, PartialEq)]
pub struct RawMesh {
    pub dim: usize,
    pub nodes: Vec<Point>,
    pub elements: Vec<Vec<usize>>,
    pub face_groups: Vec<FaceGroup>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FaceGroup {
    pub name: String,
    pub faces: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Positive,
    Negative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceKind {
    Interior,
    Boundary,
    Fracture {
        fracture: usize,
        side: Side,
        /// The face on the other side of the fracture.
        twin: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub nodes: Vec<usize>,
    pub faces: Vec<usize>,
    pub center: Point,
    pub volume: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    pub nodes: Vec<usize>,
    /// One or two neighbour cells. The normal points out of `cells[0]`.
    pub cells: Vec<usize>,
    pub centroid: Point,
    pub normal: Point,
    pub area: f64,
    pub kind: FaceKind,
    pub tag: Option<usize>,
}

impl Face {
    /// Outward unit normal of `cell` on this face.
    pub fn outward_normal(&self, cell: usize) -> Point {
        if self.cells[0] == cell {
            self.normal
        } else {
            -self.normal
        }
    }

    /// +1 when `cell` is the first neighbour, -1 otherwise.
    pub fn sign(&self, cell: usize) -> f64 {
        if self.cells[0] == cell {
            1.0
        } else {
            -1.0
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self.kind, FaceKind::Boundary)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fracture {
    pub name: String,
    /// (positive face, negative face) pairs.
    pub faces: Vec<(usize, usize)>,
}

/// Geometric element of a fracture tip: a point in 2d, an edge in 3d.
#[derive(Clone, Debug, PartialEq)]
pub enum TipElement {
    Point(Point),
    Segment(Point, Point),
}

impl TipElement {
    pub fn distance(&self, x: &Point) -> f64 {
        match self {
            TipElement::Point(p) => (x - p).norm(),
            TipElement::Segment(a, b) => point_segment_distance(x, a, b),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub dim: usize,
    pub nodes: Vec<Point>,
    /// Raw-mesh node each (possibly duplicated) node was created from.
    pub node_origin: Vec<usize>,
    pub cells: Vec<Cell>,
    pub faces: Vec<Face>,
    pub tags: Vec<String>,
    pub fractures: Vec<Fracture>,
    pub node_cells: Vec<Vec<usize>>,
    pub node_faces: Vec<Vec<usize>>,
}

fn face_key(nodes: &[usize]) -> [usize; 3] {
    let mut k = [usize::MAX; 3];
    k[..nodes.len()].copy_from_slice(nodes);
    k.sort_unstable();
    k
}

/// Local faces of a simplex: every node subset of size `dim`.
fn simplex_faces(cell: &[usize]) -> Vec<Vec<usize>> {
    (0..cell.len())
        .map(|skip| {
            cell.iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &n)| n)
                .collect()
        })
        .collect()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Build the split, fracture-conforming mesh.
pub fn build_mesh(raw: &RawMesh, fracture_tags: &[String]) -> Result<Mesh> {
    let dim = raw.dim;
    if dim != 2 && dim != 3 {
        return Err(Error::Topology(format!("unsupported dimension {dim}")));
    }
    for (e, el) in raw.elements.iter().enumerate() {
        if el.len() != dim + 1 {
            return Err(Error::UnsupportedElement {
                element: e,
                expected: dim + 1,
                found: el.len(),
            });
        }
        if let Some(&bad) = el.iter().find(|&&n| n >= raw.nodes.len()) {
            return Err(Error::Topology(format!("element {e} references missing node {bad}")));
        }
    }
    for tag in fracture_tags {
        if !raw.face_groups.iter().any(|g| &g.name == tag) {
            return Err(Error::Topology(format!("fracture tag '{tag}' has no face group")));
        }
    }

    // Face enumeration in first-encounter order.
    let mut key_to_face: HashMap<[usize; 3], usize> = HashMap::new();
    let mut face_nodes: Vec<Vec<usize>> = Vec::new();
    let mut face_cells: Vec<Vec<usize>> = Vec::new();
    let mut cell_faces: Vec<Vec<usize>> = Vec::with_capacity(raw.elements.len());
    for (c, el) in raw.elements.iter().enumerate() {
        let mut cf = Vec::with_capacity(dim + 1);
        for nodes in simplex_faces(el) {
            let key = face_key(&nodes);
            let f = *key_to_face.entry(key).or_insert_with(|| {
                face_nodes.push(nodes.clone());
                face_cells.push(Vec::new());
                face_nodes.len() - 1
            });
            face_cells[f].push(c);
            if face_cells[f].len() > 2 {
                return Err(Error::Topology(format!(
                    "face {:?} has more than two neighbour cells",
                    face_nodes[f]
                )));
            }
            cf.push(f);
        }
        cell_faces.push(cf);
    }

    // Tags.
    let mut tags: Vec<String> = Vec::new();
    let mut face_tag: Vec<Option<usize>> = vec![None; face_nodes.len()];
    for group in &raw.face_groups {
        let tag = tags.len();
        tags.push(group.name.clone());
        for nodes in &group.faces {
            if nodes.len() != dim {
                return Err(Error::UnsupportedElement {
                    element: tag,
                    expected: dim,
                    found: nodes.len(),
                });
            }
            let f = *key_to_face.get(&face_key(nodes)).ok_or_else(|| {
                Error::Topology(format!(
                    "face {nodes:?} of group '{}' is not a face of any cell",
                    group.name
                ))
            })?;
            match face_tag[f] {
                Some(t) if t != tag => {
                    return Err(Error::Topology(format!(
                        "face {nodes:?} is tagged both '{}' and '{}'",
                        tags[t], group.name
                    )))
                }
                _ => face_tag[f] = Some(tag),
            }
        }
    }

    let cell_centers: Vec<Point> = raw
        .elements
        .iter()
        .map(|el| centroid(&el.iter().map(|&n| raw.nodes[n]).collect::<Vec<_>>()))
        .collect();

    // Fracture faces: must be interior; decide the positive side.
    let fracture_of_tag: HashMap<usize, usize> = fracture_tags
        .iter()
        .enumerate()
        .map(|(i, name)| (tags.iter().position(|t| t == name).unwrap(), i))
        .collect();
    // face -> (fracture, plus cell, minus cell)
    let mut fracture_face: Vec<Option<(usize, usize, usize)>> = vec![None; face_nodes.len()];
    for f in 0..face_nodes.len() {
        let Some(tag) = face_tag[f] else { continue };
        let Some(&fr) = fracture_of_tag.get(&tag) else { continue };
        if face_cells[f].len() != 2 {
            return Err(Error::Topology(format!(
                "fracture '{}' face {:?} lies on the external boundary",
                tags[tag], face_nodes[f]
            )));
        }
        let pts: Vec<Point> = face_nodes[f].iter().map(|&n| raw.nodes[n]).collect();
        let (n, _) = face_normal_and_measure(&pts);
        let n = canonical_orientation(&n, 1e-10);
        let xf = centroid(&pts);
        let (a, b) = (face_cells[f][0], face_cells[f][1]);
        let (plus, minus) = if (cell_centers[a] - xf).dot(&n) > 0.0 {
            (a, b)
        } else {
            (b, a)
        };
        fracture_face[f] = Some((fr, plus, minus));
    }

    // Vertex splitting: one copy per connected component of the cell star,
    // where cells connect through non-fracture faces containing the vertex.
    let mut raw_node_cells: Vec<Vec<usize>> = vec![Vec::new(); raw.nodes.len()];
    for (c, el) in raw.elements.iter().enumerate() {
        for &n in el {
            raw_node_cells[n].push(c);
        }
    }
    let mut nodes = raw.nodes.clone();
    let mut node_origin: Vec<usize> = (0..raw.nodes.len()).collect();
    let mut cell_nodes: Vec<Vec<usize>> = raw.elements.clone();
    let mut on_fracture = vec![false; raw.nodes.len()];
    for f in 0..face_nodes.len() {
        if fracture_face[f].is_some() {
            for &n in &face_nodes[f] {
                on_fracture[n] = true;
            }
        }
    }
    for v in 0..raw.nodes.len() {
        if !on_fracture[v] {
            continue;
        }
        let star = &raw_node_cells[v];
        let local: HashMap<usize, usize> = star.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut uf = UnionFind::new(star.len());
        for &c in star {
            for &f in &cell_faces[c] {
                if fracture_face[f].is_some() || !face_nodes[f].contains(&v) {
                    continue;
                }
                if face_cells[f].len() == 2 {
                    uf.union(local[&face_cells[f][0]], local[&face_cells[f][1]]);
                }
            }
        }
        let mut roots: Vec<usize> = Vec::new();
        for i in 0..star.len() {
            let r = uf.find(i);
            if !roots.contains(&r) {
                roots.push(r);
            }
        }
        for (comp, &root) in roots.iter().enumerate().skip(1) {
            let _ = comp;
            let copy = nodes.len();
            nodes.push(raw.nodes[v]);
            node_origin.push(v);
            for (i, &c) in star.iter().enumerate() {
                if uf.find(i) == root {
                    for n in cell_nodes[c].iter_mut() {
                        if *n == v {
                            *n = copy;
                        }
                    }
                }
            }
        }
    }

    // Rebuild faces with remapped nodes; negative fracture copies appended.
    let remap = |cell: usize, raw_nodes: &[usize], cell_nodes: &Vec<Vec<usize>>| -> Vec<usize> {
        raw_nodes
            .iter()
            .map(|&n| {
                let pos = raw.elements[cell].iter().position(|&m| m == n).unwrap();
                cell_nodes[cell][pos]
            })
            .collect()
    };
    let mut fracture_list: Vec<Fracture> = fracture_tags
        .iter()
        .map(|name| Fracture {
            name: name.clone(),
            faces: Vec::new(),
        })
        .collect();
    // (nodes, cells, kind, tag) per face.
    type FaceTopo = (Vec<usize>, Vec<usize>, FaceKind, Option<usize>);
    // (nodes, cell, fracture, tag, positive face) per negative fracture face.
    type MinusFace = (Vec<usize>, usize, usize, Option<usize>, usize);
    let mut faces_topo: Vec<FaceTopo> = Vec::new();
    let mut minus_faces: Vec<MinusFace> = Vec::new();
    for f in 0..face_nodes.len() {
        match fracture_face[f] {
            None => {
                let c0 = face_cells[f][0];
                let kind = if face_cells[f].len() == 2 {
                    FaceKind::Interior
                } else {
                    FaceKind::Boundary
                };
                faces_topo.push((remap(c0, &face_nodes[f], &cell_nodes), face_cells[f].clone(), kind, face_tag[f]));
            }
            Some((fr, plus, minus)) => {
                let idx = faces_topo.len();
                faces_topo.push((
                    remap(plus, &face_nodes[f], &cell_nodes),
                    vec![plus],
                    FaceKind::Fracture {
                        fracture: fr,
                        side: Side::Positive,
                        twin: usize::MAX,
                    },
                    face_tag[f],
                ));
                minus_faces.push((remap(minus, &face_nodes[f], &cell_nodes), minus, fr, face_tag[f], idx));
            }
        }
    }
    for (fnodes, minus, fr, tag, plus_idx) in minus_faces {
        let idx = faces_topo.len();
        faces_topo.push((
            fnodes,
            vec![minus],
            FaceKind::Fracture {
                fracture: fr,
                side: Side::Negative,
                twin: plus_idx,
            },
            tag,
        ));
        if let FaceKind::Fracture { twin, .. } = &mut faces_topo[plus_idx].2 {
            *twin = idx;
        }
        fracture_list[fr].faces.push((plus_idx, idx));
    }

    // Geometry.
    let mut cells: Vec<Cell> = Vec::with_capacity(cell_nodes.len());
    for (c, cn) in cell_nodes.iter().enumerate() {
        let pts: Vec<Point> = cn.iter().map(|&n| nodes[n]).collect();
        let volume = simplex_measure(&pts);
        if !(volume > 0.0) {
            return Err(Error::Geometry(format!("cell {c} has zero volume")));
        }
        cells.push(Cell {
            nodes: cn.clone(),
            faces: Vec::with_capacity(dim + 1),
            center: centroid(&pts),
            volume,
        });
    }
    let mut faces: Vec<Face> = Vec::with_capacity(faces_topo.len());
    for (i, (fnodes, fcells, kind, tag)) in faces_topo.into_iter().enumerate() {
        let pts: Vec<Point> = fnodes.iter().map(|&n| nodes[n]).collect();
        let (mut normal, area) = face_normal_and_measure(&pts);
        if !(area > 0.0) {
            return Err(Error::Geometry(format!("face {i} has zero area")));
        }
        let xf = centroid(&pts);
        if (xf - cells[fcells[0]].center).dot(&normal) < 0.0 {
            normal = -normal;
        }
        for &c in &fcells {
            cells[c].faces.push(i);
        }
        faces.push(Face {
            nodes: fnodes,
            cells: fcells,
            centroid: xf,
            normal,
            area,
            kind,
            tag,
        });
    }
    let mut node_cells = vec![Vec::new(); nodes.len()];
    for (c, cell) in cells.iter().enumerate() {
        for &n in &cell.nodes {
            node_cells[n].push(c);
        }
    }
    let mut node_faces = vec![Vec::new(); nodes.len()];
    for (f, face) in faces.iter().enumerate() {
        for &n in &face.nodes {
            node_faces[n].push(f);
        }
    }

    Ok(Mesh {
        dim,
        nodes,
        node_origin,
        cells,
        faces,
        tags,
        fractures: fracture_list,
        node_cells,
        node_faces,
    })
}

impl Mesh {
    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn tag_index(&self, name: &str) -> Option<usize> {
        self.tags.iter().position(|t| t == name)
    }

    pub fn total_volume(&self) -> f64 {
        self.cells.iter().map(|c| c.volume).sum()
    }

    /// Raw nodes lying on a face of the external boundary.
    fn external_boundary_origins(&self) -> Vec<bool> {
        let n_raw = self.node_origin.iter().copied().max().map_or(0, |m| m + 1);
        let mut on = vec![false; n_raw];
        for face in &self.faces {
            if face.is_boundary() {
                for &n in &face.nodes {
                    on[self.node_origin[n]] = true;
                }
            }
        }
        on
    }

    /// Tip geometry of a fracture: boundary nodes (2d) or edges (3d) of the
    /// fracture surface that do not lie on the external boundary.
    pub fn fracture_tips(&self, fracture: usize) -> Vec<TipElement> {
        let on_boundary = self.external_boundary_origins();
        let origin_point = |n: usize| self.nodes[n];
        let mut count: HashMap<Vec<usize>, (usize, Vec<usize>)> = HashMap::new();
        let mut order: Vec<Vec<usize>> = Vec::new();
        for &(plus, _) in &self.fractures[fracture].faces {
            let nodes = &self.faces[plus].nodes;
            let pieces: Vec<Vec<usize>> = if self.dim == 2 {
                nodes.iter().map(|&n| vec![n]).collect()
            } else {
                vec![vec![nodes[0], nodes[1]], vec![nodes[1], nodes[2]], vec![nodes[2], nodes[0]]]
            };
            for piece in pieces {
                let mut key: Vec<usize> = piece.iter().map(|&n| self.node_origin[n]).collect();
                key.sort_unstable();
                let entry = count.entry(key.clone()).or_insert_with(|| {
                    order.push(key.clone());
                    (0, piece.clone())
                });
                entry.0 += 1;
            }
        }
        order
            .into_iter()
            .filter_map(|key| {
                let (c, piece) = &count[&key];
                if *c != 1 || key.iter().all(|&o| on_boundary[o]) {
                    return None;
                }
                Some(if piece.len() == 1 {
                    TipElement::Point(origin_point(piece[0]))
                } else {
                    TipElement::Segment(origin_point(piece[0]), origin_point(piece[1]))
                })
            })
            .collect()
    }

    /// Human-readable summary used by the `mesh-info` command.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let n_boundary = self.faces.iter().filter(|f| f.is_boundary()).count();
        let n_frac = self.faces.iter().filter(|f| matches!(f.kind, FaceKind::Fracture { .. })).count();
        s.push_str(&format!("dimension: {}\n", self.dim));
        s.push_str(&format!("nodes: {}\n", self.nodes.len()));
        s.push_str(&format!("cells: {}\n", self.cells.len()));
        s.push_str(&format!(
            "faces: {} (boundary {}, fracture {})\n",
            self.faces.len(),
            n_boundary,
            n_frac
        ));
        s.push_str(&format!("volume: {:.6e}\n", self.total_volume()));
        for (i, tag) in self.tags.iter().enumerate() {
            let n = self.faces.iter().filter(|f| f.tag == Some(i)).count();
            s.push_str(&format!("tag {tag}: {n} faces\n"));
        }
        for (i, fr) in self.fractures.iter().enumerate() {
            s.push_str(&format!(
                "fracture {}: {} face pairs, {} tip elements\n",
                fr.name,
                fr.faces.len(),
                self.fracture_tips(i).len()
            ));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Unit square split into four triangles around its center.
    fn four_triangles() -> RawMesh {
        RawMesh {
            dim: 2,
            nodes: vec![
                Point::new(0.0, 0.0, 0.0),
                Point::new(1.0, 0.0, 0.0),
                Point::new(1.0, 1.0, 0.0),
                Point::new(0.0, 1.0, 0.0),
                Point::new(0.5, 0.5, 0.0),
            ],
            elements: vec![vec![0, 1, 4], vec![1, 2, 4], vec![2, 3, 4], vec![3, 0, 4]],
            face_groups: vec![],
        }
    }

    /// Diamond of four triangles around a horizontal two-face fracture whose
    /// endpoints are interior to a larger surrounding patch.
    ///
    /// ```text
    ///         6
    ///       / | \
    ///     2---3---4
    ///    / \  |  / \
    ///   0---- 1 ----5    (fracture along 2-3-4 is interior)
    /// ```
    fn fractured_patch() -> RawMesh {
        let nodes = vec![
            Point::new(-1.0, -1.0, 0.0), // 0
            Point::new(0.5, -1.0, 0.0),  // 1
            Point::new(0.0, 0.0, 0.0),   // 2 tip
            Point::new(0.5, 0.0, 0.0),   // 3 interior fracture vertex
            Point::new(1.0, 0.0, 0.0),   // 4 tip
            Point::new(2.0, -1.0, 0.0),  // 5
            Point::new(0.5, 1.0, 0.0),   // 6
            Point::new(-1.0, 1.0, 0.0),  // 7
            Point::new(2.0, 1.0, 0.0),   // 8
        ];
        let elements = vec![
            vec![0, 1, 2],
            vec![1, 3, 2],
            vec![1, 4, 3],
            vec![1, 5, 4],
            vec![2, 3, 6],
            vec![3, 4, 6],
            vec![0, 2, 7],
            vec![2, 6, 7],
            vec![4, 5, 8],
            vec![4, 8, 6],
        ];
        RawMesh {
            dim: 2,
            nodes,
            elements,
            face_groups: vec![FaceGroup {
                name: "frac".into(),
                faces: vec![vec![2, 3], vec![3, 4]],
            }],
        }
    }

    #[test]
    fn no_fracture_keeps_topology() {
        let raw = four_triangles();
        let mesh = build_mesh(&raw, &[]).unwrap();
        assert_eq!(mesh.cells.len(), 4);
        assert_eq!(mesh.faces.len(), 8);
        assert_eq!(mesh.nodes.len(), 5);
        assert!((mesh.total_volume() - 1.0).abs() < 1e-14);
        assert!(mesh.fractures.is_empty());
    }

    #[test]
    fn interior_normals_point_out_of_first_cell() {
        let mesh = build_mesh(&four_triangles(), &[]).unwrap();
        for f in &mesh.faces {
            let k = &mesh.cells[f.cells[0]];
            assert!((f.centroid - k.center).dot(&f.normal) > 0.0);
            if f.cells.len() == 2 {
                assert_eq!(f.outward_normal(f.cells[1]), -f.normal);
            }
        }
    }

    #[test]
    fn fracture_splits_interior_vertex_only() {
        let raw = fractured_patch();
        let before = build_mesh(&raw, &[]).unwrap();
        let mesh = build_mesh(&raw, &["frac".to_string()]).unwrap();
        assert_eq!(mesh.faces.len(), before.faces.len() + 2);
        assert_eq!(mesh.fractures[0].faces.len(), 2);
        // Only node 3 is duplicated; tips 2 and 4 keep one copy.
        assert_eq!(mesh.nodes.len(), raw.nodes.len() + 1);
        assert_eq!(mesh.node_origin[raw.nodes.len()], 3);
        for (plus, minus) in &mesh.fractures[0].faces {
            let (p, m) = (&mesh.faces[*plus], &mesh.faces[*minus]);
            assert_eq!(p.cells.len(), 1);
            assert_eq!(m.cells.len(), 1);
            assert!((p.normal + m.normal).norm() < 1e-14);
            assert!((p.centroid - m.centroid).norm() < 1e-14);
            // Positive side lies in the positive half-space of (0, 1).
            assert!(mesh.cells[p.cells[0]].center.y > 0.0);
        }
        let tips = mesh.fracture_tips(0);
        assert_eq!(tips.len(), 2);
        for f in &mesh.faces {
            assert!(f.cells.len() == 1 || f.cells.len() == 2);
        }
    }

    #[test]
    fn non_simplex_is_rejected() {
        let mut raw = four_triangles();
        raw.elements.push(vec![0, 1, 2, 3]);
        assert!(matches!(build_mesh(&raw, &[]), Err(Error::UnsupportedElement { .. })));
    }

    #[test]
    fn fracture_on_boundary_is_rejected() {
        let mut raw = four_triangles();
        raw.face_groups.push(FaceGroup {
            name: "f".into(),
            faces: vec![vec![0, 1]],
        });
        assert!(matches!(build_mesh(&raw, &["f".to_string()]), Err(Error::Topology(_))));
    }

    #[test]
    fn dangling_group_face_is_rejected() {
        let mut raw = four_triangles();
        raw.face_groups.push(FaceGroup {
            name: "f".into(),
            faces: vec![vec![0, 2]],
        });
        assert!(matches!(build_mesh(&raw, &[]), Err(Error::Topology(_))));
    }

    #[test]
    fn overfull_face_is_rejected() {
        let mut raw = four_triangles();
        raw.nodes.push(Point::new(0.5, -0.5, 0.0));
        raw.nodes.push(Point::new(0.5, -0.7, 0.0));
        raw.elements.push(vec![0, 1, 5]);
        raw.elements.push(vec![0, 1, 6]);
        assert!(matches!(build_mesh(&raw, &[]), Err(Error::Topology(_))));
    }
}
