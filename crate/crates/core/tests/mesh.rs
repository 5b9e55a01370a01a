use porofrac::mesh::structured::{cuboid, rectangle, Disk, Polyline};
use porofrac::mesh::{build_mesh, build_subgrid, pair_fracture_sides, FaceKind, Mesh, Point, RawMesh, SubGrid};
use porofrac::oracle::patch::jitter;
use proptest::prelude::*;

fn fractured_rectangle(n: usize, amplitude: f64, seed: u64) -> Mesh {
    let frac = Polyline {
        name: "f".into(),
        points: vec![[0.25, 0.5], [0.75, 0.5]],
    };
    let mut raw = rectangle([0.0, 0.0], [1.0, 1.0], [n, n], &[frac]).unwrap();
    // Nodes on the fracture line stay put so the fracture remains straight.
    jitter_off_line(&mut raw, 1.0 / n as f64, amplitude, seed);
    build_mesh(&raw, &["f".into()]).unwrap()
}

fn jitter_off_line(raw: &mut RawMesh, h: f64, amplitude: f64, seed: u64) {
    let keep: Vec<Point> = raw.nodes.to_vec();
    jitter(raw, h, amplitude, seed);
    for (x, old) in raw.nodes.iter_mut().zip(keep) {
        if (old.y - 0.5).abs() < 1e-12 {
            *x = old;
        }
    }
}

fn check_partition(mesh: &Mesh, sub: &SubGrid) {
    let mut face_area = vec![0.0; mesh.num_faces()];
    for sf in &sub.subfaces {
        assert!(sf.area > 0.0);
        assert!((sf.continuity_point - mesh.nodes[sf.node]).norm() > 0.0);
        face_area[sf.face] += sf.area;
    }
    for (f, face) in mesh.faces.iter().enumerate() {
        assert!((face_area[f] - face.area).abs() <= 1e-12 * face.area, "face {f}");
    }
    for (k, cell) in mesh.cells.iter().enumerate() {
        assert!(cell.volume > 0.0);
        let total: f64 = cell.nodes.iter().map(|&v| sub.subcell_volume(mesh, k, v)).sum();
        assert!((total - cell.volume).abs() <= 1e-12 * cell.volume, "cell {k}");
    }
}

fn check_topology(mesh: &Mesh) {
    for face in &mesh.faces {
        match face.kind {
            FaceKind::Interior => {
                assert_eq!(face.cells.len(), 2);
                let (k, l) = (face.cells[0], face.cells[1]);
                assert_eq!(face.outward_normal(k), -face.outward_normal(l));
            }
            _ => assert_eq!(face.cells.len(), 1),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn jittered_rectangles_partition_exactly(n in 1usize..5, amplitude in 0.0f64..0.3, seed in 0u64..1000) {
        let mesh = fractured_rectangle(4 * n, amplitude, seed);
        check_topology(&mesh);
        prop_assert!((mesh.total_volume() - 1.0).abs() < 1e-12);
        let sub = build_subgrid(&mesh).unwrap();
        check_partition(&mesh, &sub);
    }

    #[test]
    fn pairing_is_a_bijection(n in 1usize..5, amplitude in 0.0f64..0.3, seed in 0u64..1000) {
        let mesh = fractured_rectangle(4 * n, amplitude, seed);
        let sub = build_subgrid(&mesh).unwrap();
        let pairing = pair_fracture_sides(&mesh, &sub, None).unwrap();
        let positive: Vec<usize> = sub.positive_subfaces().collect();
        prop_assert_eq!(&pairing.positive, &positive);
        prop_assert_eq!(pairing.positive.len(), pairing.negative.len());
        let mut seen = std::collections::HashSet::new();
        for c in 0..pairing.len() {
            let (p, q) = (pairing.positive[c], pairing.negative[c]);
            prop_assert!(seen.insert(q));
            prop_assert_eq!(pairing.contact_index[p], Some(c));
            prop_assert_eq!(pairing.contact_index[q], Some(c));
            prop_assert_eq!(pairing.gap[c], 0.0);
            let d = (sub.subfaces[p].continuity_point - sub.subfaces[q].continuity_point).norm();
            prop_assert!(d < 1e-12);
        }
    }
}

#[test]
fn subgrid_is_deterministic() {
    let mesh = fractured_rectangle(8, 0.2, 4);
    let (a, b) = (build_subgrid(&mesh).unwrap(), build_subgrid(&mesh).unwrap());
    assert_eq!(a.subfaces.len(), b.subfaces.len());
    for (x, y) in a.subfaces.iter().zip(&b.subfaces) {
        assert_eq!((x.face, x.node, x.area.to_bits()), (y.face, y.node, y.area.to_bits()));
        for i in 0..3 {
            assert_eq!(x.continuity_point[i].to_bits(), y.continuity_point[i].to_bits());
        }
    }
    assert_eq!(a.subcell_volumes, b.subcell_volumes);
}

#[test]
fn fracture_adds_one_face_per_fracture_face() {
    let frac = Polyline {
        name: "f".into(),
        points: vec![[0.25, 0.5], [0.75, 0.5]],
    };
    let raw = rectangle([0.0, 0.0], [1.0, 1.0], [8, 8], &[frac]).unwrap();
    let plain = build_mesh(&raw, &[]).unwrap();
    let split = build_mesh(&raw, &["f".into()]).unwrap();
    assert_eq!(split.fractures[0].faces.len(), 4);
    assert_eq!(split.num_faces(), plain.num_faces() + 4);
    // Three interior fracture nodes are duplicated, the two tips are shared.
    assert_eq!(split.nodes.len(), plain.nodes.len() + 3);
}

#[test]
fn box_with_disk_is_valid() {
    let disk = Disk {
        name: "d".into(),
        center: [0.5, 0.5, 0.5],
        radius: 0.35,
        strike_deg: 30.0,
        dip_deg: 20.0,
    };
    let raw = cuboid([0.0; 3], [1.0; 3], [4, 4, 4], &[disk]).unwrap();
    let mesh = build_mesh(&raw, &["d".into()]).unwrap();
    check_topology(&mesh);
    assert!((mesh.total_volume() - 1.0).abs() < 1e-12);
    let sub = build_subgrid(&mesh).unwrap();
    check_partition(&mesh, &sub);
    let pairing = pair_fracture_sides(&mesh, &sub, None).unwrap();
    assert_eq!(pairing.len(), 3 * mesh.fractures[0].faces.len());
}

#[test]
fn right_triangle_face_splits_into_sixths() {
    let raw = cuboid([0.0; 3], [1.0; 3], [1, 1, 1], &[]).unwrap();
    let mesh = build_mesh(&raw, &[]).unwrap();
    let sub = build_subgrid(&mesh).unwrap();
    for sf in &sub.subfaces {
        let face = &mesh.faces[sf.face];
        if (face.area - 0.5).abs() < 1e-12 {
            assert!((sf.area - 1.0 / 6.0).abs() < 1e-14);
        }
    }
}
