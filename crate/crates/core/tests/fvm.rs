use nalgebra::Matrix3;
use porofrac::assembly::Discretization;
use porofrac::fvm::{BoundaryKinds, BoundaryValues, Homogeneous, MaterialField, SubfaceQuantities};
use porofrac::mesh::structured::{cuboid, rectangle};
use porofrac::mesh::{build_mesh, build_subgrid, pair_fracture_sides, Mesh, Point};
use porofrac::oracle::patch::{jitter, jittered_cube, unit_material, unstructured_square};
use porofrac::oracle::{patch_test, AffineField};
use proptest::prelude::*;

fn jittered_square(n: usize, amplitude: f64, seed: u64) -> Mesh {
    let mut raw = rectangle([0.0, 0.0], [1.0, 1.0], [n, n], &[]).unwrap();
    jitter(&mut raw, 1.0 / n as f64, amplitude, seed);
    build_mesh(&raw, &[]).unwrap()
}

/// Reconstruct subface quantities from the cell-center and boundary values
/// of `field`, without solving.
fn reconstruct(mesh: &Mesh, material: Homogeneous, field: &AffineField) -> (Discretization, SubfaceQuantities) {
    let d = mesh.dim;
    let sub = build_subgrid(mesh).unwrap();
    let pairing = pair_fracture_sides(mesh, &sub, None).unwrap();
    let kinds = BoundaryKinds::all_dirichlet(mesh, &sub);
    let mut values = BoundaryValues::zeros(sub.num_subfaces());
    for (s, sf) in sub.subfaces.iter().enumerate() {
        values.flow[s] = field.pressure(&sf.continuity_point);
        values.mech[s] = field.displacement(&sf.continuity_point);
    }
    let mat = MaterialField::homogeneous(mesh, material);
    let disc = Discretization::new(mesh.clone(), sub, pairing, mat, kinds, Vec::new(), true).unwrap();
    let u: Vec<f64> = mesh
        .cells
        .iter()
        .flat_map(|c| {
            let v = field.displacement(&c.center);
            (0..d).map(move |i| v[i])
        })
        .collect();
    let p: Vec<f64> = mesh.cells.iter().map(|c| field.pressure(&c.center)).collect();
    let q = disc.ops.reconstruct(&u, &p, &[], &values).unwrap();
    (disc, q)
}

fn rigid(dim: usize, u0: [f64; 3], w: [f64; 3]) -> AffineField {
    let mut grad_u = Matrix3::new(0.0, -w[2], w[1], w[2], 0.0, -w[0], -w[1], w[0], 0.0);
    if dim == 2 {
        grad_u = Matrix3::new(0.0, -w[2], 0.0, w[2], 0.0, 0.0, 0.0, 0.0, 0.0);
    }
    let mut u = Point::new(u0[0], u0[1], u0[2]);
    if dim == 2 {
        u.z = 0.0;
    }
    AffineField {
        p0: 0.0,
        grad_p: Point::zeros(),
        u0: u,
        grad_u,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn affine_fields_are_reproduced_on_jittered_squares(
        n in 2usize..9, amplitude in 0.0f64..0.3, mesh_seed in 0u64..1000, field_seed in 0u64..1000,
    ) {
        let mesh = jittered_square(n, amplitude, mesh_seed);
        let r = patch_test(&mesh, &unit_material(), &AffineField::random(2, field_seed)).unwrap();
        prop_assert!(r.max() <= 1e-10, "{r:?}");
    }

    #[test]
    fn affine_fields_are_reproduced_for_any_material(
        shear in 0.1f64..10.0, lambda in 0.0f64..10.0, k in 0.1f64..10.0, field_seed in 0u64..1000,
    ) {
        let mesh = unstructured_square().unwrap();
        let m = Homogeneous { shear, lambda, permeability: k, ..unit_material() };
        let r = patch_test(&mesh, &m, &AffineField::random(2, field_seed)).unwrap();
        prop_assert!(r.max() <= 1e-10, "{r:?}");
    }

    #[test]
    fn rigid_motions_carry_no_traction(
        dim in 2usize..4, u0 in prop::array::uniform3(-1.0f64..1.0), w in prop::array::uniform3(-1.0f64..1.0),
    ) {
        let mesh = if dim == 2 { unstructured_square().unwrap() } else { jittered_cube(1).unwrap() };
        let (_, q) = reconstruct(&mesh, unit_material(), &rigid(dim, u0, w));
        let worst = q.traction.iter().map(|t| t.norm()).fold(0.0, f64::max);
        prop_assert!(worst <= 1e-12, "{worst}");
    }

    #[test]
    fn constant_pressure_has_no_flux(dim in 2usize..4, p0 in -1e6f64..1e6) {
        let mesh = if dim == 2 { unstructured_square().unwrap() } else { jittered_cube(2).unwrap() };
        let field = AffineField { p0, ..rigid(dim, [0.0; 3], [0.0; 3]) };
        let (_, q) = reconstruct(&mesh, unit_material(), &field);
        let worst = q.flux.iter().map(|f| f.abs()).fold(0.0, f64::max);
        prop_assert!(worst <= 1e-12 * p0.abs().max(1.0), "{worst}");
    }
}

#[test]
fn affine_fields_are_reproduced_on_jittered_cubes() {
    for seed in 0..3 {
        let mesh = jittered_cube(10 + seed).unwrap();
        let r = patch_test(&mesh, &unit_material(), &AffineField::random(3, seed)).unwrap();
        assert!(r.max() <= 1e-10, "{r:?}");
    }
}

#[test]
fn uniform_pressure_gives_isotropic_total_traction() {
    // Zero displacement, p = 1 and α = 1: the total traction on every subface
    // is −p n times the subface area.
    for mesh in [
        unstructured_square().unwrap(),
        build_mesh(&cuboid([0.0; 3], [1.0; 3], [2, 2, 2], &[]).unwrap(), &[]).unwrap(),
    ] {
        let m = Homogeneous {
            biot: 1.0,
            ..unit_material()
        };
        let field = AffineField {
            p0: 1.0,
            ..rigid(mesh.dim, [0.0; 3], [0.0; 3])
        };
        let (disc, q) = reconstruct(&mesh, m, &field);
        for (s, sf) in disc.subgrid.subfaces.iter().enumerate() {
            let n = mesh.faces[sf.face].normal;
            let err = (q.traction[s] + n * sf.area).norm();
            assert!(err <= 1e-12, "subface {s}: {}", q.traction[s]);
        }
    }
}

#[test]
fn displacement_trace_is_continuous_for_affine_fields() {
    let mesh = jittered_square(6, 0.25, 3);
    let field = AffineField::random(2, 9);
    let (disc, q) = reconstruct(&mesh, unit_material(), &field);
    for (s, sf) in disc.subgrid.subfaces.iter().enumerate() {
        let exact = field.displacement(&sf.continuity_point);
        assert!((q.displacement[s] - exact).norm() <= 1e-12, "subface {s}");
    }
}
