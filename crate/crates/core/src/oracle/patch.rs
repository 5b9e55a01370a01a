//! Affine-field consistency of the flux and stress reconstructions.

use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assembly::{Discretization, State, StepData};
use crate::contact::ContactParams;
use crate::error::{Error, Result};
use crate::fvm::{BoundaryKinds, BoundaryValues, Homogeneous, MaterialField};
use crate::io::parse_gmsh;
use crate::mesh::{build_mesh, build_subgrid, pair_fracture_sides, Mesh, Point, RawMesh};
use crate::solver::{LinearSolver, SparseLu};

/// Delaunay triangulation of the unit square with 198 cells.
pub const UNIT_SQUARE_UNSTRUCTURED: &str = include_str!("../../data/unit_square_unstructured.msh");

/// `p = p0 + a·x`, `u = u0 + B x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineField {
    pub p0: f64,
    pub grad_p: Point,
    pub u0: Point,
    pub grad_u: Matrix3<f64>,
}

impl AffineField {
    pub fn pressure(&self, x: &Point) -> f64 {
        self.p0 + self.grad_p.dot(x)
    }

    pub fn displacement(&self, x: &Point) -> Point {
        self.u0 + self.grad_u * x
    }

    /// Random field with entries of order one; unused components are zero in 2d.
    pub fn random(dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = AffineField {
            p0: rng.random_range(-1.0..1.0),
            grad_p: Point::zeros(),
            u0: Point::zeros(),
            grad_u: Matrix3::zeros(),
        };
        for i in 0..dim {
            f.grad_p[i] = rng.random_range(-1.0..1.0);
            f.u0[i] = rng.random_range(-1.0..1.0);
            for j in 0..dim {
                f.grad_u[(i, j)] = rng.random_range(-1.0..1.0);
            }
        }
        f
    }
}

/// Largest relative deviations from the analytic field.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PatchReport {
    pub cells: usize,
    pub flux: f64,
    pub traction: f64,
    pub pressure: f64,
    pub displacement: f64,
}

impl PatchReport {
    pub fn max(&self) -> f64 {
        self.flux.max(self.traction).max(self.pressure).max(self.displacement)
    }
}

/// Solve with Dirichlet data from `field` on the whole boundary and compare
/// cell values and reconstructed subface fluxes and tractions with the
/// field. The Biot coefficient must vanish: with a pressure gradient the
/// cell-wise pressure term in the traction is not affine-exact.
pub fn patch_test(mesh: &Mesh, material: &Homogeneous, field: &AffineField) -> Result<PatchReport> {
    if !mesh.fractures.is_empty() {
        return Err(Error::Contract("patch tests run on meshes without fractures".into()));
    }
    if material.biot != 0.0 {
        return Err(Error::Contract("patch tests require a zero Biot coefficient".into()));
    }
    let d = mesh.dim;
    let subgrid = build_subgrid(mesh)?;
    let pairing = pair_fracture_sides(mesh, &subgrid, None)?;
    let kinds = BoundaryKinds::all_dirichlet(mesh, &subgrid);
    let mut values = BoundaryValues::zeros(subgrid.num_subfaces());
    for (s, sf) in subgrid.subfaces.iter().enumerate() {
        values.flow[s] = field.pressure(&sf.continuity_point);
        values.mech[s] = field.displacement(&sf.continuity_point);
    }
    let mat = MaterialField::homogeneous(mesh, *material);
    let disc = Discretization::new(mesh.clone(), subgrid, pairing, mat, kinds, Vec::new(), true)?;
    let exact = State {
        u: mesh
            .cells
            .iter()
            .flat_map(|c| {
                let v = field.displacement(&c.center);
                (0..d).map(move |i| v[i])
            })
            .collect(),
        p: mesh.cells.iter().map(|c| field.pressure(&c.center)).collect(),
        lambda: Vec::new(),
    };
    let step = StepData {
        values: &values,
        previous: &exact,
        previous_values: &values,
        dt: 1.0,
        contact: ContactParams::default(),
    };
    let sys = disc.bulk_system(&step)?;
    let x = SparseLu.solve(&sys)?;
    let state = exact.unpack(&disc.layout, &x)?;
    let q = disc.ops.reconstruct(&state.u, &state.p, &state.lambda, &values)?;

    // Error scales: field magnitude over the domain plus gradient times size.
    let (mut lo, mut hi) = (Point::repeat(f64::INFINITY), Point::repeat(f64::NEG_INFINITY));
    for x in &mesh.nodes {
        lo = lo.inf(x);
        hi = hi.sup(x);
    }
    let size = (hi - lo).norm();
    let p_max = mesh.nodes.iter().map(|x| field.pressure(x).abs()).fold(0.0, f64::max);
    let u_max = mesh.nodes.iter().map(|x| field.displacement(x).norm()).fold(0.0, f64::max);
    let grad_u = field.grad_u.view((0, 0), (d, d)).into_owned();
    let strain = (&grad_u + grad_u.transpose()) * 0.5;
    let stress = strain * (2.0 * material.shear) + nalgebra::DMatrix::identity(d, d) * (material.lambda * grad_u.trace());
    let p_scale = p_max + field.grad_p.norm() * size;
    let u_scale = u_max + grad_u.norm() * size;
    let flux_density = material.permeability * (field.grad_p.norm() + p_max / size);
    let traction_density = (2.0 * material.shear + d as f64 * material.lambda) * (grad_u.norm() + u_max / size);

    let mut report = PatchReport {
        cells: mesh.num_cells(),
        ..PatchReport::default()
    };
    for (k, c) in mesh.cells.iter().enumerate() {
        report.pressure = report.pressure.max((state.p[k] - exact.p[k]).abs() / p_scale);
        let du = state.displacement(d, k) - field.displacement(&c.center);
        report.displacement = report.displacement.max(du.norm() / u_scale);
    }
    for (s, sf) in disc.subgrid.subfaces.iter().enumerate() {
        let n = mesh.faces[sf.face].normal;
        let flux = -material.permeability * field.grad_p.dot(&n) * sf.area;
        report.flux = report.flux.max((q.flux[s] - flux).abs() / (flux_density * sf.area));
        let nv = nalgebra::DVector::from_iterator(d, (0..d).map(|i| n[i]));
        let t = &stress * nv * sf.area;
        for i in 0..d {
            report.traction = report.traction.max((q.traction[s][i] - t[i]).abs() / (traction_density * sf.area));
        }
    }
    Ok(report)
}

/// Move interior nodes by up to `amplitude` times the local spacing `h`.
pub fn jitter(raw: &mut RawMesh, h: f64, amplitude: f64, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = raw.dim;
    let (mut lo, mut hi) = (Point::repeat(f64::INFINITY), Point::repeat(f64::NEG_INFINITY));
    for x in &raw.nodes {
        lo = lo.inf(x);
        hi = hi.sup(x);
    }
    let tol = 1e-12 * (hi - lo).norm();
    for x in raw.nodes.iter_mut() {
        let on_boundary = (0..d).any(|a| (x[a] - lo[a]).abs() < tol || (x[a] - hi[a]).abs() < tol);
        let shift: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0) * amplitude * h).collect();
        if !on_boundary {
            for a in 0..d {
                x[a] += shift[a];
            }
        }
    }
}

/// The 198-triangle unstructured unit square.
pub fn unstructured_square() -> Result<Mesh> {
    build_mesh(&parse_gmsh(UNIT_SQUARE_UNSTRUCTURED)?, &[])
}

/// Kuhn-triangulated unit cube, 4 × 4 × 5 cubes (480 tetrahedra), with
/// interior nodes moved by up to a fifth of the spacing.
pub fn jittered_cube(seed: u64) -> Result<Mesh> {
    let mut raw = crate::mesh::structured::cuboid([0.0; 3], [1.0; 3], [4, 4, 5], &[])?;
    jitter(&mut raw, 0.2, 0.2, seed);
    build_mesh(&raw, &[])
}

/// Unit material for consistency checks.
pub fn unit_material() -> Homogeneous {
    Homogeneous {
        shear: 1.0,
        lambda: 1.0,
        biot: 0.0,
        storage: 1.0,
        permeability: 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_traction_example() {
        // u = (x, 0), G = Λ = 1: traction density (3, 0) on faces with normal (1, 0).
        let mesh = unstructured_square().unwrap();
        let field = AffineField {
            p0: 0.0,
            grad_p: Point::new(1.0, 0.0, 0.0),
            u0: Point::zeros(),
            grad_u: Matrix3::new(1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0),
        };
        let r = patch_test(&mesh, &unit_material(), &field).unwrap();
        assert!(r.max() < 1e-10, "{r:?}");
    }

    #[test]
    fn biot_coupling_is_rejected() {
        let mesh = unstructured_square().unwrap();
        let m = Homogeneous {
            biot: 1.0,
            ..unit_material()
        };
        assert!(matches!(
            patch_test(&mesh, &m, &AffineField::random(2, 1)),
            Err(Error::Contract(_))
        ));
    }
}
