//! Scenario loading, validation and the mapping from configuration to
//! discrete data.

pub mod config;
pub mod presets;
pub mod run;

use std::path::{Path, PathBuf};

use crate::assembly::Discretization;
use crate::contact::ContactParams;
use crate::error::{Error, Result};
use crate::fvm::{BcKind, BoundaryKinds, BoundaryValues, Homogeneous, MaterialField};
use crate::io::read_gmsh;
use crate::mesh::structured::{cuboid, projected_center, rectangle, snap_disk_plane, Disk, Polyline};
use crate::mesh::{build_mesh, build_subgrid, pair_fracture_sides, Mesh, Point, RawMesh, SubGrid, TipElement};
use crate::newton::NewtonConfig;

pub use config::*;
pub use presets::{preset, PRESETS};
pub use run::{run_convergence_study, run_scenario, snapshot, RunReport, StepSummary};

/// Center and radius of a disk-shaped fracture.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskGeometry {
    pub center: Point,
    pub radius: f64,
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub raw: RawMesh,
    pub mesh: Mesh,
    /// Disk geometry per fracture, when known.
    pub disks: Vec<Option<DiskGeometry>>,
}

fn to_disk(d: &DiskConfig) -> Disk {
    Disk {
        name: d.name.clone(),
        center: d.center,
        radius: d.radius,
        strike_deg: d.strike,
        dip_deg: d.dip,
    }
}

/// Parse and validate a configuration document. Relative mesh paths are
/// resolved against `base_dir`.
pub fn load_scenario(text: &str, base_dir: &Path) -> Result<Scenario> {
    let config = ScenarioConfig::from_toml(text)?;
    Scenario::from_config(config, base_dir)
}

pub fn load_scenario_file(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
    load_scenario(&text, &base)
}

fn ramp(value: f64, ramp_time: Option<f64>, t: f64) -> f64 {
    match ramp_time {
        Some(tr) if tr > 0.0 => value * (t / tr).min(1.0),
        _ => value,
    }
}

impl Scenario {
    pub fn from_config(config: ScenarioConfig, base_dir: &Path) -> Result<Self> {
        let (raw, fracture_names, disk_list) = match &config.mesh {
            MeshConfig::Rectangle { lo, hi, cells, fractures } => {
                let polys: Vec<Polyline> = fractures
                    .iter()
                    .map(|f| Polyline {
                        name: f.name.clone(),
                        points: f.points.clone(),
                    })
                    .collect();
                let raw = rectangle(*lo, *hi, *cells, &polys).map_err(validation)?;
                (raw, fractures.iter().map(|f| f.name.clone()).collect::<Vec<_>>(), Vec::new())
            }
            MeshConfig::Box { lo, hi, cells, fractures } => {
                let disks: Vec<Disk> = fractures.iter().map(to_disk).collect();
                let raw = cuboid(*lo, *hi, *cells, &disks).map_err(validation)?;
                let h = [
                    (hi[0] - lo[0]) / cells[0] as f64,
                    (hi[1] - lo[1]) / cells[1] as f64,
                    (hi[2] - lo[2]) / cells[2] as f64,
                ];
                let geo = disks
                    .iter()
                    .map(|d| {
                        let plane = snap_disk_plane(d, *lo, h);
                        (
                            d.name.clone(),
                            DiskGeometry {
                                center: projected_center(d, &plane, *lo, h),
                                radius: d.radius,
                            },
                        )
                    })
                    .collect();
                (raw, fractures.iter().map(|f| f.name.clone()).collect(), geo)
            }
            MeshConfig::Gmsh { path, fractures, disks } => {
                let p = base_dir.join(path);
                let raw = read_gmsh(&p)?;
                let geo = disks
                    .iter()
                    .map(|d| {
                        (
                            d.name.clone(),
                            DiskGeometry {
                                center: Point::new(d.center[0], d.center[1], d.center[2]),
                                radius: d.radius,
                            },
                        )
                    })
                    .collect();
                (raw, fractures.clone(), geo)
            }
        };
        for name in &fracture_names {
            if !raw.face_groups.iter().any(|g| &g.name == name) {
                return Err(Error::Validation(format!("unknown fracture group '{name}'")));
            }
        }
        let mesh = build_mesh(&raw, &fracture_names)?;
        let disks = mesh
            .fractures
            .iter()
            .map(|f| disk_list.iter().find(|(n, _)| n == &f.name).map(|(_, g)| g.clone()))
            .collect();
        let scenario = Scenario {
            config,
            raw,
            mesh,
            disks,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    fn validate(&self) -> Result<()> {
        let c = &self.config;
        for b in &c.boundary {
            let Some(tag) = self.mesh.tag_index(&b.group) else {
                return Err(Error::Validation(format!("unknown boundary group '{}'", b.group)));
            };
            if self.mesh.fractures.iter().any(|f| f.name == b.group) {
                return Err(Error::Validation(format!(
                    "group '{}' is a fracture and cannot carry boundary conditions",
                    b.group
                )));
            }
            let on_boundary = self
                .mesh
                .faces
                .iter()
                .filter(|f| f.tag == Some(tag))
                .all(|f| f.is_boundary());
            if !on_boundary {
                return Err(Error::Validation(format!("group '{}' is not on the external boundary", b.group)));
            }
            let d = self.mesh.dim;
            let check_len = |v: &Vec<f64>| -> Result<()> {
                if v.len() != d {
                    return Err(Error::Validation(format!(
                        "group '{}': mechanics value needs {d} components, got {}",
                        b.group,
                        v.len()
                    )));
                }
                Ok(())
            };
            match &b.mechanics {
                Some(MechanicsBc::Dirichlet { value, .. }) | Some(MechanicsBc::Neumann { value, .. }) => check_len(value)?,
                Some(MechanicsBc::Mixed { components, value, .. }) => {
                    check_len(value)?;
                    if components.len() != d {
                        return Err(Error::Validation(format!(
                            "group '{}': mixed condition needs {d} component kinds",
                            b.group
                        )));
                    }
                }
                _ => {}
            }
        }
        let (g, l) = c.material.lame_parameters()?;
        if !(g > 0.0) || !(l > -2.0 * g / self.mesh.dim as f64) {
            return Err(Error::Validation(format!("material: invalid Lamé parameters G = {g}, Λ = {l}")));
        }
        if !(c.time.dt > 0.0) || c.time.steps == 0 {
            return Err(Error::Validation("time: need dt > 0 and steps >= 1".into()));
        }
        if !(c.solver.c > 0.0) || !(c.solver.tolerance > 0.0) || c.solver.max_iterations == 0 {
            return Err(Error::Validation("solver: need c > 0, tolerance > 0 and max_iterations >= 1".into()));
        }
        if c.output.every == 0 {
            return Err(Error::Validation("output: every must be at least 1".into()));
        }
        if !(c.gap >= 0.0) {
            return Err(Error::Validation(format!("gap must be nonnegative, got {}", c.gap)));
        }
        match c.friction {
            FrictionLaw::Constant { value } if !(value > 0.0) => {
                return Err(Error::Validation(format!("friction must be positive, got {value}")))
            }
            FrictionLaw::TipGaussian { base, width, amplitude } if !(base > 0.0 && width > 0.0 && amplitude >= 0.0) => {
                return Err(Error::Validation("friction: tip_gaussian needs base > 0, width > 0, amplitude >= 0".into()))
            }
            FrictionLaw::DiskExponential { base, length, cap } => {
                if !(base > 0.0 && length >= 0.0 && cap >= base) {
                    return Err(Error::Validation("friction: disk_exponential needs base > 0, length >= 0, cap >= base".into()));
                }
                if let Some(i) = self.disks.iter().position(|d| d.is_none()) {
                    return Err(Error::Validation(format!(
                        "friction: fracture '{}' has no disk geometry",
                        self.mesh.fractures[i].name
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.mesh.dim
    }

    pub fn has_flow(&self) -> bool {
        self.config.material.flow
    }

    pub fn material(&self) -> Result<MaterialField> {
        let m = &self.config.material;
        let (shear, lambda) = m.lame_parameters()?;
        let mut field = MaterialField::homogeneous(
            &self.mesh,
            Homogeneous {
                shear,
                lambda,
                biot: m.biot,
                storage: m.storage,
                permeability: m.permeability,
            },
        );
        let f = Point::new(m.body_force[0], m.body_force[1], m.body_force[2]);
        field.body_force = vec![f; self.mesh.num_cells()];
        field.source = vec![m.source; self.mesh.num_cells()];
        Ok(field)
    }

    /// Boundary configuration of the face carrying `tag`.
    fn boundary_entry(&self, tag: Option<usize>) -> Option<&BoundaryConfig> {
        let tag = tag?;
        let name = &self.mesh.tags[tag];
        self.config.boundary.iter().rev().find(|b| &b.group == name)
    }

    pub fn boundary_kinds(&self, subgrid: &SubGrid) -> BoundaryKinds {
        let mut kinds = BoundaryKinds::all_neumann(&self.mesh, subgrid);
        for (s, sf) in subgrid.subfaces.iter().enumerate() {
            let face = &self.mesh.faces[sf.face];
            if !face.is_boundary() {
                continue;
            }
            let Some(entry) = self.boundary_entry(face.tag) else {
                continue;
            };
            if let Some(mech) = &entry.mechanics {
                let k = match mech {
                    MechanicsBc::Dirichlet { .. } => [BcKind::Dirichlet; 3],
                    MechanicsBc::Neumann { .. } => [BcKind::Neumann; 3],
                    MechanicsBc::Roller => {
                        let mut k = [BcKind::Neumann; 3];
                        k[normal_axis(&face.normal)] = BcKind::Dirichlet;
                        k
                    }
                    MechanicsBc::Mixed { components, .. } => {
                        let mut k = [BcKind::Neumann; 3];
                        for (i, c) in components.iter().enumerate() {
                            k[i] = match c {
                                ComponentKind::Dirichlet => BcKind::Dirichlet,
                                ComponentKind::Neumann => BcKind::Neumann,
                            };
                        }
                        k
                    }
                };
                kinds.mech[s] = Some(k);
            }
            if let Some(flow) = &entry.flow {
                kinds.flow[s] = Some(match flow {
                    FlowBc::Dirichlet { .. } => BcKind::Dirichlet,
                    FlowBc::Neumann { .. } => BcKind::Neumann,
                });
            }
        }
        kinds
    }

    /// Boundary data at time `t`, evaluated at continuity points.
    pub fn boundary_values(&self, subgrid: &SubGrid, t: f64) -> BoundaryValues {
        let mut v = BoundaryValues::zeros(subgrid.num_subfaces());
        for (s, sf) in subgrid.subfaces.iter().enumerate() {
            let face = &self.mesh.faces[sf.face];
            if !face.is_boundary() {
                continue;
            }
            let Some(entry) = self.boundary_entry(face.tag) else {
                continue;
            };
            match &entry.mechanics {
                Some(MechanicsBc::Dirichlet { value, ramp_time })
                | Some(MechanicsBc::Neumann { value, ramp_time })
                | Some(MechanicsBc::Mixed { value, ramp_time, .. }) => {
                    for (i, x) in value.iter().enumerate() {
                        v.mech[s][i] = ramp(*x, *ramp_time, t);
                    }
                }
                _ => {}
            }
            match &entry.flow {
                Some(FlowBc::Dirichlet { value, ramp_time }) | Some(FlowBc::Neumann { value, ramp_time }) => {
                    v.flow[s] = ramp(*value, *ramp_time, t);
                }
                None => {}
            }
        }
        v
    }

    /// Friction coefficient at a point of fracture `fracture`.
    pub fn friction_at(&self, fracture: usize, tips: &[TipElement], x: &Point) -> f64 {
        match self.config.friction {
            FrictionLaw::Constant { value } => value,
            FrictionLaw::TipGaussian { base, amplitude, width } => {
                let d = tips.iter().map(|t| t.distance(x)).fold(f64::INFINITY, f64::min);
                base * (1.0 + amplitude * (-d * d / width).exp())
            }
            FrictionLaw::DiskExponential { base, length, cap } => {
                let disk = self.disks[fracture].as_ref().expect("validated disk geometry");
                let d = (x - disk.center).norm();
                let r = disk.radius;
                if d >= r {
                    cap
                } else {
                    (base * (length / (r - d) - length / r).exp()).min(cap)
                }
            }
        }
    }

    pub fn contact_params(&self) -> ContactParams {
        ContactParams {
            c: self.config.solver.c,
            dynamic: self.config.time.mode == TimeMode::Dynamic,
            dt: self.config.time.dt,
        }
    }

    pub fn newton_config(&self) -> NewtonConfig {
        NewtonConfig {
            tolerance: self.config.solver.tolerance,
            max_iterations: self.config.solver.max_iterations,
            lambda_tolerance: self.config.solver.lambda_tolerance,
            pressure_tolerance: self.config.solver.pressure_tolerance,
            ..NewtonConfig::default()
        }
    }

    /// Build subcells, pair fractures, condense and attach friction.
    pub fn discretize(&self) -> Result<Discretization> {
        let mesh = self.mesh.clone();
        let subgrid = build_subgrid(&mesh)?;
        let gap = self.config.gap;
        let pairing = pair_fracture_sides(&mesh, &subgrid, Some(&|_x: &Point| gap))?;
        let tips: Vec<Vec<TipElement>> = (0..mesh.fractures.len()).map(|f| mesh.fracture_tips(f)).collect();
        let friction = pairing
            .positive
            .iter()
            .zip(&pairing.fracture)
            .map(|(&s, &fr)| self.friction_at(fr, &tips[fr], &subgrid.subfaces[s].continuity_point))
            .collect();
        let kinds = self.boundary_kinds(&subgrid);
        let material = self.material()?;
        Discretization::new(mesh, subgrid, pairing, material, kinds, friction, self.has_flow())
    }
}

/// Coordinate axis closest to `n`.
pub fn normal_axis(n: &Point) -> usize {
    (0..3)
        .max_by(|&a, &b| n[a].abs().partial_cmp(&n[b].abs()).unwrap())
        .unwrap()
}

fn validation(e: Error) -> Error {
    match e {
        Error::InvalidParameter(m) => Error::Validation(m),
        other => other,
    }
}

/// Positive faces of a fracture, in pairing order.
pub fn positive_faces(mesh: &Mesh, fracture: usize) -> Vec<usize> {
    mesh.fractures[fracture].faces.iter().map(|&(p, _)| p).collect()
}
