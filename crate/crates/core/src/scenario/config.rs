//! Serializable scenario description.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub name: String,
    pub mesh: MeshConfig,
    pub material: MaterialConfig,
    pub friction: FrictionLaw,
    /// Initial normal gap, in m.
    #[serde(default)]
    pub gap: f64,
    #[serde(default)]
    pub boundary: Vec<BoundaryConfig>,
    #[serde(default)]
    pub time: TimeConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeshConfig {
    /// Triangulated rectangle with polyline fractures along grid lines or
    /// cell diagonals.
    Rectangle {
        lo: [f64; 2],
        hi: [f64; 2],
        cells: [usize; 2],
        #[serde(default)]
        fractures: Vec<PolylineConfig>,
    },
    /// Tetrahedralized box with disk fractures snapped to grid planes.
    Box {
        lo: [f64; 3],
        hi: [f64; 3],
        cells: [usize; 3],
        #[serde(default)]
        fractures: Vec<DiskConfig>,
    },
    /// Mesh file in the version 2.2 ASCII interchange layout. Relative paths
    /// are resolved against the configuration file.
    Gmsh {
        path: String,
        #[serde(default)]
        fractures: Vec<String>,
        /// Optional disk geometry of named fractures, used by disk friction laws.
        #[serde(default)]
        disks: Vec<DiskConfig>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolylineConfig {
    pub name: String,
    pub points: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskConfig {
    pub name: String,
    pub center: [f64; 3],
    pub radius: f64,
    pub strike: f64,
    pub dip: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub young: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poisson: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shear: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lame: Option<f64>,
    /// Solve for pressure. Without flow the pressure block is dropped.
    #[serde(default)]
    pub flow: bool,
    #[serde(default)]
    pub biot: f64,
    #[serde(default)]
    pub storage: f64,
    #[serde(default)]
    pub permeability: f64,
    #[serde(default)]
    pub body_force: [f64; 3],
    #[serde(default)]
    pub source: f64,
}

impl MaterialConfig {
    pub fn elastic(young: f64, poisson: f64) -> Self {
        MaterialConfig {
            young: Some(young),
            poisson: Some(poisson),
            shear: None,
            lame: None,
            flow: false,
            biot: 0.0,
            storage: 0.0,
            permeability: 0.0,
            body_force: [0.0; 3],
            source: 0.0,
        }
    }

    /// Lamé parameters `(G, Λ)`.
    pub fn lame_parameters(&self) -> Result<(f64, f64)> {
        match (self.young, self.poisson, self.shear, self.lame) {
            (Some(e), Some(nu), None, None) => {
                if !(e > 0.0) || !(nu > -1.0 && nu < 0.5) {
                    return Err(Error::Validation(format!(
                        "material: need E > 0 and -1 < nu < 0.5, got E = {e}, nu = {nu}"
                    )));
                }
                Ok(crate::fvm::lame_from_young(e, nu))
            }
            (None, None, Some(g), Some(l)) => Ok((g, l)),
            _ => Err(Error::Validation(
                "material: give either (young, poisson) or (shear, lame)".into(),
            )),
        }
    }
}

/// Friction coefficient as a function of position on a fracture.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case", deny_unknown_fields)]
pub enum FrictionLaw {
    Constant {
        value: f64,
    },
    /// `base (1 + amplitude exp(−D²/width))`, `D` the distance to the
    /// fracture tips.
    TipGaussian {
        base: f64,
        amplitude: f64,
        width: f64,
    },
    /// `base exp(length/(R − D) − length/R)`, `D` the distance to the disk
    /// center, capped at `cap`.
    DiskExponential {
        base: f64,
        length: f64,
        cap: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryConfig {
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mechanics: Option<MechanicsBc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flow: Option<FlowBc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MechanicsBc {
    /// Prescribed displacement, in m.
    Dirichlet {
        value: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ramp_time: Option<f64>,
    },
    /// Prescribed traction density, in Pa.
    Neumann {
        value: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ramp_time: Option<f64>,
    },
    /// Zero normal displacement, zero tangential traction. The normal
    /// component is the axis closest to the face normal.
    Roller,
    Mixed {
        components: Vec<ComponentKind>,
        value: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ramp_time: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Dirichlet,
    Neumann,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FlowBc {
    /// Prescribed pressure, in Pa.
    Dirichlet {
        value: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ramp_time: Option<f64>,
    },
    /// Prescribed outward flux density.
    Neumann {
        value: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ramp_time: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeMode {
    /// Friction acts on the tangential jump.
    Static,
    /// Friction acts on the tangential jump increment per step.
    Dynamic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub mode: TimeMode,
    pub dt: f64,
    pub steps: usize,
}

impl Default for TimeConfig {
    fn default() -> Self {
        TimeConfig {
            mode: TimeMode::Static,
            dt: 1.0,
            steps: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    /// Numerical parameter `c` of the complementarity functions, in Pa/m.
    pub c: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Initial normal traction on every contact, in Pa.
    pub initial_lambda_n: f64,
    /// Start the first step with every contact sticking.
    #[serde(default = "enabled")]
    pub stick_first: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pressure_tolerance: Option<f64>,
}

fn enabled() -> bool {
    true
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            c: crate::contact::DEFAULT_C,
            tolerance: 1e-10,
            max_iterations: 50,
            initial_lambda_n: -100.0,
            stick_first: true,
            lambda_tolerance: None,
            pressure_tolerance: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub vtk: bool,
    pub fracture_csv: bool,
    /// Write outputs every `every` steps (the last step is always written).
    pub every: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            vtk: true,
            fracture_csv: true,
            every: 1,
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| {
            let location = match e.span() {
                Some(span) => {
                    let line = text[..span.start.min(text.len())].matches('\n').count() + 1;
                    format!("line {line}")
                }
                None => "document".to_string(),
            };
            Error::Parse {
                location,
                message: e.message().to_string(),
            }
        })?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(Error::Validation(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Contract(format!("cannot serialize scenario: {e}")))
    }
}
