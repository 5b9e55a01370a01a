//! Built-in scenarios. `level` refines the base mesh by `2^level` per axis
//! (Example 2 and 4 use `level + 1` cells per 100 m instead).

use super::config::*;
use crate::error::{Error, Result};

pub const PRESETS: [&str; 8] = [
    "example1",
    "example2",
    "example3",
    "example4",
    "appendix",
    "appendix-constant",
    "terzaghi",
    "zero-load",
];

pub const YOUNG: f64 = 4e9;
pub const POISSON: f64 = 0.2;
pub const PERMEABILITY: f64 = 1e-8;
pub const STORAGE: f64 = 1e-10;
/// Top load of the 3d examples and the consolidation column, in Pa.
pub const TOP_LOAD: f64 = 4.5e6;

pub fn preset(name: &str, level: usize) -> Result<ScenarioConfig> {
    match name {
        "example1" => Ok(example1(level)),
        "example2" => Ok(example2(level)),
        "example3" => Ok(example3(level)),
        "example4" => Ok(example4(level)),
        "appendix" => Ok(appendix(level, true)),
        "appendix-constant" => Ok(appendix(level, false)),
        "terzaghi" => Ok(terzaghi(50 << level, 1e-3, 100)),
        "zero-load" => Ok(zero_load(level)),
        _ => Err(Error::Validation(format!(
            "unknown preset '{name}' (available: {})",
            PRESETS.join(", ")
        ))),
    }
}

fn dirichlet(group: &str, value: Vec<f64>) -> BoundaryConfig {
    BoundaryConfig {
        group: group.into(),
        mechanics: Some(MechanicsBc::Dirichlet { value, ramp_time: None }),
        flow: None,
    }
}

fn polyline(name: &str, points: &[[f64; 2]]) -> PolylineConfig {
    PolylineConfig {
        name: name.into(),
        points: points.to_vec(),
    }
}

fn base(name: &str, mesh: MeshConfig, friction: FrictionLaw, boundary: Vec<BoundaryConfig>) -> ScenarioConfig {
    ScenarioConfig {
        schema_version: SCHEMA_VERSION,
        name: name.into(),
        mesh,
        material: MaterialConfig::elastic(YOUNG, POISSON),
        friction,
        gap: 0.0,
        boundary,
        time: TimeConfig::default(),
        solver: SolverConfig::default(),
        output: OutputConfig::default(),
    }
}

/// 2 m × 1 m block with six fractures: a kinked one, one reaching the right
/// boundary, horizontal, vertical and inclined ones.
pub fn example1(level: usize) -> ScenarioConfig {
    let h = 0.125;
    let p = |i: f64, j: f64| [i * h, j * h];
    let fractures = vec![
        polyline("fracture_1", &[p(2.0, 2.0), p(5.0, 5.0), p(8.0, 5.0)]),
        polyline("fracture_2", &[p(6.0, 2.0), p(13.0, 2.0)]),
        polyline("fracture_3", &[p(9.0, 7.0), p(12.0, 4.0)]),
        polyline("fracture_4", &[p(1.0, 6.0), p(3.0, 6.0)]),
        polyline("fracture_5", &[p(13.0, 6.0), p(16.0, 6.0)]),
        polyline("fracture_6", &[p(14.0, 1.0), p(14.0, 4.0)]),
    ];
    let k = 1 << level;
    base(
        "example1",
        MeshConfig::Rectangle {
            lo: [0.0, 0.0],
            hi: [2.0, 1.0],
            cells: [16 * k, 8 * k],
            fractures,
        },
        FrictionLaw::TipGaussian {
            base: 0.5,
            amplitude: 1.0,
            width: 0.005,
        },
        vec![dirichlet("bottom", vec![0.0, 0.0]), dirichlet("top", vec![0.005, -0.002])],
    )
}

/// Example 1 with a pore fluid drained on the left boundary and the top
/// displacement ramped over the first half of the run.
pub fn example3(level: usize) -> ScenarioConfig {
    let mut c = example1(level);
    c.name = "example3".into();
    let end = 5.0 * STORAGE / PERMEABILITY;
    c.material.flow = true;
    c.material.biot = 1.0;
    c.material.storage = STORAGE;
    c.material.permeability = PERMEABILITY;
    c.boundary = vec![
        dirichlet("bottom", vec![0.0, 0.0]),
        BoundaryConfig {
            group: "top".into(),
            mechanics: Some(MechanicsBc::Dirichlet {
                value: vec![0.005, -0.002],
                ramp_time: Some(end / 2.0),
            }),
            flow: None,
        },
        BoundaryConfig {
            group: "left".into(),
            mechanics: None,
            flow: Some(FlowBc::Dirichlet {
                value: 0.0,
                ramp_time: None,
            }),
        },
    ];
    c.time = TimeConfig {
        mode: TimeMode::Dynamic,
        dt: end / 20.0,
        steps: 20,
    };
    c.output.every = 5;
    c
}

/// Two inclined disks in a 500 m × 500 m × 600 m box under a top load.
pub fn example2(level: usize) -> ScenarioConfig {
    let k = level + 1;
    let fractures = vec![
        DiskConfig {
            name: "fracture_1".into(),
            center: [-10.0, -30.0, -80.0],
            radius: 150.0,
            strike: 81.8,
            dip: 43.9,
        },
        DiskConfig {
            name: "fracture_2".into(),
            center: [15.0, 60.0, 80.0],
            radius: 150.0,
            strike: 78.3,
            dip: 47.1,
        },
    ];
    let roller = |g: &str| BoundaryConfig {
        group: g.into(),
        mechanics: Some(MechanicsBc::Roller),
        flow: None,
    };
    base(
        "example2",
        MeshConfig::Box {
            lo: [-200.0, -200.0, -300.0],
            hi: [300.0, 300.0, 300.0],
            cells: [5 * k, 5 * k, 6 * k],
            fractures,
        },
        FrictionLaw::DiskExponential {
            base: 0.5,
            length: 10.0,
            cap: 1e3,
        },
        vec![
            roller("west"),
            roller("east"),
            roller("south"),
            roller("north"),
            dirichlet("bottom", vec![0.0, 0.0, 0.0]),
            BoundaryConfig {
                group: "top".into(),
                mechanics: Some(MechanicsBc::Neumann {
                    value: vec![0.0, 0.0, -TOP_LOAD],
                    ramp_time: None,
                }),
                flow: None,
            },
        ],
    )
}

/// Example 2 with a pore fluid drained through the top; 20 steps to 625 min.
pub fn example4(level: usize) -> ScenarioConfig {
    let mut c = example2(level);
    c.name = "example4".into();
    c.material.flow = true;
    c.material.biot = 1.0;
    c.material.storage = STORAGE;
    c.material.permeability = PERMEABILITY;
    for b in c.boundary.iter_mut() {
        if b.group == "top" {
            b.flow = Some(FlowBc::Dirichlet {
                value: 0.0,
                ramp_time: None,
            });
        }
    }
    c.time = TimeConfig {
        mode: TimeMode::Dynamic,
        dt: 625.0 * 60.0 / 20.0,
        steps: 20,
    };
    c.solver.initial_lambda_n = 0.0;
    c.output.every = 5;
    c
}

/// Single horizontal fracture in the unit square, loaded as in Example 1.
/// With `regularized` the friction grows near the tips and arrests slip.
pub fn appendix(level: usize, regularized: bool) -> ScenarioConfig {
    let k = 1 << level;
    let friction = if regularized {
        FrictionLaw::TipGaussian {
            base: 0.5,
            amplitude: 10.0,
            width: 1.0 / 800.0,
        }
    } else {
        FrictionLaw::Constant { value: 0.5 }
    };
    base(
        if regularized { "appendix" } else { "appendix-constant" },
        MeshConfig::Rectangle {
            lo: [0.0, 0.0],
            hi: [1.0, 1.0],
            cells: [16 * k, 16 * k],
            fractures: vec![polyline("fracture", &[[0.25, 0.5], [0.75, 0.5]])],
        },
        friction,
        vec![dirichlet("bottom", vec![0.0, 0.0]), dirichlet("top", vec![0.005, -0.002])],
    )
}

/// Consolidation coefficient `K / (c0 + α²/(Λ + 2G))`.
pub fn consolidation_coefficient(young: f64, poisson: f64, biot: f64, storage: f64, permeability: f64) -> f64 {
    let (g, l) = crate::fvm::lame_from_young(young, poisson);
    permeability / (storage + biot * biot / (l + 2.0 * g))
}

/// Unit-height drained column, one square wide, loaded on top.
/// `dt_fraction` is the step in units of `H²/c_v`.
pub fn terzaghi(cells_deep: usize, dt_fraction: f64, steps: usize) -> ScenarioConfig {
    let height = 1.0;
    let width = height / cells_deep as f64;
    let cv = consolidation_coefficient(YOUNG, POISSON, 1.0, STORAGE, PERMEABILITY);
    let roller = |g: &str| BoundaryConfig {
        group: g.into(),
        mechanics: Some(MechanicsBc::Roller),
        flow: None,
    };
    let mut c = base(
        "terzaghi",
        MeshConfig::Rectangle {
            lo: [0.0, 0.0],
            hi: [width, height],
            cells: [1, cells_deep],
            fractures: vec![],
        },
        FrictionLaw::Constant { value: 0.5 },
        vec![
            roller("left"),
            roller("right"),
            roller("bottom"),
            BoundaryConfig {
                group: "top".into(),
                mechanics: Some(MechanicsBc::Neumann {
                    value: vec![0.0, -TOP_LOAD],
                    ramp_time: None,
                }),
                flow: Some(FlowBc::Dirichlet {
                    value: 0.0,
                    ramp_time: None,
                }),
            },
        ],
    );
    c.material.flow = true;
    c.material.biot = 1.0;
    c.material.storage = STORAGE;
    c.material.permeability = PERMEABILITY;
    c.time = TimeConfig {
        mode: TimeMode::Dynamic,
        dt: dt_fraction * height * height / cv,
        steps,
    };
    c.output.vtk = false;
    c.output.fracture_csv = false;
    c
}

/// Example 1 geometry with no load.
pub fn zero_load(level: usize) -> ScenarioConfig {
    let mut c = example1(level);
    c.name = "zero-load".into();
    c.boundary = vec![dirichlet("bottom", vec![0.0, 0.0]), dirichlet("top", vec![0.0, 0.0])];
    c.solver.initial_lambda_n = 0.0;
    c
}
