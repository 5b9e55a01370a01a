use std::collections::BTreeMap;
use std::path::Path;

use porofrac::io::{format_gmsh, parse_gmsh, write_gmsh};
use porofrac::scenario::{
    load_scenario, preset, presets, run_scenario, FrictionLaw, MechanicsBc, MeshConfig, Scenario, ScenarioConfig,
    TimeMode, PRESETS,
};
use porofrac::Error;
use proptest::prelude::*;

fn friction_law() -> impl Strategy<Value = FrictionLaw> {
    prop_oneof![
        (0.01f64..2.0).prop_map(|value| FrictionLaw::Constant { value }),
        (0.01f64..2.0, 0.0f64..10.0, 1e-4f64..1.0).prop_map(|(base, amplitude, width)| FrictionLaw::TipGaussian {
            base,
            amplitude,
            width
        }),
    ]
}

fn csv_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edited_configs_survive_a_round_trip(
        which in 0usize..PRESETS.len(), level in 0usize..2, gap in 0.0f64..1e-3, c in 1e6f64..1e12,
        dt in 1e-3f64..1e3, steps in 1usize..50, tol in 1e-14f64..1e-4, friction in friction_law(),
        dynamic in any::<bool>(), ramp in prop::option::of(0.1f64..10.0),
    ) {
        let mut cfg = preset(PRESETS[which], level).unwrap();
        cfg.gap = gap;
        cfg.solver.c = c;
        cfg.solver.tolerance = tol;
        cfg.solver.lambda_tolerance = Some(tol);
        cfg.time.dt = dt;
        cfg.time.steps = steps;
        cfg.time.mode = if dynamic { TimeMode::Dynamic } else { TimeMode::Static };
        cfg.friction = friction;
        if let Some(MechanicsBc::Dirichlet { ramp_time, .. }) = cfg.boundary.iter_mut().find_map(|b| b.mechanics.as_mut()) {
            *ramp_time = ramp;
        }
        let text = cfg.to_toml().unwrap();
        prop_assert_eq!(ScenarioConfig::from_toml(&text).unwrap(), cfg);
    }
}

#[test]
fn every_preset_loads_and_round_trips() {
    for name in PRESETS {
        let cfg = preset(name, 0).unwrap();
        let text = cfg.to_toml().unwrap();
        let s = load_scenario(&text, Path::new(".")).unwrap();
        assert_eq!(s.config, cfg, "{name}");
        assert_eq!(s.config.solver.c, 1e11);
        assert_eq!(s.config.gap, 0.0);
    }
    assert!(matches!(preset("example9", 0), Err(Error::Validation(_))));
}

#[test]
fn example_presets_carry_the_published_parameters() {
    let ex2 = presets::example2(0);
    let MeshConfig::Box { fractures, .. } = &ex2.mesh else {
        panic!("example2 is a box");
    };
    let f1 = &fractures[0];
    assert_eq!((f1.center, f1.radius, f1.strike, f1.dip), ([-10.0, -30.0, -80.0], 150.0, 81.8, 43.9));
    let top = ex2.boundary.iter().find(|b| b.group == "top").unwrap();
    assert_eq!(
        top.mechanics,
        Some(MechanicsBc::Neumann {
            value: vec![0.0, 0.0, -4.5e6],
            ramp_time: None
        })
    );

    let ex1 = presets::example1(0);
    let MeshConfig::Rectangle { lo, hi, .. } = ex1.mesh else {
        panic!("example1 is a rectangle");
    };
    assert_eq!((lo, hi), ([0.0, 0.0], [2.0, 1.0]));
    assert_eq!(
        ex1.friction,
        FrictionLaw::TipGaussian {
            base: 0.5,
            amplitude: 1.0,
            width: 0.005
        }
    );
    let (g, l) = ex1.material.lame_parameters().unwrap();
    assert!((g - 4e9 / 2.4).abs() < 1e-3 && (l - 4e9 * 0.2 / (1.2 * 0.6)).abs() < 1e-3);

    let ex4 = presets::example4(0);
    assert_eq!(ex4.time.steps, 20);
    assert!((ex4.time.dt * 20.0 - 625.0 * 60.0).abs() < 1e-9);
}

#[test]
fn example3_ramps_to_half_time_then_holds() {
    let cfg = presets::example3(0);
    let end = cfg.time.dt * cfg.time.steps as f64;
    let s = Scenario::from_config(cfg, Path::new(".")).unwrap();
    let disc = s.discretize().unwrap();
    let top = s.mesh.tag_index("top").unwrap();
    let top_value = |t: f64| {
        let v = s.boundary_values(&disc.subgrid, t);
        let sf = disc
            .subgrid
            .subfaces
            .iter()
            .position(|sf| s.mesh.faces[sf.face].tag == Some(top))
            .unwrap();
        v.mech[sf]
    };
    assert_eq!(top_value(0.0).norm(), 0.0);
    let quarter = top_value(end / 4.0);
    assert!((quarter.x - 0.0025).abs() < 1e-15 && (quarter.y + 0.001).abs() < 1e-15);
    for t in [end / 2.0, 0.75 * end, end] {
        let v = top_value(t);
        assert!((v.x - 0.005).abs() < 1e-15 && (v.y + 0.002).abs() < 1e-15);
    }
}

#[test]
fn bad_documents_are_rejected_with_a_location() {
    let text = presets::appendix(0, true).to_toml().unwrap();
    let typo = text.replacen("tolerance", "tolerence", 1);
    match ScenarioConfig::from_toml(&typo) {
        Err(Error::Parse { location, .. }) => assert!(location.starts_with("line "), "{location}"),
        other => panic!("unexpected {other:?}"),
    }
    let version = text.replacen("schema_version = 1", "schema_version = 2", 1);
    assert!(matches!(ScenarioConfig::from_toml(&version), Err(Error::Validation(_))));

    let mut cfg = presets::appendix(0, true);
    cfg.boundary[0].group = "floor".into();
    assert!(matches!(Scenario::from_config(cfg, Path::new(".")), Err(Error::Validation(m)) if m.contains("floor")));

    let mut cfg = presets::appendix(0, true);
    cfg.boundary[1].group = "fracture".into();
    assert!(Scenario::from_config(cfg, Path::new(".")).is_err());

    let mut cfg = presets::appendix(0, true);
    cfg.mesh = MeshConfig::Gmsh {
        path: "missing.msh".into(),
        fractures: vec![],
        disks: vec![],
    };
    let err = Scenario::from_config(cfg, Path::new(".")).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    assert!(err.to_string().contains("missing.msh"));
}

#[test]
fn generated_mesh_files_reproduce_the_mesh() {
    let cfg = presets::example1(0);
    let s = Scenario::from_config(cfg.clone(), Path::new(".")).unwrap();
    assert_eq!(parse_gmsh(&format_gmsh(&s.raw)).unwrap(), s.raw);

    let dir = tempfile::tempdir().unwrap();
    write_gmsh(&dir.path().join("ex1.msh"), &s.raw).unwrap();
    let MeshConfig::Rectangle { fractures, .. } = &cfg.mesh else {
        unreachable!()
    };
    let from_file = ScenarioConfig {
        mesh: MeshConfig::Gmsh {
            path: "ex1.msh".into(),
            fractures: fractures.iter().map(|f| f.name.clone()).collect(),
            disks: vec![],
        },
        ..cfg
    };
    let t = Scenario::from_config(from_file, dir.path()).unwrap();
    assert_eq!(t.mesh, s.mesh);
    let (a, b) = (run_scenario(&s, None).unwrap(), run_scenario(&t, None).unwrap());
    assert_eq!(a.final_state, b.final_state);
}

#[test]
fn repeated_runs_write_identical_tables() {
    let mut cfg = presets::example3(0);
    cfg.time.steps = 4;
    cfg.output.every = 2;
    let s = Scenario::from_config(cfg, Path::new(".")).unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_scenario(&s, Some(a.path())).unwrap();
    run_scenario(&s, Some(b.path())).unwrap();
    let (fa, fb) = (csv_files(a.path()), csv_files(b.path()));
    assert!(fa.len() >= 2, "{:?}", fa.keys());
    assert_eq!(fa, fb);
    let report = std::fs::read_to_string(a.path().join("report.txt")).unwrap();
    assert!(report.contains("status: ok"));
}

#[test]
fn vtk_output_pads_two_dimensional_vectors() {
    let s = Scenario::from_config(presets::appendix(0, true), Path::new(".")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    run_scenario(&s, Some(dir.path())).unwrap();
    let vtk = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|x| x == "vtk"))
        .unwrap();
    let text = std::fs::read_to_string(vtk).unwrap();
    let nc = s.mesh.num_cells();
    assert!(text.contains(&format!("CELL_DATA {nc}\n")));
    let lines: Vec<&str> = text.lines().collect();
    let start = lines.iter().position(|l| l.starts_with("VECTORS")).unwrap() + 1;
    for l in &lines[start..start + nc] {
        let v: Vec<f64> = l.split_whitespace().map(|x| x.parse().unwrap()).collect();
        assert_eq!(v.len(), 3);
        assert_eq!(v[2], 0.0);
    }
}

#[test]
fn failed_runs_leave_a_marked_report() {
    let mut cfg = presets::appendix(0, false);
    cfg.solver.max_iterations = 1;
    let s = Scenario::from_config(cfg, Path::new(".")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let err = run_scenario(&s, Some(dir.path())).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    let report = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("status: FAILED"), "{report}");
}
