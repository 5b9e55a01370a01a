//! Time loop driver and result output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use super::Scenario;
use crate::assembly::{Discretization, State, StepData};
use crate::contact::ContactSet;
use crate::convergence::{ConvergenceStudy, Snapshot};
use crate::error::{Error, Result};
use crate::io::{num, write_vtk, CellField, Table};
use crate::mesh::Point;
use crate::newton::{count_sets, solve_step, NewtonConfig, NewtonReport};
use crate::post::{fracture_faces, FaceRecord};
use crate::solver::SparseLu;

#[derive(Clone, Debug, PartialEq)]
pub struct FractureSummary {
    pub name: String,
    /// Largest face-averaged tangential jump, in m.
    pub max_slip: f64,
    /// Largest face-averaged opening `g − [u]_n`, in m.
    pub max_opening: f64,
    /// Faces labeled open, stick, slide.
    pub faces: [usize; 3],
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepSummary {
    pub step: usize,
    pub time: f64,
    pub newton: NewtonReport,
    pub sets: [usize; 3],
    pub fractures: Vec<FractureSummary>,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub scenario: String,
    pub steps: Vec<StepSummary>,
    pub setup_seconds: f64,
    /// `None` on success, the error message otherwise.
    pub failure: Option<String>,
    pub final_state: Option<State>,
    /// Face records of the last converged step.
    pub final_faces: Vec<FaceRecord>,
}

impl RunReport {
    pub fn iterations(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.newton.iterations).collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scenario: {}", self.scenario);
        let _ = writeln!(
            s,
            "status: {}",
            match &self.failure {
                None => "ok".to_string(),
                Some(m) => format!("FAILED: {m}"),
            }
        );
        let _ = writeln!(s, "setup_seconds: {:.3}", self.setup_seconds);
        for st in &self.steps {
            let _ = writeln!(
                s,
                "step {} time {:.6e} newton {} open {} stick {} slide {} kkt {:.3e} seconds {:.3}",
                st.step, st.time, st.newton.iterations, st.sets[0], st.sets[1], st.sets[2], st.newton.kkt, st.seconds
            );
            for f in &st.fractures {
                let _ = writeln!(
                    s,
                    "  {}: max_slip {:.6e} max_opening {:.6e} faces open/stick/slide {}/{}/{}",
                    f.name, f.max_slip, f.max_opening, f.faces[0], f.faces[1], f.faces[2]
                );
            }
        }
        s
    }
}

pub fn fracture_table(disc: &Discretization, faces: &[FaceRecord], step: usize, time: f64) -> Table {
    let mut t = Table::new(&[
        "step", "time", "fracture", "face", "x", "y", "z", "area", "lambda_n", "lambda_t", "jump_n", "jump_t",
        "friction", "set",
    ]);
    for r in faces {
        t.push(vec![
            step.to_string(),
            num(time),
            disc.mesh.fractures[r.fracture].name.clone(),
            r.face.to_string(),
            num(r.centroid.x),
            num(r.centroid.y),
            num(r.centroid.z),
            num(r.area),
            num(r.lambda_n()),
            num(r.lambda_t()),
            num(r.jump_n()),
            num(r.jump_t()),
            num(r.friction),
            r.set.label().to_string(),
        ]);
    }
    t
}

fn summarize(disc: &Discretization, faces: &[FaceRecord], gap: f64) -> Vec<FractureSummary> {
    disc.mesh
        .fractures
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mut s = FractureSummary {
                name: f.name.clone(),
                max_slip: 0.0,
                max_opening: 0.0,
                faces: [0; 3],
            };
            for r in faces.iter().filter(|r| r.fracture == i) {
                s.max_slip = s.max_slip.max(r.jump_t());
                s.max_opening = s.max_opening.max(gap - r.jump_n());
                s.faces[match r.set {
                    ContactSet::Open => 0,
                    ContactSet::Stick => 1,
                    ContactSet::Slide => 2,
                }] += 1;
            }
            s
        })
        .collect()
}

fn write_step(dir: &Path, scenario: &Scenario, disc: &Discretization, state: &State, faces: &[FaceRecord], step: usize, time: f64) -> Result<()> {
    let cfg = &scenario.config.output;
    let d = disc.layout.dim;
    if cfg.vtk {
        let u: Vec<Point> = (0..disc.layout.n_cells).map(|k| state.displacement(d, k)).collect();
        let path = dir.join(format!("{}_{step:04}.vtk", scenario.config.name));
        let mut fields = vec![CellField::Vector("u", &u)];
        if disc.layout.flow {
            fields.push(CellField::Scalar("p", &state.p));
        }
        write_vtk(&path, &disc.mesh, &format!("{} step {step} time {time:e}", scenario.config.name), &fields)?;
    }
    if cfg.fracture_csv && !disc.mesh.fractures.is_empty() {
        let path = dir.join(format!("{}_fractures_{step:04}.csv", scenario.config.name));
        fracture_table(disc, faces, step, time).write(&path)?;
    }
    Ok(())
}

/// Run all time steps of a scenario. With `output`, results are written to
/// that directory together with `report.txt`; on failure the report carries
/// a failure marker and the error is returned.
pub fn run_scenario(scenario: &Scenario, output: Option<&Path>) -> Result<RunReport> {
    let dir: Option<PathBuf> = output.map(Path::to_path_buf);
    if let Some(d) = &dir {
        std::fs::create_dir_all(d).map_err(|e| Error::io(d, e))?;
    }
    let t0 = Instant::now();
    let mut report = RunReport {
        scenario: scenario.config.name.clone(),
        steps: Vec::new(),
        setup_seconds: 0.0,
        failure: None,
        final_state: None,
        final_faces: Vec::new(),
    };
    let result = run_inner(scenario, dir.as_deref(), &mut report, t0);
    if let Err(e) = &result {
        report.failure = Some(e.to_string());
    }
    if let Some(d) = &dir {
        let path = d.join("report.txt");
        std::fs::write(&path, report.to_text()).map_err(|e| Error::io(&path, e))?;
    }
    result.map(|_| report)
}

fn run_inner(scenario: &Scenario, dir: Option<&Path>, report: &mut RunReport, t0: Instant) -> Result<()> {
    let disc = scenario.discretize()?;
    report.setup_seconds = t0.elapsed().as_secs_f64();
    let cfg = &scenario.config;
    let newton = scenario.newton_config();
    let mut solver = SparseLu;
    let mut state = disc.initial_state(cfg.solver.initial_lambda_n);
    let mut prev_values = scenario.boundary_values(&disc.subgrid, 0.0);
    for n in 1..=cfg.time.steps {
        let ts = Instant::now();
        let time = cfg.time.dt * n as f64;
        let values = scenario.boundary_values(&disc.subgrid, time);
        let step = StepData {
            values: &values,
            previous: &state,
            previous_values: &prev_values,
            dt: cfg.time.dt,
            contact: scenario.contact_params(),
        };
        let config = NewtonConfig {
            stick_first: n == 1 && cfg.solver.stick_first,
            ..newton
        };
        let (next, newton_report) = solve_step(&disc, &step, &state, &config, &mut solver)?;
        let faces = fracture_faces(&disc, &next, &values, &newton_report.sets)?;
        if let Some(d) = dir {
            if n % cfg.output.every == 0 || n == cfg.time.steps {
                write_step(d, scenario, &disc, &next, &faces, n, time)?;
            }
        }
        report.steps.push(StepSummary {
            step: n,
            time,
            sets: count_sets(&newton_report.sets),
            fractures: summarize(&disc, &faces, cfg.gap),
            newton: newton_report,
            seconds: ts.elapsed().as_secs_f64(),
        });
        report.final_faces = faces;
        state = next;
        prev_values = values;
    }
    report.final_state = Some(state);
    Ok(())
}

/// Final converged fields of a run, for comparisons across meshes.
pub fn snapshot(scenario: &Scenario, report: &RunReport) -> Result<Snapshot> {
    let state = report
        .final_state
        .as_ref()
        .ok_or_else(|| Error::Contract(format!("run of '{}' has no final state", report.scenario)))?;
    let d = scenario.dim();
    Ok(Snapshot {
        mesh: scenario.mesh.clone(),
        displacement: (0..scenario.mesh.num_cells()).map(|k| state.displacement(d, k)).collect(),
        faces: report.final_faces.clone(),
    })
}

/// Run every scenario, coarse to fine, and compare against the last one.
pub fn run_convergence_study(scenarios: &[Scenario]) -> Result<ConvergenceStudy> {
    let snapshots = scenarios
        .iter()
        .map(|s| snapshot(s, &run_scenario(s, None)?))
        .collect::<Result<Vec<_>>>()?;
    ConvergenceStudy::new(&snapshots)
}
