use std::path::Path;

use porofrac::assembly::{Discretization, State, StepData};
use porofrac::contact::ContactSet;
use porofrac::fvm::BoundaryValues;
use porofrac::newton::{solve_step, NewtonConfig};
use porofrac::scenario::{presets, run_scenario, RunReport, Scenario, ScenarioConfig};
use porofrac::solver::{SparseLu, SparseSystem};

struct Converged {
    scenario: Scenario,
    disc: Discretization,
    report: RunReport,
    values: BoundaryValues,
}

fn converge(cfg: ScenarioConfig) -> Converged {
    let scenario = Scenario::from_config(cfg, Path::new(".")).unwrap();
    let report = run_scenario(&scenario, None).unwrap();
    let disc = scenario.discretize().unwrap();
    let t = scenario.config.time.dt * scenario.config.time.steps as f64;
    let values = scenario.boundary_values(&disc.subgrid, t);
    Converged {
        scenario,
        disc,
        report,
        values,
    }
}

impl Converged {
    fn state(&self) -> &State {
        self.report.final_state.as_ref().unwrap()
    }

    fn step<'a>(&'a self, previous: &'a State) -> StepData<'a> {
        StepData {
            values: &self.values,
            previous,
            previous_values: &self.values,
            dt: self.scenario.config.time.dt,
            contact: self.scenario.contact_params(),
        }
    }
}

/// Largest row residual over `rows`, relative to the largest single term.
fn relative_residual(sys: &SparseSystem, x: &[f64], rows: std::ops::Range<usize>) -> f64 {
    let ax = sys.apply(x);
    let mut scale = vec![0.0f64; sys.n];
    for &(r, c, v) in &sys.entries {
        scale[r] = scale[r].max((v * x[c]).abs());
    }
    for (s, b) in scale.iter_mut().zip(&sys.rhs) {
        *s = s.max(b.abs());
    }
    let top = rows.clone().map(|r| scale[r]).fold(0.0, f64::max);
    rows.map(|r| (ax[r] - sys.rhs[r]).abs()).fold(0.0, f64::max) / top
}

#[test]
fn system_size_counts_cells_pressures_and_contacts() {
    for cfg in [presets::appendix(0, true), presets::example3(0), presets::terzaghi(10, 1e-3, 1)] {
        let s = Scenario::from_config(cfg, Path::new(".")).unwrap();
        let disc = s.discretize().unwrap();
        let d = s.dim();
        let n_p = if s.has_flow() { disc.mesh.num_cells() } else { 0 };
        assert_eq!(disc.layout.len(), disc.mesh.num_cells() * d + n_p + disc.pairing.len() * d);
        let positive = disc.subgrid.positive_subfaces().count();
        assert_eq!(disc.pairing.len(), positive);
    }
}

#[test]
fn converged_state_is_a_fixed_point() {
    let c = converge(presets::appendix(0, true));
    let state = c.state();
    let step = c.step(state);
    let config = NewtonConfig {
        stick_first: false,
        ..c.scenario.newton_config()
    };
    let (next, report) = solve_step(&c.disc, &step, state, &config, &mut SparseLu).unwrap();
    assert_eq!(report.iterations, 1);
    assert!(report.updates[0] <= config.tolerance, "{:?}", report.updates);
    let du = next.u.iter().zip(&state.u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let un = state.u.iter().map(|a| a.abs()).fold(0.0, f64::max);
    assert!(du <= 1e-10 * un);
}

#[test]
fn converged_states_balance_every_cell() {
    let mut ex3 = presets::example3(0);
    ex3.time.steps = 1;
    for cfg in [presets::appendix(0, true), presets::example1(0), ex3] {
        let c = converge(cfg);
        let state = c.state();
        // One-step runs: the previous level is the initial condition.
        let prev = c.disc.initial_state(c.scenario.config.solver.initial_lambda_n);
        let prev_values = c.scenario.boundary_values(&c.disc.subgrid, 0.0);
        let step = StepData {
            previous_values: &prev_values,
            ..c.step(&prev)
        };
        let (sys, _) = c.disc.assemble(state, &step, None).unwrap();
        let x = state.pack(&c.disc.layout);
        let bulk = c.disc.layout.n_u() + c.disc.layout.n_p();
        let r = relative_residual(&sys, &x, 0..bulk);
        assert!(r <= 1e-10, "{}: {r:.3e}", c.scenario.config.name);
    }
}

#[test]
fn reassembling_contact_rows_matches_full_assembly() {
    let c = converge(presets::appendix(0, false));
    let state = c.state();
    let step = c.step(state);
    let points = c.disc.contact_points(state, &step).unwrap();
    for sets in [
        c.disc.classify(&points, &step.contact),
        vec![ContactSet::Stick; points.len()],
        vec![ContactSet::Open; points.len()],
    ] {
        let (full, _) = c.disc.assemble(state, &step, Some(&sets)).unwrap();
        let mut reused = c.disc.bulk_system(&step).unwrap();
        c.disc.add_contact_rows(&mut reused, &points, &sets, &step).unwrap();
        assert_eq!(full.n, reused.n);
        let bits = |s: &SparseSystem| {
            let mut e: Vec<(usize, usize, u64)> = s.entries.iter().map(|&(r, c, v)| (r, c, v.to_bits())).collect();
            e.sort_unstable();
            (e, s.rhs.iter().map(|v| v.to_bits()).collect::<Vec<_>>())
        };
        assert_eq!(bits(&full), bits(&reused));
    }
}

#[test]
fn zero_load_stays_at_rest() {
    let c = converge(presets::zero_load(0));
    assert_eq!(c.report.iterations(), vec![1]);
    let s = c.state();
    assert!(s.u.iter().chain(&s.p).chain(&s.lambda).all(|&v| v == 0.0));
}

#[test]
fn linear_problems_take_one_iteration() {
    let mut cfg = presets::appendix(0, true);
    if let porofrac::scenario::MeshConfig::Rectangle { fractures, .. } = &mut cfg.mesh {
        fractures.clear();
    }
    let c = converge(cfg);
    assert_eq!(c.report.iterations(), vec![1]);
    let t = converge(presets::terzaghi(10, 1e-2, 5));
    assert_eq!(t.report.iterations(), vec![1; 5]);
}

#[test]
fn short_fracture_in_example1_sticks() {
    let c = converge(presets::example1(0));
    let step = c.report.steps.last().unwrap();
    let f4 = step.fractures.iter().find(|f| f.name == "fracture_4").unwrap();
    let most = step.fractures.iter().map(|f| f.max_slip).fold(0.0, f64::max);
    assert!(most > 1e-4);
    assert!(f4.max_slip <= 1e-12 * most, "{f4:?}");
    assert_eq!(f4.faces[2], 0);
}

#[test]
fn repeated_steps_at_steady_state_take_one_iteration() {
    let c = converge(presets::example3(0));
    assert_eq!(c.report.iterations().len(), 20);
    // Long steps drain the pressure; after that a repeated step changes nothing.
    let dt = 1e8 * c.scenario.config.time.dt;
    let config = NewtonConfig {
        stick_first: false,
        ..c.scenario.newton_config()
    };
    let mut state = c.state().clone();
    let mut last = Vec::new();
    for _ in 0..4 {
        let prev = state.clone();
        let step = StepData {
            dt,
            contact: porofrac::contact::ContactParams {
                dt,
                ..c.scenario.contact_params()
            },
            ..c.step(&prev)
        };
        let (next, report) = solve_step(&c.disc, &step, &prev, &config, &mut SparseLu).unwrap();
        last = report.updates.clone();
        state = next;
    }
    assert_eq!(last.len(), 1, "{last:?}");
    assert!(last[0] <= config.tolerance);
}
