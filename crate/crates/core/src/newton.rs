//! Semismooth Newton iteration with active sets and implicit time stepping.

use crate::assembly::{Discretization, State, StepData};
use crate::contact::{kkt_violation, ContactParams, ContactSet};
use crate::error::{Error, Result};
use crate::fvm::BoundaryValues;
use crate::solver::LinearSolver;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonConfig {
    /// Tolerance on `‖Δu‖ / ‖u‖`.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Label every contact as sticking in the first iteration instead of
    /// classifying the initial guess. Used for the zero-displacement start.
    pub stick_first: bool,
    /// Optional extra gate on `‖Δλ‖ / ‖λ‖`.
    pub lambda_tolerance: Option<f64>,
    /// Optional extra gate on `‖Δp‖ / ‖p‖`.
    pub pressure_tolerance: Option<f64>,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig {
            tolerance: 1e-10,
            max_iterations: 50,
            stick_first: false,
            lambda_tolerance: None,
            pressure_tolerance: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct NewtonReport {
    pub iterations: usize,
    /// Relative displacement update of every iteration.
    pub updates: Vec<f64>,
    /// Number of (open, stick, slide) contacts used by every iteration.
    pub set_counts: Vec<[usize; 3]>,
    /// Active sets of the converged state.
    pub sets: Vec<ContactSet>,
    /// Largest contact-condition violation of the converged state.
    pub kkt: f64,
    /// `max(|λ|, 1 Pa)` over all contacts of the converged state.
    pub traction_scale: f64,
}

pub fn count_sets(sets: &[ContactSet]) -> [usize; 3] {
    let mut c = [0; 3];
    for s in sets {
        c[match s {
            ContactSet::Open => 0,
            ContactSet::Stick => 1,
            ContactSet::Slide => 2,
        }] += 1;
    }
    c
}

fn relative_update(old: &[f64], new: &[f64]) -> f64 {
    let du: f64 = old.iter().zip(new).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt();
    let un: f64 = new.iter().map(|v| v * v).sum::<f64>().sqrt();
    if du == 0.0 {
        0.0
    } else {
        du / un
    }
}

/// Solve one time step starting from `initial`.
pub fn solve_step(
    disc: &Discretization,
    step: &StepData,
    initial: &State,
    config: &NewtonConfig,
    solver: &mut dyn LinearSolver,
) -> Result<(State, NewtonReport)> {
    let layout = disc.layout;
    let bulk = disc.bulk_system(step)?;
    let mut state = initial.clone();
    let mut report = NewtonReport::default();
    for it in 1..=config.max_iterations {
        let points = disc.contact_points(&state, step)?;
        let sets = if it == 1 && config.stick_first {
            vec![ContactSet::Stick; points.len()]
        } else {
            disc.classify(&points, &step.contact)
        };
        let mut sys = bulk.clone();
        disc.add_contact_rows(&mut sys, &points, &sets, step)?;
        let x = solver.solve(&sys)?;
        let next = state.unpack(&layout, &x)?;
        let eps = relative_update(&state.u, &next.u);
        let gates = config.lambda_tolerance.is_none_or(|t| relative_update(&state.lambda, &next.lambda) < t)
            && config.pressure_tolerance.is_none_or(|t| relative_update(&state.p, &next.p) < t);
        report.iterations = it;
        report.updates.push(eps);
        report.set_counts.push(count_sets(&sets));
        state = next;
        if layout.n_contacts == 0 || (eps < config.tolerance && gates) {
            let points = disc.contact_points(&state, step)?;
            report.sets = disc.classify(&points, &step.contact);
            report.kkt = points
                .iter()
                .map(|p| kkt_violation(p, &step.contact))
                .fold(0.0, f64::max);
            report.traction_scale = points.iter().map(|p| p.lambda.norm()).fold(1.0, f64::max);
            return Ok((state, report));
        }
    }
    Err(Error::NonConvergence {
        iterations: config.max_iterations,
        last_update: report.updates.last().copied().unwrap_or(f64::NAN),
        last_iterate: state.pack(&layout),
    })
}

/// Boundary data as a function of time.
pub trait BoundaryHistory {
    fn values(&self, time: f64) -> BoundaryValues;
}

impl<F: Fn(f64) -> BoundaryValues> BoundaryHistory for F {
    fn values(&self, time: f64) -> BoundaryValues {
        self(time)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub time: f64,
    pub state: State,
    pub report: NewtonReport,
}

/// Implicit Euler over `n_steps` steps of size `dt`, starting at time 0 from
/// `initial` with boundary data `history(0)`.
#[allow(clippy::too_many_arguments)]
pub fn run_time_steps(
    disc: &Discretization,
    history: &dyn BoundaryHistory,
    initial: State,
    dt: f64,
    n_steps: usize,
    contact: ContactParams,
    config: &NewtonConfig,
    solver: &mut dyn LinearSolver,
) -> Result<Vec<StepRecord>> {
    let mut records = Vec::with_capacity(n_steps);
    let mut state = initial;
    let mut prev_values = history.values(0.0);
    for n in 1..=n_steps {
        let time = dt * n as f64;
        let values = history.values(time);
        let step = StepData {
            values: &values,
            previous: &state,
            previous_values: &prev_values,
            dt,
            contact: ContactParams { dt, ..contact },
        };
        let (next, report) = solve_step(disc, &step, &state, config, solver)?;
        records.push(StepRecord {
            time,
            state: next.clone(),
            report,
        });
        state = next;
        prev_values = values;
    }
    Ok(records)
}
