//! One-dimensional consolidation under a suddenly applied top load.

use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scenario::{presets, run_scenario, FlowBc, MechanicsBc, Scenario};

/// Drained top, sealed bottom, constant load `w` applied at `t = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Consolidation {
    pub height: f64,
    pub load: f64,
    pub biot: f64,
    pub storage: f64,
    pub permeability: f64,
    pub shear: f64,
    pub lambda: f64,
}

impl Consolidation {
    /// Read the column parameters off a scenario. Anything but a 2d drained
    /// column loaded on top is a contract violation.
    pub fn from_scenario(s: &Scenario) -> Result<Self> {
        let cfg = &s.config;
        let fail = |m: &str| Err(Error::Contract(format!("not a consolidation column: {m}")));
        if s.dim() != 2 || !s.has_flow() || !s.mesh.fractures.is_empty() {
            return fail("need a 2d mesh without fractures and with flow");
        }
        let mut load = None;
        for b in &cfg.boundary {
            match &b.flow {
                Some(FlowBc::Dirichlet { value, .. }) => {
                    if *value != 0.0 || load.is_some() {
                        return fail("need exactly one drained group at zero pressure");
                    }
                    match &b.mechanics {
                        Some(MechanicsBc::Neumann { value, ramp_time: None }) if value.len() == 2 && value[0] == 0.0 => {
                            load = Some(-value[1]);
                        }
                        _ => return fail("the drained group must carry a constant normal load"),
                    }
                }
                Some(FlowBc::Neumann { value, .. }) if *value != 0.0 => return fail("flux boundary data must vanish"),
                _ => {
                    if !matches!(b.mechanics, None | Some(MechanicsBc::Roller)) {
                        return fail("sides and bottom must be rollers");
                    }
                }
            }
        }
        let Some(load) = load else {
            return fail("no drained loaded group");
        };
        let m = &cfg.material;
        if m.source != 0.0 || m.body_force.iter().any(|&f| f != 0.0) {
            return fail("sources and body forces must vanish");
        }
        let (shear, lambda) = m.lame_parameters()?;
        let (lo, hi) = s
            .mesh
            .nodes
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x[1]), b.max(x[1])));
        Ok(Consolidation {
            height: hi - lo,
            load,
            biot: m.biot,
            storage: m.storage,
            permeability: m.permeability,
            shear,
            lambda,
        })
    }

    /// Undrained pressure right after loading, `αw / (c0(Λ + 2G) + α²)`.
    pub fn initial_pressure(&self) -> f64 {
        let m = self.lambda + 2.0 * self.shear;
        self.biot * self.load / (self.storage * m + self.biot * self.biot)
    }

    /// `c_v = K / (c0 + α²/(Λ + 2G))`.
    pub fn coefficient(&self) -> f64 {
        self.permeability / (self.storage + self.biot * self.biot / (self.lambda + 2.0 * self.shear))
    }

    /// Pressure at `depth` below the drained top at time `t`.
    pub fn pressure(&self, depth: f64, t: f64) -> f64 {
        self.pressure_from(self.initial_pressure(), depth, t)
    }

    /// Series solution for a uniform initial pressure `p_init`. Terms are
    /// summed until the next one is below `1e-12 p_init`; at `t = 0` the
    /// initial value is returned directly.
    pub fn pressure_from(&self, p_init: f64, depth: f64, t: f64) -> f64 {
        if t <= 0.0 {
            return if depth > 0.0 { p_init } else { 0.0 };
        }
        let tau = self.coefficient() * t / (self.height * self.height);
        let zeta = depth / self.height;
        let mut sum = 0.0;
        for m in 0.. {
            let k = (2 * m + 1) as f64 * PI / 2.0;
            let amp = 2.0 / k * (-k * k * tau).exp();
            if amp < 1e-12 {
                break;
            }
            sum += amp * (k * zeta).sin();
        }
        p_init * sum
    }

    /// `(Σ m (p − p_ex)²)^½ / (Σ m p_ex²)^½` over cells at the given depths.
    pub fn relative_error(&self, depths: &[f64], weights: &[f64], values: &[f64], t: f64) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for ((&z, &m), &p) in depths.iter().zip(weights).zip(values) {
            let e = self.pressure(z, t);
            num += m * (p - e) * (p - e);
            den += m * e * e;
        }
        (num / den).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConsolidationReport {
    pub cells: usize,
    pub initial_pressure: f64,
    /// Largest simulated pressure after the first step.
    pub first_step_max: f64,
    /// `first_step_max / p0 − 1`, clipped at zero.
    pub overshoot: f64,
    /// Comparison time, in units of `H²/c_v`.
    pub time_fraction: f64,
    pub l2_error: f64,
}

fn final_pressure(s: &Scenario) -> Result<Vec<f64>> {
    let report = run_scenario(s, None)?;
    Ok(report
        .final_state
        .ok_or_else(|| Error::InternalConsistency("consolidation run returned no state".into()))?
        .p)
}

/// Run the built-in column with `cells_deep` cells and steps of
/// `dt_fraction H²/c_v` up to `time_fraction H²/c_v`.
pub fn consolidation_check(cells_deep: usize, dt_fraction: f64, time_fraction: f64) -> Result<ConsolidationReport> {
    let steps = (time_fraction / dt_fraction).round() as usize;
    if steps == 0 {
        return Err(Error::InvalidParameter("comparison time is shorter than one step".into()));
    }
    let first = Scenario::from_config(presets::terzaghi(cells_deep, dt_fraction, 1), Path::new("."))?;
    let column = Consolidation::from_scenario(&first)?;
    let p0 = column.initial_pressure();
    let first_step_max = final_pressure(&first)?.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let full = Scenario::from_config(presets::terzaghi(cells_deep, dt_fraction, steps), Path::new("."))?;
    let p = final_pressure(&full)?;
    let top = full.mesh.nodes.iter().map(|x| x[1]).fold(f64::NEG_INFINITY, f64::max);
    let depths: Vec<f64> = full.mesh.cells.iter().map(|c| top - c.center[1]).collect();
    let weights: Vec<f64> = full.mesh.cells.iter().map(|c| c.volume).collect();
    let t = full.config.time.dt * steps as f64;
    Ok(ConsolidationReport {
        cells: full.mesh.num_cells(),
        initial_pressure: p0,
        first_step_max,
        overshoot: (first_step_max / p0 - 1.0).max(0.0),
        time_fraction: t * column.coefficient() / (column.height * column.height),
        l2_error: column.relative_error(&depths, &weights, &p, t),
    })
}
