//! The oracle suite behind the `verify` command.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use super::{consolidation_check, jacobian_suite, patch, patch_test, AffineField};
use crate::error::Result;
use crate::io::{num, Table};
use crate::scenario::{presets, run_scenario, RunReport, Scenario};

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
    pub seconds: f64,
    pub detail: String,
}

impl Check {
    /// Passes when `value <= limit`.
    pub fn at_most(name: &str, value: f64, limit: f64, seconds: f64, detail: String) -> Self {
        Check {
            name: name.into(),
            value,
            limit,
            pass: value <= limit,
            seconds,
            detail,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{} {}: {:.3e} (limit {:.3e}, {:.2} s) {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.value,
                c.limit,
                c.seconds,
                c.detail
            );
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        let _ = writeln!(s, "{} checks, {} failed", self.checks.len(), failed);
        s
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["check", "value", "limit", "pass", "seconds"]);
        for c in &self.checks {
            t.push(vec![
                c.name.clone(),
                num(c.value),
                num(c.limit),
                c.pass.to_string(),
                num(c.seconds),
            ]);
        }
        t
    }
}

/// Largest `kkt / traction scale` over all steps of a run.
pub fn relative_kkt(report: &RunReport) -> f64 {
    report
        .steps
        .iter()
        .map(|s| s.newton.kkt / s.newton.traction_scale)
        .fold(0.0, f64::max)
}

fn run_preset(cfg: crate::scenario::ScenarioConfig) -> Result<RunReport> {
    run_scenario(&Scenario::from_config(cfg, Path::new("."))?, None)
}

/// Patch tests, linear-case Newton, consolidation, Jacobian and KKT audits.
/// `states` is the number of random states per set in the Jacobian audit.
pub fn verify_suite(states: usize) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    let material = patch::unit_material();

    for (name, dim, mesh) in [
        ("patch-2d", 2, patch::unstructured_square()?),
        ("patch-3d", 3, patch::jittered_cube(3)?),
    ] {
        let t = Instant::now();
        let mut worst = 0.0f64;
        for seed in 0..3 {
            worst = worst.max(patch_test(&mesh, &material, &AffineField::random(dim, seed))?.max());
        }
        let detail = format!("{} cells, 3 random fields", mesh.num_cells());
        report.checks.push(Check::at_most(name, worst, 1e-10, t.elapsed().as_secs_f64(), detail));
    }

    let t = Instant::now();
    let run = run_preset(presets::terzaghi(10, 1e-3, 3))?;
    let most = run.iterations().into_iter().max().unwrap_or(0);
    report.checks.push(Check::at_most(
        "linear-newton",
        most as f64,
        1.0,
        t.elapsed().as_secs_f64(),
        "largest iteration count without fractures".into(),
    ));

    let t = Instant::now();
    let c = consolidation_check(50, 1e-3, 0.1)?;
    let s = t.elapsed().as_secs_f64();
    report.checks.push(Check::at_most("consolidation-l2", c.l2_error, 0.02, s, format!("{} cells", c.cells)));
    report.checks.push(Check::at_most(
        "consolidation-overshoot",
        c.overshoot,
        0.05,
        s,
        format!("p0 {:.6e} Pa, first step max {:.6e} Pa", c.initial_pressure, c.first_step_max),
    ));

    for check in jacobian_suite(states, 1)? {
        let a = &check.audit;
        report.checks.push(Check::at_most(
            &format!("jacobian-{}d-{}", check.dim, check.target.label()),
            a.mismatch,
            1e-5,
            check.seconds,
            format!(
                "{} states, {} contacts checked, {} near a switch, {} regularized",
                a.states,
                a.checked.iter().sum::<usize>(),
                a.near_switch,
                a.regularized
            ),
        ));
    }

    for (name, cfg) in [
        ("kkt-example1", presets::example1(0)),
        ("kkt-appendix", presets::appendix(0, true)),
        ("kkt-appendix-constant", presets::appendix(0, false)),
    ] {
        let t = Instant::now();
        let run = run_preset(cfg)?;
        report.checks.push(Check::at_most(
            name,
            relative_kkt(&run),
            1e-8,
            t.elapsed().as_secs_f64(),
            format!("newton iterations {:?}", run.iterations()),
        ));
    }
    Ok(report)
}
