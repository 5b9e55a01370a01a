//! Independent checks of the discretization and the contact solver.

pub mod jacobian;
pub mod patch;
pub mod terzaghi;
pub mod verify;

use std::path::Path;
use std::time::Instant;

use crate::assembly::Discretization;
use crate::contact::{kkt_violation, ContactParams, ContactPoint, ContactSet};
use crate::error::Result;
use crate::mesh::structured::BOX_SIDES;
use crate::scenario::config::*;
use crate::scenario::{presets, Scenario};

pub use jacobian::{fd_jacobian_check, jacobian_audit, JacobianAudit, JacobianProbe, StateScales};
pub use patch::{patch_test, AffineField, PatchReport};
pub use terzaghi::{consolidation_check, Consolidation, ConsolidationReport};
pub use verify::{relative_kkt, verify_suite, Check, VerifyReport};

/// Per-contact violation of the contact conditions, in Pa.
pub fn kkt_residual(points: &[ContactPoint], params: &ContactParams) -> Vec<f64> {
    points.iter().map(|p| kkt_violation(p, params)).collect()
}

/// Small 3d box with one inclined disk, flow and dynamic friction.
pub fn audit_box() -> ScenarioConfig {
    let mut c = presets::example2(0);
    c.name = "audit-box".into();
    c.mesh = MeshConfig::Box {
        lo: [0.0; 3],
        hi: [1.0; 3],
        cells: [4, 4, 4],
        fractures: vec![DiskConfig {
            name: "disk".into(),
            center: [0.5, 0.5, 0.5],
            radius: 0.35,
            strike: 30.0,
            dip: 20.0,
        }],
    };
    c.friction = FrictionLaw::Constant { value: 0.5 };
    c.boundary = BOX_SIDES
        .iter()
        .map(|g| BoundaryConfig {
            group: g.to_string(),
            mechanics: Some(MechanicsBc::Dirichlet {
                value: vec![0.0; 3],
                ramp_time: None,
            }),
            flow: Some(FlowBc::Dirichlet {
                value: 0.0,
                ramp_time: None,
            }),
        })
        .collect();
    c.material.flow = true;
    c.material.biot = 1.0;
    c.material.storage = presets::STORAGE;
    c.material.permeability = presets::PERMEABILITY;
    c.time = TimeConfig {
        mode: TimeMode::Dynamic,
        dt: 1.0,
        steps: 1,
    };
    c
}

/// Discretization and contact parameters for the Jacobian audit: the
/// regularized single-fracture square in 2d, [`audit_box`] in 3d.
pub fn audit_setup(dim: usize) -> Result<(Discretization, ContactParams)> {
    let cfg = if dim == 2 { presets::appendix(0, true) } else { audit_box() };
    let s = Scenario::from_config(cfg, Path::new("."))?;
    Ok((s.discretize()?, s.contact_params()))
}

/// Outcome of the Jacobian audit for one dimension and target set.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianCheck {
    pub dim: usize,
    pub target: ContactSet,
    pub audit: JacobianAudit,
    pub seconds: f64,
}

/// Audit all three sets in 2d and 3d with `n_states` states each. The
/// difference step is `1e-6` times the state scale.
pub fn jacobian_suite(n_states: usize, seed: u64) -> Result<Vec<JacobianCheck>> {
    let scales = StateScales {
        u: 1e-3,
        p: 1e6,
        lambda: 1e6,
    };
    let mut out = Vec::new();
    for dim in [2, 3] {
        let (mut disc, params) = audit_setup(dim)?;
        for (i, target) in [ContactSet::Open, ContactSet::Stick, ContactSet::Slide].into_iter().enumerate() {
            let t = Instant::now();
            let audit = jacobian_audit(&mut disc, params, target, &scales, n_states, 1e-6, seed + 10 * dim as u64 + i as u64)?;
            out.push(JacobianCheck {
                dim,
                target,
                audit,
                seconds: t.elapsed().as_secs_f64(),
            });
        }
    }
    Ok(out)
}
