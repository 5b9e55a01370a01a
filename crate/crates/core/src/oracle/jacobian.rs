//! Finite-difference audit of the linearized contact rows.
//!
//! The contact rows of a Newton system are the linearization of a scaled
//! residual: `λ` on open contacts, and `S C(x)` on stick and slide contacts
//! with `C` the complementarity functions and `S` a scaling frozen at the
//! linearization point. Bulk rows are linear.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assembly::{Discretization, State, StepData};
use crate::contact::{evaluate_complementarity, regularize_sliding_rows, ContactParams, ContactPoint, ContactSet};
use crate::error::{Error, Result};
use crate::solver::SparseSystem;

/// Relative distance to a set switch below which a contact is left out.
pub const GUARD_BAND: f64 = 1e-6;

/// Why a contact was left out of an audit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exclusion {
    /// Within the guard band of another set.
    NearSwitch,
    /// Sliding rows with an active regularization, which are not an exact
    /// linearization.
    Regularized,
}

/// Frozen row scaling of one contact at the linearization point.
#[derive(Clone, Debug)]
struct Frozen {
    set: ContactSet,
    normal: f64,
    tangential: DMatrix<f64>,
}

fn freeze(point: &ContactPoint, set: ContactSet, params: &ContactParams) -> Result<std::result::Result<Frozen, Exclusion>> {
    let k = point.tangents.len();
    let c = params.c;
    let b = point.bound(params);
    let w = point.driver(params);
    let lt = point.lambda_t().norm();
    let scale_b = point.friction * (point.lambda_n().abs() + c * (point.jump_n() - point.gap).abs()) + f64::MIN_POSITIVE;
    let scale = scale_b + lt + c * point.velocity_t(params).norm();
    let band = |x: f64, s: f64| x > GUARD_BAND * s;
    let frozen = |normal: f64, tangential: DMatrix<f64>| Ok(Ok(Frozen { set, normal, tangential }));
    match set {
        ContactSet::Open => {
            if !band(-b, scale_b) {
                return Ok(Err(Exclusion::NearSwitch));
            }
            frozen(1.0, DMatrix::identity(k, k))
        }
        ContactSet::Stick => {
            if !band(b, scale_b) || !band(b - w.norm(), scale) {
                return Ok(Err(Exclusion::NearSwitch));
            }
            frozen(-1.0 / c, DMatrix::identity(k, k) * (-1.0 / (c * b)))
        }
        ContactSet::Slide => {
            if !band(b, scale_b) || !band(w.norm() - b, scale) {
                return Ok(Err(Exclusion::NearSwitch));
            }
            let st = regularize_sliding_rows(point, params)?;
            if st.beta != 1.0 || !band(b - lt, scale_b) || (lt > 0.0 && !band(st.alpha, 1.0)) {
                return Ok(Err(Exclusion::Regularized));
            }
            let a = DMatrix::identity(k, k) - &st.m;
            let a_inv = a
                .try_inverse()
                .ok_or_else(|| Error::InternalConsistency("singular sliding matrix".into()))?;
            frozen(-1.0 / c, a_inv * (-1.0 / w.norm()))
        }
    }
}

/// Scaled residual of one contact, normal entry first.
fn scaled_residual(point: &ContactPoint, f: &Frozen, params: &ContactParams) -> Result<Vec<f64>> {
    if f.set == ContactSet::Open {
        let mut r = vec![point.lambda_n()];
        r.extend(point.lambda_t().iter());
        return Ok(r);
    }
    let (cn, ct) = evaluate_complementarity(point, params)?;
    let t: DVector<f64> = &f.tangential * ct;
    let mut r = vec![f.normal * cn];
    r.extend(t.iter());
    Ok(r)
}

/// Residual rows of the included contacts, keyed by global row.
fn contact_residual(
    disc: &Discretization,
    step: &StepData,
    state: &State,
    frozen: &[Option<Frozen>],
) -> Result<Vec<(usize, f64)>> {
    let points = disc.contact_points(state, step)?;
    let mut out = Vec::new();
    for (c, (pt, f)) in points.iter().zip(frozen).enumerate() {
        if let Some(f) = f {
            for (r, v) in scaled_residual(pt, f, &step.contact)?.into_iter().enumerate() {
                out.push((disc.layout.lambda(c, r), v));
            }
        }
    }
    Ok(out)
}

/// Result of probing one state.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct JacobianProbe {
    /// Largest `|FD − J d| / Σ|J_ij d_j|` over included rows and probes.
    pub mismatch: f64,
    /// Largest deviation between the assembled rows at the state and the
    /// scaled residual, relative to the row magnitude.
    pub consistency: f64,
    /// Included contacts per set (open, stick, slide).
    pub checked: [usize; 3],
    pub near_switch: usize,
    pub regularized: usize,
}

fn set_index(s: ContactSet) -> usize {
    match s {
        ContactSet::Open => 0,
        ContactSet::Stick => 1,
        ContactSet::Slide => 2,
    }
}

fn row_magnitudes(sys: &SparseSystem, x: &[f64]) -> Vec<f64> {
    let mut m = vec![0.0; sys.n];
    for &(r, c, v) in &sys.entries {
        m[r] += (v * x[c]).abs();
    }
    m
}

fn axpy(state: &State, dir: &State, h: f64) -> State {
    let add = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + h * y).collect();
    State {
        u: add(&state.u, &dir.u),
        p: add(&state.p, &dir.p),
        lambda: add(&state.lambda, &dir.lambda),
    }
}

/// Compare central differences of the residual along `directions` with the
/// assembled Newton matrix at `state` for the given sets. Contacts near a
/// set switch or with regularized sliding rows are left out and counted.
pub fn fd_jacobian_check(
    disc: &Discretization,
    step: &StepData,
    state: &State,
    sets: &[ContactSet],
    directions: &[State],
    h: f64,
) -> Result<JacobianProbe> {
    let lay = disc.layout;
    let points = disc.contact_points(state, step)?;
    if sets.len() != points.len() {
        return Err(Error::Contract("one set per contact expected".into()));
    }
    let mut probe = JacobianProbe::default();
    let mut frozen = Vec::with_capacity(points.len());
    for (pt, &s) in points.iter().zip(sets) {
        match freeze(pt, s, &step.contact)? {
            Ok(f) => {
                probe.checked[set_index(s)] += 1;
                frozen.push(Some(f));
            }
            Err(Exclusion::NearSwitch) => {
                probe.near_switch += 1;
                frozen.push(None);
            }
            Err(Exclusion::Regularized) => {
                probe.regularized += 1;
                frozen.push(None);
            }
        }
    }
    let (sys, _) = disc.assemble(state, step, Some(sets))?;
    let bulk = disc.bulk_system(step)?;
    let n_bulk = lay.n_u() + lay.n_p();
    let x = state.pack(&lay);
    let residual = |s: &State| -> Result<Vec<(usize, f64)>> {
        let y = s.pack(&lay);
        let ay = bulk.apply(&y);
        let mut r: Vec<(usize, f64)> = (0..n_bulk).map(|i| (i, ay[i] - bulk.rhs[i])).collect();
        r.extend(contact_residual(disc, step, s, &frozen)?);
        Ok(r)
    };

    let jx = sys.apply(&x);
    let mag = row_magnitudes(&sys, &x);
    for (i, v) in residual(state)? {
        let scale = mag[i] + sys.rhs[i].abs() + f64::MIN_POSITIVE;
        probe.consistency = probe.consistency.max((jx[i] - sys.rhs[i] - v).abs() / scale);
    }
    for dir in directions {
        let d = dir.pack(&lay);
        let jd = sys.apply(&d);
        let mag = row_magnitudes(&sys, &d);
        let plus = residual(&axpy(state, dir, h))?;
        let minus = residual(&axpy(state, dir, -h))?;
        for ((i, a), (_, b)) in plus.into_iter().zip(minus) {
            if mag[i] == 0.0 {
                continue;
            }
            let fd = (a - b) / (2.0 * h);
            probe.mismatch = probe.mismatch.max((fd - jd[i]).abs() / mag[i]);
        }
    }
    Ok(probe)
}

/// Magnitudes of random states: displacement in m, pressure and traction in Pa.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateScales {
    pub u: f64,
    pub p: f64,
    pub lambda: f64,
}

pub fn random_state(disc: &Discretization, scales: &StateScales, rng: &mut impl Rng) -> State {
    let lay = disc.layout;
    let mut draw = |n: usize, s: f64| (0..n).map(|_| rng.random_range(-1.0..1.0) * s).collect::<Vec<f64>>();
    State {
        u: draw(lay.n_u(), scales.u),
        p: draw(lay.n_cells, scales.p),
        lambda: draw(lay.n_contacts * lay.dim, scales.lambda),
    }
}

/// Reset the gaps so that every contact classifies as `target` at `state`.
/// Gaps do not enter the bulk discretization, so this steers the contact
/// sets without touching `state`. Sliding targets place the bound between
/// `‖λ_τ‖` and `‖w‖` when that interval is non-empty.
pub fn steer_gaps(disc: &mut Discretization, step: &StepData, state: &State, target: ContactSet, rng: &mut impl Rng) -> Result<()> {
    let points = disc.contact_points(state, step)?;
    let c = step.contact.c;
    for (k, pt) in points.iter().enumerate() {
        let w = pt.driver(&step.contact).norm();
        let lt = pt.lambda_t().norm();
        let scale = pt.lambda_n().abs() + lt + w;
        let b = match target {
            ContactSet::Open => -rng.random_range(0.5..1.5) * scale,
            ContactSet::Stick => w * rng.random_range(1.5..3.0) + 0.1 * scale,
            ContactSet::Slide => {
                if lt < w {
                    lt + (w - lt) * rng.random_range(0.2..0.8)
                } else {
                    0.5 * w
                }
            }
        };
        disc.pairing.gap[k] = pt.jump_n() - (b / pt.friction + pt.lambda_n()) / c;
    }
    Ok(())
}

/// Summary of an audit over many random states.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct JacobianAudit {
    pub states: usize,
    pub mismatch: f64,
    pub consistency: f64,
    pub checked: [usize; 3],
    pub near_switch: usize,
    pub regularized: usize,
}

/// Draw `n_states` random states, steer every contact into `target`, and
/// probe each along three random directions with a relative step `h`.
pub fn jacobian_audit(
    disc: &mut Discretization,
    params: ContactParams,
    target: ContactSet,
    scales: &StateScales,
    n_states: usize,
    h: f64,
    seed: u64,
) -> Result<JacobianAudit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = crate::fvm::BoundaryValues::zeros(disc.subgrid.num_subfaces());
    let mut audit = JacobianAudit::default();
    for _ in 0..n_states {
        let previous = random_state(disc, scales, &mut rng);
        let state = random_state(disc, scales, &mut rng);
        let step = StepData {
            values: &values,
            previous: &previous,
            previous_values: &values,
            dt: params.dt,
            contact: params,
        };
        steer_gaps(disc, &step, &state, target, &mut rng)?;
        let points = disc.contact_points(&state, &step)?;
        let sets = disc.classify(&points, &params);
        let directions: Vec<State> = (0..3).map(|_| random_state(disc, scales, &mut rng)).collect();
        let probe = fd_jacobian_check(disc, &step, &state, &sets, &directions, h)?;
        audit.states += 1;
        audit.mismatch = audit.mismatch.max(probe.mismatch);
        audit.consistency = audit.consistency.max(probe.consistency);
        for i in 0..3 {
            audit.checked[i] += probe.checked[i];
        }
        audit.near_switch += probe.near_switch;
        audit.regularized += probe.regularized;
    }
    Ok(audit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::audit_setup;
    use crate::scenario::{presets, Scenario};

    const SCALES: StateScales = StateScales {
        u: 1e-3,
        p: 1e6,
        lambda: 1e6,
    };

    fn probe_linear(disc: &mut Discretization, params: ContactParams, target: ContactSet) -> JacobianProbe {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let values = crate::fvm::BoundaryValues::zeros(disc.subgrid.num_subfaces());
        let previous = random_state(disc, &SCALES, &mut rng);
        let state = random_state(disc, &SCALES, &mut rng);
        let step = StepData {
            values: &values,
            previous: &previous,
            previous_values: &values,
            dt: params.dt,
            contact: params,
        };
        steer_gaps(disc, &step, &state, target, &mut rng).unwrap();
        let points = disc.contact_points(&state, &step).unwrap();
        let sets = disc.classify(&points, &params);
        let dirs: Vec<State> = (0..2).map(|_| random_state(disc, &SCALES, &mut rng)).collect();
        // Linear rows: a unit step is exact up to rounding.
        fd_jacobian_check(disc, &step, &state, &sets, &dirs, 1.0).unwrap()
    }

    #[test]
    fn flow_only_rows_are_exact() {
        let s = Scenario::from_config(presets::terzaghi(8, 1e-3, 1), std::path::Path::new(".")).unwrap();
        let mut disc = s.discretize().unwrap();
        let p = probe_linear(&mut disc, s.contact_params(), ContactSet::Open);
        assert!(p.mismatch < 1e-10, "{p:?}");
        assert_eq!(p.checked, [0, 0, 0]);
    }

    #[test]
    fn open_rows_are_exact() {
        let (mut disc, params) = audit_setup(2).unwrap();
        let p = probe_linear(&mut disc, params, ContactSet::Open);
        assert!(p.mismatch < 1e-10, "{p:?}");
        assert_eq!(p.checked[0], disc.layout.n_contacts);
    }

    #[test]
    fn smooth_sliding_states_match() {
        let (mut disc, params) = audit_setup(2).unwrap();
        let a = jacobian_audit(&mut disc, params, ContactSet::Slide, &SCALES, 3, 1e-6, 9).unwrap();
        assert!(a.checked[2] > 0);
        assert!(a.mismatch < 1e-5, "{a:?}");
        assert!(a.consistency < 1e-10, "{a:?}");
    }

    #[test]
    fn steering_reaches_every_set() {
        let (mut disc, params) = audit_setup(2).unwrap();
        for target in [ContactSet::Open, ContactSet::Stick] {
            let a = jacobian_audit(&mut disc, params, target, &SCALES, 1, 1e-7, 2).unwrap();
            assert_eq!(a.checked.iter().sum::<usize>(), disc.layout.n_contacts, "{target:?}");
        }
    }
}
