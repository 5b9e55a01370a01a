//! Complementarity functions, active-set classification and linearized
//! contact rows for nonpenetration with Coulomb friction.
//!
//! Per positive subface the multiplier `λ` is the traction on the positive
//! side, `n` the outward normal of the positive side and
//! `[u] = u⁺ − u⁻`. Tangential quantities are coordinates in a fixed
//! orthonormal basis of the tangent plane (one vector in 2d, two in 3d).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::mesh::geometry::tangent_basis;
use crate::mesh::Point;

/// Default penalty-like parameter `c`, in Pa/m.
pub const DEFAULT_C: f64 = 100e9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ContactSet {
    /// Not in contact (`I_n`).
    Open,
    /// In contact and sticking (`I_τ`).
    Stick,
    /// In contact and sliding (`A`).
    Slide,
}

impl ContactSet {
    pub fn label(&self) -> &'static str {
        match self {
            ContactSet::Open => "open",
            ContactSet::Stick => "stick",
            ContactSet::Slide => "slide",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContactParams {
    pub c: f64,
    /// Use jump velocities `([u] − [u]ⁱ)/Δt`; otherwise the jump itself.
    pub dynamic: bool,
    pub dt: f64,
}

impl Default for ContactParams {
    fn default() -> Self {
        ContactParams {
            c: DEFAULT_C,
            dynamic: false,
            dt: 1.0,
        }
    }
}

/// Frozen data of one positive subface at a Newton iterate.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactPoint {
    pub normal: Point,
    pub tangents: Vec<Point>,
    pub friction: f64,
    pub gap: f64,
    pub lambda: Point,
    pub jump: Point,
    /// Jump at the previous time step.
    pub jump_prev: Point,
}

impl ContactPoint {
    pub fn new(normal: Point, dim: usize, friction: f64, gap: f64) -> Self {
        ContactPoint {
            normal,
            tangents: tangent_basis(&normal, dim),
            friction,
            gap,
            lambda: Point::zeros(),
            jump: Point::zeros(),
            jump_prev: Point::zeros(),
        }
    }

    pub fn dim(&self) -> usize {
        self.tangents.len() + 1
    }

    fn tangential(&self, v: &Point) -> DVector<f64> {
        DVector::from_iterator(self.tangents.len(), self.tangents.iter().map(|t| t.dot(v)))
    }

    pub fn lambda_n(&self) -> f64 {
        self.lambda.dot(&self.normal)
    }

    pub fn lambda_t(&self) -> DVector<f64> {
        self.tangential(&self.lambda)
    }

    pub fn jump_n(&self) -> f64 {
        self.jump.dot(&self.normal)
    }

    pub fn jump_t(&self) -> DVector<f64> {
        self.tangential(&self.jump)
    }

    /// Tangential jump velocity, or the tangential jump in static mode.
    pub fn velocity_t(&self, params: &ContactParams) -> DVector<f64> {
        if params.dynamic {
            self.tangential(&((self.jump - self.jump_prev) / params.dt))
        } else {
            self.jump_t()
        }
    }

    /// Friction bound `b = F(−λ_n + c([u]_n − g))`.
    pub fn bound(&self, params: &ContactParams) -> f64 {
        self.friction * (-self.lambda_n() + params.c * (self.jump_n() - self.gap))
    }

    /// Sliding driver `w = −λ_τ + c[u̇]_τ`.
    pub fn driver(&self, params: &ContactParams) -> DVector<f64> {
        -self.lambda_t() + self.velocity_t(params) * params.c
    }
}

fn check_params(point: &ContactPoint, params: &ContactParams) -> Result<()> {
    if !(point.friction > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "friction coefficient must be positive, got {}",
            point.friction
        )));
    }
    if !(params.c > 0.0) {
        return Err(Error::InvalidParameter(format!("c must be positive, got {}", params.c)));
    }
    if params.dynamic && !(params.dt > 0.0) {
        return Err(Error::InvalidParameter(format!("time step must be positive, got {}", params.dt)));
    }
    Ok(())
}

/// `(C_n, C_τ)`; both vanish exactly when the contact conditions hold.
pub fn evaluate_complementarity(point: &ContactPoint, params: &ContactParams) -> Result<(f64, DVector<f64>)> {
    check_params(point, params)?;
    let b = point.bound(params);
    let w = point.driver(params);
    let cn = -point.lambda_n() - b.max(0.0) / point.friction;
    let ct = -point.lambda_t() * b.max(w.norm()) - &w * b.max(0.0);
    Ok((cn, ct))
}

/// Active-set label for the next iterate. Equality `‖w‖ = b` goes to `Slide`.
pub fn classify(point: &ContactPoint, params: &ContactParams) -> ContactSet {
    let b = point.bound(params);
    if !(b > 0.0) {
        ContactSet::Open
    } else if point.driver(params).norm() < b {
        ContactSet::Stick
    } else {
        ContactSet::Slide
    }
}

/// Sliding-row quantities, regularized so that `L` has nonnegative spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct SlidingTerms {
    pub b: f64,
    pub e: f64,
    pub q: DMatrix<f64>,
    pub m: DMatrix<f64>,
    pub l: DMatrix<f64>,
    pub v: DVector<f64>,
    pub r: DVector<f64>,
    pub alpha: f64,
    pub delta: f64,
    pub beta: f64,
}

pub fn regularize_sliding_rows(point: &ContactPoint, params: &ContactParams) -> Result<SlidingTerms> {
    check_params(point, params)?;
    let k = point.tangents.len();
    let b = point.bound(params);
    let lt = point.lambda_t();
    let w = point.driver(params);
    let wn = w.norm();
    if !(b > 0.0) || !(wn > 0.0) {
        return Err(Error::InternalConsistency(format!(
            "sliding row requested with b = {b:e}, |w| = {wn:e}"
        )));
    }
    let ltn = lt.norm();
    let e = b / wn;
    let q = (-&lt) * w.transpose() / (b.max(ltn) * wn);
    let alpha = if ltn > 0.0 { (-&lt).dot(&w) / (ltn * wn) } else { 0.0 };
    let delta = (ltn / b).min(1.0);
    let beta = if alpha < 0.0 { 1.0 / (1.0 - alpha * delta) } else { 1.0 };
    let eye = DMatrix::<f64>::identity(k, k);
    let m = (&eye - &q) * e;
    let a = &eye - &m * beta;
    let a_inv = a.clone().lu().try_inverse().ok_or_else(|| {
        Error::InternalConsistency(format!("singular sliding matrix (e = {e}, beta = {beta})"))
    })?;
    if a_inv.iter().any(|x| !x.is_finite()) || a.determinant().abs() < 1e-14 {
        return Err(Error::InternalConsistency(format!(
            "singular sliding matrix (e = {e}, beta = {beta})"
        )));
    }
    let l = (&a_inv - &eye) * params.c;
    let v = &a_inv * (&w / wn);
    let r = -(&a_inv * (&q * &w)) * e;
    Ok(SlidingTerms {
        b,
        e,
        q,
        m,
        l,
        v,
        r,
        alpha,
        delta,
        beta,
    })
}

/// One linear contact equation: `jump · [u]' + lambda · λ' = rhs` with
/// Cartesian coefficient vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactRow {
    pub jump: Point,
    pub lambda: Point,
    pub rhs: f64,
}

/// The `dim` linearized rows of one subface. Row 0 is the normal condition,
/// rows `1..dim` the tangential ones.
///
/// Friction-bound increments enter through `b' = F(−λ_n' + c([u]_n' − g))`,
/// so with the normal row `[u]_n' = g` the tangential rows reduce to the
/// classical form `λ_τ' + L[u̇]_τ' − F v λ_n' = r + b v`.
pub fn linearize_contact_rows(point: &ContactPoint, set: ContactSet, params: &ContactParams) -> Result<Vec<ContactRow>> {
    check_params(point, params)?;
    let n = point.normal;
    let f = point.friction;
    let c = params.c;
    let mut rows = Vec::with_capacity(point.dim());
    if set == ContactSet::Open {
        rows.push(ContactRow {
            jump: Point::zeros(),
            lambda: n,
            rhs: 0.0,
        });
        for t in &point.tangents {
            rows.push(ContactRow {
                jump: Point::zeros(),
                lambda: *t,
                rhs: 0.0,
            });
        }
        return Ok(rows);
    }
    rows.push(ContactRow {
        jump: n,
        lambda: Point::zeros(),
        rhs: point.gap,
    });
    // Velocity in terms of the new jump: u̇' = s (tᵀ[u]') − offset.
    let (scale, prev) = if params.dynamic {
        (1.0 / params.dt, point.tangential(&point.jump_prev) / params.dt)
    } else {
        (1.0, DVector::zeros(point.tangents.len()))
    };
    let b = point.bound(params);
    // Coefficients of b' on λ and [u], and its constant part.
    let db_lambda = -f * n;
    let db_jump = f * c * n;
    let db_const = -f * c * point.gap;
    match set {
        ContactSet::Stick => {
            let ut = point.velocity_t(params);
            for (a, t) in point.tangents.iter().enumerate() {
                // A stick label forced on a point without a positive bound
                // (the first iteration from rest) enforces zero velocity.
                let g = if b > 0.0 { ut[a] / b } else { 0.0 };
                rows.push(ContactRow {
                    jump: t * scale + db_jump * g,
                    lambda: db_lambda * g,
                    rhs: if b > 0.0 { ut[a] } else { 0.0 } + prev[a] - g * db_const,
                });
            }
        }
        ContactSet::Slide => {
            let st = regularize_sliding_rows(point, params)?;
            for (a, t) in point.tangents.iter().enumerate() {
                let mut jump = db_jump * st.v[a];
                let mut rhs = st.r[a] + b * st.v[a] - st.v[a] * db_const;
                for (bi, tb) in point.tangents.iter().enumerate() {
                    jump += tb * (st.l[(a, bi)] * scale);
                    rhs += st.l[(a, bi)] * prev[bi];
                }
                rows.push(ContactRow {
                    jump,
                    lambda: t + db_lambda * st.v[a],
                    rhs,
                });
            }
        }
        ContactSet::Open => unreachable!(),
    }
    Ok(rows)
}

/// Largest violation of the contact conditions at one subface, in traction
/// units (displacement quantities are scaled by `c`).
pub fn kkt_violation(point: &ContactPoint, params: &ContactParams) -> f64 {
    let c = params.c;
    let ln = point.lambda_n();
    let gap = point.jump_n() - point.gap;
    let lt = point.lambda_t();
    let ut = point.velocity_t(params);
    let limit = point.friction * ln.abs();
    let speed = c * ut.norm();
    let mut worst = ln.max(0.0).max(c * gap.max(0.0));
    worst = worst.max(ln.abs().min(c * gap.abs()));
    worst = worst.max(lt.norm() - limit);
    worst = worst.max((limit - lt.norm()).max(0.0).min(speed));
    if speed > 0.0 {
        let opposed = &lt + &ut * (limit / ut.norm());
        worst = worst.max(opposed.norm().min(speed));
    }
    worst.max(0.0)
}
