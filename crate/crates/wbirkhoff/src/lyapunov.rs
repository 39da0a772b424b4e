//! Weighted Lyapunov exponents for two-dimensional maps.
//!
//! The largest exponent λ₂ is the weighted Birkhoff average of the
//! per-step log-stretch `ln‖v_n‖` along the renormalized tangent
//! push-forward `v_n = DT(x_{n−1}) v̂_{n−1}`, `v̂ = v/‖v‖`; the exponent sum
//! λ₁ + λ₂ is the weighted Birkhoff average of `ln|det DT(x_n)|`, an
//! ordinary observable, so it inherits super-polynomial convergence on
//! quasiperiodic orbits outright. λ₁ comes from the difference. (Exponents
//! are numbered ascending, λ₁ ≤ λ₂.)
//!
//! The tangent vector is renormalized every step: the exponents of interest
//! here are near zero, so overflow is not the concern — keeping every
//! `ln‖v_n‖` well-scaled is, and per-step normalization matches the
//! recursion the averages are defined over.
//!
//! The power-iteration argument behind λ₂ needs a generic start vector: a
//! `v0` exactly on an invariant contracting line converges to the *smaller*
//! exponent instead. Almost every vector works; steer clear of known
//! eigdirections when a constant Jacobian is involved.

use crate::averaging::wb_average;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::weights::WeightKind;

/// The log-stretch record of one renormalized tangent push-forward.
///
/// Only the per-step log-stretches and the final unit direction are kept:
/// the intermediate vectors are cheap to regenerate and storing them would
/// dominate memory on long orbits.
#[derive(Clone, Debug)]
pub struct TangentTrajectory<R: Real> {
    log_stretch: Vec<R>,
    final_direction: [R; 2],
}

impl<R: Real> TangentTrajectory<R> {
    /// `ln‖v_n‖` for `n = 1..N−1`: entry `m` is the log-stretch of the
    /// push-forward across step `m` of the orbit.
    pub fn log_stretch(&self) -> &[R] {
        &self.log_stretch
    }

    /// The unit tangent direction after the last push-forward.
    pub fn final_direction(&self) -> [R; 2] {
        self.final_direction
    }

    /// Number of push-forward steps taken (orbit length − 1).
    pub fn n_steps(&self) -> usize {
        self.log_stretch.len()
    }
}

fn mat_vec<R: Real>(m: &[[R; 2]; 2], v: [R; 2]) -> [R; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

fn norm<R: Real>(v: [R; 2]) -> R {
    (v[0] * v[0] + v[1] * v[1]).sqrt()
}

/// Runs the renormalized push-forward `v_n = DT(x_{n−1}) v̂_{n−1}` along an
/// orbit, recording `ln‖v_n‖` at every step. `v0` is normalized internally
/// and must be nonzero.
pub fn tangent_trajectory<R: Real>(
    orbit: &[[R; 2]],
    jacobian: impl Fn(&[R; 2]) -> [[R; 2]; 2],
    v0: [R; 2],
) -> Result<TangentTrajectory<R>> {
    if orbit.len() < 3 {
        return Err(Error::TooShort {
            need: 3,
            got: orbit.len(),
        });
    }
    let n0 = norm(v0);
    if !(n0 > R::zero()) || !n0.is_finite() {
        return Err(Error::InvalidParameter(
            "tangent start vector must be nonzero and finite".into(),
        ));
    }
    let mut dir = [v0[0] / n0, v0[1] / n0];
    let mut log_stretch = Vec::with_capacity(orbit.len() - 1);
    for (step, x) in orbit[..orbit.len() - 1].iter().enumerate() {
        let v = mat_vec(&jacobian(x), dir);
        let s = norm(v);
        if !s.is_finite() {
            return Err(Error::NonFinite { index: step });
        }
        if s == R::zero() {
            return Err(Error::SingularDerivative { step });
        }
        log_stretch.push(s.ln());
        dir = [v[0] / s, v[1] / s];
    }
    Ok(TangentTrajectory {
        log_stretch,
        final_direction: dir,
    })
}

/// Largest Lyapunov exponent λ₂: the weighted Birkhoff average of the
/// log-stretch sequence of [`tangent_trajectory`] from the (generic)
/// start vector `v0`.
pub fn lyapunov_max<R: Real>(
    orbit: &[[R; 2]],
    jacobian: impl Fn(&[R; 2]) -> [[R; 2]; 2],
    v0: [R; 2],
    kind: WeightKind,
) -> Result<R> {
    let tangent = tangent_trajectory(orbit, jacobian, v0)?;
    wb_average(tangent.log_stretch(), kind)
}

/// Exponent sum λ₁ + λ₂: the weighted Birkhoff average of
/// `ln|det DT(x_n)|` over the orbit points.
pub fn lyapunov_sum<R: Real>(
    orbit: &[[R; 2]],
    jacobian: impl Fn(&[R; 2]) -> [[R; 2]; 2],
    kind: WeightKind,
) -> Result<R> {
    if orbit.len() < 3 {
        return Err(Error::TooShort {
            need: 3,
            got: orbit.len(),
        });
    }
    let mut logs = Vec::with_capacity(orbit.len());
    for (step, x) in orbit.iter().enumerate() {
        let m = jacobian(x);
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if !det.is_finite() {
            return Err(Error::NonFinite { index: step });
        }
        if det == R::zero() {
            return Err(Error::ZeroDeterminant { step });
        }
        logs.push(det.abs().ln());
    }
    wb_average(&logs, kind)
}

/// Both exponents, ascending: λ₂ from [`lyapunov_max`], λ₁ as
/// [`lyapunov_sum`] − λ₂.
pub fn lyapunov_pair<R: Real>(
    orbit: &[[R; 2]],
    jacobian: impl Fn(&[R; 2]) -> [[R; 2]; 2],
    v0: [R; 2],
    kind: WeightKind,
) -> Result<(R, R)> {
    let l2 = lyapunov_max(orbit, &jacobian, v0, kind)?;
    let sum = lyapunov_sum(orbit, &jacobian, kind)?;
    Ok((sum - l2, l2))
}
