//! Poincaré sections of flows: collect the states where one coordinate
//! crosses zero in the increasing direction.
//!
//! The flow is advanced on the caller's fixed grid; each bracketing step is
//! then refined by bisection on the step size followed by Newton polish in
//! time, landing the section coordinate below `10⁻¹²` in magnitude. The
//! underlying trajectory is the plain fixed-step one — refinement only
//! *observes* crossings, it never alters the marching states, so runs are
//! deterministic and the section points are independent of how many
//! crossings were requested.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::systems::rk::Rk8;

/// Crossings with `|section coordinate|` above this after refinement are a
/// root-finding failure.
pub const SECTION_TOLERANCE: f64 = 1e-12;

/// Crossings with time-derivative magnitude below this are flagged as
/// tangential (the section is not transversal there, so the crossing time
/// is ill-conditioned).
pub const TANGENTIAL_THRESHOLD: f64 = 1e-8;

/// The section points of one run.
#[derive(Clone, Debug)]
pub struct SectionOrbit<R: Real, const D: usize> {
    /// Full states at the crossings, in crossing order.
    pub points: Vec<[R; D]>,
    /// Flow times of the crossings.
    pub times: Vec<R>,
    /// Indices into `points` whose crossing was nearly tangential.
    pub tangential: Vec<usize>,
}

/// Integrates from `y0` with fixed step `h` for at most `max_steps` steps,
/// collecting up to `n_returns` upward zero crossings of state coordinate
/// `coord`. A trajectory that never crosses yields an empty orbit.
pub fn poincare_section<R: Real, const D: usize>(
    f: &impl Fn(R, &[R; D]) -> [R; D],
    y0: &[R; D],
    h: R,
    coord: usize,
    n_returns: usize,
    max_steps: usize,
) -> Result<SectionOrbit<R, D>> {
    if coord >= D {
        return Err(Error::DimensionMismatch {
            expected: D,
            got: coord,
        });
    }
    if !(h > R::zero()) {
        return Err(Error::InvalidParameter("step size must be positive".into()));
    }
    let rk = Rk8::new();
    let mut orbit = SectionOrbit {
        points: Vec::with_capacity(n_returns),
        times: Vec::with_capacity(n_returns),
        tangential: Vec::new(),
    };
    let mut t = R::zero();
    let mut y = *y0;
    for _ in 0..max_steps {
        if orbit.points.len() >= n_returns {
            break;
        }
        let y_next = rk.step(f, t, &y, h);
        if y_next.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState {
                t: (t + h).to_f64(),
            });
        }
        if y[coord] < R::zero() && y_next[coord] >= R::zero() {
            let (dt, state) = refine_crossing(&rk, f, t, &y, h, coord)?;
            let deriv = f(t + dt, &state)[coord];
            if deriv.abs().to_f64() < TANGENTIAL_THRESHOLD {
                orbit.tangential.push(orbit.points.len());
            }
            orbit.times.push(t + dt);
            orbit.points.push(state);
        }
        t = t + h;
        y = y_next;
    }
    Ok(orbit)
}

/// Finds `dt ∈ (0, h]` with `flow(y, dt)[coord] = 0`: bisection brackets the
/// root, then Newton in time (derivative straight from the field) polishes
/// it below [`SECTION_TOLERANCE`].
fn refine_crossing<R: Real, const D: usize>(
    rk: &Rk8<R>,
    f: &impl Fn(R, &[R; D]) -> [R; D],
    t: R,
    y: &[R; D],
    h: R,
    coord: usize,
) -> Result<(R, [R; D])> {
    let probe = |dt: R| rk.step(f, t, y, dt);
    let (mut lo, mut hi) = (R::zero(), h);
    for _ in 0..20 {
        let mid = R::from_f64(0.5) * (lo + hi);
        if probe(mid)[coord] < R::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut dt = hi;
    let mut state = probe(dt);
    for _ in 0..6 {
        let g = state[coord];
        if g.abs().to_f64() < SECTION_TOLERANCE {
            return Ok((dt, state));
        }
        let deriv = f(t + dt, &state)[coord];
        if deriv == R::zero() {
            break;
        }
        dt = dt - g / deriv;
        if !(dt > R::zero() && dt <= h) {
            // Newton escaped the bracket; fall back to its midpoint.
            dt = R::from_f64(0.5) * (lo + hi);
        }
        state = probe(dt);
    }
    if state[coord].abs().to_f64() < SECTION_TOLERANCE {
        Ok((dt, state))
    } else {
        Err(Error::RootFinding(format!(
            "section crossing refinement stalled at |g| = {:e}",
            state[coord].abs().to_f64()
        )))
    }
}
