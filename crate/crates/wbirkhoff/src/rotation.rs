//! Lifting angle sequences off the torus and estimating rotation vectors.
//!
//! An orbit on the `d`-torus is a sequence of angles in `[0,1)^d`. To average
//! its motion one first *lifts* it to `ℝ^d`, which requires choosing an
//! integer branch for every angular increment. A fixed convention (nearest
//! representative, or always-positive) silently mis-branches whenever the
//! true increments cross its cut: an angle observed through a strongly
//! distorted coordinate can advance anywhere from slightly backward to most
//! of a turn in one step, even though its mean rotation is moderate. The cut
//! must therefore be placed where the data is not.
//!
//! Each component's raw increments are reduced mod 1 and the branch cut goes
//! through the midpoint of the largest empty arc of that circle of values.
//! For any orbit conjugate to a rigid rotation the true per-step increments
//! occupy an arc shorter than a full turn, the complement of which shows up
//! as exactly that empty arc, so every step lands on its true branch. The
//! common integer offset is then fixed by centering the occupied arc in
//! `(−½, ½]`, which keeps the familiar small-increment behaviour (a step of
//! 0.9 is stored as −0.1).
//!
//! The rotation vector is the weighted Birkhoff average of the lifted
//! per-step increments, reduced back into `[0,1)^d`. With a smooth weight
//! kind this estimate converges super-polynomially in the orbit length for
//! Diophantine rotations — far beyond the `1/N` of the naive average.

use crate::averaging::wb_average;
use crate::error::{Error, Result};
use crate::real::{PrecisionTier, Real};
use crate::reduce::PairwiseSum;
use crate::weights::WeightKind;

/// Branch confidence limit: the largest empty arc in a component's increment
/// distribution must beat the runner-up arc by at least this factor, or the
/// arc identification (and with it every branch choice) is guesswork. A
/// genuine quasiperiodic orbit fills its increment arc densely, so interior
/// gaps shrink with orbit length while the complement stays; a ratio near 1
/// means the data shows no preferred arc at all.
pub const LIFT_GAP_RATIO_LIMIT: f64 = 0.5;

/// A torus orbit together with its lift.
///
/// The lift is stored in increment form: `lift_0 = angles_0` and
/// `lift_{n+1} = lift_n + increment_n` hold *exactly* by construction, and
/// keeping the (small) per-step increments rather than the (large) cumulative
/// lift preserves full precision for downstream averaging even when the lift
/// itself grows to millions.
#[derive(Clone, Debug)]
pub struct AngleSequence<R: Real> {
    dim: usize,
    first: Vec<R>,
    /// Row-major `(n_angles − 1) × dim` lifted increments. All increments of
    /// one component lie on a single branch: an arc of length < 1 whose
    /// midpoint falls in `(−½, ½]`.
    increments: Vec<R>,
    /// Per component: the (largest, second-largest) empty arc lengths in the
    /// mod-1 increment distribution the branch cut was derived from.
    branch_gaps: Vec<(R, R)>,
}

impl<R: Real> AngleSequence<R> {
    /// Assembles a lift directly from a first angle and per-step increments
    /// (row-major, `dim` components per step). The increments are stored
    /// verbatim — the caller is asserting they are already on a consistent
    /// branch — so exactly-known increments (e.g. a rigid rotation's constant
    /// `ρ`) suffer no unwrapping noise. Branch-gap diagnostics are recorded
    /// as fully confident (largest arc a whole turn, runner-up zero).
    pub fn from_parts(first: Vec<R>, increments: Vec<R>, dim: usize) -> Result<Self> {
        if dim == 0 || first.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim.max(1),
                got: first.len(),
            });
        }
        if increments.len() % dim != 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: increments.len() % dim,
            });
        }
        for (i, &inc) in increments.iter().enumerate() {
            if !inc.is_finite() {
                return Err(Error::NonFinite { index: i / dim });
            }
        }
        Ok(AngleSequence {
            dim,
            first,
            increments,
            branch_gaps: vec![(R::one(), R::zero()); dim],
        })
    }

    /// Torus dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of angles `N` (one more than the number of increments).
    pub fn n_angles(&self) -> usize {
        self.increments.len() / self.dim + 1
    }

    /// The first angle `θ_0`.
    pub fn first_angle(&self) -> &[R] {
        &self.first
    }

    /// The lifted increment of step `n`. Every component stays on its single
    /// chosen branch across the whole sequence; the branch is centered so the
    /// occupied arc's midpoint lies in `(−½, ½]`.
    pub fn increment(&self, step: usize) -> &[R] {
        &self.increments[step * self.dim..(step + 1) * self.dim]
    }

    /// One component of every increment, index-ascending.
    pub fn increment_component(&self, component: usize) -> Vec<R> {
        assert!(component < self.dim);
        self.increments
            .iter()
            .skip(component)
            .step_by(self.dim)
            .copied()
            .collect()
    }

    /// The lift of one component: `lift_0 = θ_0` and each step adds the
    /// stored increment, accumulated with compensation.
    pub fn lift_component(&self, component: usize) -> Vec<R> {
        let incs = self.increment_component(component);
        let mut out = Vec::with_capacity(incs.len() + 1);
        let mut acc = PairwiseSum::new();
        acc.push(self.first[component]);
        out.push(acc.total());
        for inc in incs {
            acc.push(inc);
            out.push(acc.total());
        }
        out
    }

    /// The (largest, second-largest) empty arc lengths of one component's
    /// mod-1 increment distribution. The branch cut runs through the largest
    /// arc; the ratio of the two measures how decisively it was identified.
    pub fn branch_gap(&self, component: usize) -> (R, R) {
        assert!(component < self.dim);
        self.branch_gaps[component]
    }

    /// Whether any component's branch cut was chosen without a clear margin:
    /// the runner-up empty arc exceeds [`LIFT_GAP_RATIO_LIMIT`] times the
    /// largest one. Increments that cover the whole circle (chaotic or
    /// resonant motion) or split into well-separated clusters (period-two
    /// structure) trip this; a genuine rotation arc does not.
    pub fn is_ambiguous(&self) -> bool {
        self.branch_gaps.iter().any(|&(largest, second)| {
            second.to_f64() > LIFT_GAP_RATIO_LIMIT * largest.to_f64()
        })
    }
}

/// A rotation-vector estimate and the context it was computed in.
#[derive(Clone, Debug)]
pub struct RotationEstimate<R: Real> {
    /// Estimated rotation vector, each component in `[0,1)`.
    pub rho: Vec<R>,
    /// Number of orbit angles the estimate consumed.
    pub n_iterates: usize,
    pub weight_kind: WeightKind,
    pub precision_tier: PrecisionTier,
}

/// Lifts a 1-D sequence of circle angles; see [`build_lift_nd`].
pub fn build_lift<R: Real>(angles: &[R]) -> Result<AngleSequence<R>> {
    build_lift_nd(1, angles)
}

/// Lifts a row-major sequence of `d`-torus angles out of `[0,1)^d`.
///
/// Per component, each raw angular difference is reduced mod 1 into `[0,1)`
/// and the branch cut is placed at the midpoint of the largest empty arc of
/// that circle of values (values above the cut unwrap to the `−1` branch).
/// This is exact whenever the true per-step increments occupy an arc shorter
/// than a full turn — the generic situation for motion conjugate to a
/// rotation, however distorted the conjugacy — because the unoccupied
/// complement then *is* the largest empty arc. A common integer offset then
/// recenters the occupied arc so its midpoint lands in `(−½, ½]`, preserving
/// the usual convention that near-stationary angles drifting slightly
/// backward (raw steps near 0.9) yield small negative increments.
///
/// The sizes of the largest and runner-up empty arcs are kept per component
/// (see [`AngleSequence::branch_gap`]); when the runner-up rivals the largest
/// the identification is unreliable and [`AngleSequence::is_ambiguous`]
/// reports it.
pub fn build_lift_nd<R: Real>(dim: usize, angles: &[R]) -> Result<AngleSequence<R>> {
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    if angles.len() % dim != 0 {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: angles.len() % dim,
        });
    }
    let n = angles.len() / dim;
    if n < 2 {
        return Err(Error::TooShort { need: 2, got: n });
    }
    for (i, &a) in angles.iter().enumerate() {
        if !a.is_finite() {
            return Err(Error::NonFinite { index: i / dim });
        }
    }

    let half = R::from_f64(0.5);
    let mut increments = vec![R::zero(); (n - 1) * dim];
    let mut branch_gaps = Vec::with_capacity(dim);
    let mut raws = Vec::with_capacity(n - 1);
    let mut sorted = Vec::with_capacity(n - 1);
    for c in 0..dim {
        raws.clear();
        for step in 0..n - 1 {
            let prev = angles[step * dim + c].fract();
            let next = angles[(step + 1) * dim + c].fract();
            // `next − prev` is in (−1, 1); one more fract lands it in [0, 1).
            raws.push((next - prev).fract());
        }

        sorted.clear();
        sorted.extend_from_slice(&raws);
        sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite by validation"));
        let m = sorted.len();
        let mut largest = R::zero();
        let mut second = R::zero();
        let mut cut_lo = sorted[m - 1];
        let mut cut_hi = sorted[0] + R::one();
        for i in 0..m {
            let (lo, hi) = if i + 1 < m {
                (sorted[i], sorted[i + 1])
            } else {
                // Wrap-around arc from the top value back to the bottom one.
                (sorted[m - 1], sorted[0] + R::one())
            };
            let gap = hi - lo;
            if gap > largest {
                second = largest;
                largest = gap;
                cut_lo = lo;
                cut_hi = hi;
            } else if gap > second {
                second = gap;
            }
        }
        branch_gaps.push((largest, second));

        // Values are in [0, 1); a cut above 1 would unwrap nothing, and the
        // wrap-around arc's midpoint can exceed 1 when the occupied arc sits
        // low. Capping at 1 cuts that same arc at its top end instead.
        let cut = (half * (cut_lo + cut_hi)).min(R::one());
        let mut arc_lo = R::one();
        let mut arc_hi = -R::one();
        for (step, &raw) in raws.iter().enumerate() {
            let inc = if raw > cut { raw - R::one() } else { raw };
            if inc < arc_lo {
                arc_lo = inc;
            }
            if inc > arc_hi {
                arc_hi = inc;
            }
            increments[step * dim + c] = inc;
        }
        // Integer branch offset putting the arc midpoint in (−½, ½]:
        // j = ⌈mid − ½⌉, computed as −⌊½ − mid⌋ to round the correct way.
        let mid = half * (arc_lo + arc_hi);
        let offset = -((half - mid).floor());
        if offset != R::zero() {
            for step in 0..n - 1 {
                increments[step * dim + c] = increments[step * dim + c] - offset;
            }
        }
    }
    Ok(AngleSequence {
        dim,
        first: angles[..dim].iter().map(|a| a.fract()).collect(),
        increments,
        branch_gaps,
    })
}

/// Estimates the rotation vector of a lifted orbit: the weighted Birkhoff
/// average of the per-step increments, reduced into `[0,1)^d`.
///
/// Needs at least 3 angles (2 increments).
pub fn rotation_vector<R: Real>(
    seq: &AngleSequence<R>,
    kind: WeightKind,
) -> Result<RotationEstimate<R>> {
    let n = seq.n_angles();
    if n < 3 {
        return Err(Error::TooShort { need: 3, got: n });
    }
    let rho = (0..seq.dim())
        .map(|c| Ok(wb_average(&seq.increment_component(c), kind)?.fract()))
        .collect::<Result<Vec<R>>>()?;
    Ok(RotationEstimate {
        rho,
        n_iterates: n,
        weight_kind: kind,
        precision_tier: R::TIER,
    })
}

/// Converts planar points to angular coordinates about `center`:
/// `φ = atan2(y − c_y, x − c_x)/(2π)` reduced into `[0,1)`.
///
/// Rejects any point that coincides with the center (its angle is
/// undefined).
pub fn angular_coordinate<R: Real>(points: &[[R; 2]], center: [R; 2]) -> Result<Vec<R>> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let dx = p[0] - center[0];
            let dy = p[1] - center[1];
            if dx == R::zero() && dy == R::zero() {
                return Err(Error::CenterCoincidence { index: i });
            }
            Ok((dy.atan2(dx) / R::two_pi()).fract())
        })
        .collect()
}
