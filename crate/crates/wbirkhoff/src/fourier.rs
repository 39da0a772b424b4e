//! Fourier-coefficient extraction along quasiperiodic orbits.
//!
//! On a quasiperiodic orbit the only data available are observable samples
//! `f(x_n)` and a rotation estimate `ρ`; the coefficient of the mode
//! `e^{2πikθ}` is then the weighted Birkhoff average of `f(x_n) e^{−2πiknρ}`,
//! which inherits the super-polynomial convergence of the plain average. No
//! grid interpolation and no FFT are involved: resampling an orbit onto a
//! uniform grid would introduce interpolation error far above the averaging
//! error, so every coefficient is extracted directly from the samples.
//!
//! The module also reconstructs the periodic part `g(θ) = V(θ) − θ` of the
//! conjugacy `V` that maps a rigid rotation onto the observed angles, using
//! the anchored deviation sequence `g_n = lift(φ)_n − nρ − lift(φ)_0` (the
//! anchor fixes the phase freedom of the conjugacy; `a_0` absorbs it, so
//! cross-run comparisons should compare moduli, not phases of `a_0`).
//!
//! Phase handling: mode phases `frac(n·ν)` are accumulated in double-double
//! with exact wraparound, then narrowed for the trig evaluation. The
//! accumulated phase error grows like `N·2⁻¹⁰⁵` — immaterial at standard
//! precision for any feasible `N`, and below the averaging error at extended
//! precision for runs up to `N ≈ 10⁶`.
//!
//! Determinism: coefficients for distinct modes are computed in parallel, but
//! the reduction inside each coefficient is the same deterministic pairwise
//! order the averaging module uses, so results are bit-identical regardless
//! of thread count.

use crate::averaging::wb_average_with;
use crate::cx::Cx;
use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::reduce::PairwiseSum;
use crate::rotation::AngleSequence;
use crate::weights::{normalized_weights, WeightKind, WeightVector};
use rayon::prelude::*;
use std::io;

/// Largest imaginary residual [`evaluate_series`] tolerates before declaring
/// the coefficient set inconsistent with a real-valued function. A correctly
/// mirrored series cancels imaginary parts to rounding (≲ 10⁻¹⁵ per term);
/// 10⁻¹⁰ leaves four orders of headroom while still catching any genuinely
/// unpaired mode, whose imaginary part is of the order of the coefficient.
pub const IMAG_RESIDUAL_LIMIT: f64 = 1e-10;

/// Deviation magnitude above which the rotation estimate is suspect. A true
/// conjugacy deviation is bounded by the conjugacy's distance from the
/// identity (well below 1 for every system here), while a mis-estimated ρ
/// makes `g_n` drift linearly without bound; 10 is decades past any honest
/// value yet reached quickly by a drift.
pub const RHO_DRIFT_LIMIT: f64 = 10.0;

/// Minimum number of usable coefficients for a meaningful decay fit.
pub const DECAY_FIT_MIN_POINTS: usize = 10;

/// Default 1-D truncation order used by the command-line tools.
pub const DEFAULT_K_1D: usize = 200;

/// Default per-axis 2-D truncation order used by the command-line tools.
pub const DEFAULT_JK_2D: usize = 100;

// ---------------------------------------------------------------------------
// Series containers
// ---------------------------------------------------------------------------

/// Truncated one-dimensional Fourier series `Σ_{|k|≤K} a_k e^{2πikθ}`,
/// tagged with the rotation number and sample count that produced it.
///
/// For real observables `a_{−k} = conj(a_k)` holds exactly because the
/// negative half is constructed by conjugation, never recomputed.
#[derive(Clone, Debug)]
pub struct FourierSeries1D<R: Real> {
    k_max: usize,
    /// Index `k + k_max` holds the coefficient of `e^{2πikθ}`.
    coeffs: Vec<Cx<R>>,
    rho: R,
    n_iterates: usize,
}

impl<R: Real> FourierSeries1D<R> {
    /// Builds a conjugate-symmetric series from coefficients for
    /// `k = 0..=K`; negative modes are mirrored as `a_{−k} = conj(a_k)`.
    pub fn from_nonnegative_half(half: Vec<Cx<R>>, rho: R, n_iterates: usize) -> Result<Self> {
        if half.is_empty() {
            return Err(Error::InvalidParameter(
                "series needs at least the k = 0 coefficient".into(),
            ));
        }
        let k_max = half.len() - 1;
        let mut coeffs = Vec::with_capacity(2 * k_max + 1);
        for k in (1..=k_max).rev() {
            coeffs.push(half[k].conj());
        }
        coeffs.extend(half);
        Ok(FourierSeries1D { k_max, coeffs, rho, n_iterates })
    }

    /// Builds a series from a full coefficient list ordered `k = −K..=K`.
    /// No symmetry is imposed; [`evaluate_series`] will report an imaginary
    /// residual if the set is inconsistent with a real function.
    pub fn from_full(k_max: usize, coeffs: Vec<Cx<R>>, rho: R, n_iterates: usize) -> Result<Self> {
        if coeffs.len() != 2 * k_max + 1 {
            return Err(Error::InvalidParameter(format!(
                "series of order {} needs {} coefficients, got {}",
                k_max,
                2 * k_max + 1,
                coeffs.len()
            )));
        }
        Ok(FourierSeries1D { k_max, coeffs, rho, n_iterates })
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn rho(&self) -> R {
        self.rho
    }

    /// Number of orbit samples averaged into each coefficient.
    pub fn n_iterates(&self) -> usize {
        self.n_iterates
    }

    /// Coefficient of `e^{2πikθ}`; zero outside the stored range.
    pub fn coefficient(&self, k: i64) -> Cx<R> {
        let kk = self.k_max as i64;
        if k < -kk || k > kk {
            Cx::zero()
        } else {
            self.coeffs[(k + kk) as usize]
        }
    }

    /// Coefficients in index order `k = −K..=K`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Cx<R>)> + '_ {
        let kk = self.k_max as i64;
        self.coeffs.iter().enumerate().map(move |(i, &c)| (i as i64 - kk, c))
    }

    /// Writes `k,real,imag,modulus` rows at full tier precision.
    pub fn write_csv<W: io::Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "k,real,imag,modulus")?;
        for (k, c) in self.iter() {
            writeln!(
                out,
                "{},{},{},{}",
                k,
                c.re.format_full(),
                c.im.format_full(),
                c.abs().format_full()
            )?;
        }
        Ok(())
    }
}

/// Truncated two-dimensional Fourier series over the basis
/// `e^{2πi(jx + ky)}`, stored for `0 ≤ j ≤ J`, `−K ≤ k ≤ K`. The mirrored
/// half-plane `j < 0` is served by conjugation through [`Self::coefficient`],
/// which is exact for real observables.
#[derive(Clone, Debug)]
pub struct FourierSeries2D<R: Real> {
    j_max: usize,
    k_max: usize,
    /// Row-major: index `j·(2K+1) + (k + K)`.
    coeffs: Vec<Cx<R>>,
    rho: [R; 2],
    n_iterates: usize,
}

impl<R: Real> FourierSeries2D<R> {
    fn from_grid(
        j_max: usize,
        k_max: usize,
        coeffs: Vec<Cx<R>>,
        rho: [R; 2],
        n_iterates: usize,
    ) -> Self {
        debug_assert_eq!(coeffs.len(), (j_max + 1) * (2 * k_max + 1));
        FourierSeries2D { j_max, k_max, coeffs, rho, n_iterates }
    }

    pub fn j_max(&self) -> usize {
        self.j_max
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn rho(&self) -> [R; 2] {
        self.rho
    }

    pub fn n_iterates(&self) -> usize {
        self.n_iterates
    }

    /// Coefficient of `e^{2πi(jx + ky)}`. Rows `j < 0` are the conjugates of
    /// their mirrored counterparts (valid for real observables); indices
    /// outside the stored ranges return zero.
    pub fn coefficient(&self, j: i64, k: i64) -> Cx<R> {
        if j < 0 {
            return self.coefficient(-j, -k).conj();
        }
        let (jj, kk) = (self.j_max as i64, self.k_max as i64);
        if j > jj || k < -kk || k > kk {
            Cx::zero()
        } else {
            self.coeffs[(j * (2 * kk + 1) + k + kk) as usize]
        }
    }

    /// Stored coefficients in row-major order (`j` ascending, then `k`).
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, Cx<R>)> + '_ {
        let kk = self.k_max as i64;
        let width = 2 * kk + 1;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (i as i64 / width, i as i64 % width - kk, c))
    }

    /// Writes `j,k,real,imag,modulus` rows at full tier precision.
    pub fn write_csv<W: io::Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "j,k,real,imag,modulus")?;
        for (j, k, c) in self.iter() {
            writeln!(
                out,
                "{},{},{},{},{}",
                j,
                k,
                c.re.format_full(),
                c.im.format_full(),
                c.abs().format_full()
            )?;
        }
        Ok(())
    }
}

/// Reconstructed conjugacy `V(θ) = θ + g(θ)` between a rigid rotation and
/// the observed circle coordinate, as the Fourier series of its periodic
/// part `g`.
#[derive(Clone, Debug)]
pub struct ConjugacyModel<R: Real> {
    pub series: FourierSeries1D<R>,
    /// Largest `|g_n|` seen while averaging.
    pub max_abs_g: R,
}

impl<R: Real> ConjugacyModel<R> {
    /// True when the deviation sequence grew past [`RHO_DRIFT_LIMIT`]: the
    /// periodic part of a genuine conjugacy stays small, while a wrong
    /// rotation number makes the deviation drift linearly in `n`.
    pub fn rho_mismatch_suspected(&self) -> bool {
        self.max_abs_g.to_f64() > RHO_DRIFT_LIMIT
    }

    /// `g(θ)`; errors if the coefficients are inconsistent with a real
    /// function.
    pub fn evaluate(&self, theta: R) -> Result<R> {
        evaluate_series(&self.series, theta)
    }

    /// `V(θ) = θ + g(θ)`. Because `g` is evaluated on `frac(θ)`, shifting
    /// `θ` by an integer shifts the value by exactly that integer.
    pub fn conjugacy_value(&self, theta: R) -> Result<R> {
        Ok(theta + self.evaluate(theta)?)
    }
}

/// One component of a conjugacy on the 2-torus, as a 2-D series of its
/// periodic part.
#[derive(Clone, Debug)]
pub struct ConjugacyModel2D<R: Real> {
    pub series: FourierSeries2D<R>,
    /// Largest `|g_n|` seen while averaging.
    pub max_abs_g: R,
    /// Which angle component this series reconstructs.
    pub component: usize,
}

impl<R: Real> ConjugacyModel2D<R> {
    /// See [`ConjugacyModel::rho_mismatch_suspected`].
    pub fn rho_mismatch_suspected(&self) -> bool {
        self.max_abs_g.to_f64() > RHO_DRIFT_LIMIT
    }

    /// `g(x, y)`; errors if the coefficients are inconsistent with a real
    /// function.
    pub fn evaluate(&self, x: R, y: R) -> Result<R> {
        evaluate_series_2d(&self.series, x, y)
    }
}

/// Exponential-envelope fit `|a_k| ≈ α e^{−βk}` to a coefficient sequence.
/// Fitted in `f64`: the envelope parameters are descriptive, with far less
/// precision in them than in the coefficients themselves.
#[derive(Copy, Clone, Debug)]
pub struct DecayFit {
    pub alpha: f64,
    pub beta: f64,
    /// Coefficients above the noise floor that entered the fit.
    pub points_used: usize,
}

impl DecayFit {
    /// Exponential decay of Fourier coefficients is the signature of an
    /// analytic conjugacy; a fitted growth (β ≤ 0) says the series is noise
    /// or the dynamics are not smoothly conjugate to a rotation.
    pub fn analytic_signature(&self) -> bool {
        self.beta > 0.0
    }
}

// ---------------------------------------------------------------------------
// Mode kernels
// ---------------------------------------------------------------------------

/// Per-iterate phase step `frac(k·ρ)` of the 1-D mode `k`, in double-double.
pub(crate) fn mode_step_1d(rho: Dd, k: i64) -> Dd {
    (rho * Dd::from_i64(k)).fract()
}

/// Per-iterate phase step `frac(j·ρ₁ + k·ρ₂)` of the 2-D mode `(j, k)`.
fn mode_step_2d(rho: [Dd; 2], j: i64, k: i64) -> Dd {
    (rho[0] * Dd::from_i64(j) + rho[1] * Dd::from_i64(k)).fract()
}

/// A zero step with a nonzero mode means `e^{−2πiknρ} ≡ 1`: the mode is
/// resonant with ρ and cannot be separated from the mean.
fn check_resonance(step: Dd, trivial_mode: bool, k: i64) -> Result<()> {
    if !trivial_mode && step.to_f64() == 0.0 {
        Err(Error::ResonantMode { k })
    } else {
        Ok(())
    }
}

/// Weighted average of `f(n) e^{−2πi n·step}` with deterministic pairwise
/// reduction. The phase is accumulated in double-double and narrowed per
/// iterate; real and imaginary parts are reduced independently in index
/// order, so the result does not depend on how callers parallelize over
/// modes.
pub(crate) fn mode_sum<R: Real>(
    f: &(impl Fn(usize) -> Cx<R> + Sync),
    n: usize,
    step: Dd,
    weights: &WeightVector<R>,
) -> Cx<R> {
    let mut re = PairwiseSum::new();
    let mut im = PairwiseSum::new();
    let mut phase = Dd::from_f64(0.0);
    let w = weights.weights();
    for (idx, &wn) in w.iter().enumerate().take(n) {
        let theta = R::narrow(phase);
        let (s, c) = (R::two_pi() * theta).sin_cos();
        let z = f(idx);
        // z · e^{−2πiθ} = (re·c + im·s) + i(im·c − re·s)
        re.push(wn * (z.re * c + z.im * s));
        im.push(wn * (z.im * c - z.re * s));
        phase = (phase + step).fract();
    }
    Cx::new(re.total(), im.total())
}

fn check_all_finite<R: Real>(values: &[R]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

fn check_all_finite_cx<R: Real>(values: &[Cx<R>]) -> Result<()> {
    match values.iter().position(|z| !z.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

// ---------------------------------------------------------------------------
// Coefficient extraction
// ---------------------------------------------------------------------------

/// Fourier coefficient `a_k = Σ_n ŵ_n f(x_n) e^{−2πiknρ}` of a real
/// observable sampled along an orbit with rotation number `ρ`. For `k = 0`
/// this is the plain weighted Birkhoff average.
pub fn fourier_coefficient<R: Real>(
    values: &[R],
    rho: R,
    k: i64,
    kind: WeightKind,
) -> Result<Cx<R>> {
    check_all_finite(values)?;
    let weights = normalized_weights(kind, values.len())?;
    let step = mode_step_1d(rho.widen(), k);
    check_resonance(step, k == 0, k)?;
    Ok(mode_sum(&|i| Cx::from_re(values[i]), values.len(), step, &weights))
}

/// [`fourier_coefficient`] for complex-valued observables.
pub fn fourier_coefficient_cx<R: Real>(
    values: &[Cx<R>],
    rho: R,
    k: i64,
    kind: WeightKind,
) -> Result<Cx<R>> {
    check_all_finite_cx(values)?;
    let weights = normalized_weights(kind, values.len())?;
    let step = mode_step_1d(rho.widen(), k);
    check_resonance(step, k == 0, k)?;
    Ok(mode_sum(&|i| values[i], values.len(), step, &weights))
}

/// Anchored conjugacy-deviation sequence
/// `g_n = lift(φ)_n − nρ − lift(φ)_0` of one angle component, computed by
/// compensated accumulation of the per-step residuals `inc_m − ρ` (summing
/// lift values directly would lose the small deviation to cancellation at
/// large `n`).
///
/// The stored increments sit on whatever integer branch the lift chose,
/// while callers supply ρ reduced into `[0,1)`; the two may differ by a
/// whole number of turns (e.g. increments near −0.3 for ρ = 0.7). The mean
/// increment pins that integer, which is folded into ρ before subtracting —
/// only the fractional disagreement between ρ and the data is left to show
/// up as drift.
pub fn conjugacy_deviation<R: Real>(
    seq: &AngleSequence<R>,
    component: usize,
    rho: R,
) -> Result<Vec<R>> {
    if component >= seq.dim() {
        return Err(Error::DimensionMismatch { expected: seq.dim(), got: component });
    }
    let n = seq.n_angles();
    let mut mean = PairwiseSum::<R>::new();
    for m in 0..n - 1 {
        mean.push(seq.increment(m)[component]);
    }
    let mean = mean.total() / R::from_i64((n - 1) as i64);
    let turns = (mean - rho).to_f64().round();
    let shift = rho + R::from_f64(turns);
    let mut g = Vec::with_capacity(n);
    g.push(R::zero());
    let mut sum = R::zero();
    let mut comp = R::zero();
    for m in 0..n - 1 {
        let (s, err) = R::two_sum(sum, seq.increment(m)[component] - shift);
        sum = s;
        comp += err;
        g.push(sum + comp);
    }
    Ok(g)
}

/// Fourier series of the periodic conjugacy part `g(θ) = V(θ) − θ` of a
/// one-dimensional lifted angle sequence: coefficients
/// `a_k = WB(g_n e^{−2πiknρ})` for `k = 0..=K`, mirrored to negative `k`
/// by conjugation.
///
/// Does not fail on a drifting deviation (a wrong ρ): the result is still
/// well-defined data. Callers should check
/// [`ConjugacyModel::rho_mismatch_suspected`] before trusting the series.
pub fn conjugacy_series<R: Real>(
    seq: &AngleSequence<R>,
    rho: R,
    k_max: usize,
    kind: WeightKind,
) -> Result<ConjugacyModel<R>> {
    if seq.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: seq.dim() });
    }
    let g = conjugacy_deviation(seq, 0, rho)?;
    check_all_finite(&g)?;
    let weights = normalized_weights(kind, g.len())?;
    let rho_dd = rho.widen();
    let mut steps = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max as i64 {
        let step = mode_step_1d(rho_dd, k);
        check_resonance(step, k == 0, k)?;
        steps.push(step);
    }
    let half: Vec<Cx<R>> = steps
        .par_iter()
        .map(|&step| mode_sum(&|i| Cx::from_re(g[i]), g.len(), step, &weights))
        .collect();
    let max_abs_g = g.iter().fold(R::zero(), |m, &x| m.max(x.abs()));
    Ok(ConjugacyModel {
        series: FourierSeries1D::from_nonnegative_half(half, rho, g.len())?,
        max_abs_g,
    })
}

/// 2-D Fourier coefficients `a_{j,k} = WB(f_n e^{−2πin(jρ₁+kρ₂)})` of a
/// complex observable sampled along an orbit with rotation vector `ρ`,
/// for `0 ≤ j ≤ J` and `−K ≤ k ≤ K`.
///
/// Every stored coefficient is computed directly from the samples; no
/// symmetry is assumed, so the `j = 0` row is honest data even for complex
/// observables (the [`FourierSeries2D::coefficient`] accessor only mirrors
/// the unstored `j < 0` half-plane).
pub fn fourier_coefficients_2d<R: Real>(
    values: &[Cx<R>],
    rho: [R; 2],
    j_max: usize,
    k_max: usize,
    kind: WeightKind,
) -> Result<FourierSeries2D<R>> {
    check_all_finite_cx(values)?;
    let weights = normalized_weights(kind, values.len())?;
    let rho_dd = [rho[0].widen(), rho[1].widen()];
    let mut modes = Vec::with_capacity((j_max + 1) * (2 * k_max + 1));
    for j in 0..=j_max as i64 {
        for k in -(k_max as i64)..=k_max as i64 {
            let step = mode_step_2d(rho_dd, j, k);
            check_resonance(step, j == 0 && k == 0, k)?;
            modes.push(step);
        }
    }
    let coeffs: Vec<Cx<R>> = modes
        .par_iter()
        .map(|&step| mode_sum(&|i| values[i], values.len(), step, &weights))
        .collect();
    Ok(FourierSeries2D::from_grid(j_max, k_max, coeffs, rho, values.len()))
}

/// 2-D conjugacy series of one angle component of a torus orbit. The
/// observable is the real deviation sequence of that component, so the
/// `j = 0` row is completed by conjugation (`a_{0,−k} = conj(a_{0,k})`),
/// making the real-function symmetry exact by construction.
pub fn conjugacy_series_2d<R: Real>(
    seq: &AngleSequence<R>,
    rho: [R; 2],
    component: usize,
    j_max: usize,
    k_max: usize,
    kind: WeightKind,
) -> Result<ConjugacyModel2D<R>> {
    if seq.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: seq.dim() });
    }
    if component >= 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: component });
    }
    let g = conjugacy_deviation(seq, component, rho[component])?;
    check_all_finite(&g)?;
    let weights = normalized_weights(kind, g.len())?;
    let rho_dd = [rho[0].widen(), rho[1].widen()];
    let kk = k_max as i64;
    // Modes with j ≥ 1 span the full k range; the j = 0 row only needs
    // k ≥ 0, its negative half being the conjugate mirror.
    let mut modes = Vec::new();
    for j in 0..=j_max as i64 {
        let k_lo = if j == 0 { 0 } else { -kk };
        for k in k_lo..=kk {
            let step = mode_step_2d(rho_dd, j, k);
            check_resonance(step, j == 0 && k == 0, k)?;
            modes.push((j, k, step));
        }
    }
    let computed: Vec<Cx<R>> = modes
        .par_iter()
        .map(|&(_, _, step)| mode_sum(&|i| Cx::from_re(g[i]), g.len(), step, &weights))
        .collect();
    let width = (2 * k_max + 1) as usize;
    let mut coeffs = vec![Cx::zero(); (j_max + 1) * width];
    for (&(j, k, _), &c) in modes.iter().zip(&computed) {
        coeffs[j as usize * width + (k + kk) as usize] = c;
        if j == 0 && k > 0 {
            coeffs[(kk - k) as usize] = c.conj();
        }
    }
    let max_abs_g = g.iter().fold(R::zero(), |m, &x| m.max(x.abs()));
    Ok(ConjugacyModel2D {
        series: FourierSeries2D::from_grid(j_max, k_max, coeffs, rho, g.len()),
        max_abs_g,
        component,
    })
}

// ---------------------------------------------------------------------------
// Evaluation and self-validation
// ---------------------------------------------------------------------------

/// Complex partial sum `Σ_{|k|≤K} a_k e^{2πikθ}` via the rotation
/// recurrence `z^{k+1} = z^k·z` (one trig call total; the recurrence error
/// after K steps is a few K·ulp, far below coefficient accuracy).
fn partial_sum<R: Real>(series: &FourierSeries1D<R>, k_trunc: usize, theta: R) -> Cx<R> {
    let z = Cx::cis(R::two_pi() * theta.fract());
    let zc = z.conj();
    let mut pos = Cx::one();
    let mut neg = Cx::one();
    let mut sum = series.coefficient(0);
    for k in 1..=k_trunc as i64 {
        pos = pos * z;
        neg = neg * zc;
        sum += series.coefficient(k) * pos + series.coefficient(-k) * neg;
    }
    sum
}

/// Evaluates the series at `θ` and returns the real part, after checking
/// that the imaginary residual stays below [`IMAG_RESIDUAL_LIMIT`]. The
/// input is reduced mod 1, so integer shifts of `θ` change nothing beyond
/// the rounding of `θ` itself.
pub fn evaluate_series<R: Real>(series: &FourierSeries1D<R>, theta: R) -> Result<R> {
    let sum = partial_sum(series, series.k_max(), theta);
    let residual = sum.im.abs().to_f64();
    if residual > IMAG_RESIDUAL_LIMIT {
        return Err(Error::ImaginaryResidual { residual, limit: IMAG_RESIDUAL_LIMIT });
    }
    Ok(sum.re)
}

/// Evaluates a 2-D series at `(x, y)` over both stored and mirrored modes,
/// with the same imaginary-residual check as [`evaluate_series`]. Only
/// meaningful for series of real observables (the mirror supplies `j < 0`).
pub fn evaluate_series_2d<R: Real>(series: &FourierSeries2D<R>, x: R, y: R) -> Result<R> {
    let zx = Cx::cis(R::two_pi() * x.fract());
    let zy = Cx::cis(R::two_pi() * y.fract());
    let kk = series.k_max() as i64;
    // Powers of e^{2πiy} for k = −K..=K, built once.
    let mut ypow = vec![Cx::one(); (2 * kk + 1) as usize];
    for k in 1..=kk {
        ypow[(kk + k) as usize] = ypow[(kk + k - 1) as usize] * zy;
        ypow[(kk - k) as usize] = ypow[(kk - k + 1) as usize] * zy.conj();
    }
    let mut sum = Cx::zero();
    let mut xpow = Cx::one();
    for j in 0..=series.j_max() as i64 {
        let mut row = Cx::zero();
        for k in -kk..=kk {
            row += series.coefficient(j, k) * ypow[(k + kk) as usize];
        }
        let term = row * xpow;
        sum += term;
        if j > 0 {
            // Mirrored row −j contributes the conjugate of the j term.
            sum += term.conj();
        }
        xpow = xpow * zx;
    }
    let residual = sum.im.abs().to_f64();
    if residual > IMAG_RESIDUAL_LIMIT {
        return Err(Error::ImaginaryResidual { residual, limit: IMAG_RESIDUAL_LIMIT });
    }
    Ok(sum.re)
}

/// Weighted truncation-error norms of a reconstruction: for the series
/// truncated at `k_trunc`, evaluated along the model's own orbit phases
/// `θ_n = frac(nρ)`,
/// `δ₁ = WB(|f_n − ĝ(θ_n)|)` and `δ₂ = sqrt(WB((f_n − ĝ(θ_n))²))`.
///
/// The diagnostic value: δ decreasing as `K` grows means the added modes
/// are real structure; δ growing again means the extra coefficients are
/// noise for this orbit length.
pub fn reconstruction_error<R: Real>(
    values: &[R],
    model: &ConjugacyModel<R>,
    k_trunc: usize,
    kind: WeightKind,
) -> Result<(R, R)> {
    let series = &model.series;
    if k_trunc > series.k_max() {
        return Err(Error::InvalidParameter(format!(
            "truncation order {} exceeds the stored order {}",
            k_trunc,
            series.k_max()
        )));
    }
    check_all_finite(values)?;
    let weights = normalized_weights(kind, values.len())?;
    let rho_dd = series.rho().widen();
    let diffs: Vec<R> = (0..values.len())
        .into_par_iter()
        .map(|n| {
            let theta = R::narrow((rho_dd * Dd::from_i64(n as i64)).fract());
            values[n] - partial_sum(series, k_trunc, theta).re
        })
        .collect();
    let abs: Vec<R> = diffs.iter().map(|&d| d.abs()).collect();
    let sq: Vec<R> = diffs.iter().map(|&d| d * d).collect();
    let d1 = wb_average_with(&abs, &weights)?;
    let d2 = wb_average_with(&sq, &weights)?.max(R::zero()).sqrt();
    Ok((d1, d2))
}

/// Least-squares fit of `ln|a_k|` against `k` over the coefficients
/// `k = 1..=K` whose modulus exceeds the tier noise floor, reported as the
/// envelope `|a_k| ≈ α e^{−βk}`. Needs at least [`DECAY_FIT_MIN_POINTS`]
/// usable coefficients.
pub fn decay_fit<R: Real>(series: &FourierSeries1D<R>) -> Result<DecayFit> {
    let floor = R::coeff_floor();
    let pts: Vec<(f64, f64)> = (1..=series.k_max() as i64)
        .filter_map(|k| {
            let m = series.coefficient(k).abs().to_f64();
            (m > floor).then(|| (k as f64, m.ln()))
        })
        .collect();
    if pts.len() < DECAY_FIT_MIN_POINTS {
        return Err(Error::TooFewCoefficients { need: DECAY_FIT_MIN_POINTS, found: pts.len() });
    }
    let n = pts.len() as f64;
    let kbar = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ybar = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - kbar) * (p.0 - kbar)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - kbar) * (p.1 - ybar)).sum();
    let slope = sxy / sxx;
    Ok(DecayFit { alpha: (ybar - slope * kbar).exp(), beta: -slope, points_used: pts.len() })
}
