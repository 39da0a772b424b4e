//! Weighting functions for weighted Birkhoff averages.
//!
//! A weighting function `w` is supported on `[0, 1]` and reweights the terms
//! of an orbit average: instead of `(1/N) Σ f(x_n)` one computes
//! `Σ ŵ_{n,N} f(x_n)` with `ŵ_{n,N} = w(n/N) / Σ_j w(j/N)`. Smooth bump
//! functions that vanish to high (or infinite) order at the endpoints
//! dramatically accelerate convergence on quasiperiodic orbits:
//!
//! * [`WeightKind::Equal`] — the classical unweighted average, O(1/N).
//! * [`WeightKind::Quadratic`] — `t(1−t)`, roughly O(1/N²).
//! * [`WeightKind::SinSquared`] — `sin²(πt)`, roughly O(1/N³).
//! * [`WeightKind::Exponential`] — `exp(−1/(t^p(1−t)^p))`, all derivatives
//!   vanish at the endpoints, giving super-polynomial convergence.

use std::fmt;
use std::num::NonZeroU32;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::reduce;

/// Natural log of the smallest positive normal `f64`; exponents below this
/// are flushed to an exact zero weight instead of evaluating `exp` in the
/// denormal range.
const LOG_MIN_NORMAL: f64 = -708.396_418_532_264_1;

/// The family of supported weighting functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightKind {
    /// `w ≡ 1` on `[0, 1]` (endpoints included): the classical average.
    Equal,
    /// `w(t) = t(1−t)` on `(0, 1)`.
    Quadratic,
    /// `w(t) = sin²(πt)` on `(0, 1)`.
    SinSquared,
    /// `w(t) = exp(−1/(t^p(1−t)^p))` on `(0, 1)`, `p ≥ 1`.
    Exponential(NonZeroU32),
}

impl WeightKind {
    /// Builds the exponential-bump kind, rejecting `p = 0`.
    pub fn exponential(p: u32) -> Result<Self> {
        NonZeroU32::new(p)
            .map(WeightKind::Exponential)
            .ok_or_else(|| Error::InvalidParameter("exponential weight needs p >= 1".into()))
    }

    /// `exp(−1/(t(1−t)))`, the workhorse super-convergent weight.
    pub fn exponential_1() -> Self {
        WeightKind::Exponential(NonZeroU32::new(1).unwrap())
    }
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightKind::Equal => f.write_str("equal"),
            WeightKind::Quadratic => f.write_str("quadratic"),
            WeightKind::SinSquared => f.write_str("sinsquared"),
            WeightKind::Exponential(p) => write!(f, "exponential:{p}"),
        }
    }
}

impl FromStr for WeightKind {
    type Err = Error;

    /// Accepts `equal`, `quadratic`, `sinsquared` (alias `sin2`),
    /// `exponential[:p]` (alias `exp[:p]`, default `p = 1`).
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (name, arg) = match lower.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (lower.as_str(), None),
        };
        let bad = || Error::InvalidParameter(format!("unknown weight kind `{s}`"));
        match (name, arg) {
            ("equal", None) => Ok(WeightKind::Equal),
            ("quadratic", None) => Ok(WeightKind::Quadratic),
            ("sinsquared" | "sin2", None) => Ok(WeightKind::SinSquared),
            ("exponential" | "exp", None) => Ok(WeightKind::exponential_1()),
            ("exponential" | "exp", Some(a)) => {
                let p: u32 = a.parse().map_err(|_| bad())?;
                WeightKind::exponential(p)
            }
            _ => Err(bad()),
        }
    }
}

impl serde::Serialize for WeightKind {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for WeightKind {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The raw (unnormalized) weight `w(t)`.
///
/// Total over all real `t`: outside the support the value is an exact `0`.
/// `Equal` is supported on the closed interval `[0, 1]`; every other kind on
/// the open interval `(0, 1)`. For the exponential kinds the exponent is
/// screened in the log domain and flushed to exact zero once it falls below
/// the smallest representable normal magnitude, so no spurious
/// underflow/overflow arithmetic occurs near the endpoints.
pub fn raw_weight<R: Real>(kind: WeightKind, t: R) -> R {
    let zero = R::zero();
    let one = R::one();
    match kind {
        WeightKind::Equal => {
            if t >= zero && t <= one {
                one
            } else {
                zero
            }
        }
        _ if t <= zero || t >= one => zero,
        WeightKind::Quadratic => t * (one - t),
        WeightKind::SinSquared => {
            let s = (R::pi() * t).sin();
            s * s
        }
        WeightKind::Exponential(p) => {
            let p = p.get() as i32;
            // u = t(1−t) ∈ (0, 1/4]; the exponent is −u^{−p}. Decide in the
            // log domain whether the result underflows: −u^{−p} < log(MIN)
            // iff p·(−ln u) > ln(−log(MIN)).
            let u = t * (one - t);
            let log_mag = -(p as f64) * u.to_f64().ln();
            if log_mag > (-LOG_MIN_NORMAL).ln() {
                return zero;
            }
            (-(one / u.powi(p))).exp()
        }
    }
}

/// A normalized weight vector `ŵ_{n,N} = w(n/N) / Σ_j w(j/N)` for `n < N`.
#[derive(Clone, Debug)]
pub struct WeightVector<R: Real> {
    kind: WeightKind,
    weights: Vec<R>,
}

impl<R: Real> WeightVector<R> {
    /// The kind the vector was built from.
    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    /// Number of terms `N`.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// The normalized weights, index-ascending.
    pub fn weights(&self) -> &[R] {
        &self.weights
    }
}

/// Builds the normalized weight vector for `n_terms` orbit points.
///
/// Rejects `n_terms < 2` (the normalizing sum would be degenerate for the
/// kinds that vanish at the endpoints) and parameter choices so steep that
/// every sample underflows to zero.
pub fn normalized_weights<R: Real>(kind: WeightKind, n_terms: usize) -> Result<WeightVector<R>> {
    if n_terms < 2 {
        return Err(Error::TooShort {
            need: 2,
            got: n_terms,
        });
    }
    let n_real = R::from_usize(n_terms);
    let mut weights: Vec<R> = (0..n_terms)
        .map(|n| raw_weight(kind, R::from_usize(n) / n_real))
        .collect();
    let total = reduce::sum_slice(&weights);
    if !(total > R::zero()) {
        return Err(Error::InvalidParameter(format!(
            "all {n_terms} samples of weight kind `{kind}` underflow to zero"
        )));
    }
    for w in &mut weights {
        *w = *w / total;
    }
    Ok(WeightVector { kind, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dd::Dd;

    const KINDS: [&str; 5] = ["equal", "quadratic", "sinsquared", "exponential:1", "exponential:2"];

    fn all_kinds() -> Vec<WeightKind> {
        KINDS.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn raw_weight_pinned_values() {
        // Hand-evaluated points of each formula.
        let e1 = WeightKind::exponential_1();
        assert!((raw_weight(e1, 0.5f64) - (-4.0f64).exp()).abs() < 1e-18);
        assert_eq!(raw_weight(WeightKind::Quadratic, 0.5f64), 0.25);
        assert_eq!(raw_weight(WeightKind::exponential(2).unwrap(), 0.0f64), 0.0);
        assert!((raw_weight(WeightKind::SinSquared, 0.25f64) - 0.5).abs() < 1e-15);
        assert_eq!(raw_weight(WeightKind::Equal, 0.0f64), 1.0);
        assert_eq!(raw_weight(WeightKind::Equal, 1.0f64), 1.0);
        assert_eq!(raw_weight(WeightKind::Equal, 1.25f64), 0.0);
    }

    #[test]
    fn raw_weight_pinned_values_extended() {
        let e1 = WeightKind::exponential_1();
        let v = raw_weight(e1, Dd::from_f64(0.5));
        let want = (-Dd::from_f64(4.0)).exp();
        assert!(((v - want) / want).abs().to_f64().abs() < 1e-30);
    }

    #[test]
    fn quadratic_four_terms_hand_normalized() {
        // w at t = 0, 1/4, 1/2, 3/4 is 0, 3/16, 4/16, 3/16; the sum is 10/16,
        // so the normalized vector is exactly (0, 0.3, 0.4, 0.3).
        let wv = normalized_weights::<f64>(WeightKind::Quadratic, 4).unwrap();
        let want = [0.0, 0.3, 0.4, 0.3];
        for (got, want) in wv.weights().iter().zip(want) {
            assert!((got - want).abs() <= 4.0 * f64::EPSILON, "{got} vs {want}");
        }
    }

    #[test]
    fn equal_four_terms_is_uniform() {
        let wv = normalized_weights::<f64>(WeightKind::Equal, 4).unwrap();
        assert_eq!(wv.weights(), &[0.25; 4]);
    }

    #[test]
    fn normalization_endpoints_and_positivity() {
        for kind in all_kinds() {
            for n in [2usize, 3, 10, 101, 1000] {
                let wv = normalized_weights::<f64>(kind, n).unwrap();
                assert_eq!(wv.len(), n);
                let sum: f64 = reduce::sum_slice(wv.weights());
                assert!(
                    (sum - 1.0).abs() <= 4.0 * f64::EPSILON,
                    "{kind} N={n}: sum {sum}"
                );
                assert!(wv.weights().iter().all(|&w| w >= 0.0));
                if kind != WeightKind::Equal {
                    assert_eq!(wv.weights()[0], 0.0, "{kind} must vanish at t=0");
                }
            }
        }
    }

    #[test]
    fn normalization_sum_extended() {
        for kind in all_kinds() {
            let wv = normalized_weights::<Dd>(kind, 257).unwrap();
            let sum = reduce::sum_slice(wv.weights());
            assert!((sum - Dd::ONE).abs().to_f64() < 4.0 * Dd::EPSILON.to_f64());
        }
    }

    #[test]
    fn raw_weight_is_symmetric_about_one_half() {
        // Dyadic t keeps 1−t exact, isolating the formula symmetry itself.
        for kind in all_kinds() {
            for i in 1..64u32 {
                let t = f64::from(i) / 64.0;
                let a = raw_weight(kind, t);
                let b = raw_weight(kind, 1.0 - t);
                // Absolute tolerance: near a vanishing endpoint the rounding
                // of the argument π·t amplifies the *relative* error of
                // sin²(πt) by ~1/(1−t), but the absolute error stays at the
                // epsilon scale of the weight's overall magnitude (≤ 1).
                assert!((a - b).abs() <= 8.0 * f64::EPSILON, "{kind} t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn exponential_flushes_to_exact_zero_near_endpoints() {
        for p in 1..=3u32 {
            let kind = WeightKind::exponential(p).unwrap();
            for k in 3..=8 {
                let t = 10f64.powi(-k);
                assert_eq!(raw_weight(kind, t), 0.0, "p={p} t=1e-{k}");
                assert_eq!(raw_weight(kind, 1.0 - t), 0.0, "p={p} t=1-1e-{k}");
            }
            // Just inside the flush threshold the weight is tiny but nonzero
            // (the probe point moves outward as p steepens the bump).
            let t_probe = [0.05, 0.05, 0.15][(p - 1) as usize];
            let w = raw_weight(kind, t_probe);
            assert!(w > 0.0 && w < 1e-8, "p={p}: {w}");
        }
    }

    #[test]
    fn too_few_terms_rejected() {
        for n in [0usize, 1] {
            assert!(normalized_weights::<f64>(WeightKind::SinSquared, n).is_err());
        }
        // So steep that every interior sample of a 2-point grid underflows.
        let steep = WeightKind::exponential(200).unwrap();
        assert!(normalized_weights::<f64>(steep, 2).is_err());
    }

    #[test]
    fn kind_string_round_trip() {
        for s in KINDS {
            let kind: WeightKind = s.parse().unwrap();
            assert_eq!(kind.to_string(), s);
        }
        assert_eq!("sin2".parse::<WeightKind>().unwrap(), WeightKind::SinSquared);
        assert_eq!(
            "exp".parse::<WeightKind>().unwrap(),
            WeightKind::exponential_1()
        );
        assert!("exp:0".parse::<WeightKind>().is_err());
        assert!("hann".parse::<WeightKind>().is_err());
        let json = serde_json::to_string(&WeightKind::exponential_1()).unwrap();
        assert_eq!(json, "\"exponential:1\"");
        let back: WeightKind = serde_json::from_str(&json).unwrap();
        assert_eq!(back, WeightKind::exponential_1());
    }
}
