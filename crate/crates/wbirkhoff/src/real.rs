//! Scalar abstraction over the two precision tiers: native `f64` (~16
//! significant digits) and software double-double (~32). Every averaging
//! kernel is generic over [`Real`], so the tier is a property of the
//! computation context rather than of any particular routine.

use crate::dd::Dd;
use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// Which scalar backs a computation.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrecisionTier {
    Standard,
    Extended,
}

impl PrecisionTier {
    pub fn name(self) -> &'static str {
        match self {
            PrecisionTier::Standard => "standard",
            PrecisionTier::Extended => "extended",
        }
    }
}

impl Display for PrecisionTier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Floating scalar with the operation surface the averaging kernels need.
pub trait Real:
    Copy
    + PartialOrd
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    const TIER: PrecisionTier;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    /// Exact for |n| < 2^53.
    fn from_usize(n: usize) -> Self;
    fn from_i64(n: i64) -> Self;
    fn to_f64(self) -> f64;
    /// Exact embedding into double-double.
    fn widen(self) -> Dd;
    /// Nearest value in this tier.
    fn narrow(x: Dd) -> Self;

    fn pi() -> Self;
    fn two_pi() -> Self;

    fn abs(self) -> Self;
    fn floor(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn atan2(self, x: Self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn is_finite(self) -> bool;
    fn max(self, other: Self) -> Self;
    fn min(self, other: Self) -> Self;

    /// Unit roundoff of the tier.
    fn epsilon() -> f64;
    /// Significant decimal digits that survive a round-trip print.
    fn sig_digits() -> usize;
    /// Magnitude below which computed Fourier moduli are treated as noise.
    fn coeff_floor() -> f64;

    /// Sum and error of `a + b`; the error term may be zero when the
    /// representation already absorbs it (double-double).
    fn two_sum(a: Self, b: Self) -> (Self, Self);

    /// Full-precision decimal rendering (17 or 36 significant digits).
    fn format_full(self) -> String;

    /// Fractional part in [0, 1).
    fn fract(self) -> Self {
        let r = self - self.floor();
        if r < Self::zero() {
            r + Self::one()
        } else if r >= Self::one() {
            r - Self::one()
        } else {
            r
        }
    }

    /// Reduces into `[0, period)`, guarded against rounding at the seam.
    fn fract_period(self, period: Self) -> Self {
        let r = self - (self / period).floor() * period;
        if r < Self::zero() {
            r + period
        } else if r >= period {
            r - period
        } else {
            r
        }
    }
}

impl Real for f64 {
    const TIER: PrecisionTier = PrecisionTier::Standard;

    #[inline]
    fn zero() -> f64 {
        0.0
    }
    #[inline]
    fn one() -> f64 {
        1.0
    }
    #[inline]
    fn from_f64(x: f64) -> f64 {
        x
    }
    #[inline]
    fn from_usize(n: usize) -> f64 {
        n as f64
    }
    #[inline]
    fn from_i64(n: i64) -> f64 {
        n as f64
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn widen(self) -> Dd {
        Dd::from_f64(self)
    }
    #[inline]
    fn narrow(x: Dd) -> f64 {
        x.to_f64()
    }
    #[inline]
    fn pi() -> f64 {
        std::f64::consts::PI
    }
    #[inline]
    fn two_pi() -> f64 {
        std::f64::consts::TAU
    }
    #[inline]
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    #[inline]
    fn floor(self) -> f64 {
        f64::floor(self)
    }
    #[inline]
    fn sqrt(self) -> f64 {
        f64::sqrt(self)
    }
    #[inline]
    fn exp(self) -> f64 {
        f64::exp(self)
    }
    #[inline]
    fn ln(self) -> f64 {
        f64::ln(self)
    }
    #[inline]
    fn sin(self) -> f64 {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> f64 {
        f64::cos(self)
    }
    #[inline]
    fn sin_cos(self) -> (f64, f64) {
        f64::sin_cos(self)
    }
    #[inline]
    fn atan2(self, x: f64) -> f64 {
        f64::atan2(self, x)
    }
    #[inline]
    fn powi(self, n: i32) -> f64 {
        f64::powi(self, n)
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    #[inline]
    fn max(self, other: f64) -> f64 {
        f64::max(self, other)
    }
    #[inline]
    fn min(self, other: f64) -> f64 {
        f64::min(self, other)
    }
    #[inline]
    fn epsilon() -> f64 {
        f64::EPSILON
    }
    #[inline]
    fn sig_digits() -> usize {
        17
    }
    #[inline]
    fn coeff_floor() -> f64 {
        1e-13
    }
    #[inline]
    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        (s, err)
    }
    fn format_full(self) -> String {
        format!("{:.16e}", self)
    }
}

impl Real for Dd {
    const TIER: PrecisionTier = PrecisionTier::Extended;

    #[inline]
    fn zero() -> Dd {
        Dd::ZERO
    }
    #[inline]
    fn one() -> Dd {
        Dd::ONE
    }
    #[inline]
    fn from_f64(x: f64) -> Dd {
        Dd::from_f64(x)
    }
    #[inline]
    fn from_usize(n: usize) -> Dd {
        Dd::from_i64(n as i64)
    }
    #[inline]
    fn from_i64(n: i64) -> Dd {
        Dd::from_i64(n)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    #[inline]
    fn widen(self) -> Dd {
        self
    }
    #[inline]
    fn narrow(x: Dd) -> Dd {
        x
    }
    #[inline]
    fn pi() -> Dd {
        crate::dd::dd_pi()
    }
    #[inline]
    fn two_pi() -> Dd {
        crate::dd::dd_two_pi()
    }
    #[inline]
    fn abs(self) -> Dd {
        Dd::abs(self)
    }
    #[inline]
    fn floor(self) -> Dd {
        Dd::floor(self)
    }
    #[inline]
    fn sqrt(self) -> Dd {
        Dd::sqrt(self)
    }
    #[inline]
    fn exp(self) -> Dd {
        Dd::exp(self)
    }
    #[inline]
    fn ln(self) -> Dd {
        Dd::ln(self)
    }
    #[inline]
    fn sin(self) -> Dd {
        Dd::sin(self)
    }
    #[inline]
    fn cos(self) -> Dd {
        Dd::cos(self)
    }
    #[inline]
    fn sin_cos(self) -> (Dd, Dd) {
        Dd::sin_cos(self)
    }
    #[inline]
    fn atan2(self, x: Dd) -> Dd {
        Dd::atan2(self, x)
    }
    #[inline]
    fn powi(self, n: i32) -> Dd {
        Dd::powi(self, n)
    }
    #[inline]
    fn is_finite(self) -> bool {
        Dd::is_finite(self)
    }
    #[inline]
    fn max(self, other: Dd) -> Dd {
        Dd::max(self, other)
    }
    #[inline]
    fn min(self, other: Dd) -> Dd {
        Dd::min(self, other)
    }
    #[inline]
    fn epsilon() -> f64 {
        Dd::EPSILON
    }
    #[inline]
    fn sig_digits() -> usize {
        36
    }
    #[inline]
    fn coeff_floor() -> f64 {
        1e-28
    }
    #[inline]
    fn two_sum(a: Dd, b: Dd) -> (Dd, Dd) {
        // Dd addition already folds the rounding error of the heads into the
        // tails; a second-order compensation term would be ~1e-64 noise.
        (a + b, Dd::ZERO)
    }
    #[inline]
    fn fract(self) -> Dd {
        Dd::fract(self)
    }
    fn format_full(self) -> String {
        self.to_sig_string(36)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fract_cases<R: Real>() {
        assert_eq!(R::from_f64(2.25).fract().to_f64(), 0.25);
        assert_eq!(R::from_f64(-2.25).fract().to_f64(), 0.75);
        assert_eq!(R::from_f64(0.0).fract().to_f64(), 0.0);
    }

    #[test]
    fn fract_both_tiers() {
        fract_cases::<f64>();
        fract_cases::<Dd>();
    }

    #[test]
    fn widen_narrow_roundtrip() {
        let x: f64 = 0.1234567890123;
        assert_eq!(f64::narrow(x.widen()), x);
    }

    #[test]
    fn tier_metadata() {
        assert_eq!(<f64 as Real>::TIER.name(), "standard");
        assert_eq!(<Dd as Real>::TIER.name(), "extended");
        assert!(f64::epsilon() > Dd::epsilon());
    }

    #[test]
    fn format_full_roundtrips() {
        let x: f64 = std::f64::consts::PI / 7.0;
        let s = x.format_full();
        assert_eq!(s.parse::<f64>().unwrap(), x);
    }
}
