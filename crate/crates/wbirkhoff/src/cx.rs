//! Minimal complex scalar over a [`Real`]. Only the surface the averaging
//! and Fourier kernels need; deliberately not a general-purpose complex type.

use crate::real::Real;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Cx<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Cx<R> {
    #[inline]
    pub fn new(re: R, im: R) -> Cx<R> {
        Cx { re, im }
    }

    #[inline]
    pub fn zero() -> Cx<R> {
        Cx { re: R::zero(), im: R::zero() }
    }

    #[inline]
    pub fn one() -> Cx<R> {
        Cx { re: R::one(), im: R::zero() }
    }

    #[inline]
    pub fn from_re(re: R) -> Cx<R> {
        Cx { re, im: R::zero() }
    }

    /// e^(i angle).
    #[inline]
    pub fn cis(angle: R) -> Cx<R> {
        let (s, c) = angle.sin_cos();
        Cx { re: c, im: s }
    }

    #[inline]
    pub fn conj(self) -> Cx<R> {
        Cx { re: self.re, im: -self.im }
    }

    #[inline]
    pub fn scale(self, k: R) -> Cx<R> {
        Cx { re: self.re * k, im: self.im * k }
    }

    #[inline]
    pub fn norm_sqr(self) -> R {
        self.re * self.re + self.im * self.im
    }

    #[inline]
    pub fn abs(self) -> R {
        self.norm_sqr().sqrt()
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn to_f64_pair(self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl<R: Real> Add for Cx<R> {
    type Output = Cx<R>;
    #[inline]
    fn add(self, rhs: Cx<R>) -> Cx<R> {
        Cx { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<R: Real> Sub for Cx<R> {
    type Output = Cx<R>;
    #[inline]
    fn sub(self, rhs: Cx<R>) -> Cx<R> {
        Cx { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<R: Real> Mul for Cx<R> {
    type Output = Cx<R>;
    #[inline]
    fn mul(self, rhs: Cx<R>) -> Cx<R> {
        Cx {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl<R: Real> Neg for Cx<R> {
    type Output = Cx<R>;
    #[inline]
    fn neg(self) -> Cx<R> {
        Cx { re: -self.re, im: -self.im }
    }
}

impl<R: Real> AddAssign for Cx<R> {
    #[inline]
    fn add_assign(&mut self, rhs: Cx<R>) {
        *self = *self + rhs;
    }
}

impl<R: Real> SubAssign for Cx<R> {
    #[inline]
    fn sub_assign(&mut self, rhs: Cx<R>) {
        *self = *self - rhs;
    }
}

impl<R: Real> fmt::Display for Cx<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im < R::zero() { "" } else { "+" };
        write!(f, "{}{}{}i", self.re, sign, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dd::Dd;

    #[test]
    fn multiplication_matches_hand_values() {
        let a = Cx::new(1.0, 2.0);
        let b = Cx::new(3.0, -1.0);
        assert_eq!(a * b, Cx::new(5.0, 5.0));
        assert_eq!((a * a.conj()).re, 5.0);
        assert_eq!((a * a.conj()).im, 0.0);
    }

    #[test]
    fn cis_unit_modulus() {
        for t in [0.0, 0.3, 1.7, -2.4] {
            let z: Cx<f64> = Cx::cis(t);
            assert!((z.abs() - 1.0).abs() < 1e-15);
        }
        let z: Cx<Dd> = Cx::cis(Dd::from_f64(0.77));
        assert!((z.abs() - Dd::ONE).abs().to_f64() < 1e-30);
    }
}
