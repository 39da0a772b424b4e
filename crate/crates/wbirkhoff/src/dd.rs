//! Double-double arithmetic: an unevaluated sum of two `f64`s giving ~31-32
//! significant decimal digits. This is the backing scalar of the extended
//! precision tier and is also used internally at the standard tier for phase
//! argument reduction, where k·n·ρ can reach 1e10 and plain `f64` would lose
//! the fractional part.
//!
//! Algorithms are the classical error-free transformations (Dekker, Knuth)
//! plus Newton refinement for the inverse functions. Invariant: `lo.abs() <=
//! ulp(hi)/2` (normalized representation); all constructors maintain it.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::OnceLock;

/// Two-float scalar `hi + lo` with non-overlapping mantissas.
#[derive(Copy, Clone, Debug, Default)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

/// Sum and exact rounding error of `a + b` (Knuth two-sum, no magnitude order).
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Two-sum when `|a| >= |b|` is already known.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

/// Product and exact rounding error of `a * b` via fused multiply-add.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = f64::mul_add(a, b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    /// Machine epsilon of the format, 2^-104.
    pub const EPSILON: f64 = 4.93038065763132e-32;

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact for |n| < 2^53.
    #[inline]
    pub fn from_i64(n: i64) -> Dd {
        Dd { hi: n as f64, lo: 0.0 }
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    /// Nearest f64. `hi` is already the correctly rounded head for a
    /// normalized value; adding `lo` settles the half-ulp ties.
    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline]
    pub fn is_nan(self) -> bool {
        self.hi.is_nan() || self.lo.is_nan()
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    #[inline]
    pub fn is_sign_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.is_sign_negative() {
            -self
        } else {
            self
        }
    }

    /// Exact scaling by a power of two.
    #[inline]
    pub fn mul_pow2(self, k: i32) -> Dd {
        let f = libm_ldexp(1.0, k);
        Dd { hi: self.hi * f, lo: self.lo * f }
    }

    pub fn floor(self) -> Dd {
        let f = self.hi.floor();
        if f == self.hi {
            // hi is integral; the fractional information lives in lo.
            Dd::new(f, self.lo.floor())
        } else {
            Dd { hi: f, lo: 0.0 }
        }
    }

    /// Fractional part in [0, 1).
    pub fn fract(self) -> Dd {
        let r = self - self.floor();
        // Guard the half-open interval against rounding at the seam.
        if r.hi < 0.0 {
            r + Dd::ONE
        } else if r.hi >= 1.0 {
            r - Dd::ONE
        } else {
            r
        }
    }

    pub fn round(self) -> Dd {
        (self + Dd::new(0.5, 0.0)).floor()
    }

    #[inline]
    pub fn recip(self) -> Dd {
        Dd::ONE / self
    }

    pub fn sqrt(self) -> Dd {
        if self.is_zero() {
            return Dd::ZERO;
        }
        if self.hi < 0.0 {
            return Dd::from_f64(f64::NAN);
        }
        // Karp: one Newton step on a correctly seeded f64 root reaches full
        // double-double accuracy.
        let y0 = self.hi.sqrt();
        let y = Dd::from_f64(y0);
        (self / y + y).mul_pow2(-1)
    }

    pub fn powi(self, n: i32) -> Dd {
        if n == 0 {
            return Dd::ONE;
        }
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    pub fn max(self, other: Dd) -> Dd {
        if self < other {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Dd) -> Dd {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -709.0 {
            return Dd::ZERO;
        }
        if self.is_zero() {
            return Dd::ONE;
        }
        // exp(x) = 2^m * exp(r)^512 with r = (x - m ln2)/512, |r| <= ln2/1024.
        let m = (self.hi / LN2_F64).round();
        let r = (self - dd_ln2() * Dd::from_f64(m)).mul_pow2(-9);
        // expm1(r) by Taylor; |r| < 6.8e-4 so 11 terms reach 1e-35.
        let mut term = r;
        let mut s = r;
        for k in 2..=12u32 {
            term = term * r / Dd::from_i64(k as i64);
            s += term;
            if term.hi.abs() < 1e-35 {
                break;
            }
        }
        // Undo the /512 by repeated squaring in expm1 form: s <- 2s + s^2.
        for _ in 0..9 {
            s = s.mul_pow2(1) + s * s;
        }
        (s + Dd::ONE).mul_pow2(m as i32)
    }

    pub fn ln(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::from_f64(if self.is_zero() { f64::NEG_INFINITY } else { f64::NAN });
        }
        // Newton on y -> y + x e^{-y} - 1, doubling correct digits per pass.
        let mut y = Dd::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Dd::ONE;
        }
        y
    }

    /// Simultaneous sine and cosine. Accurate for |x| up to ~1e9; callers in
    /// this crate always reduce phases to [0, 2pi) first.
    pub fn sin_cos(self) -> (Dd, Dd) {
        if !self.is_finite() {
            let nan = Dd::from_f64(f64::NAN);
            return (nan, nan);
        }
        if self.is_zero() {
            return (Dd::ZERO, Dd::ONE);
        }
        let half_pi = dd_pi().mul_pow2(-1);
        let m = (self.to_f64() / (0.5 * std::f64::consts::PI)).round();
        let t = self - half_pi * Dd::from_f64(m);
        let (st, ct) = sin_cos_taylor(t);
        match (m as i64).rem_euclid(4) {
            0 => (st, ct),
            1 => (ct, -st),
            2 => (-st, -ct),
            _ => (-ct, st),
        }
    }

    pub fn sin(self) -> Dd {
        self.sin_cos().0
    }

    pub fn cos(self) -> Dd {
        self.sin_cos().1
    }

    /// Quadrant-correct arctangent of `self / x`, result in (-pi, pi].
    pub fn atan2(self, x: Dd) -> Dd {
        let y = self;
        if y.is_zero() {
            return if x.is_sign_negative() && !x.is_zero() { dd_pi() } else { Dd::ZERO };
        }
        if x.is_zero() {
            let half_pi = dd_pi().mul_pow2(-1);
            return if y.is_sign_negative() { -half_pi } else { half_pi };
        }
        // f64 seed carries the quadrant; two Newton passes via sin/cos add
        // the remaining digits (correction = tan(theta - a) ~ 1e-17, 1e-34).
        let mut a = Dd::from_f64(y.to_f64().atan2(x.to_f64()));
        for _ in 0..2 {
            let (s, c) = a.sin_cos();
            let num = y * c - x * s;
            let den = x * c + y * s;
            a += num / den;
        }
        a
    }
}

/// Taylor kernels on |t| <= pi/4 + eps.
fn sin_cos_taylor(t: Dd) -> (Dd, Dd) {
    let t2 = t * t;
    let mut sin = t;
    let mut term = t;
    let mut k = 1i64;
    loop {
        term = term * t2 / Dd::from_i64(-((2 * k) * (2 * k + 1)));
        sin += term;
        k += 1;
        if term.hi.abs() < 1e-35 || k > 20 {
            break;
        }
    }
    let mut cos = Dd::ONE;
    term = Dd::ONE;
    k = 1;
    loop {
        term = term * t2 / Dd::from_i64(-((2 * k - 1) * (2 * k)));
        cos += term;
        k += 1;
        if term.hi.abs() < 1e-35 || k > 20 {
            break;
        }
    }
    (sin, cos)
}

const LN2_F64: f64 = std::f64::consts::LN_2;

fn parse_unwrap(s: &str) -> Dd {
    Dd::from_decimal_str(s).expect("builtin constant literal")
}

/// pi to 40 digits.
pub fn dd_pi() -> Dd {
    static PI: OnceLock<Dd> = OnceLock::new();
    *PI.get_or_init(|| parse_unwrap("3.141592653589793238462643383279502884197"))
}

/// 2 pi.
pub fn dd_two_pi() -> Dd {
    static TWO_PI: OnceLock<Dd> = OnceLock::new();
    *TWO_PI.get_or_init(|| dd_pi().mul_pow2(1))
}

/// ln 2 to 40 digits.
pub fn dd_ln2() -> Dd {
    static LN2: OnceLock<Dd> = OnceLock::new();
    *LN2.get_or_init(|| parse_unwrap("0.6931471805599453094172321214581765680755"))
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (s1, s2) = quick_two_sum(s1, s2 + t2);
        Dd { hi: s1, lo: s2 }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (s1, s2) = quick_two_sum(p1, p2);
        Dd { hi: s1, lo: s2 }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        // Long division: three f64 quotient terms then renormalize.
        let q1 = self.hi / rhs.hi;
        let mut r = self - rhs * Dd::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        r -= rhs * Dd::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (s1, s2) = quick_two_sum(q1, q2);
        Dd::new(s1, s2 + q3)
    }
}

impl AddAssign for Dd {
    #[inline]
    fn add_assign(&mut self, rhs: Dd) {
        *self = *self + rhs;
    }
}

impl SubAssign for Dd {
    #[inline]
    fn sub_assign(&mut self, rhs: Dd) {
        *self = *self - rhs;
    }
}

impl MulAssign for Dd {
    #[inline]
    fn mul_assign(&mut self, rhs: Dd) {
        *self = *self * rhs;
    }
}

impl DivAssign for Dd {
    #[inline]
    fn div_assign(&mut self, rhs: Dd) {
        *self = *self / rhs;
    }
}

impl PartialEq for Dd {
    #[inline]
    fn eq(&self, other: &Dd) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for Dd {
    #[inline]
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

fn libm_ldexp(x: f64, k: i32) -> f64 {
    // Exact power-of-two scaling without a libm dependency. The exponent
    // range used by this crate (|k| <= ~1100) is covered by two steps.
    if (-1022..=1023).contains(&k) {
        x * f64::from_bits(((k + 1023) as u64) << 52)
    } else if k > 0 {
        x * f64::from_bits(((1023 + 1023) as u64) << 52)
            * f64::from_bits((((k - 1023).clamp(-1022, 1023) + 1023) as u64) << 52)
    } else {
        x * f64::from_bits(((-1022 + 1023) as u64) << 52)
            * f64::from_bits((((k + 1022).clamp(-1022, 1023) + 1023) as u64) << 52)
    }
}

// ---------------------------------------------------------------------------
// Decimal conversion.
// ---------------------------------------------------------------------------

/// Error from parsing a decimal literal into `Dd`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDdError(String);

impl fmt::Display for ParseDdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid double-double literal: {}", self.0)
    }
}

impl std::error::Error for ParseDdError {}

/// 10^n for n >= 0, built from exactly representable factors (10^k is exact
/// in f64 for k <= 22, and the two-limb product of two exact factors is
/// exact), so the result carries at most ~1 ulp of Dd rounding.
fn pow10(n: i32) -> Dd {
    debug_assert!(n >= 0);
    let mut left = n;
    let mut acc = Dd::ONE;
    while left > 0 {
        let step = left.min(22);
        acc *= Dd::from_f64(10f64.powi(step));
        left -= step;
    }
    acc
}

impl Dd {
    /// Parses `[+-]ddd[.ddd][eE[+-]ddd]` to within ~2 ulps of the format.
    /// Digits accumulate in exact 16-digit integer chunks; the decimal scale
    /// is applied as one multiplication or division by an exact power of ten.
    pub fn from_decimal_str(s: &str) -> Result<Dd, ParseDdError> {
        let t = s.trim();
        let err = || ParseDdError(s.to_string());
        let mut chars = t.chars().peekable();
        let mut neg = false;
        match chars.peek() {
            Some('+') => {
                chars.next();
            }
            Some('-') => {
                neg = true;
                chars.next();
            }
            _ => {}
        }
        let mut acc = Dd::ZERO;
        let mut chunk: u64 = 0;
        let mut chunk_len: u32 = 0;
        let mut frac_digits: i32 = 0;
        let mut seen_point = false;
        let mut seen_digit = false;
        let mut exp: i32 = 0;
        let flush = |acc: &mut Dd, chunk: &mut u64, chunk_len: &mut u32| {
            if *chunk_len > 0 {
                *acc = *acc * Dd::from_f64(10f64.powi(*chunk_len as i32))
                    + Dd::from_i64(*chunk as i64);
                *chunk = 0;
                *chunk_len = 0;
            }
        };
        while let Some(&c) = chars.peek() {
            match c {
                '0'..='9' => {
                    chunk = chunk * 10 + (c as u8 - b'0') as u64;
                    chunk_len += 1;
                    if chunk_len == 16 {
                        flush(&mut acc, &mut chunk, &mut chunk_len);
                    }
                    if seen_point {
                        frac_digits += 1;
                    }
                    seen_digit = true;
                    chars.next();
                }
                '.' if !seen_point => {
                    seen_point = true;
                    chars.next();
                }
                'e' | 'E' => {
                    chars.next();
                    let rest: String = chars.collect();
                    exp = rest.trim().parse::<i32>().map_err(|_| err())?;
                    chars = "".chars().peekable();
                }
                _ => return Err(err()),
            }
        }
        flush(&mut acc, &mut chunk, &mut chunk_len);
        if !seen_digit {
            return Err(err());
        }
        let scale = exp - frac_digits;
        let mut v = match scale.cmp(&0) {
            std::cmp::Ordering::Equal => acc,
            std::cmp::Ordering::Greater => acc * pow10(scale),
            std::cmp::Ordering::Less => acc / pow10(-scale),
        };
        if neg {
            v = -v;
        }
        Ok(v)
    }

    /// Scientific-notation string with `ndigits` significant digits
    /// (clamped to 1..=36).
    pub fn to_sig_string(self, ndigits: usize) -> String {
        let nd = ndigits.clamp(1, 36);
        if self.is_nan() {
            return "NaN".into();
        }
        if !self.is_finite() {
            return if self.is_sign_negative() { "-inf".into() } else { "inf".into() };
        }
        if self.is_zero() {
            return if nd == 1 {
                "0e0".into()
            } else {
                format!("0.{}e0", "0".repeat(nd - 1))
            };
        }
        let neg = self.is_sign_negative();
        let x = self.abs();
        let mut e10 = x.hi.abs().log10().floor() as i32;
        // Normalize r into [1, 10); the log estimate can be off by one.
        let mut r = if e10 >= 0 { x / pow10(e10) } else { x * pow10(-e10) };
        if r.hi >= 10.0 {
            r /= Dd::from_i64(10);
            e10 += 1;
        } else if r.hi < 1.0 {
            r *= Dd::from_i64(10);
            e10 -= 1;
        }
        // Extract nd+1 digits, then carry-correct and round.
        let mut digits = Vec::with_capacity(nd + 1);
        for _ in 0..=nd {
            let d = r.hi.floor() as i32;
            digits.push(d);
            r = (r - Dd::from_i64(d as i64)) * Dd::from_i64(10);
        }
        for i in (1..digits.len()).rev() {
            if digits[i] < 0 {
                digits[i] += 10;
                digits[i - 1] -= 1;
            } else if digits[i] > 9 {
                digits[i] -= 10;
                digits[i - 1] += 1;
            }
        }
        // Round at digit nd.
        if digits[nd] >= 5 {
            let mut i = nd - 1;
            loop {
                digits[i] += 1;
                if digits[i] <= 9 || i == 0 {
                    break;
                }
                digits[i] = 0;
                i -= 1;
            }
        }
        digits.truncate(nd);
        if digits[0] == 10 {
            digits[0] = 1;
            digits.iter_mut().skip(1).for_each(|d| *d = 0);
            e10 += 1;
        }
        debug_assert!(digits[0] >= 1 && digits[0] <= 9, "leading digit {}", digits[0]);
        let body: String = digits.iter().map(|d| char::from(b'0' + *d as u8)).collect();
        let mantissa = if nd == 1 {
            body
        } else {
            format!("{}.{}", &body[..1], &body[1..])
        };
        format!("{}{}e{}", if neg { "-" } else { "" }, mantissa, e10)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nd = f.precision().unwrap_or(32);
        f.pad(&self.to_sig_string(nd))
    }
}

impl serde::Serialize for Dd {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_sig_string(36))
    }
}

impl<'de> serde::Deserialize<'de> for Dd {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Dd, D::Error> {
        let s = String::deserialize(d)?;
        Dd::from_decimal_str(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: Dd, b: Dd, tol: f64, what: &str) {
        let d = (a - b).abs().to_f64();
        assert!(d <= tol, "{what}: |{a} - {b}| = {d:e} > {tol:e}");
    }

    #[test]
    fn two_sum_exactness() {
        let (s, e) = two_sum(1.0, 1e-30);
        assert_eq!(s, 1.0);
        assert_eq!(e, 1e-30);
    }

    #[test]
    fn add_sub_roundtrip() {
        let a = Dd::from_decimal_str("0.123456789012345678901234567890123").unwrap();
        let b = Dd::from_decimal_str("7.89012345678901234567890123456789e-5").unwrap();
        assert_close((a + b) - b, a, 1e-33, "a+b-b");
        assert_close((a - b) + b, a, 1e-33, "a-b+b");
    }

    #[test]
    fn mul_div_roundtrip() {
        let a = Dd::from_decimal_str("3.14159265358979323846264338327950288").unwrap();
        let b = Dd::from_decimal_str("2.71828182845904523536028747135266250").unwrap();
        assert_close(a * b / b, a, 1e-31, "a*b/b");
        assert_close(Dd::ONE / (Dd::ONE / a), a, 1e-31, "1/(1/a)");
    }

    #[test]
    fn sqrt_squares_back() {
        for s in ["2", "3", "5", "0.0001234", "987654.321"] {
            let x = Dd::from_decimal_str(s).unwrap();
            let r = x.sqrt();
            assert_close(r * r, x, x.to_f64() * 1e-31, s);
        }
    }

    #[test]
    fn sqrt2_reference() {
        // 40-digit reference value.
        let r = Dd::from_decimal_str("1.414213562373095048801688724209698078570").unwrap();
        assert_close(Dd::from_i64(2).sqrt(), r, 1e-31, "sqrt(2)");
    }

    #[test]
    fn pi_against_machin_series() {
        // Independent oracle: pi = 16 atan(1/5) - 4 atan(1/239) with the
        // arctangents summed as raw Taylor series in Dd arithmetic.
        fn atan_taylor(inv: i64) -> Dd {
            let x = Dd::ONE / Dd::from_i64(inv);
            let x2 = x * x;
            let mut term = x;
            let mut sum = x;
            let mut k = 1i64;
            loop {
                term = term * x2;
                let t = term / Dd::from_i64(2 * k + 1);
                if k % 2 == 1 {
                    sum -= t;
                } else {
                    sum += t;
                }
                if t.hi.abs() < 1e-36 {
                    break;
                }
                k += 1;
            }
            sum
        }
        let pi = atan_taylor(5).mul_pow2(4) - atan_taylor(239).mul_pow2(2);
        assert_close(dd_pi(), pi, 1e-31, "machin pi");
    }

    #[test]
    fn ln2_against_atanh_series() {
        // ln 2 = 2 atanh(1/3) = 2 sum (1/3)^(2k+1)/(2k+1).
        let third = Dd::ONE / Dd::from_i64(3);
        let t2 = third * third;
        let mut term = third;
        let mut sum = third;
        let mut k = 1i64;
        loop {
            term = term * t2;
            let t = term / Dd::from_i64(2 * k + 1);
            sum += t;
            if t.hi.abs() < 1e-36 {
                break;
            }
            k += 1;
        }
        assert_close(dd_ln2(), sum.mul_pow2(1), 1e-32, "atanh ln2");
    }

    #[test]
    fn exp_ln_inverse_pair() {
        for s in ["0.5", "-0.5", "3.25", "-7.125", "13.0009765625", "-650.0"] {
            let x = Dd::from_decimal_str(s).unwrap();
            let back = x.exp().ln();
            assert_close(back, x, 1e-30 * (1.0 + x.to_f64().abs()), s);
        }
    }

    #[test]
    fn exp_of_one_matches_factorial_series() {
        let mut sum = Dd::ONE;
        let mut term = Dd::ONE;
        for k in 1..=40i64 {
            term = term / Dd::from_i64(k);
            sum += term;
        }
        assert_close(Dd::ONE.exp(), sum, 1e-31, "e via series");
        // 40-digit reference.
        let e = Dd::from_decimal_str("2.718281828459045235360287471352662497757").unwrap();
        assert_close(Dd::ONE.exp(), e, 1e-31, "e reference");
    }

    #[test]
    fn exp_extreme_arguments() {
        assert!(Dd::from_f64(-800.0).exp().is_zero());
        assert!(!Dd::from_f64(800.0).exp().is_finite());
        // Near the underflow edge the result should still be a positive zero
        // or a tiny normal, never NaN.
        let w = Dd::from_f64(-708.0).exp();
        assert!(w.is_finite() && w.hi >= 0.0);
    }

    #[test]
    fn sin_cos_identities() {
        for s in ["0.1", "0.7", "1.0", "2.5", "3.14159", "5.9", "-1.2345"] {
            let x = Dd::from_decimal_str(s).unwrap();
            let (sn, cs) = x.sin_cos();
            assert_close(sn * sn + cs * cs, Dd::ONE, 5e-31, "pythagoras");
            let (s2, c2) = (x + x).sin_cos();
            assert_close(s2, sn * cs * Dd::from_i64(2), 5e-31, "sin(2x)");
            assert_close(c2, cs * cs - sn * sn, 5e-31, "cos(2x)");
        }
    }

    #[test]
    fn sin_cos_of_one_reference() {
        let s1 = Dd::from_decimal_str("0.8414709848078965066525023216302989996226").unwrap();
        let c1 = Dd::from_decimal_str("0.5403023058681397174009366074429766037323").unwrap();
        let (s, c) = Dd::ONE.sin_cos();
        assert_close(s, s1, 1e-31, "sin 1");
        assert_close(c, c1, 1e-31, "cos 1");
    }

    #[test]
    fn atan2_recovers_angle() {
        for s in ["0.3", "1.1", "2.9", "-0.4", "-2.2", "3.0"] {
            let th = Dd::from_decimal_str(s).unwrap();
            let (sn, cs) = th.sin_cos();
            assert_close(sn.atan2(cs), th, 1e-31, s);
        }
        assert_close(Dd::ZERO.atan2(-Dd::ONE), dd_pi(), 1e-31, "atan2(0,-1)");
        assert_close(Dd::ONE.atan2(Dd::ZERO), dd_pi().mul_pow2(-1), 1e-31, "atan2(1,0)");
        assert_eq!(Dd::ZERO.atan2(Dd::ONE), Dd::ZERO);
    }

    #[test]
    fn floor_and_fract() {
        let x = Dd::new(3.0, -1e-25);
        assert_eq!(x.floor(), Dd::from_i64(2));
        let y = Dd::new(3.0, 1e-25);
        assert_eq!(y.floor(), Dd::from_i64(3));
        assert!((y.fract() - Dd::new(0.0, 1e-25)).abs().to_f64() < 1e-38);
        let z = Dd::from_decimal_str("-2.25").unwrap();
        assert_eq!(z.floor(), Dd::from_i64(-3));
        assert_close(z.fract(), Dd::from_decimal_str("0.75").unwrap(), 0.0, "fract(-2.25)");
        let big = Dd::from_decimal_str("123456789.9999").unwrap();
        assert_eq!(big.floor(), Dd::from_i64(123456789));
        let exact = Dd::from_decimal_str("123456789.75").unwrap();
        assert_eq!(exact.floor(), Dd::from_i64(123456789));
    }

    #[test]
    fn ordering_uses_both_limbs() {
        let a = Dd::new(1.0, 1e-20);
        let b = Dd::new(1.0, -1e-20);
        assert!(b < a);
        assert!(a > Dd::ONE);
        assert!(b < Dd::ONE);
    }

    #[test]
    fn decimal_roundtrip_36_digits() {
        let cases = [
            "1.23456789012345678901234567890123456e-3",
            "9.87654321098765432109876543210987654e17",
            "-4.04QQ",
        ];
        for s in &cases[..2] {
            let x = Dd::from_decimal_str(s).unwrap();
            let back = Dd::from_decimal_str(&x.to_sig_string(36)).unwrap();
            // Print + reparse each cost <= ~2 ulps of the 106-bit format.
            assert_close(back, x, x.to_f64().abs() * 4.0 * Dd::EPSILON, s);
        }
        assert!(Dd::from_decimal_str(cases[2]).is_err());
        assert!(Dd::from_decimal_str("").is_err());
        assert!(Dd::from_decimal_str("..1").is_err());
    }

    #[test]
    fn printing_carries_across_nines() {
        let x = Dd::from_decimal_str("0.99999999999999999999").unwrap();
        let s = x.to_sig_string(10);
        assert_eq!(s, "1.000000000e0");
        let y = Dd::from_decimal_str("9.999999999e5").unwrap();
        assert_eq!(y.to_sig_string(5), "1.0000e6");
    }

    #[test]
    fn printed_hi_lo_exact_roundtrip() {
        // Parsing the 36-digit form back must land on the same pair of limbs:
        // 32 digits carry the full information of a normalized Dd.
        for s in ["0.1", "7.25", "1e-7", "3.333333333333333333"] {
            let x = Dd::from_decimal_str(s).unwrap() * dd_pi();
            let back = Dd::from_decimal_str(&x.to_sig_string(36)).unwrap();
            assert_eq!(back.hi, x.hi, "{s} hi");
            assert!(
                (back.lo - x.lo).abs() <= x.hi.abs() * 4.0 * Dd::EPSILON,
                "{s} lo: {} vs {}",
                back.lo,
                x.lo
            );
        }
    }

    #[test]
    fn powi_matches_repeated_multiplication() {
        let x = Dd::from_decimal_str("1.0000001").unwrap();
        let mut acc = Dd::ONE;
        for _ in 0..23 {
            acc *= x;
        }
        assert_close(x.powi(23), acc, 1e-30, "powi 23");
        assert_close(x.powi(-23) * acc, Dd::ONE, 1e-30, "powi -23");
    }

    #[test]
    fn serde_string_form() {
        let x = dd_pi();
        let json = serde_json::to_string(&x).unwrap();
        // 36 digits describe the stored two-limb value; only ~32 of them can
        // agree with the mathematical constant.
        assert!(json.starts_with("\"3.141592653589793238462643383279"), "{json}");
        let y: Dd = serde_json::from_str(&json).unwrap();
        assert_eq!(y.hi(), x.hi());
    }

    #[test]
    fn ldexp_scaling() {
        assert_eq!(libm_ldexp(1.0, 3), 8.0);
        assert_eq!(libm_ldexp(1.0, -3), 0.125);
        assert_eq!(libm_ldexp(1.5, -1030), 1.5 * 2f64.powi(-1030));
    }
}
