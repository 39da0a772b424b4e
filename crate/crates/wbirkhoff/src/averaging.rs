//! Weighted Birkhoff averages of observable sequences.
//!
//! The core functional is `Σ_n ŵ_{n,N} f(x_n)` over an orbit sample
//! `f(x_0), …, f(x_{N−1})`, with normalized weights from [`crate::weights`].
//! With [`WeightKind::Equal`] this is the classical Birkhoff average; with the
//! smooth bump kinds it converges far faster on quasiperiodic orbits.
//!
//! Every average reduces its terms in ascending index order through the
//! deterministic compensated tree of [`crate::reduce`], so a result is
//! bit-reproducible for a given precision tier, and the streaming
//! [`WbAccumulator`] matches the batch functions bit for bit.

use crate::cx::Cx;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::reduce::PairwiseSum;
use crate::weights::{normalized_weights, WeightKind, WeightVector};

fn check_shape<R: Real>(n_values: usize, weights: &WeightVector<R>) -> Result<()> {
    if n_values < 2 {
        return Err(Error::TooShort {
            need: 2,
            got: n_values,
        });
    }
    if n_values != weights.len() {
        return Err(Error::LengthMismatch {
            values: n_values,
            weights: weights.len(),
        });
    }
    Ok(())
}

/// Weighted Birkhoff average of a scalar sequence, building the weight
/// vector on the fly. Prefer [`wb_average_with`] when averaging many
/// sequences of the same length.
pub fn wb_average<R: Real>(values: &[R], kind: WeightKind) -> Result<R> {
    wb_average_with(values, &normalized_weights(kind, values.len().max(2))?)
}

/// Weighted Birkhoff average of a scalar sequence with a prebuilt weight
/// vector.
pub fn wb_average_with<R: Real>(values: &[R], weights: &WeightVector<R>) -> Result<R> {
    check_shape(values.len(), weights)?;
    let mut acc = PairwiseSum::new();
    for (n, (&x, &w)) in values.iter().zip(weights.weights()).enumerate() {
        if !x.is_finite() {
            return Err(Error::NonFinite { index: n });
        }
        acc.push(w * x);
    }
    Ok(acc.total())
}

/// Componentwise weighted Birkhoff average of a complex sequence.
pub fn wb_average_cx<R: Real>(values: &[Cx<R>], kind: WeightKind) -> Result<Cx<R>> {
    wb_average_cx_with(values, &normalized_weights(kind, values.len().max(2))?)
}

/// Complex average with a prebuilt weight vector.
pub fn wb_average_cx_with<R: Real>(values: &[Cx<R>], weights: &WeightVector<R>) -> Result<Cx<R>> {
    check_shape(values.len(), weights)?;
    let mut re = PairwiseSum::new();
    let mut im = PairwiseSum::new();
    for (n, (&z, &w)) in values.iter().zip(weights.weights()).enumerate() {
        if !z.is_finite() {
            return Err(Error::NonFinite { index: n });
        }
        re.push(w * z.re);
        im.push(w * z.im);
    }
    Ok(Cx::new(re.total(), im.total()))
}

/// Componentwise weighted Birkhoff average of fixed-dimension vector
/// observables.
pub fn wb_average_array<R: Real, const D: usize>(
    values: &[[R; D]],
    kind: WeightKind,
) -> Result<[R; D]> {
    let weights = normalized_weights::<R>(kind, values.len().max(2))?;
    check_shape(values.len(), &weights)?;
    let mut acc: [PairwiseSum<R>; D] = std::array::from_fn(|_| PairwiseSum::new());
    for (n, (v, &w)) in values.iter().zip(weights.weights()).enumerate() {
        for d in 0..D {
            if !v[d].is_finite() {
                return Err(Error::NonFinite { index: n });
            }
            acc[d].push(w * v[d]);
        }
    }
    Ok(std::array::from_fn(|d| acc[d].total()))
}

/// Streaming scalar average: push exactly `N` values, then [`finalize`].
///
/// The result is bit-identical to [`wb_average_with`] over the same values,
/// because both feed `ŵ_n·f_n` into the same deterministic reduction tree in
/// the same order.
///
/// [`finalize`]: WbAccumulator::finalize
#[derive(Clone, Debug)]
pub struct WbAccumulator<R: Real> {
    weights: WeightVector<R>,
    acc: PairwiseSum<R>,
    count: usize,
}

impl<R: Real> WbAccumulator<R> {
    /// Accumulator for `n_terms` values weighted by `kind`.
    pub fn new(kind: WeightKind, n_terms: usize) -> Result<Self> {
        Ok(Self::with_weights(normalized_weights(kind, n_terms)?))
    }

    /// Accumulator reusing a prebuilt weight vector.
    pub fn with_weights(weights: WeightVector<R>) -> Self {
        WbAccumulator {
            weights,
            acc: PairwiseSum::new(),
            count: 0,
        }
    }

    /// Number of values pushed so far.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Expected total number of values.
    pub fn n_terms(&self) -> usize {
        self.weights.len()
    }

    pub fn push(&mut self, x: R) -> Result<()> {
        if self.count >= self.weights.len() {
            return Err(Error::WrongCount {
                expected: self.weights.len(),
                got: self.count + 1,
            });
        }
        if !x.is_finite() {
            return Err(Error::NonFinite { index: self.count });
        }
        self.acc.push(self.weights.weights()[self.count] * x);
        self.count += 1;
        Ok(())
    }

    pub fn finalize(self) -> Result<R> {
        if self.count != self.weights.len() {
            return Err(Error::WrongCount {
                expected: self.weights.len(),
                got: self.count,
            });
        }
        Ok(self.acc.total())
    }
}

/// Streaming complex average; see [`WbAccumulator`].
#[derive(Clone, Debug)]
pub struct WbAccumulatorCx<R: Real> {
    weights: WeightVector<R>,
    re: PairwiseSum<R>,
    im: PairwiseSum<R>,
    count: usize,
}

impl<R: Real> WbAccumulatorCx<R> {
    pub fn new(kind: WeightKind, n_terms: usize) -> Result<Self> {
        Ok(Self::with_weights(normalized_weights(kind, n_terms)?))
    }

    pub fn with_weights(weights: WeightVector<R>) -> Self {
        WbAccumulatorCx {
            weights,
            re: PairwiseSum::new(),
            im: PairwiseSum::new(),
            count: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn push(&mut self, z: Cx<R>) -> Result<()> {
        if self.count >= self.weights.len() {
            return Err(Error::WrongCount {
                expected: self.weights.len(),
                got: self.count + 1,
            });
        }
        if !z.is_finite() {
            return Err(Error::NonFinite { index: self.count });
        }
        let w = self.weights.weights()[self.count];
        self.re.push(w * z.re);
        self.im.push(w * z.im);
        self.count += 1;
        Ok(())
    }

    pub fn finalize(self) -> Result<Cx<R>> {
        if self.count != self.weights.len() {
            return Err(Error::WrongCount {
                expected: self.weights.len(),
                got: self.count,
            });
        }
        Ok(Cx::new(self.re.total(), self.im.total()))
    }
}
