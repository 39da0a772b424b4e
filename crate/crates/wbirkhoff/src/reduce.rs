//! Deterministic compensated summation.
//!
//! All weighted averages in this crate reduce through one fixed binary tree
//! so that results are bit-identical between batch and streaming use and
//! independent of thread count. The tree is the binary-counter pairwise
//! scheme: pushed values carry up through power-of-two blocks, equivalent to
//! recursive splitting at the largest power of two below the length. Each
//! partial sum carries a two-sum compensation term, so the f64 tier reaches
//! near-correctly-rounded totals (error ~ N eps^2) while staying associative
//! in exactly the fixed tree order.

use crate::real::Real;

/// Streaming pairwise-compensated reducer.
#[derive(Clone, Debug)]
pub struct PairwiseSum<R: Real> {
    // slot i holds the (sum, compensation) of a full block of 2^i values.
    slots: Vec<Option<(R, R)>>,
    count: usize,
}

#[inline]
fn combine<R: Real>(earlier: (R, R), later: (R, R)) -> (R, R) {
    let (s, e) = R::two_sum(earlier.0, later.0);
    (s, e + (earlier.1 + later.1))
}

impl<R: Real> PairwiseSum<R> {
    pub fn new() -> Self {
        PairwiseSum { slots: Vec::new(), count: 0 }
    }

    #[inline]
    pub fn push(&mut self, x: R) {
        let mut carry = (x, R::zero());
        let mut i = 0;
        loop {
            if i == self.slots.len() {
                self.slots.push(Some(carry));
                break;
            }
            match self.slots[i].take() {
                None => {
                    self.slots[i] = Some(carry);
                    break;
                }
                Some(block) => {
                    // The resident block holds earlier values than the carry.
                    carry = combine(block, carry);
                    i += 1;
                }
            }
        }
        self.count += 1;
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Total over everything pushed so far. Combining runs from the lowest
    /// occupied slot upward, which reproduces the recursive split at the
    /// largest power of two below N.
    pub fn total(&self) -> R {
        let mut acc: Option<(R, R)> = None;
        for slot in &self.slots {
            if let Some(block) = slot {
                acc = Some(match acc {
                    // Higher slots hold earlier values: `block` precedes `acc`.
                    None => *block,
                    Some(a) => combine(*block, a),
                });
            }
        }
        match acc {
            None => R::zero(),
            Some((s, e)) => s + e,
        }
    }
}

impl<R: Real> Default for PairwiseSum<R> {
    fn default() -> Self {
        Self::new()
    }
}

/// Sum of a slice through the same deterministic tree.
pub fn sum_slice<R: Real>(xs: &[R]) -> R {
    let mut acc = PairwiseSum::new();
    for &x in xs {
        acc.push(x);
    }
    acc.total()
}

/// Sum of `f(0), ..., f(n-1)` through the same deterministic tree without
/// materializing the terms.
pub fn sum_fn<R: Real>(n: usize, mut f: impl FnMut(usize) -> R) -> R {
    let mut acc = PairwiseSum::new();
    for i in 0..n {
        acc.push(f(i));
    }
    acc.total()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dd::Dd;

    #[test]
    fn matches_exact_on_integers() {
        let xs: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(sum_slice(&xs), 500500.0);
    }

    #[test]
    fn streaming_equals_batch_bitwise() {
        // Skewed magnitudes exercise the compensation path.
        for n in [1usize, 2, 3, 7, 64, 65, 1000, 4097] {
            let xs: Vec<f64> = (0..n)
                .map(|i| ((i * 2654435761 % 1000) as f64 - 500.0) * (1.5f64).powi((i % 40) as i32 - 20))
                .collect();
            let mut acc = PairwiseSum::new();
            for &x in &xs {
                acc.push(x);
            }
            let streamed = acc.total();
            let batch = sum_slice(&xs);
            assert_eq!(streamed.to_bits(), batch.to_bits(), "n = {n}");
        }
    }

    #[test]
    fn compensation_beats_naive_on_cancellation() {
        // sum of (1e16, 1.0 x1e4, -1e16) in a shuffled-but-fixed order; the
        // compensated tree keeps the small parts.
        let mut xs = vec![1e16];
        xs.extend(std::iter::repeat(1.0).take(10_000));
        xs.push(-1e16);
        let s = sum_slice(&xs);
        assert_eq!(s, 10_000.0);
    }

    #[test]
    fn harmonic_sum_close_to_reference() {
        // Reference via double-double; f64 tree must agree to ~1e-12 abs.
        let n = 100_000usize;
        let dd = sum_fn(n, |i| Dd::ONE / Dd::from_i64((i + 1) as i64));
        let fd = sum_fn(n, |i| 1.0f64 / (i + 1) as f64);
        assert!((dd.to_f64() - fd).abs() < 1e-12);
    }

    #[test]
    fn total_is_idempotent_and_resumable() {
        let mut acc = PairwiseSum::new();
        for i in 0..100 {
            acc.push(i as f64);
        }
        let t1 = acc.total();
        let t2 = acc.total();
        assert_eq!(t1, t2);
        acc.push(100.0);
        assert_eq!(acc.total(), 5050.0);
        assert_eq!(acc.len(), 101);
    }

    #[test]
    fn empty_sum_is_zero() {
        let acc: PairwiseSum<f64> = PairwiseSum::new();
        assert_eq!(acc.total(), 0.0);
        assert!(acc.is_empty());
    }

    #[test]
    fn dd_tier_reduces_too() {
        let xs: Vec<Dd> = (1..=100).map(Dd::from_i64).collect();
        assert_eq!(sum_slice(&xs).to_f64(), 5050.0);
    }
}
