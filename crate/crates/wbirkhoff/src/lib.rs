//! Weighted Birkhoff averaging for quasiperiodic orbits.
//!
//! Replaces the uniform time average of an observable along an orbit with a
//! C-infinity bump-weighted average, which converges super-polynomially on
//! quasiperiodic systems with Diophantine rotation vectors. On top of that
//! primitive the crate builds rotation-vector estimation, Fourier
//! reconstruction of the conjugacy to a rigid rotation, weighted Lyapunov
//! exponents, and small-divisor error diagnostics, plus the example systems
//! (circle maps, a standard-map island, a 2-torus map, a restricted
//! three-body Poincare section, a forced oscillator strobe) the bundled
//! experiments run on.
//!
//! Everything numeric is generic over the precision tier ([`real::Real`]):
//! native `f64` or software double-double ([`dd::Dd`]).

pub mod dd;
pub mod error;
pub mod real;

pub mod cx;
pub mod reduce;

pub mod averaging;
pub mod fourier;
pub mod diagnostics;
pub mod lyapunov;
pub mod rotation;
pub mod systems;
pub mod weights;

pub use error::{Error, Result};
pub use real::{PrecisionTier, Real};
pub use weights::WeightKind;
