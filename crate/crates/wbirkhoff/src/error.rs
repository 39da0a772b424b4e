//! Library error type. Recoverable input problems are errors; suspicious but
//! usable results are warnings carried on the result types instead.

/// Any failure produced by this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("sequence too short: need at least {need} values, got {got}")]
    TooShort { need: usize, got: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("length mismatch: {values} values vs {weights} weights")]
    LengthMismatch { values: usize, weights: usize },

    #[error("accumulator expects exactly {expected} values, got {got}")]
    WrongCount { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point {index} coincides with the angular-coordinate center")]
    CenterCoincidence { index: usize },

    #[error("tangent vector collapsed to zero norm at step {step}")]
    SingularDerivative { step: usize },

    #[error("Jacobian determinant vanished at step {step}")]
    ZeroDeterminant { step: usize },

    #[error("mode k = {k} is resonant with the rotation vector (e^(2 pi i k rho) = 1)")]
    ResonantMode { k: i64 },

    #[error("decay fit needs at least {need} coefficients above the noise floor, found {found}")]
    TooFewCoefficients { need: usize, found: usize },

    #[error("imaginary residual {residual:e} exceeds {limit:e}; coefficient set is inconsistent")]
    ImaginaryResidual { residual: f64, limit: f64 },

    #[error("state became non-finite during integration at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("near-collision: separation {separation:e} below {minimum:e}")]
    NearCollision { separation: f64, minimum: f64 },

    #[error("root finding failed: {0}")]
    RootFinding(String),
}

pub type Result<T> = std::result::Result<T, Error>;
