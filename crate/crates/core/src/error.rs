use thiserror::Error;

/// Failures surfaced by the factorization toolkit.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A tolerance schedule demanded more mantissa bits than the configured ceiling.
    #[error("precision exhausted: {needed} bits required, ceiling is {cap} (degree {degree})")]
    PrecisionExhausted { needed: u32, cap: u32, degree: usize },

    /// The contour quadrature hit its sample ceiling without the Newton
    /// iteration converging.
    #[error("split failed: {0}")]
    SplitFailed(String),

    /// A quadrature sample point fell below the resolvable magnitude of a
    /// polynomial value; the caller should enlarge the sample set.
    #[error("contour sample too close to a root of the polynomial")]
    SampleSingular,

    /// Euclidean division by the zero polynomial.
    #[error("division by zero polynomial")]
    DivisionByZero,

    /// An argument violated a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Arithmetic left the representable exponent range.
    #[error("overflow: intermediate value left the representable range")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
