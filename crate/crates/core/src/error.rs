//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the library.
///
/// The CLI maps these onto exit codes: certification failures are exit 2,
/// numeric-certification failures (winding could not be certified, tails not
/// negligible, adaptive bounds unavailable) are exit 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index overflow while multiplying Dirichlet-series indices")]
    IndexOverflow,

    #[error("class certification {verdict}: min Re psi on the sampled boundary = {min_real_part} (threshold {threshold})")]
    ClassCheckFailed {
        verdict: &'static str,
        min_real_part: f64,
        threshold: f64,
    },

    #[error("operation requires a symbol of class {expected}")]
    WrongClass { expected: &'static str },

    #[error("winding number could not be certified after {attempts} jittered attempts (root within tolerance of the contour)")]
    BoundaryHit { attempts: usize },

    #[error("winding quadrature did not certify an integer (residual {residual})")]
    WindingUncertain { residual: f64 },

    #[error("no adaptive right bound: target coincides with the symbol's value at +infinity")]
    AdaptiveBoundFailure,

    #[error("column {column}: coefficient tail not negligible within the per-column term cap ({terms} terms enumerated)")]
    TailNotNegligible { column: u64, terms: usize },

    #[error("series expansion exceeds the term cap")]
    ExpansionTooLarge,

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("symbol file: {0}")]
    SymbolFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that mean "the numerics could not certify the result"
    /// as opposed to bad input.
    pub fn is_numeric_certification(&self) -> bool {
        matches!(
            self,
            Error::BoundaryHit { .. }
                | Error::WindingUncertain { .. }
                | Error::AdaptiveBoundFailure
                | Error::TailNotNegligible { .. }
                | Error::ExpansionTooLarge
        )
    }
}
