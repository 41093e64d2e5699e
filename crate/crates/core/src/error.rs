use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Operands live over different primes or incompatible structures.
    #[error("structure mismatch: {0}")]
    Mismatch(String),
    /// A domain precondition failed (e.g. inverting a non-unit).
    #[error("domain error: {0}")]
    Domain(String),
    /// Truncation error exceeds the requested output precision.
    #[error("precision error: {0}")]
    Precision(String),
    /// Addition would need to mix integer and half-integer p-powers.
    #[error("valuation parity error: cannot add p^(a/2)-scaled terms to p^b-scaled terms")]
    ValuationParity,
    /// Inversion of zero or of a zero divisor representation.
    #[error("division by zero (or by a zero divisor representation)")]
    DivisionByZero,
    /// Malformed input document.
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
