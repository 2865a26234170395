//! Error type shared by the exact kernels.

use thiserror::Error;

/// Failures of exact arithmetic operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    /// Division by zero or inversion of a non-unit.
    #[error("not invertible: {0}")]
    NotInvertible(String),
    /// A rational literal could not be parsed.
    #[error("cannot parse rational literal `{0}`")]
    Parse(String),
    /// Two series with different variable tags were combined.
    #[error("series variable mismatch: `{0}` vs `{1}`")]
    VariableMismatch(String, String),
    /// A requested coefficient lies outside the guaranteed window.
    #[error("coefficient x^{exp} outside guaranteed window [{lo}, {hi}]")]
    OutsideWindow { exp: i64, lo: i64, hi: i64 },
}
