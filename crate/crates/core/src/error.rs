//! Error type shared by the algebra, representation and geometry layers.

use thiserror::Error;
use yslice_exact::ExactError;

/// Errors raised by the symbolic engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or unsupported Cartan data.
    #[error("cartan data: {0}")]
    Cartan(String),
    /// A node or coordinate index outside the datum.
    #[error("index: {0}")]
    Index(String),
    /// `λ − μ` is not a non-negative integral combination of simple coroots.
    #[error("dominance: {0}")]
    Dominance(String),
    /// A computation needed a superscript or word length above the context cap.
    #[error("cap overflow: {0}")]
    CapOverflow(String),
    /// A precondition of the requested operation does not hold.
    #[error("precondition: {0}")]
    Precondition(String),
    /// A symbolic element could not be pulled back along a shift morphism.
    #[error("not in image: {0}")]
    NotInImage(String),
    /// A loop-group element lies outside the required big-cell locus.
    #[error("locus: {0}")]
    Locus(String),
    /// An internal consistency check failed.
    #[error("internal: {0}")]
    Internal(String),
    /// Malformed configuration.
    #[error("config: {0}")]
    Config(String),
    /// Error from the exact arithmetic layer.
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Result alias for this crate.
pub type Result<T> = std::result::Result<T, Error>;
