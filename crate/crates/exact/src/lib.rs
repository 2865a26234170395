//! Exact arithmetic kernels.
//!
//! Everything in this crate is exact: rationals are arbitrary precision,
//! square roots of positive integers are adjoined formally, polynomials carry
//! exact coefficients and truncated series track the window on which their
//! coefficients are guaranteed.  Values are immutable and `Send + Sync`.

pub mod dual;
pub mod error;
pub mod kscalar;
pub mod mpoly;
pub mod rat;
pub mod ratfn;
pub mod ring;
pub mod series;

pub use dual::DualScalar;
pub use error::ExactError;
pub use kscalar::KScalar;
pub use mpoly::{Mono, MPoly};
pub use rat::Rat;
pub use ratfn::RatFn;
pub use ring::{Field, Ring};
pub use series::TruncSeries;
