//! Exact rational truncated power series for the trigonometric, non-stationary
//! and balanced Ruijsenaars functions, the q-difference operators acting on
//! them, and numeric checks of the convergence estimates.
//!
//! Everything algebraic is computed over `BigRational`; the only floating
//! point code lives in [`convergence`].

pub mod combinatorics;
pub mod convergence;
pub mod error;
pub mod identities;
pub mod operators;
pub mod parse;
pub mod report;
pub mod ruijsenaars;
pub mod series;
pub mod special;

pub use error::{Error, Result};
pub use series::{Exponent, Scalar, TruncatedSeries, Truncation};
