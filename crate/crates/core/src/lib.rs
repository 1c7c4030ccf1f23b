//! Frobenius trace statistics for elliptic curves and one-parameter
//! families over finite fields of characteristic greater than 3.
//!
//! The crate counts fibers with a given trace of Frobenius, compares the
//! counts with Kronecker class numbers `H(t^2 - 4q)` and with closed-form
//! predictions for families carrying level structure.

pub mod census;
pub mod cli;
pub mod ec;
pub mod error;
pub mod family;
pub mod ff;
pub mod predict;
pub mod quadform;
pub mod report;

pub use error::{Error, Result};
