//! Skellam and fractional Skellam random fields on the plane.

// `!(x > 0.0)` deliberately rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod field_integrals;
pub mod fractional_field;
pub mod quadrature;
pub mod sampling;
pub mod skellam_field;
pub mod specfun;
pub mod verification;

pub use error::{Error, Result};
