//! Exact sparse truncated power series in `n` space variables.
//!
//! [`MSeries`] is the workhorse: a finite map from multi-indices to exact
//! rationals, together with the total degree `D` up to which the stored
//! coefficients are known. Every binary operation keeps the smaller of the
//! two truncations, so a result never claims more precision than its inputs.

mod coeff;
mod mseries;
mod vector;

pub mod json;

pub use coeff::{coeff_from_str, coeff_to_string, factorial, Coeff};
pub use mseries::{MIndex, MSeries};
pub use vector::{TSeries, VSeries};

use crate::error::Result;

/// `a ≪ b`: `|a_n| <= b_n` for every multi-index up to the shared truncation.
pub fn majorizes(a: &MSeries, b: &MSeries) -> Result<bool> {
    a.majorized_by(b)
}
