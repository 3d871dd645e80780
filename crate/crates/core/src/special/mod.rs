//! Scalar special functions used by the fading model.
//!
//! Everything here works in `f64` and reports an [`Error`](crate::Error)
//! instead of returning a value that missed its accuracy budget.

mod bessel;
mod confluent;
mod gamma;
mod incomplete_gamma;

pub use bessel::{bessel_k, bessel_k_scaled, ln_bessel_k};
pub use confluent::{
    kummer_1f1, kummer_1f1_with, tricomi_u, tricomi_u_with, tricomi_u_scaled,
};
pub use gamma::{gamma_signed, ln_gamma, ln_gamma_signed};
pub use incomplete_gamma::{
    lower_incomplete_gamma_regularized, upper_incomplete_gamma_regularized,
};

#[allow(unused_imports)]
pub(crate) use gamma::{ln_gamma_pos, sin_pi};

use crate::error::{Error, Result};

/// Tolerances and work limit for an iterative evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyBudget {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_terms: usize,
}

impl AccuracyBudget {
    pub fn new(rel_tol: f64, abs_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || !(abs_tol >= 0.0) || max_terms == 0 {
            return Err(Error::InvalidParameter(format!(
                "accuracy budget needs rel_tol > 0, abs_tol >= 0, max_terms >= 1 \
                 (got {rel_tol}, {abs_tol}, {max_terms})"
            )));
        }
        Ok(AccuracyBudget { rel_tol, abs_tol, max_terms })
    }

    /// Whether an absolute error estimate `err` is acceptable for `value`.
    pub fn accepts(&self, err: f64, value: f64) -> bool {
        err.is_finite() && err <= self.rel_tol * value.abs() + self.abs_tol
    }
}

impl Default for AccuracyBudget {
    fn default() -> Self {
        AccuracyBudget { rel_tol: 1e-10, abs_tol: 0.0, max_terms: 20_000 }
    }
}

/// `true` when `x` is within `tol` of an integer.
pub(crate) fn near_integer(x: f64, tol: f64) -> bool {
    (x - x.round()).abs() < tol
}
