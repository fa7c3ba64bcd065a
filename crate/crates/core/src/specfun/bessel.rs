//! Order -1/2 Bessel functions, the only order the damped top needs.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// `J_{-1/2}(x)` and `Y_{-1/2}(x)` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselHalfValue {
    pub x: f64,
    pub j_val: f64,
    pub y_val: f64,
}

/// Closed forms `sqrt(2/(pi x)) cos x` and `sqrt(2/(pi x)) sin x`.
pub fn bessel_half(x: f64) -> Result<BesselHalfValue> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("bessel_half", format!("argument {x} must be positive and finite")));
    }
    let n = (2.0 / (PI * x)).sqrt();
    let (s, c) = x.sin_cos();
    Ok(BesselHalfValue { x, j_val: n * c, y_val: n * s })
}
