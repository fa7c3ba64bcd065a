//! Legendre elliptic integrals of the first and third kind.
//!
//! The public entry points take the modulus `k`, as everywhere else in the
//! crate. The `_m` variants take the parameter `m = k^2` instead and accept
//! `m < 0` (imaginary modulus), which the herpolhode needs when the annulus
//! is traversed from its outer circle.
//!
//! The amplitude is not restricted to [-pi/2, pi/2]: larger values are
//! handled by quasi-periodicity, `F(j*pi + phi) = 2 j K + F(phi)` and
//! likewise for the third kind, so unwrapped amplitudes give unwrapped
//! integrals.

use super::carlson::{rf, rj};
use crate::error::{Error, Result};
use std::f64::consts::PI;

fn check_modulus(op: &'static str, k: f64) -> Result<f64> {
    if !k.is_finite() || k < 0.0 {
        return Err(Error::domain(op, format!("modulus k = {k} must be finite and non-negative")));
    }
    Ok(k * k)
}

/// Split `phi = j*pi + r` with `r` in [-pi/2, pi/2].
fn reduce(phi: f64) -> (f64, f64) {
    let j = (phi / PI).round();
    (j, phi - j * PI)
}

/// Complete integral of the first kind, parameter form (`m < 1`).
pub fn ellip_k_m(m: f64) -> Result<f64> {
    if !(m < 1.0) {
        return Err(Error::domain("ellip_k", format!("parameter m = {m} must be below 1")));
    }
    Ok(rf(0.0, 1.0 - m, 1.0))
}

/// Complete integral of the first kind K(k), `0 <= k < 1`.
pub fn ellip_k(k: f64) -> Result<f64> {
    ellip_k_m(check_modulus("ellip_k", k)?)
}

/// Incomplete integral of the first kind, parameter form.
pub fn ellip_f_m(phi: f64, m: f64) -> Result<f64> {
    if !phi.is_finite() || !m.is_finite() {
        return Err(Error::domain("ellip_f", "non-finite argument"));
    }
    let (j, r) = reduce(phi);
    let s = r.sin();
    let c = r.cos();
    let delta2 = 1.0 - m * s * s;
    if m >= 1.0 {
        // Past the logarithmic singularity the integral does not exist.
        if j != 0.0 || delta2 <= 0.0 || c == 0.0 {
            return Err(Error::domain(
                "ellip_f",
                format!("amplitude {phi} reaches the singularity for m = {m}"),
            ));
        }
        return Ok(s * rf(c * c, delta2, 1.0));
    }
    let base = s * rf(c * c, delta2, 1.0);
    if j == 0.0 {
        Ok(base)
    } else {
        Ok(2.0 * j * ellip_k_m(m)? + base)
    }
}

/// Incomplete integral of the first kind F(phi, k).
pub fn ellip_f(phi: f64, k: f64) -> Result<f64> {
    ellip_f_m(phi, check_modulus("ellip_f", k)?)
}

/// Complete third-kind integral for `n < 1`, `m < 1`.
pub fn ellip_pi_complete_m(n: f64, m: f64) -> Result<f64> {
    if !(n < 1.0) {
        return Err(Error::singular("ellip_pi", format!("complete integral needs n < 1, got {n}")));
    }
    Ok(rf(0.0, 1.0 - m, 1.0) + n / 3.0 * rj(0.0, 1.0 - m, 1.0, 1.0 - n))
}

/// `(Pi(phi, n, m) - F(phi, m)) / n`, finite and smooth through `n = 0`.
///
/// Equals the integral of `sin^2 / ((1 - n sin^2) sqrt(1 - m sin^2))`.
pub fn ellip_pi_excess_m(phi: f64, n: f64, m: f64) -> Result<f64> {
    if !phi.is_finite() || !n.is_finite() || !m.is_finite() {
        return Err(Error::domain("ellip_pi", "non-finite argument"));
    }
    let (j, r) = reduce(phi);
    let s = r.sin();
    let c = r.cos();
    let p = 1.0 - n * s * s;
    if p <= 0.0 {
        return Err(Error::singular("ellip_pi", format!("1 - n sin^2(phi) = {p} for n = {n}, phi = {phi}")));
    }
    let delta2 = 1.0 - m * s * s;
    if delta2 <= 0.0 || (m >= 1.0 && (j != 0.0 || c == 0.0)) {
        return Err(Error::domain("ellip_pi", format!("amplitude {phi} reaches the singularity for m = {m}")));
    }
    let base = s * s * s / 3.0 * rj(c * c, delta2, 1.0, p);
    if j == 0.0 {
        return Ok(base);
    }
    if !(n < 1.0) {
        return Err(Error::singular("ellip_pi", format!("amplitude {phi} crosses the pole for n = {n}")));
    }
    Ok(2.0 * j * rj(0.0, 1.0 - m, 1.0, 1.0 - n) / 3.0 + base)
}

/// Incomplete integral of the third kind, parameter form:
/// the integral of `1 / ((1 - n sin^2) sqrt(1 - m sin^2))` from 0 to `phi`.
pub fn ellip_pi_m(phi: f64, n: f64, m: f64) -> Result<f64> {
    let f = ellip_f_m(phi, m)?;
    Ok(f + n * ellip_pi_excess_m(phi, n, m)?)
}

/// Incomplete integral of the third kind Pi(phi, n, k), with the sign
/// convention `1 - n sin^2` in the denominator.
pub fn ellip_pi(phi: f64, n: f64, k: f64) -> Result<f64> {
    ellip_pi_m(phi, n, check_modulus("ellip_pi", k)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn trivial_reductions() {
        assert_eq!(ellip_f(0.7, 0.0).unwrap(), 0.7);
        assert!((ellip_f(FRAC_PI_2, 0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        let phi = 1.1;
        assert!((ellip_pi(phi, 0.0, 0.4).unwrap() - ellip_f(phi, 0.4).unwrap()).abs() < 1e-15);
        let v = ellip_pi(PI / 4.0, 0.3, 0.0).unwrap();
        let exact = (0.7f64.sqrt() * (PI / 4.0).tan()).atan() / 0.7f64.sqrt();
        assert!((v - exact).abs() < 1e-14);
    }

    #[test]
    fn known_complete_values() {
        // K(1/sqrt 2) = Gamma(1/4)^2 / (4 sqrt(pi))
        let expected = 1.854_074_677_301_372;
        assert!((ellip_k(0.5f64.sqrt()).unwrap() - expected).abs() < 1e-14);
        assert!((ellip_f(FRAC_PI_2, 0.6).unwrap() - ellip_k(0.6).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn quasi_periodic_extension() {
        let k = 0.8;
        let kk = ellip_k(k).unwrap();
        let f = ellip_f(0.3, k).unwrap();
        assert!((ellip_f(0.3 + 2.0 * PI, k).unwrap() - (f + 4.0 * kk)).abs() < 1e-13);
        assert!((ellip_f(-0.3, k).unwrap() + f).abs() < 1e-15);
        let pc = ellip_pi_complete_m(0.4, 0.25).unwrap();
        let p = ellip_pi(0.5, 0.4, 0.5).unwrap();
        assert!((ellip_pi(0.5 + PI, 0.4, 0.5).unwrap() - (p + 2.0 * pc)).abs() < 1e-13);
    }

    #[test]
    fn unit_modulus_and_imaginary_modulus() {
        assert!((ellip_f(0.9, 1.0).unwrap() - 0.9f64.sin().atanh()).abs() < 1e-13);
        assert!(ellip_f(2.0, 1.0).is_err());
        // m < 0: compare with F(phi, m) = integrand with 1 + |m| sin^2
        let v = ellip_f_m(1.2, -0.7).unwrap();
        let q = crate::quadrature::gauss_kronrod(|t| 1.0 / (1.0 + 0.7 * t.sin().powi(2)).sqrt(), 0.0, 1.2, 1e-15, 1e-15)
            .unwrap();
        assert!((v - q).abs() < 1e-14);
    }

    #[test]
    fn singular_parameter_rejected() {
        assert!(matches!(ellip_pi(1.2, 1.5, 0.3), Err(Error::Singular { .. })));
        assert!(ellip_pi(0.5, 1.5, 0.3).is_ok());
    }

    #[test]
    fn excess_is_smooth_at_zero() {
        let a = ellip_pi_excess_m(1.0, 1e-9, 0.3).unwrap();
        let b = ellip_pi_excess_m(1.0, 0.0, 0.3).unwrap();
        assert!((a - b).abs() < 1e-8);
    }
}
