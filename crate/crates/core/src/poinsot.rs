//! Torque-free asymmetric body (Euler-Poinsot case).
//!
//! Body rates are the classical `cn, sn, dn` solution started with `q = 0`.
//! The angular momentum is the space vertical, so `theta` and `phi` come
//! straight from the rates and `psi` from two third-kind integrals.
//!
//! Conventions: `e0` is the kinetic energy, `A p^2 + B q^2 + C r^2 = 2 e0`,
//! and the rates start at `(p_M, 0, r_M)` with both amplitudes positive.
//! Either ordering `A < B < C` (needs `|K|^2 > 2 e0 B`) or `A > B > C`
//! (needs `|K|^2 < 2 e0 B`) is accepted; in the second one `q` runs with
//! the opposite sign.

use crate::error::{Error, Result};
use crate::integrals::{i3, i4};
use crate::rotation::Vec3;
use crate::specfun::{ellip_k_m, ellip_pi_m, jacobi_m};
use std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeBodyConfig {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub e0: f64,
    pub k_norm: f64,
    pub psi0: f64,
}

impl FreeBodyConfig {
    /// Constants from initial rates `(p0, 0, r0)`.
    pub fn from_initial_rates(a: f64, b: f64, c: f64, p0: f64, r0: f64, psi0: f64) -> Self {
        let e0 = 0.5 * (a * p0 * p0 + c * r0 * r0);
        let k_norm = (a * a * p0 * p0 + c * c * r0 * r0).sqrt();
        FreeBodyConfig { a, b, c, e0, k_norm, psi0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeBodyDerived {
    pub p_m: f64,
    pub q_m: f64,
    pub r_m: f64,
    pub k_hat: f64,
    /// `d tau / d t`.
    pub tau_rate: f64,
    pub delta2: f64,
    pub eps2: f64,
    pub gamma2: f64,
    /// `+1` for `A < B < C`, `-1` for `A > B > C`: the sign carried by `q`.
    pub sigma: f64,
}

fn radicand(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(Error::config(format!("radicand of {name} is {v}; the constants do not fit the inertia ordering")))
    }
}

pub fn derive_free(cfg: &FreeBodyConfig) -> Result<FreeBodyDerived> {
    let FreeBodyConfig { a, b, c, e0, k_norm, psi0 } = *cfg;
    for (name, v) in [("A", a), ("B", b), ("C", c), ("E0", e0), ("|K|", k_norm)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::config(format!("{name} must be positive and finite, got {v}")));
        }
    }
    if !psi0.is_finite() {
        return Err(Error::config("psi0 is not finite"));
    }
    if a == c || b == c {
        return Err(Error::config("C must differ from A and B"));
    }
    let k2 = k_norm * k_norm;
    let p_m = radicand("p_M", (2.0 * e0 * c - k2) / (a * (c - a)))?.sqrt();
    let q_m = radicand("q_M", (2.0 * e0 * c - k2) / (b * (c - b)))?.sqrt();
    let r_m = radicand("r_M", (k2 - 2.0 * e0 * a) / (c * (c - a)))?.sqrt();
    let tau_rate = radicand("tau", (c - b) * (k2 - 2.0 * e0 * a) / (a * b * c))?.sqrt();
    let kk = radicand("k_hat", (b - a) * (2.0 * e0 * c - k2) / ((c - b) * (k2 - 2.0 * e0 * a)))?;
    if kk >= 1.0 {
        let needed = if c > b { "|K|^2 > 2 E0 B" } else { "|K|^2 < 2 E0 B" };
        return Err(Error::config(format!(
            "modulus^2 = {kk} >= 1: this ordering needs {needed}; swap the roles of A and C"
        )));
    }
    let delta2 = b * (c - a) / (a * (c - b));
    let eps2 = 1.0 - delta2;
    Ok(FreeBodyDerived {
        p_m,
        q_m,
        r_m,
        k_hat: kk.sqrt(),
        tau_rate,
        delta2,
        eps2,
        gamma2: eps2 / (1.0 + eps2),
        sigma: (c - a).signum(),
    })
}

/// `(p, q, r)` at non-dimensional time `tau`.
pub fn body_rates_free(tau: f64, d: &FreeBodyDerived) -> Result<Vec3> {
    let j = jacobi_m(tau, d.k_hat * d.k_hat)?;
    Ok([d.p_m * j.cn, d.sigma * d.q_m * j.sn, d.r_m * j.dn])
}

/// Period of the rates in `tau`, `4 K(k_hat)`.
pub fn rate_period(d: &FreeBodyDerived) -> f64 {
    4.0 * ellip_k_m(d.k_hat * d.k_hat).unwrap_or(f64::INFINITY)
}

/// `(theta, phi)` at `tau`, with `phi` continuous in `tau` and equal to
/// `pi/2` at `tau = 0`.
pub fn angles_free(tau: f64, d: &FreeBodyDerived, cfg: &FreeBodyConfig) -> Result<(f64, f64)> {
    if cfg.k_norm <= 0.0 {
        return Err(Error::singular("angles_free", "zero angular momentum leaves the attitude undefined"));
    }
    let j = jacobi_m(tau, d.k_hat * d.k_hat)?;
    let cos_theta = (cfg.c * d.r_m * j.dn / cfg.k_norm).clamp(-1.0, 1.0);
    if d.p_m == 0.0 {
        return Err(Error::singular("angles_free", "pure spin about the C axis: spin and precession are not separable"));
    }
    // tan(phi) = cot(am) / delta' with delta' = B q_M / (A p_M); lift the
    // arctangent of delta' tan(am) through the half-turns of am
    let dp = cfg.b * d.q_m / (cfg.a * d.p_m);
    let turns = (j.am / std::f64::consts::PI).round();
    let reduced = j.am - turns * std::f64::consts::PI;
    let lifted = turns * std::f64::consts::PI + (dp * reduced.tan()).atan();
    Ok((cos_theta.acos(), FRAC_PI_2 - d.sigma * lifted))
}

/// Precession at `tau`. The integrand is `|K| (A p^2 + B q^2) / (A^2 p^2 + B^2 q^2)`
/// split over `1 - eps^2 sn^2`.
pub fn precession_free(tau: f64, d: &FreeBodyDerived, cfg: &FreeBodyConfig) -> Result<f64> {
    let cn_part = i4(tau, d.eps2, d.k_hat)?;
    let sn_part = i3(tau, d.eps2, d.k_hat)?;
    Ok(cfg.psi0 + cfg.k_norm / d.tau_rate * (cn_part / cfg.a + d.delta2 / cfg.b * sn_part))
}

/// The precession exactly as printed, with its constants and the `gamma^2`
/// parameter. Kept to report how far it is from [`precession_free`].
pub fn precession_free_printed(tau: f64, d: &FreeBodyDerived, cfg: &FreeBodyConfig) -> Result<f64> {
    let m = d.k_hat * d.k_hat;
    let am = jacobi_m(tau, m)?.am;
    let t1 = (ellip_pi_m(am, d.eps2, m)? - tau) / d.eps2;
    let t2 = ((d.gamma2 - 1.0) * ellip_pi_m(am, d.gamma2, m)? + tau) / d.gamma2;
    let (a, b, k) = (cfg.a, cfg.b, cfg.k_norm);
    Ok(cfg.psi0 + k / (a * (d.delta2 + d.eps2)) * t1 + k * b * d.delta2 / (a * a) * t2)
}
