//! Polar equation `chi(rho)` of the herpolhode on the invariable plane.
//!
//! With the two integrals written as `A p^2 + B q^2 + C r^2 = D m^2` and
//! `A^2 p^2 + B^2 q^2 + C^2 r^2 = D^2 m^2`, the curve lies in the annulus
//! `rho^2` between `a` and `b`, and `chi` is `(I5 + G I6) / sqrt(D)`
//! counted from the circle `rho^2 = b`.

use crate::error::{Error, Result};
use crate::integrals::{i5, i6, Form};
use crate::specfun::{ellip_f_m, ellip_pi_m};
use std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HerpolhodeConstants {
    pub a_mom: f64,
    pub b_mom: f64,
    pub c_mom: f64,
    pub d: f64,
    pub m: f64,
    /// `(A - D)(B - D)(C - D) / (A B C D)`.
    pub g_const: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub chi0: f64,
}

impl HerpolhodeConstants {
    /// Raw constants, without the sign checks of [`herpolhode_constants`].
    pub fn new(a_mom: f64, b_mom: f64, c_mom: f64, d: f64, m: f64) -> Result<Self> {
        for (name, v) in [("A", a_mom), ("B", b_mom), ("C", c_mom), ("D", d), ("m", m)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        let (da, db, dc) = (a_mom - d, b_mom - d, c_mom - d);
        Ok(HerpolhodeConstants {
            a_mom,
            b_mom,
            c_mom,
            d,
            m,
            g_const: da * db * dc / (a_mom * b_mom * c_mom * d),
            a: -db * dc / (b_mom * c_mom * d),
            b: -dc * da / (c_mom * a_mom * d),
            c: -da * db / (a_mom * b_mom * d),
            chi0: 0.0,
        })
    }

    /// Constants of the body `(A, B, C)` moving with kinetic energy `e0`
    /// (`A p^2 + B q^2 + C r^2 = 2 e0`) and angular momentum `k_norm`.
    pub fn from_motion(a_mom: f64, b_mom: f64, c_mom: f64, e0: f64, k_norm: f64) -> Result<Self> {
        let two_t = 2.0 * e0;
        let d = k_norm * k_norm / two_t;
        herpolhode_constants(a_mom, b_mom, c_mom, d, two_t / k_norm)
    }

    pub fn with_chi0(mut self, chi0: f64) -> Self {
        self.chi0 = chi0;
        self
    }

    /// Inner and outer radius of the annulus.
    pub fn annulus_radii(&self) -> (f64, f64) {
        (self.a.min(self.b).sqrt(), self.a.max(self.b).sqrt())
    }

    /// Factor turning `rho` into the length of the angular velocity's
    /// projection on the invariable plane.
    pub fn omega_scale(&self) -> f64 {
        self.m * self.d.sqrt()
    }

    fn is_circle(&self) -> bool {
        (self.a - self.b).abs() <= 1e-14 * self.a.abs().max(self.b.abs())
    }

    /// `chi` at Jacobi amplitude `phi`, where `phi = 0` is the circle
    /// `rho^2 = b` and each quarter turn reaches the opposite circle.
    /// Any real `phi` is accepted, so this walks the whole curve.
    pub fn chi_of_amplitude(&self, phi: f64) -> Result<f64> {
        let (a, b, c) = (self.a, self.b, self.c);
        let m = (a - b) / (a - c);
        let f = ellip_f_m(phi, m)?;
        let pi = ellip_pi_m(phi, c / b * m, m)?;
        let first = f;
        let second = (b * f - (b - c) * pi) / (b * c);
        Ok(self.chi0 + (first + self.g_const * second) / (self.d * (a - c)).sqrt())
    }

    /// `rho^2` at amplitude `phi`.
    pub fn rho2_of_amplitude(&self, phi: f64) -> f64 {
        let (a, b, c) = (self.a, self.b, self.c);
        let s = phi.sin().powi(2);
        ((a - c) * b + s * (b - a) * c) / ((a - c) + s * (b - a))
    }
}

/// Constants with the sign pattern `a > 0, b > 0, c < 0` enforced; it holds
/// exactly when `D` lies strictly between `C` and both `A` and `B`.
pub fn herpolhode_constants(a_mom: f64, b_mom: f64, c_mom: f64, d: f64, m: f64) -> Result<HerpolhodeConstants> {
    let hc = HerpolhodeConstants::new(a_mom, b_mom, c_mom, d, m)?;
    if !(hc.a > 0.0 && hc.b > 0.0 && hc.c < 0.0) {
        return Err(Error::config(format!(
            "D = {d} gives a = {:e}, b = {:e}, c = {:e}; need a > 0, b > 0, c < 0 (D between C and both A, B)",
            hc.a, hc.b, hc.c
        )));
    }
    Ok(hc)
}

fn check_rho(rho: f64, hc: &HerpolhodeConstants) -> Result<()> {
    let (lo, hi) = hc.annulus_radii();
    let slack = 1e-10 * hi;
    if !(rho >= lo - slack && rho <= hi + slack) {
        return Err(Error::domain("herpolhode", format!("rho = {rho} outside the annulus [{lo}, {hi}]")));
    }
    if hc.is_circle() {
        return Err(Error::domain("herpolhode", "circular herpolhode: chi is not a function of rho"));
    }
    Ok(())
}

fn clamp_rho(rho: f64, hc: &HerpolhodeConstants) -> f64 {
    let (lo, hi) = hc.annulus_radii();
    rho.clamp(lo, hi)
}

/// `chi(rho)` through Legendre integrals, on the first leg from `rho^2 = b`.
pub fn chi_elliptic(rho: f64, hc: &HerpolhodeConstants) -> Result<f64> {
    check_rho(rho, hc)?;
    let rho = clamp_rho(rho, hc);
    let (a, b, c) = (hc.a, hc.b, hc.c);
    Ok(hc.chi0 + (i5(a, b, c, rho, Form::Elliptic)? + hc.g_const * i6(a, b, c, rho, Form::Elliptic)?) / hc.d.sqrt())
}

/// `chi(rho)` through the Appell and Lauricella functions.
pub fn chi_hypergeometric(rho: f64, hc: &HerpolhodeConstants) -> Result<f64> {
    check_rho(rho, hc)?;
    let rho = clamp_rho(rho, hc);
    let (a, b, c) = (hc.a, hc.b, hc.c);
    let f = Form::Hypergeometric;
    Ok(hc.chi0 + (i5(a, b, c, rho, f)? + hc.g_const * i6(a, b, c, rho, f)?) / hc.d.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub rho: f64,
    pub chi: f64,
    pub x: f64,
    pub y: f64,
}

/// Samples `legs` half-oscillations of the radius, `n_samples` points per
/// leg including both ends (shared ends appear once).
pub fn trace_curve(hc: &HerpolhodeConstants, n_samples: usize, legs: usize) -> Result<Vec<TracePoint>> {
    if n_samples < 2 {
        return Err(Error::config("need at least two samples per leg"));
    }
    let total = legs * (n_samples - 1) + 1;
    let step = FRAC_PI_2 / (n_samples - 1) as f64;
    let (lo, hi) = hc.annulus_radii();
    (0..total)
        .map(|i| {
            let phi = i as f64 * step;
            // rho^2 is a weighted mean of a and b; rounding may step an ulp out
            let rho = hc.rho2_of_amplitude(phi).sqrt().clamp(lo, hi);
            let chi = hc.chi_of_amplitude(phi)?;
            Ok(TracePoint { rho, chi, x: rho * chi.cos(), y: rho * chi.sin() })
        })
        .collect()
}
