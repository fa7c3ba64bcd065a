//! Gauss, Appell and Lauricella hypergeometric functions on the real line.
//!
//! The workhorse is the Euler-type integral
//! `B(a, c-a)^{-1} * int_0^1 u^{a-1} (1-u)^{c-a-1} prod (1 - x_i u)^{-b_i} du`,
//! valid for `c > a > 0` and every `x_i < 1`, evaluated by tanh-sinh so the
//! algebraic endpoint singularities cost nothing. When every `|x_i| < 1/2`
//! the multiple series converges fast and is summed instead.
//!
//! `x_i = 1` is accepted when the integral still converges there, i.e. when
//! `b_i < c - a`. The solvers hit that case at turning points.

use crate::error::{Error, Result};
use crate::quadrature::tanh_sinh_unit;
use statrs::function::gamma::ln_gamma;

/// Parameters of `F_D^{(n)}(a; b_1..b_n; c | x_1..x_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeometricSpec {
    pub a: f64,
    pub b: Vec<f64>,
    pub c: f64,
    pub x: Vec<f64>,
}

impl HypergeometricSpec {
    pub fn new(a: f64, b: &[f64], c: f64, x: &[f64]) -> Self {
        HypergeometricSpec { a, b: b.to_vec(), c, x: x.to_vec() }
    }

    fn validate(&self) -> Result<()> {
        let op = "lauricella_fd";
        if self.b.len() != self.x.len() {
            return Err(Error::domain(op, format!("{} parameters b but {} arguments x", self.b.len(), self.x.len())));
        }
        if !(self.a > 0.0 && self.c > self.a) {
            return Err(Error::domain(
                op,
                format!("integral representation needs c > a > 0 (a = {}, c = {})", self.a, self.c),
            ));
        }
        for (i, (&bi, &xi)) in self.b.iter().zip(&self.x).enumerate() {
            if !bi.is_finite() || !xi.is_finite() {
                return Err(Error::domain(op, format!("non-finite b_{i} or x_{i}")));
            }
            if xi > 1.0 || (xi == 1.0 && !(bi < self.c - self.a)) {
                return Err(Error::domain(op, format!("x_{i} = {xi} lies on the branch cut [1, inf)")));
            }
        }
        Ok(())
    }
}

const SERIES_RADIUS: f64 = 0.5;
const QUAD_TOL: f64 = 1e-14;

fn inv_beta(a: f64, b: f64) -> f64 {
    (ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b)).exp()
}

/// `F_D` by its integral representation, regardless of the arguments.
pub fn lauricella_fd_integral(spec: &HypergeometricSpec) -> Result<f64> {
    spec.validate()?;
    let (a, c) = (spec.a, spec.c);
    let pairs: Vec<(f64, f64)> = spec.b.iter().copied().zip(spec.x.iter().copied()).filter(|p| p.0 != 0.0 && p.1 != 0.0).collect();
    if pairs.is_empty() {
        return Ok(1.0);
    }
    let integral = tanh_sinh_unit(
        |u, v| {
            let mut log = (a - 1.0) * u.ln() + (c - a - 1.0) * v.ln();
            for &(b, x) in &pairs {
                // 1 - x u written as v + u (1 - x) to keep digits near u = 1
                log -= b * (v + u * (1.0 - x)).ln();
            }
            log.exp()
        },
        QUAD_TOL,
    )?;
    Ok(integral * inv_beta(a, c - a))
}

/// `F_D` by its multiple power series, grouped by total degree.
///
/// The coefficient of `t^N` in `prod (1 - x_i t)^{-b_i}` is exactly the sum
/// of the degree-`N` terms of the series without the `(a)_N/(c)_N` factor,
/// so a running Cauchy product gives the whole series in O(n N^2).
pub fn lauricella_fd_series(spec: &HypergeometricSpec) -> Result<f64> {
    if spec.b.len() != spec.x.len() {
        return Err(Error::domain("lauricella_fd", "length mismatch between b and x"));
    }
    if let Some(x) = spec.x.iter().find(|x| x.abs() >= 1.0) {
        return Err(Error::domain("lauricella_fd", format!("series diverges for |x| = {}", x.abs())));
    }
    let xmax = spec.x.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if xmax == 0.0 {
        return Ok(1.0);
    }
    // enough terms for 1e-17 relative on the geometric envelope, with room
    // for the polynomial growth of the Pochhammer ratios
    let nmax = ((-40.0 / xmax.ln()).ceil() as usize).clamp(30, 4000);
    let mut coeffs = vec![0.0f64; nmax + 1];
    coeffs[0] = 1.0;
    let mut factor = vec![0.0f64; nmax + 1];
    for (&b, &x) in spec.b.iter().zip(&spec.x) {
        factor[0] = 1.0;
        for k in 1..=nmax {
            factor[k] = factor[k - 1] * (b + (k - 1) as f64) / k as f64 * x;
        }
        for nn in (0..=nmax).rev() {
            let mut s = 0.0;
            for k in 0..=nn {
                s += factor[k] * coeffs[nn - k];
            }
            coeffs[nn] = s;
        }
    }
    let mut ratio = 1.0;
    let mut sum = 0.0;
    for (nn, &e) in coeffs.iter().enumerate() {
        if nn > 0 {
            ratio *= (spec.a + (nn - 1) as f64) / (spec.c + (nn - 1) as f64);
        }
        sum += ratio * e;
    }
    Ok(sum)
}

/// Lauricella `F_D^{(n)}`; series inside the half-disc, integral elsewhere.
pub fn lauricella_fd(spec: &HypergeometricSpec) -> Result<f64> {
    spec.validate()?;
    if spec.x.iter().all(|x| x.abs() < SERIES_RADIUS) {
        lauricella_fd_series(spec)
    } else {
        lauricella_fd_integral(spec)
    }
}

/// Appell `F_1(a; b1, b2; c | x1, x2)`.
pub fn appell_f1(a: f64, b1: f64, b2: f64, c: f64, x1: f64, x2: f64) -> Result<f64> {
    lauricella_fd(&HypergeometricSpec::new(a, &[b1, b2], c, &[x1, x2]))
}

/// Gauss `2F1(a, b; c | x)` through the same representation (`c > a > 0`).
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    lauricella_fd(&HypergeometricSpec::new(a, &[b], c, &[x]))
}
