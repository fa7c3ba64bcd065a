//! The governing equations, written out directly from the Euler and
//! Poisson equations. Nothing here calls the special functions or the
//! closed-form solvers.
//!
//! State layouts:
//! * rate-and-cosine systems: `[p, q, r, g1, g2, g3]` where `g` is the space
//!   vertical (or the angular-momentum direction) seen from the body;
//! * attitude systems: `[p, q, r, R00, R01, ..., R22]`, with `R` the
//!   body-to-space matrix, row-major, evolving as `R' = R [w]x`. Its third
//!   row is the cosine triple.

use super::dopri::DynamicalSystem;

fn poisson(w: &[f64], g: &[f64], dg: &mut [f64]) {
    dg[0] = w[2] * g[1] - w[1] * g[2];
    dg[1] = w[0] * g[2] - w[2] * g[0];
    dg[2] = w[1] * g[0] - w[0] * g[1];
}

fn attitude(w: &[f64], r: &[f64], dr: &mut [f64]) {
    // each row of R times the skew matrix of w: row x w
    for i in 0..3 {
        let row = &r[3 * i..3 * i + 3];
        dr[3 * i] = row[1] * w[2] - row[2] * w[1];
        dr[3 * i + 1] = row[2] * w[0] - row[0] * w[2];
        dr[3 * i + 2] = row[0] * w[1] - row[1] * w[0];
    }
}

/// Physical data of the heavy symmetric top, as the oracle sees it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeavyTopData {
    pub a: f64,
    pub c: f64,
    pub mass: f64,
    pub g: f64,
    pub z_g: f64,
}

fn heavy_rates(d: &HeavyTopData, w: &[f64], gamma: &[f64], dw: &mut [f64]) {
    let mgz = d.mass * d.g * d.z_g;
    // gamma is the upward vertical, so the weight -M g gamma acting at
    // z_G e3 has moment M g z_G (gamma2, -gamma1, 0)
    dw[0] = ((d.a - d.c) * w[1] * w[2] + mgz * gamma[1]) / d.a;
    dw[1] = ((d.c - d.a) * w[2] * w[0] - mgz * gamma[0]) / d.a;
    dw[2] = 0.0;
}

fn heavy_invariants(d: &HeavyTopData, w: &[f64], gamma: &[f64]) -> Vec<f64> {
    let energy = 0.5 * (d.a * (w[0] * w[0] + w[1] * w[1]) + d.c * w[2] * w[2]) + d.mass * d.g * d.z_g * gamma[2];
    let kz = d.a * (w[0] * gamma[0] + w[1] * gamma[1]) + d.c * w[2] * gamma[2];
    let norm = gamma.iter().map(|v| v * v).sum::<f64>();
    vec![energy, kz, norm]
}

/// Heavy symmetric top (A = B), `[p, q, r, g1, g2, g3]`, with the energy,
/// the vertical angular momentum and the cosine norm attached.
pub fn build_heavy_top_system(d: HeavyTopData) -> DynamicalSystem<'static> {
    DynamicalSystem::new(6, move |_, y: &[f64], dy: &mut [f64]| {
        heavy_rates(&d, &y[..3], &y[3..], &mut dy[..3]);
        poisson(&y[..3], &y[3..], &mut dy[3..]);
    })
    .with_invariants(vec!["energy", "K_z", "|gamma|^2"], move |y| heavy_invariants(&d, &y[..3], &y[3..]))
}

/// Heavy top with the full attitude matrix carried along.
pub fn build_heavy_top_attitude_system(d: HeavyTopData) -> DynamicalSystem<'static> {
    DynamicalSystem::new(12, move |_, y: &[f64], dy: &mut [f64]| {
        heavy_rates(&d, &y[..3], &y[9..12], &mut dy[..3]);
        attitude(&y[..3], &y[3..], &mut dy[3..]);
    })
    .with_invariants(vec!["energy", "K_z", "|gamma|^2"], move |y| heavy_invariants(&d, &y[..3], &y[9..12]))
}

fn free_rates(i: &[f64; 3], w: &[f64], dw: &mut [f64]) {
    let [a, b, c] = *i;
    dw[0] = (b - c) / a * w[1] * w[2];
    dw[1] = (c - a) / b * w[2] * w[0];
    dw[2] = (a - b) / c * w[0] * w[1];
}

fn free_invariants(i: &[f64; 3], w: &[f64]) -> Vec<f64> {
    let [a, b, c] = *i;
    vec![
        a * w[0] * w[0] + b * w[1] * w[1] + c * w[2] * w[2],
        a * a * w[0] * w[0] + b * b * w[1] * w[1] + c * c * w[2] * w[2],
    ]
}

/// Torque-free body, `[p, q, r, g1, g2, g3]`, with `2T` and `|K|^2` attached
/// (plus the cosine norm).
pub fn build_free_body_system(inertia: [f64; 3]) -> DynamicalSystem<'static> {
    DynamicalSystem::new(6, move |_, y: &[f64], dy: &mut [f64]| {
        free_rates(&inertia, &y[..3], &mut dy[..3]);
        poisson(&y[..3], &y[3..], &mut dy[3..]);
    })
    .with_invariants(vec!["2T", "|K|^2", "|gamma|^2"], move |y| {
        let mut v = free_invariants(&inertia, &y[..3]);
        v.push(y[3..].iter().map(|g| g * g).sum());
        v
    })
}

/// Torque-free body with the attitude matrix.
pub fn build_free_body_attitude_system(inertia: [f64; 3]) -> DynamicalSystem<'static> {
    DynamicalSystem::new(12, move |_, y: &[f64], dy: &mut [f64]| {
        free_rates(&inertia, &y[..3], &mut dy[..3]);
        attitude(&y[..3], &y[3..], &mut dy[3..]);
    })
    .with_invariants(vec!["2T", "|K|^2"], move |y| free_invariants(&inertia, &y[..3]))
}

/// Symmetric body (A = B) with viscous torques `-mu w`,
/// `[p, q, r, g1, g2, g3]`. Only the cosine norm is conserved.
pub fn build_viscous_system(a: f64, c: f64, mu: f64) -> DynamicalSystem<'static> {
    DynamicalSystem::new(6, move |_, y: &[f64], dy: &mut [f64]| {
        let (p, q, r) = (y[0], y[1], y[2]);
        dy[0] = ((a - c) * q * r - mu * p) / a;
        dy[1] = (-(a - c) * p * r - mu * q) / a;
        dy[2] = -mu * r / c;
        poisson(&y[..3], &y[3..], &mut dy[3..]);
    })
    .with_invariants(vec!["|gamma|^2"], |y| vec![y[3..].iter().map(|g| g * g).sum()])
}

/// Kinetic energy `A p^2 + A q^2 + C r^2` of the viscous body (twice T).
pub fn viscous_energy(a: f64, c: f64, y: &[f64]) -> f64 {
    a * (y[0] * y[0] + y[1] * y[1]) + c * y[2] * y[2]
}
