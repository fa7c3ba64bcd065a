//! Heavy symmetric top about a fixed point on its figure axis.
//!
//! `cos(theta)` moves between the two roots `s1 < s2` of the resolvent cubic
//! as a squared `sn`. Precession and spin follow from the weighted integrals
//! of [`crate::integrals`], either in Lauricella form on monotone legs of the
//! nutation (stitched together leg by leg), or in elliptic form with the
//! unwrapped Jacobi amplitude, which does the stitching by itself.

use crate::error::{Error, Result};
use crate::integrals::{weighted_parts, Form, WeightedParts};
use crate::rotation::{self, cross, mat_vec, Mat3, Vec3};
use crate::specfun::{ellip_f_m, ellip_k_m, ellip_pi_m, jacobi_m};
use std::f64::consts::PI;

/// Sign of `d(cos theta)/dt` at `t = 0`. With `Rising` the figure axis
/// starts by moving towards the upper turning circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NutationDirection {
    #[default]
    Rising,
    Falling,
}

/// Physical data and initial conditions of the heavy top.
///
/// `e0` is the total energy, kinetic plus potential, and `k_z0` the vertical
/// component of the angular momentum about the fixed point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricTopConfig {
    pub a: f64,
    pub c: f64,
    pub mass: f64,
    pub g: f64,
    pub z_g: f64,
    pub theta0: f64,
    pub phi0: f64,
    pub psi0: f64,
    pub r0: f64,
    pub k_z0: f64,
    pub e0: f64,
    pub direction: NutationDirection,
}

impl SymmetricTopConfig {
    /// Builds a configuration from initial body rates instead of the
    /// energy and momentum constants.
    #[allow(clippy::too_many_arguments)]
    pub fn from_initial_rates(
        a: f64,
        c: f64,
        mass: f64,
        g: f64,
        z_g: f64,
        theta0: f64,
        psi0: f64,
        phi0: f64,
        rates: Vec3,
    ) -> Self {
        let [p0, q0, r0] = rates;
        let gamma = [theta0.sin() * phi0.sin(), theta0.sin() * phi0.cos(), theta0.cos()];
        let e0 = 0.5 * (a * (p0 * p0 + q0 * q0) + c * r0 * r0) + mass * g * z_g * gamma[2];
        let k_z0 = a * (p0 * gamma[0] + q0 * gamma[1]) + c * r0 * gamma[2];
        let sdot = q0 * gamma[0] - p0 * gamma[1];
        let direction = if sdot >= 0.0 { NutationDirection::Rising } else { NutationDirection::Falling };
        SymmetricTopConfig { a, c, mass, g, z_g, theta0, phi0, psi0, r0, k_z0, e0, direction }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("A", self.a),
            ("C", self.c),
            ("M", self.mass),
            ("g", self.g),
            ("z_G", self.z_g),
            ("theta0", self.theta0),
            ("phi0", self.phi0),
            ("psi0", self.psi0),
            ("r0", self.r0),
            ("K_z0", self.k_z0),
            ("E0", self.e0),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::config(format!("{name} is not finite")));
            }
        }
        for (name, v) in &fields[..5] {
            if *v <= 0.0 {
                return Err(Error::config(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Dimensionless groups of the problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedTopParams {
    /// `sqrt(2 M g z_G / A)`, an inverse time.
    pub rho_hat: f64,
    /// `E0 / (M g z_G)`.
    pub h: f64,
    /// `C / A`.
    pub c: f64,
    /// `K_z0 / (A rho_hat)`.
    pub k_hat: f64,
    /// `r0 / rho_hat`.
    pub lambda: f64,
}

pub fn derive_params(cfg: &SymmetricTopConfig) -> Result<DerivedTopParams> {
    cfg.validate()?;
    let mgz = cfg.mass * cfg.g * cfg.z_g;
    let rho_hat = (2.0 * mgz / cfg.a).sqrt();
    Ok(DerivedTopParams {
        rho_hat,
        h: cfg.e0 / mgz,
        c: cfg.c / cfg.a,
        k_hat: cfg.k_z0 / (cfg.a * rho_hat),
        lambda: cfg.r0 / rho_hat,
    })
}

impl DerivedTopParams {
    /// Monic coefficients `[b2, b1, b0]` of `f(s) / rho_hat^2`.
    pub fn cubic(&self) -> [f64; 3] {
        let cl = self.c * self.lambda;
        let hh = self.h - self.c * self.lambda * self.lambda;
        [-(hh + cl * cl), 2.0 * self.k_hat * cl - 1.0, hh - self.k_hat * self.k_hat]
    }

    /// The resolvent `f(s)`, so that `(d cos theta / dt)^2 = f(cos theta)`.
    pub fn resolvent(&self, s: f64) -> f64 {
        let [b2, b1, b0] = self.cubic();
        self.rho_hat * self.rho_hat * (((s + b2) * s + b1) * s + b0)
    }
}

/// Roots of the resolvent and the constants of the nutation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventRoots {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    /// Nutation modulus `sqrt((s2 - s1)/(s3 - s1))`.
    pub k: f64,
    /// Phase of the `sn^2` argument at `t = 0` for a rising start.
    pub l: f64,
}

fn polish(coef: &[f64; 3], mut s: f64) -> f64 {
    let [b2, b1, b0] = *coef;
    for _ in 0..4 {
        let f = ((s + b2) * s + b1) * s + b0;
        let df = (3.0 * s + 2.0 * b2) * s + b1;
        if df == 0.0 {
            break;
        }
        let step = f / df;
        s -= step;
        if step.abs() <= 1e-16 * s.abs().max(1.0) {
            break;
        }
    }
    s
}

/// Real roots of the monic cubic, ascending, or `None` if two are complex.
pub fn cubic_roots(coef: &[f64; 3]) -> Option<[f64; 3]> {
    let [b2, b1, b0] = *coef;
    let shift = b2 / 3.0;
    let p = b1 - b2 * b2 / 3.0;
    let q = 2.0 * b2 * b2 * b2 / 27.0 - b2 * b1 / 3.0 + b0;
    if p >= 0.0 {
        return None;
    }
    let r = (-p / 3.0).sqrt();
    let arg = 3.0 * q / (2.0 * p) / r;
    if arg.abs() > 1.0 + 1e-12 {
        return None;
    }
    let theta = arg.clamp(-1.0, 1.0).acos() / 3.0;
    let mut roots = [0.0; 3];
    for (i, root) in roots.iter_mut().enumerate() {
        let t = 2.0 * r * (theta - 2.0 * PI * i as f64 / 3.0).cos();
        *root = polish(coef, t - shift);
    }
    roots.sort_by(f64::total_cmp);
    Some(roots)
}

/// Roots `s1 <= s0 <= s2 < 1 < s3` under the three working assumptions.
pub fn resolvent_roots(dp: &DerivedTopParams, s0: f64) -> Result<ResolventRoots> {
    let cl = dp.c * dp.lambda;
    let sep = 1e-12 * (cl.abs() + dp.k_hat.abs()).max(1.0);
    if (cl - dp.k_hat).abs() <= sep || (cl + dp.k_hat).abs() <= sep {
        return Err(Error::Assumption {
            which: "1",
            detail: format!("c*lambda = {cl} equals +-k_hat = {}; the axis can reach the vertical", dp.k_hat),
        });
    }
    let f_up = dp.resolvent(1.0);
    let f_down = dp.resolvent(-1.0);
    if !(f_up < 0.0 && f_down < 0.0) {
        return Err(Error::Assumption { which: "2", detail: format!("f(1) = {f_up}, f(-1) = {f_down} must be negative") });
    }
    if !(s0 > -1.0 && s0 < 1.0) {
        return Err(Error::Assumption { which: "3", detail: format!("cos(theta0) = {s0} is at the vertical") });
    }
    let scale = dp.rho_hat * dp.rho_hat * (1.0 + dp.h.abs() + cl * cl + dp.k_hat * dp.k_hat);
    let f0 = dp.resolvent(s0);
    if f0 < -1e-12 * scale {
        return Err(Error::Assumption { which: "3", detail: format!("f(s0) = {f0} < 0: no real motion through theta0") });
    }
    let coef = dp.cubic();
    let [s1, s2, s3] = cubic_roots(&coef)
        .ok_or_else(|| Error::Assumption { which: "3", detail: "resolvent has complex roots".into() })?;
    if !(s1 > -1.0 && s2 < 1.0 && s3 > 1.0) {
        return Err(Error::Assumption {
            which: "2",
            detail: format!("roots {s1}, {s2}, {s3} not arranged as -1 < s1 < s2 < 1 < s3"),
        });
    }
    // A double root splits by about sqrt(eps) under rounding, so anything
    // narrower than this is steady precession for our purposes.
    if s2 - s1 <= 1e-7 {
        return Err(Error::Assumption {
            which: "3",
            detail: format!("double root s1 = s2 = {s1}: steady precession, no nutation"),
        });
    }
    let s0 = s0.clamp(s1, s2);
    let m = (s2 - s1) / (s3 - s1);
    let amp0 = ((s0 - s1) / (s2 - s1)).clamp(0.0, 1.0).sqrt().asin();
    Ok(ResolventRoots { s1, s2, s3, k: m.sqrt(), l: ellip_f_m(amp0, m)? })
}

/// `cos(theta)` at time `t` given the phase of the nutation at `t = 0`.
pub fn nutation(t: f64, rr: &ResolventRoots, dp: &DerivedTopParams) -> Result<f64> {
    let w = 0.5 * (rr.s3 - rr.s1).sqrt() * dp.rho_hat * t + rr.l;
    let sn = jacobi_m(w, rr.k * rr.k)?.sn;
    Ok(rr.s1 + (rr.s2 - rr.s1) * sn * sn)
}

fn leg_parts(theta: f64, rr: &ResolventRoots, form: Form) -> Result<(WeightedParts, WeightedParts)> {
    let s = theta.cos();
    let tol = 1e-12;
    if s < rr.s1 - tol || s > rr.s2 + tol {
        return Err(Error::domain(
            "precession_of_theta",
            format!("cos(theta) = {s} outside the nutation band [{}, {}]", rr.s1, rr.s2),
        ));
    }
    let s = s.clamp(rr.s1, rr.s2);
    let part = weighted_parts(rr.s3, rr.s2, rr.s1, s, form)?;
    let full = weighted_parts(rr.s3, rr.s2, rr.s1, rr.s2, form)?;
    Ok((part, full))
}

fn stitch(branch: i64, part: f64, full: f64) -> f64 {
    if branch.rem_euclid(2) == 0 {
        branch as f64 * full + part
    } else {
        (branch + 1) as f64 * full - part
    }
}

/// Precession accumulated from the lower turning point `cos(theta) = s1`
/// at the start of leg 0, up to `theta` on leg `branch`.
///
/// Even legs run from `s1` up to `s2`, odd legs back down.
pub fn precession_of_theta(theta: f64, rr: &ResolventRoots, dp: &DerivedTopParams, branch: i64, form: Form) -> Result<f64> {
    let (part, full) = leg_parts(theta, rr, form)?;
    let cl = dp.c * dp.lambda;
    let g = |w: &WeightedParts| dp.k_hat * w.j0 - cl * w.j1;
    Ok(stitch(branch, g(&part), g(&full)))
}

/// Spin accumulated over the same path as [`precession_of_theta`]; includes
/// the `r0 t` contribution of the constant axial rate.
pub fn spin_of_theta(theta: f64, rr: &ResolventRoots, dp: &DerivedTopParams, branch: i64, form: Form) -> Result<f64> {
    let (part, full) = leg_parts(theta, rr, form)?;
    let cl = dp.c * dp.lambda;
    let hs = |w: &WeightedParts| dp.k_hat * w.j1 - cl * w.j2;
    let integral = stitch(branch, hs(&part), hs(&full));
    // time from the lower turning point, by inverting the nutation
    let m = rr.k * rr.k;
    let amp = ((theta.cos() - rr.s1) / (rr.s2 - rr.s1)).clamp(0.0, 1.0).sqrt().asin();
    let w = stitch(branch, ellip_f_m(amp, m)?, ellip_k_m(m)?);
    let t = w / (0.5 * (rr.s3 - rr.s1).sqrt() * dp.rho_hat);
    Ok(dp.lambda * dp.rho_hat * t - integral)
}

/// Euler angles, rates and cosines at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopState {
    pub t: f64,
    pub theta: f64,
    pub psi: f64,
    pub phi: f64,
    pub rates: Vec3,
    pub gamma: Vec3,
}

/// Position and velocity of a body point, in space axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMotion {
    pub position: Vec3,
    pub velocity: Vec3,
}

/// A fully set-up heavy top, ready to be sampled in time.
#[derive(Debug, Clone)]
pub struct HeavyTop {
    pub cfg: SymmetricTopConfig,
    pub params: DerivedTopParams,
    pub roots: ResolventRoots,
    phase0: f64,
    w_rate: f64,
    m: f64,
    n1: f64,
    n2: f64,
    psi_ref: f64,
    phi_ref: f64,
}

impl HeavyTop {
    pub fn new(cfg: SymmetricTopConfig) -> Result<Self> {
        let params = derive_params(&cfg)?;
        let roots = resolvent_roots(&params, cfg.theta0.cos())?;
        let phase0 = match cfg.direction {
            NutationDirection::Rising => roots.l,
            NutationDirection::Falling => -roots.l,
        };
        let (s1, s2, s3) = (roots.s1, roots.s2, roots.s3);
        let mut top = HeavyTop {
            cfg,
            params,
            roots,
            phase0,
            w_rate: 0.5 * (s3 - s1).sqrt() * params.rho_hat,
            m: roots.k * roots.k,
            n1: (s2 - s1) / (1.0 - s1),
            n2: -(s2 - s1) / (1.0 + s1),
            psi_ref: 0.0,
            phi_ref: 0.0,
        };
        let (psi0, phi0) = top.integrals_at_phase(phase0)?;
        top.psi_ref = psi0;
        top.phi_ref = phi0;
        Ok(top)
    }

    /// Precession and spin integrals from phase 0 to phase `w`, through the
    /// unwrapped amplitude.
    fn integrals_at_phase(&self, w: f64) -> Result<(f64, f64)> {
        let rr = &self.roots;
        let am = jacobi_m(w, self.m)?.am;
        let x1 = ellip_pi_m(am, self.n1, self.m)?;
        let x2 = ellip_pi_m(am, self.n2, self.m)?;
        let root = (rr.s3 - rr.s1).sqrt();
        let j0 = (x1 / (1.0 - rr.s1) + x2 / (1.0 + rr.s1)) / root;
        let j1 = (x1 / (1.0 - rr.s1) - x2 / (1.0 + rr.s1)) / root;
        let j2 = j0 - 2.0 * w / root;
        let cl = self.params.c * self.params.lambda;
        let k = self.params.k_hat;
        Ok((k * j0 - cl * j1, k * j1 - cl * j2))
    }

    fn phase(&self, t: f64) -> f64 {
        self.w_rate * t + self.phase0
    }

    /// Period of the nutation, `4 K(k) / (rho_hat sqrt(s3 - s1))`.
    pub fn nutation_period(&self) -> f64 {
        4.0 * ellip_k_m(self.m).unwrap_or(f64::INFINITY) / (2.0 * self.w_rate)
    }

    pub fn cos_theta(&self, t: f64) -> Result<f64> {
        nutation(t, &ResolventRoots { l: self.phase0, ..self.roots }, &self.params)
    }

    /// `(theta, psi, phi)` at time `t`.
    pub fn angles_of_t(&self, t: f64) -> Result<(f64, f64, f64)> {
        let w = self.phase(t);
        let sn = jacobi_m(w, self.m)?.sn;
        let s = self.roots.s1 + (self.roots.s2 - self.roots.s1) * sn * sn;
        let (gpsi, gphi) = self.integrals_at_phase(w)?;
        let psi = self.cfg.psi0 + gpsi - self.psi_ref;
        let phi = self.cfg.phi0 + self.cfg.r0 * t - (gphi - self.phi_ref);
        Ok((s.clamp(-1.0, 1.0).acos(), psi, phi))
    }

    /// Same as [`HeavyTop::angles_of_t`] but through the `theta`-parametrised
    /// integrals on monotone legs, evaluated along `form`.
    pub fn angles_of_t_with(&self, t: f64, form: Form) -> Result<(f64, f64, f64)> {
        let k = ellip_k_m(self.m)?;
        let leg_of = |w: f64| (w / k).floor() as i64;
        let w = self.phase(t);
        let sn = jacobi_m(w, self.m)?.sn;
        let s = (self.roots.s1 + (self.roots.s2 - self.roots.s1) * sn * sn).clamp(-1.0, 1.0);
        let theta = s.acos();
        let (rr, dp) = (&self.roots, &self.params);
        let psi = precession_of_theta(theta, rr, dp, leg_of(w), form)?;
        let phi = spin_of_theta(theta, rr, dp, leg_of(w), form)?;
        let theta0 = self.cfg.theta0.cos().clamp(rr.s1, rr.s2).acos();
        let psi_ref = precession_of_theta(theta0, rr, dp, leg_of(self.phase0), form)?;
        let phi_ref = spin_of_theta(theta0, rr, dp, leg_of(self.phase0), form)?;
        Ok((theta, self.cfg.psi0 + psi - psi_ref, self.cfg.phi0 + phi - phi_ref))
    }

    /// Full state at time `t`: angles, body rates and cosines.
    pub fn state(&self, t: f64) -> Result<TopState> {
        let (theta, psi, phi) = self.angles_of_t(t)?;
        let w = self.phase(t);
        let j = jacobi_m(w, self.m)?;
        let rr = &self.roots;
        let s = theta.cos();
        let sdot = (rr.s2 - rr.s1) * 2.0 * j.sn * j.cn * j.dn * self.w_rate;
        let gamma = [theta.sin() * phi.sin(), theta.sin() * phi.cos(), s];
        let sin2 = 1.0 - s * s;
        if sin2 < 2e-9 {
            return Err(Error::singular("body_rates", format!("figure axis vertical at t = {t}")));
        }
        let dp = &self.params;
        let lead = dp.rho_hat * (dp.k_hat - dp.c * dp.lambda * s);
        let p = (lead * gamma[0] - gamma[1] * sdot) / sin2;
        let q = (lead * gamma[1] + gamma[0] * sdot) / sin2;
        Ok(TopState { t, theta, psi, phi, rates: [p, q, self.cfg.r0], gamma })
    }

    pub fn body_rates(&self, t: f64) -> Result<Vec3> {
        Ok(self.state(t)?.rates)
    }

    pub fn rotation_at(&self, t: f64) -> Result<Mat3> {
        let (theta, psi, phi) = self.angles_of_t(t)?;
        Ok(rotation::rotation_matrix(theta, psi, phi))
    }

    /// Space position and velocity of the body point `x` (body axes).
    pub fn point_trajectory(&self, t: f64, x: Vec3) -> Result<PointMotion> {
        let st = self.state(t)?;
        let r = rotation::rotation_matrix(st.theta, st.psi, st.phi);
        let position = mat_vec(&r, &x);
        let omega = mat_vec(&r, &st.rates);
        Ok(PointMotion { position, velocity: cross(&omega, &position) })
    }

    /// Reaction of the support on the body, in space axes.
    ///
    /// From `Phi - M g K = M a_G`, with `a_G` differentiated analytically
    /// through the Euler equations.
    pub fn constraint_reaction(&self, t: f64) -> Result<Vec3> {
        let st = self.state(t)?;
        let cfg = &self.cfg;
        let [p, q, r] = st.rates;
        let mgz = cfg.mass * cfg.g * cfg.z_g;
        let wdot_body = [
            ((cfg.a - cfg.c) * q * r + mgz * st.gamma[1]) / cfg.a,
            ((cfg.c - cfg.a) * r * p - mgz * st.gamma[0]) / cfg.a,
            0.0,
        ];
        let rot = rotation::rotation_matrix(st.theta, st.psi, st.phi);
        let xg = mat_vec(&rot, &[0.0, 0.0, cfg.z_g]);
        let w = mat_vec(&rot, &st.rates);
        let wdot = mat_vec(&rot, &wdot_body);
        let acc = cross(&wdot, &xg);
        let centripetal = cross(&w, &cross(&w, &xg));
        Ok([
            cfg.mass * (acc[0] + centripetal[0]),
            cfg.mass * (acc[1] + centripetal[1]),
            cfg.mass * (acc[2] + centripetal[2]) + cfg.mass * cfg.g,
        ])
    }

    /// Energy and vertical angular momentum recomputed from a state.
    pub fn first_integrals(&self, st: &TopState) -> (f64, f64) {
        let cfg = &self.cfg;
        let [p, q, r] = st.rates;
        let e = 0.5 * (cfg.a * (p * p + q * q) + cfg.c * r * r) + cfg.mass * cfg.g * cfg.z_g * st.gamma[2];
        let kz = cfg.a * (p * st.gamma[0] + q * st.gamma[1]) + cfg.c * r * st.gamma[2];
        (e, kz)
    }
}

/// Euler angles at `t` for a configuration (convenience over [`HeavyTop`]).
pub fn angles_of_t(t: f64, cfg: &SymmetricTopConfig) -> Result<(f64, f64, f64)> {
    HeavyTop::new(*cfg)?.angles_of_t(t)
}

/// Body rates at `t` for a configuration.
pub fn body_rates(t: f64, cfg: &SymmetricTopConfig) -> Result<Vec3> {
    HeavyTop::new(*cfg)?.body_rates(t)
}

/// Constraint reaction at `t` for a configuration.
pub fn constraint_reaction(t: f64, cfg: &SymmetricTopConfig) -> Result<Vec3> {
    HeavyTop::new(*cfg)?.constraint_reaction(t)
}

/// Motion of a body point at `t` for a configuration.
pub fn point_trajectory(t: f64, cfg: &SymmetricTopConfig, body_point: Vec3) -> Result<PointMotion> {
    HeavyTop::new(*cfg)?.point_trajectory(t, body_point)
}
