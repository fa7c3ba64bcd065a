//! `gyrokit verify`: every closed form against an independent evaluation
//! (the ODE oracle, quadrature, or a series) on seeded random draws.
//!
//! Each check owns a ChaCha stream derived from the seed and its position
//! in the list, draws its cases sequentially, then evaluates them in
//! parallel. Maxima do not depend on evaluation order, so reports are
//! byte-identical for a given seed whatever the thread count.

use gyrokit_core::herpolhode::{chi_elliptic, chi_hypergeometric, herpolhode_constants, trace_curve, HerpolhodeConstants};
use gyrokit_core::integrals::{i1, i2, i3, i4, i5, i6, i7, i7_bound, i7_invert, CubicParams, Form};
use gyrokit_core::lagrange::{HeavyTop, SymmetricTopConfig};
use gyrokit_core::oracle::{
    build_free_body_attitude_system, build_heavy_top_attitude_system, build_viscous_system, integrate, HeavyTopData,
};
use gyrokit_core::poinsot::{
    angles_free, body_rates_free, derive_free, precession_free, precession_free_printed, rate_period, FreeBodyConfig,
    FreeBodyDerived,
};
use gyrokit_core::quadrature::gauss_kronrod;
use gyrokit_core::rotation::{euler_from_matrix, rotation_matrix, unwrap_near};
use gyrokit_core::specfun::{
    ellip_f, ellip_k, jacobi_am_sn_cn_dn, jacobi_m, lauricella_fd_integral, lauricella_fd_series, HypergeometricSpec,
};
use gyrokit_core::viscous::{
    bessel_params, equatorial_rates, gamma_track, gamma_track_poisson, rates, verify_p_ode_with,
    ViscousConfig,
};
use gyrokit_core::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Specfun,
    Integrals,
    Lagrange,
    Poinsot,
    Herpolhode,
    Viscous,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Specfun, Suite::Integrals, Suite::Lagrange, Suite::Poinsot, Suite::Herpolhode, Suite::Viscous];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Integrals => "integrals",
            Suite::Lagrange => "lagrange",
            Suite::Poinsot => "poinsot",
            Suite::Herpolhode => "herpolhode",
            Suite::Viscous => "viscous",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

/// Deliberate mistakes for checking that the suite can fail. Each one
/// perturbs a single constant of one closed form by a relative 1e-3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    JacobiModulus,
    LauricellaExponent,
    I5Modulus,
    LagrangeZg,
    PoinsotKappa,
    HerpolhodeG,
    ViscousArgument,
}

impl Fault {
    pub const ALL: [Fault; 7] = [
        Fault::JacobiModulus,
        Fault::LauricellaExponent,
        Fault::I5Modulus,
        Fault::LagrangeZg,
        Fault::PoinsotKappa,
        Fault::HerpolhodeG,
        Fault::ViscousArgument,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fault::JacobiModulus => "jacobi-modulus",
            Fault::LauricellaExponent => "lauricella-exponent",
            Fault::I5Modulus => "i5-modulus",
            Fault::LagrangeZg => "lagrange-zg",
            Fault::PoinsotKappa => "poinsot-kappa",
            Fault::HerpolhodeG => "herpolhode-g",
            Fault::ViscousArgument => "viscous-argument",
        }
    }

    pub fn parse(s: &str) -> Option<Fault> {
        Fault::ALL.into_iter().find(|x| x.name() == s)
    }

    /// The check this fault is meant to trip.
    pub fn target(self) -> &'static str {
        match self {
            Fault::JacobiModulus => "specfun.am_inversion",
            Fault::LauricellaExponent => "specfun.lauricella_dual",
            Fault::I5Modulus => "integrals.i5_dual",
            Fault::LagrangeZg => "lagrange.oracle",
            Fault::PoinsotKappa => "poinsot.oracle",
            Fault::HerpolhodeG => "herpolhode.dual_forms",
            Fault::ViscousArgument => "viscous.p_equation",
        }
    }
}

const FAULT: f64 = 1e-3;

/// Number of random cases per check family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sizes {
    pub jacobi: usize,
    pub lauricella: usize,
    pub integrals: usize,
    pub i7: usize,
    pub lagrange: usize,
    pub poinsot: usize,
    pub herpolhode: usize,
    pub viscous: usize,
    pub viscous_routes: usize,
}

impl Default for Sizes {
    fn default() -> Self {
        Sizes {
            jacobi: 10_000,
            lauricella: 1_000,
            integrals: 200,
            i7: 100,
            lagrange: 100,
            poinsot: 100,
            herpolhode: 50,
            viscous: 50,
            viscous_routes: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub suites: Vec<Suite>,
    pub fault: Option<Fault>,
    pub sizes: Sizes,
}

impl VerifyOptions {
    pub fn new(seed: u64) -> Self {
        VerifyOptions { seed, suites: Suite::ALL.to_vec(), fault: None, sizes: Sizes::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub suite: &'static str,
    pub samples: usize,
    /// Largest deviation seen; `null` in JSON when a case produced NaN.
    pub max_error: f64,
    pub tolerance: f64,
    /// Cases where an evaluation returned an error.
    pub failures: usize,
    pub passed: bool,
    /// Reported but not counted towards the verdict.
    pub informational: bool,
    pub note: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub fault: Option<&'static str>,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let fault = self.fault.unwrap_or("none");
        writeln!(out, "gyrokit verify: seed {} fault {fault}", self.seed).unwrap();
        for c in &self.checks {
            let status = match (c.informational, c.passed) {
                (true, _) => "INFO",
                (false, true) => "PASS",
                (false, false) => "FAIL",
            };
            write!(
                out,
                "{status} {:<32} max {:>9.3e}  tol {:>7.1e}  n {:>5}",
                c.name, c.max_error, c.tolerance, c.samples
            )
            .unwrap();
            if c.failures > 0 {
                write!(out, "  errors {}", c.failures).unwrap();
            }
            if let Some(note) = c.note {
                write!(out, "  ({note})").unwrap();
            }
            out.push('\n');
        }
        let counted = self.checks.iter().filter(|c| !c.informational).count();
        let failed = self.checks.iter().filter(|c| !c.informational && !c.passed).count();
        writeln!(out, "{} ({} of {counted} checks failed)", if self.passed { "PASS" } else { "FAIL" }, failed).unwrap();
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
}

struct Ctx {
    seed: u64,
    fault: Option<Fault>,
    sizes: Sizes,
    checks: Vec<Check>,
}

impl Ctx {
    /// Independent stream per check family, keyed by a fixed id so adding
    /// or skipping suites does not reshuffle the others.
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream);
        r
    }

    fn faulty(&self, f: Fault) -> bool {
        self.fault == Some(f)
    }

    fn push(&mut self, suite: Suite, name: &'static str, tolerance: f64, m: &Measured, idx: usize) {
        let max_error = m.max[idx];
        self.checks.push(Check {
            name,
            suite: suite.name(),
            samples: m.samples,
            max_error,
            tolerance,
            failures: m.failures,
            passed: m.failures == 0 && max_error <= tolerance,
            informational: false,
            note: None,
        });
    }
}

struct Measured {
    samples: usize,
    max: Vec<f64>,
    failures: usize,
}

/// Evaluates `f` on every case in parallel; `f` returns one deviation per
/// metric. NaN counts as infinitely bad.
fn measure<C: Sync, const K: usize>(cases: &[C], f: impl Fn(&C) -> Result<[f64; K]> + Sync + Send) -> Measured {
    let results: Vec<Result<[f64; K]>> = cases.par_iter().map(f).collect();
    let mut max = vec![0.0f64; K];
    let mut failures = 0;
    for r in results {
        match r {
            Ok(v) => {
                for (m, x) in max.iter_mut().zip(v) {
                    *m = m.max(if x.is_nan() { f64::INFINITY } else { x.abs() });
                }
            }
            Err(_) => failures += 1,
        }
    }
    Measured { samples: cases.len(), max, failures }
}

fn draw<T>(n: usize, rng: &mut ChaCha8Rng, mut f: impl FnMut(&mut ChaCha8Rng) -> T) -> Vec<T> {
    (0..n).map(|_| f(rng)).collect()
}

pub fn verify_all(opts: &VerifyOptions) -> Report {
    let mut ctx = Ctx { seed: opts.seed, fault: opts.fault, sizes: opts.sizes, checks: Vec::new() };
    for suite in Suite::ALL {
        if !opts.suites.contains(&suite) {
            continue;
        }
        match suite {
            Suite::Specfun => specfun(&mut ctx),
            Suite::Integrals => integrals(&mut ctx),
            Suite::Lagrange => lagrange(&mut ctx),
            Suite::Poinsot => poinsot(&mut ctx),
            Suite::Herpolhode => herpolhode(&mut ctx),
            Suite::Viscous => viscous(&mut ctx),
        }
    }
    let passed = ctx.checks.iter().all(|c| c.informational || c.passed);
    Report { seed: opts.seed, fault: opts.fault.map(Fault::name), passed, checks: ctx.checks }
}

fn specfun(ctx: &mut Ctx) {
    let n = ctx.sizes.jacobi;
    let cases = draw(n, &mut ctx.rng(1), |r| (r.random_range(-50.0..50.0), r.random_range(0.0..1.0)));
    let m = measure(&cases, |&(u, k): &(f64, f64)| {
        let j = jacobi_am_sn_cn_dn(u, k)?;
        Ok([(j.sn * j.sn + j.cn * j.cn - 1.0).abs().max((j.dn * j.dn + k * k * j.sn * j.sn - 1.0).abs())])
    });
    ctx.push(Suite::Specfun, "specfun.jacobi_identities", 1e-10, &m, 0);

    let shift = if ctx.faulty(Fault::JacobiModulus) { 1.0 - FAULT } else { 1.0 };
    let cases = draw(n, &mut ctx.rng(2), |r| (r.random_range(-3.0 * PI..3.0 * PI), r.random_range(0.0..0.999)));
    let m = measure(&cases, |&(phi, k): &(f64, f64)| {
        let u = ellip_f(phi, k)?;
        Ok([jacobi_am_sn_cn_dn(u, k * shift)?.am - phi])
    });
    ctx.push(Suite::Specfun, "specfun.am_inversion", 1e-10, &m, 0);

    let da = if ctx.faulty(Fault::LauricellaExponent) { FAULT } else { 0.0 };
    let cases = draw(ctx.sizes.lauricella, &mut ctx.rng(3), |r| {
        let vars = r.random_range(1..=3usize);
        let a = r.random_range(0.1..2.0);
        let c = a + r.random_range(0.1..2.0);
        let b: Vec<f64> = (0..vars).map(|_| r.random_range(-1.0..2.0)).collect();
        let x: Vec<f64> = (0..vars).map(|_| r.random_range(-0.5..=0.5)).collect();
        (a, b, c, x)
    });
    let m = measure(&cases, |(a, b, c, x)| {
        let integral = lauricella_fd_integral(&HypergeometricSpec::new(a + da, b, *c, x))?;
        let series = lauricella_fd_series(&HypergeometricSpec::new(*a, b, *c, x))?;
        Ok([integral - series])
    });
    ctx.push(Suite::Specfun, "specfun.lauricella_dual", 1e-9, &m, 0);
}

fn cubic_case(r: &mut ChaCha8Rng) -> CubicParams {
    let c = r.random_range(0.02..0.8);
    let b = c + r.random_range(0.05..1.0) * (0.99 - c);
    let a = b + r.random_range(0.05..2.0);
    CubicParams { a, b, c, alpha: r.random_range(-1.0..1.0), y: c + r.random_range(0.0..=1.0) * (b - c) }
}

fn band_case(r: &mut ChaCha8Rng) -> (f64, f64, f64, f64) {
    let lo = r.random_range(0.5..3.0);
    let width = r.random_range(0.05..3.0);
    let c = r.random_range(-3.0..0.4);
    let (a, b) = if r.random::<bool>() { (lo + width, lo) } else { (lo, lo + width) };
    let y = (lo + r.random_range(0.0..=1.0f64) * width).sqrt();
    (a, b, c, y)
}

/// `int_0^y f(sn u, cn u) du` by adaptive Gauss-Kronrod.
fn jacobi_quadrature(y: f64, k: f64, f: impl Fn(f64, f64) -> f64) -> Result<f64> {
    let m = k * k;
    gauss_kronrod(|u| jacobi_m(u, m).map(|j| f(j.sn, j.cn)).unwrap_or(f64::NAN), 0.0, y, 1e-13, 1e-13)
}

fn integrals(ctx: &mut Ctx) {
    let n = ctx.sizes.integrals;
    let triple = |e: f64, h: f64, q: f64| [e - h, (e - q).abs().max((h - q).abs())];

    let cases = draw(n, &mut ctx.rng(10), cubic_case);
    let m = measure(&cases, |p| Ok(triple(i1(p, Form::Elliptic)?, i1(p, Form::Hypergeometric)?, i1(p, Form::Quadrature)?)));
    ctx.push(Suite::Integrals, "integrals.i1_dual", 1e-8, &m, 0);
    ctx.push(Suite::Integrals, "integrals.i1_quadrature", 1e-7, &m, 1);

    let cases = draw(n, &mut ctx.rng(11), cubic_case);
    let m = measure(&cases, |p| Ok(triple(i2(p, Form::Elliptic)?, i2(p, Form::Hypergeometric)?, i2(p, Form::Quadrature)?)));
    ctx.push(Suite::Integrals, "integrals.i2_dual", 1e-8, &m, 0);
    ctx.push(Suite::Integrals, "integrals.i2_quadrature", 1e-7, &m, 1);

    // I3 needs 1 - n sn^2 > 0 along the path, so the upper limit stops
    // short of sn^2 = 1/n; the Lauricella form holds up to u = K.
    let cases = draw(n, &mut ctx.rng(12), |r| {
        let k: f64 = r.random_range(0.0..0.95);
        let nn: f64 = r.random_range(-3.0..3.0);
        let s2 = r.random_range(0.0..=1.0) * 0.9 * if nn > 1.0 { 1.0 / nn } else { 1.0 };
        (ellip_f(s2.sqrt().asin(), k).unwrap_or(0.0), nn, k)
    });
    let m = measure(&cases, |&(y, nn, k): &(f64, f64, f64)| {
        let e = i3(y, nn, k)?;
        let s = jacobi_am_sn_cn_dn(y, k)?.sn;
        let s2 = s * s;
        let h = s * s2 / 3.0
            * lauricella_fd_integral(&HypergeometricSpec::new(1.5, &[1.0, 0.5, 0.5], 2.5, &[nn * s2, s2, k * k * s2]))?;
        let q = jacobi_quadrature(y, k, |sn, _| sn * sn / (1.0 - nn * sn * sn))?;
        Ok(triple(e, h, q))
    });
    ctx.push(Suite::Integrals, "integrals.i3_dual", 1e-8, &m, 0);
    ctx.push(Suite::Integrals, "integrals.i3_quadrature", 1e-7, &m, 1);

    let cases = draw(n, &mut ctx.rng(13), |r| {
        let k: f64 = r.random_range(0.0..0.95);
        let kk = ellip_k(k).unwrap_or(FRAC_PI_2);
        (r.random_range(0.0..1.0) * kk, r.random_range(0.0..3.0) * kk, r.random_range(-3.0..0.95), k)
    });
    let m = measure(&cases, |&(y, y_far, nn, k): &(f64, f64, f64, f64)| {
        let s = jacobi_am_sn_cn_dn(y, k)?.sn;
        let s2 = s * s;
        let h = s * lauricella_fd_integral(&HypergeometricSpec::new(0.5, &[1.0, -0.5, 0.5], 1.5, &[nn * s2, s2, k * k * s2]))?;
        let e = i4(y, nn, k)?;
        let q = jacobi_quadrature(y, k, |sn, cn| cn * cn / (1.0 - nn * sn * sn))?;
        let e_far = i4(y_far, nn, k)?;
        let q_far = jacobi_quadrature(y_far, k, |sn, cn| cn * cn / (1.0 - nn * sn * sn))?;
        let [dual, quad] = triple(e, h, q);
        Ok([dual, quad.max((e_far - q_far).abs())])
    });
    ctx.push(Suite::Integrals, "integrals.i4_dual", 1e-8, &m, 0);
    ctx.push(Suite::Integrals, "integrals.i4_quadrature", 1e-7, &m, 1);

    let da = if ctx.faulty(Fault::I5Modulus) { FAULT } else { 0.0 };
    let cases = draw(n, &mut ctx.rng(14), band_case);
    let m = measure(&cases, |&(a, b, c, y): &(f64, f64, f64, f64)| {
        let e = i5(a * (1.0 + da), b, c, y, Form::Elliptic)?;
        Ok(triple(e, i5(a, b, c, y, Form::Hypergeometric)?, i5(a, b, c, y, Form::Quadrature)?))
    });
    ctx.push(Suite::Integrals, "integrals.i5_dual", 1e-8, &m, 0);
    ctx.push(Suite::Integrals, "integrals.i5_quadrature", 1e-7, &m, 1);

    let cases = draw(n, &mut ctx.rng(15), band_case);
    let m = measure(&cases, |&(a, b, c, y): &(f64, f64, f64, f64)| {
        Ok(triple(i6(a, b, c, y, Form::Elliptic)?, i6(a, b, c, y, Form::Hypergeometric)?, i6(a, b, c, y, Form::Quadrature)?))
    });
    ctx.push(Suite::Integrals, "integrals.i6_dual", 1e-8, &m, 0);
    ctx.push(Suite::Integrals, "integrals.i6_quadrature", 1e-7, &m, 1);

    let cases = draw(ctx.sizes.i7, &mut ctx.rng(16), |r| {
        let c = r.random_range(-0.9..0.5);
        let b = c + r.random_range(0.05..1.0);
        (r.random_range(0.05..2.0) + b, b, c, r.random_range(0.0..=1.0))
    });
    let m = measure(&cases, |&(a, b, c, f): &(f64, f64, f64, f64)| {
        let l = f * i7_bound(a, b, c)?;
        Ok([i7(a, b, c, i7_invert(a, b, c, l)?)? - l])
    });
    ctx.push(Suite::Integrals, "integrals.i7_round_trip", 1e-10, &m, 0);
}

/// Parameter box for random heavy tops. Draws whose nutation band comes
/// within 0.15 rad of either vertical, or whose period exceeds 30 time
/// units, are redrawn: there the Euler angles of the oracle lose digits.
fn lagrange_case(r: &mut ChaCha8Rng) -> SymmetricTopConfig {
    let edge = 0.15f64.cos();
    loop {
        let cfg = SymmetricTopConfig::from_initial_rates(
            r.random_range(0.5..3.0),
            r.random_range(0.2..3.0),
            1.0,
            9.81,
            r.random_range(0.05..0.3),
            r.random_range(0.3..2.8),
            r.random_range(-PI..PI),
            r.random_range(-PI..PI),
            [r.random_range(-2.0..2.0), r.random_range(-2.0..2.0), r.random_range(-8.0..8.0)],
        );
        if let Ok(top) = HeavyTop::new(cfg) {
            if top.roots.s2 < edge && top.roots.s1 > -edge && top.nutation_period() < 30.0 {
                return cfg;
            }
        }
    }
}

fn lagrange(ctx: &mut Ctx) {
    let cases = draw(ctx.sizes.lagrange, &mut ctx.rng(20), lagrange_case);
    let zg_scale = if ctx.faulty(Fault::LagrangeZg) { 1.0 + FAULT } else { 1.0 };
    let m = measure(&cases, |cfg| {
        let top = HeavyTop::new(*cfg)?;
        let closed = HeavyTop::new(SymmetricTopConfig { z_g: cfg.z_g * zg_scale, ..*cfg })?;
        let period = top.nutation_period();
        let grid: Vec<f64> = (1..=180).map(|i| 3.0 * period * i as f64 / 180.0).collect();
        let sys = build_heavy_top_attitude_system(HeavyTopData { a: cfg.a, c: cfg.c, mass: cfg.mass, g: cfg.g, z_g: cfg.z_g });
        let mut y0 = top.body_rates(0.0)?.to_vec();
        for row in rotation_matrix(cfg.theta0, cfg.psi0, cfg.phi0) {
            y0.extend(row);
        }
        let run = integrate(&sys, &y0, (0.0, grid[grid.len() - 1]), &grid, 1e-13, 1e-15)?;
        let (mut psi_o, mut phi_o) = (cfg.psi0, cfg.phi0);
        let mgz = cfg.mass * cfg.g * cfg.z_g;
        let e_scale = cfg.e0.abs().max(mgz);
        let k_scale = cfg.k_z0.abs().max(cfg.a * top.params.rho_hat);
        let (mut dev, mut inv) = (0.0f64, 0.0f64);
        for (t, y) in grid.iter().zip(&run.states) {
            let (th, ps, ph) = euler_from_matrix(&[[y[3], y[4], y[5]], [y[6], y[7], y[8]], [y[9], y[10], y[11]]]);
            psi_o = unwrap_near(ps, psi_o);
            phi_o = unwrap_near(ph, phi_o);
            let st = closed.state(*t)?;
            dev = dev
                .max((st.theta - th).abs())
                .max((st.psi - psi_o).abs())
                .max((st.phi - phi_o).abs())
                .max((st.rates[0] - y[0]).abs())
                .max((st.rates[1] - y[1]).abs());
            let own = top.state(*t)?;
            let (e, kz) = top.first_integrals(&own);
            let g = own.gamma;
            inv = inv
                .max((e - cfg.e0).abs() / e_scale)
                .max((kz - cfg.k_z0).abs() / k_scale)
                .max((g[0] * g[0] + g[1] * g[1] + g[2] * g[2] - 1.0).abs());
        }
        Ok([dev, inv])
    });
    ctx.push(Suite::Lagrange, "lagrange.oracle", 1e-6, &m, 0);
    ctx.push(Suite::Lagrange, "lagrange.first_integrals", 1e-9, &m, 1);
}

/// Random triaxial body, either `A < B < C` or `A > B > C`, kept away from
/// the separatrix so that three periods stay affordable.
fn free_case(r: &mut ChaCha8Rng) -> FreeBodyConfig {
    let a0: f64 = r.random_range(0.5..2.0);
    let (db, dc) = (r.random_range(0.1..2.0), r.random_range(0.1..2.0));
    let p0 = r.random_range(0.2..2.0);
    let psi0 = r.random_range(-PI..PI);
    // both orderings need the axial rate above its separatrix value
    let ratio = 1.05 + 1.95 * r.random_range(0.0..1.0);
    let (a, b, c) = if r.random::<bool>() { (a0, a0 + db, a0 + db + dc) } else { (a0 + db + dc, a0 + db, a0) };
    let r_sep = p0 * (a * (b - a) / (c * (c - b))).sqrt();
    FreeBodyConfig::from_initial_rates(a, b, c, p0, ratio * r_sep, psi0)
}

fn poinsot(ctx: &mut Ctx) {
    let cases = draw(ctx.sizes.poinsot, &mut ctx.rng(30), free_case);
    let kappa_scale = if ctx.faulty(Fault::PoinsotKappa) { 1.0 + FAULT } else { 1.0 };
    let m = measure(&cases, |cfg| {
        let d = derive_free(cfg)?;
        let closed = FreeBodyDerived { k_hat: d.k_hat * kappa_scale, ..d };
        let period = rate_period(&d) / d.tau_rate;
        let (theta0, phi0) = angles_free(0.0, &d, cfg)?;
        let mut y0 = body_rates_free(0.0, &d)?.to_vec();
        for row in rotation_matrix(theta0, cfg.psi0, phi0) {
            y0.extend(row);
        }
        let sys = build_free_body_attitude_system([cfg.a, cfg.b, cfg.c]);
        let grid: Vec<f64> = (1..=150).map(|i| 3.0 * period * i as f64 / 150.0).collect();
        let run = integrate(&sys, &y0, (0.0, grid[grid.len() - 1]), &grid, 1e-13, 1e-15)?;
        let (mut psi_o, mut phi_o) = (cfg.psi0, phi0);
        let (two_t, k2) = (2.0 * cfg.e0, cfg.k_norm * cfg.k_norm);
        let (mut dev, mut inv, mut printed) = (0.0f64, 0.0f64, 0.0f64);
        for (t, y) in grid.iter().zip(&run.states) {
            let (th, ps, ph) = euler_from_matrix(&[[y[3], y[4], y[5]], [y[6], y[7], y[8]], [y[9], y[10], y[11]]]);
            psi_o = unwrap_near(ps, psi_o);
            phi_o = unwrap_near(ph, phi_o);
            let tau = t * d.tau_rate;
            let w = body_rates_free(tau, &closed)?;
            let (theta, phi) = angles_free(tau, &closed, cfg)?;
            let psi = precession_free(tau, &closed, cfg)?;
            dev = dev
                .max((0..3).map(|i| (w[i] - y[i]).abs()).fold(0.0, f64::max))
                .max((theta - th).abs())
                .max((phi - phi_o).abs())
                .max((psi - psi_o).abs());
            let [p, q, r] = body_rates_free(tau, &d)?;
            let e = cfg.a * p * p + cfg.b * q * q + cfg.c * r * r;
            let k = (cfg.a * p).powi(2) + (cfg.b * q).powi(2) + (cfg.c * r).powi(2);
            inv = inv.max((e - two_t).abs() / two_t).max((k - k2).abs() / k2);
            // the printed constants can put the third-kind integral on a pole;
            // that is part of what this metric reports, not a failed case
            printed = printed.max(precession_free_printed(tau, &d, cfg).map_or(f64::INFINITY, |v| (v - psi_o).abs()));
        }
        Ok([dev, inv, printed])
    });
    ctx.push(Suite::Poinsot, "poinsot.oracle", 1e-6, &m, 0);
    ctx.push(Suite::Poinsot, "poinsot.first_integrals", 1e-10, &m, 1);
    ctx.push(Suite::Poinsot, "poinsot.psi_printed_constants", 1e-6, &m, 2);
    let last = ctx.checks.last_mut().expect("just pushed");
    last.informational = true;
    last.note = Some(if last.passed {
        "printed precession constants agree"
    } else {
        "printed precession constants disagree; the re-derived ones are in use"
    });
}

/// Direct quadrature of the polar equation, with `rho^2 = b + (y^2 - b) sin^2 t`
/// removing both end singularities.
fn chi_by_quadrature(rho: f64, hc: &HerpolhodeConstants) -> Result<f64> {
    let (a, b, c) = (hc.a, hc.b, hc.c);
    let d = rho * rho - b;
    let v = gauss_kronrod(
        |t| {
            let (s, co) = t.sin_cos();
            let x = b + d * s * s;
            d.abs().sqrt() * co * (1.0 + hc.g_const / x) / ((a - x) * (x - c)).abs().sqrt()
        },
        0.0,
        FRAC_PI_2,
        1e-13,
        1e-13,
    )?;
    Ok(hc.chi0 + v / hc.d.sqrt())
}

fn herpolhode(ctx: &mut Ctx) {
    let cases = draw(ctx.sizes.herpolhode, &mut ctx.rng(40), free_case);
    let g_scale = if ctx.faulty(Fault::HerpolhodeG) { 1.0 + FAULT } else { 1.0 };
    let m = measure(&cases, |cfg| {
        let hc = HerpolhodeConstants::from_motion(cfg.a, cfg.b, cfg.c, cfg.e0, cfg.k_norm)?;
        let bent = HerpolhodeConstants { g_const: hc.g_const * g_scale, ..hc };
        let (lo, hi) = hc.annulus_radii();
        let (mut dual, mut quad) = (0.0f64, 0.0f64);
        for i in 0..=40 {
            let rho = lo + (hi - lo) * i as f64 / 40.0;
            let e = chi_elliptic(rho, &bent)?;
            let h = chi_hypergeometric(rho, &hc)?;
            dual = dual.max((e - h).abs());
            if i > 0 && i < 40 {
                let q = chi_by_quadrature(rho, &hc)?;
                quad = quad.max((e - q).abs()).max((h - q).abs());
            }
        }
        let outside = trace_curve(&hc, 33, 6)?.iter().map(|p| (lo - p.rho).max(p.rho - hi)).fold(0.0, f64::max);
        Ok([dual, quad, outside])
    });
    ctx.push(Suite::Herpolhode, "herpolhode.dual_forms", 1e-8, &m, 0);
    ctx.push(Suite::Herpolhode, "herpolhode.quadrature", 1e-7, &m, 1);
    ctx.push(Suite::Herpolhode, "herpolhode.annulus", 0.0, &m, 2);

    let cases = draw(ctx.sizes.herpolhode, &mut ctx.rng(41), |r| {
        let c = r.random_range(0.2..2.0);
        let a = c + r.random_range(0.1..2.0);
        (a, c, c + r.random_range(0.05..0.95) * (a - c), r.random_range(0.2..3.0))
    });
    let m = measure(&cases, |&(a, c, d, mm): &(f64, f64, f64, f64)| {
        let hc = herpolhode_constants(a, a, c, d, mm)?;
        let radius = hc.a.sqrt();
        Ok([trace_curve(&hc, 17, 4)?.iter().map(|p| (p.rho - radius).abs()).fold(0.0, f64::max)])
    });
    ctx.push(Suite::Herpolhode, "herpolhode.circle", 1e-10, &m, 0);
}

fn viscous_case(r: &mut ChaCha8Rng) -> ViscousConfig {
    let gamma0 = loop {
        let v: [f64; 3] = [r.random_range(-1.0..1.0), r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.1 && n <= 1.0 {
            break [v[0] / n, v[1] / n, v[2] / n];
        }
    };
    ViscousConfig {
        a: r.random_range(0.5..3.0),
        c: r.random_range(0.2..3.0),
        mu: r.random_range(0.05..1.0),
        p0: r.random_range(-2.0..2.0),
        q0: r.random_range(-2.0..2.0),
        r0: r.random_range(-6.0..6.0),
        gamma0,
        psi0: r.random_range(-PI..PI),
    }
}

fn viscous(ctx: &mut Ctx) {
    let cases = draw(ctx.sizes.viscous, &mut ctx.rng(50), viscous_case);
    let stretch = if ctx.faulty(Fault::ViscousArgument) { 1.0 + FAULT } else { 1.0 };
    let m = measure(&cases, |cfg| {
        let t_end = 5.0 * cfg.a / cfg.mu;
        let grid: Vec<f64> = (1..=200).map(|i| t_end * i as f64 / 200.0).collect();
        let sys = build_viscous_system(cfg.a, cfg.c, cfg.mu);
        let y0 = [cfg.p0, cfg.q0, cfg.r0, cfg.gamma0[0], cfg.gamma0[1], cfg.gamma0[2]];
        let run = integrate(&sys, &y0, (0.0, t_end), &grid, 1e-13, 1e-15)?;
        let mut bp = bessel_params(cfg)?;
        bp.arg_scale *= stretch;
        let m0 = cfg.p0.hypot(cfg.q0);
        let (mut resid, mut law, mut dev) = (0.0f64, 0.0f64, 0.0f64);
        for (t, y) in grid.iter().zip(&run.states) {
            let w = rates(*t, cfg)?;
            resid = resid.max(verify_p_ode_with(*t, cfg, &bp)?.abs());
            let expected = m0 * (-cfg.mu * t / cfg.a).exp();
            law = law.max((w[0].hypot(w[1]) - expected).abs() / expected);
            dev = dev.max((0..3).map(|i| (w[i] - y[i]).abs()).fold(0.0, f64::max));
        }
        Ok([resid, law, dev])
    });
    ctx.push(Suite::Viscous, "viscous.p_equation", 1e-8, &m, 0);
    ctx.push(Suite::Viscous, "viscous.magnitude_law", 1e-9, &m, 1);
    ctx.push(Suite::Viscous, "viscous.oracle", 1e-7, &m, 2);

    let cases = draw(ctx.sizes.viscous_routes, &mut ctx.rng(51), viscous_case);
    let m = measure(&cases, |cfg| {
        let t_end = 5.0 * cfg.a / cfg.mu;
        let grid: Vec<f64> = (0..=200).map(|i| t_end * i as f64 / 200.0).collect();
        let resolvent = gamma_track(&grid, cfg)?;
        let poisson = gamma_track_poisson(&grid, cfg)?;
        let mut dev = 0.0f64;
        for t in &grid {
            let (g, gp) = (resolvent.gamma(*t)?, poisson.gamma(*t)?);
            dev = dev.max((0..3).map(|i| (g[i] - gp[i]).abs()).fold(0.0, f64::max));
        }
        Ok([dev])
    });
    ctx.push(Suite::Viscous, "viscous.gamma_routes", 1e-7, &m, 0);

    // vanishing drag against the free symmetric body, whose equatorial
    // rate turns at (A - C) r0 / A with constant length
    let cases = draw(ctx.sizes.viscous, &mut ctx.rng(52), |r| ViscousConfig { mu: 1e-8, ..viscous_case(r) });
    let m = measure(&cases, |cfg| {
        let mut dev = 0.0f64;
        for i in 0..=50 {
            let t = 10.0 * i as f64 / 50.0;
            let (p, q) = equatorial_rates(t, cfg)?;
            let (s, co) = ((cfg.a - cfg.c) * cfg.r0 * t / cfg.a).sin_cos();
            dev = dev.max((p - (cfg.p0 * co + cfg.q0 * s)).abs()).max((q - (cfg.q0 * co - cfg.p0 * s)).abs());
        }
        Ok([dev])
    });
    ctx.push(Suite::Viscous, "viscous.vanishing_drag", 1e-4, &m, 0);
}
