//! Symmetric body (`A = B`) without weight, under viscous torques
//! `-mu (p, q, r)`.
//!
//! The axial rate decays exponentially. The equatorial rates come out of a
//! second-order equation for `p` whose solution is a pair of half-order
//! Bessel functions, i.e. cosine and sine of an exponentially shrinking
//! argument. The cosines of the vertical are integrated numerically, by the
//! third-order resolvent for `gamma1` where it is well conditioned and by
//! the Poisson equations elsewhere.

use crate::error::{Error, Result};
use crate::oracle::{integrate, DynamicalSystem, IntegrationResult};
use crate::quadrature::adaptive_simpson;
use crate::rotation::{unwrap_near, Vec3};

const RTOL: f64 = 1e-12;
const ATOL: f64 = 1e-14;
/// The resolvent is used only where `|r f3 + q f2| >= DENOM_GUARD |w|^3`.
const DENOM_GUARD: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscousConfig {
    pub a: f64,
    pub c: f64,
    pub mu: f64,
    pub p0: f64,
    pub q0: f64,
    pub r0: f64,
    pub gamma0: Vec3,
    /// Initial precession; only shifts `psi`.
    pub psi0: f64,
}

impl ViscousConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("A", self.a), ("C", self.c), ("mu", self.mu)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        let rest = [self.p0, self.q0, self.r0, self.psi0, self.gamma0[0], self.gamma0[1], self.gamma0[2]];
        if rest.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("initial data must be finite"));
        }
        let n = self.gamma0.iter().map(|g| g * g).sum::<f64>().sqrt();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::config(format!("|gamma0| = {n}, expected 1")));
        }
        Ok(())
    }

    /// No coupling between `p` and `q`: `A = C` or no axial spin.
    pub fn is_decoupled(&self) -> bool {
        self.a == self.c || self.r0 == 0.0
    }
}

/// Constants of the Bessel-form solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselSolutionParams {
    pub c1: f64,
    pub c2: f64,
    pub nu: f64,
    /// `C |r0| |A - C| / (A mu)`, the Bessel argument at `t = 0`.
    pub arg_scale: f64,
    /// Sign of `(A - C) r0`.
    pub sigma: f64,
}

/// Order `sqrt(a^2 - 4c) / lambda` of the Bessel functions for the
/// coefficients of the `p` equation.
pub fn bessel_order(cfg: &ViscousConfig) -> f64 {
    let (a, c, mu) = (cfg.a, cfg.c, cfg.mu);
    let damp = mu * (a + 2.0 * c) / (a * c);
    let stiff = mu * mu * (a + c) / (a * a * c);
    let lambda = -2.0 * mu / c;
    (damp * damp - 4.0 * stiff).max(0.0).sqrt() / lambda
}

pub fn bessel_params(cfg: &ViscousConfig) -> Result<BesselSolutionParams> {
    cfg.validate()?;
    if cfg.is_decoupled() {
        return Err(Error::domain("bessel_params", "A = C or r0 = 0: p and q decouple, no Bessel form"));
    }
    let beta = cfg.c * cfg.r0.abs() * (cfg.a - cfg.c).abs() / (cfg.a * cfg.mu);
    let sigma = ((cfg.a - cfg.c) * cfg.r0).signum();
    let pre = (std::f64::consts::FRAC_PI_2 * beta).sqrt();
    let (sb, cb) = beta.sin_cos();
    Ok(BesselSolutionParams {
        c1: pre * (cfg.p0 * cb + sigma * cfg.q0 * sb),
        c2: pre * (cfg.p0 * sb - sigma * cfg.q0 * cb),
        nu: bessel_order(cfg),
        arg_scale: beta,
        sigma,
    })
}

pub fn axial_rate(t: f64, cfg: &ViscousConfig) -> f64 {
    cfg.r0 * (-cfg.mu * t / cfg.c).exp()
}

/// `p`, `p'`, `p''` of the Bessel form, together with the factor
/// `e^{-mu t/A} N theta' h` that equals `A p' + mu p` over `A`.
struct PJet {
    p: f64,
    dp: f64,
    ddp: f64,
    coupled: f64,
}

fn p_jet(t: f64, cfg: &ViscousConfig, bp: &BesselSolutionParams) -> PJet {
    let ka = cfg.mu / cfg.a;
    let kc = cfg.mu / cfg.c;
    let theta = bp.arg_scale * (-kc * t).exp();
    let (s, c) = theta.sin_cos();
    let g = bp.c1 * c + bp.c2 * s;
    let h = -bp.c1 * s + bp.c2 * c;
    let env = (-ka * t).exp() * (2.0 / (std::f64::consts::PI * bp.arg_scale)).sqrt();
    let dtheta = -kc * theta;
    let ddtheta = kc * kc * theta;
    PJet {
        p: env * g,
        dp: env * (-ka * g + dtheta * h),
        ddp: env * ((ka * ka - dtheta * dtheta) * g + (ddtheta - 2.0 * ka * dtheta) * h),
        coupled: env * dtheta * h,
    }
}

/// `(p, q)` at time `t`.
pub fn equatorial_rates(t: f64, cfg: &ViscousConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    if cfg.is_decoupled() {
        let e = (-cfg.mu * t / cfg.a).exp();
        return Ok((cfg.p0 * e, cfg.q0 * e));
    }
    let bp = bessel_params(cfg)?;
    let jet = p_jet(t, cfg, &bp);
    // q = e^{mu t/C} (A p' + mu p) / (r0 (A - C)); the mu p part cancels
    // against the envelope derivative, so it is dropped before evaluating
    let q = (cfg.mu * t / cfg.c).exp() * cfg.a * jet.coupled / (cfg.r0 * (cfg.a - cfg.c));
    Ok((jet.p, q))
}

/// `(p, q, r)` at time `t`.
pub fn rates(t: f64, cfg: &ViscousConfig) -> Result<Vec3> {
    let (p, q) = equatorial_rates(t, cfg)?;
    Ok([p, q, axial_rate(t, cfg)])
}

/// Residual of the second-order equation for `p` at `t`, divided by
/// `(|p''| + |a p'| + |k p|)` so that it is dimensionless.
pub fn verify_p_ode(t: f64, cfg: &ViscousConfig) -> Result<f64> {
    let bp = bessel_params(cfg)?;
    verify_p_ode_with(t, cfg, &bp)
}

/// As [`verify_p_ode`] with given constants (which need not match the
/// initial conditions).
pub fn verify_p_ode_with(t: f64, cfg: &ViscousConfig, bp: &BesselSolutionParams) -> Result<f64> {
    let (a, c, mu) = (cfg.a, cfg.c, cfg.mu);
    let jet = p_jet(t, cfg, bp);
    let damp = mu * (a + 2.0 * c) / (a * c);
    let e2 = (-2.0 * mu * t / c).exp();
    let k = (mu * mu * (a + c) + c * cfg.r0 * cfg.r0 * (a - c) * (a - c) * e2) / (a * a * c);
    let terms = [jet.ddp, damp * jet.dp, k * jet.p];
    let scale = terms.iter().map(|v| v.abs()).sum::<f64>();
    let sum: f64 = terms.iter().sum();
    Ok(if scale == 0.0 { 0.0 } else { sum / scale })
}

/// Rates and their first and second derivatives from the Euler equations.
struct RateJet {
    w: Vec3,
    dw: Vec3,
    ddw: Vec3,
}

fn rate_jet(t: f64, cfg: &ViscousConfig) -> Result<RateJet> {
    let (a, c, mu) = (cfg.a, cfg.c, cfg.mu);
    let w = rates(t, cfg)?;
    let [p, q, r] = w;
    let k = (a - c) / a;
    let dw = [k * q * r - mu * p / a, -k * p * r - mu * q / a, -mu * r / c];
    let ddw = [
        k * (dw[1] * r + q * dw[2]) - mu * dw[0] / a,
        -k * (dw[0] * r + p * dw[2]) - mu * dw[1] / a,
        -mu * dw[2] / c,
    ];
    Ok(RateJet { w, dw, ddw })
}

/// The coefficients of `gamma1'' = f . gamma` and `gamma1''' = g . gamma`.
struct Resolvent {
    w: Vec3,
    f: Vec3,
    g: Vec3,
    denom: f64,
}

fn resolvent_at(t: f64, cfg: &ViscousConfig) -> Result<Resolvent> {
    let RateJet { w, dw, ddw } = rate_jet(t, cfg)?;
    let [p, q, r] = w;
    let f = [-(q * q + r * r), dw[2] + p * q, r * p - dw[1]];
    let df = [
        -2.0 * (q * dw[1] + r * dw[2]),
        ddw[2] + dw[0] * q + p * dw[1],
        dw[2] * p + r * dw[0] - ddw[1],
    ];
    let g = [
        df[0] - r * f[1] + q * f[2],
        df[1] + r * f[0] - p * f[2],
        df[2] - q * f[0] + p * f[1],
    ];
    Ok(Resolvent { w, f, g, denom: r * f[2] + q * f[1] })
}

impl Resolvent {
    fn gammas(&self, y: &[f64]) -> Vec3 {
        let [_, q, r] = self.w;
        let [f1, f2, f3] = self.f;
        let rest = y[2] - f1 * y[0];
        [y[0], (f3 * y[1] + q * rest) / self.denom, (r * rest - f2 * y[1]) / self.denom]
    }

    fn state_of(&self, gamma: &Vec3) -> [f64; 3] {
        let [_, q, r] = self.w;
        let f = self.f;
        [gamma[0], r * gamma[1] - q * gamma[2], f[0] * gamma[0] + f[1] * gamma[1] + f[2] * gamma[2]]
    }

    fn third(&self, y: &[f64]) -> f64 {
        let [_, q, r] = self.w;
        let [f1, f2, f3] = self.f;
        let [g1, g2, g3] = self.g;
        let d = self.denom;
        let lead = (q * g2 + r * g3) / d;
        y[2] * lead + y[1] * (g2 * f3 - g3 * f2) / d + y[0] * (g1 - f1 * lead)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Resolvent,
    Poisson,
}

struct Segment {
    t0: f64,
    t1: f64,
    route: Route,
    run: IntegrationResult,
}

/// The cosine triple along `[0, t_end]`, piecewise by route.
pub struct GammaTrack {
    cfg: ViscousConfig,
    segments: Vec<Segment>,
}

impl GammaTrack {
    pub fn gamma(&self, t: f64) -> Result<Vec3> {
        let seg = self
            .segments
            .iter()
            .find(|s| t <= s.t1)
            .or(self.segments.last())
            .ok_or_else(|| Error::domain("gamma", "empty track"))?;
        let y = seg.run.dense(t.clamp(seg.t0, seg.t1));
        Ok(match seg.route {
            Route::Poisson => [y[0], y[1], y[2]],
            Route::Resolvent => resolvent_at(t, &self.cfg)?.gammas(&y),
        })
    }

    /// Spans where the resolvent was too ill-conditioned and the Poisson
    /// equations were used instead.
    pub fn poisson_spans(&self) -> Vec<(f64, f64)> {
        self.segments.iter().filter(|s| s.route == Route::Poisson).map(|s| (s.t0, s.t1)).collect()
    }
}

fn poisson_system(cfg: ViscousConfig) -> DynamicalSystem<'static> {
    DynamicalSystem::new(3, move |t, g: &[f64], dg: &mut [f64]| {
        let [p, q, r] = rates(t, &cfg).unwrap_or([f64::NAN; 3]);
        dg[0] = r * g[1] - q * g[2];
        dg[1] = p * g[2] - r * g[0];
        dg[2] = q * g[0] - p * g[1];
    })
}

fn resolvent_system(cfg: ViscousConfig) -> DynamicalSystem<'static> {
    DynamicalSystem::new(3, move |t, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[1];
        dy[1] = y[2];
        dy[2] = match resolvent_at(t, &cfg) {
            Ok(res) => res.third(y),
            Err(_) => f64::NAN,
        };
    })
}

fn ill_conditioned(t: f64, cfg: &ViscousConfig) -> Result<bool> {
    let res = resolvent_at(t, cfg)?;
    let w = res.w.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(!(res.denom.abs() >= DENOM_GUARD * w * w * w) || w == 0.0)
}

/// Splits `[0, t_end]` into resolvent and Poisson spans by scanning the
/// resolvent denominator on a fine grid.
fn plan_routes(cfg: &ViscousConfig, t_end: f64, force: Option<Route>) -> Result<Vec<(f64, f64, Route)>> {
    if let Some(route) = force {
        return Ok(vec![(0.0, t_end, route)]);
    }
    let w0 = (cfg.p0 * cfg.p0 + cfg.q0 * cfg.q0 + cfg.r0 * cfg.r0).sqrt();
    let n = ((t_end * w0 * 100.0).ceil() as usize).clamp(2000, 400_000);
    let h = t_end / n as f64;
    let mut bad = Vec::with_capacity(n + 1);
    for i in 0..=n {
        bad.push(ill_conditioned(i as f64 * h, cfg)?);
    }
    // pad each flagged sample by one grid step on both sides
    let padded: Vec<bool> = (0..=n).map(|i| bad[i.saturating_sub(1)..=(i + 1).min(n)].iter().any(|b| *b)).collect();
    let mut spans: Vec<(f64, f64, Route)> = Vec::new();
    let mut start = 0;
    for i in 1..=n + 1 {
        if i == n + 1 || padded[i] != padded[start] {
            let route = if padded[start] { Route::Poisson } else { Route::Resolvent };
            let t1 = if i == n + 1 { t_end } else { i as f64 * h };
            spans.push((start as f64 * h, t1, route));
            start = i;
        }
    }
    Ok(spans)
}

fn track(cfg: &ViscousConfig, grid: &[f64], force: Option<Route>) -> Result<GammaTrack> {
    cfg.validate()?;
    if grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::config("time grid must be non-negative and increasing"));
    }
    let t_end = grid.last().copied().unwrap_or(0.0).max(1e-12);
    let mut segments = Vec::new();
    let mut gamma = cfg.gamma0;
    for (t0, t1, route) in plan_routes(cfg, t_end, force)? {
        let inner: Vec<f64> = grid.iter().copied().filter(|t| *t > t0 && *t < t1).chain([t1]).collect();
        let run = match route {
            Route::Poisson => integrate(&poisson_system(*cfg), &gamma, (t0, t1), &inner, RTOL, ATOL)?,
            Route::Resolvent => {
                let res = resolvent_at(t0, cfg)?;
                integrate(&resolvent_system(*cfg), &res.state_of(&gamma), (t0, t1), &inner, RTOL, ATOL)?
            }
        };
        let end = run.final_state().to_vec();
        gamma = match route {
            Route::Poisson => [end[0], end[1], end[2]],
            Route::Resolvent => resolvent_at(t1, cfg)?.gammas(&end),
        };
        segments.push(Segment { t0, t1, route, run });
    }
    Ok(GammaTrack { cfg: *cfg, segments })
}

/// Cosine triple on `t_grid`, through the hybrid resolvent/Poisson route.
pub fn gamma_track(t_grid: &[f64], cfg: &ViscousConfig) -> Result<GammaTrack> {
    track(cfg, t_grid, None)
}

/// Same, but with the Poisson equations alone (the cross-check route).
pub fn gamma_track_poisson(t_grid: &[f64], cfg: &ViscousConfig) -> Result<GammaTrack> {
    track(cfg, t_grid, Some(Route::Poisson))
}

pub fn gamma_cosines(t_grid: &[f64], cfg: &ViscousConfig) -> Result<Vec<Vec3>> {
    let tr = gamma_track(t_grid, cfg)?;
    t_grid.iter().map(|t| tr.gamma(*t)).collect()
}

/// `psi'` from the cosines: `(r - phi') / cos(theta)` away from the
/// horizontal, `(p g1 + q g2) / (1 - g3^2)` near it. The two are the same
/// function; the second just has no `cos(theta)` in the denominator.
fn psi_rate(t: f64, g: &Vec3, w: &Vec3) -> Result<f64> {
    let [p, q, r] = *w;
    let s2 = g[0] * g[0] + g[1] * g[1];
    if s2 < 1e-18 {
        return Err(Error::singular("euler_angles_viscous", format!("figure axis vertical at t = {t}")));
    }
    if g[2].abs() > 0.1 {
        let dg1 = r * g[1] - q * g[2];
        let dg2 = p * g[2] - r * g[0];
        let dphi = (dg1 * g[1] - g[0] * dg2) / s2;
        Ok((r - dphi) / g[2])
    } else {
        Ok((p * g[0] + q * g[1]) / s2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscousSample {
    pub t: f64,
    pub rates: Vec3,
    pub gamma: Vec3,
    pub theta: f64,
    pub phi: f64,
    pub psi: f64,
}

/// Full record on `t_grid`: rates, cosines and `(theta, phi, psi)`.
pub fn viscous_trajectory(t_grid: &[f64], cfg: &ViscousConfig) -> Result<Vec<ViscousSample>> {
    let tr = gamma_track(t_grid, cfg)?;
    let mut out = Vec::with_capacity(t_grid.len());
    let mut psi = cfg.psi0;
    let mut phi_prev = cfg.gamma0[0].atan2(cfg.gamma0[1]);
    let mut t_prev = 0.0;
    for &t in t_grid {
        let gamma = tr.gamma(t)?;
        let w = rates(t, cfg)?;
        if gamma[2].abs() > 1.0 - 1e-9 {
            return Err(Error::singular("euler_angles_viscous", format!("figure axis vertical at t = {t}")));
        }
        if t > t_prev {
            let failure = std::cell::RefCell::new(None);
            let inc = adaptive_simpson(
                |s| {
                    let rate = tr.gamma(s).and_then(|g| psi_rate(s, &g, &rates(s, cfg)?));
                    rate.unwrap_or_else(|e| {
                        failure.borrow_mut().get_or_insert(e);
                        0.0
                    })
                },
                t_prev,
                t,
                1e-11 * (t - t_prev).max(1e-3),
            );
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            psi += inc;
        }
        let phi = unwrap_near(gamma[0].atan2(gamma[1]), phi_prev);
        phi_prev = phi;
        t_prev = t;
        out.push(ViscousSample { t, rates: w, gamma, theta: gamma[2].clamp(-1.0, 1.0).acos(), phi, psi });
    }
    Ok(out)
}

/// `(theta, phi, psi)` on `t_grid`.
pub fn euler_angles_viscous(t_grid: &[f64], cfg: &ViscousConfig) -> Result<Vec<(f64, f64, f64)>> {
    Ok(viscous_trajectory(t_grid, cfg)?.iter().map(|s| (s.theta, s.phi, s.psi)).collect())
}
