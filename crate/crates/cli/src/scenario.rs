//! Scenarios: what each subcommand computes and which settings it takes.

use crate::config::Settings;
use crate::output::{Column, Table};
use crate::CliError;
use gyrokit_core::herpolhode::{herpolhode_constants, trace_curve};
use gyrokit_core::lagrange::{HeavyTop, NutationDirection, SymmetricTopConfig};
use gyrokit_core::poinsot::{angles_free, body_rates_free, derive_free, precession_free, FreeBodyConfig};
use gyrokit_core::viscous::{viscous_trajectory, ViscousConfig};
use rayon::prelude::*;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    Lagrange,
    Poinsot,
    Herpolhode,
    Viscous,
}

impl CaseTag {
    pub const ALL: [CaseTag; 4] = [CaseTag::Lagrange, CaseTag::Poinsot, CaseTag::Herpolhode, CaseTag::Viscous];

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::Lagrange => "lagrange",
            CaseTag::Poinsot => "poinsot",
            CaseTag::Herpolhode => "herpolhode",
            CaseTag::Viscous => "viscous",
        }
    }

    pub fn about(self) -> &'static str {
        match self {
            CaseTag::Lagrange => "Heavy symmetric top: Euler angles, body rates, vertical cosines and apex path",
            CaseTag::Poinsot => "Torque-free triaxial body: body rates and Euler angles",
            CaseTag::Herpolhode => "Herpolhode trace on the invariable plane, in polar and Cartesian form",
            CaseTag::Viscous => "Symmetric body under viscous drag: rates, cosines and Euler angles",
        }
    }

    /// Every setting the case accepts, physical ones first.
    pub fn keys(self) -> Vec<Key> {
        let (own, timed) = match self {
            CaseTag::Lagrange => (LAGRANGE_KEYS, true),
            CaseTag::Poinsot => (POINSOT_KEYS, true),
            CaseTag::Herpolhode => (HERPOLHODE_KEYS, false),
            CaseTag::Viscous => (VISCOUS_KEYS, true),
        };
        let time: &[Key] = if timed { TIME_KEYS } else { &[] };
        [own, time, OUTPUT_KEYS].concat()
    }
}

/// A setting: flag name (also the config-file key), help text, default.
#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub help: &'static str,
    pub default: Option<&'static str>,
}

const fn key(name: &'static str, help: &'static str, default: Option<&'static str>) -> Key {
    Key { name, help, default }
}

const TIME_KEYS: &[Key] = &[
    key("t0", "first sample time", Some("0")),
    key("t_end", "last sample time", Some("10")),
    key("n", "number of samples", Some("201")),
];

const OUTPUT_KEYS: &[Key] = &[
    key("format", "csv or json", Some("csv")),
    key("output", "output file (standard output when absent)", None),
];

const LAGRANGE_KEYS: &[Key] = &[
    key("A", "equatorial moment of inertia about the fixed point", None),
    key("C", "axial moment of inertia", None),
    key("M", "mass", None),
    key("g", "gravitational acceleration", Some("9.81")),
    key("zg", "height of the centre of mass on the figure axis", None),
    key("theta0", "initial nutation angle (rad)", None),
    key("psi0", "initial precession angle (rad)", Some("0")),
    key("phi0", "initial spin angle (rad)", Some("0")),
    key("p0", "initial body rate p", Some("0")),
    key("q0", "initial body rate q", Some("0")),
    key("r0", "axial spin rate", None),
    key("direction", "rising or falling start of cos(theta); inferred from p0, q0 when absent", None),
];

const POINSOT_KEYS: &[Key] = &[
    key("A", "first principal moment", None),
    key("B", "middle principal moment", None),
    key("C", "third principal moment", None),
    key("p0", "initial rate about the first axis (q0 = 0)", None),
    key("r0", "initial rate about the third axis", None),
    key("psi0", "initial precession angle (rad)", Some("0")),
];

const HERPOLHODE_KEYS: &[Key] = &[
    key("A", "first principal moment", None),
    key("B", "second principal moment", None),
    key("C", "third principal moment", None),
    key("D", "K^2 / 2T, strictly between C and both A and B", None),
    key("m", "2T / K", Some("1")),
    key("n", "samples per half-oscillation of the radius", Some("65")),
    key("legs", "number of half-oscillations", Some("8")),
];

const VISCOUS_KEYS: &[Key] = &[
    key("A", "equatorial moment of inertia", None),
    key("C", "axial moment of inertia", None),
    key("mu", "drag coefficient", None),
    key("p0", "initial body rate p", None),
    key("q0", "initial body rate q", None),
    key("r0", "initial axial rate", None),
    key("gamma1", "initial vertical cosine, first body axis", None),
    key("gamma2", "initial vertical cosine, second body axis", None),
    key("gamma3", "initial vertical cosine, figure axis", None),
    key("psi0", "initial precession angle (rad)", Some("0")),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t0: f64,
    pub t_end: f64,
    pub n: usize,
}

impl TimeGrid {
    pub fn times(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.t0];
        }
        let h = (self.t_end - self.t0) / (self.n - 1) as f64;
        (0..self.n).map(|i| if i + 1 == self.n { self.t_end } else { self.t0 + h * i as f64 }).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Case {
    Lagrange(SymmetricTopConfig, TimeGrid),
    Poinsot(FreeBodyConfig, TimeGrid),
    Herpolhode { a: f64, b: f64, c: f64, d: f64, m: f64, n: usize, legs: usize },
    Viscous(ViscousConfig, TimeGrid),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub case: Case,
    pub format: Format,
    pub output: Option<PathBuf>,
}

struct Lookup<'a> {
    keys: Vec<Key>,
    settings: &'a Settings,
}

impl Lookup<'_> {
    fn raw(&self, name: &str) -> Option<&str> {
        if let Some(v) = self.settings.get(name) {
            return Some(v.as_str());
        }
        self.keys.iter().find(|k| k.name == name).and_then(|k| k.default)
    }

    fn f64(&self, name: &str) -> Result<f64, CliError> {
        let v = self.raw(name).ok_or_else(|| CliError::Invalid(format!("missing required setting {name}")))?;
        let x: f64 = v.parse().map_err(|_| CliError::Invalid(format!("{name} = {v:?} is not a number")))?;
        if !x.is_finite() {
            return Err(CliError::Invalid(format!("{name} must be finite")));
        }
        Ok(x)
    }

    fn usize(&self, name: &str) -> Result<usize, CliError> {
        let v = self.raw(name).ok_or_else(|| CliError::Invalid(format!("missing required setting {name}")))?;
        v.parse().map_err(|_| CliError::Invalid(format!("{name} = {v:?} is not a non-negative integer")))
    }

    fn grid(&self) -> Result<TimeGrid, CliError> {
        let g = TimeGrid { t0: self.f64("t0")?, t_end: self.f64("t_end")?, n: self.usize("n")? };
        if g.n == 0 {
            return Err(CliError::Invalid("n must be at least 1".into()));
        }
        if g.n > 1 && !(g.t_end > g.t0) {
            return Err(CliError::Invalid(format!("time grid not increasing: t0 = {}, t_end = {}", g.t0, g.t_end)));
        }
        Ok(g)
    }
}

impl Scenario {
    /// Builds a scenario from merged settings. Unknown keys are rejected so
    /// that typos in config files do not pass silently.
    pub fn from_settings(tag: CaseTag, settings: &Settings) -> Result<Scenario, CliError> {
        let keys = tag.keys();
        for k in settings.keys() {
            if !keys.iter().any(|key| key.name == k) {
                return Err(CliError::Invalid(format!("unknown setting {k:?} for {}", tag.name())));
            }
        }
        let l = Lookup { keys, settings };
        let format = match l.raw("format").unwrap_or("csv") {
            "csv" => Format::Csv,
            "json" => Format::Json,
            other => return Err(CliError::Invalid(format!("format must be csv or json, got {other:?}"))),
        };
        let output = l.raw("output").map(PathBuf::from);
        let case = match tag {
            CaseTag::Lagrange => {
                let mut cfg = SymmetricTopConfig::from_initial_rates(
                    l.f64("A")?,
                    l.f64("C")?,
                    l.f64("M")?,
                    l.f64("g")?,
                    l.f64("zg")?,
                    l.f64("theta0")?,
                    l.f64("psi0")?,
                    l.f64("phi0")?,
                    [l.f64("p0")?, l.f64("q0")?, l.f64("r0")?],
                );
                match l.raw("direction") {
                    None => {}
                    Some("rising") => cfg.direction = NutationDirection::Rising,
                    Some("falling") => cfg.direction = NutationDirection::Falling,
                    Some(other) => {
                        return Err(CliError::Invalid(format!("direction must be rising or falling, got {other:?}")))
                    }
                }
                Case::Lagrange(cfg, l.grid()?)
            }
            CaseTag::Poinsot => Case::Poinsot(
                FreeBodyConfig::from_initial_rates(
                    l.f64("A")?,
                    l.f64("B")?,
                    l.f64("C")?,
                    l.f64("p0")?,
                    l.f64("r0")?,
                    l.f64("psi0")?,
                ),
                l.grid()?,
            ),
            CaseTag::Herpolhode => {
                let (n, legs) = (l.usize("n")?, l.usize("legs")?);
                if n < 2 || legs == 0 {
                    return Err(CliError::Invalid("need n >= 2 and legs >= 1".into()));
                }
                Case::Herpolhode { a: l.f64("A")?, b: l.f64("B")?, c: l.f64("C")?, d: l.f64("D")?, m: l.f64("m")?, n, legs }
            }
            CaseTag::Viscous => {
                let grid = l.grid()?;
                if grid.t0 < 0.0 {
                    return Err(CliError::Invalid("the viscous solution starts at t = 0; t0 must be >= 0".into()));
                }
                let cfg = ViscousConfig {
                    a: l.f64("A")?,
                    c: l.f64("C")?,
                    mu: l.f64("mu")?,
                    p0: l.f64("p0")?,
                    q0: l.f64("q0")?,
                    r0: l.f64("r0")?,
                    gamma0: [l.f64("gamma1")?, l.f64("gamma2")?, l.f64("gamma3")?],
                    psi0: l.f64("psi0")?,
                };
                Case::Viscous(cfg, grid)
            }
        };
        Ok(Scenario { case, format, output })
    }

    pub fn tag(&self) -> CaseTag {
        match self.case {
            Case::Lagrange(..) => CaseTag::Lagrange,
            Case::Poinsot(..) => CaseTag::Poinsot,
            Case::Herpolhode { .. } => CaseTag::Herpolhode,
            Case::Viscous(..) => CaseTag::Viscous,
        }
    }
}

fn at_time(t: f64) -> impl Fn(gyrokit_core::Error) -> CliError {
    move |e| CliError::from_core(e, Some(t))
}

/// Samples in parallel but reports the earliest failure, so the message
/// does not depend on thread scheduling.
fn sample<T: Sync, R: Send>(
    points: &[T],
    f: impl Fn(&T) -> Result<R, CliError> + Sync + Send,
) -> Result<Vec<R>, CliError> {
    points.par_iter().map(f).collect::<Vec<_>>().into_iter().collect()
}

const RATE: &str = "rad/s";

pub fn run_scenario(s: &Scenario) -> Result<Table, CliError> {
    match &s.case {
        Case::Lagrange(cfg, grid) => {
            let top = HeavyTop::new(*cfg).map_err(|e| CliError::from_core(e, None))?;
            let rows = sample(&grid.times(), |&t| {
                let st = top.state(t).map_err(at_time(t))?;
                let apex = top.point_trajectory(t, [0.0, 0.0, 1.0]).map_err(at_time(t))?.position;
                let mut row = vec![t, st.theta, st.psi, st.phi];
                row.extend(st.rates);
                row.extend(st.gamma);
                row.extend(apex);
                Ok(row)
            })?;
            let columns = vec![
                Column::new("t", "s"),
                Column::new("theta", "rad"),
                Column::new("psi", "rad"),
                Column::new("phi", "rad"),
                Column::new("p", RATE),
                Column::new("q", RATE),
                Column::new("r", RATE),
                Column::new("gamma1", "1"),
                Column::new("gamma2", "1"),
                Column::new("gamma3", "1"),
                Column::new("apex_x", "figure-axis length"),
                Column::new("apex_y", "figure-axis length"),
                Column::new("apex_z", "figure-axis length"),
            ];
            Ok(Table { case: "lagrange", columns, rows })
        }
        Case::Poinsot(cfg, grid) => {
            let d = derive_free(cfg).map_err(|e| CliError::from_core(e, None))?;
            let rows = sample(&grid.times(), |&t| {
                let tau = t * d.tau_rate;
                let w = body_rates_free(tau, &d).map_err(at_time(t))?;
                let (theta, phi) = angles_free(tau, &d, cfg).map_err(at_time(t))?;
                let psi = precession_free(tau, &d, cfg).map_err(at_time(t))?;
                Ok(vec![t, w[0], w[1], w[2], theta, phi, psi])
            })?;
            let columns = vec![
                Column::new("t", "s"),
                Column::new("p", RATE),
                Column::new("q", RATE),
                Column::new("r", RATE),
                Column::new("theta", "rad"),
                Column::new("phi", "rad"),
                Column::new("psi", "rad"),
            ];
            Ok(Table { case: "poinsot", columns, rows })
        }
        Case::Herpolhode { a, b, c, d, m, n, legs } => {
            let hc = herpolhode_constants(*a, *b, *c, *d, *m).map_err(|e| CliError::from_core(e, None))?;
            let pts = trace_curve(&hc, *n, *legs).map_err(|e| CliError::from_core(e, None))?;
            let rows = pts.iter().map(|p| vec![p.rho, p.chi, p.x, p.y]).collect();
            let columns = vec![
                Column::new("rho", "reduced"),
                Column::new("chi", "rad"),
                Column::new("x", "reduced"),
                Column::new("y", "reduced"),
            ];
            Ok(Table { case: "herpolhode", columns, rows })
        }
        Case::Viscous(cfg, grid) => {
            cfg.validate().map_err(|e| CliError::from_core(e, None))?;
            let samples = viscous_trajectory(&grid.times(), cfg).map_err(|e| CliError::from_core(e, None))?;
            let rows = samples
                .iter()
                .map(|s| {
                    let mut row = vec![s.t];
                    row.extend(s.rates);
                    row.extend(s.gamma);
                    row.extend([s.theta, s.phi, s.psi]);
                    row
                })
                .collect();
            let columns = vec![
                Column::new("t", "s"),
                Column::new("p", RATE),
                Column::new("q", RATE),
                Column::new("r", RATE),
                Column::new("gamma1", "1"),
                Column::new("gamma2", "1"),
                Column::new("gamma3", "1"),
                Column::new("theta", "rad"),
                Column::new("phi", "rad"),
                Column::new("psi", "rad"),
            ];
            Ok(Table { case: "viscous", columns, rows })
        }
    }
}
