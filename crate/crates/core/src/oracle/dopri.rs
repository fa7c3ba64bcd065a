//! Dormand-Prince 5(4) with step-size control and cubic Hermite dense output.

use crate::error::{Error, Result};

type Rhs<'a> = Box<dyn Fn(f64, &[f64], &mut [f64]) + Send + Sync + 'a>;
type Invariants<'a> = Box<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync + 'a>;

/// A first-order system `y' = f(t, y)` plus optional conserved quantities.
pub struct DynamicalSystem<'a> {
    pub dim: usize,
    pub rhs: Rhs<'a>,
    pub invariants: Invariants<'a>,
    pub invariant_names: Vec<&'static str>,
}

impl<'a> DynamicalSystem<'a> {
    pub fn new(dim: usize, rhs: impl Fn(f64, &[f64], &mut [f64]) + Send + Sync + 'a) -> Self {
        DynamicalSystem { dim, rhs: Box::new(rhs), invariants: Box::new(|_| Vec::new()), invariant_names: Vec::new() }
    }

    pub fn with_invariants(
        mut self,
        names: Vec<&'static str>,
        inv: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'a,
    ) -> Self {
        self.invariant_names = names;
        self.invariants = Box::new(inv);
        self
    }

    pub fn eval(&self, t: f64, y: &[f64]) -> Vec<f64> {
        let mut dy = vec![0.0; self.dim];
        (self.rhs)(t, y, &mut dy);
        dy
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

/// Output of [`integrate`]: the state on the requested grid, the accepted
/// steps for dense output, and the worst invariant drift seen.
#[derive(Debug, Clone)]
pub struct IntegrationResult {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// Max over accepted steps of `|I(y) - I(y0)|`, one entry per invariant.
    pub max_invariant_drift: Vec<f64>,
    pub stats: StepStats,
    knots: Vec<(f64, Vec<f64>, Vec<f64>)>,
}

impl IntegrationResult {
    /// State at any `t` inside the integration span, by cubic Hermite
    /// interpolation on the accepted step containing it.
    pub fn dense(&self, t: f64) -> Vec<f64> {
        let k = &self.knots;
        let forward = k.last().map_or(true, |l| l.0 >= k[0].0);
        let idx = k.partition_point(|kn| if forward { kn.0 <= t } else { kn.0 >= t });
        let i = idx.clamp(1, k.len().max(2) - 1);
        let (t0, y0, f0) = &k[i - 1];
        let (t1, y1, f1) = &k[i];
        let h = t1 - t0;
        if h == 0.0 {
            return y0.clone();
        }
        let s = (t - t0) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        (0..y0.len()).map(|j| h00 * y0[j] + h10 * h * f0[j] + h01 * y1[j] + h11 * h * f1[j]).collect()
    }

    pub fn final_state(&self) -> &[f64] {
        &self.knots.last().expect("at least one knot").1
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn err_norm(err: &[f64], y0: &[f64], y1: &[f64], rtol: f64, atol: f64) -> f64 {
    let n = err.len() as f64;
    let s: f64 = err
        .iter()
        .zip(y0.iter().zip(y1))
        .map(|(e, (a, b))| {
            let sc = atol + rtol * a.abs().max(b.abs());
            (e / sc).powi(2)
        })
        .sum();
    (s / n).sqrt()
}

/// Integrates `sys` from `t_span.0` to `t_span.1`, landing exactly on every
/// time in `grid` (which must be monotone in the direction of integration
/// and inside the span). Returns the grid samples and the dense trajectory.
pub fn integrate(
    sys: &DynamicalSystem,
    y0: &[f64],
    t_span: (f64, f64),
    grid: &[f64],
    rtol: f64,
    atol: f64,
) -> Result<IntegrationResult> {
    let (t0, t1) = t_span;
    if y0.len() != sys.dim {
        return Err(Error::config(format!("state has {} entries, system expects {}", y0.len(), sys.dim)));
    }
    if !t0.is_finite() || !t1.is_finite() || !(rtol > 0.0) || !(atol > 0.0) {
        return Err(Error::config("time span and tolerances must be finite and positive"));
    }
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    if grid.windows(2).any(|w| (w[1] - w[0]) * dir < 0.0)
        || grid.iter().any(|&g| (g - t0) * dir < -1e-12 * t0.abs().max(1.0) || (g - t1) * dir > 1e-12 * t1.abs().max(1.0))
    {
        return Err(Error::config("output grid must be monotone and inside the span"));
    }

    let dim = sys.dim;
    let mut stats = StepStats::default();
    let inv0 = (sys.invariants)(y0);
    let mut drift = vec![0.0f64; inv0.len()];

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut f = sys.eval(t, &y);
    stats.rhs_evals += 1;
    let mut knots = vec![(t, y.clone(), f.clone())];

    let mut times = Vec::with_capacity(grid.len());
    let mut states = Vec::with_capacity(grid.len());
    let mut gi = 0;
    while gi < grid.len() && (grid[gi] - t0) * dir <= 0.0 {
        times.push(grid[gi]);
        states.push(y.clone());
        gi += 1;
    }

    if t0 == t1 {
        return Ok(IntegrationResult { times, states, max_invariant_drift: drift, stats, knots });
    }

    // Hairer's starting-step heuristic
    let sc: Vec<f64> = y.iter().map(|v| atol + rtol * v.abs()).collect();
    let d0 = (y.iter().zip(&sc).map(|(v, s)| (v / s).powi(2)).sum::<f64>() / dim as f64).sqrt();
    let d1 = (f.iter().zip(&sc).map(|(v, s)| (v / s).powi(2)).sum::<f64>() / dim as f64).sqrt();
    let mut h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h = h.min((t1 - t0).abs());

    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut k5 = vec![0.0; dim];
    let mut k6 = vec![0.0; dim];
    let mut k7 = vec![0.0; dim];
    let mut tmp = vec![0.0; dim];
    let mut ynew = vec![0.0; dim];
    let mut err = vec![0.0; dim];

    while (t1 - t) * dir > 0.0 {
        // next stopping point: the next grid time or the end
        let target = if gi < grid.len() { grid[gi] } else { t1 };
        let mut hs = h.min((target - t).abs());
        let lands = hs >= (target - t).abs();
        if hs < 1e-14 * t.abs().max(1.0) && !lands {
            return Err(Error::Integration { t, detail: "step size underflow (stiff or singular)".into() });
        }
        hs *= dir;
        let step_to = if lands { target } else { t + hs };
        let hh = step_to - t;

        let rhs = &sys.rhs;
        for j in 0..dim {
            tmp[j] = y[j] + hh * A21 * f[j];
        }
        rhs(t + C2 * hh, &tmp, &mut k2);
        for j in 0..dim {
            tmp[j] = y[j] + hh * (A31 * f[j] + A32 * k2[j]);
        }
        rhs(t + C3 * hh, &tmp, &mut k3);
        for j in 0..dim {
            tmp[j] = y[j] + hh * (A41 * f[j] + A42 * k2[j] + A43 * k3[j]);
        }
        rhs(t + C4 * hh, &tmp, &mut k4);
        for j in 0..dim {
            tmp[j] = y[j] + hh * (A51 * f[j] + A52 * k2[j] + A53 * k3[j] + A54 * k4[j]);
        }
        rhs(t + C5 * hh, &tmp, &mut k5);
        for j in 0..dim {
            tmp[j] = y[j] + hh * (A61 * f[j] + A62 * k2[j] + A63 * k3[j] + A64 * k4[j] + A65 * k5[j]);
        }
        rhs(t + hh, &tmp, &mut k6);
        for j in 0..dim {
            ynew[j] = y[j] + hh * (A71 * f[j] + A73 * k3[j] + A74 * k4[j] + A75 * k5[j] + A76 * k6[j]);
        }
        rhs(t + hh, &ynew, &mut k7);
        stats.rhs_evals += 6;
        for j in 0..dim {
            err[j] = hh * (E1 * f[j] + E3 * k3[j] + E4 * k4[j] + E5 * k5[j] + E6 * k6[j] + E7 * k7[j]);
        }
        let en = err_norm(&err, &y, &ynew, rtol, atol);
        if !en.is_finite() || ynew.iter().any(|v| !v.is_finite()) {
            stats.rejected += 1;
            h = 0.25 * hh.abs();
            if h < 1e-14 * t.abs().max(1.0) {
                return Err(Error::Integration { t, detail: "non-finite derivative".into() });
            }
            continue;
        }
        if en <= 1.0 {
            stats.accepted += 1;
            t = step_to;
            y.copy_from_slice(&ynew);
            f.copy_from_slice(&k7);
            knots.push((t, y.clone(), f.clone()));
            let inv = (sys.invariants)(&y);
            for (d, (a, b)) in drift.iter_mut().zip(inv.iter().zip(&inv0)) {
                *d = d.max((a - b).abs());
            }
            while gi < grid.len() && (grid[gi] - t) * dir <= 0.0 {
                times.push(grid[gi]);
                states.push(y.clone());
                gi += 1;
            }
            let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
            // a step shortened to hit a grid point says little about the
            // natural step, so keep the larger of the two
            h = if lands { h.max(hh.abs() * fac) } else { hh.abs() * fac };
        } else {
            stats.rejected += 1;
            h = hh.abs() * (0.9 * en.powf(-0.2)).clamp(0.1, 1.0);
        }
    }

    Ok(IntegrationResult { times, states, max_invariant_drift: drift, stats, knots })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_rhs_is_exact() {
        let sys = DynamicalSystem::new(2, |_, _, dy: &mut [f64]| dy.fill(0.0));
        let r = integrate(&sys, &[1.5, -2.0], (0.0, 3.0), &[1.0, 3.0], 1e-10, 1e-12).unwrap();
        assert_eq!(r.states[1], vec![1.5, -2.0]);
    }

    #[test]
    fn exponential_growth() {
        let sys = DynamicalSystem::new(1, |_, y: &[f64], dy: &mut [f64]| dy[0] = y[0]);
        let r = integrate(&sys, &[1.0], (0.0, 1.0), &[0.0, 0.5, 1.0], 1e-11, 1e-13).unwrap();
        assert_eq!(r.times, vec![0.0, 0.5, 1.0]);
        assert!((r.states[2][0] - std::f64::consts::E).abs() < 1e-9);
        assert!((r.dense(0.3)[0] - 0.3f64.exp()).abs() < 1e-8);
    }

    #[test]
    fn backwards_and_oscillator_invariant() {
        let sys = DynamicalSystem::new(2, |_, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = -y[0];
        })
        .with_invariants(vec!["energy"], |y| vec![y[0] * y[0] + y[1] * y[1]]);
        let r = integrate(&sys, &[1.0, 0.0], (0.0, -10.0), &[-10.0], 1e-12, 1e-14).unwrap();
        assert!((r.states[0][0] - 10f64.cos()).abs() < 1e-9);
        assert!(r.max_invariant_drift[0] < 1e-9);
    }
}
