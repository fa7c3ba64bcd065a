//! Numerical quadrature shared by the special functions and the solvers.
//!
//! Three rules, each used where it fits best: tanh-sinh on the unit interval
//! for the hypergeometric integrals with algebraic endpoint singularities,
//! adaptive Gauss-Kronrod for smooth integrands, adaptive Simpson for the
//! cheap sampled integrands of the damped-top precession.

use crate::error::{Error, Result};
use std::f64::consts::PI;

// pi sinh(6.5) > 1000, past the point where the endpoint distance
// underflows; a shorter range drops a tail of order v^s for v^(s-1)
// singularities, which is visible once s is as small as 0.1
const TS_TMAX: f64 = 6.5;
const TS_MAX_LEVEL: usize = 9;

/// Tanh-sinh quadrature of `f` over [0, 1].
///
/// The closure receives the node both as `u` and as `v = 1 - u`, each
/// computed without cancellation, so integrands like `(1-u)^s` stay accurate
/// right up to the endpoint. Nodes where either coordinate underflows to 0
/// are skipped; the integrand is never evaluated at the endpoints.
pub fn tanh_sinh_unit<F>(f: F, tol: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    // u = 1/(1+exp(-pi sinh t)), v = 1/(1+exp(pi sinh t)), du/dt = pi cosh t u v
    let term = |t: f64| -> f64 {
        let e = PI * t.sinh();
        let (u, v) = if e >= 0.0 {
            let x = (-e).exp();
            (1.0 / (1.0 + x), x / (1.0 + x))
        } else {
            let x = e.exp();
            (x / (1.0 + x), 1.0 / (1.0 + x))
        };
        if u == 0.0 || v == 0.0 {
            return 0.0;
        }
        let w = PI * t.cosh() * u * v;
        if w == 0.0 {
            return 0.0;
        }
        w * f(u, v)
    };

    let mut h = 0.5;
    let mut sum = term(0.0);
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        if t > TS_TMAX {
            break;
        }
        sum += term(t) + term(-t);
        k += 1;
    }
    let mut estimate = h * sum;

    for level in 1..TS_MAX_LEVEL {
        h *= 0.5;
        let mut fresh = 0.0;
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            if t > TS_TMAX {
                break;
            }
            fresh += term(t) + term(-t);
            k += 2;
        }
        sum += fresh;
        let next = h * sum;
        if !next.is_finite() {
            return Err(Error::singular("tanh_sinh", "integrand not finite on (0,1)"));
        }
        let diff = (next - estimate).abs();
        estimate = next;
        if level >= 3 && diff <= tol * estimate.abs().max(1.0) {
            return Ok(estimate);
        }
    }
    Ok(estimate)
}

// Gauss-Kronrod 7/15 nodes and weights.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod (G7/K15) with interval bisection.
///
/// Stops when the summed error estimate is below `max(abs_tol, rel_tol*|I|)`.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut pieces: Vec<(f64, f64, f64, f64)> = Vec::with_capacity(64);
    let (v, e) = gk15(&f, a, b);
    pieces.push((a, b, v, e));
    for _ in 0..2000 {
        let total: f64 = pieces.iter().map(|p| p.2).sum();
        let err: f64 = pieces.iter().map(|p| p.3).sum();
        if !total.is_finite() {
            return Err(Error::singular("gauss_kronrod", "integrand not finite"));
        }
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, _, _) = pieces.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
    let total: f64 = pieces.iter().map(|p| p.2).sum();
    let err: f64 = pieces.iter().map(|p| p.3).sum();
    if err <= 1e3 * abs_tol.max(rel_tol * total.abs()) {
        Ok(total)
    } else {
        Err(Error::singular("gauss_kronrod", format!("no convergence, error estimate {err:e}")))
    }
}

/// Adaptive Simpson with Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(&f, a, b, fa, fm, fb, whole, tol, 40)
}
