//! The seven auxiliary integrals behind the closed-form solutions.
//!
//! Each integral can be evaluated in more than one way: through Lauricella
//! or Appell functions, through Legendre elliptic integrals, or by direct
//! quadrature of the integrand. Agreement between the routes is the main
//! self-check of the crate.
//!
//! Domains, as established numerically:
//! * `I1`, `I2`, `I7`: `a > b >= y >= c`, and for `I1`/`I2` also
//!   `-1 < c` and `y < 1` so that `1 - u^2` does not vanish on the path.
//!   `b` itself may exceed 1.
//! * `I5`, `I6`: `c < min(a, b)` and `y^2` anywhere between `a` and `b`.
//!   Either of `a`, `b` may be the larger; the value returned is the
//!   integral taken in the direction that makes it non-negative.

use crate::error::{Error, Result};
use crate::quadrature::gauss_kronrod;
use crate::specfun::{
    appell_f1, ellip_f_m, ellip_k_m, ellip_pi_excess_m, ellip_pi_m, jacobi_m, lauricella_fd, HypergeometricSpec,
};
use std::f64::consts::FRAC_PI_2;

/// Evaluation route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Form {
    /// Lauricella / Appell functions by their integral representation.
    Hypergeometric,
    /// Legendre integrals of the first and third kind.
    Elliptic,
    /// Adaptive quadrature of the integrand after a sin^2 substitution.
    Quadrature,
}

impl Form {
    pub const ALL: [Form; 3] = [Form::Hypergeometric, Form::Elliptic, Form::Quadrature];
}

/// Parameters shared by `I1`, `I2` and `I7`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub y: f64,
}

const ROOT_GUARD: f64 = 1e-10;
const QUAD_TOL: f64 = 1e-14;

fn check_cubic(op: &'static str, a: f64, b: f64, c: f64, y: f64) -> Result<()> {
    if ![a, b, c, y].iter().all(|v| v.is_finite()) {
        return Err(Error::domain(op, "non-finite parameter"));
    }
    if !(a > b && b >= y && y >= c && b > c) {
        return Err(Error::domain(op, format!("need a > b >= y >= c, got a={a}, b={b}, y={y}, c={c}")));
    }
    Ok(())
}

fn check_unit_band(op: &'static str, c: f64, y: f64) -> Result<()> {
    if !(c > -1.0 && y < 1.0) {
        return Err(Error::domain(op, format!("1 - u^2 vanishes on [{c}, {y}]")));
    }
    Ok(())
}

/// `j_k = int_c^y u^k / ((1 - u^2) sqrt((a-u)(b-u)(u-c))) du` for k = 0, 1, 2.
///
/// `I1(alpha) = j0 - alpha j1` and `I2(alpha) = j1 - alpha j2`; callers whose
/// `alpha` may blow up (a vanishing divisor) combine the parts themselves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedParts {
    pub j0: f64,
    pub j1: f64,
    pub j2: f64,
}

impl WeightedParts {
    pub fn i1(&self, alpha: f64) -> f64 {
        self.j0 - alpha * self.j1
    }

    pub fn i2(&self, alpha: f64) -> f64 {
        self.j1 - alpha * self.j2
    }
}

/// The three weighted parts along a chosen route.
pub fn weighted_parts(a: f64, b: f64, c: f64, y: f64, form: Form) -> Result<WeightedParts> {
    let op = "i1/i2";
    check_cubic(op, a, b, c, y)?;
    check_unit_band(op, c, y)?;
    let d = y - c;
    if d <= ROOT_GUARD * (b - c) {
        // leading term of the expansion about u = c
        let lead = 2.0 * d.sqrt() / ((1.0 - c * c) * ((a - c) * (b - c)).sqrt());
        return Ok(WeightedParts { j0: lead, j1: lead * c, j2: lead * c * c });
    }
    match form {
        Form::Hypergeometric => {
            let x = [d / (1.0 - c), -d / (1.0 + c), d / (a - c), (d / (b - c)).min(1.0)];
            let bs = [1.0, 1.0, 0.5, 0.5];
            let xx = lauricella_fd(&HypergeometricSpec::new(0.5, &bs, 1.5, &x))?;
            let yy = lauricella_fd(&HypergeometricSpec::new(1.5, &bs, 2.5, &x))?;
            let zz = lauricella_fd(&HypergeometricSpec::new(2.5, &bs, 3.5, &x))?;
            let pref = d.sqrt() / ((1.0 - c * c) * ((a - c) * (b - c)).sqrt());
            Ok(WeightedParts {
                j0: pref * 2.0 * xx,
                j1: pref * (2.0 * c * xx + 2.0 / 3.0 * d * yy),
                j2: pref * (2.0 * c * c * xx + 4.0 / 3.0 * c * d * yy + 2.0 / 5.0 * d * d * zz),
            })
        }
        Form::Elliptic => {
            let m = (b - c) / (a - c);
            let phi = (d / (b - c)).min(1.0).sqrt().asin();
            let x1 = ellip_pi_m(phi, (b - c) / (1.0 - c), m)?;
            let x2 = ellip_pi_m(phi, -(b - c) / (1.0 + c), m)?;
            let x3 = ellip_f_m(phi, m)?;
            let r = (a - c).sqrt();
            let j0 = (x1 / (1.0 - c) + x2 / (1.0 + c)) / r;
            let j1 = (x1 / (1.0 - c) - x2 / (1.0 + c)) / r;
            Ok(WeightedParts { j0, j1, j2: j0 - 2.0 * x3 / r })
        }
        Form::Quadrature => {
            // u = c + d sin^2 t removes both square-root endpoint singularities
            let part = |k: i32| {
                gauss_kronrod(
                    |t| {
                        let (s, co) = t.sin_cos();
                        let u = c + d * s * s;
                        let bu = (b - y) + d * co * co;
                        2.0 * d.sqrt() * co * u.powi(k) / ((1.0 - u * u) * ((a - u) * bu).sqrt())
                    },
                    0.0,
                    FRAC_PI_2,
                    QUAD_TOL,
                    QUAD_TOL,
                )
            };
            Ok(WeightedParts { j0: part(0)?, j1: part(1)?, j2: part(2)? })
        }
    }
}

/// `I1 = int_c^y (1 - alpha u) / (1 - u^2) du / sqrt((a-u)(b-u)(u-c))`.
pub fn i1(p: &CubicParams, form: Form) -> Result<f64> {
    Ok(weighted_parts(p.a, p.b, p.c, p.y, form)?.i1(p.alpha))
}

/// `I2`, the same as `I1` with an extra factor `u` in the integrand.
pub fn i2(p: &CubicParams, form: Form) -> Result<f64> {
    Ok(weighted_parts(p.a, p.b, p.c, p.y, form)?.i2(p.alpha))
}

/// `I3(y) = int_0^y sn^2 / (1 - n sn^2) du` with `n = c^2`, modulus `k`.
///
/// Takes the parameter `n` itself so that negative values (imaginary `c`)
/// are expressible; the solvers need that.
pub fn i3(y: f64, n: f64, k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::domain("i3", format!("modulus {k} outside [0, 1)")));
    }
    let m = k * k;
    let am = jacobi_m(y, m)?.am;
    ellip_pi_excess_m(am, n, m)
}

/// `I4(y) = int_0^y cn^2 / (1 - n sn^2) du`, again with `n = c^2`.
pub fn i4(y: f64, n: f64, k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::domain("i4", format!("modulus {k} outside [0, 1)")));
    }
    let m = k * k;
    let am = jacobi_m(y, m)?.am;
    let excess = ellip_pi_excess_m(am, n, m)?;
    // Pi = y + n * excess, and cn^2 = 1 - sn^2
    Ok(y + (n - 1.0) * excess)
}

fn check_band(op: &'static str, a: f64, b: f64, c: f64, y: f64) -> Result<()> {
    if ![a, b, c, y].iter().all(|v| v.is_finite()) {
        return Err(Error::domain(op, "non-finite parameter"));
    }
    if !(c < a.min(b)) || a == b {
        return Err(Error::domain(op, format!("need c < min(a, b) and a != b, got a={a}, b={b}, c={c}")));
    }
    let y2 = y * y;
    let (lo, hi) = (a.min(b), a.max(b));
    let slack = ROOT_GUARD * (hi - lo);
    if !(y > 0.0 && y2 >= lo - slack && y2 <= hi + slack) {
        return Err(Error::domain(op, format!("y^2 = {y2} outside the band [{lo}, {hi}]")));
    }
    Ok(())
}

/// Puts `y^2` exactly on the far edge `a` when it is within the root guard.
/// Left a rounding error away, the integrands keep a kink of width
/// `|y^2 - a|` at that end, and missing it costs about its square root.
fn snap_to_a(a: f64, b: f64, y2: f64) -> f64 {
    if (y2 - a).abs() <= ROOT_GUARD * (a - b).abs() {
        a
    } else {
        y2
    }
}

/// Amplitude and parameter `(phi, m)` shared by `I5` and `I6`; `m` may be
/// negative when `a < b`.
pub(crate) fn band_amplitude(a: f64, b: f64, c: f64, y2: f64) -> (f64, f64) {
    let m = (a - b) / (a - c);
    let s2 = ((a - c) * (y2 - b) / ((a - b) * (y2 - c))).clamp(0.0, 1.0);
    (s2.sqrt().asin(), m)
}

fn band_quadrature(a: f64, b: f64, c: f64, y2: f64, weight: impl Fn(f64) -> f64) -> Result<f64> {
    let d = (y2 - b).abs();
    let ay = (a - y2).abs();
    gauss_kronrod(
        |t| {
            let (s, co) = t.sin_cos();
            let x = b + (y2 - b) * s * s;
            d.sqrt() * co * weight(x) / ((ay + d * co * co) * (x - c)).sqrt()
        },
        0.0,
        FRAC_PI_2,
        QUAD_TOL,
        QUAD_TOL,
    )
}

/// `I5 = int_{sqrt b}^y u du / sqrt((a-u^2)(u^2-b)(u^2-c))`, taken non-negative.
pub fn i5(a: f64, b: f64, c: f64, y: f64, form: Form) -> Result<f64> {
    check_band("i5", a, b, c, y)?;
    let y2 = snap_to_a(a, b, y * y);
    if (y2 - b).abs() <= ROOT_GUARD * (a - b).abs() {
        return Ok(0.0);
    }
    match form {
        Form::Elliptic => {
            let (phi, m) = band_amplitude(a, b, c, y2);
            Ok(ellip_f_m(phi, m)? / (a - c).sqrt())
        }
        Form::Hypergeometric => {
            let d = y2 - b;
            let x1 = (d / (a - b)).min(1.0);
            Ok((d / ((a - b) * (b - c))).sqrt() * appell_f1(0.5, 0.5, 0.5, 1.5, x1, -d / (b - c))?)
        }
        Form::Quadrature => band_quadrature(a, b, c, y2, |_| 1.0),
    }
}

/// `I6 = int_{sqrt b}^y du / (u sqrt((a-u^2)(u^2-b)(u^2-c)))`, taken non-negative.
pub fn i6(a: f64, b: f64, c: f64, y: f64, form: Form) -> Result<f64> {
    check_band("i6", a, b, c, y)?;
    if b == 0.0 || c == 0.0 {
        return Err(Error::singular("i6", "b or c is zero"));
    }
    let y2 = snap_to_a(a, b, y * y);
    if (y2 - b).abs() <= ROOT_GUARD * (a - b).abs() {
        return Ok(0.0);
    }
    match form {
        Form::Elliptic => {
            let (phi, m) = band_amplitude(a, b, c, y2);
            let f = ellip_f_m(phi, m)?;
            let pi = ellip_pi_m(phi, c / b * m, m)?;
            Ok((b * f - (b - c) * pi) / (b * c * (a - c).sqrt()))
        }
        Form::Hypergeometric => {
            let d = y2 - b;
            let x = [-d / b, (d / (a - b)).min(1.0), -d / (b - c)];
            let l = lauricella_fd(&HypergeometricSpec::new(0.5, &[1.0, 0.5, 0.5], 1.5, &x))?;
            Ok((d / ((a - b) * (b - c))).sqrt() * l / b)
        }
        Form::Quadrature => band_quadrature(a, b, c, y2, |x| 1.0 / x),
    }
}

/// `I7 = int_c^y du / sqrt((a-u)(b-u)(u-c))`.
pub fn i7(a: f64, b: f64, c: f64, y: f64) -> Result<f64> {
    check_cubic("i7", a, b, c, y)?;
    let m = (b - c) / (a - c);
    let s2 = ((y - c) / (b - c)).clamp(0.0, 1.0);
    Ok(2.0 / (a - c).sqrt() * ellip_f_m(s2.sqrt().asin(), m)?)
}

/// Largest value `I7` reaches, at `y = b`.
pub fn i7_bound(a: f64, b: f64, c: f64) -> Result<f64> {
    check_cubic("i7", a, b, c, b)?;
    Ok(2.0 / (a - c).sqrt() * ellip_k_m((b - c) / (a - c))?)
}

/// Solves `I7(a, b, c; y) = l` for `y`.
pub fn i7_invert(a: f64, b: f64, c: f64, l: f64) -> Result<f64> {
    let bound = i7_bound(a, b, c)?;
    if !(l >= 0.0) {
        return Err(Error::NoSolution { op: "i7_invert", detail: format!("L = {l} is negative") });
    }
    if l > bound * (1.0 + 1e-14) {
        return Err(Error::NoSolution { op: "i7_invert", detail: format!("L = {l} exceeds the bound {bound}") });
    }
    let m = (b - c) / (a - c);
    let sn = jacobi_m(l * (a - c).sqrt() / 2.0, m)?.sn;
    Ok(c + (b - c) * sn * sn)
}
