//! Carlson symmetric integrals by the duplication theorem.
//!
//! Straight from Carlson's 1995 algorithms with the error parameter set for
//! double precision. Arguments are assumed already validated by the caller:
//! `x, y, z >= 0` with at most one zero, and `p > 0` for `rj`.

const R: f64 = 1e-16;

/// R_C(x, y) for x >= 0, y > 0.
pub fn rc(x: f64, y: f64) -> f64 {
    let y0 = y;
    let mut x = x;
    let mut y = y;
    let a0 = (x + 2.0 * y) / 3.0;
    let mut a = a0;
    let q = (3.0 * R).powf(-1.0 / 8.0) * (a0 - x).abs();
    let mut pow4 = 1.0;
    while pow4 * q >= a.abs() {
        let lambda = 2.0 * x.sqrt() * y.sqrt() + y;
        a = 0.25 * (a + lambda);
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        pow4 *= 0.25;
    }
    let s = (y0 - a0) * pow4 / a;
    let s2 = s * s;
    (1.0 + s2 * (3.0 / 10.0 + s * (1.0 / 7.0 + s * (3.0 / 8.0 + s * (9.0 / 22.0 + s * (159.0 / 208.0 + s * 9.0 / 8.0))))))
        / a.sqrt()
}

/// R_F(x, y, z).
pub fn rf(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + z) / 3.0;
    let mut a = a0;
    let q = (3.0 * R).powf(-1.0 / 6.0) * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let (x0, y0) = (x, y);
    let mut pow4 = 1.0;
    while pow4 * q >= a.abs() {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sx * sz + sy * sz;
        a = 0.25 * (a + lambda);
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        pow4 *= 0.25;
    }
    let xx = (a0 - x0) * pow4 / a;
    let yy = (a0 - y0) * pow4 / a;
    let zz = -(xx + yy);
    let e2 = xx * yy - zz * zz;
    let e3 = xx * yy * zz;
    (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt()
}

/// R_J(x, y, z, p) for p > 0.
pub fn rj(x: f64, y: f64, z: f64, p: f64) -> f64 {
    let (mut x, mut y, mut z, mut p) = (x, y, z, p);
    let a0 = (x + y + z + 2.0 * p) / 5.0;
    let mut a = a0;
    let delta = (p - x) * (p - y) * (p - z);
    let q = (0.25 * R).powf(-1.0 / 6.0)
        * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs()).max((a0 - p).abs());
    let (x0, y0, z0) = (x, y, z);
    let mut pow4 = 1.0;
    let mut sum = 0.0;
    while pow4 * q >= a.abs() {
        let (sx, sy, sz, sp) = (x.sqrt(), y.sqrt(), z.sqrt(), p.sqrt());
        let lambda = sx * sy + sx * sz + sy * sz;
        let d = (sp + sx) * (sp + sy) * (sp + sz);
        let e = pow4 * pow4 * pow4 * delta / (d * d);
        sum += pow4 * rc(1.0, 1.0 + e) / d;
        a = 0.25 * (a + lambda);
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        p = 0.25 * (p + lambda);
        pow4 *= 0.25;
    }
    let xx = (a0 - x0) * pow4 / a;
    let yy = (a0 - y0) * pow4 / a;
    let zz = (a0 - z0) * pow4 / a;
    let pp = -0.5 * (xx + yy + zz);
    let e2 = xx * yy + xx * zz + yy * zz - 3.0 * pp * pp;
    let e3 = xx * yy * zz + 2.0 * e2 * pp + 4.0 * pp * pp * pp;
    let e4 = (2.0 * xx * yy * zz + e2 * pp + 3.0 * pp * pp * pp) * pp;
    let e5 = xx * yy * zz * pp * pp;
    let series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    pow4 * series / (a * a.sqrt()) + 6.0 * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // Reference values from Carlson (1995), Table 1.
    #[test]
    fn carlson_table_values() {
        assert!((rf(1.0, 2.0, 0.0) - 1.3110287771461).abs() < 1e-13);
        assert!((rf(2.0, 3.0, 4.0) - 0.58408284167715).abs() < 1e-13);
        assert!((rc(0.0, 0.25) - PI).abs() < 1e-14, "{}", rc(0.0, 0.25) - PI);
        assert!((rc(2.25, 2.0) - std::f64::consts::LN_2).abs() < 1e-13);
        assert!((rj(0.0, 1.0, 2.0, 3.0) - 0.77688623778582).abs() < 1e-13);
        assert!((rj(2.0, 3.0, 4.0, 5.0) - 0.14297579667157).abs() < 1e-13);
    }

    #[test]
    fn homogeneity() {
        let (x, y, z, p) = (0.3, 1.7, 2.2, 0.9);
        let s = 3.5f64;
        assert!((rf(s * x, s * y, s * z) - rf(x, y, z) / s.sqrt()).abs() < 1e-14);
        assert!((rj(s * x, s * y, s * z, s * p) - rj(x, y, z, p) / s.powf(1.5)).abs() < 1e-14);
    }
}
