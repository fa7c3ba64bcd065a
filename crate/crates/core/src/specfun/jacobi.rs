//! Jacobi amplitude and the three basic elliptic functions.
//!
//! The amplitude comes from the descending Landen (AGM) recursion after
//! reducing `u` by whole half-periods, so `am` is continuous and unbounded
//! in `u` rather than folded into one sheet.

use super::elliptic::ellip_k_m;
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// `am(u,k)` together with `sn = sin am`, `cn = cos am`, `dn`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobi {
    pub am: f64,
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

fn am_agm(u: f64, m: f64) -> f64 {
    let mut a = 1.0f64;
    let mut b = (1.0 - m).sqrt();
    let mut c = m.sqrt();
    let mut ratios = [0.0f64; 32];
    let mut n = 0;
    while c.abs() > 1e-17 * a && n < 31 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        c = 0.5 * (a - b);
        a = an;
        b = bn;
        n += 1;
        ratios[n] = c / a;
    }
    let mut phi = (1u64 << n) as f64 * a * u;
    for i in (1..=n).rev() {
        phi = 0.5 * (phi + (ratios[i] * phi.sin()).asin());
    }
    phi
}

/// Jacobi functions in parameter form, `0 <= m <= 1`.
pub fn jacobi_m(u: f64, m: f64) -> Result<Jacobi> {
    if !u.is_finite() || !m.is_finite() {
        return Err(Error::domain("jacobi", "non-finite argument"));
    }
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::domain("jacobi", format!("parameter m = {m} outside [0, 1]")));
    }
    if m == 1.0 {
        let sech = 1.0 / u.cosh();
        return Ok(Jacobi { am: u.sinh().atan(), sn: u.tanh(), cn: sech, dn: sech });
    }
    let am = if m == 0.0 {
        u
    } else {
        let kk = ellip_k_m(m)?;
        let j = (u / (2.0 * kk)).round();
        j * PI + am_agm(u - 2.0 * j * kk, m)
    };
    let (sn, cn) = am.sin_cos();
    let dn = (cn * cn + (1.0 - m) * sn * sn).sqrt();
    Ok(Jacobi { am, sn, cn, dn })
}

/// Jacobi functions for modulus `0 <= k <= 1`.
pub fn jacobi_am_sn_cn_dn(u: f64, k: f64) -> Result<Jacobi> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::domain("jacobi", format!("modulus k = {k} outside [0, 1]")));
    }
    jacobi_m(u, k * k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::elliptic::{ellip_f, ellip_k};

    #[test]
    fn degenerate_moduli() {
        let j = jacobi_am_sn_cn_dn(0.0, 0.7).unwrap();
        assert_eq!((j.am, j.sn, j.cn, j.dn), (0.0, 0.0, 1.0, 1.0));
        let j = jacobi_am_sn_cn_dn(2.3, 0.0).unwrap();
        assert!((j.sn - 2.3f64.sin()).abs() < 1e-15 && j.dn == 1.0);
        let j = jacobi_am_sn_cn_dn(1.0, 1.0).unwrap();
        assert!((j.sn - 0.761_594_155_955_764_9).abs() < 1e-15);
    }

    #[test]
    fn quarter_period_and_unwrapping() {
        let k = 0.9;
        let kk = ellip_k(k).unwrap();
        let j = jacobi_am_sn_cn_dn(kk, k).unwrap();
        assert!((j.sn - 1.0).abs() < 1e-14 && j.cn.abs() < 1e-7);
        assert!((j.dn - (1.0 - k * k).sqrt()).abs() < 1e-12);
        let j = jacobi_am_sn_cn_dn(7.0 * kk + 0.1, k).unwrap();
        let base = jacobi_am_sn_cn_dn(-kk + 0.1, k).unwrap();
        assert!((j.am - (base.am + 4.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn inverts_f() {
        for &k in &[0.1, 0.5, 0.99, 0.999_999] {
            for &phi in &[0.2, 1.0, 1.5, 4.0, -2.5] {
                let u = ellip_f(phi, k).unwrap();
                let j = jacobi_am_sn_cn_dn(u, k).unwrap();
                assert!((j.am - phi).abs() < 1e-11, "k={k} phi={phi} am={}", j.am);
            }
        }
    }
}
