mod common;

use common::*;
use gyrokit_core::integrals::{i1, i2, i3, i4, i5, i6, i7, i7_bound, i7_invert, CubicParams, Form};
use gyrokit_core::specfun::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

#[test]
fn first_kind_trivial_and_quadrature() {
    assert!((ellip_f(0.7, 0.0).unwrap() - 0.7).abs() < 1e-15);
    assert!((ellip_f(FRAC_PI_2, 0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
    let q = legendre_third(FRAC_PI_3, 0.0, 0.8);
    let f = ellip_f(FRAC_PI_3, 0.8).unwrap();
    assert!((f - q).abs() < 1e-12 * q, "{f} vs {q}");
}

#[test]
fn third_kind_trivial_and_quadrature() {
    assert!((ellip_pi(1.1, 0.0, 0.5).unwrap() - ellip_f(1.1, 0.5).unwrap()).abs() < 1e-15);
    let closed = (0.7f64.sqrt() * FRAC_PI_4.tan()).atan() / 0.7f64.sqrt();
    assert!((ellip_pi(FRAC_PI_4, 0.3, 0.0).unwrap() - closed).abs() < 1e-14);
    let q = legendre_third(1.0, 0.5, 0.6);
    assert!((ellip_pi(1.0, 0.5, 0.6).unwrap() - q).abs() < 1e-12 * q);
    assert!(ellip_pi(1.2, 1.3, 0.2).is_err());
}

#[test]
fn jacobi_degenerations() {
    let j = jacobi_am_sn_cn_dn(0.0, 0.4).unwrap();
    assert_eq!((j.am, j.sn, j.cn, j.dn), (0.0, 0.0, 1.0, 1.0));
    let j = jacobi_am_sn_cn_dn(0.9, 0.0).unwrap();
    assert!((j.sn - 0.9f64.sin()).abs() < 1e-15 && (j.cn - 0.9f64.cos()).abs() < 1e-15 && j.dn == 1.0);
    let j = jacobi_am_sn_cn_dn(1.0, 1.0).unwrap();
    assert!((j.sn - 1f64.tanh()).abs() < 1e-15);
}

#[test]
fn hypergeometric_against_series() {
    assert_eq!(lauricella_fd(&HypergeometricSpec::new(0.5, &[1.0, 0.5], 1.5, &[0.0, 0.0])).unwrap(), 1.0);
    let v = lauricella_fd(&HypergeometricSpec::new(1.0, &[1.0], 2.0, &[0.5])).unwrap();
    assert!((v - 2.0 * 2f64.ln()).abs() < 1e-13);
    // four variables in the pattern of the precession integral
    let x = [0.21, -0.35, 0.4, -0.1];
    let b = [1.0, 1.0, 0.5, 0.5];
    let reference = lauricella_series(0.5, &b, 1.5, &x, 45);
    let spec = HypergeometricSpec::new(0.5, &b, 1.5, &x);
    let direct = lauricella_fd_integral(&spec).unwrap();
    assert!((direct - reference).abs() < 1e-10, "{direct} vs {reference}");
    assert!((lauricella_fd(&spec).unwrap() - reference).abs() < 1e-10);
    let f1 = appell_f1(0.5, 0.5, 0.5, 1.5, 0.2, -0.3).unwrap();
    assert!((f1 - lauricella_series(0.5, &[0.5, 0.5], 1.5, &[0.2, -0.3], 200)).abs() < 1e-12);
    assert!((appell_f1(0.5, 0.5, 0.7, 1.5, 0.3, 0.0).unwrap() - hyp2f1(0.5, 0.5, 1.5, 0.3).unwrap()).abs() < 1e-14);
    assert!(lauricella_fd(&HypergeometricSpec::new(0.5, &[0.5], 1.5, &[1.2])).is_err());
    assert!(lauricella_fd(&HypergeometricSpec::new(1.5, &[0.5], 1.5, &[0.2])).is_err());
}

#[test]
fn half_order_bessel() {
    assert!(bessel_half(FRAC_PI_2).unwrap().j_val.abs() < 1e-16);
    let v = bessel_half(PI).unwrap();
    assert!(v.y_val.abs() < 1e-16 && (v.j_val + (2.0f64 / (PI * PI)).sqrt()).abs() < 1e-15);
    let (j, y) = bessel_half_series(2.5);
    let v = bessel_half(2.5).unwrap();
    assert!((v.j_val - j).abs() < 1e-14 && (v.y_val - y).abs() < 1e-14);
    assert!(bessel_half(0.0).is_err());
}

/// `int_c^y w(u) du / sqrt((a-u)(b-u)(u-c))` with `u = c + (y-c) sin^2 t`.
fn cubic_quadrature(a: f64, b: f64, c: f64, y: f64, w: impl Fn(f64) -> f64) -> f64 {
    let d = y - c;
    integrate(
        |t| {
            let (s, co) = t.sin_cos();
            let u = c + d * s * s;
            2.0 * d.sqrt() * co * w(u) / ((a - u) * (b - u)).sqrt()
        },
        0.0,
        FRAC_PI_2,
        64,
    )
}

#[test]
fn appendix_integrals_against_quadrature() {
    // values quoted in the interface examples; y = 0.9 because y must lie
    // below b and below 1
    let p = CubicParams { a: 3.0, b: 2.0, c: 0.5, alpha: 0.2, y: 0.9 };
    let q1 = cubic_quadrature(p.a, p.b, p.c, p.y, |u| (1.0 - p.alpha * u) / (1.0 - u * u));
    let q2 = cubic_quadrature(p.a, p.b, p.c, p.y, |u| u * (1.0 - p.alpha * u) / (1.0 - u * u));
    for form in Form::ALL {
        assert!((i1(&p, form).unwrap() - q1).abs() < 1e-10, "{form:?}");
        assert!((i2(&p, form).unwrap() - q2).abs() < 1e-10, "{form:?}");
    }
    let m = 0.49;
    let sn2 = |u: f64| jacobi_m(u, m).unwrap().sn.powi(2);
    let q3 = integrate(|u| sn2(u) / (1.0 - 1.3 * sn2(u)), 0.0, 0.6, 64);
    let q4 = integrate(|u| (1.0 - sn2(u)) / (1.0 - 0.25 * sn2(u)), 0.0, 1.2, 64);
    assert!((i3(0.6, 1.3, 0.7).unwrap() - q3).abs() < 1e-12);
    assert!((i4(1.2, 0.25, 0.7).unwrap() - q4).abs() < 1e-12);
    // I5 and I6 on (a, b, c) = (2.5, 4, -1), y = 1.8 inside the band
    let (a, b, c, y) = (2.5, 4.0, -1.0, 1.8);
    let band = |w: fn(f64) -> f64| {
        let d = b - y * y;
        integrate(
            |t| {
                let (s, co) = t.sin_cos();
                let x = b - d * s * s;
                d.sqrt() * co * w(x) / ((x - a) * (x - c)).sqrt()
            },
            0.0,
            FRAC_PI_2,
            64,
        )
    };
    // rho d rho = dx / 2 with x = b - (b - y^2) sin^2 t
    let q5 = band(|_| 1.0);
    let q6 = band(|x| 1.0 / x);
    for form in [Form::Elliptic, Form::Hypergeometric, Form::Quadrature] {
        assert!((i5(a, b, c, y, form).unwrap() - q5).abs() < 1e-10, "{form:?}");
        assert!((i6(a, b, c, y, form).unwrap() - q6).abs() < 1e-10, "{form:?}");
    }
    let (a, b, c) = (3.0, 2.0, 0.5);
    let l = i7(a, b, c, 1.1).unwrap();
    assert!((i7_invert(a, b, c, l).unwrap() - 1.1).abs() < 1e-12);
    assert!((i7_invert(a, b, c, i7_bound(a, b, c).unwrap()).unwrap() - b).abs() < 1e-12);
    assert_eq!(i7_invert(a, b, c, 0.0).unwrap(), c);
    assert!(i7_invert(a, b, c, 1.01 * i7_bound(a, b, c).unwrap()).is_err());
}
