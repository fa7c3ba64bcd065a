mod common;

use gyrokit_core::herpolhode::*;
use gyrokit_core::integrals::*;
use gyrokit_core::lagrange::*;
use gyrokit_core::poinsot::*;
use gyrokit_core::rotation::*;
use gyrokit_core::specfun::*;
use gyrokit_core::viscous::*;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

fn top_strategy() -> impl Strategy<Value = SymmetricTopConfig> {
    (
        (0.5f64..3.0, 0.2f64..3.0, 0.05f64..0.3),
        (0.3f64..2.8, -PI..PI, -PI..PI),
        (-2.0f64..2.0, -2.0f64..2.0, -8.0f64..8.0),
    )
        .prop_map(|((a, c, zg), (th, psi, phi), (p, q, r))| {
            SymmetricTopConfig::from_initial_rates(a, c, 1.0, 9.81, zg, th, psi, phi, [p, q, r])
        })
}

fn top_or_skip(cfg: SymmetricTopConfig) -> Option<HeavyTop> {
    HeavyTop::new(cfg).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resolvent_roots_bracket_and_factor(cfg in top_strategy()) {
        let top = top_or_skip(cfg);
        prop_assume!(top.is_some());
        let top = top.unwrap();
        let rr = top.roots;
        let s0 = cfg.theta0.cos();
        prop_assert!(-1.0 < rr.s1 && rr.s1 <= s0 + 1e-12 && s0 <= rr.s2 + 1e-12 && rr.s2 < 1.0 && rr.s3 > 1.0);
        let dp = top.params;
        let scale = dp.rho_hat.powi(2) * (1.0 + rr.s3.abs()).powi(3);
        for i in 0..10 {
            let s = -1.0 + 0.2 * i as f64;
            let factored = dp.rho_hat.powi(2) * (s - rr.s1) * (s - rr.s2) * (s - rr.s3);
            prop_assert!((dp.resolvent(s) - factored).abs() < 1e-10 * scale);
        }
    }

    #[test]
    fn heavy_top_first_integrals_and_confinement(cfg in top_strategy(), ts in prop::collection::vec(0.0f64..20.0, 8)) {
        let top = top_or_skip(cfg);
        prop_assume!(top.is_some());
        let top = top.unwrap();
        let rr = top.roots;
        let mgz = cfg.mass * cfg.g * cfg.z_g;
        let k_scale = cfg.k_z0.abs().max(cfg.a * top.params.rho_hat);
        for t in ts {
            let st = top.state(t);
            prop_assume!(st.is_ok());
            let st = st.unwrap();
            let (e, kz) = top.first_integrals(&st);
            prop_assert!((e - cfg.e0).abs() < 1e-9 * cfg.e0.abs().max(mgz), "energy {} vs {}", e, cfg.e0);
            prop_assert!((kz - cfg.k_z0).abs() < 1e-9 * k_scale, "K_z {} vs {}", kz, cfg.k_z0);
            let g = st.gamma;
            prop_assert!((g[0] * g[0] + g[1] * g[1] + g[2] * g[2] - 1.0).abs() < 1e-12);
            prop_assert!(st.rates[2] == cfg.r0);
            let s = st.theta.cos();
            prop_assert!(s >= rr.s1 - 1e-12 && s <= rr.s2 + 1e-12);
        }
    }

    #[test]
    fn precession_dual_forms_on_every_leg(cfg in top_strategy(), frac in 0.0f64..1.0, branch in 0i64..4) {
        let top = top_or_skip(cfg);
        prop_assume!(top.is_some());
        let top = top.unwrap();
        let rr = top.roots;
        let theta = (rr.s1 + frac * (rr.s2 - rr.s1)).acos();
        let e = precession_of_theta(theta, &rr, &top.params, branch, Form::Elliptic).unwrap();
        let h = precession_of_theta(theta, &rr, &top.params, branch, Form::Hypergeometric).unwrap();
        prop_assert!((e - h).abs() < 1e-8 * (1.0 + e.abs()));
        let e = spin_of_theta(theta, &rr, &top.params, branch, Form::Elliptic).unwrap();
        let h = spin_of_theta(theta, &rr, &top.params, branch, Form::Hypergeometric).unwrap();
        prop_assert!((e - h).abs() < 1e-8 * (1.0 + e.abs()));
    }

    #[test]
    fn rotation_is_proper(th in 0.0f64..PI, psi in -7.0f64..7.0, phi in -7.0f64..7.0) {
        let r = rotation_matrix(th, psi, phi);
        let rrt = mat_mul(&r, &transpose(&r));
        for i in 0..3 {
            for j in 0..3 {
                let id = if i == j { 1.0 } else { 0.0 };
                prop_assert!((rrt[i][j] - id).abs() < 1e-12);
            }
        }
        prop_assert!((det(&r) - 1.0).abs() < 1e-12);
        let g = [th.sin() * phi.sin(), th.sin() * phi.cos(), th.cos()];
        let col = [th.sin() * psi.sin(), -th.sin() * psi.cos(), th.cos()];
        for i in 0..3 {
            prop_assert!((r[2][i] - g[i]).abs() < 1e-15 && (r[i][2] - col[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn body_points_keep_their_distance(cfg in top_strategy(), t in 0.0f64..10.0, x in prop::array::uniform3(-1.0f64..1.0)) {
        let top = top_or_skip(cfg);
        prop_assume!(top.is_some());
        let top = top.unwrap();
        let m = top.point_trajectory(t, x);
        prop_assume!(m.is_ok());
        let m = m.unwrap();
        prop_assert!((norm(&m.position) - norm(&x)).abs() < 1e-10);
        prop_assert!(dot(&m.position, &m.velocity).abs() < 1e-9 * (1.0 + norm(&m.velocity)));
        let apex = top.point_trajectory(t, [0.0, 0.0, 1.0]).unwrap();
        prop_assert!((apex.position[2] - top.angles_of_t(t).unwrap().0.cos()).abs() < 1e-14);
    }
}

fn free_strategy() -> impl Strategy<Value = FreeBodyConfig> {
    // A < B < C with the momentum condition, or the mirrored ordering
    (0.5f64..2.0, 0.1f64..2.0, 0.1f64..2.0, 0.2f64..2.0, 0.0f64..1.0, any::<bool>(), -PI..PI).prop_filter_map(
        "momentum condition",
        |(a, db, dc, p0, f, flip, psi0)| {
            let (a, b, c) = if flip { (a + db + dc, a + db, a) } else { (a, a + db, a + db + dc) };
            // r0 from the fraction f of the admissible range
            let r_min = (a * (b - a) / (c * (c - b))).sqrt() * p0;
            let r0 = if flip { 0.05 * p0 + f * (r_min - 0.05 * p0) } else { r_min * (1.0 + 0.02 + 2.0 * f) };
            let cfg = FreeBodyConfig::from_initial_rates(a, b, c, p0, r0, psi0);
            derive_free(&cfg).ok().map(|_| cfg)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn free_body_integrals_and_period(cfg in free_strategy(), tau in -20.0f64..20.0) {
        let d = derive_free(&cfg).unwrap();
        let [p, q, r] = body_rates_free(tau, &d).unwrap();
        let two_t = cfg.a * p * p + cfg.b * q * q + cfg.c * r * r;
        let k2 = (cfg.a * p).powi(2) + (cfg.b * q).powi(2) + (cfg.c * r).powi(2);
        prop_assert!((two_t - 2.0 * cfg.e0).abs() < 1e-10 * 2.0 * cfg.e0);
        prop_assert!((k2 - cfg.k_norm.powi(2)).abs() < 1e-10 * cfg.k_norm.powi(2));
        let g = [cfg.a * p / cfg.k_norm, cfg.b * q / cfg.k_norm, cfg.c * r / cfg.k_norm];
        prop_assert!((g[0] * g[0] + g[1] * g[1] + g[2] * g[2] - 1.0).abs() < 1e-10);
        let later = body_rates_free(tau + rate_period(&d), &d).unwrap();
        for j in 0..3 {
            prop_assert!((later[j] - [p, q, r][j]).abs() < 1e-9);
        }
        let (theta, phi) = angles_free(tau, &d, &cfg).unwrap();
        let (st, ct) = theta.sin_cos();
        prop_assert!((st * phi.sin() - g[0]).abs() < 1e-10 && (st * phi.cos() - g[1]).abs() < 1e-10 && (ct - g[2]).abs() < 1e-10);
    }

    #[test]
    fn herpolhode_band_and_dual_forms(a in 0.5f64..3.0, db in 0.1f64..2.0, dc in 0.1f64..2.0, f in 0.02f64..0.98, flip in any::<bool>()) {
        // D strictly between C and both A and B
        let (a, b, c) = if flip { (a + db, a + db + dc, a) } else { (a + dc, a, a + db + dc) };
        let d = if c > a.max(b) { a.max(b) + f * (c - a.max(b)) } else { c + f * (a.min(b) - c) };
        let hc = herpolhode_constants(a, b, c, d, 1.0).unwrap();
        let (r0, r1) = hc.annulus_radii();
        for p in trace_curve(&hc, 9, 6).unwrap() {
            prop_assert!(p.rho >= r0 * (1.0 - 1e-12) && p.rho <= r1 * (1.0 + 1e-12));
        }
        prop_assume!((hc.a - hc.b).abs() > 1e-6 * hc.a);
        let rho = (r0 * r0 + f * (r1 * r1 - r0 * r0)).sqrt();
        let e = chi_elliptic(rho, &hc).unwrap();
        let h = chi_hypergeometric(rho, &hc).unwrap();
        prop_assert!((e - h).abs() < 1e-8, "{} vs {}", e, h);
    }

    #[test]
    fn viscous_rates_start_right_and_shrink_by_the_law(
        a in 0.5f64..3.0, c in 0.2f64..3.0, mu in 0.01f64..1.0,
        p0 in -2.0f64..2.0, q0 in -2.0f64..2.0, r0 in -6.0f64..6.0, t in 0.0f64..30.0,
    ) {
        let cfg = ViscousConfig { a, c, mu, p0, q0, r0, gamma0: [0.0, 0.6, 0.8], psi0: 0.0 };
        let (p, q) = equatorial_rates(0.0, &cfg).unwrap();
        prop_assert!((p - p0).abs() < 1e-10 && (q - q0).abs() < 1e-10);
        let (p, q) = equatorial_rates(t, &cfg).unwrap();
        let law = p0.hypot(q0) * (-mu * t / a).exp();
        prop_assert!((p.hypot(q) - law).abs() <= 1e-9 * law + 1e-300);
        if !cfg.is_decoupled() {
            prop_assert!(verify_p_ode(t, &cfg).unwrap().abs() < 1e-8);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn jacobi_identities(u in -30.0f64..30.0, k in 0.0f64..0.999) {
        let j = jacobi_am_sn_cn_dn(u, k).unwrap();
        prop_assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() < 1e-12);
        prop_assert!((j.dn * j.dn + k * k * j.sn * j.sn - 1.0).abs() < 1e-12);
    }

    #[test]
    fn first_kind_inverts(phi in 0.0f64..FRAC_PI_2, k in 0.0f64..0.999) {
        let j = jacobi_am_sn_cn_dn(ellip_f(phi, k).unwrap(), k).unwrap();
        prop_assert!((j.sn - phi.sin()).abs() < 1e-10);
    }

    #[test]
    fn third_kind_grows_with_amplitude(phi in 0.0f64..3.0, dphi in 1e-3f64..1.0, n in -3.0f64..0.9, k in 0.0f64..0.99) {
        prop_assert!(ellip_pi(phi + dphi, n, k).unwrap() > ellip_pi(phi, n, k).unwrap());
    }

    #[test]
    fn appendix_dual_forms(a0 in -0.9f64..0.5, gap1 in 0.05f64..0.4, gap2 in 0.05f64..2.0, f in 0.0f64..1.0, alpha in -1.0f64..1.0) {
        // -1 < c < y <= b < 1 < a keeps every weight finite
        let c = a0;
        let b = (c + gap1).min(0.99);
        let a = 1.0 + gap2;
        let y = c + f * (b - c);
        let p = CubicParams { a, b, c, alpha, y };
        let e1 = i1(&p, Form::Elliptic).unwrap();
        let h1 = i1(&p, Form::Hypergeometric).unwrap();
        let q1 = i1(&p, Form::Quadrature).unwrap();
        prop_assert!((e1 - h1).abs() < 1e-8 && (e1 - q1).abs() < 1e-7);
        let e2 = i2(&p, Form::Elliptic).unwrap();
        let h2 = i2(&p, Form::Hypergeometric).unwrap();
        let q2 = i2(&p, Form::Quadrature).unwrap();
        prop_assert!((e2 - h2).abs() < 1e-8 && (e2 - q2).abs() < 1e-7);
    }

    #[test]
    fn band_integral_dual_forms(lo in 0.5f64..3.0, width in 0.05f64..3.0, c in -3.0f64..0.4, f in 0.0f64..1.0, flip in any::<bool>()) {
        let (a, b) = if flip { (lo + width, lo) } else { (lo, lo + width) };
        let y = (lo + f * width).sqrt();
        for (e, h, q) in [
            (i5(a, b, c, y, Form::Elliptic), i5(a, b, c, y, Form::Hypergeometric), i5(a, b, c, y, Form::Quadrature)),
            (i6(a, b, c, y, Form::Elliptic), i6(a, b, c, y, Form::Hypergeometric), i6(a, b, c, y, Form::Quadrature)),
        ] {
            let (e, h, q) = (e.unwrap(), h.unwrap(), q.unwrap());
            prop_assert!((e - h).abs() < 1e-8 && (e - q).abs() < 1e-7, "{} {} {}", e, h, q);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn i7_round_trip(c in -0.9f64..0.5, gb in 0.05f64..1.0, ga in 0.05f64..2.0, f in 0.0f64..1.0) {
        let (b, a) = (c + gb, c + gb + ga);
        let l = f * i7_bound(a, b, c).unwrap();
        let y = i7_invert(a, b, c, l).unwrap();
        prop_assert!((i7(a, b, c, y).unwrap() - l).abs() < 1e-10);
    }

    #[test]
    fn lauricella_permutation_and_series(x in prop::array::uniform3(-0.5f64..0.5), b in prop::array::uniform3(0.1f64..1.5)) {
        let base = lauricella_fd(&HypergeometricSpec::new(0.5, &b, 1.7, &x)).unwrap();
        let perm = lauricella_fd(&HypergeometricSpec::new(0.5, &[b[2], b[0], b[1]], 1.7, &[x[2], x[0], x[1]])).unwrap();
        prop_assert!((base - perm).abs() < 1e-10);
        let integral = lauricella_fd_integral(&HypergeometricSpec::new(0.5, &b, 1.7, &x)).unwrap();
        let series = common::lauricella_series(0.5, &b, 1.7, &x, 60);
        prop_assert!((integral - series).abs() < 1e-9, "{} vs {}", integral, series);
    }
}
