use gyrokit_core::oracle::{build_viscous_system, integrate, viscous_energy};
use gyrokit_core::viscous::*;

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn cases() -> Vec<ViscousConfig> {
    vec![
        ViscousConfig { a: 2.0, c: 1.0, mu: 0.2, p0: 0.7, q0: -0.4, r0: 5.0, gamma0: unit([0.3, 0.5, 0.8]), psi0: 0.0 },
        ViscousConfig { a: 1.0, c: 1.8, mu: 0.05, p0: -0.2, q0: 0.9, r0: -3.0, gamma0: unit([0.6, -0.2, 0.3]), psi0: 0.4 },
        ViscousConfig { a: 3.0, c: 0.5, mu: 1.0, p0: 1.5, q0: 0.1, r0: 2.0, gamma0: unit([-0.1, 0.7, -0.4]), psi0: 0.0 },
    ]
}

/// Complex form of the equatorial rates: `p + i q` turns at the rate
/// `(A - C) r / A` while shrinking as `e^{-mu t/A}`.
fn rotating_reference(t: f64, c: &ViscousConfig) -> (f64, f64) {
    let phase = (c.a - c.c) * c.c * c.r0 * (1.0 - (-c.mu * t / c.c).exp()) / (c.a * c.mu);
    let e = (-c.mu * t / c.a).exp();
    let (s, co) = phase.sin_cos();
    (e * (c.p0 * co + c.q0 * s), e * (c.q0 * co - c.p0 * s))
}

#[test]
fn rates_match_reference_and_oracle() {
    for c in cases() {
        let t_end = 5.0 * c.a / c.mu;
        let grid: Vec<f64> = (1..=200).map(|i| t_end * i as f64 / 200.0).collect();
        let sys = build_viscous_system(c.a, c.c, c.mu);
        let y0 = [c.p0, c.q0, c.r0, c.gamma0[0], c.gamma0[1], c.gamma0[2]];
        let run = integrate(&sys, &y0, (0.0, t_end), &grid, 1e-13, 1e-15).unwrap();
        let m0 = c.p0.hypot(c.q0);
        let mut energy = viscous_energy(c.a, c.c, &y0);
        for (t, y) in grid.iter().zip(&run.states) {
            let [p, q, r] = rates(*t, &c).unwrap();
            let (pr, qr) = rotating_reference(*t, &c);
            assert!((p - pr).abs() < 1e-10 && (q - qr).abs() < 1e-10, "t = {t}: ({p}, {q}) vs ({pr}, {qr})");
            assert!((p - y[0]).abs() < 1e-7 && (q - y[1]).abs() < 1e-7 && (r - y[2]).abs() < 1e-12);
            let law = m0 * (-c.mu * t / c.a).exp();
            assert!((p.hypot(q) - law).abs() <= 1e-9 * law);
            let e = viscous_energy(c.a, c.c, &[p, q, r]);
            assert!(e < energy);
            energy = e;
            assert!(verify_p_ode(*t, &c).unwrap().abs() < 1e-8);
        }
    }
}

#[test]
fn vanishing_drag_recovers_free_precession() {
    let mut c = cases()[0];
    c.mu = 1e-6;
    for i in 1..=10 {
        let t = 0.9 * i as f64;
        let (p, q) = equatorial_rates(t, &c).unwrap();
        let phase = (c.a - c.c) * c.r0 * t / c.a;
        let (s, co) = phase.sin_cos();
        assert!((p - (c.p0 * co + c.q0 * s)).abs() < 1e-4);
        assert!((q - (c.q0 * co - c.p0 * s)).abs() < 1e-4);
    }
}

#[test]
fn resolvent_route_agrees_with_poisson_and_oracle() {
    for c in cases() {
        let t_end = 2.0 * c.a / c.mu;
        let grid: Vec<f64> = (0..=150).map(|i| t_end * i as f64 / 150.0).collect();
        let hybrid = gamma_track(&grid, &c).unwrap();
        let poisson = gamma_track_poisson(&grid, &c).unwrap();
        let sys = build_viscous_system(c.a, c.c, c.mu);
        let y0 = [c.p0, c.q0, c.r0, c.gamma0[0], c.gamma0[1], c.gamma0[2]];
        let run = integrate(&sys, &y0, (0.0, t_end), &grid[1..], 1e-13, 1e-15).unwrap();
        let mut worst = 0.0f64;
        for (i, t) in grid.iter().enumerate() {
            let g = hybrid.gamma(*t).unwrap();
            let gp = poisson.gamma(*t).unwrap();
            let norm = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
            assert!((norm - 1.0).abs() < 1e-8, "t = {t}: |gamma| = {norm}");
            for k in 0..3 {
                worst = worst.max((g[k] - gp[k]).abs());
                if i > 0 {
                    worst = worst.max((g[k] - run.states[i - 1][3 + k]).abs());
                }
            }
        }
        assert!(worst < 1e-7, "{c:?}: {worst:e}, poisson spans {:?}", hybrid.poisson_spans());
    }
}

#[test]
fn angles_reproduce_the_rates() {
    for c in cases() {
        let t_end = c.a / c.mu;
        let h = 1e-4;
        let base: Vec<f64> = (1..=12).map(|i| t_end * i as f64 / 13.0).collect();
        let grid: Vec<f64> = base.iter().flat_map(|t| [t - h, *t, t + h]).collect();
        let traj = viscous_trajectory(&grid, &c).unwrap();
        let first = viscous_trajectory(&[0.0], &c).unwrap()[0];
        assert!((first.theta - c.gamma0[2].acos()).abs() < 1e-14 && first.psi == c.psi0);
        for k in 0..base.len() {
            let (m, s, p) = (traj[3 * k], traj[3 * k + 1], traj[3 * k + 2]);
            let d = |f: fn(&ViscousSample) -> f64| (f(&p) - f(&m)) / (2.0 * h);
            let (dth, dph, dps) = (d(|x| x.theta), d(|x| x.phi), d(|x| x.psi));
            let (st, ct) = s.theta.sin_cos();
            let (sf, cf) = s.phi.sin_cos();
            let rebuilt = [dps * st * sf + dth * cf, dps * st * cf - dth * sf, dps * ct + dph];
            for j in 0..3 {
                assert!((rebuilt[j] - s.rates[j]).abs() < 1e-6, "t = {}: {rebuilt:?} vs {:?}", s.t, s.rates);
            }
            let dg3 = s.rates[1] * s.gamma[0] - s.rates[0] * s.gamma[1];
            assert!((dth + dg3 / st).abs() < 1e-6);
        }
    }
}
