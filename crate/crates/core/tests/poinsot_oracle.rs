use gyrokit_core::oracle::{build_free_body_attitude_system, integrate};
use gyrokit_core::poinsot::*;
use gyrokit_core::quadrature::adaptive_simpson;
use gyrokit_core::rotation::{euler_from_matrix, rotation_matrix, unwrap_near};

fn cases() -> Vec<FreeBodyConfig> {
    vec![
        FreeBodyConfig::from_initial_rates(1.0, 2.0, 3.0, 1.0, 0.8, 0.2),
        FreeBodyConfig::from_initial_rates(2.0, 2.5, 4.0, 1.3, 0.8, -1.0),
        // A > B > C
        FreeBodyConfig::from_initial_rates(3.0, 2.0, 1.0, 0.7, 1.5, 0.4),
        // near the separatrix
        FreeBodyConfig::from_initial_rates(1.0, 2.0, 3.0, 1.0, 0.58, 0.0),
    ]
}

#[test]
fn closed_form_matches_attitude_oracle() {
    for cfg in cases() {
        let d = derive_free(&cfg).unwrap();
        let period = rate_period(&d) / d.tau_rate;
        let (theta0, phi0) = angles_free(0.0, &d, &cfg).unwrap();
        let r0 = rotation_matrix(theta0, cfg.psi0, phi0);
        let mut y0 = body_rates_free(0.0, &d).unwrap().to_vec();
        for row in r0 {
            y0.extend(row);
        }
        let sys = build_free_body_attitude_system([cfg.a, cfg.b, cfg.c]);
        let grid: Vec<f64> = (1..=120).map(|i| 3.0 * period * i as f64 / 120.0).collect();
        let res = integrate(&sys, &y0, (0.0, grid[119]), &grid, 1e-13, 1e-15).unwrap();
        let (mut psi_o, mut phi_o) = (cfg.psi0, phi0);
        let mut worst = [0.0f64; 3];
        for (t, y) in grid.iter().zip(&res.states) {
            let m = [[y[3], y[4], y[5]], [y[6], y[7], y[8]], [y[9], y[10], y[11]]];
            let (th, ps, ph) = euler_from_matrix(&m);
            psi_o = unwrap_near(ps, psi_o);
            phi_o = unwrap_near(ph, phi_o);
            let tau = t * d.tau_rate;
            let w = body_rates_free(tau, &d).unwrap();
            let (theta, phi) = angles_free(tau, &d, &cfg).unwrap();
            let psi = precession_free(tau, &d, &cfg).unwrap();
            worst[0] = worst[0].max((0..3).map(|i| (w[i] - y[i]).abs()).fold(0.0, f64::max));
            worst[1] = worst[1].max((theta - th).abs()).max((phi - phi_o).abs());
            worst[2] = worst[2].max((psi - psi_o).abs());
        }
        assert!(worst[0] < 1e-7 && worst[1] < 1e-7 && worst[2] < 1e-6, "{cfg:?}: {worst:?}");
    }
}

#[test]
fn precession_rate_matches_its_ode() {
    for cfg in cases() {
        let d = derive_free(&cfg).unwrap();
        let rate = |tau: f64| {
            let [p, q, _] = body_rates_free(tau, &d).unwrap();
            let (a, b) = (cfg.a, cfg.b);
            cfg.k_norm * (a * p * p + b * q * q) / (a * a * p * p + b * b * q * q) / d.tau_rate
        };
        for i in 1..=20 {
            let tau = 0.37 * i as f64;
            let quad = cfg.psi0 + adaptive_simpson(rate, 0.0, tau, 1e-12);
            let closed = precession_free(tau, &d, &cfg).unwrap();
            assert!((quad - closed).abs() < 1e-8, "{tau}: {quad} vs {closed}");
        }
    }
}
