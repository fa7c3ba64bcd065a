//! Shared fixtures for the criterion benchmarks.

use gyrokit_core::lagrange::SymmetricTopConfig;
use gyrokit_core::poinsot::FreeBodyConfig;
use gyrokit_core::viscous::ViscousConfig;

pub fn heavy_top() -> SymmetricTopConfig {
    SymmetricTopConfig::from_initial_rates(2.0, 1.0, 1.0, 9.81, 0.1, 0.8, 0.0, 0.0, [0.0, 0.3, 6.0])
}

pub fn free_body() -> FreeBodyConfig {
    FreeBodyConfig::from_initial_rates(1.0, 2.0, 3.0, 1.0, 0.8, 0.2)
}

pub fn viscous_top() -> ViscousConfig {
    ViscousConfig { a: 2.0, c: 1.0, mu: 0.2, p0: 0.7, q0: -0.4, r0: 5.0, gamma0: [0.0, 0.6, 0.8], psi0: 0.0 }
}

/// `n` points spread evenly over `(0, t_end]`.
pub fn grid(t_end: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| t_end * i as f64 / n as f64).collect()
}
