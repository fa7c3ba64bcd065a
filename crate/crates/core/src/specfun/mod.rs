//! Real-argument special functions behind every closed form in the crate.
//!
//! Moduli are passed as `k` throughout; functions ending in `_m` take the
//! parameter `m = k^2` instead.

pub mod bessel;
pub mod carlson;
pub mod elliptic;
pub mod hypergeometric;
pub mod jacobi;

pub use bessel::{bessel_half, BesselHalfValue};
pub use elliptic::{
    ellip_f, ellip_f_m, ellip_k, ellip_k_m, ellip_pi, ellip_pi_complete_m, ellip_pi_excess_m, ellip_pi_m,
};
pub use hypergeometric::{
    appell_f1, hyp2f1, lauricella_fd, lauricella_fd_integral, lauricella_fd_series, HypergeometricSpec,
};
pub use jacobi::{jacobi_am_sn_cn_dn, jacobi_m, Jacobi};

/// Elliptic arguments bundled as in tables: amplitude, modulus, and an
/// optional third-kind parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticArgs {
    pub phi: f64,
    pub k: f64,
    pub n: Option<f64>,
}

impl EllipticArgs {
    /// `F(phi, k)` or `Pi(phi, n, k)` depending on whether `n` is set.
    pub fn eval(&self) -> crate::Result<f64> {
        match self.n {
            None => ellip_f(self.phi, self.k),
            Some(n) => ellip_pi(self.phi, n, self.k),
        }
    }
}
