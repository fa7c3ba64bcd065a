//! Small fixed-size linear algebra and the z-x-z Euler rotation.
//!
//! `R = Rz(psi) Rx(theta) Rz(phi)` maps body coordinates to space
//! coordinates. Its third row holds the cosines `gamma_i` of the space
//! vertical in the body frame and its third column the figure axis in space.

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn mat_vec(m: &Mat3, v: &Vec3) -> Vec3 {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

pub fn transpose(m: &Mat3) -> Mat3 {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn det(m: &Mat3) -> f64 {
    dot(&m[0], &cross(&m[1], &m[2]))
}

/// Direction-cosine matrix from nutation `theta`, precession `psi`, spin `phi`.
pub fn rotation_matrix(theta: f64, psi: f64, phi: f64) -> Mat3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = psi.sin_cos();
    let (sf, cf) = phi.sin_cos();
    [
        [cp * cf - sp * sf * ct, -cp * sf - sp * cf * ct, st * sp],
        [sp * cf + cp * sf * ct, -sp * sf + cp * cf * ct, -st * cp],
        [st * sf, st * cf, ct],
    ]
}

/// Inverse of [`rotation_matrix`] on the principal branch,
/// `theta` in [0, pi] and `psi`, `phi` in (-pi, pi].
pub fn euler_from_matrix(m: &Mat3) -> (f64, f64, f64) {
    let theta = m[2][2].clamp(-1.0, 1.0).acos();
    let psi = m[0][2].atan2(-m[1][2]);
    let phi = m[2][0].atan2(m[2][1]);
    (theta, psi, phi)
}

/// Shifts `angle` by a multiple of 2 pi so it lands closest to `reference`.
pub fn unwrap_near(angle: f64, reference: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    angle + tau * ((reference - angle) / tau).round()
}
