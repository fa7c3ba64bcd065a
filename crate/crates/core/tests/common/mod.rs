//! Reference computations used only by the tests. None of them call into
//! the library's special functions or quadrature.
#![allow(dead_code)]

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Composite 20-point Gauss-Legendre over `panels` equal pieces.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let nodes = gauss_legendre(20);
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for j in 0..panels {
        let mid = a + (j as f64 + 0.5) * h;
        for (x, w) in &nodes {
            sum += w * f(mid + 0.5 * h * x);
        }
    }
    0.5 * h * sum
}

/// `int_0^phi dt / ((1 - n sin^2 t) sqrt(1 - k^2 sin^2 t))`.
pub fn legendre_third(phi: f64, n: f64, k: f64) -> f64 {
    integrate(
        |t| {
            let s2 = t.sin().powi(2);
            1.0 / ((1.0 - n * s2) * (1.0 - k * k * s2).sqrt())
        },
        0.0,
        phi,
        64,
    )
}

/// `(a)_k / (c)_k`, accumulated as a ratio so it cannot overflow.
fn pochhammer_ratio(a: f64, c: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a + i as f64) / (c + i as f64))
}

/// Truncated multiple series of `F_D^{(n)}` with `terms` per index.
pub fn lauricella_series(a: f64, b: &[f64], c: f64, x: &[f64], terms: usize) -> f64 {
    fn rec(a: f64, b: &[f64], c: f64, x: &[f64], terms: usize, depth: usize, total: usize, coef: f64) -> f64 {
        if depth == b.len() {
            return coef * pochhammer_ratio(a, c, total);
        }
        let mut sum = 0.0;
        let mut term = coef;
        for m in 0..terms {
            if m > 0 {
                term *= (b[depth] + (m - 1) as f64) * x[depth] / m as f64;
            }
            if term == 0.0 {
                break;
            }
            sum += rec(a, b, c, x, terms, depth + 1, total + m, term);
        }
        sum
    }
    rec(a, b, c, x, terms, 0, 0, 1.0)
}

/// `J_{-1/2}` and `J_{1/2}` (which equals `Y_{-1/2}`) by ascending series.
pub fn bessel_half_series(x: f64) -> (f64, f64) {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let series = |nu: f64, g0: f64| {
        // g0 = Gamma(nu + 1)
        let mut gamma = g0;
        let mut sum = 0.0;
        let mut fact = 1.0;
        for k in 0..60 {
            if k > 0 {
                fact *= k as f64;
                gamma *= nu + k as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * (x / 2.0).powf(2.0 * k as f64 + nu) / (fact * gamma);
        }
        sum
    };
    (series(-0.5, sqrt_pi), series(0.5, 0.5 * sqrt_pi))
}
