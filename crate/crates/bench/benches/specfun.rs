use std::hint::black_box;
use criterion::{criterion_group, criterion_main, Criterion};
use gyrokit_core::specfun::{ellip_f, ellip_pi, jacobi_am_sn_cn_dn, lauricella_fd_integral, lauricella_fd_series, HypergeometricSpec};

fn elliptic(c: &mut Criterion) {
    c.bench_function("ellip_f", |b| b.iter(|| ellip_f(black_box(1.1), black_box(0.7))));
    c.bench_function("ellip_pi", |b| b.iter(|| ellip_pi(black_box(1.1), black_box(0.3), black_box(0.7))));
    c.bench_function("jacobi_am_sn_cn_dn", |b| b.iter(|| jacobi_am_sn_cn_dn(black_box(2.3), black_box(0.7))));
}

fn lauricella(c: &mut Criterion) {
    let spec = HypergeometricSpec::new(0.5, &[0.5, -0.5, 0.5], 1.5, &[0.3, -0.2, 0.4]);
    c.bench_function("lauricella_series", |b| b.iter(|| lauricella_fd_series(black_box(&spec))));
    c.bench_function("lauricella_integral", |b| b.iter(|| lauricella_fd_integral(black_box(&spec))));
}

criterion_group!(benches, elliptic, lauricella);
criterion_main!(benches);
