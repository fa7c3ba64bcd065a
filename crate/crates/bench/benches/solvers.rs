use std::hint::black_box;
use criterion::{criterion_group, criterion_main, Criterion};
use gyrokit_bench::{free_body, grid, heavy_top, viscous_top};
use gyrokit_core::herpolhode::{herpolhode_constants, trace_curve};
use gyrokit_core::lagrange::angles_of_t;
use gyrokit_core::oracle::{build_viscous_system, integrate};
use gyrokit_core::poinsot::{body_rates_free, derive_free, precession_free};
use gyrokit_core::viscous::{rates, viscous_trajectory};

fn closed_forms(c: &mut Criterion) {
    let top = heavy_top();
    c.bench_function("lagrange_angles", |b| b.iter(|| angles_of_t(black_box(3.7), &top)));

    let body = free_body();
    let d = derive_free(&body).unwrap();
    c.bench_function("poinsot_rates_and_precession", |b| {
        b.iter(|| (body_rates_free(black_box(2.1), &d), precession_free(black_box(2.1), &d, &body)))
    });

    let hc = herpolhode_constants(3.0, 2.0, 1.0, 1.5, 1.0).unwrap();
    c.bench_function("herpolhode_trace_8_legs", |b| b.iter(|| trace_curve(black_box(&hc), 65, 8)));

    let v = viscous_top();
    c.bench_function("viscous_rates", |b| b.iter(|| rates(black_box(4.2), &v)));
    let ts = grid(10.0, 200);
    c.bench_function("viscous_trajectory_200", |b| b.iter(|| viscous_trajectory(black_box(&ts), &v)));
}

fn oracle(c: &mut Criterion) {
    let v = viscous_top();
    let sys = build_viscous_system(v.a, v.c, v.mu);
    let y0 = [v.p0, v.q0, v.r0, v.gamma0[0], v.gamma0[1], v.gamma0[2]];
    let ts = grid(10.0, 200);
    c.bench_function("oracle_viscous_200", |b| b.iter(|| integrate(&sys, black_box(&y0), (0.0, 10.0), &ts, 1e-12, 1e-14)));
}

criterion_group!(benches, closed_forms, oracle);
criterion_main!(benches);
