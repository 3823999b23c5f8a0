use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use wiretap_core::specfun::{bessel_i_scaled, gamma_p, hyp1f1, marcum_q, Precision};

fn special_functions(c: &mut Criterion) {
    let p = Precision::default();
    let mut g = c.benchmark_group("specfun");
    for (m, a, b) in [(1u32, 1.0, 1.5), (3, 4.0, 6.0), (8, 30.0, 25.0)] {
        g.bench_function(format!("marcum_q({m}, {a}, {b})"), |bench| {
            bench.iter(|| marcum_q(black_box(m), black_box(a), black_box(b), &p).unwrap())
        });
    }
    g.bench_function("bessel_i_scaled(2, 40)", |bench| {
        bench.iter(|| bessel_i_scaled(black_box(2), black_box(40.0), &p).unwrap())
    });
    g.bench_function("gamma_p(5.5, 7)", |bench| bench.iter(|| gamma_p(black_box(5.5), black_box(7.0), &p).unwrap()));
    g.bench_function("hyp1f1(1, 4, 12)", |bench| {
        bench.iter(|| hyp1f1(black_box(1.0), black_box(4.0), black_box(12.0), &p).unwrap())
    });
    g.finish();
}

criterion_group!(benches, special_functions);
criterion_main!(benches);
