use criterion::{black_box, criterion_group, criterion_main, Criterion};

use ellflow::{rank3_eval, wp_zeros_physical, ComplexValue, Invariants, MediumParams, Rank3Config, Weierstrass, ZeroMethod};

fn wp_eval(c: &mut Criterion) {
    let w = Weierstrass::from_invariants(Invariants::new(4.0 / 3.0, 1.0)).unwrap();
    let z = ComplexValue::new(0.7, 0.3);
    c.bench_function("wp complex", |b| b.iter(|| w.eval(black_box(z)).unwrap()));
    c.bench_function("wp real axis", |b| b.iter(|| w.wp_real(black_box(1.1)).unwrap()));
}

fn zeros(c: &mut Criterion) {
    let inv = Invariants::new(4.0 / 3.0, 1.0);
    let mut g = c.benchmark_group("zeros");
    g.bench_function("continued formula", |b| {
        b.iter(|| wp_zeros_physical(black_box(inv), ZeroMethod::Continued).unwrap())
    });
    g.bench_function("newton", |b| b.iter(|| wp_zeros_physical(black_box(inv), ZeroMethod::Newton).unwrap()));
    g.finish();
}

fn rank3(c: &mut Criterion) {
    let med = MediumParams::from_kappa(5.0).unwrap();
    let cfg = Rank3Config::resolved_row1(med).unwrap();
    let x = [0.1, -0.2, -6.2];
    let mut g = c.benchmark_group("rank3_eval");
    for t in [0.0, 0.1, 0.25] {
        g.bench_function(format!("t={t}"), |b| b.iter(|| rank3_eval(&cfg, black_box(t), black_box(x)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, wp_eval, zeros, rank3);
criterion_main!(benches);
