use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use laurent_bench::{quadratic_component, somos4_term};

fn arithmetic(c: &mut Criterion) {
    let a = somos4_term(11);
    let b = somos4_term(10);
    let product = &a * &b;
    let q = quadratic_component(&[2, 1, 3]);
    let q2 = &q * &q;

    let mut g = c.benchmark_group("arithmetic");
    g.bench_function("mul somos4 y11*y10", |bch| bch.iter(|| black_box(&a) * black_box(&b)));
    g.bench_function("div somos4 y11*y10 / y10", |bch| bch.iter(|| black_box(&product).exact_div(black_box(&b)).unwrap()));
    g.bench_function("square quadratic <2,1,3>", |bch| bch.iter(|| black_box(&q) * black_box(&q)));
    g.bench_function("div quadratic square", |bch| bch.iter(|| black_box(&q2).exact_div(black_box(&q)).unwrap()));
    g.bench_function("content split somos4 y11", |bch| bch.iter(|| black_box(&a).content_split().unwrap()));
    g.finish();
}

criterion_group!(benches, arithmetic);
criterion_main!(benches);
