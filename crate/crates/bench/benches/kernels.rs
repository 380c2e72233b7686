use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use nvar_bench::points;
use nvar_core::builtins::{standard, Builtin};
use nvar_core::central::{central_for_points, is_pi, PiOptions};
use nvar_core::eval::{conjugate_test, Evaluator};
use nvar_core::invariants::fingerprint;
use nvar_core::nullstellensatz::ideal_of_points;

fn evaluation(c: &mut Criterion) {
    let formanek = Builtin::Formanek(3).polynomial().unwrap();
    let eval = Evaluator::new(&formanek);
    let a = points(1, 4, 3, 1).remove(0);
    c.bench_function("eval formanek(3) at an integer tuple", |b| b.iter(|| eval.eval(black_box(&a)).unwrap()));

    let friedland = Builtin::FriedlandC.polynomial().unwrap();
    let eval = Evaluator::new(&friedland);
    let pair = points(1, 2, 2, 2).remove(0);
    c.bench_function("eval friedland_c at a pair", |b| b.iter(|| eval.eval(black_box(&pair)).unwrap()));
}

fn identities(c: &mut Criterion) {
    let s4 = standard(4);
    c.bench_function("is_pi std(4) on M_2, exact", |b| {
        b.iter(|| is_pi(black_box(&s4), 2, &PiOptions::exact()).unwrap())
    });
    let s3 = standard(3);
    c.bench_function("is_pi std(3) on M_2, exact", |b| {
        b.iter(|| is_pi(black_box(&s3), 2, &PiOptions::exact()).unwrap())
    });
}

fn invariants(c: &mut Criterion) {
    let a = points(1, 2, 3, 3).remove(0);
    c.bench_function("fingerprint of a pair in M_3, length 9", |b| b.iter(|| fingerprint(black_box(&a), 9)));
    let g = points(1, 2, 3, 4).remove(0);
    c.bench_function("conjugate_test on M_3 pairs", |b| b.iter(|| conjugate_test(black_box(&a), &g).unwrap()));
}

fn interpolation(c: &mut Criterion) {
    let pts = points(3, 2, 2, 5);
    c.bench_function("central_for_points, three M_2 pairs", |b| {
        b.iter(|| central_for_points(black_box(&pts), 2, &PiOptions::exact()).unwrap())
    });
    c.bench_function("ideal_of_points, three M_2 pairs, degree 3", |b| {
        b.iter(|| ideal_of_points(2, 2, black_box(&pts), 3).unwrap())
    });
}

criterion_group!(benches, evaluation, identities, invariants, interpolation);
criterion_main!(benches);
