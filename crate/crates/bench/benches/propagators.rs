use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use noon_core::sideband::four_phonon_hamiltonian;
use noon_core::{
    build_noon8, closed_form_unitary, expm_oracle, run_sequence, Axis, Drive, Form, Level,
    Truncation,
};

fn propagators(c: &mut Criterion) {
    let trunc = Truncation::default();
    let h = four_phonon_hamiltonian(1.0, Axis::X, &trunc).unwrap();
    c.bench_function("closed_form_unitary n_max=12", |b| {
        b.iter(|| closed_form_unitary(black_box(1.0), black_box(0.7), &trunc, Axis::X).unwrap())
    });
    c.bench_function("expm_oracle n_max=12", |b| {
        b.iter(|| expm_oracle(black_box(&h), black_box(0.7)).unwrap())
    });
}

fn protocol(c: &mut Criterion) {
    let trunc = Truncation::default();
    for form in [Form::Closed, Form::Full] {
        let d = Drive {
            eta: 0.05,
            omega: 1.0e6,
            form,
        };
        let steps = build_noon8(d, d, 1000, Level::Ground);
        c.bench_function(&format!("noon8 protocol form={}", form.keyword()), |b| {
            b.iter(|| run_sequence(black_box(&steps), &trunc).unwrap())
        });
    }
}

criterion_group!(benches, propagators, protocol);
criterion_main!(benches);
