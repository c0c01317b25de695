use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use num_complex::Complex64 as C64;
use std::hint::black_box;

use wigtomo_bench::{bench_coherent, bench_fock, bench_space};
use wigtomo_core::campaign::{reconstruct, CampaignMode, CampaignPlan};
use wigtomo_core::fock::displacement_matrix;
use wigtomo_core::protocol::{parity_shot_estimate, wigner_point, OscillatorParams};
use wigtomo_core::quasiprob::{evaluate_grid, wigner_parity, GridSpec, SParameter, State};

fn bench_displacement(c: &mut Criterion) {
    let sp = bench_space();
    let alpha = C64::new(0.8, -0.5);
    c.bench_function("displacement_matrix_dim64", |b| {
        b.iter(|| displacement_matrix(sp, black_box(alpha)).unwrap())
    });
}

fn bench_wigner_point_direct(c: &mut Criterion) {
    let rho = bench_coherent().to_density_matrix();
    let alpha = C64::new(0.4, 0.7);
    c.bench_function("wigner_parity_point_dim64", |b| {
        b.iter(|| wigner_parity(black_box(&rho), black_box(alpha)).unwrap())
    });
}

fn bench_wigner_point_protocol(c: &mut Criterion) {
    let psi = bench_fock(2);
    let params = OscillatorParams::new(1.0, C64::new(-0.4, 0.6)).unwrap();
    c.bench_function("wigner_point_protocol_dim64", |b| {
        b.iter(|| wigner_point(black_box(&psi), black_box(&params)).unwrap())
    });
}

fn bench_grid(c: &mut Criterion) {
    let state = State::Pure(bench_coherent());
    let grid = GridSpec::centered_square(1.5, 9).unwrap();
    c.bench_function("wigner_grid_9x9_dim64", |b| {
        b.iter(|| evaluate_grid(black_box(&state), SParameter::wigner(), &grid).unwrap())
    });
}

fn bench_shot_estimator(c: &mut Criterion) {
    let psi = bench_fock(0);
    let params = OscillatorParams::new(1.0, C64::new(1.0, 0.0)).unwrap();
    c.bench_function("parity_shots_1e4_dim64", |b| {
        b.iter(|| parity_shot_estimate(black_box(&psi), &params, 10_000, 42).unwrap())
    });
}

fn bench_reconstruct(c: &mut Criterion) {
    let psi = bench_fock(1);
    let plan = CampaignPlan {
        grid: GridSpec::centered_square(1.0, 5).unwrap(),
        omega: 1.0,
        state_label: "fock:1".into(),
        mode: CampaignMode::Exact,
        base_seed: 0,
    };
    c.bench_function("reconstruct_5x5_exact_dim64", |b| {
        b.iter_batched(
            || plan.clone(),
            |plan| reconstruct(&plan, black_box(&psi)).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_displacement,
        bench_wigner_point_direct,
        bench_wigner_point_protocol,
        bench_grid,
        bench_shot_estimator,
        bench_reconstruct
);
criterion_main!(benches);
