//! Shared fixtures for the benchmark suite.

use num_complex::Complex64 as C64;
use wigtomo_core::fock::{coherent_state, number_state, StateVector, TruncatedFockSpace};

pub const BENCH_DIM: usize = 64;

pub fn bench_space() -> TruncatedFockSpace {
    TruncatedFockSpace::new(BENCH_DIM).unwrap()
}

pub fn bench_fock(n: usize) -> StateVector {
    number_state(bench_space(), n).unwrap()
}

pub fn bench_coherent() -> StateVector {
    coherent_state(bench_space(), C64::new(0.6, -0.3)).unwrap()
}
