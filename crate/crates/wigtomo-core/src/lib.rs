//! Numerical engine for phase-space quasiprobability distributions of a
//! truncated harmonic oscillator.
//!
//! The crate computes the s-parametrized family F(alpha, s) — Husimi Q at
//! s = -1, Wigner W at s = 0 — for states of a truncated Fock space, and
//! simulates a measurement protocol in which a displaced-oscillator
//! evolution is run to half a period and the phase-corrected autocorrelation
//! yields one Wigner value per drive amplitude. Sweeping the drive over a
//! grid reconstructs full Wigner maps, exactly or with simulated shot noise.
//!
//! Modules:
//! - [`fock`]: truncated Fock space, states, ladder/parity/displacement
//!   operators, matrix exponential
//! - [`quasiprob`]: F(alpha, s) in series/trace/pure-state forms, grids
//! - [`protocol`]: displaced-oscillator evolution, autocorrelation, one-point
//!   Wigner extraction, shot-based parity estimation
//! - [`campaign`]: grid-sweep reconstruction and error reporting

pub mod campaign;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod protocol;
pub mod quasiprob;

pub use error::{Error, Result};
pub use fock::{
    DensityMatrix, Operator, PhasePoint, StateVector, Tolerances, TruncatedFockSpace,
};
pub use protocol::{AutocorrelationSample, OscillatorParams, ShotEstimate, WignerPoint};
pub use quasiprob::{GridSpec, MapMetadata, QuasiDistributionMap, SParameter, State};
pub use campaign::{CampaignMode, CampaignPlan, ReconstructionReport};
