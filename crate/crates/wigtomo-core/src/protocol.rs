//! The measurement protocol: displaced-oscillator dynamics, the
//! autocorrelation function, and the extraction of one Wigner value per
//! drive amplitude, plus a shot-based parity estimator standing in for the
//! physical probe.
//!
//! With `H = omega a^dag a + beta a^dag + beta* a` and `d = beta / omega`,
//! completing the square gives the exact operator identity
//!
//! ```text
//! H = omega D^dag(d) (a^dag a) D(d) - |beta|^2 / omega,
//! ```
//!
//! so the factored propagator `D^dag(d) e^{-i omega t n} D(d)` reproduces
//! `e^{-iHt}` only after multiplication by the dynamical phase
//! `e^{+i |beta|^2 t / omega}`. [`evolve_factored`] includes that phase;
//! [`evolve_factored_uncorrected`] omits it so the defect can be isolated.
//! The phase-corrected autocorrelation at `t = pi / omega` is the displaced
//! parity expectation `<psi| D^dag(d) P D(d) |psi>`, i.e. `(pi/2)` times the
//! Wigner function at `-d`: the measured phase-space point carries the sign
//! [`MEASURED_SIGN`], fixed once by [`calibrate_sign`] and frozen.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_pcg::Pcg64;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::fock::{
    annihilation_matrix, coherent_state, displacement_matrix, matrix_exponential, number_matrix,
    number_state, Operator, StateVector, Tolerances, TruncatedFockSpace,
};
use crate::quasiprob::wigner_parity;

/// Sign relating the drive to the measured phase-space point:
/// `alpha_measured = MEASURED_SIGN * beta / omega`.
///
/// Frozen from the one-time calibration in [`calibrate_sign`]: the corrected
/// autocorrelation at `t = pi/omega` equals the displaced-parity expectation
/// at `-beta/omega` (the factored propagator conjugates with `D(d)` in the
/// opposite order to the distribution's `D^dag(alpha) rho D(alpha)`), and
/// calibration against asymmetric states confirms the minus sign uniquely.
pub const MEASURED_SIGN: f64 = -1.0;

/// Frequency and complex drive of the displaced oscillator (hbar = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    omega: f64,
    beta: C64,
}

impl OscillatorParams {
    pub fn new(omega: f64, beta: C64) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::InvalidFrequency { omega });
        }
        if !beta.re.is_finite() || !beta.im.is_finite() {
            return Err(Error::NonFinitePhasePoint { alpha: beta });
        }
        Ok(OscillatorParams { omega, beta })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    /// The dimensionless displacement `beta / omega`.
    pub fn drive_displacement(&self) -> C64 {
        self.beta / self.omega
    }

    /// The dynamical phase exponent `|beta|^2 t / omega` at time `t`.
    fn dynamical_phase(&self, t: f64) -> f64 {
        self.beta.norm_sqr() * t / self.omega
    }
}

/// One autocorrelation sample: the raw overlap and its phase-corrected form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AutocorrelationSample {
    pub t: f64,
    /// `<psi(0)|psi(t)>`.
    pub value: C64,
    /// `e^{-i |beta|^2 t / omega} <psi(0)|psi(t)>`: the overlap with the
    /// dynamical phase removed, leaving the bare factored-propagator matrix
    /// element.
    pub phase_corrected: C64,
}

/// A finite-shot estimate of a parity expectation value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotEstimate {
    pub mean: f64,
    /// Sample standard deviation / sqrt(shots); zero for a single shot.
    pub stderr: f64,
    pub shots: u64,
    pub seed: u64,
}

/// One Wigner value extracted from the protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerPoint {
    /// The phase-space point actually measured, `MEASURED_SIGN * beta / omega`.
    pub alpha: C64,
    pub value: f64,
}

/// `H = omega a^dag a + beta a^dag + beta* a` on the truncated space.
pub fn hamiltonian(space: TruncatedFockSpace, params: &OscillatorParams) -> Result<Operator> {
    space.check_adequate(params.drive_displacement())?;
    let a = annihilation_matrix(space);
    let n = number_matrix(space);
    n.scale(C64::new(params.omega, 0.0))
        .add(&a.dagger().scale(params.beta))?
        .add(&a.scale(params.beta.conj()))
}

fn check_evolution_inputs(psi0: &StateVector, t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(Error::NonFinitePhasePoint {
            alpha: C64::new(t, 0.0),
        });
    }
    psi0.check_tail(Tolerances::default().tail_mass)
}

fn rewrap_unit(space: TruncatedFockSpace, amplitudes: ndarray::Array1<C64>) -> Result<StateVector> {
    let tol = Tolerances::default();
    let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > tol.unit_norm {
        return Err(Error::NormDrift {
            norm,
            tolerance: tol.unit_norm,
        });
    }
    StateVector::new(space, amplitudes)
}

/// `exp(-iHt) |psi0>` by direct matrix exponentiation of the Hamiltonian.
pub fn evolve_exact(psi0: &StateVector, params: &OscillatorParams, t: f64) -> Result<StateVector> {
    check_evolution_inputs(psi0, t)?;
    let h = hamiltonian(psi0.space(), params)?;
    let u = matrix_exponential(&h, C64::new(0.0, -t))?;
    rewrap_unit(psi0.space(), u.apply(psi0)?)
}

fn evolve_factored_inner(
    psi0: &StateVector,
    params: &OscillatorParams,
    t: f64,
    phase_corrected: bool,
) -> Result<StateVector> {
    check_evolution_inputs(psi0, t)?;
    let space = psi0.space();
    let d = params.drive_displacement();
    let disp = displacement_matrix(space, d)?;

    let mut v = disp.apply(psi0)?;
    let omega_t = params.omega * t;
    for (n, amp) in v.iter_mut().enumerate() {
        *amp *= C64::new(0.0, -omega_t * n as f64).exp();
    }
    let mut out = disp.dagger().matrix().dot(&v);
    if phase_corrected {
        let phase = C64::new(0.0, params.dynamical_phase(t)).exp();
        out.mapv_inplace(|z| z * phase);
    }
    rewrap_unit(space, out)
}

/// The factored evolution `e^{+i |beta|^2 t / omega} D^dag(d) e^{-i omega t n}
/// D(d) |psi0>`, which matches [`evolve_exact`] including the global phase.
pub fn evolve_factored(
    psi0: &StateVector,
    params: &OscillatorParams,
    t: f64,
) -> Result<StateVector> {
    evolve_factored_inner(psi0, params, t, true)
}

/// The bare factored form without the dynamical phase. Differs from
/// [`evolve_exact`] by exactly `|e^{i |beta|^2 t / omega} - 1|` in complex
/// distance; kept so the phase defect can be measured in isolation.
pub fn evolve_factored_uncorrected(
    psi0: &StateVector,
    params: &OscillatorParams,
    t: f64,
) -> Result<StateVector> {
    evolve_factored_inner(psi0, params, t, false)
}

/// The autocorrelation `A(t) = <psi(0)|psi(t)>` together with its
/// phase-corrected companion.
pub fn autocorrelation(
    psi0: &StateVector,
    params: &OscillatorParams,
    t: f64,
) -> Result<AutocorrelationSample> {
    let evolved = evolve_exact(psi0, params, t)?;
    let value = psi0.inner(&evolved)?;
    if value.norm() > 1.0 + 1e-10 {
        return Err(Error::NormDrift {
            norm: value.norm(),
            tolerance: 1e-10,
        });
    }
    let phase_corrected = C64::new(0.0, -params.dynamical_phase(t)).exp() * value;
    Ok(AutocorrelationSample {
        t,
        value,
        phase_corrected,
    })
}

/// One Wigner value from the protocol: evolve to `t = pi/omega`, correct the
/// dynamical phase, take `(2/pi)` times the real part.
///
/// The corrected autocorrelation at this time is an expectation of displaced
/// parity, a Hermitian operator, so its imaginary part must vanish; a residue
/// above tolerance is reported as an error (it signals a convention or
/// truncation fault, not a property of the state).
pub fn wigner_point(psi0: &StateVector, params: &OscillatorParams) -> Result<WignerPoint> {
    let t = PI / params.omega();
    let sample = autocorrelation(psi0, params, t)?;
    let corrected = sample.phase_corrected;
    let tol = Tolerances::default();
    if corrected.im.abs() > tol.imag_residue {
        return Err(Error::ImaginaryResidue {
            residue: corrected.im.abs(),
            tolerance: tol.imag_residue,
            alpha: params.drive_displacement(),
        });
    }
    Ok(WignerPoint {
        alpha: params.drive_displacement() * MEASURED_SIGN,
        value: (2.0 / PI) * corrected.re,
    })
}

/// Estimate the parity of the displaced state `D(beta/omega)|psi0>` by
/// sampling its photon-number distribution and averaging `(-1)^n`.
///
/// The sampler draws from the categorical distribution `p_n = |c_n|^2` with
/// an explicit seeded generator: identical seeds give bit-identical
/// estimates. The estimated mean is `(pi/2)` times the Wigner value at the
/// calibrated point.
pub fn parity_shot_estimate(
    psi0: &StateVector,
    params: &OscillatorParams,
    shots: u64,
    seed: u64,
) -> Result<ShotEstimate> {
    if shots == 0 {
        return Err(Error::NoShots);
    }
    let space = psi0.space();
    let disp = displacement_matrix(space, params.drive_displacement())?;
    let displaced = rewrap_unit(space, disp.apply(psi0)?)?;

    let tail = displaced.tail_mass();
    if tail > 1e-6 {
        return Err(Error::DegenerateDistribution { tail, limit: 1e-6 });
    }

    let mut cdf = Vec::with_capacity(space.dim());
    let mut acc = 0.0;
    for amp in displaced.amplitudes() {
        acc += amp.norm_sqr();
        cdf.push(acc);
    }

    let mut rng = Pcg64::seed_from_u64(seed);
    let mut sum = 0.0_f64;
    let mut sum_sq = 0.0_f64;
    for _ in 0..shots {
        let u: f64 = rng.random();
        let n = cdf.partition_point(|c| *c <= u).min(space.dim() - 1);
        let outcome = if n % 2 == 0 { 1.0 } else { -1.0 };
        sum += outcome;
        sum_sq += outcome * outcome;
    }
    let mean = sum / shots as f64;
    let stderr = if shots > 1 {
        let var = ((sum_sq - sum * sum / shots as f64) / (shots - 1) as f64).max(0.0);
        (var / shots as f64).sqrt()
    } else {
        0.0
    };
    Ok(ShotEstimate {
        mean,
        stderr,
        shots,
        seed,
    })
}

/// One row of calibration evidence.
#[derive(Debug, Clone)]
pub struct SignEvidence {
    pub state: String,
    pub beta: C64,
    /// `(2/pi) Re` of the corrected autocorrelation at `t = pi/omega`.
    pub protocol_value: f64,
    /// Direct displaced-parity Wigner value at `+beta/omega`.
    pub wigner_plus: f64,
    /// Direct displaced-parity Wigner value at `-beta/omega`.
    pub wigner_minus: f64,
    pub matches_plus: bool,
    pub matches_minus: bool,
}

/// Outcome of the sign calibration.
#[derive(Debug, Clone)]
pub struct SignCalibration {
    pub sign: f64,
    pub evidence: Vec<SignEvidence>,
}

/// Determine the sign relating drive to measured point by comparing the
/// protocol value against the direct Wigner computation at `+-beta/omega`.
///
/// The probe set deliberately contains asymmetric states (coherent states
/// away from the origin), for which `W(alpha) != W(-alpha)` and exactly one
/// sign can match; symmetric states are included only as consistency checks.
/// All decisive probes must agree, otherwise calibration fails.
pub fn calibrate_sign(space: TruncatedFockSpace) -> Result<SignCalibration> {
    const MATCH_TOL: f64 = 1e-8;
    let omega = 1.0;

    let probes: Vec<(String, StateVector, C64)> = vec![
        (
            "coherent(0.5)".into(),
            coherent_state(space, C64::new(0.5, 0.0))?,
            C64::new(0.5, 0.0),
        ),
        (
            "coherent(0.5)".into(),
            coherent_state(space, C64::new(0.5, 0.0))?,
            C64::new(0.3, 0.2),
        ),
        (
            "coherent(0.3)".into(),
            coherent_state(space, C64::new(0.3, 0.0))?,
            C64::new(0.5, 0.0),
        ),
        (
            "fock(1)".into(),
            number_state(space, 1)?,
            C64::new(0.4, 0.0),
        ),
    ];

    let mut evidence = Vec::new();
    let mut decided: Option<f64> = None;
    for (label, psi, beta) in probes {
        let params = OscillatorParams::new(omega, beta)?;
        let t = PI / omega;
        let sample = autocorrelation(&psi, &params, t)?;
        let protocol_value = (2.0 / PI) * sample.phase_corrected.re;
        let rho = psi.to_density_matrix();
        let d = params.drive_displacement();
        let wigner_plus = wigner_parity(&rho, d)?;
        let wigner_minus = wigner_parity(&rho, -d)?;
        let matches_plus = (protocol_value - wigner_plus).abs() <= MATCH_TOL;
        let matches_minus = (protocol_value - wigner_minus).abs() <= MATCH_TOL;

        if !matches_plus && !matches_minus {
            return Err(Error::CalibrationFailed {
                reason: format!(
                    "{label} at beta = {beta}: protocol value {protocol_value} matches neither \
                     W(+d) = {wigner_plus} nor W(-d) = {wigner_minus}"
                ),
            });
        }
        if matches_plus != matches_minus {
            let sign = if matches_plus { 1.0 } else { -1.0 };
            match decided {
                None => decided = Some(sign),
                Some(prev) if prev != sign => {
                    return Err(Error::CalibrationFailed {
                        reason: format!(
                            "{label} at beta = {beta} implies sign {sign}, conflicting with {prev}"
                        ),
                    });
                }
                _ => {}
            }
        }
        evidence.push(SignEvidence {
            state: label,
            beta,
            protocol_value,
            wigner_plus,
            wigner_minus,
            matches_plus,
            matches_minus,
        });
    }

    let sign = decided.ok_or_else(|| Error::CalibrationFailed {
        reason: "no decisive probe: every state matched both signs".into(),
    })?;
    Ok(SignCalibration { sign, evidence })
}
