//! The s-parametrized quasiprobability family F(alpha, s) in its three
//! equivalent forms (displaced-number series, trace form, pure-state
//! expectation), with Husimi (s = -1) and Wigner (s = 0) as distinguished
//! cases, evaluated at single points or over phase-space grids.
//!
//! All forms share the prefactor `2 / (pi (1 - s))` and the series ratio
//! `(s + 1) / (s - 1)`, with the convention `0^0 = 1` so the s = -1 case
//! collapses to the single surviving k = 0 term. The Glauber-Sudarshan point
//! s = 1 is singular and rejected outright. Values are real for Hermitian
//! input; the imaginary residue is checked against a tolerance before being
//! dropped.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{
    coherent_state, displacement_matrix, parity_matrix, DensityMatrix, StateVector, Tolerances,
    TruncatedFockSpace,
};

/// The order parameter of the distribution family.
///
/// `s = -1` is Husimi Q, `s = 0` is Wigner. Values in `(0, 1)` are accepted
/// but flagged: the series ratio exceeds 1 in magnitude there, so the
/// truncated sum is finite but not a controlled approximation. `s >= 1` is
/// rejected (singular).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SParameter(f64);

impl SParameter {
    pub fn new(s: f64) -> Result<Self> {
        if !s.is_finite() || s >= 1.0 {
            return Err(Error::SingularSParameter { s });
        }
        Ok(SParameter(s))
    }

    pub fn husimi() -> Self {
        SParameter(-1.0)
    }

    pub fn wigner() -> Self {
        SParameter(0.0)
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    /// The series ratio `(s + 1) / (s - 1)`.
    pub fn series_ratio(&self) -> f64 {
        (self.0 + 1.0) / (self.0 - 1.0)
    }

    /// Prefactor `2 / (pi (1 - s))`.
    pub fn prefactor(&self) -> f64 {
        2.0 / (PI * (1.0 - self.0))
    }

    /// `true` outside the controlled accuracy regime `[-1, 0]`.
    pub fn is_uncontrolled(&self) -> bool {
        self.0 > 0.0 || self.0 < -1.0
    }
}

/// `ratio^k` with the convention `0^0 = 1` (s = -1, k = 0).
fn ratio_power(ratio: f64, k: usize) -> f64 {
    if k == 0 {
        1.0
    } else {
        ratio.powi(k as i32)
    }
}

/// A rectangular phase-space lattice, endpoints inclusive.
///
/// Storage convention is row-major with Re(alpha) varying fastest and
/// Im(alpha) increasing by row, so an exported value matrix renders as a
/// conventional heatmap without transposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub re_count: usize,
    pub im_min: f64,
    pub im_max: f64,
    pub im_count: usize,
}

impl GridSpec {
    pub fn new(
        re_min: f64,
        re_max: f64,
        re_count: usize,
        im_min: f64,
        im_max: f64,
        im_count: usize,
    ) -> Result<Self> {
        if ![re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidGrid {
                reason: "bounds must be finite".into(),
            });
        }
        if re_count < 1 || im_count < 1 {
            return Err(Error::InvalidGrid {
                reason: format!("counts must be >= 1, got {re_count} x {im_count}"),
            });
        }
        if re_max < re_min || im_max < im_min {
            return Err(Error::InvalidGrid {
                reason: "max must be >= min on both axes".into(),
            });
        }
        Ok(GridSpec {
            re_min,
            re_max,
            re_count,
            im_min,
            im_max,
            im_count,
        })
    }

    /// Square grid over `[-half_side, half_side]^2` with `count` points per axis.
    pub fn centered_square(half_side: f64, count: usize) -> Result<Self> {
        GridSpec::new(-half_side, half_side, count, -half_side, half_side, count)
    }

    pub fn len(&self) -> usize {
        self.re_count * self.im_count
    }

    pub fn is_empty(&self) -> bool {
        self.re_count == 0 || self.im_count == 0
    }

    pub fn re_step(&self) -> f64 {
        if self.re_count > 1 {
            (self.re_max - self.re_min) / (self.re_count - 1) as f64
        } else {
            0.0
        }
    }

    pub fn im_step(&self) -> f64 {
        if self.im_count > 1 {
            (self.im_max - self.im_min) / (self.im_count - 1) as f64
        } else {
            0.0
        }
    }

    /// Point at flat row-major index (row = im, column = re).
    pub fn point(&self, index: usize) -> C64 {
        debug_assert!(index < self.len());
        let row = index / self.re_count;
        let col = index % self.re_count;
        C64::new(
            self.re_min + col as f64 * self.re_step(),
            self.im_min + row as f64 * self.im_step(),
        )
    }

    pub fn points(&self) -> impl Iterator<Item = C64> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    /// Corner with the largest modulus (where truncation demand peaks).
    pub fn worst_corner(&self) -> C64 {
        let corners = [
            C64::new(self.re_min, self.im_min),
            C64::new(self.re_min, self.im_max),
            C64::new(self.re_max, self.im_min),
            C64::new(self.re_max, self.im_max),
        ];
        corners
            .into_iter()
            .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
            .unwrap()
    }

    pub(crate) fn check_adequate(&self, space: TruncatedFockSpace) -> Result<()> {
        let corner = self.worst_corner();
        let required = TruncatedFockSpace::required_dim(corner.norm());
        if space.dim() < required {
            return Err(Error::GridCornerInadequate {
                corner,
                required,
                dim: space.dim(),
            });
        }
        Ok(())
    }
}

/// Evaluation metadata carried by a [`QuasiDistributionMap`].
#[derive(Debug, Clone, PartialEq)]
pub struct MapMetadata {
    /// Fock dimension used for the evaluation.
    pub dim: usize,
    /// Human-readable description of the evaluated state.
    pub state: String,
    /// Set when s lies outside the controlled regime `[-1, 0]`.
    pub uncontrolled_s: bool,
    /// Largest imaginary residue dropped across the grid.
    pub max_imag_residue: f64,
}

/// Phase-space grid of F(alpha, s) samples.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiDistributionMap {
    pub s: f64,
    pub grid: GridSpec,
    /// Row-major values, Re(alpha) fastest.
    pub values: Vec<f64>,
    pub meta: MapMetadata,
}

impl QuasiDistributionMap {
    pub fn value_at(&self, im_row: usize, re_col: usize) -> f64 {
        self.values[im_row * self.grid.re_count + re_col]
    }

    /// Riemann sum of the map times the cell area. For the Wigner case this
    /// approximates the total probability when the window holds the state.
    pub fn quadrature(&self) -> f64 {
        let cell = self.grid.re_step() * self.grid.im_step();
        self.values.iter().sum::<f64>() * cell
    }
}

/// The state under evaluation: pure vector or density matrix.
#[derive(Debug, Clone)]
pub enum State {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl State {
    pub fn space(&self) -> TruncatedFockSpace {
        match self {
            State::Pure(psi) => psi.space(),
            State::Mixed(rho) => rho.space(),
        }
    }

    fn descriptor(&self) -> &'static str {
        match self {
            State::Pure(_) => "pure",
            State::Mixed(_) => "mixed",
        }
    }
}

impl From<StateVector> for State {
    fn from(psi: StateVector) -> Self {
        State::Pure(psi)
    }
}

impl From<DensityMatrix> for State {
    fn from(rho: DensityMatrix) -> Self {
        State::Mixed(rho)
    }
}

fn check_hermitian(rho: &DensityMatrix, tol: &Tolerances) -> Result<()> {
    let defect = rho.hermiticity_defect();
    if defect > tol.hermiticity {
        return Err(Error::NotHermitian {
            defect,
            tolerance: tol.hermiticity,
        });
    }
    Ok(())
}

fn real_part_checked(value: C64, alpha: C64, tol: &Tolerances) -> Result<(f64, f64)> {
    let residue = value.im.abs();
    if residue > tol.imag_residue {
        return Err(Error::ImaginaryResidue {
            residue,
            tolerance: tol.imag_residue,
            alpha,
        });
    }
    Ok((value.re, residue))
}

/// F(alpha, s) from the displaced-number series, truncated at `k_max` terms:
/// the k-th term is the population of the displaced number state |alpha, k>.
pub fn series_form(
    rho: &DensityMatrix,
    alpha: C64,
    s: SParameter,
    k_max: usize,
) -> Result<f64> {
    series_form_impl(rho, alpha, s, k_max).map(|(v, _)| v)
}

fn series_form_impl(
    rho: &DensityMatrix,
    alpha: C64,
    s: SParameter,
    k_max: usize,
) -> Result<(f64, f64)> {
    let tol = Tolerances::default();
    let dim = rho.space().dim();
    if k_max < 1 || k_max > dim {
        return Err(Error::InvalidSeriesLength { k_max, dim });
    }
    check_hermitian(rho, &tol)?;
    let d = displacement_matrix(rho.space(), alpha)?;
    let ratio = s.series_ratio();
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..k_max {
        let weight = ratio_power(ratio, k);
        if weight == 0.0 {
            continue;
        }
        let col = d.matrix().column(k);
        // <alpha,k| rho |alpha,k>
        let rho_col = rho.elements().dot(&col);
        let term: C64 = col
            .iter()
            .zip(rho_col.iter())
            .map(|(c, x)| c.conj() * x)
            .sum();
        acc += C64::new(weight, 0.0) * term;
    }
    real_part_checked(acc * s.prefactor(), alpha, &tol)
}

/// F(alpha, s) from the trace form: the diagonal weight `ratio^n` applied to
/// the fully conjugated matrix `D^dag rho D`. Algebraically identical to
/// [`series_form`] with `k_max = dim`; the routes share no intermediate code.
pub fn trace_form(rho: &DensityMatrix, alpha: C64, s: SParameter) -> Result<f64> {
    trace_form_impl(rho, alpha, s).map(|(v, _)| v)
}

fn trace_form_impl(rho: &DensityMatrix, alpha: C64, s: SParameter) -> Result<(f64, f64)> {
    let tol = Tolerances::default();
    check_hermitian(rho, &tol)?;
    let d = displacement_matrix(rho.space(), alpha)?;
    let conjugated = d.dagger().matrix().dot(rho.elements()).dot(d.matrix());
    let ratio = s.series_ratio();
    let mut acc = C64::new(0.0, 0.0);
    for n in 0..rho.space().dim() {
        let weight = ratio_power(ratio, n);
        if weight == 0.0 {
            continue;
        }
        acc += C64::new(weight, 0.0) * conjugated[[n, n]];
    }
    real_part_checked(acc * s.prefactor(), alpha, &tol)
}

/// F(alpha, s) for a pure state: expectation of the displaced diagonal weight,
/// `(2 / pi(1-s)) <psi| D(alpha) ratio^{a^dag a} D^dag(alpha) |psi>`.
///
/// By cyclicity of the trace this is definitionally equal to
/// [`trace_form`] on `|psi><psi|` at the same `alpha`; the equality is
/// enforced by tests, not assumed here.
pub fn pure_state_form(psi: &StateVector, alpha: C64, s: SParameter) -> Result<f64> {
    let d = displacement_matrix(psi.space(), alpha)?;
    // w = D^dag |psi>; the quadratic form is then sum_n ratio^n |w_n|^2,
    // manifestly real.
    let w = d.dagger().apply(psi)?;
    let ratio = s.series_ratio();
    let mut acc = 0.0;
    for (n, amp) in w.iter().enumerate() {
        let weight = ratio_power(ratio, n);
        if weight == 0.0 {
            continue;
        }
        acc += weight * amp.norm_sqr();
    }
    Ok(acc * s.prefactor())
}

/// Husimi Q(alpha) = <alpha| rho |alpha> / pi, straight from the coherent
/// overlap (no displacement matrix involved).
pub fn husimi_q(rho: &DensityMatrix, alpha: C64) -> Result<f64> {
    husimi_q_impl(rho, alpha).map(|(v, _)| v)
}

fn husimi_q_impl(rho: &DensityMatrix, alpha: C64) -> Result<(f64, f64)> {
    let tol = Tolerances::default();
    let coh = coherent_state(rho.space(), alpha)?;
    let rho_c = rho.elements().dot(coh.amplitudes());
    let overlap: C64 = coh
        .amplitudes()
        .iter()
        .zip(rho_c.iter())
        .map(|(c, x)| c.conj() * x)
        .sum();
    let (value, residue) = real_part_checked(overlap / PI, alpha, &tol)?;
    // Q is a genuine probability density; a clearly negative value witnesses
    // a spectral violation of the input.
    if value < -1e-12 {
        return Err(Error::NotPositiveSemidefinite {
            min_eigenvalue: value * PI,
        });
    }
    Ok((value, residue))
}

/// Wigner W(alpha) = (2/pi) Tr[D(alpha) P D^dag(alpha) rho]: the displaced
/// parity expectation.
pub fn wigner_parity(rho: &DensityMatrix, alpha: C64) -> Result<f64> {
    wigner_parity_impl(rho, alpha).map(|(v, _)| v)
}

fn wigner_parity_impl(rho: &DensityMatrix, alpha: C64) -> Result<(f64, f64)> {
    let tol = Tolerances::default();
    let d = displacement_matrix(rho.space(), alpha)?;
    let p = parity_matrix(rho.space());
    let displaced_parity = d.matrix().dot(p.matrix()).dot(d.dagger().matrix());
    let mut tr = C64::new(0.0, 0.0);
    let dim = rho.space().dim();
    for i in 0..dim {
        for j in 0..dim {
            tr += displaced_parity[[i, j]] * rho.elements()[[j, i]];
        }
    }
    real_part_checked(tr * (2.0 / PI), alpha, &tol)
}

/// Husimi value of a pure state: `|<alpha|psi>|^2 / pi`.
fn husimi_pure(psi: &StateVector, alpha: C64) -> Result<f64> {
    let coh = coherent_state(psi.space(), alpha)?;
    Ok(coh.inner(psi)?.norm_sqr() / PI)
}

/// Evaluate F(alpha, s) over a grid.
///
/// Points are independent work items evaluated in parallel; the assembled
/// map is identical to sequential evaluation. Husimi and Wigner use their
/// dedicated forms; other s values go through [`trace_form`] (mixed) or
/// [`pure_state_form`] (pure).
pub fn evaluate_grid(state: &State, s: SParameter, grid: &GridSpec) -> Result<QuasiDistributionMap> {
    grid.check_adequate(state.space())?;

    let results: Vec<(f64, f64)> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let alpha = grid.point(i);
            match state {
                State::Pure(psi) => {
                    if s.value() == -1.0 {
                        husimi_pure(psi, alpha).map(|v| (v, 0.0))
                    } else {
                        pure_state_form(psi, alpha, s).map(|v| (v, 0.0))
                    }
                }
                State::Mixed(rho) => {
                    if s.value() == -1.0 {
                        husimi_q_impl(rho, alpha)
                    } else if s.value() == 0.0 {
                        wigner_parity_impl(rho, alpha)
                    } else {
                        trace_form_impl(rho, alpha, s)
                    }
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let max_imag_residue = results.iter().map(|(_, r)| *r).fold(0.0, f64::max);
    let values: Vec<f64> = results.into_iter().map(|(v, _)| v).collect();

    Ok(QuasiDistributionMap {
        s: s.value(),
        grid: *grid,
        values,
        meta: MapMetadata {
            dim: state.space().dim(),
            state: state.descriptor().to_string(),
            uncontrolled_s: s.is_uncontrolled(),
            max_imag_residue,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{number_state, TruncatedFockSpace};

    fn space(dim: usize) -> TruncatedFockSpace {
        TruncatedFockSpace::new(dim).unwrap()
    }

    fn vacuum_rho(dim: usize) -> DensityMatrix {
        number_state(space(dim), 0).unwrap().to_density_matrix()
    }

    /// Ordinary Laguerre polynomial by explicit series; independent of the
    /// library's recurrences.
    fn laguerre(n: usize, x: f64) -> f64 {
        // L_n(x) = sum_k C(n, k) (-x)^k / k!
        let mut sum = 0.0;
        let mut binom = 1.0; // C(n, 0)
        let mut pow = 1.0; // (-x)^0 / 0!
        for k in 0..=n {
            sum += binom * pow;
            binom *= (n - k) as f64 / (k + 1) as f64;
            pow *= -x / (k + 1) as f64;
        }
        sum
    }

    /// Closed-form Wigner value of a number state.
    fn wigner_number_state(n: usize, alpha: C64) -> f64 {
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        (2.0 / PI) * sign * (-2.0 * alpha.norm_sqr()).exp() * laguerre(n, 4.0 * alpha.norm_sqr())
    }

    #[test]
    fn s_parameter_rejects_singular_values() {
        assert!(matches!(
            SParameter::new(1.0),
            Err(Error::SingularSParameter { .. })
        ));
        assert!(matches!(
            SParameter::new(1.5),
            Err(Error::SingularSParameter { .. })
        ));
        assert!(SParameter::new(0.5).unwrap().is_uncontrolled());
        assert!(!SParameter::new(-0.5).unwrap().is_uncontrolled());
    }

    #[test]
    fn vacuum_husimi_at_origin() {
        let rho = vacuum_rho(16);
        let q = series_form(&rho, C64::new(0.0, 0.0), SParameter::husimi(), 1).unwrap();
        assert!((q - 1.0 / PI).abs() < 1e-14);
        let q2 = husimi_q(&rho, C64::new(0.0, 0.0)).unwrap();
        assert!((q2 - 1.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn vacuum_wigner_at_origin() {
        let rho = vacuum_rho(16);
        let w = series_form(&rho, C64::new(0.0, 0.0), SParameter::wigner(), 16).unwrap();
        assert!((w - 2.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn fock_one_wigner_node_at_half() {
        // L_1(4 |alpha|^2) = 0 at |alpha|^2 = 1/4: a radial node.
        let sp = space(64);
        let rho = number_state(sp, 1).unwrap().to_density_matrix();
        let w = series_form(&rho, C64::new(0.5, 0.0), SParameter::wigner(), 64).unwrap();
        assert!(w.abs() < 1e-10, "expected node, got {w}");
        let oracle = wigner_number_state(1, C64::new(0.5, 0.0));
        assert!(oracle.abs() < 1e-15);
    }

    #[test]
    fn trace_form_matches_series_form() {
        let sp = space(48);
        let rho = number_state(sp, 2).unwrap().to_density_matrix();
        for s in [-1.0, -0.5, 0.0, -0.25] {
            let s = SParameter::new(s).unwrap();
            for alpha in [C64::new(0.3, -0.6), C64::new(-1.0, 0.2)] {
                let a = series_form(&rho, alpha, s, 48).unwrap();
                let b = trace_form(&rho, alpha, s).unwrap();
                assert!((a - b).abs() < 1e-12, "series {a} vs trace {b}");
            }
        }
    }

    #[test]
    fn all_three_forms_agree_on_probe_grid() {
        let sp = space(48);
        let psi = coherent_state(sp, C64::new(0.5, -0.2)).unwrap();
        let rho = psi.to_density_matrix();
        let probe = GridSpec::centered_square(1.2, 5).unwrap();
        for s in [-1.0, -0.5, 0.0] {
            let s = SParameter::new(s).unwrap();
            for alpha in probe.points() {
                let series = series_form(&rho, alpha, s, 48).unwrap();
                let trace = trace_form(&rho, alpha, s).unwrap();
                let pure = pure_state_form(&psi, alpha, s).unwrap();
                assert!((series - trace).abs() <= 1e-12);
                assert!((pure - trace).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn maximally_mixed_qubit_wigner_vanishes() {
        let rho = DensityMatrix::maximally_mixed(space(2));
        let w = trace_form(&rho, C64::new(0.0, 0.0), SParameter::wigner()).unwrap();
        assert!(w.abs() < 1e-14);
    }

    #[test]
    fn pure_form_parity_values_at_origin() {
        let sp = space(32);
        let w0 = pure_state_form(
            &number_state(sp, 0).unwrap(),
            C64::new(0.0, 0.0),
            SParameter::wigner(),
        )
        .unwrap();
        assert!((w0 - 2.0 / PI).abs() < 1e-14);
        let w1 = pure_state_form(
            &number_state(sp, 1).unwrap(),
            C64::new(0.0, 0.0),
            SParameter::wigner(),
        )
        .unwrap();
        assert!((w1 + 2.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn coherent_state_wigner_peak() {
        let sp = space(64);
        let gamma = C64::new(0.8, 0.2);
        let psi = coherent_state(sp, gamma).unwrap();
        let w = pure_state_form(&psi, gamma, SParameter::wigner()).unwrap();
        assert!((w - 2.0 / PI).abs() < 1e-10, "peak value {w}");
        // Off-center closed form: (2/pi) e^{-2 |alpha - gamma|^2}.
        let alpha = C64::new(0.3, -0.1);
        let w = pure_state_form(&psi, alpha, SParameter::wigner()).unwrap();
        let want = (2.0 / PI) * (-2.0 * (alpha - gamma).norm_sqr()).exp();
        assert!((w - want).abs() < 1e-10);
    }

    #[test]
    fn husimi_coherent_overlap() {
        let sp = space(32);
        let rho = coherent_state(sp, C64::new(1.0, 0.0))
            .unwrap()
            .to_density_matrix();
        let q = husimi_q(&rho, C64::new(0.0, 0.0)).unwrap();
        assert!((q - (-1.0_f64).exp() / PI).abs() < 1e-12);
    }

    #[test]
    fn husimi_equals_series_for_any_k_max() {
        let sp = space(48);
        let rho = coherent_state(sp, C64::new(0.4, 0.3))
            .unwrap()
            .to_density_matrix();
        let alpha = C64::new(-0.2, 0.7);
        let q = husimi_q(&rho, alpha).unwrap();
        for k_max in [1, 4, 48] {
            let f = series_form(&rho, alpha, SParameter::husimi(), k_max).unwrap();
            assert!((f - q).abs() < 1e-12);
        }
    }

    #[test]
    fn wigner_parity_closed_form_for_number_states() {
        let sp = space(64);
        for n in [0, 2] {
            let rho = number_state(sp, n).unwrap().to_density_matrix();
            let alpha = C64::new(1.0, 0.0);
            let w = wigner_parity(&rho, alpha).unwrap();
            let want = wigner_number_state(n, alpha);
            assert!((w - want).abs() < 1e-9, "n={n}: {w} vs {want}");
        }
    }

    #[test]
    fn wigner_is_bounded_by_two_over_pi() {
        let sp = space(64);
        let psi = coherent_state(sp, C64::new(0.6, -0.4)).unwrap();
        let rho = psi.to_density_matrix();
        for alpha in [C64::new(0.0, 0.0), C64::new(0.6, -0.4), C64::new(-1.0, 1.0)] {
            let w = wigner_parity(&rho, alpha).unwrap();
            assert!(w.abs() <= 2.0 / PI + 1e-12);
        }
    }

    #[test]
    fn grid_spec_layout() {
        let g = GridSpec::new(-1.0, 1.0, 3, 0.0, 2.0, 2).unwrap();
        assert_eq!(g.len(), 6);
        // Row-major, Re fastest.
        assert_eq!(g.point(0), C64::new(-1.0, 0.0));
        assert_eq!(g.point(1), C64::new(0.0, 0.0));
        assert_eq!(g.point(2), C64::new(1.0, 0.0));
        assert_eq!(g.point(3), C64::new(-1.0, 2.0));
        assert_eq!(g.worst_corner().norm(), C64::new(1.0, 2.0).norm());
    }

    #[test]
    fn grid_spec_rejects_bad_bounds() {
        assert!(GridSpec::new(1.0, -1.0, 3, 0.0, 1.0, 2).is_err());
        assert!(GridSpec::new(-1.0, 1.0, 0, 0.0, 1.0, 2).is_err());
        assert!(GridSpec::new(f64::NAN, 1.0, 3, 0.0, 1.0, 2).is_err());
    }

    #[test]
    fn single_point_grid_at_origin() {
        let sp = space(16);
        let state = State::Pure(number_state(sp, 0).unwrap());
        let grid = GridSpec::new(0.0, 0.0, 1, 0.0, 0.0, 1).unwrap();
        let map = evaluate_grid(&state, SParameter::wigner(), &grid).unwrap();
        assert_eq!(map.values.len(), 1);
        assert!((map.values[0] - 2.0 / PI).abs() < 1e-14);
        assert_eq!(map.meta.dim, 16);
    }

    #[test]
    fn grid_quadrature_matches_closed_form_sum() {
        let sp = space(64);
        let state = State::Pure(number_state(sp, 0).unwrap());
        let grid = GridSpec::centered_square(2.0, 21).unwrap();
        let map = evaluate_grid(&state, SParameter::wigner(), &grid).unwrap();
        // Oracle: the same Riemann sum on the closed-form vacuum Wigner.
        let cell = grid.re_step() * grid.im_step();
        let oracle: f64 = grid
            .points()
            .map(|a| (2.0 / PI) * (-2.0 * a.norm_sqr()).exp())
            .sum::<f64>()
            * cell;
        assert!((map.quadrature() - oracle).abs() < 1e-10);
        assert!((map.quadrature() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn husimi_grid_is_nonnegative() {
        let sp = space(64);
        let psi = coherent_state(sp, C64::new(0.5, 0.5)).unwrap();
        let grid = GridSpec::centered_square(1.5, 9).unwrap();
        let map = evaluate_grid(&State::Pure(psi), SParameter::husimi(), &grid).unwrap();
        assert!(map.values.iter().all(|v| *v >= -1e-12));
    }

    #[test]
    fn grid_rejects_inadequate_corner() {
        let sp = space(16);
        let state = State::Pure(number_state(sp, 0).unwrap());
        let grid = GridSpec::centered_square(3.0, 5).unwrap();
        let err = evaluate_grid(&state, SParameter::wigner(), &grid).unwrap_err();
        match err {
            Error::GridCornerInadequate { required, dim, .. } => {
                assert_eq!(dim, 16);
                assert!(required > 16);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn grid_evaluation_is_deterministic() {
        let sp = space(32);
        let psi = coherent_state(sp, C64::new(0.3, -0.2)).unwrap();
        let grid = GridSpec::centered_square(1.0, 7).unwrap();
        let a = evaluate_grid(&State::Pure(psi.clone()), SParameter::wigner(), &grid).unwrap();
        let b = evaluate_grid(&State::Pure(psi), SParameter::wigner(), &grid).unwrap();
        assert_eq!(a.values, b.values);
    }

    #[test]
    fn uncontrolled_s_is_flagged_not_rejected() {
        let sp = space(32);
        let state = State::Pure(number_state(sp, 0).unwrap());
        let grid = GridSpec::new(0.0, 0.0, 1, 0.0, 0.0, 1).unwrap();
        let map = evaluate_grid(&state, SParameter::new(0.5).unwrap(), &grid).unwrap();
        assert!(map.meta.uncontrolled_s);
        assert!(map.values[0].is_finite());
    }
}
