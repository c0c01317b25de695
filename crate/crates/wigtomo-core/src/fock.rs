//! Truncated Fock-space representation: states, ladder and parity operators,
//! displacement operators, and the matrix exponential they are built from.
//!
//! Everything operates on a finite space of `dim` retained number states
//! |0> .. |dim-1>. Operators are dense `dim x dim` complex matrices; the
//! truncation edge (top rows/columns) is where all truncation error lives,
//! so accuracy claims are restricted to states whose mass in the top two
//! levels is negligible. The adequacy rule [`TruncatedFockSpace::required_dim`]
//! keeps displaced states inside that safe region.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg;

/// Default numerical tolerances, overridable where constructors offer a
/// `_with` variant.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Allowed deviation of a state norm from 1 after construction.
    pub unit_norm: f64,
    /// Max entrywise |A - A^dag| for a matrix accepted as Hermitian.
    pub hermiticity: f64,
    /// Allowed deviation of a density-matrix trace from 1.
    pub trace: f64,
    /// Eigenvalues of a density matrix may dip this far below zero.
    pub psd: f64,
    /// Max entrywise |U^dag U - I| for flagged-unitary operators.
    pub unitarity: f64,
    /// Largest imaginary residue tolerated on a nominally real value.
    pub imag_residue: f64,
    /// Probability mass allowed in the top two Fock levels of a state fed
    /// to an operation that needs truncation headroom.
    pub tail_mass: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unit_norm: 1e-10,
            hermiticity: 1e-12,
            trace: 1e-10,
            psd: 1e-10,
            unitarity: 1e-9,
            imag_residue: 1e-9,
            tail_mass: 1e-10,
        }
    }
}

/// The truncated oscillator Hilbert space: `dim` retained Fock levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncatedFockSpace {
    dim: usize,
}

impl TruncatedFockSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall { dim });
        }
        Ok(TruncatedFockSpace { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Smallest dimension adequate for a displacement of modulus `alpha_abs`.
    ///
    /// The rule `dim >= |alpha|^2 + 8|alpha| + 16` is a Poisson-tail bound
    /// with generous margin: it keeps the probability mass a displaced state
    /// pushes past the truncation edge below roughly 1e-12. It is our own
    /// engineering choice; there is no canonical truncation budget for this
    /// family of calculations. An exactly zero displacement is the identity
    /// and needs no headroom.
    pub fn required_dim(alpha_abs: f64) -> usize {
        if alpha_abs == 0.0 {
            return 2;
        }
        (alpha_abs * alpha_abs + 8.0 * alpha_abs + 16.0).ceil() as usize
    }

    /// Reject displacements this space cannot hold accurately.
    pub fn check_adequate(&self, alpha: C64) -> Result<()> {
        let alpha = PhasePoint::new(alpha)?.value();
        let required = Self::required_dim(alpha.norm());
        if self.dim < required {
            return Err(Error::TruncationInadequate {
                alpha_abs: alpha.norm(),
                dim: self.dim,
                required,
            });
        }
        Ok(())
    }

    pub(crate) fn check_same(&self, other: &TruncatedFockSpace) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }
}

/// A point in phase space (dimensionless complex amplitude).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint(C64);

impl PhasePoint {
    pub fn new(alpha: C64) -> Result<Self> {
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(Error::NonFinitePhasePoint { alpha });
        }
        Ok(PhasePoint(alpha))
    }

    pub fn value(&self) -> C64 {
        self.0
    }
}

/// A pure state: unit-norm complex amplitudes over the truncated Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: TruncatedFockSpace,
    amplitudes: Array1<C64>,
    norm_correction: f64,
}

impl StateVector {
    /// Build from raw amplitudes, normalizing and recording the correction.
    pub fn new(space: TruncatedFockSpace, amplitudes: Array1<C64>) -> Result<Self> {
        Self::new_with(space, amplitudes, &Tolerances::default())
    }

    pub fn new_with(
        space: TruncatedFockSpace,
        amplitudes: Array1<C64>,
        _tol: &Tolerances,
    ) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                left: amplitudes.len(),
                right: space.dim(),
            });
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteMatrix);
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let scaled = amplitudes.mapv(|z| z / norm);
        Ok(StateVector {
            space,
            amplitudes: scaled,
            norm_correction: (1.0 - norm).abs(),
        })
    }

    pub fn space(&self) -> TruncatedFockSpace {
        self.space
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    /// Normalization absorbed at construction, |1 - raw norm|. For states
    /// built from truncated analytic amplitudes this reports the truncation
    /// renormalization correction.
    pub fn norm_correction(&self) -> f64 {
        self.norm_correction
    }

    /// Probability mass in the top two Fock levels.
    pub fn tail_mass(&self) -> f64 {
        let d = self.space.dim();
        self.amplitudes[d - 1].norm_sqr() + self.amplitudes[d - 2].norm_sqr()
    }

    pub(crate) fn check_tail(&self, limit: f64) -> Result<()> {
        let tail = self.tail_mass();
        if tail > limit {
            return Err(Error::TailMassExceeded { tail, limit });
        }
        Ok(())
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.space.check_same(&other.space)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Outer product |psi><psi| as a density matrix.
    pub fn to_density_matrix(&self) -> DensityMatrix {
        let d = self.space.dim();
        let mut rho = Array2::<C64>::zeros((d, d));
        for i in 0..d {
            for j in 0..d {
                rho[[i, j]] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        DensityMatrix {
            space: self.space,
            elements: rho,
        }
    }
}

/// A mixed state: Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: TruncatedFockSpace,
    elements: Array2<C64>,
}

impl DensityMatrix {
    /// Validate Hermiticity, unit trace, and positive semidefiniteness.
    pub fn new(space: TruncatedFockSpace, elements: Array2<C64>) -> Result<Self> {
        Self::new_with(space, elements, &Tolerances::default())
    }

    pub fn new_with(
        space: TruncatedFockSpace,
        elements: Array2<C64>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let d = space.dim();
        if elements.nrows() != d || elements.ncols() != d {
            return Err(Error::DimensionMismatch {
                left: elements.nrows(),
                right: d,
            });
        }
        if elements.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteMatrix);
        }
        let defect = hermiticity_defect(&elements);
        if defect > tol.hermiticity {
            return Err(Error::NotHermitian {
                defect,
                tolerance: tol.hermiticity,
            });
        }
        let trace: C64 = (0..d).map(|i| elements[[i, i]]).sum();
        if (trace.re - 1.0).abs() > tol.trace || trace.im.abs() > tol.trace {
            return Err(Error::TraceNotOne {
                trace: trace.re,
                tolerance: tol.trace,
            });
        }
        let eig = linalg::hermitian_eigenvalues(&elements);
        let min_eigenvalue = eig.first().copied().unwrap_or(0.0);
        if min_eigenvalue < -tol.psd {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue });
        }
        Ok(DensityMatrix { space, elements })
    }

    /// Equal-weight mixture of all retained levels.
    pub fn maximally_mixed(space: TruncatedFockSpace) -> Self {
        let d = space.dim();
        let elements = Array2::from_diag_elem(d, C64::new(1.0 / d as f64, 0.0));
        DensityMatrix { space, elements }
    }

    pub fn space(&self) -> TruncatedFockSpace {
        self.space
    }

    pub fn elements(&self) -> &Array2<C64> {
        &self.elements
    }

    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.elements)
    }
}

fn hermiticity_defect(a: &Array2<C64>) -> f64 {
    let mut max = 0.0_f64;
    for i in 0..a.nrows() {
        for j in i..a.ncols() {
            max = max.max((a[[i, j]] - a[[j, i]].conj()).norm());
        }
    }
    max
}

/// A dense operator on the truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: TruncatedFockSpace,
    elements: Array2<C64>,
}

impl Operator {
    pub fn new(space: TruncatedFockSpace, elements: Array2<C64>) -> Result<Self> {
        let d = space.dim();
        if elements.nrows() != d || elements.ncols() != d {
            return Err(Error::DimensionMismatch {
                left: elements.nrows(),
                right: d,
            });
        }
        Ok(Operator { space, elements })
    }

    pub fn identity(space: TruncatedFockSpace) -> Self {
        Operator {
            space,
            elements: linalg::identity(space.dim()),
        }
    }

    pub fn space(&self) -> TruncatedFockSpace {
        self.space
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.elements
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Operator {
        Operator {
            space: self.space,
            elements: linalg::dagger(&self.elements),
        }
    }

    /// Apply to a state, returning raw (possibly unnormalized) amplitudes.
    pub fn apply(&self, psi: &StateVector) -> Result<Array1<C64>> {
        self.space.check_same(&psi.space())?;
        Ok(self.elements.dot(psi.amplitudes()))
    }

    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        self.space.check_same(&other.space)?;
        Ok(Operator {
            space: self.space,
            elements: self.elements.dot(&other.elements),
        })
    }

    pub fn scale(&self, factor: C64) -> Operator {
        Operator {
            space: self.space,
            elements: &self.elements * factor,
        }
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.space.check_same(&other.space)?;
        Ok(Operator {
            space: self.space,
            elements: &self.elements + &other.elements,
        })
    }

    pub fn trace(&self) -> C64 {
        (0..self.space.dim()).map(|i| self.elements[[i, i]]).sum()
    }

    /// Max entrywise |U^dag U - I|.
    pub fn unitarity_defect(&self) -> f64 {
        let udag_u = linalg::dagger(&self.elements).dot(&self.elements);
        linalg::max_abs_diff(&udag_u, &linalg::identity(self.space.dim()))
    }

    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.elements)
    }
}

/// Annihilation operator: `<n-1|a|n> = sqrt(n)`.
pub fn annihilation_matrix(space: TruncatedFockSpace) -> Operator {
    let d = space.dim();
    let mut a = Array2::<C64>::zeros((d, d));
    for n in 1..d {
        a[[n - 1, n]] = C64::new((n as f64).sqrt(), 0.0);
    }
    Operator { space, elements: a }
}

/// Creation operator, the conjugate transpose of [`annihilation_matrix`].
pub fn creation_matrix(space: TruncatedFockSpace) -> Operator {
    annihilation_matrix(space).dagger()
}

/// Number operator `diag(0, 1, .., dim-1)`.
pub fn number_matrix(space: TruncatedFockSpace) -> Operator {
    let d = space.dim();
    let mut n = Array2::<C64>::zeros((d, d));
    for i in 0..d {
        n[[i, i]] = C64::new(i as f64, 0.0);
    }
    Operator { space, elements: n }
}

/// Parity operator `diag((-1)^n)`: Hermitian, unitary, involutory.
pub fn parity_matrix(space: TruncatedFockSpace) -> Operator {
    let d = space.dim();
    let mut p = Array2::<C64>::zeros((d, d));
    for i in 0..d {
        p[[i, i]] = C64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
    }
    Operator { space, elements: p }
}

/// Number state |n>.
pub fn number_state(space: TruncatedFockSpace, n: usize) -> Result<StateVector> {
    if n >= space.dim() {
        return Err(Error::FockIndexOutOfRange {
            index: n,
            dim: space.dim(),
        });
    }
    let mut amplitudes = Array1::<C64>::zeros(space.dim());
    amplitudes[n] = C64::new(1.0, 0.0);
    Ok(StateVector {
        space,
        amplitudes,
        norm_correction: 0.0,
    })
}

/// Coherent state with amplitudes `c_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!)`,
/// renormalized after truncation.
pub fn coherent_state(space: TruncatedFockSpace, alpha: C64) -> Result<StateVector> {
    space.check_adequate(alpha)?;
    let d = space.dim();
    let mut amplitudes = Array1::<C64>::zeros(d);
    let mut c = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    amplitudes[0] = c;
    for n in 1..d {
        c *= alpha / (n as f64).sqrt();
        amplitudes[n] = c;
    }
    StateVector::new(space, amplitudes)
}

/// Displacement operator `D(alpha) = exp(alpha a^dag - alpha* a)`.
///
/// Built by scaling-and-squaring exponential of the truncated generator,
/// which is exactly anti-Hermitian, so the result is unitary to machine
/// precision; the unitarity flag is still verified. For a cross-check
/// against an independent construction see [`displacement_matrix_analytic`].
pub fn displacement_matrix(space: TruncatedFockSpace, alpha: C64) -> Result<Operator> {
    displacement_matrix_with(space, alpha, &Tolerances::default())
}

pub fn displacement_matrix_with(
    space: TruncatedFockSpace,
    alpha: C64,
    tol: &Tolerances,
) -> Result<Operator> {
    space.check_adequate(alpha)?;
    let a = annihilation_matrix(space);
    let adag = a.dagger();
    let generator = adag.scale(alpha).add(&a.scale(-alpha.conj()))?;
    let elements = linalg::expm(generator.matrix())?;
    let op = Operator {
        space,
        elements,
    };
    let defect = op.unitarity_defect();
    if defect > tol.unitarity {
        return Err(Error::UnitarityDefect {
            defect,
            tolerance: tol.unitarity,
        });
    }
    Ok(op)
}

/// Displacement operator from closed-form matrix elements.
///
/// `<m|D(alpha)|n>` is an associated Laguerre polynomial in `|alpha|^2` times
/// a weighted power of `alpha`; this path samples the exact infinite-space
/// elements into the truncated window. It exists purely as an independent
/// cross-check for [`displacement_matrix`]: the recurrences lose accuracy in
/// the far corners of large matrices at large `|alpha|`, and the sampled
/// window is not exactly unitary at the truncation edge, so the exponential
/// path is the primary construction.
pub fn displacement_matrix_analytic(space: TruncatedFockSpace, alpha: C64) -> Result<Operator> {
    space.check_adequate(alpha)?;
    let d = space.dim();
    let x = alpha.norm_sqr();
    let gauss = (-x / 2.0).exp();
    let mut elements = Array2::<C64>::zeros((d, d));
    for row in 0..d {
        for col in 0..d {
            let (small, diff, step) = if row >= col {
                (col, row - col, alpha)
            } else {
                (row, col - row, -alpha.conj())
            };
            // coefficient sqrt(min! / max!) * step^diff, accumulated stably
            let mut coeff = C64::new(gauss, 0.0);
            for i in (small + 1)..=(small + diff) {
                coeff *= step / (i as f64).sqrt();
            }
            elements[[row, col]] = coeff * associated_laguerre(small, diff as f64, x);
        }
    }
    Ok(Operator { space, elements })
}

/// Associated Laguerre polynomial `L_n^{(k)}(x)` by the three-term recurrence.
fn associated_laguerre(n: usize, k: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + k - x;
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + k - x) * cur - (jf + k) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Displaced number state `D(alpha)|k>`.
pub fn displaced_number_state(
    space: TruncatedFockSpace,
    alpha: C64,
    k: usize,
) -> Result<StateVector> {
    if k >= space.dim() {
        return Err(Error::FockIndexOutOfRange {
            index: k,
            dim: space.dim(),
        });
    }
    let d = displacement_matrix(space, alpha)?;
    let column = d.matrix().column(k).to_owned();
    let norm = column.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let tol = Tolerances::default();
    if (norm - 1.0).abs() > tol.unit_norm {
        return Err(Error::NormDrift {
            norm,
            tolerance: tol.unit_norm,
        });
    }
    StateVector::new(space, column)
}

/// `exp(scalar * op)` by scaling and squaring.
pub fn matrix_exponential(op: &Operator, scalar: C64) -> Result<Operator> {
    if !scalar.re.is_finite() || !scalar.im.is_finite() {
        return Err(Error::NonFiniteMatrix);
    }
    let scaled = op.matrix() * scalar;
    let elements = linalg::expm(&scaled)?;
    Ok(Operator {
        space: op.space,
        elements,
    })
}
