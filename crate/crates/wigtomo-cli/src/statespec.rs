//! State descriptors: parse `--state` strings and build the states they name.

use num_complex::Complex64 as C64;

use ndarray::Array1;
use wigtomo_core::fock::{coherent_state, number_state, StateVector, TruncatedFockSpace};

use crate::complex::parse_complex;

#[derive(Debug, Clone, PartialEq)]
pub enum StateKind {
    Fock(usize),
    Coherent(C64),
    CatEven(C64),
    CatOdd(C64),
    /// Amplitudes over |0>, |1>, ... (normalized at build time).
    Superposition(Vec<C64>),
}

/// A parsed `--state` argument, e.g. `fock:2`, `coherent:0.5+0.3i`,
/// `cat-even:1`, `superposition:1,0,0.5-0.2i`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    pub kind: StateKind,
    /// The original descriptor string, used to label outputs.
    pub raw: String,
    pub dim_override: Option<usize>,
}

impl StateSpec {
    pub fn parse(input: &str) -> Result<Self, String> {
        let (kind_str, params) = input
            .split_once(':')
            .ok_or_else(|| format!("state '{input}' must look like kind:params"))?;
        let kind = match kind_str {
            "fock" => {
                let n: usize = params
                    .parse()
                    .map_err(|_| format!("fock index '{params}' is not a nonnegative integer"))?;
                StateKind::Fock(n)
            }
            "coherent" => StateKind::Coherent(parse_complex(params)?),
            "cat-even" => StateKind::CatEven(parse_complex(params)?),
            "cat-odd" => StateKind::CatOdd(parse_complex(params)?),
            "superposition" => {
                let amps = params
                    .split(',')
                    .map(parse_complex)
                    .collect::<Result<Vec<_>, _>>()?;
                if amps.is_empty() || amps.iter().all(|a| a.norm() == 0.0) {
                    return Err("superposition weights must not all be zero".into());
                }
                StateKind::Superposition(amps)
            }
            other => {
                return Err(format!(
                    "unknown state kind '{other}' (expected fock, coherent, cat-even, cat-odd, \
                     superposition)"
                ))
            }
        };
        Ok(StateSpec {
            kind,
            raw: input.to_string(),
            dim_override: None,
        })
    }

    /// Effective phase-space amplitude of the bare state, used for the
    /// automatic dimension choice.
    fn amplitude(&self) -> f64 {
        match &self.kind {
            StateKind::Fock(n) => (*n as f64).sqrt(),
            StateKind::Coherent(g) | StateKind::CatEven(g) | StateKind::CatOdd(g) => g.norm(),
            StateKind::Superposition(amps) => ((amps.len() - 1) as f64).sqrt(),
        }
    }

    /// Quanta the state occupies above the vacuum, with Poisson spread.
    fn quanta(&self) -> usize {
        let a = self.amplitude();
        (a * a + 2.0 * a).ceil() as usize
    }

    /// Dimension for static evaluations (no time evolution): headroom for the
    /// state displaced by up to `alpha_max`.
    pub fn static_dim(&self, alpha_max: f64) -> usize {
        self.dim_override.unwrap_or_else(|| {
            TruncatedFockSpace::required_dim(alpha_max + self.amplitude()).max(32)
        })
    }

    /// Dimension for protocol runs: evolution under a drive of displacement
    /// `excursion` swings the state out to twice that displacement before
    /// returning, so the static rule gets a 1.5x factor (empirically ample)
    /// plus the state's own quanta.
    pub fn dynamic_dim(&self, excursion: f64) -> usize {
        self.dim_override.unwrap_or_else(|| {
            let base = TruncatedFockSpace::required_dim(excursion);
            ((1.5 * base as f64).ceil() as usize + self.quanta()).max(64)
        })
    }

    pub fn build(&self, space: TruncatedFockSpace) -> Result<StateVector, wigtomo_core::Error> {
        match &self.kind {
            StateKind::Fock(n) => number_state(space, *n),
            StateKind::Coherent(g) => coherent_state(space, *g),
            StateKind::CatEven(g) => cat(space, *g, 1.0),
            StateKind::CatOdd(g) => cat(space, *g, -1.0),
            StateKind::Superposition(amps) => {
                let mut v = Array1::<C64>::zeros(space.dim());
                for (n, a) in amps.iter().enumerate() {
                    if n >= space.dim() {
                        return Err(wigtomo_core::Error::FockIndexOutOfRange {
                            index: n,
                            dim: space.dim(),
                        });
                    }
                    v[n] = *a;
                }
                StateVector::new(space, v)
            }
        }
    }

    pub fn label(&self) -> &str {
        &self.raw
    }
}

fn cat(
    space: TruncatedFockSpace,
    gamma: C64,
    sign: f64,
) -> Result<StateVector, wigtomo_core::Error> {
    let plus = coherent_state(space, gamma)?;
    let minus = coherent_state(space, -gamma)?;
    let amps = plus.amplitudes() + &(minus.amplitudes() * C64::new(sign, 0.0));
    StateVector::new(space, amps)
}
