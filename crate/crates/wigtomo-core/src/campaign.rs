//! Full-map reconstruction: run the protocol once per phase-space grid point
//! (one simulated experiment per point) and quantify the error against the
//! direct displaced-parity evaluation.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::StateVector;
use crate::protocol::{
    parity_shot_estimate, wigner_point, OscillatorParams, MEASURED_SIGN,
};
use crate::quasiprob::{
    evaluate_grid, GridSpec, MapMetadata, QuasiDistributionMap, SParameter, State,
};

/// How each grid point is measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CampaignMode {
    /// Exact overlap of the evolved state (noise-free experiment).
    Exact,
    /// Finite-shot parity sampling of the displaced state.
    Shots { shots: u64 },
}

/// A reconstruction campaign: one protocol run per grid point.
#[derive(Debug, Clone)]
pub struct CampaignPlan {
    pub grid: GridSpec,
    pub omega: f64,
    /// Descriptor of the initial state, carried into map metadata.
    pub state_label: String,
    pub mode: CampaignMode,
    /// Per-point seeds are derived as `base_seed ^ point_index`, so points
    /// are reproducible independently of evaluation order.
    pub base_seed: u64,
}

/// Reconstructed map, reference map, and error summary.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionReport {
    pub reconstructed: QuasiDistributionMap,
    pub reference: QuasiDistributionMap,
    pub max_abs_error: f64,
    pub rms_error: f64,
    /// Per-point standard errors of the reconstructed values (shot mode only),
    /// row-major like the map values.
    pub stderr_map: Option<Vec<f64>>,
}

/// Run the campaign: for each grid point `alpha` the drive is set to
/// `beta = MEASURED_SIGN * omega * alpha` (inverting the calibrated sign map,
/// so the output map is indexed by the true phase-space point), the protocol
/// produces one Wigner value, and the assembled map is compared against
/// [`evaluate_grid`] at s = 0.
pub fn reconstruct(plan: &CampaignPlan, psi0: &StateVector) -> Result<ReconstructionReport> {
    if plan.omega <= 0.0 || !plan.omega.is_finite() {
        return Err(Error::InvalidFrequency { omega: plan.omega });
    }
    if let CampaignMode::Shots { shots } = plan.mode {
        if shots == 0 {
            return Err(Error::NoShots);
        }
    }
    plan.grid.check_adequate(psi0.space())?;

    let points: Vec<(f64, f64)> = (0..plan.grid.len())
        .into_par_iter()
        .map(|index| -> Result<(f64, f64)> {
            let alpha = plan.grid.point(index);
            let beta = alpha * (MEASURED_SIGN * plan.omega);
            let params = OscillatorParams::new(plan.omega, beta)?;
            match plan.mode {
                CampaignMode::Exact => {
                    let point = wigner_point(psi0, &params)?;
                    debug_assert!((point.alpha - alpha).norm() < 1e-12);
                    Ok((point.value, 0.0))
                }
                CampaignMode::Shots { shots } => {
                    let seed = plan.base_seed ^ index as u64;
                    let est = parity_shot_estimate(psi0, &params, shots, seed)?;
                    let scale = 2.0 / std::f64::consts::PI;
                    Ok((scale * est.mean, scale * est.stderr))
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let values: Vec<f64> = points.iter().map(|(v, _)| *v).collect();
    let stderr_map = match plan.mode {
        CampaignMode::Exact => None,
        CampaignMode::Shots { .. } => Some(points.iter().map(|(_, e)| *e).collect()),
    };

    let reference = {
        let mut map = evaluate_grid(
            &State::Pure(psi0.clone()),
            SParameter::wigner(),
            &plan.grid,
        )?;
        map.meta.state = plan.state_label.clone();
        map
    };

    let reconstructed = QuasiDistributionMap {
        s: 0.0,
        grid: plan.grid,
        values,
        meta: MapMetadata {
            dim: psi0.space().dim(),
            state: plan.state_label.clone(),
            uncontrolled_s: false,
            max_imag_residue: 0.0,
        },
    };

    let (max_abs_error, rms_error) = error_metrics(&reconstructed, &reference)?;
    Ok(ReconstructionReport {
        reconstructed,
        reference,
        max_abs_error,
        rms_error,
        stderr_map,
    })
}

/// Entrywise max |a - b| and root-mean-square difference of two maps on the
/// same grid.
pub fn error_metrics(
    a: &QuasiDistributionMap,
    b: &QuasiDistributionMap,
) -> Result<(f64, f64)> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch {
            left: a.grid,
            right: b.grid,
        });
    }
    let n = a.values.len() as f64;
    let mut max_abs = 0.0_f64;
    let mut sum_sq = 0.0_f64;
    for (x, y) in a.values.iter().zip(b.values.iter()) {
        let d = (x - y).abs();
        max_abs = max_abs.max(d);
        sum_sq += d * d;
    }
    Ok((max_abs, (sum_sq / n).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{number_state, TruncatedFockSpace};
    use std::f64::consts::PI;

    fn space(dim: usize) -> TruncatedFockSpace {
        TruncatedFockSpace::new(dim).unwrap()
    }

    fn exact_plan(grid: GridSpec, label: &str) -> CampaignPlan {
        CampaignPlan {
            grid,
            omega: 1.0,
            state_label: label.into(),
            mode: CampaignMode::Exact,
            base_seed: 0,
        }
    }

    #[test]
    fn metrics_of_identical_maps_vanish() {
        let sp = space(32);
        let grid = GridSpec::centered_square(1.0, 5).unwrap();
        let map = evaluate_grid(
            &State::Pure(number_state(sp, 0).unwrap()),
            SParameter::wigner(),
            &grid,
        )
        .unwrap();
        let (max, rms) = error_metrics(&map, &map).unwrap();
        assert_eq!(max, 0.0);
        assert_eq!(rms, 0.0);
    }

    #[test]
    fn metrics_of_single_cell_perturbation() {
        let sp = space(32);
        let grid = GridSpec::centered_square(1.0, 5).unwrap();
        let map = evaluate_grid(
            &State::Pure(number_state(sp, 0).unwrap()),
            SParameter::wigner(),
            &grid,
        )
        .unwrap();
        let mut perturbed = map.clone();
        perturbed.values[7] += 0.1;
        let (max, rms) = error_metrics(&map, &perturbed).unwrap();
        assert!((max - 0.1).abs() < 1e-15);
        assert!((rms - 0.1 / (25.0_f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn metrics_reject_grid_mismatch() {
        let sp = space(32);
        let a = evaluate_grid(
            &State::Pure(number_state(sp, 0).unwrap()),
            SParameter::wigner(),
            &GridSpec::centered_square(1.0, 5).unwrap(),
        )
        .unwrap();
        let b = evaluate_grid(
            &State::Pure(number_state(sp, 0).unwrap()),
            SParameter::wigner(),
            &GridSpec::centered_square(1.0, 3).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            error_metrics(&a, &b),
            Err(Error::GridMismatch { .. })
        ));
    }

    #[test]
    fn exact_mode_reproduces_vacuum_map() {
        let sp = space(64);
        let psi = number_state(sp, 0).unwrap();
        let grid = GridSpec::centered_square(2.0, 21).unwrap();
        let report = reconstruct(&exact_plan(grid, "fock:0"), &psi).unwrap();
        assert!(
            report.max_abs_error <= 1e-8,
            "max abs error {}",
            report.max_abs_error
        );
        assert!(report.stderr_map.is_none());
    }

    #[test]
    fn exact_mode_fock_two_radial_nodes() {
        let sp = space(64);
        let psi = number_state(sp, 2).unwrap();
        // Points straddling the two radial nodes of L_2(4r^2) at r = 0.38, 0.92.
        let grid = GridSpec::centered_square(1.2, 5).unwrap();
        let report = reconstruct(&exact_plan(grid, "fock:2"), &psi).unwrap();
        let value_at = |re: f64| {
            let target = num_complex::Complex64::new(re, 0.0);
            let idx = grid
                .points()
                .position(|p| (p - target).norm() < 1e-12)
                .unwrap();
            report.reconstructed.values[idx]
        };
        // W at the origin for |2> is +2/pi (even parity, L_2(0) = 1), dips
        // negative between the nodes and recovers outside.
        assert!((value_at(0.0) - 2.0 / PI).abs() < 1e-10);
        assert!(value_at(0.6) < -1e-3);
        assert!(value_at(1.2) > 1e-3);
    }

    #[test]
    fn shot_mode_consistency_with_reference() {
        let sp = space(64);
        let psi = number_state(sp, 0).unwrap();
        let grid = GridSpec::centered_square(1.0, 3).unwrap();
        let plan = CampaignPlan {
            grid,
            omega: 1.0,
            state_label: "fock:0".into(),
            mode: CampaignMode::Shots { shots: 10_000 },
            base_seed: 11,
        };
        let report = reconstruct(&plan, &psi).unwrap();
        let stderr = report.stderr_map.as_ref().unwrap();
        let mean_stderr: f64 = stderr.iter().sum::<f64>() / stderr.len() as f64;
        assert!(
            report.rms_error <= 3.0 * mean_stderr,
            "rms {} vs stderr {}",
            report.rms_error,
            mean_stderr
        );
    }

    #[test]
    fn shot_mode_is_bit_deterministic() {
        let sp = space(64);
        let psi = number_state(sp, 1).unwrap();
        let plan = CampaignPlan {
            grid: GridSpec::centered_square(0.8, 3).unwrap(),
            omega: 1.0,
            state_label: "fock:1".into(),
            mode: CampaignMode::Shots { shots: 2000 },
            base_seed: 5,
        };
        let a = reconstruct(&plan, &psi).unwrap();
        let b = reconstruct(&plan, &psi).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sub_grid_values_match_full_grid() {
        // Points are independent experiments: a sub-lattice run must produce
        // the same values as the corresponding full-grid entries.
        let sp = space(64);
        let psi = number_state(sp, 1).unwrap();
        let full_grid = GridSpec::centered_square(1.0, 5).unwrap(); // step 0.5
        let sub_grid = GridSpec::centered_square(0.5, 3).unwrap(); // same lattice
        let full = reconstruct(&exact_plan(full_grid, "fock:1"), &psi).unwrap();
        let sub = reconstruct(&exact_plan(sub_grid, "fock:1"), &psi).unwrap();
        for (i, alpha) in sub_grid.points().enumerate() {
            let j = full_grid
                .points()
                .position(|p| (p - alpha).norm() < 1e-12)
                .expect("sub-grid point missing from full grid");
            let diff = (sub.reconstructed.values[i] - full.reconstructed.values[j]).abs();
            assert!(diff <= 1e-14, "point {alpha}: diff {diff}");
        }
    }

    #[test]
    fn rejects_inadequate_grid_corner() {
        let sp = space(16);
        let psi = number_state(sp, 0).unwrap();
        let grid = GridSpec::centered_square(3.0, 3).unwrap();
        assert!(matches!(
            reconstruct(&exact_plan(grid, "fock:0"), &psi),
            Err(Error::GridCornerInadequate { .. })
        ));
    }
}
