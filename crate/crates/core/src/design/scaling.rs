use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{sspe_analytic, sspe_optimize, OptimizeOptions, ResetSolution};
use crate::{DeviceParams, DriveSegment, Error, QubitState, Result};

/// Optimal reset parameters for a rescaled readout, relative to `β_n = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub beta_n: f64,
    /// `ε_r′ / ε_r`
    pub beta_r: f64,
    /// `φ_r′ / φ_r`, both in `[0, 2π)`
    pub beta_phi: f64,
    /// `φ_r′ − φ_r`, rad
    pub phase_shift: f64,
    pub reset_amplitude: f64,
    pub reset_phase: f64,
}

/// Re-solves the reset for every `β_n · ε_n`. Linear devices use the
/// analytic solution, Kerr devices the numeric one.
pub fn scaling_law_check(
    params: &DeviceParams,
    j: QubitState,
    readout: &DriveSegment,
    reset_duration: f64,
    betas: &[f64],
    opts: &OptimizeOptions,
) -> Result<Vec<ScalingRow>> {
    if betas.iter().any(|b| !(*b > 0.0 && b.is_finite())) {
        return Err(Error::InvalidArgument("scale factors must be positive"));
    }
    let solve = |ro: &DriveSegment| -> Result<ResetSolution> {
        if params.is_linear() {
            sspe_analytic(params, j, ro, reset_duration)
        } else {
            sspe_optimize(params, &[j], ro, reset_duration, &[1.0], opts)
        }
    };
    let reference = solve(readout)?;
    betas
        .iter()
        .map(|&beta| {
            let sol = solve(&readout.scaled(beta)?)?;
            Ok(ScalingRow {
                beta_n: beta,
                beta_r: sol.reset_amplitude / reference.reset_amplitude,
                beta_phi: sol.reset_phase / reference.reset_phase,
                phase_shift: sol.reset_phase - reference.reset_phase,
                reset_amplitude: sol.reset_amplitude,
                reset_phase: sol.reset_phase,
            })
        })
        .collect()
}
