use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::propagate::CavityModel;
use crate::{Complex, DeviceParams, DriveSegment, Error, QubitState, Result};

/// Photon level traced by the contour in the map metadata.
pub const CONTOUR_LEVEL: f64 = 0.1;

const ODE_STEP: f64 = 0.05;

/// End-of-reset photon number over a grid of reset amplitudes and phases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualMap {
    pub amplitude_axis: Vec<f64>,
    pub phase_axis: Vec<f64>,
    /// Row-major, one row per amplitude.
    pub residual: Vec<f64>,
    pub qubit_state: QubitState,
    /// Grid cells `(amp_index, phase_index)` whose corners straddle
    /// [`CONTOUR_LEVEL`].
    pub contour_cells: Vec<(usize, usize)>,
    pub min_index: (usize, usize),
}

impl ResidualMap {
    pub fn at(&self, amp_index: usize, phase_index: usize) -> f64 {
        self.residual[amp_index * self.phase_axis.len() + phase_index]
    }

    pub fn min_residual(&self) -> f64 {
        self.at(self.min_index.0, self.min_index.1)
    }

    pub fn min_location(&self) -> (f64, f64) {
        (self.amplitude_axis[self.min_index.0], self.phase_axis[self.min_index.1])
    }
}

/// Evaluates `|α_j(end)|²` on the Cartesian grid; exact for a linear cavity
/// and RK4 otherwise.
pub fn residual_map(
    params: &DeviceParams,
    j: QubitState,
    readout: &DriveSegment,
    reset_duration: f64,
    amp_grid: &[f64],
    phase_grid: &[f64],
) -> Result<ResidualMap> {
    if amp_grid.is_empty() || phase_grid.is_empty() {
        return Err(Error::InvalidArgument("map grids must be non-empty"));
    }
    if amp_grid.iter().chain(phase_grid).any(|v| !v.is_finite()) || amp_grid.iter().any(|a| *a < 0.0) {
        return Err(Error::InvalidArgument("map amplitudes must be finite and non-negative"));
    }
    if !(reset_duration > 0.0) {
        return Err(Error::InvalidArgument("reset duration must be positive"));
    }
    readout.validate()?;
    let model = CavityModel::new(params, j)?;
    let alpha0 = model.evolve(Complex::new(0.0, 0.0), readout.complex(), readout.duration, ODE_STEP)?;

    let np = phase_grid.len();
    let mut residual = Vec::with_capacity(amp_grid.len() * np);
    for &a in amp_grid {
        for &phi in phase_grid {
            let end = model.evolve(alpha0, Complex::from_polar(a, phi), reset_duration, ODE_STEP)?;
            residual.push(end.norm_sqr());
        }
    }

    let min_flat = residual.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|(k, _)| k).unwrap_or(0);
    let mut contour_cells = Vec::new();
    for i in 0..amp_grid.len().saturating_sub(1) {
        for k in 0..np.saturating_sub(1) {
            let corners = [
                residual[i * np + k],
                residual[i * np + k + 1],
                residual[(i + 1) * np + k],
                residual[(i + 1) * np + k + 1],
            ];
            let lo = corners.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = corners.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if lo <= CONTOUR_LEVEL && CONTOUR_LEVEL <= hi {
                contour_cells.push((i, k));
            }
        }
    }
    Ok(ResidualMap {
        amplitude_axis: amp_grid.to_vec(),
        phase_axis: phase_grid.to_vec(),
        residual,
        qubit_state: j,
        contour_cells,
        min_index: (min_flat / np, min_flat % np),
    })
}
