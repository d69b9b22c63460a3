//! Reset-pulse design: single-step phase-engineered (SSPE) reset, the
//! two-segment CLEAR-style baseline, residual-photon maps and scheme
//! comparisons.

mod clear;
mod compare;
mod map;
mod scaling;
mod sspe;

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use clear::{clear_optimize, ClearDesign};
pub use compare::{compare_schemes, decay_window, SchemeComparison, SchemeRun};
pub use map::{residual_map, ResidualMap, CONTOUR_LEVEL};
pub use scaling::{scaling_law_check, ScalingRow};
pub use sspe::{sspe_analytic, sspe_design, sspe_optimize, OptimizeOptions};

use crate::propagate::CavityModel;
use crate::{Complex, DeviceParams, DriveSegment, Error, PulseSchedule, QubitState, Result};

/// Which states a reset pulse is designed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignMode {
    PerState(QubitState),
    Joint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateResidual {
    pub state: QubitState,
    pub photons: f64,
}

/// Optimal reset segment for a given readout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResetSolution {
    /// rad/ns
    pub reset_amplitude: f64,
    /// rad, in `[0, 2π)`
    pub reset_phase: f64,
    /// ns
    pub reset_duration: f64,
    /// `|α_j|²` at the end of the reset segment for both qubit states.
    pub residual_photons: Vec<StateResidual>,
    pub mode: DesignMode,
    pub method: Method,
    pub converged: bool,
    pub iterations: usize,
}

impl ResetSolution {
    pub fn reset_segment(&self) -> Result<DriveSegment> {
        DriveSegment::new(self.reset_amplitude, self.reset_phase, self.reset_duration)
    }

    pub fn schedule(&self, readout: DriveSegment) -> Result<PulseSchedule> {
        PulseSchedule::sspe(readout, self.reset_segment()?)
    }

    pub fn residual(&self, j: QubitState) -> Option<f64> {
        self.residual_photons.iter().find(|r| r.state == j).map(|r| r.photons)
    }

    pub fn complex_drive(&self) -> Complex {
        Complex::from_polar(self.reset_amplitude, self.reset_phase)
    }
}

/// Weighted end-of-reset objective shared by the numeric designers. The
/// readout is integrated once per state and cached.
pub(crate) struct ResetObjective {
    models: Vec<(QubitState, CavityModel, Complex, f64)>,
    dt: f64,
}

impl ResetObjective {
    pub(crate) fn new(
        params: &DeviceParams,
        states: &[QubitState],
        weights: &[f64],
        readout: &DriveSegment,
        dt: f64,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidArgument("at least one target state is required"));
        }
        if weights.len() != states.len() {
            return Err(Error::InvalidArgument("one weight per target state is required"));
        }
        if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) || weights.iter().all(|w| *w == 0.0) {
            return Err(Error::InvalidArgument("weights must be non-negative and not all zero"));
        }
        if !(dt > 0.0) {
            return Err(Error::InvalidArgument("time step must be positive"));
        }
        readout.validate()?;
        let mut models = Vec::with_capacity(states.len());
        for (&j, &w) in states.iter().zip(weights) {
            let model = CavityModel::new(params, j)?;
            let alpha0 = model.evolve_rk4(Complex::new(0.0, 0.0), readout.complex(), readout.duration, dt)?;
            models.push((j, model, alpha0, w));
        }
        Ok(ResetObjective { models, dt })
    }

    /// Field per state after the given sequence of `(drive, duration)` pieces.
    pub(crate) fn final_fields(&self, pieces: &[(Complex, f64)]) -> Result<Vec<(QubitState, Complex)>> {
        self.models
            .iter()
            .map(|(j, model, alpha0, _)| {
                let mut a = *alpha0;
                for &(drive, duration) in pieces {
                    a = model.evolve_rk4(a, drive, duration, self.dt)?;
                }
                Ok((*j, a))
            })
            .collect()
    }

    pub(crate) fn value(&self, pieces: &[(Complex, f64)]) -> Result<f64> {
        let fields = self.final_fields(pieces)?;
        Ok(fields.iter().zip(&self.models).map(|((_, a), m)| m.3 * a.norm_sqr()).sum())
    }
}

/// Residual photons for both qubit states after a two-or-more segment
/// schedule, exact when linear.
pub(crate) fn residuals_both(params: &DeviceParams, schedule: &PulseSchedule, dt: f64) -> Result<Vec<StateResidual>> {
    QubitState::ALL
        .iter()
        .map(|&j| {
            let model = CavityModel::new(params, j)?;
            let mut a = Complex::new(0.0, 0.0);
            for seg in schedule.segments() {
                a = model.evolve(a, seg.complex(), seg.duration, dt)?;
            }
            Ok(StateResidual { state: j, photons: a.norm_sqr() })
        })
        .collect()
}

pub(crate) fn mode_for(states: &[QubitState]) -> DesignMode {
    match states {
        [j] => DesignMode::PerState(*j),
        _ => DesignMode::Joint,
    }
}
