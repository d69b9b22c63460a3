use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use serde::{Deserialize, Serialize};

use super::{clear_optimize, sspe_design, OptimizeOptions};
use crate::fit::exp_decay_fit;
use crate::{
    propagate_closed_form, propagate_ode, DeviceParams, DriveSegment, Error, PulseSchedule, QubitState, Result,
    SchemeLabel, Trajectory,
};

/// One scheme simulated for one qubit state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeRun {
    pub scheme: SchemeLabel,
    pub state: QubitState,
    pub schedule: PulseSchedule,
    #[serde(skip)]
    pub trajectory: Option<Trajectory>,
    /// Photons at the end of the reset window.
    pub residual: f64,
    pub peak_photons: f64,
    pub mean_photons: f64,
    /// Effective exponential decay rate over the reset window, MHz.
    pub decay_rate_mhz: Option<f64>,
}

/// Square free decay, SSPE and CLEAR over the same total duration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeComparison {
    /// ns
    pub reset_start: f64,
    /// ns
    pub reset_duration: f64,
    pub runs: Vec<SchemeRun>,
}

impl SchemeComparison {
    pub fn run(&self, scheme: SchemeLabel, state: QubitState) -> Option<&SchemeRun> {
        self.runs.iter().find(|r| r.scheme == scheme && r.state == state)
    }
}

/// Samples kept for the effective-rate fit: inside the reset window and above
/// `max(1e-3, 1e-3 · n(reset start))` photons.
pub fn decay_window(traj: &Trajectory, reset_start: f64, reset_end: f64) -> Vec<(f64, f64)> {
    let n_start = traj.alpha_at(reset_start).map(|a| a.norm_sqr()).unwrap_or(0.0);
    let floor = 1e-3f64.max(1e-3 * n_start);
    traj.window(reset_start, reset_end)
        .filter(|&k| traj.photon_number[k] > floor)
        .map(|k| (traj.times[k], traj.photon_number[k]))
        .collect()
}

fn simulate(params: &DeviceParams, j: QubitState, schedule: &PulseSchedule, dt: f64) -> Result<Trajectory> {
    if params.is_linear() {
        propagate_closed_form(params, j, schedule, dt)
    } else {
        propagate_ode(params, j, schedule, dt.min(schedule.min_duration() / 10.0))
    }
}

/// Simulates all three schemes for every state in `states`. With
/// `joint = false` each state gets its own SSPE and CLEAR design, otherwise
/// one design targets all states with equal weights.
pub fn compare_schemes(
    params: &DeviceParams,
    states: &[QubitState],
    readout: &DriveSegment,
    reset_duration: f64,
    joint: bool,
    sample_dt: f64,
    opts: &OptimizeOptions,
) -> Result<SchemeComparison> {
    if states.is_empty() {
        return Err(Error::InvalidArgument("at least one state is required"));
    }
    let reset_start = readout.duration;
    let reset_end = reset_start + reset_duration;
    let joint_designs = if joint {
        Some((
            sspe_design(params, states, readout, reset_duration, opts)?,
            clear_optimize(params, states, readout, reset_duration, opts)?,
        ))
    } else {
        None
    };

    let mut runs = Vec::new();
    for &j in states {
        let (sspe, clear) = match &joint_designs {
            Some((s, c)) => (s.clone(), c.clone()),
            None => (
                sspe_design(params, &[j], readout, reset_duration, opts)?,
                clear_optimize(params, &[j], readout, reset_duration, opts)?,
            ),
        };
        let schedules = [
            (SchemeLabel::Square, PulseSchedule::square(*readout, reset_duration)?),
            (SchemeLabel::Sspe, sspe.schedule(*readout)?),
            (SchemeLabel::Clear, clear.schedule),
        ];
        for (scheme, schedule) in schedules {
            debug_assert!((schedule.total_duration() - reset_end).abs() < 1e-9);
            let traj = simulate(params, j, &schedule, sample_dt)?;
            let window = decay_window(&traj, reset_start, reset_end);
            let decay_rate_mhz =
                if window.len() >= 3 { exp_decay_fit(&window)?.values.get("rate").copied() } else { None };
            runs.push(SchemeRun {
                scheme,
                state: j,
                residual: traj.final_photons(),
                peak_photons: traj.peak_photons(reset_start, reset_end),
                mean_photons: traj.mean_photons(reset_start, reset_end),
                decay_rate_mhz,
                schedule,
                trajectory: Some(traj),
            });
        }
    }
    Ok(SchemeComparison { reset_start, reset_duration, runs })
}
