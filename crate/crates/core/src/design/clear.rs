use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use serde::{Deserialize, Serialize};

use super::{mode_for, residuals_both, DesignMode, OptimizeOptions, ResetObjective, StateResidual};
use crate::cavity::complex_rate;
use crate::optim::{solve, NelderMead};
use crate::propagate::CavityModel;
use crate::{Complex, DeviceParams, DriveSegment, Error, PulseSchedule, QubitState, Result, SchemeLabel};

const X_TOL: f64 = 1e-10;

/// CLEAR-style baseline: readout followed by two equal reset segments with
/// phases `φ_n` and `φ_n + π` and optimized real amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClearDesign {
    pub schedule: PulseSchedule,
    /// Signed amplitudes along `φ_n` and `φ_n + π`, rad/ns.
    pub amplitudes: [f64; 2],
    pub residual_photons: Vec<StateResidual>,
    pub mode: DesignMode,
    pub converged: bool,
    pub iterations: usize,
}

/// Linear two-segment solution for a single state. The end field is
/// `α₀E² + u(ε₁E − ε₂)` with `E = e^{−C Δτ/4}` and
/// `u = −2i e^{iφ_n}(1 − E)/C`; zeroing it is a 2×2 real system.
fn linear_seed(params: &DeviceParams, j: QubitState, readout: &DriveSegment, half: f64) -> Result<Option<[f64; 2]>> {
    let c = complex_rate(params, j)?.value();
    let alpha0 = CavityModel::linear(complex_rate(params, j)?).evolve_exact(
        Complex::new(0.0, 0.0),
        readout.complex(),
        readout.duration,
    );
    let e = (-c * (0.5 * half)).exp();
    let one = Complex::new(1.0, 0.0);
    let u = Complex::new(0.0, -2.0) * Complex::from_polar(1.0, readout.phase) * (one - e) / c;
    let ue = u * e;
    let target = -alpha0 * e * e;
    let a = [ue.re, -u.re, ue.im, -u.im];
    Ok(solve(&a, &[target.re, target.im]).map(|x| [x[0], x[1]]))
}

pub fn clear_optimize(
    params: &DeviceParams,
    states: &[QubitState],
    readout: &DriveSegment,
    reset_duration: f64,
    opts: &OptimizeOptions,
) -> Result<ClearDesign> {
    if !(reset_duration > 0.0 && reset_duration.is_finite()) {
        return Err(Error::InvalidArgument("reset duration must be positive"));
    }
    let half = 0.5 * reset_duration;
    let weights = vec![1.0; states.len()];
    let objective = ResetObjective::new(params, states, &weights, readout, opts.dt)?;
    let lowest = states.iter().copied().min().expect("states checked non-empty");
    let seed =
        linear_seed(&params.linearized(), lowest, readout, half)?.unwrap_or([readout.amplitude, readout.amplitude]);

    let dir = Complex::from_polar(1.0, readout.phase);
    let pieces = |x: &[f64]| [(dir * x[0], half), (-dir * x[1], half)];
    let scale = seed[0].abs().max(seed[1].abs()).max(1e-3 * readout.amplitude).max(1e-9);
    let nm = NelderMead {
        max_iter: opts.max_iter,
        f_target: 1e-20,
        x_tol: X_TOL,
        initial_step: vec![0.05 * scale, 0.05 * scale],
    };
    let report = nm.minimize(|x| objective.value(&pieces(x)), &seed)?;

    let schedule = PulseSchedule::new(
        vec![
            *readout,
            DriveSegment::new(report.x[0], readout.phase, half)?,
            DriveSegment::new(report.x[1], readout.phase + PI, half)?,
        ],
        SchemeLabel::Clear,
    )?;
    Ok(ClearDesign {
        amplitudes: [report.x[0], report.x[1]],
        residual_photons: residuals_both(params, &schedule, opts.dt)?,
        schedule,
        mode: mode_for(states),
        converged: report.f < 1e-6 || report.diameter < X_TOL,
        iterations: report.iterations,
    })
}
