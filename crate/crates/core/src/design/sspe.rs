use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::{mode_for, residuals_both, DesignMode, Method, ResetObjective, ResetSolution};
use crate::cavity::complex_rate;
use crate::optim::NelderMead;
use crate::units::wrap_phase;
use crate::{Complex, DeviceParams, DriveSegment, Error, PulseSchedule, QubitState, Result};

/// Settings for the numeric reset designers.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeOptions {
    /// RK4 step, ns.
    pub dt: f64,
    pub max_iter: usize,
    /// Optional hardware limit on the reset amplitude, rad/ns.
    pub max_amplitude: Option<f64>,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions { dt: 0.05, max_iter: 1000, max_amplitude: None }
    }
}

/// Objective level (photons) at which the simplex search stops early.
const F_TARGET: f64 = 1e-20;
/// Objective level (photons) that counts as a converged reset.
const CONVERGED_PHOTONS: f64 = 1e-6;
const X_TOL: f64 = 1e-10;

/// Exact reset segment for the linear cavity:
/// `ε_r e^{iφ_r} = ε_n e^{iφ_n} (1 − e^{−τC_j/2}) / (1 − e^{ΔτC_j/2})`.
pub fn sspe_analytic(
    params: &DeviceParams,
    j: QubitState,
    readout: &DriveSegment,
    reset_duration: f64,
) -> Result<ResetSolution> {
    if !params.is_linear() {
        return Err(Error::KerrNotSupported(params.kerr_coeff));
    }
    readout.validate()?;
    if !(reset_duration > 0.0 && reset_duration.is_finite()) {
        return Err(Error::InvalidArgument("reset duration must be positive"));
    }
    let c = complex_rate(params, j)?.value();
    let denom = Complex::new(1.0, 0.0) - (c * (0.5 * reset_duration)).exp();
    if denom.norm() < 1e-12 {
        return Err(Error::DegenerateDuration(denom.norm()));
    }
    let ring_up = Complex::new(1.0, 0.0) - (-c * (0.5 * readout.duration)).exp();
    let reset = readout.complex() * ring_up / denom;
    let segment = DriveSegment::from_complex(reset, reset_duration)?;
    let schedule = PulseSchedule::sspe(*readout, segment)?;
    Ok(ResetSolution {
        reset_amplitude: segment.amplitude,
        reset_phase: segment.phase,
        reset_duration,
        residual_photons: residuals_both(params, &schedule, 1.0)?,
        mode: DesignMode::PerState(j),
        method: Method::Analytic,
        converged: true,
        iterations: 0,
    })
}

/// Numeric reset design minimizing `Σ_j w_j |α_j(end)|²` over the reset
/// amplitude and phase with Nelder-Mead on RK4-propagated dynamics (Kerr
/// term included). Seeded from the linear analytic solution of the lowest
/// target state.
///
/// A search that stalls is returned with `converged = false` rather than
/// as an error.
pub fn sspe_optimize(
    params: &DeviceParams,
    states: &[QubitState],
    readout: &DriveSegment,
    reset_duration: f64,
    weights: &[f64],
    opts: &OptimizeOptions,
) -> Result<ResetSolution> {
    if !(reset_duration > 0.0 && reset_duration.is_finite()) {
        return Err(Error::InvalidArgument("reset duration must be positive"));
    }
    let objective = ResetObjective::new(params, states, weights, readout, opts.dt)?;
    let lowest = states.iter().copied().min().expect("states checked non-empty");
    let seed = sspe_analytic(&params.linearized(), lowest, readout, reset_duration)?;

    let amp_step = 0.05 * seed.reset_amplitude.max(1e-3 * readout.amplitude).max(1e-9);
    let nm =
        NelderMead { max_iter: opts.max_iter, f_target: F_TARGET, x_tol: X_TOL, initial_step: vec![amp_step, 0.05] };
    let report = nm.minimize(
        |x| objective.value(&[(Complex::from_polar(x[0], x[1]), reset_duration)]),
        &[seed.reset_amplitude, seed.reset_phase],
    )?;

    let segment = DriveSegment::new(report.x[0], report.x[1], reset_duration)?;
    if let Some(cap) = opts.max_amplitude {
        if segment.amplitude > cap {
            return Err(Error::AmplitudeCapExceeded { amplitude: segment.amplitude, cap });
        }
    }
    let schedule = PulseSchedule::sspe(*readout, segment)?;
    Ok(ResetSolution {
        reset_amplitude: segment.amplitude,
        reset_phase: wrap_phase(segment.phase),
        reset_duration,
        residual_photons: residuals_both(params, &schedule, opts.dt)?,
        mode: mode_for(states),
        method: Method::Numeric,
        converged: report.f < CONVERGED_PHOTONS || report.diameter < X_TOL,
        iterations: report.iterations,
    })
}

/// Analytic design when it applies (linear model, single state), numeric
/// otherwise. Joint designs use equal weights.
pub fn sspe_design(
    params: &DeviceParams,
    states: &[QubitState],
    readout: &DriveSegment,
    reset_duration: f64,
    opts: &OptimizeOptions,
) -> Result<ResetSolution> {
    match states {
        [j] if params.is_linear() => {
            let sol = sspe_analytic(params, *j, readout, reset_duration)?;
            if let Some(cap) = opts.max_amplitude {
                if sol.reset_amplitude > cap {
                    return Err(Error::AmplitudeCapExceeded { amplitude: sol.reset_amplitude, cap });
                }
            }
            Ok(sol)
        }
        _ => {
            let weights: Vec<f64> = vec![1.0; states.len()];
            sspe_optimize(params, states, readout, reset_duration, &weights, opts)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagate_closed_form;

    fn readout() -> DriveSegment {
        DriveSegment::new(0.025, 0.0, 900.0).unwrap()
    }

    #[test]
    fn analytic_reset_empties_cavity() {
        let p = DeviceParams::reference_q1();
        for j in QubitState::ALL {
            let sol = sspe_analytic(&p, j, &readout(), 50.0).unwrap();
            let tr = propagate_closed_form(&p, j, &sol.schedule(readout()).unwrap(), 1.0).unwrap();
            assert!(tr.final_photons() < 1e-20, "{}", tr.final_photons());
            assert!(sol.residual(j).unwrap() < 1e-20);
        }
    }

    #[test]
    fn zero_readout_needs_zero_reset() {
        let p = DeviceParams::reference_q1();
        let ro = DriveSegment::new(0.0, 0.0, 900.0).unwrap();
        let sol = sspe_analytic(&p, QubitState::Ground, &ro, 50.0).unwrap();
        assert_eq!(sol.reset_amplitude, 0.0);
        assert_eq!(sol.residual(QubitState::Ground), Some(0.0));
        let kerr = p.with_kerr(-0.011);
        let num = sspe_optimize(&kerr, &[QubitState::Ground], &ro, 50.0, &[1.0], &OptimizeOptions::default()).unwrap();
        assert_eq!(num.reset_amplitude, 0.0);
    }

    #[test]
    fn long_window_needs_vanishing_drive() {
        let p = DeviceParams::reference_q1();
        let amps: Vec<f64> = [50.0, 200.0, 800.0, 3200.0]
            .iter()
            .map(|&d| sspe_analytic(&p, QubitState::Ground, &readout(), d).unwrap().reset_amplitude)
            .collect();
        assert!(amps.windows(2).all(|w| w[1] < w[0]));
        // large-window asymptote −ε_n (1 − e^{−τC/2}) e^{−ΔτC/2}
        let c = complex_rate(&p, QubitState::Ground).unwrap().value();
        let asym = (readout().complex() * (Complex::new(1.0, 0.0) - (-c * 450.0).exp()) * (-c * 1600.0).exp()).norm();
        assert!((amps[3] / asym - 1.0).abs() < 1e-6);
    }

    #[test]
    fn analytic_rejects_kerr_and_degenerate_window() {
        let p = DeviceParams::reference_q1();
        assert!(matches!(
            sspe_analytic(&p.clone().with_kerr(-0.011), QubitState::Ground, &readout(), 50.0),
            Err(Error::KerrNotSupported(_))
        ));
        let mut q = p.clone();
        q.kappa = 1e-15;
        // one full detuning period: e^{ΔτC/2} = e^{2πi} = 1
        let period = core::f64::consts::TAU / complex_rate(&q, QubitState::Ground).unwrap().detuning();
        assert!(matches!(sspe_analytic(&q, QubitState::Ground, &readout(), period), Err(Error::DegenerateDuration(_))));
    }

    #[test]
    fn amplitude_cap() {
        let p = DeviceParams::reference_q1();
        let opts = OptimizeOptions { max_amplitude: Some(1e-3), ..OptimizeOptions::default() };
        assert!(matches!(
            sspe_design(&p, &[QubitState::Ground], &readout(), 50.0, &opts),
            Err(Error::AmplitudeCapExceeded { .. })
        ));
        assert!(matches!(
            sspe_optimize(&p, &[QubitState::Ground], &readout(), 50.0, &[1.0], &opts),
            Err(Error::AmplitudeCapExceeded { .. })
        ));
    }

    #[test]
    fn bad_weights() {
        let p = DeviceParams::reference_q1();
        let o = OptimizeOptions::default();
        assert!(sspe_optimize(&p, &[QubitState::Ground], &readout(), 50.0, &[0.0], &o).is_err());
        assert!(sspe_optimize(&p, &[QubitState::Ground], &readout(), 50.0, &[1.0, 1.0], &o).is_err());
        assert!(sspe_optimize(&p, &[], &readout(), 50.0, &[], &o).is_err());
        assert!(sspe_optimize(&p, &[QubitState::Ground], &readout(), 0.0, &[1.0], &o).is_err());
    }
}
