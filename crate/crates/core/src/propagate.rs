//! Cavity-field propagation under piecewise-constant drives.
//!
//! Equation of motion (angular units, rad/ns):
//!
//! ```text
//! dα/dt = −i ε(t) − i (Δ_r + χ_j) α − i K |α|² α − (κ/2) α
//!       = −i ε(t) − (C_j / 2) α − i K |α|² α
//! ```
//!
//! For `K = 0` each constant segment has the exact solution
//! `α(t) = α_ss + (α(t₀) − α_ss) e^{−C_j (t−t₀)/2}` with `α_ss = −2iε/C_j`.
//! The general case is integrated with classical fixed-step RK4.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use num_traits::Zero;

use crate::cavity::{complex_rate, ComplexRate};
use crate::units::mhz_to_rad_ns;
use crate::{Complex, DeviceParams, Error, PulseSchedule, QubitState, Result, Trajectory};

const I: Complex = Complex::new(0.0, 1.0);

/// Resolved single-state cavity dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityModel {
    pub rate: ComplexRate,
    /// Kerr coefficient, rad/ns.
    pub kerr: f64,
}

impl CavityModel {
    pub fn new(params: &DeviceParams, j: QubitState) -> Result<Self> {
        params.validate()?;
        Ok(CavityModel { rate: complex_rate(params, j)?, kerr: mhz_to_rad_ns(params.kerr_coeff) })
    }

    pub fn linear(rate: ComplexRate) -> Self {
        CavityModel { rate, kerr: 0.0 }
    }

    pub fn is_linear(&self) -> bool {
        self.kerr == 0.0
    }

    #[inline]
    pub fn derivative(&self, alpha: Complex, drive: Complex) -> Complex {
        let half_c = self.rate.0 * 0.5;
        -I * drive - half_c * alpha - I * (self.kerr * alpha.norm_sqr()) * alpha
    }

    #[inline]
    fn rk4_step(&self, alpha: Complex, drive: Complex, h: f64) -> Complex {
        let k1 = self.derivative(alpha, drive);
        let k2 = self.derivative(alpha + k1 * (0.5 * h), drive);
        let k3 = self.derivative(alpha + k2 * (0.5 * h), drive);
        let k4 = self.derivative(alpha + k3 * h, drive);
        alpha + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
    }

    /// Linear fixed point for a constant drive, `−2iε/C`.
    pub fn steady_state(&self, drive: Complex) -> Complex {
        -I * drive * 2.0 / self.rate.0
    }

    /// Exact linear evolution over `duration` ns under constant `drive`.
    pub fn evolve_exact(&self, alpha0: Complex, drive: Complex, duration: f64) -> Complex {
        let ss = self.steady_state(drive);
        ss + (alpha0 - ss) * (-self.rate.0 * (0.5 * duration)).exp()
    }

    /// RK4 evolution over `duration` with steps no longer than `dt`. Only
    /// the end point is returned.
    pub fn evolve_rk4(&self, alpha0: Complex, drive: Complex, duration: f64, dt: f64) -> Result<Complex> {
        let n = steps_for(duration, dt);
        let h = duration / n as f64;
        let mut a = alpha0;
        for k in 0..n {
            a = self.rk4_step(a, drive, h);
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(Error::NonFinite((k + 1) as f64 * h));
            }
        }
        Ok(a)
    }

    /// End-of-segment field, exact when linear and RK4 otherwise.
    pub fn evolve(&self, alpha0: Complex, drive: Complex, duration: f64, dt: f64) -> Result<Complex> {
        if self.is_linear() {
            Ok(self.evolve_exact(alpha0, drive, duration))
        } else {
            self.evolve_rk4(alpha0, drive, duration, dt)
        }
    }
}

/// Number of equal sub-steps so that each is at most `dt` long. Durations
/// that are an integer multiple of `dt` (up to rounding) keep that step.
pub(crate) fn steps_for(duration: f64, dt: f64) -> usize {
    let ratio = duration / dt;
    let rounded = ratio.round();
    let n = if (ratio - rounded).abs() <= 1e-9 * rounded.max(1.0) { rounded } else { ratio.ceil() };
    (n as usize).max(1)
}

fn check_step(dt: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument("time step must be positive and finite"));
    }
    Ok(())
}

/// Walks a schedule on its per-segment grid. `advance(alpha, drive, offset)`
/// returns the field at `offset` ns into the current segment given the
/// field at the previous grid point (`incremental`) or at the segment start.
fn sample_schedule<F>(
    schedule: &PulseSchedule,
    dt: f64,
    alpha0: Complex,
    incremental: bool,
    mut advance: F,
) -> Result<(Vec<f64>, Vec<Complex>)>
where
    F: FnMut(Complex, Complex, f64) -> Result<Complex>,
{
    let total: usize = schedule.segments().iter().map(|s| steps_for(s.duration, dt)).sum();
    let mut times = Vec::with_capacity(total + 1);
    let mut alpha = Vec::with_capacity(total + 1);
    times.push(0.0);
    alpha.push(alpha0);
    let mut t0 = 0.0;
    let mut a_start = alpha0;
    for seg in schedule.segments() {
        let n = steps_for(seg.duration, dt);
        let h = seg.duration / n as f64;
        let drive = seg.complex();
        let mut a = a_start;
        for k in 1..=n {
            let offset = if k == n { seg.duration } else { k as f64 * h };
            a = if incremental { advance(a, drive, h)? } else { advance(a_start, drive, offset)? };
            times.push(if k == n { t0 + seg.duration } else { t0 + offset });
            alpha.push(a);
        }
        t0 += seg.duration;
        a_start = a;
    }
    Ok((times, alpha))
}

/// Exact linear propagation from vacuum, sampled every `sample_dt` ns (the
/// step is shortened per segment so that segment boundaries are grid points).
pub fn propagate_closed_form(
    params: &DeviceParams,
    j: QubitState,
    schedule: &PulseSchedule,
    sample_dt: f64,
) -> Result<Trajectory> {
    propagate_closed_form_from(params, j, schedule, sample_dt, Complex::zero())
}

pub fn propagate_closed_form_from(
    params: &DeviceParams,
    j: QubitState,
    schedule: &PulseSchedule,
    sample_dt: f64,
    alpha0: Complex,
) -> Result<Trajectory> {
    if !params.is_linear() {
        return Err(Error::KerrNotSupported(params.kerr_coeff));
    }
    check_step(sample_dt)?;
    let model = CavityModel::new(params, j)?;
    let (times, alpha) =
        sample_schedule(schedule, sample_dt, alpha0, false, |a0, drive, dt| Ok(model.evolve_exact(a0, drive, dt)))?;
    Ok(Trajectory::new(times, alpha, j))
}

/// RK4 propagation from vacuum, Kerr term included.
pub fn propagate_ode(params: &DeviceParams, j: QubitState, schedule: &PulseSchedule, dt: f64) -> Result<Trajectory> {
    propagate_ode_from(params, j, schedule, dt, Complex::zero())
}

/// RK4 propagation from an arbitrary initial field. `dt` must not exceed a
/// tenth of the shortest segment.
pub fn propagate_ode_from(
    params: &DeviceParams,
    j: QubitState,
    schedule: &PulseSchedule,
    dt: f64,
    alpha0: Complex,
) -> Result<Trajectory> {
    check_step(dt)?;
    let limit = schedule.min_duration() / 10.0;
    if dt > limit * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge { dt, limit });
    }
    let model = CavityModel::new(params, j)?;
    let mut t = 0.0;
    let (times, alpha) = sample_schedule(schedule, dt, alpha0, true, |a, drive, h| {
        let next = model.rk4_step(a, drive, h);
        t += h;
        if !(next.re.is_finite() && next.im.is_finite()) {
            return Err(Error::NonFinite(t));
        }
        Ok(next)
    })?;
    Ok(Trajectory::new(times, alpha, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavity::linear_steady_photons;
    use crate::DriveSegment;
    use alloc::vec;

    fn zero_detuning() -> DeviceParams {
        let mut p = DeviceParams::reference_q1();
        p.coupling = 1e-300;
        p.drive_freq = Some(p.bare_cavity_freq);
        p
    }

    #[test]
    fn steps_divide_duration() {
        assert_eq!(steps_for(50.0, 0.01), 5000);
        assert_eq!(steps_for(900.0, 0.01), 90000);
        assert_eq!(steps_for(10.0, 3.0), 4);
        assert_eq!(steps_for(1.0, 5.0), 1);
    }

    #[test]
    fn undriven_vacuum_stays_vacuum() {
        let p = DeviceParams::reference_q1();
        let s =
            PulseSchedule::custom(vec![DriveSegment::idle(100.0).unwrap(), DriveSegment::new(0.0, 1.0, 50.0).unwrap()])
                .unwrap();
        let cf = propagate_closed_form(&p, QubitState::Ground, &s, 1.0).unwrap();
        assert!(cf.alpha.iter().all(|a| a.norm() == 0.0));
        let ode = propagate_ode(&p.clone().with_kerr(-0.011), QubitState::Excited, &s, 1.0).unwrap();
        assert!(ode.alpha.iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn single_segment_reaches_fixed_point() {
        let p = DeviceParams::reference_q1();
        let eps = 0.02;
        let s = PulseSchedule::custom(vec![DriveSegment::new(eps, 0.3, 5000.0).unwrap()]).unwrap();
        let tr = propagate_closed_form(&p, QubitState::Ground, &s, 10.0).unwrap();
        let c = complex_rate(&p, QubitState::Ground).unwrap();
        let delta = c.detuning();
        let kappa = c.kappa();
        let expected = 4.0 * eps * eps / (4.0 * delta * delta + kappa * kappa);
        assert!((tr.final_photons() / expected - 1.0).abs() < 1e-10);
        assert!((linear_steady_photons(c, eps) / expected - 1.0).abs() < 1e-14);
    }

    #[test]
    fn resonant_drive_at_half_kappa_gives_one_photon() {
        let p = zero_detuning();
        let kappa = mhz_to_rad_ns(p.kappa);
        let s = PulseSchedule::custom(vec![DriveSegment::new(kappa / 2.0, 0.0, 5000.0).unwrap()]).unwrap();
        let tr = propagate_closed_form(&p, QubitState::Ground, &s, 5.0).unwrap();
        assert!((tr.final_photons() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn closed_form_rejects_kerr() {
        let p = DeviceParams::reference_q1().with_kerr(-0.011);
        let s = PulseSchedule::custom(vec![DriveSegment::idle(10.0).unwrap()]).unwrap();
        assert!(matches!(propagate_closed_form(&p, QubitState::Ground, &s, 1.0), Err(Error::KerrNotSupported(_))));
    }

    #[test]
    fn ode_step_limit() {
        let p = DeviceParams::reference_q1();
        let s = PulseSchedule::custom(vec![
            DriveSegment::new(0.01, 0.0, 900.0).unwrap(),
            DriveSegment::idle(50.0).unwrap(),
        ])
        .unwrap();
        assert!(propagate_ode(&p, QubitState::Ground, &s, 5.0).is_ok());
        assert!(matches!(propagate_ode(&p, QubitState::Ground, &s, 5.1), Err(Error::StepTooLarge { .. })));
        assert!(propagate_ode(&p, QubitState::Ground, &s, 0.0).is_err());
    }

    #[test]
    fn ode_overflow_is_reported() {
        let mut p = DeviceParams::reference_q1().with_kerr(-1e6);
        p.kappa = 1e-9;
        let s = PulseSchedule::custom(vec![DriveSegment::new(1e3, 0.0, 100.0).unwrap()]).unwrap();
        assert!(matches!(propagate_ode(&p, QubitState::Ground, &s, 1.0), Err(Error::NonFinite(_))));
    }

    #[test]
    fn free_decay_factor() {
        // e^{−κ t} with κ/2π = 1.711 MHz and t = 50 ns
        let p = DeviceParams::reference_q1().with_kerr(-0.011);
        let s = PulseSchedule::custom(vec![DriveSegment::idle(50.0).unwrap()]).unwrap();
        let a0 = Complex::new(3.0, -1.0);
        let tr = propagate_ode_from(&p, QubitState::Ground, &s, 0.01, a0).unwrap();
        let ratio = tr.final_photons() / a0.norm_sqr();
        assert!((ratio - (-mhz_to_rad_ns(1.711) * 50.0).exp()).abs() < 1e-10);
        assert!((ratio - 0.584).abs() < 5e-4);
    }
}
