//! Dispersive shifts, complex relaxation rates and related device arithmetic.

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::units::{mhz_to_rad_ns, MHZ_TO_RAD_PER_NS};
use crate::{ChiSource, Complex, DeviceParams, Error, QubitState, Result};

const DENOMINATOR_FLOOR_MHZ: f64 = 1e-9;

/// Dispersive shift `χ_j / 2π` in MHz from the transmon ladder.
///
/// `χ_0 = −g²/Δ`; for `j ≥ 1`, `χ_j = χ_{j−1,j} − χ_{j,j+1}` with
/// `χ_{j−1,j} = j g² / (Δ + (j−1) η)`. The `2π` factors cancel so the
/// arithmetic stays in ordinary MHz.
pub fn chi_shift(params: &DeviceParams, j: QubitState) -> Result<f64> {
    let g2 = params.coupling * params.coupling;
    let delta = params.qubit_detuning();
    let eta = params.anharmonicity;
    // χ_{j−1,j} for the ladder index `level` (level ≥ 1)
    let ladder = |level: u32| -> Result<f64> {
        let denom = delta + f64::from(level - 1) * eta;
        if denom.abs() < DENOMINATOR_FLOOR_MHZ {
            return Err(Error::DegenerateDetuning(denom));
        }
        Ok(f64::from(level) * g2 / denom)
    };
    match j {
        QubitState::Ground => {
            if delta.abs() < DENOMINATOR_FLOOR_MHZ {
                return Err(Error::DegenerateDetuning(delta));
            }
            Ok(-g2 / delta)
        }
        QubitState::Excited => Ok(ladder(1)? - ladder(2)?),
    }
}

/// Dispersive shift `χ_j / 2π` (MHz) according to `params.chi_source`.
///
/// With [`ChiSource::Measured`] the shift is the measured dressed cavity
/// frequency minus the bare one, and `χ_1 = χ_0 + (ω_|1⟩ − ω_|0⟩)`.
pub fn dispersive_shift(params: &DeviceParams, j: QubitState) -> Result<f64> {
    match params.chi_source {
        ChiSource::Formula => chi_shift(params, j),
        ChiSource::Measured => {
            let dressed0 = params.dressed_cavity_freq_0.ok_or(Error::InvalidParams("missing dressed_cavity_freq_0"))?;
            let split = params.dispersive_shift.ok_or(Error::InvalidParams("missing dispersive_shift"))?;
            let chi0 = dressed0 - params.bare_cavity_freq;
            Ok(match j {
                QubitState::Ground => chi0,
                QubitState::Excited => chi0 + split,
            })
        }
    }
}

/// Half the state splitting, `(χ_1 − χ_0)/2`, MHz. This is the `χ` that sets
/// the qubit ac-Stark shift `2χn` and enters the Ramsey photon model.
pub fn half_splitting(params: &DeviceParams) -> Result<f64> {
    Ok(0.5 * (dispersive_shift(params, QubitState::Excited)? - dispersive_shift(params, QubitState::Ground)?))
}

/// Drive frequency in MHz, defaulting to the mean dressed cavity frequency.
pub fn drive_frequency(params: &DeviceParams) -> Result<f64> {
    match params.drive_freq {
        Some(f) => Ok(f),
        None => {
            let chi0 = dispersive_shift(params, QubitState::Ground)?;
            let chi1 = dispersive_shift(params, QubitState::Excited)?;
            Ok(params.bare_cavity_freq + 0.5 * (chi0 + chi1))
        }
    }
}

/// Cavity detuning from the drive for qubit state `j`, `Δ_r + χ_j`, MHz.
pub fn state_detuning(params: &DeviceParams, j: QubitState) -> Result<f64> {
    let delta_r = params.bare_cavity_freq - drive_frequency(params)?;
    Ok(delta_r + dispersive_shift(params, j)?)
}

/// `C_j = κ + 2i(Δ_r + χ_j)` in rad/ns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexRate(pub Complex);

impl ComplexRate {
    pub fn value(self) -> Complex {
        self.0
    }

    /// Energy decay rate `κ = Re C`, rad/ns.
    pub fn kappa(self) -> f64 {
        self.0.re
    }

    /// Angular detuning `Δ_r + χ_j = Im C / 2`, rad/ns.
    pub fn detuning(self) -> f64 {
        0.5 * self.0.im
    }
}

pub fn complex_rate(params: &DeviceParams, j: QubitState) -> Result<ComplexRate> {
    let delta = mhz_to_rad_ns(state_detuning(params, j)?);
    Ok(ComplexRate(Complex::new(params.kappa * MHZ_TO_RAD_PER_NS, 2.0 * delta)))
}

/// `n_crit = (Δ / 2g)²`.
pub fn critical_photon_number(params: &DeviceParams) -> Result<f64> {
    if params.coupling <= 0.0 {
        return Err(Error::ZeroCoupling);
    }
    let x = params.qubit_detuning() / (2.0 * params.coupling);
    Ok(x * x)
}

/// Steady-state photon number of the linear cavity under a constant drive
/// `ε` (rad/ns): `4ε² / (4δ² + κ²)`.
pub fn linear_steady_photons(rate: ComplexRate, amplitude: f64) -> f64 {
    4.0 * amplitude * amplitude / rate.0.norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn chi0_reference() {
        let p = DeviceParams::reference_q1();
        // −g²/Δ = −147.14² / (5445.786 − 7123.9)
        let expected = 147.14f64 * 147.14 / 1678.114;
        assert_relative_eq!(chi_shift(&p, QubitState::Ground).unwrap(), expected, max_relative = 1e-14);
        assert!((chi_shift(&p, QubitState::Ground).unwrap() - 12.902).abs() < 1e-3);
    }

    #[test]
    fn chi1_reference() {
        let p = DeviceParams::reference_q1();
        let g2 = 147.14f64 * 147.14;
        let chi01 = g2 / -1678.114;
        let chi12 = 2.0 * g2 / (-1678.114 - 216.744);
        let chi1 = chi_shift(&p, QubitState::Excited).unwrap();
        assert_relative_eq!(chi1, chi01 - chi12, max_relative = 1e-13);
        assert!((chi1 - 9.950).abs() < 5e-4);
    }

    #[test]
    fn zero_coupling_gives_zero_shift() {
        let mut p = DeviceParams::reference_q1();
        p.coupling = 0.0;
        assert_eq!(chi_shift(&p, QubitState::Ground).unwrap(), 0.0);
        assert_eq!(chi_shift(&p, QubitState::Excited).unwrap(), 0.0);
        assert_eq!(critical_photon_number(&p), Err(Error::ZeroCoupling));
    }

    #[test]
    fn degenerate_detuning() {
        let mut p = DeviceParams::reference_q1();
        p.qubit_freq = p.bare_cavity_freq;
        assert!(matches!(chi_shift(&p, QubitState::Ground), Err(Error::DegenerateDetuning(_))));
        let mut p = DeviceParams::reference_q1();
        p.qubit_freq = p.bare_cavity_freq - p.anharmonicity;
        assert!(matches!(chi_shift(&p, QubitState::Excited), Err(Error::DegenerateDetuning(_))));
    }

    #[test]
    fn measured_shifts() {
        let p = DeviceParams::reference_q1().with_chi_source(ChiSource::Measured);
        assert_relative_eq!(dispersive_shift(&p, QubitState::Ground).unwrap(), 15.489, epsilon = 1e-9);
        assert_relative_eq!(dispersive_shift(&p, QubitState::Excited).unwrap(), 11.628, epsilon = 1e-9);
        assert_relative_eq!(half_splitting(&p).unwrap(), -1.9305, epsilon = 1e-9);
    }

    #[test]
    fn kappa_only_rate() {
        let mut p = DeviceParams::reference_q1();
        p.coupling = 0.0;
        p.drive_freq = Some(p.bare_cavity_freq);
        let c = complex_rate(&p, QubitState::Ground).unwrap();
        assert_relative_eq!(c.0.re, 0.010_750, epsilon = 1e-6);
        assert_eq!(c.0.im, 0.0);
        p.kappa = 0.0;
        assert_eq!(complex_rate(&p, QubitState::Ground).unwrap().0, Complex::new(0.0, 0.0));
    }

    #[test]
    fn symmetric_drive_mirrors_detuning() {
        let p = DeviceParams::reference_q1();
        let c0 = complex_rate(&p, QubitState::Ground).unwrap().0;
        let c1 = complex_rate(&p, QubitState::Excited).unwrap().0;
        let chi0 = mhz_to_rad_ns(chi_shift(&p, QubitState::Ground).unwrap());
        let chi1 = mhz_to_rad_ns(chi_shift(&p, QubitState::Excited).unwrap());
        let delta_r = mhz_to_rad_ns(p.bare_cavity_freq - drive_frequency(&p).unwrap());
        assert_relative_eq!(c0.im + c1.im, 2.0 * (2.0 * delta_r + chi0 + chi1), epsilon = 1e-15);
        assert!((c0.im + c1.im).abs() < 1e-12);
        assert_relative_eq!(c0.im, -c1.im, max_relative = 1e-12);
        assert_eq!(c0.re, c1.re);
    }

    #[test]
    fn critical_photons() {
        let p = DeviceParams::reference_q1();
        let n = critical_photon_number(&p).unwrap();
        assert_relative_eq!(n, (1678.114f64 / 294.28).powi(2), max_relative = 1e-12);
        assert!((n - 32.5).abs() < 0.05);
        let mut q = p.clone();
        q.qubit_freq = q.bare_cavity_freq;
        assert_eq!(critical_photon_number(&q).unwrap(), 0.0);
        q.qubit_freq = q.bare_cavity_freq + 2.0 * q.coupling;
        assert_relative_eq!(critical_photon_number(&q).unwrap(), 1.0, max_relative = 1e-12);
    }
}
