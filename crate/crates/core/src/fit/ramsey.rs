use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use serde::{Deserialize, Serialize};

use super::FitResult;
use crate::cavity::half_splitting;
use crate::optim::LevenbergMarquardt;
use crate::units::MHZ_TO_RAD_PER_US;
use crate::{Complex, DeviceParams, Error, Result};

/// Ramsey signal with photon-induced dephasing from a decaying cavity
/// population. Rates in rad/µs (Γ₂ in 1/µs), times in µs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RamseyModel {
    pub gamma2: f64,
    pub fringe: f64,
    pub chi: f64,
    pub kappa: f64,
    pub phi0: f64,
    pub n0: f64,
}

impl RamseyModel {
    /// Fixed quantities from the device: `Γ₂ = 1/T₂^echo`, `χ` the half
    /// splitting and `κ`, converted to angular µs units.
    pub fn from_device(params: &DeviceParams, fringe: f64, phi0: f64, n0: f64) -> Result<Self> {
        Ok(RamseyModel {
            gamma2: 1.0 / params.t2_echo,
            fringe,
            chi: half_splitting(params)? * MHZ_TO_RAD_PER_US,
            kappa: params.kappa * MHZ_TO_RAD_PER_US,
            phi0,
            n0,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma2 >= 0.0) || !(self.kappa > 0.0) || !(self.n0 >= 0.0) {
            return Err(Error::InvalidArgument("Ramsey model needs gamma2 >= 0, kappa > 0, n0 >= 0"));
        }
        Ok(())
    }

    pub fn fixed(&self) -> RamseyFixed {
        RamseyFixed { gamma2: self.gamma2, chi: self.chi, kappa: self.kappa }
    }
}

/// `S(t) = ½[1 − Im exp(−(Γ₂ + iΔω)t + i(φ₀ − 2n₀χZ(t)))]` with
/// `Z(t) = (1 − e^{−(κ+2iχ)t}) / (κ + 2iχ)`.
pub fn ramsey_forward(model: &RamseyModel, t: f64) -> f64 {
    let k = Complex::new(model.kappa, 2.0 * model.chi);
    let z = (Complex::new(1.0, 0.0) - (-k * t).exp()) / k;
    let i = Complex::new(0.0, 1.0);
    let exponent = -Complex::new(model.gamma2, model.fringe) * t
        + i * (Complex::new(model.phi0, 0.0) - z * (2.0 * model.n0 * model.chi));
    0.5 * (1.0 - exponent.exp().im)
}

/// Parameters held fixed during a Ramsey fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RamseyFixed {
    pub gamma2: f64,
    pub chi: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RamseyInit {
    pub fringe: f64,
    pub phi0: f64,
    pub n0: f64,
}

/// Levenberg-Marquardt over `(Δω, φ₀, n₀)`; `n₀ = s²` keeps it non-negative.
pub fn fit_ramsey(samples: &[(f64, f64)], fixed: &RamseyFixed, init: &RamseyInit) -> Result<FitResult> {
    if samples.len() < 10 {
        return Err(Error::InsufficientSamples { needed: 10, got: samples.len() });
    }
    if !(fixed.kappa > 0.0) {
        return Err(Error::InvalidArgument("kappa must be positive"));
    }
    let t_min = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let t_max = samples.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
    if t_max - t_min < 2.0 / fixed.kappa {
        return Err(Error::InvalidArgument("Ramsey samples must span at least 2/kappa"));
    }
    let model_at = |x: &[f64]| RamseyModel {
        gamma2: fixed.gamma2,
        fringe: x[0],
        chi: fixed.chi,
        kappa: fixed.kappa,
        phi0: x[1],
        n0: x[2] * x[2],
    };
    let residuals = |x: &[f64]| -> Vec<f64> {
        let m = model_at(x);
        samples.iter().map(|&(t, s)| ramsey_forward(&m, t) - s).collect()
    };
    let s0 = init.n0.max(1e-4).sqrt();
    let rep = LevenbergMarquardt::default().minimize(residuals, &[init.fringe, init.phi0, s0]);
    let s = rep.x[2];
    let mut out = FitResult::new(rep.cost, rep.converged, rep.iterations)
        .with("fringe", rep.x[0])
        .with("phi0", rep.x[1])
        .with("n0", s * s);
    if let Some(cov) = rep.covariance_diag {
        out =
            out.with_variance("fringe", cov[0]).with_variance("phi0", cov[1]).with_variance("n0", 4.0 * s * s * cov[2]);
    }
    Ok(out)
}
