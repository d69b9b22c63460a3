use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use serde::{Deserialize, Serialize};

use super::FitResult;
use crate::cavity::complex_rate;
use crate::optim::LevenbergMarquardt;
use crate::units::{khz_to_mhz, mhz_to_rad_ns};
use crate::{DeviceParams, Error, QubitState, Result};

/// Steady-state photon number of the Kerr cavity under a constant drive
/// `drive_amp` (rad/ns).
///
/// Solves `n [4(δ + K n)² + κ²] = 4ε²` and returns the smallest
/// non-negative root, i.e. the branch reached by ringing up from vacuum.
pub fn kerr_steady_state(params: &DeviceParams, j: QubitState, drive_amp: f64) -> Result<f64> {
    let rate = complex_rate(params, j)?;
    steady_photons(rate.detuning(), rate.kappa(), mhz_to_rad_ns(params.kerr_coeff), drive_amp)
}

pub(crate) fn steady_photons(delta: f64, kappa: f64, kerr: f64, eps: f64) -> Result<f64> {
    let rhs = 4.0 * eps * eps;
    if rhs == 0.0 {
        return Ok(0.0);
    }
    if kerr == 0.0 {
        return Ok(rhs / (4.0 * delta * delta + kappa * kappa));
    }
    let f = |n: f64| n * (4.0 * (delta + kerr * n).powi(2) + kappa * kappa) - rhs;
    let df = |n: f64| 12.0 * kerr * kerr * n * n + 16.0 * delta * kerr * n + 4.0 * delta * delta + kappa * kappa;

    // f(0) < 0 and f(8ε²/κ²) ≥ 4ε² > 0; split at the critical points so each
    // piece is monotone and the first sign change brackets the smallest root
    let upper = 8.0 * eps * eps / (kappa * kappa);
    let (qa, qb, qc) = (12.0 * kerr * kerr, 16.0 * delta * kerr, 4.0 * delta * delta + kappa * kappa);
    let disc = qb * qb - 4.0 * qa * qc;
    let mut cuts: Vec<f64> = Vec::with_capacity(4);
    cuts.push(0.0);
    if disc > 0.0 {
        let sq = disc.sqrt();
        let mut roots = [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)];
        roots.sort_by(f64::total_cmp);
        cuts.extend(roots.iter().copied().filter(|r| *r > 0.0 && *r < upper));
    }
    cuts.push(upper);

    let (mut lo, mut hi) =
        cuts.windows(2).map(|w| (w[0], w[1])).find(|&(_, b)| f(b) >= 0.0).ok_or(Error::NoRealRoot)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let mut n = 0.5 * (lo + hi);
    for _ in 0..3 {
        let d = df(n);
        if d == 0.0 {
            break;
        }
        let next = n - f(n) / d;
        if !(next >= lo && next <= hi) {
            break;
        }
        n = next;
    }
    Ok(n)
}

/// Starting point for the calibration fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KerrInit {
    /// rad/ns per volt; `None` estimates it from the lowest-power points.
    pub volt_to_eps: Option<f64>,
    pub kerr_khz: f64,
}

impl Default for KerrInit {
    fn default() -> Self {
        KerrInit { volt_to_eps: None, kerr_khz: 0.0 }
    }
}

/// Fits `n(V²) = kerr_steady_state(ε = a·V)` for the voltage-to-drive factor
/// `a` (rad/ns per V) and the Kerr coefficient (kHz). Points are `(V², n)`.
pub fn fit_kerr_calibration(
    points: &[(f64, f64)],
    params: &DeviceParams,
    j: QubitState,
    init: &KerrInit,
) -> Result<FitResult> {
    if points.len() < 6 {
        return Err(Error::InsufficientSamples { needed: 6, got: points.len() });
    }
    if points.iter().any(|p| !(p.0 >= 0.0 && p.0.is_finite() && p.1.is_finite())) {
        return Err(Error::InvalidArgument("calibration points need finite V² >= 0 and finite n"));
    }
    let rate = complex_rate(params, j)?;
    let (delta, kappa) = (rate.detuning(), rate.kappa());

    let a0 = match init.volt_to_eps {
        Some(a) => a,
        None => {
            // linear response through the origin on the lower half of the sweep
            let mut sorted = points.to_vec();
            sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
            let low = &sorted[..(sorted.len() / 2).max(2)];
            let sxy: f64 = low.iter().map(|p| p.0 * p.1).sum();
            let sxx: f64 = low.iter().map(|p| p.0 * p.0).sum();
            let slope = if sxx > 0.0 { (sxy / sxx).max(0.0) } else { 0.0 };
            (slope * rate.value().norm_sqr() / 4.0).sqrt()
        }
    };

    let model = |x: &[f64], v2: f64| steady_photons(delta, kappa, mhz_to_rad_ns(khz_to_mhz(x[1])), x[0] * v2.sqrt());
    let residuals =
        |x: &[f64]| -> Vec<f64> { points.iter().map(|&(v2, n)| model(x, v2).map_or(f64::NAN, |m| m - n)).collect() };
    let rep = LevenbergMarquardt::default().minimize(residuals, &[a0, init.kerr_khz]);
    let mut out = FitResult::new(rep.cost, rep.converged, rep.iterations)
        .with("volt_to_eps", rep.x[0].abs())
        .with("kerr_khz", rep.x[1]);
    if let Some(cov) = rep.covariance_diag {
        out = out.with_variance("volt_to_eps", cov[0]).with_variance("kerr_khz", cov[1]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavity::linear_steady_photons;

    #[test]
    fn linear_limit() {
        let p = DeviceParams::reference_q1();
        for eps in [0.0, 1e-3, 0.02, 0.05] {
            let c = complex_rate(&p, QubitState::Excited).unwrap();
            assert_eq!(kerr_steady_state(&p, QubitState::Excited, eps).unwrap(), linear_steady_photons(c, eps));
        }
    }

    #[test]
    fn zero_drive() {
        let p = DeviceParams::reference_q1().with_kerr(-0.011);
        assert_eq!(kerr_steady_state(&p, QubitState::Ground, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn root_satisfies_cubic() {
        let p = DeviceParams::reference_q1().with_kerr(-0.011);
        let c = complex_rate(&p, QubitState::Ground).unwrap();
        let k = mhz_to_rad_ns(-0.011);
        for eps in [0.01, 0.03, 0.05] {
            let n = kerr_steady_state(&p, QubitState::Ground, eps).unwrap();
            let lhs = n * (4.0 * (c.detuning() + k * n).powi(2) + c.kappa().powi(2));
            assert!((lhs / (4.0 * eps * eps) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn picks_lowest_branch_when_bistable() {
        // δ = 3κ, K n pulls toward resonance: three roots for suitable ε
        let (delta, kappa, kerr) = (3.0, 1.0, -0.01);
        let mut saw_three = false;
        for k in 1..200 {
            let eps = 0.1 * k as f64;
            let n = steady_photons(delta, kappa, kerr, eps).unwrap();
            let f = |m: f64| m * (4.0 * (delta + kerr * m).powi(2) + kappa * kappa) - 4.0 * eps * eps;
            // no sign change below the returned root
            let below = (0..1000).map(|i| n * i as f64 / 1000.0).all(|m| f(m) < 0.0 || m == n);
            assert!(below, "eps {eps}");
            let roots = (0..200_000).map(|i| i as f64 * 0.005).collect::<Vec<_>>();
            let changes = roots.windows(2).filter(|w| f(w[0]).signum() != f(w[1]).signum()).count();
            saw_three |= changes == 3;
        }
        assert!(saw_three);
    }
}
