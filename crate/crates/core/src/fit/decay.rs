use super::FitResult;
use crate::units::MHZ_TO_RAD_PER_NS;
use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Log-linear least squares of `ln n` against `t` (ns).
///
/// Returns `n0` (photons at `t = 0`), `rate` (ordinary MHz, i.e. the
/// fitted energy decay rate divided by 2π) and `rate_rad_per_ns`.
pub fn exp_decay_fit(samples: &[(f64, f64)]) -> Result<FitResult> {
    if let Some(index) = samples.iter().position(|s| !(s.1 > 0.0)) {
        return Err(Error::NonPositiveSample { index });
    }
    if samples.len() < 3 {
        return Err(Error::InsufficientSamples { needed: 3, got: samples.len() });
    }
    let m = samples.len() as f64;
    let t_mean = samples.iter().map(|s| s.0).sum::<f64>() / m;
    let y_mean = samples.iter().map(|s| s.1.ln()).sum::<f64>() / m;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(t, n) in samples {
        let dt = t - t_mean;
        sxy += dt * (n.ln() - y_mean);
        sxx += dt * dt;
    }
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("decay samples need distinct times"));
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * t_mean;
    let ssr: f64 = samples.iter().map(|&(t, n)| (n.ln() - intercept - slope * t).powi(2)).sum();
    let rate = -slope + 0.0;
    let var_slope = if samples.len() > 2 { ssr / (m - 2.0) / sxx } else { 0.0 };
    Ok(FitResult::new(ssr, true, 0)
        .with("n0", intercept.exp())
        .with("rate", rate / MHZ_TO_RAD_PER_NS)
        .with("rate_rad_per_ns", rate)
        .with_variance("rate", var_slope / (MHZ_TO_RAD_PER_NS * MHZ_TO_RAD_PER_NS)))
}
