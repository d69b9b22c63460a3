use alloc::collections::BTreeSet;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use serde::{Deserialize, Serialize};

use super::FitResult;
use crate::optim::LevenbergMarquardt;
use crate::{Error, Result};

/// Repeated-measurement model `P_m = C (1 − γ_o − γ_b)^{m−1} + P_∞` with
/// `P_∞ = γ_b / (γ_o + γ_b)` and `C = P₀ − P_∞`. `P_m` is the probability of
/// still finding the qubit in its initial state at measurement `m ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BackactionModel {
    /// Probability per measurement of leaving the initial state.
    pub gamma_out: f64,
    /// Probability per measurement of returning to it.
    pub gamma_back: f64,
    pub p0: f64,
}

impl BackactionModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_out >= 0.0 && self.gamma_back >= 0.0 && self.gamma_out + self.gamma_back < 1.0) {
            return Err(Error::InvalidArgument("need 0 <= gamma_out, gamma_back and gamma_out + gamma_back < 1"));
        }
        if !(0.0..=1.0).contains(&self.p0) {
            return Err(Error::InvalidArgument("p0 must be a probability"));
        }
        Ok(())
    }

    /// `P_∞`; `None` when both rates vanish.
    pub fn steady(&self) -> Option<f64> {
        let total = self.gamma_out + self.gamma_back;
        (total > 0.0).then(|| self.gamma_back / total)
    }

    /// Geometric ratio `1 − γ_o − γ_b` between successive deviations.
    pub fn ratio(&self) -> f64 {
        1.0 - self.gamma_out - self.gamma_back
    }
}

/// `P_m`. With both rates zero nothing ever happens and `P₀` is returned.
pub fn backaction_forward(model: &BackactionModel, m: u32) -> f64 {
    debug_assert!(m >= 1, "measurement index starts at 1");
    match model.steady() {
        None => model.p0,
        Some(p_inf) => (model.p0 - p_inf) * model.ratio().powi(m.saturating_sub(1) as i32) + p_inf,
    }
}

/// Probability of intrinsic relaxation between measurements, `1 − e^{−Δt/T₁}`.
pub fn intrinsic_relaxation(interval_us: f64, t1_us: f64) -> f64 {
    1.0 - (-interval_us / t1_us).exp()
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn logit(p: f64) -> f64 {
    let p = p.clamp(1e-9, 1.0 - 1e-9);
    (p / (1.0 - p)).ln()
}

/// Rates from the internal parameters: total `γ_o + γ_b = σ(u)` and
/// steady fraction `P_∞ = σ(v)`, so both rates stay in `(0, 1)` with a sum
/// below one.
fn unpack(x: &[f64]) -> BackactionModel {
    let total = logistic(x[0]);
    let frac = logistic(x[1]);
    BackactionModel { gamma_out: total * (1.0 - frac), gamma_back: total * frac, p0: x[2] }
}

/// Levenberg-Marquardt on `(γ_o, γ_b, P₀)`. Samples are `(m, P_m)`.
pub fn fit_backaction(samples: &[(u32, f64)]) -> Result<FitResult> {
    let distinct: BTreeSet<u32> = samples.iter().map(|s| s.0).collect();
    if distinct.len() < 5 {
        return Err(Error::InsufficientSamples { needed: 5, got: distinct.len() });
    }
    if samples.iter().any(|s| s.0 == 0 || !s.1.is_finite()) {
        return Err(Error::InvalidArgument("measurement indices start at 1 and probabilities must be finite"));
    }
    let mut sorted: Vec<(u32, f64)> = samples.to_vec();
    sorted.sort_by_key(|s| s.0);
    let p_first = sorted[0].1;
    let tail_len = (sorted.len() / 4).max(1);
    let p_tail = sorted[sorted.len() - tail_len..].iter().map(|s| s.1).sum::<f64>() / tail_len as f64;

    let residuals = |x: &[f64]| -> Vec<f64> {
        let model = unpack(x);
        samples.iter().map(|&(m, p)| backaction_forward(&model, m) - p).collect()
    };
    let cost = |x: &[f64]| residuals(x).iter().map(|r| r * r).sum::<f64>();

    // coarse scan of the total rate before the local fit
    let v0 = logit(p_tail);
    let u0 = (0..=40)
        .map(|k| logit(10f64.powf(-4.0 + 4.0 * k as f64 / 40.0) * 0.999))
        .min_by(|a, b| cost(&[*a, v0, p_first]).total_cmp(&cost(&[*b, v0, p_first])))
        .expect("non-empty scan");

    let rep = LevenbergMarquardt::default().minimize(residuals, &[u0, v0, p_first]);
    let model = unpack(&rep.x);
    let steady = model.steady().unwrap_or(model.p0);
    let mut out = FitResult::new(rep.cost, rep.converged, rep.iterations)
        .with("gamma_out", model.gamma_out)
        .with("gamma_back", model.gamma_back)
        .with("p0", model.p0)
        .with("steady", steady)
        .with("c", model.p0 - steady);
    if let Some(cov) = rep.covariance_diag {
        out = out.with_variance("p0", cov[2]);
    }
    Ok(out)
}
