//! Measurement-analysis models: each a forward model plus a least-squares
//! inverse.

mod backaction;
mod decay;
mod kerr;
mod ramsey;
mod stark;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};

use serde::{Deserialize, Serialize};

pub use backaction::{backaction_forward, fit_backaction, intrinsic_relaxation, BackactionModel};
pub use decay::exp_decay_fit;
pub use kerr::{fit_kerr_calibration, kerr_steady_state, KerrInit};
pub use ramsey::{fit_ramsey, ramsey_forward, RamseyFixed, RamseyInit, RamseyModel};
pub use stark::{ac_stark_reconstruct, peak_frequency, Spectrum, NEGATIVE_CLAMP};

/// Fitted parameters plus convergence metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub values: BTreeMap<String, f64>,
    /// Sum of squared residuals.
    pub residual_norm: f64,
    pub converged: bool,
    pub iterations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covariance_diag: Option<BTreeMap<String, f64>>,
}

impl FitResult {
    pub(crate) fn new(residual_norm: f64, converged: bool, iterations: usize) -> Self {
        FitResult { values: BTreeMap::new(), residual_norm, converged, iterations, covariance_diag: None }
    }

    pub(crate) fn with(mut self, name: &str, value: f64) -> Self {
        self.values.insert(name.to_string(), value);
        self
    }

    pub(crate) fn with_variance(mut self, name: &str, var: f64) -> Self {
        self.covariance_diag.get_or_insert_with(BTreeMap::new).insert(name.to_string(), var);
        self
    }

    /// Panics if `name` was not fitted.
    pub fn get(&self, name: &str) -> f64 {
        self.values[name]
    }
}
