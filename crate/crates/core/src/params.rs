//! Static device description.

use core::fmt;
#[allow(unused_imports)]
use num_traits::Float;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Kerr coefficient extracted from the steady-state calibration of the
/// first device, MHz (−11 kHz).
pub const CALIBRATED_KERR_MHZ: f64 = -0.011;

/// Where the dispersive shifts `χ_j` come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChiSource {
    /// Transmon perturbation-theory ladder from `g`, `Δ` and `η`.
    #[default]
    Formula,
    /// Measured dressed cavity frequency and dispersive splitting.
    Measured,
}

impl fmt::Display for ChiSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChiSource::Formula => f.write_str("formula"),
            ChiSource::Measured => f.write_str("measured"),
        }
    }
}

impl core::str::FromStr for ChiSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "formula" => Ok(ChiSource::Formula),
            "measured" => Ok(ChiSource::Measured),
            _ => Err(Error::InvalidArgument("chi source must be `formula` or `measured`")),
        }
    }
}

/// Qubit computational state. Only `|0⟩` and `|1⟩` are modelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum QubitState {
    Ground,
    Excited,
}

impl QubitState {
    pub const ALL: [QubitState; 2] = [QubitState::Ground, QubitState::Excited];

    pub fn index(self) -> u8 {
        match self {
            QubitState::Ground => 0,
            QubitState::Excited => 1,
        }
    }
}

impl TryFrom<u8> for QubitState {
    type Error = Error;

    fn try_from(j: u8) -> Result<Self> {
        match j {
            0 => Ok(QubitState::Ground),
            1 => Ok(QubitState::Excited),
            _ => Err(Error::InvalidArgument("only qubit states 0 and 1 are supported")),
        }
    }
}

impl From<QubitState> for u8 {
    fn from(s: QubitState) -> u8 {
        s.index()
    }
}

impl fmt::Display for QubitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Device quantities. Frequencies are ordinary frequencies in MHz, coherence
/// times in µs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceParams {
    pub qubit_freq: f64,
    pub bare_cavity_freq: f64,
    pub anharmonicity: f64,
    pub coupling: f64,
    pub kappa: f64,
    #[serde(default)]
    pub kerr_coeff: f64,
    /// Defaults to the mean of the two dressed cavity frequencies.
    #[serde(default)]
    pub drive_freq: Option<f64>,
    pub t1: f64,
    pub t2_echo: f64,
    /// T1 at the ac-Stark-shifted qubit frequency during readout, µs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t1_stark: Option<f64>,
    /// Measured cavity frequency with the qubit in `|0⟩`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dressed_cavity_freq_0: Option<f64>,
    /// Measured `ω_|1⟩ − ω_|0⟩`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dispersive_shift: Option<f64>,
    #[serde(default)]
    pub chi_source: ChiSource,
}

impl DeviceParams {
    /// First device of the reference experiment (linear model, `K_c = 0`).
    pub fn reference_q1() -> Self {
        DeviceParams {
            qubit_freq: 5445.786,
            bare_cavity_freq: 7123.9,
            anharmonicity: -216.744,
            coupling: 147.14,
            kappa: 1.711,
            kerr_coeff: 0.0,
            drive_freq: None,
            t1: 31.473,
            t2_echo: 45.566,
            t1_stark: Some(26.51),
            dressed_cavity_freq_0: Some(7139.389),
            dispersive_shift: Some(-3.861),
            chi_source: ChiSource::Formula,
        }
    }

    /// Second device of the reference experiment.
    pub fn reference_q2() -> Self {
        DeviceParams {
            qubit_freq: 5512.566,
            bare_cavity_freq: 7103.79,
            anharmonicity: -218.93,
            coupling: 150.465,
            kappa: 4.054,
            kerr_coeff: 0.0,
            drive_freq: None,
            t1: 22.502,
            t2_echo: 28.723,
            t1_stark: Some(19.847),
            dressed_cavity_freq_0: Some(7116.255),
            dispersive_shift: Some(-4.435),
            chi_source: ChiSource::Formula,
        }
    }

    pub fn with_kerr(mut self, kerr_mhz: f64) -> Self {
        self.kerr_coeff = kerr_mhz;
        self
    }

    pub fn with_chi_source(mut self, source: ChiSource) -> Self {
        self.chi_source = source;
        self
    }

    /// Qubit-cavity detuning `Δ = ω_q − ω_bare`, MHz.
    pub fn qubit_detuning(&self) -> f64 {
        self.qubit_freq - self.bare_cavity_freq
    }

    pub fn is_linear(&self) -> bool {
        self.kerr_coeff == 0.0
    }

    /// A copy with the Kerr term removed.
    pub fn linearized(&self) -> Self {
        self.clone().with_kerr(0.0)
    }

    /// Hard invariants. Returns an error on the first violation.
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.qubit_freq,
            self.bare_cavity_freq,
            self.anharmonicity,
            self.coupling,
            self.kappa,
            self.kerr_coeff,
            self.t1,
            self.t2_echo,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParams("all parameters must be finite"));
        }
        if self.kappa <= 0.0 {
            return Err(Error::InvalidParams("kappa must be positive"));
        }
        if self.coupling <= 0.0 {
            return Err(Error::InvalidParams("coupling must be positive"));
        }
        if self.anharmonicity >= 0.0 {
            return Err(Error::InvalidParams("anharmonicity must be negative"));
        }
        if self.t1 <= 0.0 || self.t2_echo <= 0.0 {
            return Err(Error::InvalidParams("coherence times must be positive"));
        }
        if let Some(f) = self.drive_freq {
            if !f.is_finite() {
                return Err(Error::InvalidParams("drive_freq must be finite"));
            }
        }
        if self.chi_source == ChiSource::Measured
            && (self.dressed_cavity_freq_0.is_none() || self.dispersive_shift.is_none())
        {
            return Err(Error::InvalidParams("chi_source = measured needs dressed_cavity_freq_0 and dispersive_shift"));
        }
        Ok(())
    }

    /// True when the qubit sits far enough from the cavity for the
    /// dispersive approximation (`|Δ| > 10 g`). Violations are only warnings.
    pub fn is_dispersive(&self) -> bool {
        self.qubit_detuning().abs() > 10.0 * self.coupling
    }
}
