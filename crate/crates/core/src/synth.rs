//! Seeded synthetic datasets built from the forward models.
//!
//! Noise touches measured probabilities and signals only, never the simulated
//! cavity field. Every generator draws from its own ChaCha8 stream of the
//! dataset seed, so identical `(model, grid, NoiseSpec)` inputs give identical
//! outputs.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::fit::{backaction_forward, kerr_steady_state, ramsey_forward, BackactionModel, RamseyModel, Spectrum};
use crate::{DeviceParams, Error, QubitState, Result, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NoiseKind {
    None,
    Gaussian { sigma: f64 },
    Binomial { shots: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    #[serde(flatten)]
    pub kind: NoiseKind,
    pub seed: u64,
}

impl NoiseSpec {
    pub const NONE: NoiseSpec = NoiseSpec { kind: NoiseKind::None, seed: 0 };

    pub fn gaussian(sigma: f64, seed: u64) -> Self {
        NoiseSpec { kind: NoiseKind::Gaussian { sigma }, seed }
    }

    pub fn binomial(shots: u64, seed: u64) -> Self {
        NoiseSpec { kind: NoiseKind::Binomial { shots }, seed }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            NoiseKind::Gaussian { sigma } if !(sigma >= 0.0 && sigma.is_finite()) => {
                Err(Error::InvalidArgument("gaussian sigma must be finite and non-negative"))
            }
            NoiseKind::Binomial { shots: 0 } => Err(Error::InvalidArgument("binomial noise needs at least one shot")),
            _ => Ok(()),
        }
    }

    /// Seed for the `k`-th of a family of related datasets.
    pub fn split(&self, k: u64) -> Self {
        // splitmix64 finalizer
        let mut z = self.seed ^ k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        NoiseSpec { kind: self.kind, seed: z ^ (z >> 31) }
    }
}

mod stream {
    pub const RAMSEY: u64 = 1;
    pub const BACKACTION: u64 = 2;
    pub const SPECTROSCOPY: u64 = 3;
    pub const CALIBRATION: u64 = 4;
}

struct Sampler {
    kind: NoiseKind,
    rng: ChaCha8Rng,
    normal: Option<Normal<f64>>,
}

impl Sampler {
    fn new(noise: &NoiseSpec, stream: u64) -> Result<Self> {
        noise.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
        rng.set_stream(stream);
        let normal = match noise.kind {
            NoiseKind::Gaussian { sigma } => {
                Some(Normal::new(0.0, sigma).map_err(|_| Error::InvalidArgument("invalid gaussian sigma"))?)
            }
            _ => None,
        };
        Ok(Sampler { kind: noise.kind, rng, normal })
    }

    /// Adds Gaussian noise to any value.
    fn signal(&mut self, value: f64) -> f64 {
        match &self.normal {
            Some(n) => value + n.sample(&mut self.rng),
            None => value,
        }
    }

    /// A probability: Gaussian noise, or the observed frequency over `shots`.
    fn probability(&mut self, p: f64) -> f64 {
        match self.kind {
            NoiseKind::Binomial { shots } => {
                let dist = Binomial::new(shots, p.clamp(0.0, 1.0)).expect("clamped probability");
                dist.sample(&mut self.rng) as f64 / shots as f64
            }
            _ => self.signal(p),
        }
    }
}

/// Ramsey signal at each time (µs).
pub fn gen_ramsey_dataset(model: &RamseyModel, times: &[f64], noise: &NoiseSpec) -> Result<Vec<(f64, f64)>> {
    if times.is_empty() {
        return Err(Error::InvalidArgument("need at least one time point"));
    }
    let mut s = Sampler::new(noise, stream::RAMSEY)?;
    Ok(times.iter().map(|&t| (t, s.probability(ramsey_forward(model, t)))).collect())
}

/// `P_m` for `m = 1, 1 + stride, …, ≤ m_max`.
pub fn gen_backaction_sequence(
    model: &BackactionModel,
    m_max: u32,
    stride: u32,
    noise: &NoiseSpec,
) -> Result<Vec<(u32, f64)>> {
    if m_max < 1 || stride < 1 {
        return Err(Error::InvalidArgument("m_max and stride must be at least 1"));
    }
    let mut s = Sampler::new(noise, stream::BACKACTION)?;
    Ok((1..=m_max).step_by(stride as usize).map(|m| (m, s.probability(backaction_forward(model, m)))).collect())
}

/// Lorentzian qubit lines for every trajectory sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectroscopy {
    pub spectra: Vec<Spectrum>,
    /// Sample indices whose shifted line centre falls outside the grid.
    pub outside_grid: Vec<usize>,
}

/// Line centred at `line_center + 2χ n(t)` with full width `linewidth`
/// (all MHz) for every sample of `traj`.
pub fn gen_spectroscopy(
    traj: &Trajectory,
    chi: f64,
    line_center: f64,
    linewidth: f64,
    freq_grid: &[f64],
    noise: &NoiseSpec,
) -> Result<Spectroscopy> {
    if freq_grid.len() < 2 || !(linewidth > 0.0) {
        return Err(Error::InvalidArgument("need a frequency grid and a positive linewidth"));
    }
    let (lo, hi) = (freq_grid[0], freq_grid[freq_grid.len() - 1]);
    let half = 0.5 * linewidth;
    let mut s = Sampler::new(noise, stream::SPECTROSCOPY)?;
    let mut spectra = Vec::with_capacity(traj.len());
    let mut outside_grid = Vec::new();
    for (k, (&t, &n)) in traj.times.iter().zip(&traj.photon_number).enumerate() {
        let center = line_center + 2.0 * chi * n;
        if !(center >= lo && center <= hi) {
            outside_grid.push(k);
        }
        let amplitudes = freq_grid
            .iter()
            .map(|f| {
                let x = (f - center) / half;
                s.probability(1.0 / (1.0 + x * x))
            })
            .collect();
        spectra.push(Spectrum { delay: t, freqs: freq_grid.to_vec(), amplitudes });
    }
    Ok(Spectroscopy { spectra, outside_grid })
}

/// Steady-state calibration points `(V², n)` for drive `ε = volt_to_eps · V`.
pub fn gen_kerr_calibration(
    params: &DeviceParams,
    j: QubitState,
    volt_to_eps: f64,
    voltages: &[f64],
    noise: &NoiseSpec,
) -> Result<Vec<(f64, f64)>> {
    let mut s = Sampler::new(noise, stream::CALIBRATION)?;
    voltages.iter().map(|&v| Ok((v * v, s.signal(kerr_steady_state(params, j, volt_to_eps * v)?)))).collect()
}
