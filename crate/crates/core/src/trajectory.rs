//! Sampled cavity-field trajectories.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use serde::{Deserialize, Serialize};

use crate::{Complex, Error, QubitState, Result};

/// Time-ordered samples of the cavity field for one qubit state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub alpha: Vec<Complex>,
    pub photon_number: Vec<f64>,
    pub qubit_state: QubitState,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, alpha: Vec<Complex>, qubit_state: QubitState) -> Self {
        debug_assert_eq!(times.len(), alpha.len());
        let photon_number = alpha.iter().map(|a| a.norm_sqr()).collect();
        Trajectory { times, alpha, photon_number, qubit_state }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn start(&self) -> f64 {
        self.times[0]
    }

    pub fn end(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    pub fn final_alpha(&self) -> Complex {
        self.alpha[self.alpha.len() - 1]
    }

    pub fn final_photons(&self) -> f64 {
        self.photon_number[self.photon_number.len() - 1]
    }

    /// Field at `t`, linearly interpolated between samples.
    pub fn alpha_at(&self, t: f64) -> Result<Complex> {
        if self.is_empty() || !(t >= self.start() && t <= self.end()) {
            let (start, end) = if self.is_empty() { (0.0, 0.0) } else { (self.start(), self.end()) };
            return Err(Error::OutOfRange { t, start, end });
        }
        // first index with times[k] > t
        let k = self.times.partition_point(|&s| s <= t);
        if k == self.times.len() {
            return Ok(self.final_alpha());
        }
        if k == 0 {
            return Ok(self.alpha[0]);
        }
        let (t0, t1) = (self.times[k - 1], self.times[k]);
        let w = (t - t0) / (t1 - t0);
        Ok(self.alpha[k - 1] * (1.0 - w) + self.alpha[k] * w)
    }

    /// Indices of samples with `start <= t <= end`.
    pub fn window(&self, start: f64, end: f64) -> core::ops::Range<usize> {
        let lo = self.times.partition_point(|&s| s < start);
        let hi = self.times.partition_point(|&s| s <= end);
        lo..hi
    }

    /// Largest photon number over `[start, end]`.
    pub fn peak_photons(&self, start: f64, end: f64) -> f64 {
        self.photon_number[self.window(start, end)].iter().copied().fold(0.0, f64::max)
    }

    /// Time-averaged photon number over `[start, end]` (trapezoid rule).
    pub fn mean_photons(&self, start: f64, end: f64) -> f64 {
        let r = self.window(start, end);
        if r.len() < 2 {
            return r.clone().next().map_or(0.0, |k| self.photon_number[k]);
        }
        let mut area = 0.0;
        for k in r.start + 1..r.end {
            area += 0.5 * (self.photon_number[k] + self.photon_number[k - 1]) * (self.times[k] - self.times[k - 1]);
        }
        area / (self.times[r.end - 1] - self.times[r.start])
    }
}

/// `|α(t)|²` with the complex field interpolated before taking the modulus.
pub fn photon_number(traj: &Trajectory, t: f64) -> Result<f64> {
    Ok(traj.alpha_at(t)?.norm_sqr())
}
