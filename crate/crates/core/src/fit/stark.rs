use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Reconstructed photon numbers in `[-NEGATIVE_CLAMP, 0)` are reported as 0.
pub const NEGATIVE_CLAMP: f64 = 0.05;

/// One qubit spectroscopy sweep taken at a given delay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// ns
    pub delay: f64,
    /// MHz, strictly increasing
    pub freqs: Vec<f64>,
    pub amplitudes: Vec<f64>,
}

/// Peak position from a parabola through the maximum sample and its two
/// neighbours (non-uniform spacing allowed).
pub fn peak_frequency(spectrum: &Spectrum, index: usize) -> Result<f64> {
    let (f, a) = (&spectrum.freqs, &spectrum.amplitudes);
    if f.len() != a.len() {
        return Err(Error::InvalidArgument("spectrum frequency and amplitude lengths differ"));
    }
    if f.len() < 5 {
        return Err(Error::InsufficientSamples { needed: 5, got: f.len() });
    }
    if f.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("spectrum frequencies must be strictly increasing"));
    }
    let k = a.iter().enumerate().max_by(|x, y| x.1.total_cmp(y.1)).map(|(k, _)| k).expect("non-empty");
    if k == 0 || k == a.len() - 1 {
        return Err(Error::PeakAtEdge { index });
    }
    let (x0, x1, x2) = (f[k - 1], f[k], f[k + 1]);
    let (y0, y1, y2) = (a[k - 1], a[k], a[k + 1]);
    let p = (x1 - x0) * (y1 - y2);
    let q = (x1 - x2) * (y1 - y0);
    let denom = p - q;
    if denom == 0.0 {
        return Ok(x1);
    }
    Ok(x1 - 0.5 * ((x1 - x0) * p - (x1 - x2) * q) / denom)
}

/// Photon number per delay from the ac-Stark shift `Δω_q = 2χn`, with `chi`
/// and `line_center` in MHz.
pub fn ac_stark_reconstruct(spectra: &[Spectrum], chi: f64, line_center: f64) -> Result<Vec<(f64, f64)>> {
    if chi == 0.0 || !chi.is_finite() {
        return Err(Error::InvalidArgument("chi must be finite and nonzero"));
    }
    spectra
        .iter()
        .enumerate()
        .map(|(index, s)| {
            let peak = peak_frequency(s, index)?;
            let n = (peak - line_center) / (2.0 * chi);
            let n = if (-NEGATIVE_CLAMP..0.0).contains(&n) { 0.0 } else { n };
            Ok((s.delay, n))
        })
        .collect()
}
