//! Resolved global configuration shared by every subcommand.

use std::path::{Path, PathBuf};

use sspe_core::{ChiSource, DeviceParams};

use crate::error::Result;
use crate::io;

pub const DEFAULT_SEED: u64 = 20_240_501;

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub device: DeviceParams,
    pub out_dir: PathBuf,
    pub seed: u64,
    /// Device file, if one was given.
    pub device_path: Option<String>,
}

impl CliConfig {
    /// Loads the device (or the reference device), applies overrides and
    /// validates the result before any subcommand runs.
    pub fn resolve(
        config: Option<&Path>,
        out_dir: PathBuf,
        seed: u64,
        chi_source: Option<ChiSource>,
        kerr_mhz: Option<f64>,
    ) -> Result<Self> {
        let mut device = match config {
            Some(path) => io::read_device(path)?,
            None => DeviceParams::reference_q1(),
        };
        if let Some(source) = chi_source {
            device = device.with_chi_source(source);
        }
        if let Some(k) = kerr_mhz {
            device = device.with_kerr(k);
        }
        device.validate()?;
        Ok(CliConfig { device, out_dir, seed, device_path: config.map(|p| p.display().to_string()) })
    }

    pub fn reference(out_dir: impl Into<PathBuf>, seed: u64) -> Self {
        CliConfig { device: DeviceParams::reference_q1(), out_dir: out_dir.into(), seed, device_path: None }
    }
}
