//! Metadata stamped into every JSON output.

use serde::Serialize;
use sspe_core::DeviceParams;

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    /// Subcommand and its arguments as given.
    pub command: String,
    pub seed: u64,
    /// The resolved device, after `--chi-source` and `--kerr` overrides.
    pub device: DeviceParams,
    /// Input files, as given on the command line.
    pub inputs: Vec<String>,
}

impl Provenance {
    pub fn new(command: impl Into<String>, seed: u64, device: &DeviceParams) -> Self {
        Provenance {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            seed,
            device: device.clone(),
            inputs: Vec::new(),
        }
    }

    pub fn with_input(mut self, path: impl Into<String>) -> Self {
        self.inputs.push(path.into());
        self
    }

    pub fn wrap<'a, T: Serialize>(&'a self, result: &'a T) -> Stamped<'a, T> {
        Stamped { provenance: self, result }
    }
}

/// `{"provenance": …, "result": …}`
#[derive(Serialize)]
pub struct Stamped<'a, T: Serialize> {
    pub provenance: &'a Provenance,
    pub result: &'a T,
}
