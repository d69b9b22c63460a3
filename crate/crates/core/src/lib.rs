//! Semiclassical readout-cavity dynamics, reset-pulse design and measurement
//! analysis for dispersively coupled superconducting qubits.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs; file formats, the CLI and the reproduction
//! scenarios live in the `sspe` companion crate.
//!
//! Unit conventions at the public surface:
//!
//! - frequencies and rates in [`DeviceParams`] are ordinary frequencies in MHz
//!   (the quantity usually quoted as `ω/2π`);
//! - times are ns for cavity dynamics and µs for qubit coherence quantities;
//! - drive amplitudes are angular rates in rad/ns.
//!
//! Internally every rate is angular (rad/ns); see [`units`].

#![no_std]
// `!(x > 0.0)` is used on purpose so NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod cavity;
pub mod design;
mod error;
pub mod fit;
pub mod optim;
pub mod params;
pub mod propagate;
pub mod schedule;
pub mod synth;
pub mod trajectory;
pub mod units;

pub use cavity::{chi_shift, complex_rate, critical_photon_number, dispersive_shift, ComplexRate};
pub use error::{Error, Result};
pub use params::{ChiSource, DeviceParams, QubitState};
pub use propagate::{propagate_closed_form, propagate_ode, propagate_ode_from};
pub use schedule::{DriveSegment, PulseSchedule, SchemeLabel};
pub use trajectory::{photon_number, Trajectory};

/// Complex field amplitude.
pub type Complex = num_complex::Complex64;
