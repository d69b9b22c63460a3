//! Piecewise-constant drive descriptions.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
#[allow(unused_imports)]
use num_traits::Float;

use serde::{Deserialize, Serialize};

use crate::units::wrap_phase;
use crate::{Complex, Error, Result};

/// One constant drive segment. Amplitude in rad/ns, phase in rad, duration in ns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveSegment {
    #[serde(rename = "amp")]
    pub amplitude: f64,
    pub phase: f64,
    pub duration: f64,
}

impl DriveSegment {
    /// Builds a segment, folding a negative amplitude into a `π` phase shift
    /// and wrapping the phase into `[0, 2π)`.
    pub fn new(amplitude: f64, phase: f64, duration: f64) -> Result<Self> {
        let (amplitude, phase) =
            if amplitude < 0.0 { (-amplitude, phase + core::f64::consts::PI) } else { (amplitude, phase) };
        let seg = DriveSegment { amplitude, phase: wrap_phase(phase), duration };
        seg.validate()?;
        Ok(seg)
    }

    /// A zero-drive interval.
    pub fn idle(duration: f64) -> Result<Self> {
        Self::new(0.0, 0.0, duration)
    }

    pub fn from_complex(drive: Complex, duration: f64) -> Result<Self> {
        Self::new(drive.norm(), drive.arg(), duration)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude.is_finite() && self.phase.is_finite() && self.duration.is_finite()) {
            return Err(Error::InvalidSchedule("segment values must be finite"));
        }
        if self.amplitude < 0.0 {
            return Err(Error::InvalidSchedule("amplitude must be non-negative"));
        }
        if self.duration <= 0.0 {
            return Err(Error::InvalidSchedule("duration must be positive"));
        }
        Ok(())
    }

    /// Complex drive `ε e^{iφ}`.
    pub fn complex(&self) -> Complex {
        Complex::from_polar(self.amplitude, self.phase)
    }

    pub fn scaled(&self, beta: f64) -> Result<Self> {
        Self::new(self.amplitude * beta, self.phase, self.duration)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SchemeLabel {
    Square,
    Sspe,
    Clear,
    Custom,
}

impl fmt::Display for SchemeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeLabel::Square => "SQUARE",
            SchemeLabel::Sspe => "SSPE",
            SchemeLabel::Clear => "CLEAR",
            SchemeLabel::Custom => "CUSTOM",
        })
    }
}

/// Ordered list of drive segments starting at `t = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    segments: Vec<DriveSegment>,
    pub label: SchemeLabel,
}

impl PulseSchedule {
    pub fn new(segments: Vec<DriveSegment>, label: SchemeLabel) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidSchedule("schedule needs at least one segment"));
        }
        for s in &segments {
            s.validate()?;
        }
        Ok(PulseSchedule { segments, label })
    }

    pub fn custom(segments: Vec<DriveSegment>) -> Result<Self> {
        Self::new(segments, SchemeLabel::Custom)
    }

    /// Readout followed by an undriven tail of `free_decay` ns.
    pub fn square(readout: DriveSegment, free_decay: f64) -> Result<Self> {
        Self::new(vec![readout, DriveSegment::idle(free_decay)?], SchemeLabel::Square)
    }

    /// Readout followed by one reset segment.
    pub fn sspe(readout: DriveSegment, reset: DriveSegment) -> Result<Self> {
        Self::new(vec![readout, reset], SchemeLabel::Sspe)
    }

    pub fn segments(&self) -> &[DriveSegment] {
        &self.segments
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    pub fn min_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).fold(f64::INFINITY, f64::min)
    }

    /// Start time of every segment plus the schedule end.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut t = 0.0;
        let mut out = Vec::with_capacity(self.segments.len() + 1);
        out.push(0.0);
        for s in &self.segments {
            t += s.duration;
            out.push(t);
        }
        out
    }
}
