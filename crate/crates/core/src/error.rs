use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid device parameters: {0}")]
    InvalidParams(&'static str),
    #[error("invalid pulse schedule: {0}")]
    InvalidSchedule(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("dispersive-shift denominator vanishes ({0} MHz)")]
    DegenerateDetuning(f64),
    #[error("qubit-cavity coupling must be positive")]
    ZeroCoupling,
    #[error("closed-form propagation requires kerr_coeff = 0 (got {0} MHz)")]
    KerrNotSupported(f64),
    #[error("integration step {dt} ns exceeds limit {limit} ns")]
    StepTooLarge { dt: f64, limit: f64 },
    #[error("cavity field became non-finite at t = {0} ns")]
    NonFinite(f64),
    #[error("time {t} ns outside trajectory span [{start}, {end}]")]
    OutOfRange { t: f64, start: f64, end: f64 },
    #[error("reset window is degenerate: |1 - exp(dt C / 2)| = {0:e}")]
    DegenerateDuration(f64),
    #[error("optimal reset amplitude {amplitude} rad/ns exceeds cap {cap} rad/ns")]
    AmplitudeCapExceeded { amplitude: f64, cap: f64 },
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("sample {index} is not strictly positive")]
    NonPositiveSample { index: usize },
    #[error("spectrum {index} has its maximum at the sweep edge")]
    PeakAtEdge { index: usize },
    #[error("steady-state cubic has no non-negative real root")]
    NoRealRoot,
}

pub type Result<T> = core::result::Result<T, Error>;
