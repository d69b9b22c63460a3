//! Small dense optimizers used by pulse design and the fit models.

mod linalg;
mod lm;
mod nelder_mead;

pub use linalg::{invert_spd, solve};
pub use lm::{LevenbergMarquardt, LmReport};
pub use nelder_mead::{NelderMead, NmReport};
