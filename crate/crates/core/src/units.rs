//! Conversions between the quoted ordinary frequencies and internal angular rates.

use core::f64::consts::TAU;
#[allow(unused_imports)]
use num_traits::Float;

/// rad/ns per MHz of ordinary frequency.
pub const MHZ_TO_RAD_PER_NS: f64 = TAU * 1e-3;

/// rad/µs per MHz of ordinary frequency.
pub const MHZ_TO_RAD_PER_US: f64 = TAU;

#[inline]
pub fn mhz_to_rad_ns(f_mhz: f64) -> f64 {
    f_mhz * MHZ_TO_RAD_PER_NS
}

#[inline]
pub fn rad_ns_to_mhz(w: f64) -> f64 {
    w / MHZ_TO_RAD_PER_NS
}

#[inline]
pub fn khz_to_mhz(f_khz: f64) -> f64 {
    f_khz * 1e-3
}

#[inline]
pub fn mhz_to_khz(f_mhz: f64) -> f64 {
    f_mhz * 1e3
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_phase(phi: f64) -> f64 {
    let mut w = phi % TAU;
    if w < 0.0 {
        w += TAU;
    }
    // tiny negative inputs round up to exactly TAU
    if w >= TAU {
        0.0
    } else {
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_conversion() {
        assert!((mhz_to_rad_ns(1.711) - 0.010_750_53).abs() < 1e-8);
        assert!((rad_ns_to_mhz(mhz_to_rad_ns(3.3)) - 3.3).abs() < 1e-14);
    }

    #[test]
    fn wrap() {
        assert_eq!(wrap_phase(0.0), 0.0);
        assert!((wrap_phase(-0.5) - (TAU - 0.5)).abs() < 1e-15);
        assert!((wrap_phase(TAU + 1.0) - 1.0).abs() < 1e-15);
        assert_eq!(wrap_phase(-1e-18), 0.0);
    }
}
