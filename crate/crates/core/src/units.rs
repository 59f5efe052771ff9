//! Physical constants and wavelength/frequency conversions.
//!
//! Internally every frequency is an angular frequency in rad/s. Wavelengths
//! are vacuum wavelengths and only appear at API boundaries.

use std::f64::consts::PI;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub fn omega_from_um(wavelength_um: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / (wavelength_um * 1e-6)
}

pub fn um_from_omega(omega: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / omega * 1e6
}

pub fn omega_from_nm(wavelength_nm: f64) -> f64 {
    omega_from_um(wavelength_nm * 1e-3)
}

pub fn nm_from_omega(omega: f64) -> f64 {
    um_from_omega(omega) * 1e3
}

/// Converts a small wavelength interval around `center_nm` to an angular
/// frequency interval (first order).
pub fn bandwidth_nm_to_omega(bandwidth_nm: f64, center_nm: f64) -> f64 {
    let lambda = center_nm * 1e-9;
    2.0 * PI * SPEED_OF_LIGHT * bandwidth_nm * 1e-9 / (lambda * lambda)
}

pub fn bandwidth_omega_to_nm(bandwidth: f64, center_nm: f64) -> f64 {
    let lambda = center_nm * 1e-9;
    bandwidth * lambda * lambda / (2.0 * PI * SPEED_OF_LIGHT) * 1e9
}

/// `sin(x)/x` with the removable singularity at zero.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `sin(pi * x)`, exact (zero) at integer arguments.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    let (sign, a) = if r < 0.0 { (-1.0, -r) } else { (1.0, r) };
    let a = if a > 0.5 { 1.0 - a } else { a };
    sign * (PI * a).sin()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavelength_round_trip() {
        for nm in [400.0, 790.0, 1580.0, 3000.0] {
            let back = nm_from_omega(omega_from_nm(nm));
            assert!((back - nm).abs() / nm < 1e-14);
        }
    }

    #[test]
    fn sin_pi_is_exact_at_integers() {
        for k in -6..=6 {
            assert_eq!(sin_pi(k as f64), 0.0);
        }
        assert!((sin_pi(0.5) - 1.0).abs() < 1e-15);
        assert!((sin_pi(0.9) - (0.9 * PI).sin()).abs() < 1e-15);
        assert!((sin_pi(-3.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sinc_near_zero_is_continuous() {
        let a = sinc(0.99e-4);
        let b = sinc(1.01e-4);
        assert!((a - b).abs() < 1e-8);
        assert_eq!(sinc(0.0), 1.0);
    }

    #[test]
    fn bandwidth_conversion_inverts() {
        let w = bandwidth_nm_to_omega(0.5, 790.0);
        assert!((bandwidth_omega_to_nm(w, 790.0) - 0.5).abs() < 1e-14);
    }
}
