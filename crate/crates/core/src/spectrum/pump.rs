use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp;
use crate::units::{bandwidth_nm_to_omega, omega_from_nm};

/// Pump spectral amplitude `alpha(omega_s + omega_i)`, peak-normalized to 1.
#[derive(Debug, Clone, PartialEq)]
pub enum PumpEnvelope {
    /// `exp(-(omega - center)^2 / sigma^2)`.
    Gaussian { center: f64, sigma: f64 },
    /// 1 on the closed interval `center ± width / 2`, 0 elsewhere.
    Rectangular { center: f64, width: f64 },
    /// Linear interpolation of a table, 0 outside it.
    Tabulated(TabulatedPump),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPump {
    omega: Vec<f64>,
    amplitude: Vec<f64>,
}

impl TabulatedPump {
    /// `points` are (angular frequency, amplitude); amplitudes are rescaled so
    /// the maximum is 1.
    pub fn new(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("tabulated pump needs at least two points"));
        }
        if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::invalid("tabulated pump frequencies must be strictly increasing"));
        }
        if points.iter().any(|p| !(p.1 >= 0.0) || !p.1.is_finite()) {
            return Err(Error::invalid("tabulated pump amplitudes must be finite and non-negative"));
        }
        let peak = points.iter().map(|p| p.1).fold(0.0, f64::max);
        if peak == 0.0 {
            return Err(Error::invalid("tabulated pump is identically zero"));
        }
        Ok(TabulatedPump {
            omega: points.iter().map(|p| p.0).collect(),
            amplitude: points.iter().map(|p| p.1 / peak).collect(),
        })
    }
}

impl PumpEnvelope {
    pub fn gaussian(center: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::invalid(format!("gaussian pump sigma must be > 0, got {sigma}")));
        }
        Ok(PumpEnvelope::Gaussian { center, sigma })
    }

    pub fn rectangular(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::invalid(format!("rectangular pump width must be > 0, got {width}")));
        }
        Ok(PumpEnvelope::Rectangular { center, width })
    }

    pub fn center(&self) -> f64 {
        match self {
            PumpEnvelope::Gaussian { center, .. } | PumpEnvelope::Rectangular { center, .. } => *center,
            PumpEnvelope::Tabulated(t) => {
                let k = t
                    .amplitude
                    .iter()
                    .enumerate()
                    .fold(0, |best, (k, &a)| if a > t.amplitude[best] { k } else { best });
                t.omega[k]
            }
        }
    }
}

pub fn pump_amplitude(envelope: &PumpEnvelope, omega_sum: f64) -> f64 {
    match envelope {
        PumpEnvelope::Gaussian { center, sigma } => {
            let x = (omega_sum - center) / sigma;
            (-x * x).exp()
        }
        PumpEnvelope::Rectangular { center, width } => {
            if (omega_sum - center).abs() <= 0.5 * width {
                1.0
            } else {
                0.0
            }
        }
        PumpEnvelope::Tabulated(t) => interp::linear(&t.omega, &t.amplitude, omega_sum).unwrap_or(0.0),
    }
}

/// Pump shapes accepted by the bandwidth optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PumpShape {
    Gaussian,
    Rectangular,
}

impl PumpShape {
    /// Envelope centered at `center` with bandwidth `bandwidth` (both rad/s):
    /// sigma for the Gaussian, full width for the rectangle.
    pub fn envelope(self, center: f64, bandwidth: f64) -> Result<PumpEnvelope> {
        match self {
            PumpShape::Gaussian => PumpEnvelope::gaussian(center, bandwidth),
            PumpShape::Rectangular => PumpEnvelope::rectangular(center, bandwidth),
        }
    }
}

/// Pump envelope as written in config files, in wavelength units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum PumpConfig {
    Gaussian { center_nm: f64, sigma_nm: f64 },
    Rectangular { center_nm: f64, width_nm: f64 },
    /// `(wavelength_nm, amplitude)` pairs in any order.
    Tabulated { points: Vec<(f64, f64)> },
}

impl PumpConfig {
    pub fn to_envelope(&self) -> Result<PumpEnvelope> {
        match *self {
            PumpConfig::Gaussian { center_nm, sigma_nm } => {
                PumpEnvelope::gaussian(omega_from_nm(center_nm), bandwidth_nm_to_omega(sigma_nm, center_nm))
            }
            PumpConfig::Rectangular { center_nm, width_nm } => {
                PumpEnvelope::rectangular(omega_from_nm(center_nm), bandwidth_nm_to_omega(width_nm, center_nm))
            }
            PumpConfig::Tabulated { ref points } => {
                let mut pts: Vec<(f64, f64)> = points.iter().map(|&(nm, a)| (omega_from_nm(nm), a)).collect();
                pts.sort_by(|a, b| a.0.total_cmp(&b.0));
                Ok(PumpEnvelope::Tabulated(TabulatedPump::new(&pts)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_peak_and_one_sigma() {
        let p = PumpEnvelope::gaussian(2.0e15, 1.0e12).unwrap();
        assert_eq!(pump_amplitude(&p, 2.0e15), 1.0);
        let v = pump_amplitude(&p, 2.0e15 + 1.0e12);
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn rectangular_edges_closed() {
        let p = PumpEnvelope::rectangular(10.0, 4.0).unwrap();
        assert_eq!(pump_amplitude(&p, 8.0), 1.0);
        assert_eq!(pump_amplitude(&p, 12.0), 1.0);
        assert_eq!(pump_amplitude(&p, 12.000001), 0.0);
    }

    #[test]
    fn tabulated_normalizes_and_interpolates() {
        let t = TabulatedPump::new(&[(1.0, 0.0), (2.0, 4.0), (3.0, 2.0)]).unwrap();
        let p = PumpEnvelope::Tabulated(t);
        assert_eq!(pump_amplitude(&p, 2.0), 1.0);
        assert_eq!(pump_amplitude(&p, 2.5), 0.75);
        assert_eq!(pump_amplitude(&p, 0.5), 0.0);
        assert_eq!(p.center(), 2.0);
    }

    #[test]
    fn invalid_envelopes_rejected() {
        assert!(PumpEnvelope::gaussian(1.0, 0.0).is_err());
        assert!(PumpEnvelope::rectangular(1.0, -1.0).is_err());
        assert!(TabulatedPump::new(&[(1.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(TabulatedPump::new(&[(1.0, -1.0), (2.0, 2.0)]).is_err());
    }

    #[test]
    fn config_parses_tagged_shapes() {
        let c: PumpConfig = serde_json::from_str(r#"{"shape": "gaussian", "center_nm": 790, "sigma_nm": 0.3}"#).unwrap();
        let PumpEnvelope::Gaussian { sigma, .. } = c.to_envelope().unwrap() else { panic!() };
        assert!((sigma - bandwidth_nm_to_omega(0.3, 790.0)).abs() < 1.0);
    }
}
