//! Intensity maps on wavelength axes and 1D cuts through them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp;
use crate::scan::ScanResult;
use crate::spectrum::JointSpectrum;

/// Real 2D map over (row, column) wavelengths in nm, row-major, with both
/// axes stored increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Intensity2D {
    rows_nm: Vec<f64>,
    cols_nm: Vec<f64>,
    values: Vec<f64>,
}

impl Intensity2D {
    /// Axes may be given increasing or decreasing; decreasing axes are
    /// reversed together with the data.
    pub fn new(mut rows_nm: Vec<f64>, mut cols_nm: Vec<f64>, mut values: Vec<f64>) -> Result<Self> {
        let (nr, nc) = (rows_nm.len(), cols_nm.len());
        if nr < 2 || nc < 2 || values.len() != nr * nc {
            return Err(Error::invalid(format!("intensity map needs >= 2x2 values matching its axes ({nr} x {nc})")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("intensity map contains non-finite values"));
        }
        if rows_nm[0] > rows_nm[nr - 1] {
            rows_nm.reverse();
            let mut out = Vec::with_capacity(values.len());
            for i in (0..nr).rev() {
                out.extend_from_slice(&values[i * nc..(i + 1) * nc]);
            }
            values = out;
        }
        if cols_nm[0] > cols_nm[nc - 1] {
            cols_nm.reverse();
            for row in values.chunks_mut(nc) {
                row.reverse();
            }
        }
        for axis in [&rows_nm, &cols_nm] {
            if axis.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::invalid("intensity map axes must be strictly monotonic"));
            }
        }
        Ok(Intensity2D { rows_nm, cols_nm, values })
    }

    /// `|f|^2` with signal wavelengths on rows.
    pub fn from_jsa(js: &JointSpectrum) -> Result<Self> {
        let m = js.map();
        let (nr, nc) = (m.values.nrows(), m.values.ncols());
        let values = (0..nr * nc).map(|k| m.values[(k / nc, k % nc)].norm_sqr()).collect();
        Self::new(m.signal_nm(), m.idler_nm(), values)
    }

    /// Dark-subtracted signal of a 2D scan (counts if sampled).
    pub fn from_scan(scan: &ScanResult) -> Result<Self> {
        let cols = scan.axis2_nm.clone().ok_or_else(|| Error::invalid("scan is one-dimensional"))?;
        Self::new(scan.axis1_nm.clone(), cols, scan.signal_rate())
    }

    pub fn rows_nm(&self) -> &[f64] {
        &self.rows_nm
    }

    pub fn cols_nm(&self) -> &[f64] {
        &self.cols_nm
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, row_nm: f64, col_nm: f64) -> Option<f64> {
        interp::bilinear(&self.rows_nm, &self.cols_nm, &self.values, row_nm, col_nm)
    }

    /// Copy scaled so the largest value is 1.
    pub fn peak_normalized(&self) -> Result<Self> {
        let peak = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !(peak > 0.0) {
            return Err(Error::invalid("intensity map has no positive values"));
        }
        Ok(Intensity2D { values: self.values.iter().map(|v| v / peak).collect(), ..self.clone() })
    }
}

/// Intensity against the row (signal) wavelength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossSection {
    pub wavelength_nm: Vec<f64>,
    /// Column wavelength at each sample.
    pub partner_nm: Vec<f64>,
    pub intensity: Vec<f64>,
}

/// Column wavelength paired with `row_nm` by energy conservation,
/// `1/col = 1/pump - 1/row`; `None` when no positive solution exists.
pub fn energy_partner_nm(pump_nm: f64, row_nm: f64) -> Option<f64> {
    let inv = 1.0 / pump_nm - 1.0 / row_nm;
    (inv > 0.0).then(|| 1.0 / inv)
}

/// Cut along `1/row + 1/col = 1/pump`, `samples` points uniform in the row
/// wavelength over the part of the line inside the map.
pub fn anticorrelated_cross_section(data: &Intensity2D, pump_nm: f64, samples: usize) -> Result<CrossSection> {
    if !(pump_nm > 0.0 && pump_nm.is_finite()) {
        return Err(Error::invalid(format!("pump wavelength must be positive, got {pump_nm}")));
    }
    if samples == 0 {
        return Err(Error::invalid("cross-section needs at least one sample"));
    }
    let (r0, r1) = (data.rows_nm[0], data.rows_nm[data.rows_nm.len() - 1]);
    let (c0, c1) = (data.cols_nm[0], data.cols_nm[data.cols_nm.len() - 1]);
    // The partner wavelength decreases as the row wavelength grows.
    let lo = energy_partner_nm(pump_nm, c1).map_or(f64::INFINITY, |v| v.max(r0));
    let hi = energy_partner_nm(pump_nm, c0).map_or(r1, |v| v.min(r1));
    if !(lo <= hi) {
        return Err(Error::EmptyIntersection { pump_nm });
    }
    sample_line(data, lo, hi, samples, |r| energy_partner_nm(pump_nm, r))
        .ok_or(Error::EmptyIntersection { pump_nm })
}

/// Cut along `row = col` over the overlap of the two axes.
pub fn diagonal_cross_section(data: &Intensity2D, samples: usize) -> Result<CrossSection> {
    let lo = data.rows_nm[0].max(data.cols_nm[0]);
    let hi = data.rows_nm[data.rows_nm.len() - 1].min(data.cols_nm[data.cols_nm.len() - 1]);
    if !(lo <= hi) || samples == 0 {
        return Err(Error::invalid("diagonal does not intersect the map"));
    }
    sample_line(data, lo, hi, samples, Some).ok_or_else(|| Error::invalid("diagonal does not intersect the map"))
}

fn sample_line(
    data: &Intensity2D,
    lo: f64,
    hi: f64,
    samples: usize,
    partner: impl Fn(f64) -> Option<f64>,
) -> Option<CrossSection> {
    let n = if hi > lo { samples } else { 1 };
    let mut wavelength_nm = Vec::with_capacity(n);
    let mut partner_nm = Vec::with_capacity(n);
    let mut intensity = Vec::with_capacity(n);
    for k in 0..n {
        let r = if n == 1 { lo } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 };
        // End points can fall a rounding error outside the map.
        let c = partner(r)?.clamp(data.cols_nm[0], data.cols_nm[data.cols_nm.len() - 1]);
        wavelength_nm.push(r);
        partner_nm.push(c);
        intensity.push(data.at(r, c)?);
    }
    Some(CrossSection { wavelength_nm, partner_nm, intensity })
}
