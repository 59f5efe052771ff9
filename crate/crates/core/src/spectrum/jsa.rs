use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::phase_matching::{pm_amplitude_domains, pm_amplitude_uniform, Complex64, PhaseMatchSpec};
use super::pump::{pump_amplitude, PumpEnvelope};
use crate::dispersion::{bulk_mismatch, phase_mismatch, CrystalSpec};
use crate::error::{Error, Result};
use crate::par::{map_indices, try_map_indices, Execution};
use crate::units::{bandwidth_nm_to_omega, nm_from_omega, omega_from_nm};

pub const MAX_GRID_POINTS: usize = 1024;

/// Signal x idler grid, uniform in angular frequency.
///
/// Spans are full widths in nm around each center, converted to frequency at
/// the center wavelength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSpec {
    pub signal_center_nm: f64,
    pub idler_center_nm: f64,
    pub signal_span_nm: f64,
    pub idler_span_nm: f64,
    pub signal_points: usize,
    pub idler_points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            signal_center_nm: 1580.0,
            idler_center_nm: 1580.0,
            signal_span_nm: 10.0,
            idler_span_nm: 10.0,
            signal_points: 251,
            idler_points: 251,
        }
    }
}

impl GridSpec {
    pub fn square(center_nm: f64, span_nm: f64, points: usize) -> Self {
        GridSpec {
            signal_center_nm: center_nm,
            idler_center_nm: center_nm,
            signal_span_nm: span_nm,
            idler_span_nm: span_nm,
            signal_points: points,
            idler_points: points,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [("signal", self.signal_points), ("idler", self.idler_points)] {
            if !(2..=MAX_GRID_POINTS).contains(&n) {
                return Err(Error::invalid(format!("{name} points must be in 2..={MAX_GRID_POINTS}, got {n}")));
            }
        }
        for v in [self.signal_center_nm, self.idler_center_nm, self.signal_span_nm, self.idler_span_nm] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid("grid centers and spans must be positive"));
            }
        }
        if self.signal_span_nm >= self.signal_center_nm || self.idler_span_nm >= self.idler_center_nm {
            return Err(Error::invalid("grid span must be smaller than its center wavelength"));
        }
        Ok(())
    }

    pub fn signal_center(&self) -> f64 {
        omega_from_nm(self.signal_center_nm)
    }

    pub fn idler_center(&self) -> f64 {
        omega_from_nm(self.idler_center_nm)
    }

    pub fn signal_detuning(&self) -> Vec<f64> {
        detuning_axis(self.signal_span_nm, self.signal_center_nm, self.signal_points)
    }

    pub fn idler_detuning(&self) -> Vec<f64> {
        detuning_axis(self.idler_span_nm, self.idler_center_nm, self.idler_points)
    }
}

fn detuning_axis(span_nm: f64, center_nm: f64, n: usize) -> Vec<f64> {
    let half = bandwidth_nm_to_omega(0.5 * span_nm, center_nm);
    let step = 2.0 * half / (n - 1) as f64;
    (0..n).map(|k| -half + step * k as f64).collect()
}

/// Complex matrix on a (signal, idler) detuning grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMap {
    pub signal_center: f64,
    pub idler_center: f64,
    pub signal_detuning: Vec<f64>,
    pub idler_detuning: Vec<f64>,
    pub values: DMatrix<Complex64>,
}

impl SpectralMap {
    pub fn signal_omega(&self, i: usize) -> f64 {
        self.signal_center + self.signal_detuning[i]
    }

    pub fn idler_omega(&self, j: usize) -> f64 {
        self.idler_center + self.idler_detuning[j]
    }

    pub fn signal_nm(&self) -> Vec<f64> {
        (0..self.signal_detuning.len()).map(|i| nm_from_omega(self.signal_omega(i))).collect()
    }

    pub fn idler_nm(&self) -> Vec<f64> {
        (0..self.idler_detuning.len()).map(|j| nm_from_omega(self.idler_omega(j))).collect()
    }

    pub fn cell_area(&self) -> f64 {
        axis_step(&self.signal_detuning) * axis_step(&self.idler_detuning)
    }
}

fn axis_step(axis: &[f64]) -> f64 {
    (axis[axis.len() - 1] - axis[0]) / (axis.len() - 1) as f64
}

/// Phase-matching amplitude `phi(dk(omega_s, omega_i))` for one grid point.
pub fn phase_matching_at(crystal: &CrystalSpec, pm: &PhaseMatchSpec, omega_s: f64, omega_i: f64) -> Result<Complex64> {
    Ok(match pm {
        PhaseMatchSpec::Uniform { length_m, include_phase } => {
            pm_amplitude_uniform(phase_mismatch(omega_s, omega_i, crystal)?, *length_m, *include_phase)
        }
        PhaseMatchSpec::Domains(d) => pm_amplitude_domains(bulk_mismatch(omega_s, omega_i, crystal)?, d),
        PhaseMatchSpec::Tabulated(t) => {
            Complex64::new(t.amplitude_at(nm_from_omega(omega_s), nm_from_omega(omega_i)), 0.0)
        }
    })
}

/// Phase-matching function sampled on `grid` (independent of the pump).
pub fn phase_matching_map(
    crystal: &CrystalSpec,
    pm: &PhaseMatchSpec,
    grid: &GridSpec,
    exec: Execution,
) -> Result<SpectralMap> {
    grid.validate()?;
    let signal_center = grid.signal_center();
    let idler_center = grid.idler_center();
    let signal_detuning = grid.signal_detuning();
    let idler_detuning = grid.idler_detuning();
    let rows = try_map_indices(signal_detuning.len(), exec, |i| {
        let ws = signal_center + signal_detuning[i];
        idler_detuning
            .iter()
            .map(|d| phase_matching_at(crystal, pm, ws, idler_center + d))
            .collect::<Result<Vec<_>>>()
    })?;
    let values = DMatrix::from_fn(signal_detuning.len(), idler_detuning.len(), |i, j| rows[i][j]);
    Ok(SpectralMap { signal_center, idler_center, signal_detuning, idler_detuning, values })
}

/// Joint spectral amplitude `f(omega_s, omega_i)` on a uniform frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSpectrum {
    map: SpectralMap,
    normalized: bool,
    provenance: String,
}

impl JointSpectrum {
    pub fn new(map: SpectralMap, provenance: impl Into<String>) -> Result<Self> {
        if map.values.nrows() != map.signal_detuning.len() || map.values.ncols() != map.idler_detuning.len() {
            return Err(Error::invalid("amplitude matrix does not match its axes"));
        }
        check_uniform_axis(&map.signal_detuning, map.signal_center)?;
        check_uniform_axis(&map.idler_detuning, map.idler_center)?;
        Ok(JointSpectrum { map, normalized: false, provenance: provenance.into() })
    }

    /// `alpha(omega_s + omega_i) * phi` over a precomputed phase-matching map.
    pub fn from_phase_matching(pump: &PumpEnvelope, phase_matching: &SpectralMap, exec: Execution) -> Self {
        let pm = phase_matching;
        let rows = map_indices(pm.signal_detuning.len(), exec, |i| {
            let ws = pm.signal_omega(i);
            (0..pm.idler_detuning.len())
                .map(|j| pm.values[(i, j)] * pump_amplitude(pump, ws + pm.idler_omega(j)))
                .collect::<Vec<_>>()
        });
        let values = DMatrix::from_fn(pm.values.nrows(), pm.values.ncols(), |i, j| rows[i][j]);
        JointSpectrum {
            map: SpectralMap { values, ..pm.clone() },
            normalized: false,
            provenance: String::new(),
        }
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn map(&self) -> &SpectralMap {
        &self.map
    }

    pub fn amplitudes(&self) -> &DMatrix<Complex64> {
        &self.map.values
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// `sum |f|^2 dOmega_s dOmega_i`.
    pub fn norm_squared(&self) -> f64 {
        self.map.values.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.map.cell_area()
    }

    /// Rescaled so that `sum |f|^2 dOmega_s dOmega_i = 1`.
    pub fn normalized(mut self) -> Result<Self> {
        let n2 = self.norm_squared();
        if !(n2 > 0.0) {
            return Err(Error::ZeroMatrix);
        }
        let scale = 1.0 / n2.sqrt();
        self.map.values.iter_mut().for_each(|c| *c *= scale);
        self.normalized = true;
        Ok(self)
    }

    /// Signal and idler exchanged (matrix transpose).
    pub fn transposed(&self) -> Self {
        let m = &self.map;
        JointSpectrum {
            map: SpectralMap {
                signal_center: m.idler_center,
                idler_center: m.signal_center,
                signal_detuning: m.idler_detuning.clone(),
                idler_detuning: m.signal_detuning.clone(),
                values: m.values.transpose(),
            },
            normalized: self.normalized,
            provenance: self.provenance.clone(),
        }
    }

    /// Every amplitude multiplied by `factor`; clears the normalization flag
    /// unless `|factor| = 1`.
    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        out.map.values.iter_mut().for_each(|c| *c *= factor);
        out.normalized = self.normalized && (factor.norm() - 1.0).abs() < 1e-15;
        out
    }

    pub fn is_real(&self) -> bool {
        self.map.values.iter().all(|c| c.im == 0.0)
    }
}

/// Spacing must agree to 1e-12 relative to the absolute frequencies.
fn check_uniform_axis(axis: &[f64], center: f64) -> Result<()> {
    if axis.len() < 2 {
        return Err(Error::invalid("spectral axes need at least two points"));
    }
    let step = axis_step(axis);
    if !(step > 0.0) {
        return Err(Error::invalid("spectral axes must be strictly increasing"));
    }
    let scale = axis.iter().fold(center.abs(), |m, v| m.max((center + v).abs()));
    for (k, w) in axis.windows(2).enumerate() {
        if !(w[1] > w[0]) || ((w[1] - w[0]) - step).abs() > 1e-12 * scale {
            return Err(Error::invalid(format!("spectral axis is not uniform at index {k}")));
        }
    }
    Ok(())
}

pub fn build_jsa(
    pump: &PumpEnvelope,
    crystal: &CrystalSpec,
    pm: &PhaseMatchSpec,
    grid: &GridSpec,
) -> Result<JointSpectrum> {
    build_jsa_with(pump, crystal, pm, grid, Execution::default())
}

/// `f[i][j] = alpha(omega_s,i + omega_i,j) phi(dk(omega_s,i, omega_i,j))`, unnormalized.
pub fn build_jsa_with(
    pump: &PumpEnvelope,
    crystal: &CrystalSpec,
    pm: &PhaseMatchSpec,
    grid: &GridSpec,
    exec: Execution,
) -> Result<JointSpectrum> {
    let map = phase_matching_map(crystal, pm, grid, exec)?;
    Ok(JointSpectrum::from_phase_matching(pump, &map, exec).with_provenance(pm.describe()))
}

/// Joint spectral intensity `|f|^2`.
pub fn jsi(js: &JointSpectrum) -> DMatrix<f64> {
    js.amplitudes().map(|c| c.norm_sqr())
}

/// Relative pair rate `N_p(omega_s + omega_i) |f|^2`.
pub fn spdc_rate(js: &JointSpectrum, pump_photon_rate: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let m = js.map();
    DMatrix::from_fn(m.values.nrows(), m.values.ncols(), |i, j| {
        pump_photon_rate(m.signal_omega(i) + m.idler_omega(j)) * m.values[(i, j)].norm_sqr()
    })
}
