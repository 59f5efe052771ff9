//! Frequency-resolved SFG scans, wideband SHG sweeps and photon-counting
//! statistics.
//!
//! Rates are relative to a calibration constant: the detected count rate (in
//! counts/s) for unit input rates at `|phi|^2 = 1`.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::dispersion::{degenerate_qpm_wavelength, CrystalSpec, Dispersion, PolarizationConfig};
use crate::error::{Error, Result};
use crate::interp;
use crate::io::{write_columns_csv, write_matrix_csv};
use crate::par::{map_indices, try_map_indices, Execution};
use crate::spectrum::{phase_matching_at, PhaseMatchSpec};
use crate::units::{omega_from_nm, sin_pi};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DetectorModel {
    pub efficiency: f64,
    /// counts/s
    pub dark_count_rate: f64,
    /// seconds per scan point
    pub integration_time_s: f64,
}

impl Default for DetectorModel {
    fn default() -> Self {
        DetectorModel { efficiency: 1.0, dark_count_rate: 100.0, integration_time_s: 1.0 }
    }
}

impl DetectorModel {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.efficiency) {
            return Err(Error::invalid(format!("detector efficiency must be in [0, 1], got {}", self.efficiency)));
        }
        if !(self.dark_count_rate >= 0.0 && self.dark_count_rate.is_finite()) {
            return Err(Error::invalid("dark count rate must be >= 0"));
        }
        if !(self.integration_time_s > 0.0 && self.integration_time_s.is_finite()) {
            return Err(Error::invalid(format!(
                "integration time must be > 0, got {}",
                self.integration_time_s
            )));
        }
        Ok(())
    }
}

/// Inclusive wavelength sweep `start, start + step, ..., stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanAxis {
    pub start_nm: f64,
    pub stop_nm: f64,
    pub step_nm: f64,
}

impl ScanAxis {
    /// `points` samples centered on `center_nm` spaced by `step_nm`.
    pub fn centered(center_nm: f64, step_nm: f64, points: usize) -> Self {
        let half = 0.5 * step_nm * (points.max(1) - 1) as f64;
        ScanAxis { start_nm: center_nm - half, stop_nm: center_nm + half, step_nm }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step_nm > 0.0 && self.step_nm.is_finite()) {
            return Err(Error::invalid(format!("scan step must be > 0, got {}", self.step_nm)));
        }
        if !(self.start_nm > 0.0 && self.stop_nm >= self.start_nm && self.stop_nm.is_finite()) {
            return Err(Error::invalid(format!("bad scan range [{}, {}] nm", self.start_nm, self.stop_nm)));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        ((self.stop_nm - self.start_nm) / self.step_nm + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.start_nm + self.step_nm * k as f64).collect()
    }
}

/// Input photon rate, constant or tabulated against wavelength (nm).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InputRate {
    Constant(f64),
    Tabulated(Vec<(f64, f64)>),
}

impl Default for InputRate {
    fn default() -> Self {
        InputRate::Constant(1.0)
    }
}

impl InputRate {
    pub fn validate(&self) -> Result<()> {
        match self {
            InputRate::Constant(v) if *v >= 0.0 && v.is_finite() => Ok(()),
            InputRate::Constant(v) => Err(Error::invalid(format!("input rate must be >= 0, got {v}"))),
            InputRate::Tabulated(t) => {
                if t.len() < 2 || t.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                    return Err(Error::invalid("tabulated input rate needs >= 2 points with increasing wavelength"));
                }
                if t.iter().any(|p| !(p.1 >= 0.0 && p.1.is_finite())) {
                    return Err(Error::invalid("tabulated input rates must be >= 0"));
                }
                Ok(())
            }
        }
    }

    /// Rate at `wavelength_nm`; tabulated rates are 0 outside their table.
    pub fn at(&self, wavelength_nm: f64) -> f64 {
        match self {
            InputRate::Constant(v) => *v,
            InputRate::Tabulated(t) => {
                let xs: Vec<f64> = t.iter().map(|p| p.0).collect();
                let ys: Vec<f64> = t.iter().map(|p| p.1).collect();
                interp::linear(&xs, &ys, wavelength_nm).unwrap_or(0.0)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub axis1: ScanAxis,
    /// `None` selects the diagonal (SHG) mode with `omega_2 = omega_1`.
    #[serde(default)]
    pub axis2: Option<ScanAxis>,
    #[serde(default)]
    pub input_rate_1: InputRate,
    #[serde(default)]
    pub input_rate_2: InputRate,
    #[serde(default = "default_calibration")]
    pub calibration: f64,
    /// Draw Poisson counts (requires a seed).
    #[serde(default = "default_true")]
    pub sample: bool,
}

fn default_calibration() -> f64 {
    1e6
}

fn default_true() -> bool {
    true
}

impl Default for ScanConfig {
    /// 251 x 251 points at 0.04 nm around 1580 nm.
    fn default() -> Self {
        let axis = ScanAxis::centered(1580.0, 0.04, 251);
        ScanConfig {
            axis1: axis,
            axis2: Some(axis),
            input_rate_1: InputRate::Constant(1.0),
            input_rate_2: InputRate::Constant(1.0),
            calibration: default_calibration(),
            sample: true,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        self.axis1.validate()?;
        if let Some(a) = &self.axis2 {
            a.validate()?;
        }
        self.input_rate_1.validate()?;
        self.input_rate_2.validate()?;
        if !(self.calibration >= 0.0 && self.calibration.is_finite()) {
            return Err(Error::invalid("calibration must be >= 0"));
        }
        Ok(())
    }
}

/// Crystal, phase-matching model, calibration and detector for rate evaluation.
#[derive(Debug, Clone, Copy)]
pub struct SfgModel<'a> {
    pub crystal: &'a CrystalSpec,
    pub phase_matching: &'a PhaseMatchSpec,
    pub calibration: f64,
    pub detector: DetectorModel,
}

/// `efficiency * calibration * N1 * N2 * |phi|^2 + dark`, counts/s.
pub fn sfg_expected_rate(model: &SfgModel<'_>, omega_1: f64, omega_2: f64, n1: f64, n2: f64) -> Result<f64> {
    let signal = model.detector.efficiency * model.calibration * n1 * n2;
    let phi2 = if signal == 0.0 {
        0.0
    } else {
        phase_matching_at(model.crystal, model.phase_matching, omega_1, omega_2)?.norm_sqr()
    };
    Ok(signal * phi2 + model.detector.dark_count_rate)
}

/// Poisson count for one scan point; the generator is keyed on
/// `(seed, index)` so any subset of points reproduces independently.
pub fn sample_count(mean: f64, seed: u64, index: u64) -> u64 {
    if !(mean > 0.0) {
        return 0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let poisson = Poisson::new(mean).expect("positive finite Poisson mean");
    poisson.sample(&mut rng) as u64
}

pub fn sample_counts(rates: &[f64], integration_time_s: f64, seed: u64, exec: Execution) -> Vec<u64> {
    map_indices(rates.len(), exec, |k| sample_count(rates[k] * integration_time_s, seed, k as u64))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanComponent {
    pub label: String,
    /// Signal-only rate (no dark counts), counts/s.
    pub expected: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub axis1_nm: Vec<f64>,
    /// `None` for 1D (diagonal) scans.
    pub axis2_nm: Option<Vec<f64>>,
    /// Row-major over (axis1, axis2), counts/s including dark counts.
    pub expected: Vec<f64>,
    pub counts: Option<Vec<u64>>,
    pub components: Vec<ScanComponent>,
    pub detector: DetectorModel,
    pub seed: Option<u64>,
    pub warnings: Vec<String>,
}

impl ScanResult {
    pub fn shape(&self) -> (usize, usize) {
        (self.axis1_nm.len(), self.axis2_nm.as_ref().map_or(1, Vec::len))
    }

    pub fn peak_expected(&self) -> f64 {
        self.expected.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Dark-subtracted signal rate per point, from the counts when sampled,
    /// clamped at zero.
    pub fn signal_rate(&self) -> Vec<f64> {
        let dark = self.detector.dark_count_rate;
        match &self.counts {
            Some(c) => c.iter().map(|&n| (n as f64 / self.detector.integration_time_s - dark).max(0.0)).collect(),
            None => self.expected.iter().map(|&r| (r - dark).max(0.0)).collect(),
        }
    }

    /// Matrix CSV of the counts (if sampled) or expected rates.
    pub fn write_matrix_csv<W: Write>(&self, w: W, use_counts: bool) -> Result<()> {
        let cols = self
            .axis2_nm
            .as_ref()
            .ok_or_else(|| Error::invalid("1D scans are written with write_curve_csv"))?;
        let ncols = cols.len();
        match (&self.counts, use_counts) {
            (Some(c), true) => write_matrix_csv(w, &self.axis1_nm, cols, |i, j| c[i * ncols + j].to_string()),
            (None, true) => Err(Error::invalid("scan was not sampled")),
            _ => write_matrix_csv(w, &self.axis1_nm, cols, |i, j| self.expected[i * ncols + j].to_string()),
        }
    }

    /// Columns: wavelength, expected total, counts (if sampled), components.
    pub fn write_curve_csv<W: Write>(&self, w: W) -> Result<()> {
        let counts: Option<Vec<f64>> = self.counts.as_ref().map(|c| c.iter().map(|&n| n as f64).collect());
        let mut names = vec!["wavelength_nm", "expected_total"];
        let mut cols: Vec<&[f64]> = vec![&self.axis1_nm, &self.expected];
        if let Some(c) = &counts {
            names.push("counts");
            cols.push(c);
        }
        for comp in &self.components {
            names.push(&comp.label);
            cols.push(&comp.expected);
        }
        write_columns_csv(w, &names, &cols)
    }

    pub fn metadata(&self) -> ScanMetadata {
        ScanMetadata {
            rows: self.axis1_nm.len(),
            cols: self.axis2_nm.as_ref().map(Vec::len),
            detector: self.detector,
            seed: self.seed,
            sampled: self.counts.is_some(),
            components: self.components.iter().map(|c| c.label.clone()).collect(),
            warnings: self.warnings.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanMetadata {
    pub rows: usize,
    pub cols: Option<usize>,
    pub detector: DetectorModel,
    pub seed: Option<u64>,
    pub sampled: bool,
    pub components: Vec<String>,
    pub warnings: Vec<String>,
}

fn check_sampling(config: &ScanConfig, seed: Option<u64>) -> Result<()> {
    if config.sample && seed.is_none() {
        return Err(Error::invalid("a seed is required when sampling counts"));
    }
    Ok(())
}

pub fn simulate_sfg_scan(
    config: &ScanConfig,
    crystal: &CrystalSpec,
    phase_matching: &PhaseMatchSpec,
    detector: &DetectorModel,
    seed: Option<u64>,
) -> Result<ScanResult> {
    simulate_sfg_scan_with(config, crystal, phase_matching, detector, seed, Execution::default())
}

/// Expected SFG rates over the scan grid, plus Poisson counts when
/// `config.sample` is set. In diagonal mode the scan is 1D with both inputs
/// at the same wavelength.
pub fn simulate_sfg_scan_with(
    config: &ScanConfig,
    crystal: &CrystalSpec,
    phase_matching: &PhaseMatchSpec,
    detector: &DetectorModel,
    seed: Option<u64>,
    exec: Execution,
) -> Result<ScanResult> {
    config.validate()?;
    detector.validate()?;
    check_sampling(config, seed)?;
    let model = SfgModel { crystal, phase_matching, calibration: config.calibration, detector: *detector };
    let axis1 = config.axis1.points();
    let axis2 = config.axis2.as_ref().map(ScanAxis::points);

    let expected = match &axis2 {
        Some(axis2) => {
            let rows = try_map_indices(axis1.len(), exec, |i| {
                let l1 = axis1[i];
                let (w1, n1) = (omega_from_nm(l1), config.input_rate_1.at(l1));
                axis2
                    .iter()
                    .map(|&l2| sfg_expected_rate(&model, w1, omega_from_nm(l2), n1, config.input_rate_2.at(l2)))
                    .collect::<Result<Vec<_>>>()
            })?;
            rows.concat()
        }
        None => try_map_indices(axis1.len(), exec, |i| {
            let l = axis1[i];
            let w = omega_from_nm(l);
            sfg_expected_rate(&model, w, w, config.input_rate_1.at(l), config.input_rate_2.at(l))
        })?,
    };

    let counts = match (config.sample, seed) {
        (true, Some(s)) => Some(sample_counts(&expected, detector.integration_time_s, s, exec)),
        _ => None,
    };
    Ok(ScanResult {
        axis1_nm: axis1,
        axis2_nm: axis2,
        expected,
        counts,
        components: Vec::new(),
        detector: *detector,
        seed,
        warnings: Vec::new(),
    })
}

/// Relative effective nonlinearity of QPM order `m` at duty cycle `d`:
/// `2 / (m pi) |sin(m pi d)|`, exactly zero for even orders at 50% duty.
pub fn qpm_fourier_coefficient(order: u32, duty: f64) -> Result<f64> {
    if order == 0 {
        return Err(Error::invalid("QPM order must be >= 1"));
    }
    if !(duty > 0.0 && duty < 1.0) {
        return Err(Error::invalid(format!("duty cycle must be in (0, 1), got {duty}")));
    }
    let m = f64::from(order);
    Ok(2.0 / (m * std::f64::consts::PI) * sin_pi(m * duty).abs())
}

/// One QPM process contributing to a diagonal SHG sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ShgProcess {
    pub label: String,
    pub crystal: CrystalSpec,
    /// Absorbs tensor-element ratios and polarization projections.
    pub relative_amplitude: f64,
}

/// Duty cycle of the default process set; slightly off 50% so the
/// second-order process is not nulled.
pub const DEFAULT_SHG_DUTY: f64 = 0.47;

/// Type-II (m = 1, 46.125 um), Type-I (m = 7, 45.807 um) and Type-0
/// (m = 2, 46.010 um) processes of one 29 mm crystal. The Type-I and Type-0
/// amplitudes put their peaks near 1e-3 of the Type-II peak.
pub fn default_shg_processes(dispersion: &Dispersion) -> Result<Vec<ShgProcess>> {
    let make = |label: &str, period: f64, order: u32, pol: PolarizationConfig, amplitude: f64| -> Result<ShgProcess> {
        Ok(ShgProcess {
            label: label.to_string(),
            crystal: CrystalSpec::new(period, 29.0, DEFAULT_SHG_DUTY, order, pol, dispersion.clone())?,
            relative_amplitude: amplitude,
        })
    };
    Ok(vec![
        make("type-ii", 46.125, 1, PolarizationConfig::TYPE_II, 1.0)?,
        make("type-i", 45.807, 7, PolarizationConfig::TYPE_I, 0.28)?,
        make("type-0", 46.010, 2, PolarizationConfig::TYPE_0, 0.335)?,
    ])
}

/// Sum of per-process SHG intensities along `omega_1 = omega_2`.
///
/// Each component is `efficiency * calibration * N1 * N2 * a^2 G_m(d)^2
/// |sinc(dk L / 2)|^2`; the total adds the dark rate.
pub fn simulate_shg_scan(
    config: &ScanConfig,
    processes: &[ShgProcess],
    detector: &DetectorModel,
    seed: Option<u64>,
) -> Result<ScanResult> {
    simulate_shg_scan_with(config, processes, detector, seed, Execution::default())
}

pub fn simulate_shg_scan_with(
    config: &ScanConfig,
    processes: &[ShgProcess],
    detector: &DetectorModel,
    seed: Option<u64>,
    exec: Execution,
) -> Result<ScanResult> {
    if config.axis2.is_some() {
        return Err(Error::invalid("SHG scans use the diagonal mode (no axis2)"));
    }
    config.validate()?;
    detector.validate()?;
    check_sampling(config, seed)?;
    if processes.is_empty() {
        return Err(Error::invalid("SHG scan needs at least one process"));
    }
    let axis = config.axis1.points();
    let mut warnings = Vec::new();
    let margin = 0.1 * (config.axis1.stop_nm - config.axis1.start_nm).max(1.0);
    let mut components = Vec::with_capacity(processes.len());
    for p in processes {
        if !(p.relative_amplitude >= 0.0 && p.relative_amplitude.is_finite()) {
            return Err(Error::invalid(format!("process '{}': relative amplitude must be >= 0", p.label)));
        }
        match degenerate_qpm_wavelength(&p.crystal) {
            Ok(d) => {
                let nm = d.wavelength_um * 1e3;
                if nm < config.axis1.start_nm - margin || nm > config.axis1.stop_nm + margin {
                    warnings.push(format!("process '{}': degenerate QPM point {nm:.3} nm lies outside the sweep", p.label));
                }
            }
            Err(e) => warnings.push(format!("process '{}': {e}", p.label)),
        }
        let g = qpm_fourier_coefficient(p.crystal.qpm_order(), p.crystal.duty_cycle())?;
        let weight = p.relative_amplitude * p.relative_amplitude * g * g;
        let pm = PhaseMatchSpec::for_crystal(&p.crystal);
        let model = SfgModel {
            crystal: &p.crystal,
            phase_matching: &pm,
            calibration: config.calibration * weight,
            detector: DetectorModel { dark_count_rate: 0.0, ..*detector },
        };
        let expected = try_map_indices(axis.len(), exec, |k| {
            let l = axis[k];
            let w = omega_from_nm(l);
            sfg_expected_rate(&model, w, w, config.input_rate_1.at(l), config.input_rate_2.at(l))
        })?;
        components.push(ScanComponent { label: p.label.clone(), expected });
    }
    let total: Vec<f64> = (0..axis.len())
        .map(|k| components.iter().map(|c| c.expected[k]).sum::<f64>() + detector.dark_count_rate)
        .collect();
    let counts = match (config.sample, seed) {
        (true, Some(s)) => Some(sample_counts(&total, detector.integration_time_s, s, exec)),
        _ => None,
    };
    Ok(ScanResult {
        axis1_nm: axis,
        axis2_nm: None,
        expected: total,
        counts,
        components,
        detector: *detector,
        seed,
        warnings,
    })
}

/// `10 log10(peak expected rate / dark rate)`, dB.
pub fn snr(result: &ScanResult) -> Result<f64> {
    snr_from_rates(result.peak_expected(), result.detector.dark_count_rate)
}

pub fn snr_from_rates(peak: f64, dark: f64) -> Result<f64> {
    if !(dark > 0.0) {
        return Err(Error::UndefinedSnr);
    }
    Ok(10.0 * (peak / dark).log10())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn stub() -> CrystalSpec {
        CrystalSpec::new(1e300, 30.0, 0.5, 1, PolarizationConfig::TYPE_0, Dispersion::dispersionless(1.8, (0.3, 4.0)).unwrap())
            .unwrap()
    }

    fn model<'a>(c: &'a CrystalSpec, pm: &'a PhaseMatchSpec) -> SfgModel<'a> {
        SfgModel { crystal: c, phase_matching: pm, calibration: 1e6, detector: DetectorModel::default() }
    }

    #[test]
    fn peak_rate_with_dark() {
        let c = stub();
        let pm = PhaseMatchSpec::for_crystal(&c);
        let w = omega_from_nm(1580.0);
        assert_eq!(sfg_expected_rate(&model(&c, &pm), w, w, 1.0, 1.0).unwrap(), 1_000_100.0);
        assert_eq!(sfg_expected_rate(&model(&c, &pm), w, w, 0.0, 1.0).unwrap(), 100.0);
        let one = sfg_expected_rate(&model(&c, &pm), w, w, 1.0, 1.0).unwrap() - 100.0;
        let four = sfg_expected_rate(&model(&c, &pm), w, w, 2.0, 2.0).unwrap() - 100.0;
        assert_eq!(four, 4.0 * one);
    }

    #[test]
    fn zero_integration_time_rejected() {
        let c = stub();
        let det = DetectorModel { integration_time_s: 0.0, ..Default::default() };
        let mut cfg = ScanConfig::default();
        cfg.axis1 = ScanAxis::centered(1580.0, 0.04, 5);
        cfg.axis2 = Some(cfg.axis1);
        assert!(simulate_sfg_scan(&cfg, &c, &PhaseMatchSpec::for_crystal(&c), &det, Some(1)).is_err());
    }

    #[test]
    fn sampling_without_seed_rejected() {
        let c = stub();
        let mut cfg = ScanConfig::default();
        cfg.axis1 = ScanAxis::centered(1580.0, 0.04, 5);
        cfg.axis2 = Some(cfg.axis1);
        let pm = PhaseMatchSpec::for_crystal(&c);
        assert!(simulate_sfg_scan(&cfg, &c, &pm, &DetectorModel::default(), None).is_err());
        cfg.sample = false;
        assert!(simulate_sfg_scan(&cfg, &c, &pm, &DetectorModel::default(), None).is_ok());
    }

    #[test]
    fn default_axis_has_251_points() {
        let a = ScanConfig::default().axis1;
        assert_eq!(a.len(), 251);
        let p = a.points();
        assert!((p[250] - p[0] - 10.0).abs() < 1e-9);
        assert!((p[125] - 1580.0).abs() < 1e-9);
    }

    #[test]
    fn fourier_coefficients() {
        assert_eq!(qpm_fourier_coefficient(2, 0.5).unwrap(), 0.0);
        assert!((qpm_fourier_coefficient(1, 0.5).unwrap() - 2.0 / PI).abs() < 1e-15);
        let v = qpm_fourier_coefficient(2, 0.45).unwrap();
        assert!((v - (0.9 * PI).sin() / PI).abs() < 1e-15);
        assert!((v - 0.0983).abs() < 1e-4);
        assert!(qpm_fourier_coefficient(0, 0.5).is_err());
        assert!(qpm_fourier_coefficient(1, 1.0).is_err());
    }

    #[test]
    fn snr_values() {
        assert!((snr_from_rates(1e6, 100.0).unwrap() - 40.0).abs() < 1e-12);
        assert_eq!(snr_from_rates(7.0, 7.0).unwrap(), 0.0);
        assert!((snr_from_rates(1e6, 10.0).unwrap() - 50.0).abs() < 1e-12);
        assert!(matches!(snr_from_rates(1e6, 0.0), Err(Error::UndefinedSnr)));
    }

    #[test]
    fn keyed_counts_independent_of_order() {
        let rates: Vec<f64> = (0..200).map(|k| 10.0 + k as f64).collect();
        let all = sample_counts(&rates, 1.0, 9, Execution::Parallel);
        assert_eq!(all, sample_counts(&rates, 1.0, 9, Execution::Serial));
        assert_eq!(all[137], sample_count(rates[137], 9, 137));
        assert_ne!(all, sample_counts(&rates, 1.0, 10, Execution::Serial));
        assert_eq!(sample_count(0.0, 1, 1), 0);
    }

    #[test]
    fn tabulated_input_rate_interpolates() {
        let r = InputRate::Tabulated(vec![(1500.0, 1.0), (1600.0, 3.0)]);
        r.validate().unwrap();
        assert_eq!(r.at(1550.0), 2.0);
        assert_eq!(r.at(1700.0), 0.0);
        assert!(InputRate::Constant(-1.0).validate().is_err());
    }
}
