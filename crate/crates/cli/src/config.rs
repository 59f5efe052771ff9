//! Run configuration: one JSON or TOML file per run, overridden by flags.
//!
//! Relative paths inside a config file resolve against the file's directory.
//! Without `sellmeier` the built-in KTP set is used; without `crystal` each
//! command picks its own built-in geometry.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qpm_core::dispersion::{CrystalGeometry, CrystalSpec, Dispersion};
use qpm_core::fitting::{CurveGeometry, FitOptions, FitParameter, FreeParameter, ModelKind};
use qpm_core::scan::{DetectorModel, ScanConfig};
use qpm_core::schmidt::BandwidthSearch;
use qpm_core::spectrum::{GridSpec, PumpConfig, PumpShape};

use crate::CliError;

pub const BUILTIN_SELLMEIER: &str = include_str!("../../../data/sellmeier/ktp.json");
pub const BUILTIN_DESIGN: &str = include_str!("../../../data/crystals/ppktp_type2_design.json");
pub const BUILTIN_FITTED: &str = include_str!("../../../data/crystals/ppktp_type2_fitted.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// A crystal file path or an inline geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CrystalRef {
    Path(PathBuf),
    Inline(CrystalGeometry),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhaseMatchingConfig {
    Uniform {
        #[serde(default)]
        include_phase: bool,
    },
    /// Explicit domains from the crystal's period and duty cycle.
    Domains {
        #[serde(default)]
        jitter_sigma: f64,
        #[serde(default)]
        jitter_seed: u64,
    },
    /// Matrix CSV of measured `|phi|^2`, rows = signal.
    Tabulated { path: PathBuf },
}

impl Default for PhaseMatchingConfig {
    fn default() -> Self {
        PhaseMatchingConfig::Uniform { include_phase: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShgProcessConfig {
    pub label: String,
    pub crystal: CrystalRef,
    pub relative_amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObservationConfig {
    /// Two-column CSV `(wavelength_nm, intensity)`.
    Curve { path: PathBuf, geometry: CurveGeometry },
    /// Matrix CSV fitted point by point.
    Matrix { path: PathBuf },
    /// Matrix CSV cut along the energy-conserving line of `pump_nm`; the
    /// model is cut from the same grid.
    CrossSection {
        path: PathBuf,
        pump_nm: f64,
        #[serde(default = "default_samples")]
        samples: usize,
    },
}

fn default_samples() -> usize {
    251
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitConfig {
    pub observations: Vec<ObservationConfig>,
    #[serde(default)]
    pub model: ModelKind,
    #[serde(default = "default_free")]
    pub free: Vec<FreeParameter>,
    #[serde(default)]
    pub options: FitOptions,
}

fn default_free() -> Vec<FreeParameter> {
    vec![
        FreeParameter::new(FitParameter::PolingPeriodUm, 45.9, 46.4),
        FreeParameter::new(FitParameter::LengthMm, 27.0, 32.0),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeConfig {
    pub shape: PumpShape,
    #[serde(default)]
    pub search: BandwidthSearch,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        OptimizeConfig { shape: PumpShape::Gaussian, search: BandwidthSearch::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorModelConfig {
    pub pair_probability: f64,
    pub separation_error: f64,
}

impl Default for ErrorModelConfig {
    fn default() -> Self {
        ErrorModelConfig { pair_probability: 0.01, separation_error: 0.01 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub sellmeier: Option<PathBuf>,
    pub crystal: Option<CrystalRef>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub formats: Option<Vec<Format>>,
    pub detector: DetectorModel,
    pub phase_matching: PhaseMatchingConfig,
    pub scan: Option<ScanConfig>,
    pub shg_processes: Option<Vec<ShgProcessConfig>>,
    pub grid: Option<GridSpec>,
    pub pump: Option<PumpConfig>,
    pub fit: Option<FitConfig>,
    pub optimize: Option<OptimizeConfig>,
    pub error_model: Option<ErrorModelConfig>,
}

impl RunConfig {
    /// Parses by extension (`.toml`, otherwise JSON) and makes every path
    /// inside absolute relative to the file.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let mut config: RunConfig = if path.extension().is_some_and(|e| e == "toml") {
            toml::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?
        } else {
            serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?
        };
        let base = path.parent().unwrap_or(Path::new("."));
        config.rebase(base);
        Ok(config)
    }

    fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(p) = &mut self.sellmeier {
            fix(p);
        }
        if let Some(CrystalRef::Path(p)) = &mut self.crystal {
            fix(p);
        }
        if let Some(p) = &mut self.out {
            fix(p);
        }
        if let PhaseMatchingConfig::Tabulated { path } = &mut self.phase_matching {
            fix(path);
        }
        for proc in self.shg_processes.iter_mut().flatten() {
            if let CrystalRef::Path(p) = &mut proc.crystal {
                fix(p);
            }
        }
        for obs in self.fit.iter_mut().flat_map(|f| f.observations.iter_mut()) {
            match obs {
                ObservationConfig::Curve { path, .. }
                | ObservationConfig::Matrix { path }
                | ObservationConfig::CrossSection { path, .. } => fix(path),
            }
        }
    }

    pub fn dispersion(&self) -> Result<Dispersion, CliError> {
        Ok(match &self.sellmeier {
            Some(p) => Dispersion::load(p).map_err(|e| CliError::config(format!("{}: {e}", p.display())))?,
            None => Dispersion::from_json_str(BUILTIN_SELLMEIER)?,
        })
    }

    pub fn formats(&self) -> Vec<Format> {
        let mut f = self.formats.clone().unwrap_or_else(|| vec![Format::Csv, Format::Json, Format::Svg]);
        f.sort();
        f.dedup();
        f
    }

    pub fn wants(&self, format: Format) -> bool {
        self.formats().contains(&format)
    }
}

pub fn load_geometry(crystal: &CrystalRef) -> Result<CrystalGeometry, CliError> {
    match crystal {
        CrystalRef::Path(p) => CrystalGeometry::load(p).map_err(|e| CliError::config(format!("{}: {e}", p.display()))),
        CrystalRef::Inline(g) => Ok(g.clone()),
    }
}

/// Resolves `crystal`, falling back to a built-in geometry.
pub fn resolve_crystal(
    crystal: Option<&CrystalRef>,
    builtin: &str,
    dispersion: &Dispersion,
) -> Result<CrystalSpec, CliError> {
    let geometry = match crystal {
        Some(c) => load_geometry(c)?,
        None => serde_json::from_str(builtin).map_err(|e| CliError::config(e.to_string()))?,
    };
    Ok(CrystalSpec::from_geometry(&geometry, dispersion.clone())?)
}
