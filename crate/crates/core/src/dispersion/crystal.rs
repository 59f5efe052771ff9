use std::path::Path;

use serde::{Deserialize, Serialize};

use super::sellmeier::{Axis, Dispersion};
use crate::error::{Error, Result};

/// Polarization axes of the pump, signal and idler fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarizationConfig {
    pub pump: Axis,
    pub signal: Axis,
    pub idler: Axis,
}

impl PolarizationConfig {
    /// Pump Y, signal Z, idler Y.
    pub const TYPE_II: Self = Self { pump: Axis::Y, signal: Axis::Z, idler: Axis::Y };
    /// Y + Y -> Z.
    pub const TYPE_I: Self = Self { pump: Axis::Z, signal: Axis::Y, idler: Axis::Y };
    /// Z + Z -> Z.
    pub const TYPE_0: Self = Self { pump: Axis::Z, signal: Axis::Z, idler: Axis::Z };

    pub fn by_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().replace(['_', ' '], "-").as_str() {
            "type-ii" | "type-2" => Some(Self::TYPE_II),
            "type-i" | "type-1" => Some(Self::TYPE_I),
            "type-0" => Some(Self::TYPE_0),
            _ => None,
        }
    }

    pub fn name(&self) -> Option<&'static str> {
        match *self {
            Self::TYPE_II => Some("type-ii"),
            Self::TYPE_I => Some("type-i"),
            Self::TYPE_0 => Some("type-0"),
            _ => None,
        }
    }

    /// Signal and idler exchanged.
    pub fn swapped(&self) -> Self {
        Self { pump: self.pump, signal: self.idler, idler: self.signal }
    }
}

/// Polarization as written in crystal files: a type name or explicit axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolarizationSpec {
    Named(String),
    Explicit(PolarizationConfig),
}

impl PolarizationSpec {
    pub fn resolve(&self) -> Result<PolarizationConfig> {
        match self {
            PolarizationSpec::Named(name) => PolarizationConfig::by_name(name)
                .ok_or_else(|| Error::invalid(format!("unknown polarization configuration '{name}'"))),
            PolarizationSpec::Explicit(p) => Ok(*p),
        }
    }
}

impl From<PolarizationConfig> for PolarizationSpec {
    fn from(p: PolarizationConfig) -> Self {
        match p.name() {
            Some(n) => PolarizationSpec::Named(n.to_string()),
            None => PolarizationSpec::Explicit(p),
        }
    }
}

/// Crystal geometry as stored on disk (dispersion comes from a separate file).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrystalGeometry {
    #[serde(default)]
    pub name: String,
    pub poling_period_um: f64,
    pub length_mm: f64,
    #[serde(default = "default_duty")]
    pub duty_cycle: f64,
    #[serde(default = "default_order")]
    pub qpm_order: u32,
    pub polarization: PolarizationSpec,
}

fn default_duty() -> f64 {
    0.5
}

fn default_order() -> u32 {
    1
}

impl CrystalGeometry {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// A periodically poled crystal: grating, length, and dispersion.
#[derive(Debug, Clone, PartialEq)]
pub struct CrystalSpec {
    poling_period_um: f64,
    length_mm: f64,
    duty_cycle: f64,
    qpm_order: u32,
    polarization: PolarizationConfig,
    dispersion: Dispersion,
}

impl CrystalSpec {
    pub fn new(
        poling_period_um: f64,
        length_mm: f64,
        duty_cycle: f64,
        qpm_order: u32,
        polarization: PolarizationConfig,
        dispersion: Dispersion,
    ) -> Result<Self> {
        if !(poling_period_um > 0.0) || poling_period_um.is_nan() {
            return Err(Error::invalid(format!("poling period must be > 0, got {poling_period_um}")));
        }
        if !(length_mm > 0.0 && length_mm.is_finite()) {
            return Err(Error::invalid(format!("crystal length must be > 0, got {length_mm}")));
        }
        if !(duty_cycle > 0.0 && duty_cycle < 1.0) {
            return Err(Error::invalid(format!("duty cycle must be in (0, 1), got {duty_cycle}")));
        }
        if qpm_order == 0 {
            return Err(Error::invalid("QPM order must be >= 1"));
        }
        for axis in [polarization.pump, polarization.signal, polarization.idler] {
            dispersion.get(axis)?;
        }
        Ok(CrystalSpec { poling_period_um, length_mm, duty_cycle, qpm_order, polarization, dispersion })
    }

    pub fn from_geometry(geometry: &CrystalGeometry, dispersion: Dispersion) -> Result<Self> {
        Self::new(
            geometry.poling_period_um,
            geometry.length_mm,
            geometry.duty_cycle,
            geometry.qpm_order,
            geometry.polarization.resolve()?,
            dispersion,
        )
    }

    pub fn geometry(&self) -> CrystalGeometry {
        CrystalGeometry {
            name: String::new(),
            poling_period_um: self.poling_period_um,
            length_mm: self.length_mm,
            duty_cycle: self.duty_cycle,
            qpm_order: self.qpm_order,
            polarization: self.polarization.into(),
        }
    }

    pub fn poling_period_um(&self) -> f64 {
        self.poling_period_um
    }

    pub fn length_mm(&self) -> f64 {
        self.length_mm
    }

    pub fn length_m(&self) -> f64 {
        self.length_mm * 1e-3
    }

    pub fn duty_cycle(&self) -> f64 {
        self.duty_cycle
    }

    pub fn qpm_order(&self) -> u32 {
        self.qpm_order
    }

    pub fn polarization(&self) -> PolarizationConfig {
        self.polarization
    }

    pub fn dispersion(&self) -> &Dispersion {
        &self.dispersion
    }

    pub fn with_poling_period(&self, poling_period_um: f64) -> Result<Self> {
        let mut c = self.clone();
        c.poling_period_um = poling_period_um;
        Self::new(c.poling_period_um, c.length_mm, c.duty_cycle, c.qpm_order, c.polarization, c.dispersion)
    }

    pub fn with_length(&self, length_mm: f64) -> Result<Self> {
        let c = self.clone();
        Self::new(c.poling_period_um, length_mm, c.duty_cycle, c.qpm_order, c.polarization, c.dispersion)
    }

    pub fn with_duty_cycle(&self, duty_cycle: f64) -> Result<Self> {
        let c = self.clone();
        Self::new(c.poling_period_um, c.length_mm, duty_cycle, c.qpm_order, c.polarization, c.dispersion)
    }

    pub fn with_qpm_order(&self, qpm_order: u32) -> Result<Self> {
        let c = self.clone();
        Self::new(c.poling_period_um, c.length_mm, c.duty_cycle, qpm_order, c.polarization, c.dispersion)
    }

    pub fn with_polarization(&self, polarization: PolarizationConfig) -> Result<Self> {
        let c = self.clone();
        Self::new(c.poling_period_um, c.length_mm, c.duty_cycle, c.qpm_order, polarization, c.dispersion)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stub() -> Dispersion {
        Dispersion::dispersionless(1.8, (0.3, 4.0)).unwrap()
    }

    #[test]
    fn named_types_map_to_axes() {
        assert_eq!(
            PolarizationConfig::by_name("Type-II").unwrap(),
            PolarizationConfig { pump: Axis::Y, signal: Axis::Z, idler: Axis::Y }
        );
        assert_eq!(
            PolarizationConfig::by_name("type-i").unwrap(),
            PolarizationConfig { pump: Axis::Z, signal: Axis::Y, idler: Axis::Y }
        );
        assert_eq!(
            PolarizationConfig::by_name("type_0").unwrap(),
            PolarizationConfig { pump: Axis::Z, signal: Axis::Z, idler: Axis::Z }
        );
        assert!(PolarizationConfig::by_name("type-iii").is_none());
    }

    #[test]
    fn invariants_enforced() {
        let p = PolarizationConfig::TYPE_II;
        assert!(CrystalSpec::new(0.0, 30.0, 0.5, 1, p, stub()).is_err());
        assert!(CrystalSpec::new(46.1, -1.0, 0.5, 1, p, stub()).is_err());
        assert!(CrystalSpec::new(46.1, 30.0, 1.0, 1, p, stub()).is_err());
        assert!(CrystalSpec::new(46.1, 30.0, 0.0, 1, p, stub()).is_err());
        assert!(CrystalSpec::new(46.1, 30.0, 0.5, 0, p, stub()).is_err());
        assert!(CrystalSpec::new(46.1, 30.0, 0.5, 1, p, stub()).is_ok());
    }

    #[test]
    fn geometry_file_parses_named_and_explicit() {
        let named: CrystalGeometry = serde_json::from_str(
            r#"{"poling_period_um": 46.1, "length_mm": 30, "polarization": "type-ii"}"#,
        )
        .unwrap();
        assert_eq!(named.duty_cycle, 0.5);
        assert_eq!(named.qpm_order, 1);
        assert_eq!(named.polarization.resolve().unwrap(), PolarizationConfig::TYPE_II);

        let explicit: CrystalGeometry = serde_json::from_str(
            r#"{"poling_period_um": 46.1, "length_mm": 30,
                "polarization": {"pump": "Z", "signal": "Y", "idler": "Z"}}"#,
        )
        .unwrap();
        let p = explicit.polarization.resolve().unwrap();
        assert_eq!(p.signal, Axis::Y);
        assert_eq!(p.name(), None);
    }
}
