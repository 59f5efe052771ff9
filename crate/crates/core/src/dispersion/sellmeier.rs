use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Crystallographic axis a field is polarized along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axis {
    Y,
    Z,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Y => f.write_str("Y"),
            Axis::Z => f.write_str("Z"),
        }
    }
}

/// Sellmeier coefficients for one axis:
///
/// `n^2 = A + sum_k B_k lambda^2 / (lambda^2 - C_k) - D lambda^2`, lambda in um.
///
/// Coefficients are named `A`, `D` and `B1`/`C1`, `B2`/`C2`, ... Evaluation
/// outside the valid range is an error.
#[derive(Debug, Clone, PartialEq)]
pub struct SellmeierSet {
    axis: Axis,
    coefficients: BTreeMap<String, f64>,
    constant: f64,
    poles: Vec<(f64, f64)>,
    ir_term: f64,
    range_um: (f64, f64),
    provenance: String,
}

const RANGE_CHECK_POINTS: usize = 1000;

impl SellmeierSet {
    pub fn new(
        axis: Axis,
        coefficients: BTreeMap<String, f64>,
        range_um: (f64, f64),
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let (lo, hi) = range_um;
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::invalid(format!("axis {axis}: bad valid range [{lo}, {hi}] um")));
        }
        let constant = *coefficients
            .get("A")
            .ok_or_else(|| Error::invalid(format!("axis {axis}: missing coefficient A")))?;
        let ir_term = coefficients.get("D").copied().unwrap_or(0.0);

        let mut poles = Vec::new();
        for k in 1.. {
            let b = coefficients.get(&format!("B{k}"));
            let c = coefficients.get(&format!("C{k}"));
            match (b, c) {
                (Some(&b), Some(&c)) => poles.push((b, c)),
                (None, None) => break,
                _ => return Err(Error::invalid(format!("axis {axis}: unpaired B{k}/C{k}"))),
            }
        }
        let known = 1 + usize::from(coefficients.contains_key("D")) + 2 * poles.len();
        if known != coefficients.len() {
            let names: Vec<_> = coefficients.keys().cloned().collect();
            return Err(Error::invalid(format!("axis {axis}: unrecognized coefficient in {names:?}")));
        }
        if coefficients.values().any(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("axis {axis}: non-finite coefficient")));
        }

        let set = SellmeierSet {
            axis,
            coefficients,
            constant,
            poles,
            ir_term,
            range_um,
            provenance: provenance.into(),
        };
        for i in 0..RANGE_CHECK_POINTS {
            let lambda = lo + (hi - lo) * i as f64 / (RANGE_CHECK_POINTS - 1) as f64;
            set.index(lambda)?;
        }
        Ok(set)
    }

    /// A dispersionless set with constant index `n`.
    pub fn constant(axis: Axis, n: f64, range_um: (f64, f64)) -> Result<Self> {
        let coefficients = BTreeMap::from([("A".to_string(), n * n)]);
        Self::new(axis, coefficients, range_um, "constant-index stub")
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn coefficients(&self) -> &BTreeMap<String, f64> {
        &self.coefficients
    }

    pub fn range_um(&self) -> (f64, f64) {
        self.range_um
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Range check with a 1e-12 relative allowance for round-off from
    /// frequency/wavelength conversion at the edges.
    pub fn contains(&self, wavelength_um: f64) -> bool {
        let (lo, hi) = self.range_um;
        wavelength_um >= lo * (1.0 - 1e-12) && wavelength_um <= hi * (1.0 + 1e-12)
    }

    fn check_range(&self, wavelength_um: f64) -> Result<()> {
        if self.contains(wavelength_um) {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                axis: self.axis,
                wavelength_um,
                min_um: self.range_um.0,
                max_um: self.range_um.1,
            })
        }
    }

    fn index_squared(&self, l2: f64) -> f64 {
        let mut n2 = self.constant - self.ir_term * l2;
        for &(b, c) in &self.poles {
            n2 += b * l2 / (l2 - c);
        }
        n2
    }

    pub fn index(&self, wavelength_um: f64) -> Result<f64> {
        self.check_range(wavelength_um)?;
        let n2 = self.index_squared(wavelength_um * wavelength_um);
        if n2.is_finite() && n2 > 1.0 {
            Ok(n2.sqrt())
        } else {
            Err(Error::UnphysicalIndex { axis: self.axis, wavelength_um })
        }
    }

    /// Index and its analytic derivative `dn/dlambda` (per um).
    pub fn index_with_derivative(&self, wavelength_um: f64) -> Result<(f64, f64)> {
        let n = self.index(wavelength_um)?;
        let l = wavelength_um;
        let l2 = l * l;
        // d(n^2)/dl = sum -2 B C l / (l^2 - C)^2 - 2 D l
        let mut dn2 = -2.0 * self.ir_term * l;
        for &(b, c) in &self.poles {
            let den = l2 - c;
            dn2 -= 2.0 * b * c * l / (den * den);
        }
        Ok((n, dn2 / (2.0 * n)))
    }
}

/// Material dispersion: one Sellmeier set per crystallographic axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Dispersion {
    sets: BTreeMap<Axis, SellmeierSet>,
    source: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct SellmeierFile {
    format_version: u32,
    #[serde(default)]
    material: String,
    #[serde(default)]
    source: String,
    #[serde(default)]
    formula: String,
    sets: Vec<SellmeierRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SellmeierRecord {
    axis: Axis,
    coefficients: BTreeMap<String, f64>,
    valid_range_um: (f64, f64),
    #[serde(default)]
    provenance: String,
}

pub const SELLMEIER_FORMAT_VERSION: u32 = 1;

impl Dispersion {
    pub fn new(sets: impl IntoIterator<Item = SellmeierSet>, source: impl Into<String>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for set in sets {
            let axis = set.axis;
            if map.insert(axis, set).is_some() {
                return Err(Error::invalid(format!("duplicate Sellmeier set for axis {axis}")));
            }
        }
        Ok(Dispersion { sets: map, source: source.into() })
    }

    /// Same constant index on both axes.
    pub fn dispersionless(n: f64, range_um: (f64, f64)) -> Result<Self> {
        Self::new(
            [SellmeierSet::constant(Axis::Y, n, range_um)?, SellmeierSet::constant(Axis::Z, n, range_um)?],
            "dispersionless stub",
        )
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: SellmeierFile = serde_json::from_str(text)?;
        if file.format_version != SELLMEIER_FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported Sellmeier format_version {} (expected {SELLMEIER_FORMAT_VERSION})",
                file.format_version
            )));
        }
        let sets = file
            .sets
            .into_iter()
            .map(|r| SellmeierSet::new(r.axis, r.coefficients, r.valid_range_um, r.provenance))
            .collect::<Result<Vec<_>>>()?;
        Self::new(sets, file.source)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn get(&self, axis: Axis) -> Result<&SellmeierSet> {
        self.sets
            .get(&axis)
            .ok_or_else(|| Error::invalid(format!("no Sellmeier set for axis {axis}")))
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn sets(&self) -> impl Iterator<Item = &SellmeierSet> {
        self.sets.values()
    }
}
