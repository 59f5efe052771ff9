use nalgebra::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::interp;
use crate::units::sinc;

pub type Complex64 = Complex<f64>;

/// How the nonlinearity is distributed along the crystal.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseMatchSpec {
    /// Uniform effective nonlinearity over `length_m` (grating folded into
    /// the QPM phase mismatch).
    Uniform { length_m: f64, include_phase: bool },
    /// Explicit poling domains, evaluated against the un-poled mismatch.
    Domains(DomainStructure),
    /// Measured phase-matching amplitude on a wavelength grid.
    Tabulated(TabulatedPhaseMatch),
}

impl PhaseMatchSpec {
    pub fn uniform(length_m: f64, include_phase: bool) -> Result<Self> {
        if !(length_m > 0.0 && length_m.is_finite()) {
            return Err(Error::invalid(format!("phase-matching length must be > 0, got {length_m}")));
        }
        Ok(PhaseMatchSpec::Uniform { length_m, include_phase })
    }

    /// Real-sinc phase matching over the crystal length.
    pub fn for_crystal(crystal: &crate::dispersion::CrystalSpec) -> Self {
        PhaseMatchSpec::Uniform { length_m: crystal.length_m(), include_phase: false }
    }

    pub fn describe(&self) -> String {
        match self {
            PhaseMatchSpec::Uniform { length_m, include_phase } => {
                format!("uniform sinc, L = {} mm, phase factor {}", length_m * 1e3, if *include_phase { "on" } else { "off" })
            }
            PhaseMatchSpec::Domains(d) => format!("{} poling domains over {} mm", d.domain_count(), d.length_m() * 1e3),
            PhaseMatchSpec::Tabulated(t) => format!("tabulated ({})", t.provenance),
        }
    }
}

/// `sinc(dk L / 2)`, optionally times `exp(i dk L / 2)`.
pub fn pm_amplitude_uniform(delta_k: f64, length_m: f64, include_phase: bool) -> Complex64 {
    let half = 0.5 * delta_k * length_m;
    let s = sinc(half);
    if include_phase {
        Complex64::from_polar(s, half)
    } else {
        Complex64::new(s, 0.0)
    }
}

/// Poling domain boundaries `0 = z_0 < z_1 < ... < z_N` (metres) with signs
/// alternating from `start_sign`.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainStructure {
    boundaries: Vec<f64>,
    start_sign: f64,
}

impl DomainStructure {
    pub fn new(boundaries: Vec<f64>, start_sign: i8) -> Result<Self> {
        if boundaries.len() < 2 {
            return Err(Error::invalid("domain structure needs at least two boundaries"));
        }
        if boundaries[0] != 0.0 {
            return Err(Error::invalid("first domain boundary must be at z = 0"));
        }
        if boundaries.windows(2).any(|w| !(w[1] > w[0])) || boundaries.iter().any(|z| !z.is_finite()) {
            return Err(Error::invalid("domain boundaries must be finite and strictly increasing"));
        }
        let start_sign = match start_sign {
            1 => 1.0,
            -1 => -1.0,
            s => return Err(Error::invalid(format!("start sign must be ±1, got {s}"))),
        };
        Ok(DomainStructure { boundaries, start_sign })
    }

    /// Ideal grating: each period starts with a positive domain of
    /// `duty * period`; the last period is cut at `length`.
    pub fn periodic(period_m: f64, duty: f64, length_m: f64) -> Result<Self> {
        if !(period_m > 0.0 && length_m > 0.0 && duty > 0.0 && duty < 1.0) {
            return Err(Error::invalid("periodic grating needs period > 0, length > 0, 0 < duty < 1"));
        }
        let periods = (length_m / period_m).ceil() as usize;
        let mut b = Vec::with_capacity(2 * periods + 1);
        b.push(0.0);
        for p in 0..periods {
            let start = p as f64 * period_m;
            for z in [start + duty * period_m, start + period_m] {
                let z = z.min(length_m);
                if z > *b.last().unwrap() {
                    b.push(z);
                }
            }
        }
        Self::new(b, 1)
    }

    /// Interior boundaries displaced by independent normal errors with
    /// standard deviation `sigma_fraction` times the mean domain width.
    pub fn jittered(&self, sigma_fraction: f64, seed: u64) -> Result<Self> {
        if !(sigma_fraction >= 0.0) {
            return Err(Error::invalid("jitter must be >= 0"));
        }
        let sigma = sigma_fraction * self.length_m() / self.domain_count() as f64;
        if sigma == 0.0 {
            return Ok(self.clone());
        }
        let normal = Normal::new(0.0, sigma).map_err(|e| Error::invalid(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.boundaries.len();
        let mut b = self.boundaries.clone();
        for z in b.iter_mut().take(n - 1).skip(1) {
            *z += normal.sample(&mut rng);
        }
        let sign = if self.start_sign > 0.0 { 1 } else { -1 };
        Self::new(b, sign)
            .map_err(|_| Error::invalid(format!("jitter {sigma_fraction} reorders domain boundaries")))
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn domain_count(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn length_m(&self) -> f64 {
        *self.boundaries.last().unwrap()
    }
}

/// `(1 / L) sum_j s_j int_{z_j}^{z_{j+1}} exp(i dk z) dz`.
///
/// Each domain integral is written as `w exp(i dk (z + w/2)) sinc(dk w / 2)`,
/// which is exact and reduces to the signed-length sum at `dk = 0`.
pub fn pm_amplitude_domains(delta_k: f64, domains: &DomainStructure) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut sign = domains.start_sign;
    for w in domains.boundaries.windows(2) {
        let width = w[1] - w[0];
        let mid = 0.5 * (w[0] + w[1]);
        acc += Complex64::from_polar(sign * width * sinc(0.5 * delta_k * width), delta_k * mid);
        sign = -sign;
    }
    acc / domains.length_m()
}

/// Phase-matching amplitude tabulated over (signal, idler) wavelengths.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPhaseMatch {
    signal_nm: Vec<f64>,
    idler_nm: Vec<f64>,
    amplitude: Vec<f64>,
    provenance: String,
}

impl TabulatedPhaseMatch {
    /// Builds from measured intensities `|phi|^2` (row-major, rows = signal).
    /// Intensities are peak-normalized and the amplitude is taken as their
    /// square root with zero phase.
    pub fn from_intensity(signal_nm: Vec<f64>, idler_nm: Vec<f64>, intensity: &[f64]) -> Result<Self> {
        if signal_nm.len() < 2 || idler_nm.len() < 2 {
            return Err(Error::invalid("tabulated phase matching needs at least a 2x2 grid"));
        }
        if intensity.len() != signal_nm.len() * idler_nm.len() {
            return Err(Error::invalid("intensity table does not match its axes"));
        }
        for axis in [&signal_nm, &idler_nm] {
            if axis.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::invalid("tabulated axes must be strictly increasing"));
            }
        }
        if intensity.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::invalid("intensities must be finite and non-negative"));
        }
        let peak = intensity.iter().copied().fold(0.0, f64::max);
        if peak == 0.0 {
            return Err(Error::ZeroMatrix);
        }
        Ok(TabulatedPhaseMatch {
            signal_nm,
            idler_nm,
            amplitude: intensity.iter().map(|v| (v / peak).sqrt()).collect(),
            provenance: "amplitude = sqrt(peak-normalized intensity), zero phase".to_string(),
        })
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn amplitude_at(&self, signal_nm: f64, idler_nm: f64) -> f64 {
        interp::bilinear(&self.signal_nm, &self.idler_nm, &self.amplitude, signal_nm, idler_nm).unwrap_or(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const L: f64 = 0.03;

    #[test]
    fn uniform_special_values() {
        assert_eq!(pm_amplitude_uniform(0.0, L, false), Complex64::new(1.0, 0.0));
        assert!(pm_amplitude_uniform(2.0 * PI / L, L, false).norm() < 1e-12);
        assert!(pm_amplitude_uniform(-2.0 * PI / L, L, true).norm() < 1e-12);
        let v = pm_amplitude_uniform(3.0 * PI / L, L, true).norm();
        assert!((v - 2.0 / (3.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn uniform_bounded_by_one() {
        for k in -2000..2000 {
            let dk = k as f64 * 1.37;
            assert!(pm_amplitude_uniform(dk, L, true).norm() <= 1.0);
        }
    }

    #[test]
    fn single_domain_equals_phased_sinc() {
        let d = DomainStructure::new(vec![0.0, L], 1).unwrap();
        for dk in [0.0, 1e-3, 17.0, 2.0 * PI / L, 523.7, -911.0] {
            let a = pm_amplitude_domains(dk, &d);
            let b = pm_amplitude_uniform(dk, L, true);
            assert!((a - b).norm() < 1e-12, "dk = {dk}");
        }
    }

    #[test]
    fn zero_mismatch_is_signed_length_fraction() {
        let d = DomainStructure::new(vec![0.0, 1.0, 1.5, 4.0], -1).unwrap();
        let v = pm_amplitude_domains(0.0, &d);
        assert!((v.re - (-1.0 + 0.5 - 2.5) / 4.0).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn periodic_grating_structure() {
        let d = DomainStructure::periodic(46.1e-6, 0.5, L).unwrap();
        assert!((d.length_m() - L).abs() < 1e-15);
        assert!(d.domain_count() >= 2 * (L / 46.1e-6) as usize);
    }

    #[test]
    fn invalid_domains_rejected() {
        assert!(DomainStructure::new(vec![0.0], 1).is_err());
        assert!(DomainStructure::new(vec![0.1, 1.0], 1).is_err());
        assert!(DomainStructure::new(vec![0.0, 1.0, 1.0], 1).is_err());
        assert!(DomainStructure::new(vec![0.0, 1.0], 0).is_err());
    }

    #[test]
    fn tabulated_takes_square_root_of_normalized_intensity() {
        let t = TabulatedPhaseMatch::from_intensity(vec![1.0, 2.0], vec![1.0, 2.0], &[4.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(t.amplitude_at(1.0, 1.0), 1.0);
        assert_eq!(t.amplitude_at(1.0, 2.0), 0.5);
        assert_eq!(t.amplitude_at(3.0, 2.0), 0.0);
    }
}
