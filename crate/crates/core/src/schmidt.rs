//! Schmidt decomposition of joint spectra, purity-based metrics, pump
//! bandwidth optimization and the separation-error model.

use std::io::Write;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dispersion::CrystalSpec;
use crate::error::{Error, Result};
use crate::io::write_columns_csv;
use crate::par::{try_map_indices, Execution};
use crate::spectrum::{phase_matching_map, GridSpec, JointSpectrum, PhaseMatchSpec, PumpShape, SpectralMap};
use crate::units::{bandwidth_nm_to_omega, nm_from_omega};

/// Coefficients below this are dropped from the stored list.
pub const TRUNCATION: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtResult {
    /// Descending, normalized over all modes so that `sum lambda^2 = 1`.
    pub coefficients: Vec<f64>,
    pub purity: f64,
    pub schmidt_number: f64,
    pub indistinguishability: f64,
    pub retained_modes: usize,
    pub total_modes: usize,
}

/// Singular values of the amplitude matrix, rescaled to unit norm.
///
/// The uniform frequency grid makes the plain matrix SVD the right
/// quadrature, so no cell weights are applied.
pub fn schmidt_decompose(js: &JointSpectrum) -> Result<SchmidtResult> {
    let a = js.amplitudes();
    let mut sv: Vec<f64> = if js.is_real() {
        DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)].re).singular_values().iter().copied().collect()
    } else {
        a.clone().singular_values().iter().copied().collect()
    };
    let norm2: f64 = sv.iter().map(|s| s * s).sum();
    if !(norm2 > 0.0) {
        return Err(Error::ZeroMatrix);
    }
    sv.sort_by(|x, y| y.total_cmp(x));
    let norm = norm2.sqrt();
    let lambda: Vec<f64> = sv.iter().map(|s| s / norm).collect();
    let purity: f64 = lambda.iter().map(|l| l.powi(4)).sum();
    let coefficients: Vec<f64> = lambda.iter().copied().take_while(|&l| l >= TRUNCATION).collect();
    Ok(SchmidtResult {
        retained_modes: coefficients.len(),
        total_modes: lambda.len(),
        coefficients,
        purity,
        schmidt_number: 1.0 / purity,
        indistinguishability: purity,
    })
}

/// Spectral indistinguishability, identified with the purity.
pub fn indistinguishability(js: &JointSpectrum) -> Result<f64> {
    Ok(schmidt_decompose(js)?.purity)
}

/// Purity as `Tr((A^H A)^2) / (Tr A^H A)^2`, equal to `sum lambda^4`
/// without a decomposition. Used for the many samples of a bandwidth sweep.
pub fn purity_from_gram(js: &JointSpectrum) -> Result<f64> {
    let a = js.amplitudes();
    let (t1, t2) = if js.is_real() {
        let r = DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)].re);
        let h = r.tr_mul(&r);
        (h.trace(), h.component_mul(&h).sum())
    } else {
        let h = a.ad_mul(a);
        (h.trace().re, h.iter().map(|c| c.norm_sqr()).sum())
    };
    if !(t1 > 0.0) {
        return Err(Error::ZeroMatrix);
    }
    Ok(t2 / (t1 * t1))
}

/// Unheralded `g2 = 1 + P` of one arm.
pub fn g2_from_jsa(js: &JointSpectrum) -> Result<f64> {
    Ok(1.0 + indistinguishability(js)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BandwidthSearch {
    pub min_nm: f64,
    pub max_nm: f64,
    /// Log-spaced coarse samples.
    pub coarse_points: usize,
    /// Final bracket width of the golden-section refinement.
    pub tolerance_nm: f64,
}

impl Default for BandwidthSearch {
    fn default() -> Self {
        BandwidthSearch { min_nm: 0.01, max_nm: 10.0, coarse_points: 25, tolerance_nm: 1e-3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandwidthPoint {
    pub bandwidth_nm: f64,
    pub indistinguishability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PumpOptimization {
    pub shape: PumpShape,
    pub pump_center_nm: f64,
    /// Coarse and refinement samples, sorted by bandwidth.
    pub curve: Vec<BandwidthPoint>,
    pub best: BandwidthPoint,
}

impl PumpOptimization {
    pub fn write_curve_csv<W: Write>(&self, w: W) -> Result<()> {
        let bw: Vec<f64> = self.curve.iter().map(|p| p.bandwidth_nm).collect();
        let ind: Vec<f64> = self.curve.iter().map(|p| p.indistinguishability).collect();
        write_columns_csv(w, &["pump_bandwidth_nm", "indistinguishability"], &[&bw, &ind])
    }
}

pub fn optimize_pump_bandwidth(
    crystal: &CrystalSpec,
    pm: &PhaseMatchSpec,
    shape: PumpShape,
    search: &BandwidthSearch,
    grid: &GridSpec,
) -> Result<PumpOptimization> {
    optimize_pump_bandwidth_with(crystal, pm, shape, search, grid, Execution::default())
}

/// Indistinguishability against pump bandwidth (sigma for a Gaussian, full
/// width for a rectangle, in nm at the pump wavelength), centered at the sum
/// of the grid center frequencies. Coarse log-spaced sweep, then
/// golden-section refinement inside the bracket of the best coarse point.
/// Sweep samples use [`purity_from_gram`]; the reported optimum is
/// recomputed by full decomposition.
pub fn optimize_pump_bandwidth_with(
    crystal: &CrystalSpec,
    pm: &PhaseMatchSpec,
    shape: PumpShape,
    search: &BandwidthSearch,
    grid: &GridSpec,
    exec: Execution,
) -> Result<PumpOptimization> {
    if !(search.min_nm > 0.0 && search.max_nm >= search.min_nm && search.max_nm.is_finite()) {
        return Err(Error::invalid(format!("bad bandwidth range [{}, {}] nm", search.min_nm, search.max_nm)));
    }
    let single = search.max_nm == search.min_nm;
    if !single && search.coarse_points < 8 {
        return Err(Error::invalid("bandwidth sweep needs at least 8 coarse points"));
    }
    if !(search.tolerance_nm > 0.0) {
        return Err(Error::invalid("bandwidth tolerance must be > 0"));
    }
    let map = phase_matching_map(crystal, pm, grid, exec)?;
    let center = map.signal_center + map.idler_center;
    let pump_center_nm = nm_from_omega(center);
    // Inner parallelism only when the outer loop is serial.
    let eval = |bw_nm: f64, inner: Execution| -> Result<BandwidthPoint> {
        let ind = indistinguishability_at(&map, shape, center, bandwidth_nm_to_omega(bw_nm, pump_center_nm), inner)?;
        Ok(BandwidthPoint { bandwidth_nm: bw_nm, indistinguishability: ind })
    };

    let coarse: Vec<f64> = if single {
        vec![search.min_nm]
    } else {
        let (l0, l1) = (search.min_nm.ln(), search.max_nm.ln());
        let n = search.coarse_points;
        (0..n)
            .map(|k| if k == n - 1 { search.max_nm } else { (l0 + (l1 - l0) * k as f64 / (n - 1) as f64).exp() })
            .collect()
    };
    let mut curve = try_map_indices(coarse.len(), exec, |k| eval(coarse[k], Execution::Serial))?;
    let k_best = argmax(&curve);
    let mut best = curve[k_best];

    if !single {
        let mut a = coarse[k_best.saturating_sub(1)];
        let mut b = coarse[(k_best + 1).min(coarse.len() - 1)];
        let r = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = b - r * (b - a);
        let mut x2 = a + r * (b - a);
        let mut f1 = eval(x1, exec)?;
        let mut f2 = eval(x2, exec)?;
        curve.extend([f1, f2]);
        while b - a > search.tolerance_nm {
            if f1.indistinguishability >= f2.indistinguishability {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - r * (b - a);
                f1 = eval(x1, exec)?;
                curve.push(f1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + r * (b - a);
                f2 = eval(x2, exec)?;
                curve.push(f2);
            }
        }
        for p in [f1, f2] {
            if p.indistinguishability > best.indistinguishability {
                best = p;
            }
        }
    }
    let pump = shape.envelope(center, bandwidth_nm_to_omega(best.bandwidth_nm, pump_center_nm))?;
    best.indistinguishability = indistinguishability(&JointSpectrum::from_phase_matching(&pump, &map, exec))?;
    curve.sort_by(|p, q| p.bandwidth_nm.total_cmp(&q.bandwidth_nm));
    curve.dedup_by(|p, q| p.bandwidth_nm == q.bandwidth_nm);
    Ok(PumpOptimization { shape, pump_center_nm, curve, best })
}

fn argmax(points: &[BandwidthPoint]) -> usize {
    points
        .iter()
        .enumerate()
        .fold(0, |best, (k, p)| if p.indistinguishability > points[best].indistinguishability { k } else { best })
}

fn indistinguishability_at(
    map: &SpectralMap,
    shape: PumpShape,
    center: f64,
    bandwidth: f64,
    exec: Execution,
) -> Result<f64> {
    let pump = shape.envelope(center, bandwidth)?;
    purity_from_gram(&JointSpectrum::from_phase_matching(&pump, map, exec))
}

fn check_probability(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be in [0, 1], got {v}")))
    }
}

/// Unwanted signal-idler coincidences relative to genuine signal-signal
/// ones, `p R_e / p^2`. Values near 1 or above make a `g2` estimate
/// unreliable.
pub fn coincidence_error_ratio(pair_probability: f64, separation_error: f64) -> Result<f64> {
    check_probability("separation error", separation_error)?;
    if !(pair_probability > 0.0 && pair_probability <= 1.0) {
        return Err(Error::invalid(format!("pair probability must be in (0, 1], got {pair_probability}")));
    }
    Ok(separation_error / pair_probability)
}

/// Probability that both photons of an SFG input pair are misrouted, `R_e^2`.
pub fn sfg_error_probability(separation_error: f64) -> Result<f64> {
    check_probability("separation error", separation_error)?;
    Ok(separation_error * separation_error)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorModel {
    pub pair_probability: f64,
    pub separation_error: f64,
    pub coincidence_error_ratio: f64,
    pub sfg_error_probability: f64,
}

pub fn error_model(pair_probability: f64, separation_error: f64) -> Result<ErrorModel> {
    Ok(ErrorModel {
        pair_probability,
        separation_error,
        coincidence_error_ratio: coincidence_error_ratio(pair_probability, separation_error)?,
        sfg_error_probability: sfg_error_probability(separation_error)?,
    })
}
