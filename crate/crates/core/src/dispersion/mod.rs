//! Refractive index, wavenumber, group velocity and phase mismatch for a
//! quasi-phase-matched crystal.
//!
//! All functions are pure; frequencies are angular frequencies in rad/s.

mod crystal;
mod roots;
mod sellmeier;

use std::f64::consts::PI;

pub use crystal::{CrystalGeometry, CrystalSpec, PolarizationConfig, PolarizationSpec};
pub use roots::bracketed_root;
pub use sellmeier::{Axis, Dispersion, SellmeierSet, SELLMEIER_FORMAT_VERSION};

use crate::error::{Error, Result};
use crate::units::{omega_from_um, um_from_omega, SPEED_OF_LIGHT};

pub fn refractive_index(wavelength_um: f64, axis: Axis, dispersion: &Dispersion) -> Result<f64> {
    dispersion.get(axis)?.index(wavelength_um)
}

/// `k = n(omega) omega / c`, in rad/m.
pub fn wavenumber(omega: f64, axis: Axis, dispersion: &Dispersion) -> Result<f64> {
    let n = refractive_index(um_from_omega(omega), axis, dispersion)?;
    Ok(n * omega / SPEED_OF_LIGHT)
}

/// `dk/domega = (n - lambda dn/dlambda) / c`, in s/m.
pub fn inverse_group_velocity(omega: f64, axis: Axis, dispersion: &Dispersion) -> Result<f64> {
    let lambda = um_from_omega(omega);
    let (n, dn) = dispersion.get(axis)?.index_with_derivative(lambda)?;
    Ok((n - lambda * dn) / SPEED_OF_LIGHT)
}

/// Group-velocity mismatches `k'_p - k'_s` and `k'_p - k'_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupMismatch {
    pub signal: f64,
    pub idler: f64,
}

impl GroupMismatch {
    /// `|D_s + D_i| / |D_s|`; zero for perfect symmetric group-velocity matching.
    pub fn asymmetry(&self) -> f64 {
        (self.signal + self.idler).abs() / self.signal.abs()
    }
}

pub fn group_mismatch(crystal: &CrystalSpec, signal_center: f64, idler_center: f64) -> Result<GroupMismatch> {
    let pol = crystal.polarization();
    let d = crystal.dispersion();
    let kp = inverse_group_velocity(signal_center + idler_center, pol.pump, d)?;
    let ks = inverse_group_velocity(signal_center, pol.signal, d)?;
    let ki = inverse_group_velocity(idler_center, pol.idler, d)?;
    Ok(GroupMismatch { signal: kp - ks, idler: kp - ki })
}

/// Un-poled mismatch `k_p(w1 + w2) - k_s(w1) - k_i(w2)`.
pub fn bulk_mismatch(omega_1: f64, omega_2: f64, crystal: &CrystalSpec) -> Result<f64> {
    let pol = crystal.polarization();
    let d = crystal.dispersion();
    let kp = wavenumber(omega_1 + omega_2, pol.pump, d)?;
    let ks = wavenumber(omega_1, pol.signal, d)?;
    let ki = wavenumber(omega_2, pol.idler, d)?;
    Ok(kp - ks - ki)
}

/// Mismatch against a single signed Fourier component of the poling:
/// `bulk - 2 pi order / Lambda`.
pub fn phase_mismatch_for_order(omega_1: f64, omega_2: f64, crystal: &CrystalSpec, order: i64) -> Result<f64> {
    Ok(bulk_mismatch(omega_1, omega_2, crystal)? - grating_wavenumber(crystal, order))
}

fn grating_wavenumber(crystal: &CrystalSpec, order: i64) -> f64 {
    2.0 * PI * order as f64 / (crystal.poling_period_um() * 1e-6)
}

/// QPM phase mismatch in rad/m.
///
/// A ±1 poling carries the `+m` and `-m` grating components with equal
/// weight; the one compensating the bulk mismatch is the one with the same
/// sign, so the grating term is `sign(bulk) 2 pi m / Lambda`.
pub fn phase_mismatch(omega_1: f64, omega_2: f64, crystal: &CrystalSpec) -> Result<f64> {
    let bulk = bulk_mismatch(omega_1, omega_2, crystal)?;
    let order = i64::from(crystal.qpm_order());
    let signed = if bulk < 0.0 { -order } else { order };
    Ok(bulk - grating_wavenumber(crystal, signed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegenerateKind {
    /// `dk(w, w)` changes sign.
    Crossing,
    /// `dk(w, w)` reaches a stationary point inside the central sinc lobe
    /// without crossing zero (group-velocity-matched tangency).
    Tangent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegeneratePoint {
    pub wavelength_um: f64,
    pub kind: DegenerateKind,
    /// `dk(w*, w*)` in rad/m.
    pub mismatch: f64,
}

const DEGENERATE_SAMPLES: usize = 2001;
const ROOT_TOLERANCE_UM: f64 = 1e-6;
const BRANCH_SAMPLES: usize = 64;

/// Wavelength range over which signal, idler and (doubled-frequency) pump all
/// stay inside their Sellmeier ranges.
pub fn degenerate_range_um(crystal: &CrystalSpec) -> Result<(f64, f64)> {
    let pol = crystal.polarization();
    let d = crystal.dispersion();
    let (sl, sh) = d.get(pol.signal)?.range_um();
    let (il, ih) = d.get(pol.idler)?.range_um();
    let (pl, ph) = d.get(pol.pump)?.range_um();
    let lo = sl.max(il).max(2.0 * pl);
    let hi = sh.min(ih).min(2.0 * ph);
    if lo >= hi {
        return Err(Error::invalid("signal, idler and pump ranges admit no degenerate wavelength"));
    }
    Ok((lo, hi))
}

/// Degenerate signal/idler wavelength of the QPM process, in um.
///
/// Sign changes of `dk(w, w)` are located on a dense sweep and refined by
/// bisection/secant to 1e-6 um. Preferred is the crossing nearest a
/// stationary point of `dk(w, w)` (a group-velocity-matched wavelength) on the
/// same grating-sign branch. Without one, a stationary point is accepted if it
/// lies inside the central sinc lobe, `|dk| L / 2 < pi`; failing that, the
/// first crossing found.
pub fn degenerate_qpm_wavelength(crystal: &CrystalSpec) -> Result<DegeneratePoint> {
    let (lo, hi) = degenerate_range_um(crystal)?;
    let mismatch = |lambda: f64| {
        let w = omega_from_um(lambda);
        phase_mismatch(w, w, crystal)
    };
    let slope = |lambda: f64| {
        let w = omega_from_um(lambda);
        group_mismatch(crystal, w, w).map(|g| g.signal + g.idler)
    };

    let crossings = sweep_roots(&mismatch, lo, hi)?;
    let stationary = sweep_roots(&slope, lo, hi)?;
    let bulk_sign = |lambda: f64| {
        let w = omega_from_um(lambda);
        bulk_mismatch(w, w, crystal).map(f64::signum)
    };
    // Same grating-sign branch: the bulk mismatch keeps its sign in between.
    let same_branch = |a: f64, b: f64| -> Result<bool> {
        let s0 = bulk_sign(a)?;
        for k in 1..=BRANCH_SAMPLES {
            if bulk_sign(a + (b - a) * k as f64 / BRANCH_SAMPLES as f64)? != s0 {
                return Ok(false);
            }
        }
        Ok(true)
    };

    let mut best_crossing: Option<(f64, f64)> = None;
    for &c in &crossings {
        for &st in &stationary {
            let dist = (c - st).abs();
            if best_crossing.is_none_or(|(_, d)| dist < d) && same_branch(c, st)? {
                best_crossing = Some((c, dist));
            }
        }
    }
    if let Some((c, _)) = best_crossing {
        return Ok(DegeneratePoint { wavelength_um: c, kind: DegenerateKind::Crossing, mismatch: mismatch(c)? });
    }

    let lobe = PI / (crystal.length_m() / 2.0);
    let mut best: Option<(f64, f64)> = None;
    for &st in &stationary {
        let dk = mismatch(st)?;
        if dk.abs() < lobe && best.is_none_or(|(_, b)| dk.abs() < b.abs()) {
            best = Some((st, dk));
        }
    }
    if let Some((wavelength_um, mismatch)) = best {
        return Ok(DegeneratePoint { wavelength_um, kind: DegenerateKind::Tangent, mismatch });
    }
    match crossings.first() {
        Some(&c) => Ok(DegeneratePoint { wavelength_um: c, kind: DegenerateKind::Crossing, mismatch: mismatch(c)? }),
        None => Err(Error::NoDegeneratePoint { min_um: lo, max_um: hi }),
    }
}

fn sweep_roots(f: &impl Fn(f64) -> Result<f64>, lo: f64, hi: f64) -> Result<Vec<f64>> {
    let mut roots = Vec::new();
    let step = (hi - lo) / (DEGENERATE_SAMPLES - 1) as f64;
    let mut a = lo;
    let mut fa = f(a)?;
    for i in 1..DEGENERATE_SAMPLES {
        let b = if i == DEGENERATE_SAMPLES - 1 { hi } else { lo + step * i as f64 };
        let fb = f(b)?;
        if fa == 0.0 {
            roots.push(a);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            // A sign change across a jump (the grating term flips where the
            // bulk mismatch changes sign) leaves a residual of the jump size.
            let r = bracketed_root(f, a, b, ROOT_TOLERANCE_UM)?;
            if f(r)?.abs() < 0.5 * fa.abs().max(fb.abs()) {
                roots.push(r);
            }
        }
        a = b;
        fa = fb;
    }
    if fa == 0.0 {
        roots.push(a);
    }
    Ok(roots)
}
