//! Regenerates `data/fixtures/sfg_cross_section_790nm.csv`: a Poisson-sampled
//! 251 x 251 SFG scan of the 46.125 um / 29.0 mm crystal (seed 7, dark
//! 100 counts/s, 1e6 counts/s peak), cut along the 790 nm pump line.
//!
//! Run from the workspace root: `cargo run -p qpm-core --example make_fixture`.

use std::fs::File;

use qpm_core::dispersion::{CrystalGeometry, CrystalSpec, Dispersion};
use qpm_core::fitting::{anticorrelated_cross_section, Intensity2D};
use qpm_core::io::write_columns_csv;
use qpm_core::scan::{simulate_sfg_scan, DetectorModel, ScanConfig};
use qpm_core::spectrum::PhaseMatchSpec;

fn main() -> qpm_core::Result<()> {
    let dispersion = Dispersion::load("data/sellmeier/ktp.json")?;
    let geometry = CrystalGeometry::load("data/crystals/ppktp_type2_fitted.json")?;
    let crystal = CrystalSpec::from_geometry(&geometry, dispersion)?;
    let pm = PhaseMatchSpec::for_crystal(&crystal);
    let detector = DetectorModel { dark_count_rate: 100.0, ..Default::default() };
    let scan = simulate_sfg_scan(&ScanConfig::default(), &crystal, &pm, &detector, Some(7))?;
    let cut = anticorrelated_cross_section(&Intensity2D::from_scan(&scan)?, 790.0, 251)?;
    let path = "data/fixtures/sfg_cross_section_790nm.csv";
    write_columns_csv(File::create(path)?, &["wavelength_nm", "intensity"], &[&cut.wavelength_nm, &cut.intensity])?;
    println!("wrote {path} ({} points)", cut.wavelength_nm.len());
    Ok(())
}
