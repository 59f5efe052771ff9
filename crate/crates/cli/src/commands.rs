use serde::Serialize;
use serde_json::Value;

use qpm_core::dispersion::{degenerate_qpm_wavelength, CrystalSpec, Dispersion};
use qpm_core::fitting::{
    anticorrelated_cross_section, fit_crystal, fit_report, FitProblem, FitResult, Intensity2D, Observation,
};
use qpm_core::io::{read_columns_csv, read_matrix_csv, write_columns_csv, JsaHeader};
use qpm_core::scan::{
    default_shg_processes, simulate_sfg_scan, simulate_shg_scan, snr, ScanAxis, ScanConfig, ScanMetadata,
    ScanResult, ShgProcess,
};
use qpm_core::schmidt::{error_model, g2_from_jsa, optimize_pump_bandwidth, schmidt_decompose, ErrorModel, SchmidtResult};
use qpm_core::spectrum::{
    build_jsa, jsi, DomainStructure, GridSpec, JointSpectrum, PhaseMatchSpec, PumpConfig, TabulatedPhaseMatch,
};
use qpm_core::units::nm_from_omega;

use crate::config::{
    load_geometry, resolve_crystal, CrystalRef, Format, ObservationConfig, PhaseMatchingConfig, RunConfig,
    ShgProcessConfig, BUILTIN_DESIGN, BUILTIN_FITTED,
};
use crate::output::Outputs;
use crate::svg;
use crate::CliError;

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> qpm_core::Result<()>) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn echo(config: &RunConfig) -> Result<Value, CliError> {
    serde_json::to_value(config).map_err(|e| CliError::Output(e.to_string()))
}

/// Loads dispersion and crystal, then records the resolved geometry in
/// `config` so the echo reproduces the run without the crystal file.
fn crystal(config: &mut RunConfig, builtin: &str) -> Result<(Dispersion, CrystalSpec), CliError> {
    let dispersion = config.dispersion()?;
    let crystal = resolve_crystal(config.crystal.as_ref(), builtin, &dispersion)?;
    config.crystal = Some(CrystalRef::Inline(crystal.geometry()));
    Ok((dispersion, crystal))
}

fn phase_matching(config: &PhaseMatchingConfig, crystal: &CrystalSpec) -> Result<PhaseMatchSpec, CliError> {
    Ok(match config {
        PhaseMatchingConfig::Uniform { include_phase } => PhaseMatchSpec::uniform(crystal.length_m(), *include_phase)?,
        PhaseMatchingConfig::Domains { jitter_sigma, jitter_seed } => {
            let ideal =
                DomainStructure::periodic(crystal.poling_period_um() * 1e-6, crystal.duty_cycle(), crystal.length_m())?;
            PhaseMatchSpec::Domains(ideal.jittered(*jitter_sigma, *jitter_seed)?)
        }
        PhaseMatchingConfig::Tabulated { path } => {
            let data = read_intensity(path)?;
            PhaseMatchSpec::Tabulated(TabulatedPhaseMatch::from_intensity(
                data.rows_nm().to_vec(),
                data.cols_nm().to_vec(),
                data.values(),
            )?)
        }
    })
}

fn read_file(path: &std::path::Path) -> Result<std::fs::File, CliError> {
    std::fs::File::open(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

fn read_intensity(path: &std::path::Path) -> Result<Intensity2D, CliError> {
    let csv = read_matrix_csv(read_file(path)?)?;
    let values = csv.parse_cells(|c| c.trim().parse::<f64>().ok())?;
    Ok(Intensity2D::new(csv.rows_nm, csv.cols_nm, values)?)
}

fn default_pump(grid: &GridSpec) -> PumpConfig {
    let center_nm = nm_from_omega(grid.signal_center() + grid.idler_center());
    PumpConfig::Gaussian { center_nm, sigma_nm: 0.3 }
}

pub fn simulate_sfg(mut config: RunConfig) -> Result<Outputs, CliError> {
    let (_, crystal) = crystal(&mut config, BUILTIN_FITTED)?;
    let scan_config = config.scan.clone().unwrap_or_default();
    config.scan = Some(scan_config.clone());
    let pm = phase_matching(&config.phase_matching, &crystal)?;
    let scan = simulate_sfg_scan(&scan_config, &crystal, &pm, &config.detector, config.seed)?;
    scan_outputs("simulate-sfg", "sfg", &config, &scan)
}

#[derive(Serialize)]
struct ScanSummary<'a> {
    #[serde(flatten)]
    metadata: ScanMetadata,
    peak_expected_rate: f64,
    snr_db: Option<f64>,
    peaks: &'a [ComponentPeak],
}

#[derive(Serialize)]
struct ComponentPeak {
    label: String,
    peak_wavelength_nm: f64,
    peak_rate: f64,
}

fn scan_outputs(command: &'static str, stem: &str, config: &RunConfig, scan: &ScanResult) -> Result<Outputs, CliError> {
    let mut out = Outputs::new(command, echo(config)?);
    let peaks: Vec<ComponentPeak> = scan
        .components
        .iter()
        .map(|c| {
            let k = c.expected.iter().enumerate().fold(0, |b, (k, &v)| if v > c.expected[b] { k } else { b });
            ComponentPeak { label: c.label.clone(), peak_wavelength_nm: scan.axis1_nm[k], peak_rate: c.expected[k] }
        })
        .collect();
    if config.wants(Format::Json) {
        let summary = ScanSummary {
            metadata: scan.metadata(),
            peak_expected_rate: scan.peak_expected(),
            snr_db: snr(scan).ok(),
            peaks: &peaks,
        };
        out.json(&format!("{stem}_scan.json"), &summary)?;
    }
    let signal = scan.signal_rate();
    match &scan.axis2_nm {
        Some(axis2) => {
            if config.wants(Format::Csv) {
                out.data(&format!("{stem}_expected.csv"), csv_bytes(|w| scan.write_matrix_csv(w, false))?)?;
                if scan.counts.is_some() {
                    out.data(&format!("{stem}_counts.csv"), csv_bytes(|w| scan.write_matrix_csv(w, true))?)?;
                }
            }
            if config.wants(Format::Svg) {
                let title = format!("{} rate above dark (counts/s)", stem.to_uppercase());
                let doc = svg::heatmap(&title, &scan.axis1_nm, axis2, &signal, "axis 1 (nm)", "axis 2 (nm)");
                out.data(&format!("{stem}_scan.svg"), doc.into_bytes())?;
            }
        }
        None => {
            if config.wants(Format::Csv) {
                out.data(&format!("{stem}_scan.csv"), csv_bytes(|w| scan.write_curve_csv(w))?)?;
            }
            if config.wants(Format::Svg) {
                let mut series: Vec<(&str, &[f64])> = vec![("total above dark", &signal)];
                series.extend(scan.components.iter().map(|c| (c.label.as_str(), c.expected.as_slice())));
                let title = format!("{} sweep (counts/s)", stem.to_uppercase());
                let doc = svg::curves(&title, &scan.axis1_nm, &series, "wavelength (nm)", "rate (counts/s)");
                out.data(&format!("{stem}_scan.svg"), doc.into_bytes())?;
            }
        }
    }
    Ok(out)
}

pub fn default_shg_scan() -> ScanConfig {
    ScanConfig { axis1: ScanAxis { start_nm: 1480.0, stop_nm: 1590.0, step_nm: 0.04 }, axis2: None, ..Default::default() }
}

pub fn simulate_shg(mut config: RunConfig) -> Result<Outputs, CliError> {
    let dispersion = config.dispersion()?;
    let processes = match &config.shg_processes {
        Some(list) => list
            .iter()
            .map(|p| {
                let geometry = load_geometry(&p.crystal)?;
                Ok(ShgProcess {
                    label: p.label.clone(),
                    crystal: CrystalSpec::from_geometry(&geometry, dispersion.clone())?,
                    relative_amplitude: p.relative_amplitude,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?,
        None => default_shg_processes(&dispersion)?,
    };
    config.shg_processes = Some(
        processes
            .iter()
            .map(|p| ShgProcessConfig {
                label: p.label.clone(),
                crystal: CrystalRef::Inline(p.crystal.geometry()),
                relative_amplitude: p.relative_amplitude,
            })
            .collect(),
    );
    let scan_config = config.scan.clone().unwrap_or_else(default_shg_scan);
    if scan_config.axis2.is_some() {
        return Err(CliError::config("simulate-shg sweeps a single axis; remove scan.axis2"));
    }
    config.scan = Some(scan_config.clone());
    let scan = simulate_shg_scan(&scan_config, &processes, &config.detector, config.seed)?;
    for w in &scan.warnings {
        eprintln!("qpm: warning: {w}");
    }
    scan_outputs("simulate-shg", "shg", &config, &scan)
}

fn jsa_inputs(config: &mut RunConfig) -> Result<(CrystalSpec, PhaseMatchSpec, GridSpec), CliError> {
    let (_, crystal) = crystal(config, BUILTIN_DESIGN)?;
    let grid = config.grid.clone().unwrap_or_default();
    grid.validate()?;
    config.grid = Some(grid.clone());
    let pm = phase_matching(&config.phase_matching, &crystal)?;
    Ok((crystal, pm, grid))
}

fn build(config: &mut RunConfig) -> Result<(CrystalSpec, PhaseMatchSpec, JointSpectrum), CliError> {
    let (crystal, pm, grid) = jsa_inputs(config)?;
    let pump = config.pump.clone().unwrap_or_else(|| default_pump(&grid));
    config.pump = Some(pump.clone());
    let js = build_jsa(&pump.to_envelope()?, &crystal, &pm, &grid)?;
    Ok((crystal, pm, js))
}

#[derive(Serialize)]
struct JsaSummary {
    header: JsaHeader,
    norm_squared: f64,
    degenerate_point_nm: Option<f64>,
}

pub fn build_jsa_cmd(mut config: RunConfig) -> Result<Outputs, CliError> {
    let (crystal, _, js) = build(&mut config)?;
    let mut out = Outputs::new("build-jsa", echo(&config)?);
    let m = js.map();
    if config.wants(Format::Json) {
        let summary = JsaSummary {
            header: js.header(),
            norm_squared: js.norm_squared(),
            degenerate_point_nm: degenerate_qpm_wavelength(&crystal).ok().map(|p| p.wavelength_um * 1e3),
        };
        out.json("jsa.json", &summary)?;
    }
    let intensity = jsi(&js);
    let (rows, cols) = (m.signal_nm(), m.idler_nm());
    let values: Vec<f64> = (0..rows.len()).flat_map(|i| (0..cols.len()).map(move |j| (i, j))).map(|(i, j)| intensity[(i, j)]).collect();
    if config.wants(Format::Csv) {
        out.data("jsa.csv", csv_bytes(|w| js.write_csv(w))?)?;
        out.data(
            "jsi.csv",
            csv_bytes(|w| qpm_core::io::write_matrix_csv(w, &rows, &cols, |i, j| values[i * cols.len() + j].to_string()))?,
        )?;
    }
    if config.wants(Format::Svg) {
        let doc = svg::heatmap("joint spectral intensity |f|^2", &rows, &cols, &values, "signal (nm)", "idler (nm)");
        out.data("jsi.svg", doc.into_bytes())?;
    }
    Ok(out)
}

#[derive(Serialize)]
struct SchmidtSummary {
    #[serde(flatten)]
    result: SchmidtResult,
    g2: f64,
    /// Same decomposition with the sinc phase factor, when it was requested.
    with_phase_factor: Option<SchmidtResult>,
}

pub fn schmidt(mut config: RunConfig) -> Result<Outputs, CliError> {
    let phased = matches!(config.phase_matching, PhaseMatchingConfig::Uniform { include_phase: true });
    if phased {
        config.phase_matching = PhaseMatchingConfig::Uniform { include_phase: false };
    }
    let (crystal, _, js) = build(&mut config)?;
    let result = schmidt_decompose(&js)?;
    let g2 = g2_from_jsa(&js)?;
    let with_phase_factor = if phased {
        config.phase_matching = PhaseMatchingConfig::Uniform { include_phase: true };
        let pm = PhaseMatchSpec::uniform(crystal.length_m(), true)?;
        let grid = config.grid.clone().unwrap_or_default();
        let pump = config.pump.clone().unwrap_or_else(|| default_pump(&grid));
        Some(schmidt_decompose(&build_jsa(&pump.to_envelope()?, &crystal, &pm, &grid)?)?)
    } else {
        None
    };
    let mut out = Outputs::new("schmidt", echo(&config)?);
    let index: Vec<f64> = (1..=result.coefficients.len()).map(|k| k as f64).collect();
    if config.wants(Format::Json) {
        out.json("schmidt.json", &SchmidtSummary { result: result.clone(), g2, with_phase_factor })?;
    }
    if config.wants(Format::Csv) {
        out.data(
            "schmidt_coefficients.csv",
            csv_bytes(|w| write_columns_csv(w, &["mode", "coefficient"], &[&index, &result.coefficients]))?,
        )?;
    }
    if config.wants(Format::Svg) {
        let n = result.coefficients.len().min(40);
        let doc =
            svg::curves("Schmidt coefficients", &index[..n], &[("lambda_n", &result.coefficients[..n])], "mode n", "lambda_n");
        out.data("schmidt_coefficients.svg", doc.into_bytes())?;
    }
    Ok(out)
}

pub fn optimize_pump(mut config: RunConfig) -> Result<Outputs, CliError> {
    let (crystal, pm, grid) = jsa_inputs(&mut config)?;
    let opt = config.optimize.unwrap_or_default();
    config.optimize = Some(opt);
    let result = optimize_pump_bandwidth(&crystal, &pm, opt.shape, &opt.search, &grid)?;
    let mut out = Outputs::new("optimize-pump", echo(&config)?);
    if config.wants(Format::Json) {
        out.json("optimize_pump.json", &result)?;
    }
    if config.wants(Format::Csv) {
        out.data("optimize_pump.csv", csv_bytes(|w| result.write_curve_csv(w))?)?;
    }
    if config.wants(Format::Svg) {
        let bw: Vec<f64> = result.curve.iter().map(|p| p.bandwidth_nm.log10()).collect();
        let ind: Vec<f64> = result.curve.iter().map(|p| p.indistinguishability).collect();
        let doc = svg::curves(
            "indistinguishability vs pump bandwidth",
            &bw,
            &[("I", &ind)],
            "log10 pump bandwidth (nm)",
            "indistinguishability",
        );
        out.data("optimize_pump.svg", doc.into_bytes())?;
    }
    Ok(out)
}

pub fn error_model_cmd(mut config: RunConfig) -> Result<Outputs, CliError> {
    let c = config.error_model.unwrap_or_default();
    config.error_model = Some(c);
    let r: ErrorModel = error_model(c.pair_probability, c.separation_error)?;
    let mut out = Outputs::new("error-model", echo(&config)?);
    if config.wants(Format::Json) {
        out.json("error_model.json", &r)?;
    }
    if config.wants(Format::Csv) {
        let names = ["pair_probability", "separation_error", "coincidence_error_ratio", "sfg_error_probability"];
        let cols = [[r.pair_probability], [r.separation_error], [r.coincidence_error_ratio], [r.sfg_error_probability]];
        let cols: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
        out.data("error_model.csv", csv_bytes(|w| write_columns_csv(w, &names, &cols))?)?;
    }
    Ok(out)
}

fn load_observation(obs: &ObservationConfig) -> Result<Observation, CliError> {
    Ok(match obs {
        ObservationConfig::Curve { path, geometry } => {
            let (names, columns) = read_columns_csv(read_file(path)?)?;
            let find = |name: &str, fallback: usize| names.iter().position(|n| n == name).unwrap_or(fallback);
            let (x, y) = (find("wavelength_nm", 0), find("intensity", 1));
            if columns.len() < 2 {
                return Err(CliError::config(format!("{}: expected two columns", path.display())));
            }
            Observation::Curve { geometry: *geometry, wavelength_nm: columns[x].clone(), intensity: columns[y].clone() }
        }
        ObservationConfig::Matrix { path } => Observation::Matrix { data: read_intensity(path)? },
        ObservationConfig::CrossSection { path, pump_nm, samples } => {
            let data = read_intensity(path)?;
            let cut = anticorrelated_cross_section(&data, *pump_nm, *samples)?;
            Observation::cut(&data, cut)
        }
    })
}

pub fn fit(mut config: RunConfig) -> Result<Outputs, CliError> {
    let (dispersion, start) = crystal(&mut config, BUILTIN_DESIGN)?;
    let fit_config = config.fit.clone().ok_or_else(|| CliError::config("fit needs a [fit] section with observations"))?;
    let observations = fit_config.observations.iter().map(load_observation).collect::<Result<Vec<_>, _>>()?;
    let problem = FitProblem::new(start, fit_config.model, observations, fit_config.free.clone(), fit_config.options)?;
    let result: FitResult = fit_crystal(&problem)?;
    let fitted = CrystalSpec::from_geometry(&result.crystal, dispersion)?;
    let model = problem.model_values(&fitted)?;

    let mut out = Outputs::new("fit", echo(&config)?);
    if config.wants(Format::Json) {
        out.json("fit_result.json", &result)?;
    }
    out.data("fit_report.txt", fit_report(&result).into_bytes())?;
    for (k, obs) in problem.observations().iter().enumerate() {
        let (Some(wavelength_nm), intensity) = (obs.wavelength_nm(), obs.values()) else { continue };
        let t = result.linear_terms[k];
        let fitted_curve: Vec<f64> = model[k].iter().map(|m| t.scale * m + t.background).collect();
        if config.wants(Format::Csv) {
            out.data(
                &format!("fit_curve_{k}.csv"),
                csv_bytes(|w| {
                    write_columns_csv(w, &["wavelength_nm", "observed", "fitted"], &[wavelength_nm, intensity, &fitted_curve])
                })?,
            )?;
        }
        if config.wants(Format::Svg) {
            let doc = svg::curves(
                "fitted cross-section",
                wavelength_nm,
                &[("observed", intensity), ("fitted", &fitted_curve)],
                "wavelength (nm)",
                "normalized intensity",
            );
            out.data(&format!("fit_curve_{k}.svg"), doc.into_bytes())?;
        }
    }
    Ok(out)
}
