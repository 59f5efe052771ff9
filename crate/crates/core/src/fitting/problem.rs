use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::cross_section::{energy_partner_nm, CrossSection, Intensity2D};
use super::simplex::{minimize, SimplexOptions};
use crate::dispersion::{bulk_mismatch, phase_mismatch, CrystalGeometry, CrystalSpec};
use crate::error::{Error, Result};
use crate::interp;
use crate::par::{try_map_indices, Execution};
use crate::spectrum::{pm_amplitude_domains, pm_amplitude_uniform, DomainStructure};
use crate::units::omega_from_nm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitParameter {
    PolingPeriodUm,
    LengthMm,
    DutyCycle,
}

impl FitParameter {
    pub fn name(self) -> &'static str {
        match self {
            FitParameter::PolingPeriodUm => "poling_period_um",
            FitParameter::LengthMm => "length_mm",
            FitParameter::DutyCycle => "duty_cycle",
        }
    }

    fn apply(self, crystal: &CrystalSpec, value: f64) -> Result<CrystalSpec> {
        match self {
            FitParameter::PolingPeriodUm => crystal.with_poling_period(value),
            FitParameter::LengthMm => crystal.with_length(value),
            FitParameter::DutyCycle => crystal.with_duty_cycle(value),
        }
    }
}

fn default_grid_points() -> usize {
    5
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeParameter {
    pub parameter: FitParameter,
    pub lower: f64,
    pub upper: f64,
    /// Coarse multi-start nodes across `[lower, upper]`.
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
}

impl FreeParameter {
    pub fn new(parameter: FitParameter, lower: f64, upper: f64) -> Self {
        FreeParameter { parameter, lower, upper, grid_points: default_grid_points() }
    }

    fn physical(&self, u: f64) -> f64 {
        self.lower + u * (self.upper - self.lower)
    }
}

/// Path of a 1D observation through the (signal, idler) plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveGeometry {
    /// Energy-conserving line at fixed pump wavelength; the abscissa is the
    /// signal wavelength.
    AntiDiagonal { pump_nm: f64 },
    /// Both inputs at the abscissa wavelength (SHG).
    Diagonal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Observation {
    Curve { geometry: CurveGeometry, wavelength_nm: Vec<f64>, intensity: Vec<f64> },
    Matrix { data: Intensity2D },
    /// Cut through a gridded map. The model is evaluated on the map's grid
    /// nodes and interpolated along the same path, so data and model carry
    /// the same interpolation error.
    Cut { rows_nm: Vec<f64>, cols_nm: Vec<f64>, cross_section: CrossSection },
}

impl Observation {
    /// Cut observation for `cross_section` taken from `data`.
    pub fn cut(data: &Intensity2D, cross_section: CrossSection) -> Self {
        Observation::Cut { rows_nm: data.rows_nm().to_vec(), cols_nm: data.cols_nm().to_vec(), cross_section }
    }

    fn len(&self) -> usize {
        self.values().len()
    }

    pub fn values(&self) -> &[f64] {
        match self {
            Observation::Curve { intensity, .. } => intensity,
            Observation::Matrix { data } => data.values(),
            Observation::Cut { cross_section, .. } => &cross_section.intensity,
        }
    }

    /// Abscissa of 1D observations (signal wavelength for cuts).
    pub fn wavelength_nm(&self) -> Option<&[f64]> {
        match self {
            Observation::Curve { wavelength_nm, .. } => Some(wavelength_nm),
            Observation::Cut { cross_section, .. } => Some(&cross_section.wavelength_nm),
            Observation::Matrix { .. } => None,
        }
    }

    fn peak_normalized(&self) -> Result<Self> {
        let peak = self.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !(peak > 0.0) {
            return Err(Error::invalid("observation has no positive values"));
        }
        Ok(match self {
            Observation::Curve { geometry, wavelength_nm, intensity } => Observation::Curve {
                geometry: *geometry,
                wavelength_nm: wavelength_nm.clone(),
                intensity: intensity.iter().map(|v| v / peak).collect(),
            },
            Observation::Matrix { data } => Observation::Matrix { data: data.peak_normalized()? },
            Observation::Cut { rows_nm, cols_nm, cross_section } => Observation::Cut {
                rows_nm: rows_nm.clone(),
                cols_nm: cols_nm.clone(),
                cross_section: CrossSection {
                    intensity: cross_section.intensity.iter().map(|v| v / peak).collect(),
                    ..cross_section.clone()
                },
            },
        })
    }

    /// (signal, idler) angular frequencies where the model is evaluated.
    fn sampling(&self) -> Result<Sampling> {
        let nodes = match self {
            Observation::Cut { rows_nm, cols_nm, cross_section } => return cut_sampling(rows_nm, cols_nm, cross_section),
            Observation::Curve { geometry: CurveGeometry::Diagonal, wavelength_nm, .. } => {
                wavelength_nm.iter().map(|&l| (omega_from_nm(l), omega_from_nm(l))).collect()
            }
            Observation::Curve { geometry: CurveGeometry::AntiDiagonal { pump_nm }, wavelength_nm, .. } => wavelength_nm
                .iter()
                .map(|&l| {
                    energy_partner_nm(*pump_nm, l)
                        .map(|p| (omega_from_nm(l), omega_from_nm(p)))
                        .ok_or_else(|| Error::invalid(format!("no energy partner for {l} nm at pump {pump_nm} nm")))
                })
                .collect::<Result<_>>()?,
            Observation::Matrix { data } => data
                .rows_nm()
                .iter()
                .flat_map(|&r| data.cols_nm().iter().map(move |&c| (omega_from_nm(r), omega_from_nm(c))))
                .collect(),
        };
        Ok(Sampling { nodes, stencil: None })
    }
}

/// Grid nodes touched by a cut and the bilinear weights that rebuild it.
fn cut_sampling(rows_nm: &[f64], cols_nm: &[f64], cs: &CrossSection) -> Result<Sampling> {
    if cs.partner_nm.len() != cs.wavelength_nm.len() || cs.intensity.len() != cs.wavelength_nm.len() {
        return Err(Error::invalid("cut columns differ in length"));
    }
    let mut index = BTreeMap::new();
    let mut stencil = Vec::with_capacity(cs.wavelength_nm.len());
    for (&r, &c) in cs.wavelength_nm.iter().zip(&cs.partner_nm) {
        let mut s = interp::bilinear_stencil(rows_nm, cols_nm, r, c)
            .ok_or_else(|| Error::invalid(format!("cut point ({r}, {c}) nm lies outside its map")))?;
        for (k, _) in s.iter_mut() {
            let next = index.len();
            *k = *index.entry(*k).or_insert(next);
        }
        stencil.push(s);
    }
    let nc = cols_nm.len();
    let mut nodes = vec![(0.0, 0.0); index.len()];
    for (&flat, &node) in &index {
        nodes[node] = (omega_from_nm(rows_nm[flat / nc]), omega_from_nm(cols_nm[flat % nc]));
    }
    Ok(Sampling { nodes, stencil: Some(stencil) })
}

/// Points where the model is evaluated, and how they combine into the
/// observed values.
#[derive(Debug, Clone)]
struct Sampling {
    nodes: Vec<(f64, f64)>,
    /// Weights over `nodes` per observed value; `None` when the nodes are the
    /// observed points.
    stencil: Option<Vec<[(usize, f64); 4]>>,
}

/// Forward model for the phase-matching intensity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// `|sinc(dk L / 2)|^2` with the QPM order of the crystal.
    #[default]
    UniformSinc,
    /// Periodic domain structure built from period, duty cycle and length.
    Domains,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitOptions {
    /// Cap per descent.
    pub max_evaluations: usize,
    pub tolerance: f64,
    /// Number of best coarse nodes to descend from (all nodes if larger).
    pub descents: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { max_evaluations: 100_000, tolerance: 1e-10, descents: 8 }
    }
}

/// Least-squares fit of crystal parameters to phase-matching intensities.
///
/// Observations are scaled to unit peak; each one gets its own amplitude
/// scale and constant background, solved in closed form.
#[derive(Debug, Clone)]
pub struct FitProblem {
    crystal: CrystalSpec,
    model: ModelKind,
    observations: Vec<Observation>,
    free: Vec<FreeParameter>,
    options: FitOptions,
    sampling: Vec<Sampling>,
}

impl FitProblem {
    pub fn new(
        crystal: CrystalSpec,
        model: ModelKind,
        observations: Vec<Observation>,
        free: Vec<FreeParameter>,
        options: FitOptions,
    ) -> Result<Self> {
        if free.is_empty() {
            return Err(Error::invalid("fit needs at least one free parameter"));
        }
        let mut seen = Vec::new();
        for p in &free {
            if seen.contains(&p.parameter) {
                return Err(Error::invalid(format!("parameter {} listed twice", p.parameter.name())));
            }
            seen.push(p.parameter);
            if !(p.lower.is_finite() && p.upper.is_finite() && p.lower < p.upper) {
                return Err(Error::invalid(format!("bad bounds for {}: [{}, {}]", p.parameter.name(), p.lower, p.upper)));
            }
            if p.grid_points == 0 {
                return Err(Error::invalid("grid_points must be >= 1"));
            }
            // Both ends must give a valid crystal.
            p.parameter.apply(&crystal, p.lower)?;
            p.parameter.apply(&crystal, p.upper)?;
        }
        if observations.is_empty() {
            return Err(Error::invalid("fit needs at least one observation"));
        }
        let mut normalized = Vec::with_capacity(observations.len());
        for o in &observations {
            if let Observation::Curve { wavelength_nm, intensity, .. } = o {
                if wavelength_nm.len() != intensity.len() {
                    return Err(Error::invalid("curve wavelength and intensity lengths differ"));
                }
            }
            if o.len() < 3 {
                return Err(Error::invalid("observations need at least 3 points"));
            }
            if o.values().iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(Error::invalid("observations must be finite and >= 0"));
            }
            normalized.push(o.peak_normalized()?);
        }
        if options.max_evaluations == 0 || !(options.tolerance >= 0.0) || options.descents == 0 {
            return Err(Error::invalid("bad fit options"));
        }
        let sampling = normalized.iter().map(Observation::sampling).collect::<Result<Vec<_>>>()?;
        Ok(FitProblem { crystal, model, observations: normalized, free, options, sampling })
    }

    pub fn crystal(&self) -> &CrystalSpec {
        &self.crystal
    }

    pub fn free(&self) -> &[FreeParameter] {
        &self.free
    }

    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    fn crystal_at(&self, physical: &[f64]) -> Result<CrystalSpec> {
        let mut c = self.crystal.clone();
        for (p, &v) in self.free.iter().zip(physical) {
            c = p.parameter.apply(&c, v)?;
        }
        Ok(c)
    }

    /// Model intensities for every observation at a crystal.
    pub fn model_values(&self, crystal: &CrystalSpec) -> Result<Vec<Vec<f64>>> {
        let domains = match self.model {
            ModelKind::UniformSinc => None,
            ModelKind::Domains => Some(DomainStructure::periodic(
                crystal.poling_period_um() * 1e-6,
                crystal.duty_cycle(),
                crystal.length_m(),
            )?),
        };
        self.sampling
            .iter()
            .map(|s| {
                let at_nodes = s
                    .nodes
                    .iter()
                    .map(|&(w1, w2)| {
                        Ok(match &domains {
                            None => pm_amplitude_uniform(phase_mismatch(w1, w2, crystal)?, crystal.length_m(), false),
                            Some(d) => pm_amplitude_domains(bulk_mismatch(w1, w2, crystal)?, d),
                        }
                        .norm_sqr())
                    })
                    .collect::<Result<Vec<f64>>>()?;
                Ok(match &s.stencil {
                    None => at_nodes,
                    Some(st) => st.iter().map(|p| p.iter().map(|&(k, w)| w * at_nodes[k]).sum()).collect(),
                })
            })
            .collect()
    }

    /// Residual sum of squares with optimal linear terms, at physical
    /// parameter values.
    pub fn objective(&self, physical: &[f64]) -> Result<(f64, Vec<LinearTerms>)> {
        let crystal = self.crystal_at(physical)?;
        let models = self.model_values(&crystal)?;
        let mut total = 0.0;
        let mut linear = Vec::with_capacity(models.len());
        for (obs, m) in self.observations.iter().zip(&models) {
            let (terms, rss) = linear_least_squares(obs.values(), m);
            total += rss;
            linear.push(terms);
        }
        if !total.is_finite() {
            return Err(Error::NonFiniteObjective { point: physical.to_vec() });
        }
        Ok((total, linear))
    }

    fn unit_objective(&self, u: &[f64]) -> Result<f64> {
        Ok(self.objective(&self.to_physical(u))?.0)
    }

    fn to_physical(&self, u: &[f64]) -> Vec<f64> {
        self.free.iter().zip(u).map(|(p, &x)| p.physical(x)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearTerms {
    pub scale: f64,
    pub background: f64,
}

/// `min_{a >= 0, b} sum (y - a m - b)^2`.
fn linear_least_squares(y: &[f64], m: &[f64]) -> (LinearTerms, f64) {
    let n = y.len() as f64;
    let (mut sm, mut sy, mut smm, mut smy) = (0.0, 0.0, 0.0, 0.0);
    for (&yi, &mi) in y.iter().zip(m) {
        sm += mi;
        sy += yi;
        smm += mi * mi;
        smy += mi * yi;
    }
    let det = n * smm - sm * sm;
    let mut scale = if det > 1e-14 * n * smm { (n * smy - sm * sy) / det } else { 0.0 };
    if !(scale > 0.0) {
        scale = 0.0;
    }
    let background = (sy - scale * sm) / n;
    let rss = y.iter().zip(m).map(|(&yi, &mi)| (yi - scale * mi - background).powi(2)).sum();
    (LinearTerms { scale, background }, rss)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedParameter {
    pub parameter: FitParameter,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    /// Second derivative of the residual sum of squares, per unit^2.
    pub curvature: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub parameters: Vec<FittedParameter>,
    pub crystal: CrystalGeometry,
    pub model: ModelKind,
    pub residual_sum_squares: f64,
    pub linear_terms: Vec<LinearTerms>,
    pub evaluations: usize,
    pub converged: bool,
    pub max_evaluations: usize,
    pub descents: usize,
}

impl FitResult {
    pub fn value(&self, parameter: FitParameter) -> Option<f64> {
        self.parameters.iter().find(|p| p.parameter == parameter).map(|p| p.value)
    }
}

fn lexicographic(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
}

fn coarse_nodes(free: &[FreeParameter]) -> Vec<Vec<f64>> {
    let mut nodes = vec![Vec::new()];
    for p in free {
        let g = p.grid_points;
        let ticks: Vec<f64> = if g == 1 { vec![0.5] } else { (0..g).map(|k| k as f64 / (g - 1) as f64).collect() };
        nodes = nodes
            .into_iter()
            .flat_map(|n| {
                ticks.iter().map(move |&t| {
                    let mut v = n.clone();
                    v.push(t);
                    v
                })
            })
            .collect();
    }
    nodes
}

pub fn fit_crystal(problem: &FitProblem) -> Result<FitResult> {
    fit_crystal_with(problem, Execution::default())
}

/// Coarse grid over the box, simplex descents from the best nodes, then the
/// best descent by (residual, parameter vector).
pub fn fit_crystal_with(problem: &FitProblem, exec: Execution) -> Result<FitResult> {
    let nodes = coarse_nodes(&problem.free);
    let values = try_map_indices(nodes.len(), exec, |k| problem.unit_objective(&nodes[k]))?;
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then_with(|| lexicographic(&nodes[a], &nodes[b])));
    order.truncate(problem.options.descents);

    let max_grid = problem.free.iter().map(|p| p.grid_points).max().unwrap_or(1);
    let opts = SimplexOptions {
        max_evaluations: problem.options.max_evaluations,
        tolerance: problem.options.tolerance,
        initial_step: 0.5 / (max_grid.max(2) - 1) as f64,
    };
    let f = |u: &[f64]| problem.unit_objective(u);
    let outcomes = try_map_indices(order.len(), exec, |k| minimize(&f, &nodes[order[k]], opts))?;
    let descent_evaluations: usize = outcomes.iter().map(|o| o.evaluations).sum();
    let best = outcomes
        .into_iter()
        .min_by(|a, b| a.value.total_cmp(&b.value).then_with(|| lexicographic(&a.point, &b.point)))
        .expect("at least one descent");

    let physical = problem.to_physical(&best.point);
    let (rss, linear_terms) = problem.objective(&physical)?;
    let (curvatures, curvature_evaluations) = curvature_diagonal(problem, &physical, rss)?;
    let parameters = problem
        .free
        .iter()
        .zip(&physical)
        .zip(curvatures)
        .map(|((p, &value), curvature)| FittedParameter {
            parameter: p.parameter,
            value,
            lower: p.lower,
            upper: p.upper,
            curvature,
        })
        .collect();
    Ok(FitResult {
        parameters,
        crystal: problem.crystal_at(&physical)?.geometry(),
        model: problem.model,
        residual_sum_squares: rss,
        linear_terms,
        evaluations: nodes.len() + descent_evaluations + 1 + curvature_evaluations,
        converged: best.converged,
        max_evaluations: problem.options.max_evaluations,
        descents: order.len(),
    })
}

/// Central (or one-sided at a bound) second differences with a step of 1e-4
/// of the bound width.
fn curvature_diagonal(problem: &FitProblem, x: &[f64], f0: f64) -> Result<(Vec<f64>, usize)> {
    let mut out = Vec::with_capacity(x.len());
    for (k, p) in problem.free.iter().enumerate() {
        let h = 1e-4 * (p.upper - p.lower);
        let at = |v: f64| {
            let mut y = x.to_vec();
            y[k] = v;
            problem.objective(&y).map(|r| r.0)
        };
        let c = x[k];
        let (fa, fm, fb) = if c - h < p.lower {
            (f0, at(c + h)?, at(c + 2.0 * h)?)
        } else if c + h > p.upper {
            (at(c - 2.0 * h)?, at(c - h)?, f0)
        } else {
            (at(c - h)?, f0, at(c + h)?)
        };
        out.push((fa - 2.0 * fm + fb) / (h * h));
    }
    let evaluations = 2 * out.len();
    Ok((out, evaluations))
}

/// Plain-text summary with fixed formatting.
pub fn fit_report(result: &FitResult) -> String {
    let mut s = String::new();
    let model = match result.model {
        ModelKind::UniformSinc => "uniform-sinc",
        ModelKind::Domains => "domains",
    };
    let _ = writeln!(s, "crystal fit ({model} model)");
    let _ = writeln!(s, "{:<18} {:>14} {:>14} {:>14} {:>12}", "parameter", "value", "lower", "upper", "curvature");
    for p in &result.parameters {
        let _ = writeln!(
            s,
            "{:<18} {:>14.6} {:>14.6} {:>14.6} {:>12.4e}",
            p.parameter.name(),
            p.value,
            p.lower,
            p.upper,
            p.curvature
        );
    }
    for (k, t) in result.linear_terms.iter().enumerate() {
        let _ = writeln!(s, "observation {k}: scale {:.6e}, background {:.6e}", t.scale, t.background);
    }
    let _ = writeln!(s, "residual sum of squares: {:.6e}", result.residual_sum_squares);
    let _ = writeln!(s, "evaluations: {} ({} descents)", result.evaluations, result.descents);
    if result.converged {
        let _ = writeln!(s, "converged: true");
    } else {
        let _ = writeln!(
            s,
            "converged: false (stopped at the cap of {} evaluations per descent)",
            result.max_evaluations
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::{Dispersion, PolarizationConfig};

    fn ktp() -> Dispersion {
        Dispersion::from_json_str(include_str!("../../../../data/sellmeier/ktp.json")).unwrap()
    }

    fn base() -> CrystalSpec {
        CrystalSpec::new(46.1, 30.0, 0.5, 1, PolarizationConfig::TYPE_II, ktp()).unwrap()
    }

    fn antidiagonal_curve(crystal: &CrystalSpec, scale: f64, background: f64) -> Observation {
        let wavelength_nm: Vec<f64> = (0..251).map(|k| 1575.0 + 0.04 * k as f64).collect();
        let probe = Observation::Curve {
            geometry: CurveGeometry::AntiDiagonal { pump_nm: 790.0 },
            wavelength_nm: wavelength_nm.clone(),
            intensity: vec![1.0; wavelength_nm.len()],
        };
        let p = FitProblem::new(
            crystal.clone(),
            ModelKind::UniformSinc,
            vec![probe],
            vec![FreeParameter::new(FitParameter::LengthMm, 1.0, 100.0)],
            FitOptions::default(),
        )
        .unwrap();
        let m = p.model_values(crystal).unwrap().remove(0);
        Observation::Curve {
            geometry: CurveGeometry::AntiDiagonal { pump_nm: 790.0 },
            wavelength_nm,
            intensity: m.iter().map(|v| scale * v + background).collect(),
        }
    }

    fn two_parameter_problem(obs: Observation) -> FitProblem {
        FitProblem::new(
            base(),
            ModelKind::UniformSinc,
            vec![obs],
            vec![
                FreeParameter::new(FitParameter::PolingPeriodUm, 45.9, 46.4),
                FreeParameter::new(FitParameter::LengthMm, 27.0, 32.0),
            ],
            FitOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn linear_terms_closed_form() {
        let m = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = m.iter().map(|v| 2.5 * v + 0.25).collect();
        let (t, rss) = linear_least_squares(&y, &m);
        assert!((t.scale - 2.5).abs() < 1e-12 && (t.background - 0.25).abs() < 1e-12 && rss < 1e-24);
        let (t, _) = linear_least_squares(&[3.0, 2.0, 1.0], &[1.0, 2.0, 3.0]);
        assert_eq!(t.scale, 0.0);
        assert!((t.background - 2.0).abs() < 1e-15);
    }

    #[test]
    fn recovers_generator_parameters() {
        let truth = base().with_poling_period(46.125).unwrap().with_length(29.0).unwrap();
        let r = fit_crystal(&two_parameter_problem(antidiagonal_curve(&truth, 1.0, 0.0))).unwrap();
        let period = r.value(FitParameter::PolingPeriodUm).unwrap();
        let length = r.value(FitParameter::LengthMm).unwrap();
        assert!((period / 46.125 - 1.0).abs() < 1e-4, "{}", fit_report(&r));
        assert!((length / 29.0 - 1.0).abs() < 1e-4, "{}", fit_report(&r));
        assert!(r.converged);
        assert!(r.parameters.iter().all(|p| p.curvature > 0.0));
    }

    fn gridded_map(crystal: &CrystalSpec, step_nm: f64) -> Intensity2D {
        let axis: Vec<f64> = (0..).map(|k| 1575.0 + step_nm * k as f64).take_while(|&l| l <= 1585.0 + 1e-9).collect();
        let matrix = Observation::Matrix {
            data: Intensity2D::new(axis.clone(), axis.clone(), vec![1.0; axis.len() * axis.len()]).unwrap(),
        };
        let p = FitProblem::new(
            crystal.clone(),
            ModelKind::UniformSinc,
            vec![matrix],
            vec![FreeParameter::new(FitParameter::LengthMm, 1.0, 100.0)],
            FitOptions::default(),
        )
        .unwrap();
        Intensity2D::new(axis.clone(), axis, p.model_values(crystal).unwrap().remove(0)).unwrap()
    }

    #[test]
    fn cut_model_cancels_interpolation_bias() {
        let truth = base().with_poling_period(46.125).unwrap().with_length(29.0).unwrap();
        let map = gridded_map(&truth, 0.2);
        let cs = crate::fitting::anticorrelated_cross_section(&map, 790.0, 251).unwrap();
        let plain = Observation::Curve {
            geometry: CurveGeometry::AntiDiagonal { pump_nm: 790.0 },
            wavelength_nm: cs.wavelength_nm.clone(),
            intensity: cs.intensity.clone(),
        };
        let biased = fit_crystal(&two_parameter_problem(plain)).unwrap();
        let exact = fit_crystal(&two_parameter_problem(Observation::cut(&map, cs))).unwrap();
        let err = |r: &FitResult| (r.value(FitParameter::LengthMm).unwrap() / 29.0 - 1.0).abs();
        assert!(err(&biased) > 1e-3, "coarse grid should bias a plain curve fit: {}", err(&biased));
        assert!(err(&exact) < 1e-6, "{}", fit_report(&exact));
        assert!(exact.residual_sum_squares < 1e-20);
    }

    #[test]
    fn rescaled_observations_give_same_shape_parameters() {
        let truth = base().with_poling_period(46.2).unwrap().with_length(30.5).unwrap();
        let a = fit_crystal(&two_parameter_problem(antidiagonal_curve(&truth, 1.0, 0.01))).unwrap();
        let b = fit_crystal(&two_parameter_problem(antidiagonal_curve(&truth, 37.0, 0.37))).unwrap();
        for (x, y) in a.parameters.iter().zip(&b.parameters) {
            assert!((x.value - y.value).abs() <= 1e-9 * x.value.abs(), "{x:?} {y:?}");
        }
        assert!((b.linear_terms[0].scale - a.linear_terms[0].scale).abs() < 1e-9);
    }

    #[test]
    fn deterministic_across_execution_modes() {
        let truth = base().with_poling_period(46.0).unwrap().with_length(28.0).unwrap();
        let p = two_parameter_problem(antidiagonal_curve(&truth, 1.0, 0.0));
        let a = fit_crystal_with(&p, Execution::Serial).unwrap();
        let b = fit_crystal_with(&p, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(fit_report(&a), fit_report(&b));
    }

    #[test]
    fn rejects_empty_parameter_list() {
        let obs = antidiagonal_curve(&base(), 1.0, 0.0);
        let r = FitProblem::new(base(), ModelKind::UniformSinc, vec![obs], vec![], FitOptions::default());
        assert!(r.is_err());
    }

    #[test]
    fn report_flags_convergence() {
        let truth = base().with_poling_period(46.125).unwrap().with_length(29.0).unwrap();
        let obs = antidiagonal_curve(&truth, 1.0, 0.0);
        let mut p = two_parameter_problem(obs);
        p.options.max_evaluations = 5;
        let r = fit_crystal(&p).unwrap();
        let text = fit_report(&r);
        assert!(text.contains("converged: false"));
        assert!(text.contains("cap of 5 evaluations"));
        let mut ok = r.clone();
        ok.converged = true;
        assert!(fit_report(&ok).contains("converged: true"));
    }
}
