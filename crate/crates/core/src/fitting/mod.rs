//! Recovery of crystal parameters from phase-matching data by separable
//! nonlinear least squares.

mod cross_section;
mod problem;
mod simplex;

pub use cross_section::{
    anticorrelated_cross_section, diagonal_cross_section, energy_partner_nm, CrossSection, Intensity2D,
};
pub use problem::{
    fit_crystal, fit_crystal_with, fit_report, CurveGeometry, FitOptions, FitParameter, FitProblem, FitResult,
    FittedParameter, FreeParameter, LinearTerms, ModelKind, Observation,
};
