//! Pump envelopes, phase-matching amplitudes and joint spectral amplitudes.

mod jsa;
mod phase_matching;
mod pump;

pub use jsa::{
    build_jsa, build_jsa_with, jsi, phase_matching_at, phase_matching_map, spdc_rate, GridSpec, JointSpectrum,
    SpectralMap, MAX_GRID_POINTS,
};
pub use phase_matching::{
    pm_amplitude_domains, pm_amplitude_uniform, Complex64, DomainStructure, PhaseMatchSpec, TabulatedPhaseMatch,
};
pub use pump::{pump_amplitude, PumpConfig, PumpEnvelope, PumpShape, TabulatedPump};
