//! Modelling of quasi-phase-matched nonlinear crystals for photon-pair
//! generation: material dispersion, joint spectral amplitudes, SFG/SHG scan
//! simulation with photon-counting noise, crystal parameter fitting and
//! Schmidt-mode analysis.
//!
//! Frequencies are angular (rad/s), wavelengths are vacuum wavelengths in nm
//! at the API surface unless a name says `_um`, and crystal geometry is in
//! micrometres (poling period) and millimetres (length).

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dispersion;
pub mod error;
pub mod fitting;
pub mod interp;
pub mod io;
pub mod par;
pub mod scan;
pub mod schmidt;
pub mod spectrum;
pub mod units;

pub use error::{Error, Result};
pub use par::Execution;
