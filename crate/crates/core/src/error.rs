use thiserror::Error;

use crate::dispersion::Axis;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("wavelength {wavelength_um} um is outside the {axis} axis range [{min_um}, {max_um}] um")]
    OutOfRange {
        axis: Axis,
        wavelength_um: f64,
        min_um: f64,
        max_um: f64,
    },

    #[error("refractive index on the {axis} axis is not real and > 1 at {wavelength_um} um")]
    UnphysicalIndex { axis: Axis, wavelength_um: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no degenerate QPM point in range [{min_um}, {max_um}] um")]
    NoDegeneratePoint { min_um: f64, max_um: f64 },

    #[error("anti-correlated line for pump {pump_nm} nm does not intersect the scan region")]
    EmptyIntersection { pump_nm: f64 },

    #[error("joint spectral amplitude is identically zero")]
    ZeroMatrix,

    #[error("SNR undefined: dark count rate is zero")]
    UndefinedSnr,

    #[error("non-finite objective at parameter point {point:?}")]
    NonFiniteObjective { point: Vec<f64> },

    #[error("data format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for errors caused by malformed input rather than by the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_) | Error::Format(_) | Error::Io(_) | Error::Json(_) | Error::Csv(_)
        )
    }
}
