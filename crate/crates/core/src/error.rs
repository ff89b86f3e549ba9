use thiserror::Error;

/// Errors raised by state construction, optics, analytics and sampling.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("offset omega*tau0 = {omega_tau0} is outside the grid (half extent {half_extent})")]
    OutOfRange { omega_tau0: f64, half_extent: f64 },

    #[error("common-path elements must be unitary; got a projector")]
    NotUnitary,

    #[error("filter passband {lo_m:e} m .. {hi_m:e} m does not fit inside the frequency grid")]
    PassbandOutsideGrid { lo_m: f64, hi_m: f64 },

    #[error("invalid sampling probabilities: {0}")]
    InvalidProbabilities(String),

    #[error("low statistics: {got} events for a setting, at least {need} required")]
    LowStatistics { got: usize, need: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
