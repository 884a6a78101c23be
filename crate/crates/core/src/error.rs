use thiserror::Error;

pub type Result<T, E = ZenoError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZenoError {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("invalid measurement schedule: {0}")]
    InvalidSchedule(String),

    #[error("time {t} is outside the admissible range [{lo}, {hi}]")]
    TimeOutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("fit window [{lo}, {hi}] holds {samples} samples; at least 3 are required")]
    DegenerateWindow { lo: f64, hi: f64, samples: usize },

    #[error("exponential fit did not converge after {iterations} iterations (last rate {last_rate})")]
    FitNonConvergence { iterations: usize, last_rate: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("grid sizing: {diagnostic}; suggested domain [{suggested_x_min}, {suggested_x_max}] with {suggested_points} points")]
    GridSizing {
        diagnostic: String,
        suggested_x_min: f64,
        suggested_x_max: f64,
        suggested_points: usize,
    },
}

impl ZenoError {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        ZenoError::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
