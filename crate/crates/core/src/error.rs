use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Evaluation requested outside the fitted time window.
    #[error("time {t} is outside the window [{t0}, {tf}]")]
    Domain { t: f64, t0: f64, tf: f64 },

    #[error("shape mismatch in {what}: expected {expected}, got {got}")]
    Shape {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// Observer and target (or a predicted target) coincide.
    #[error("degenerate geometry at t = {t}: observer and target coincide")]
    DegenerateGeometry { t: f64 },

    #[error("degenerate geometry: observer and target coincide")]
    CoincidentPoints,

    /// The design matrix is rank deficient or too badly conditioned.
    #[error("unobservable geometry: condition number {condition_number:e} exceeds limit")]
    Unobservable { condition_number: f64 },

    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// A configuration value broke one of its constraints.
    #[error("invalid {field}: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("invalid observation series: {0}")]
    InvalidSeries(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
