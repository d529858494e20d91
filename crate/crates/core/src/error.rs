use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not symmetric: |S - S^T|_inf = {defect:e} exceeds {limit:e}")]
    Asymmetric { defect: f64, limit: f64 },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("invalid shape: {0}")]
    Shape(String),

    #[error("invalid tolerance profile: {0}")]
    Tolerance(String),

    #[error("not a Lagrangian frame: rank {rank} of {n}, |Y^T J Y|_inf = {defect:e}")]
    InvalidFrame { n: usize, rank: usize, defect: f64 },

    #[error("not symplectic: |Z^T J Z - J|_inf = {defect:e}")]
    InvalidSymplectic { defect: f64 },

    #[error("chain needs at least {need} frames, got {got}")]
    ChainTooShort { need: usize, got: usize },

    #[error("route unavailable: {0}")]
    UnsupportedRoute(String),

    #[error(
        "no transversal rotation found after {attempts} candidates (best sigma_min ratio {best:e})"
    )]
    AngleSearchExhausted { attempts: usize, best: f64 },

    #[error("index {index} out of range 0..={max}")]
    OutOfRange { index: usize, max: usize },

    #[error("cannot parse input: {0}")]
    Parse(String),

    #[error("identity violated: {0}")]
    Identity(String),
}

impl Error {
    /// Malformed or inconsistent input, as opposed to a mathematical rejection.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::Shape(_)
                | Error::DimensionMismatch { .. }
                | Error::ChainTooShort { .. }
                | Error::OutOfRange { .. }
                | Error::Tolerance(_)
                | Error::NonFinite
                | Error::UnsupportedRoute(_)
        )
    }
}
