use thiserror::Error;

/// Failures raised anywhere in the evaluation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument outside the supported domain: {0}")]
    Domain(String),

    #[error("{0}: result not representable in double precision")]
    Overflow(&'static str),

    #[error(
        "quadrature did not converge after {evaluations} evaluations \
         (estimate {value_re:e}{value_im:+e}i, error {abs_error:e})"
    )]
    NonConvergence {
        evaluations: usize,
        abs_error: f64,
        value_re: f64,
        value_im: f64,
    },

    #[error("divergent quantity: {0}")]
    Divergent(String),

    #[error("regulator extrapolation unstable: residual {residual:e} exceeds limit {limit:e}")]
    Extrapolation { residual: f64, limit: f64 },

    #[error("integrand not finite at ({t1}, {t2})")]
    SingularKernel { t1: f64, t2: f64 },

    #[error("detectors are not identical: {0}")]
    Mismatch(String),

    #[error("degenerate separation: {0}")]
    DegenerateSeparation(String),

    #[error("regime requires elements that were not supplied: {}", .0.join(", "))]
    MissingElements(Vec<String>),

    #[error("regime: {0}")]
    Regime(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures caused by exhausting a numerical budget.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::NonConvergence { .. } | Error::Extrapolation { .. })
    }
}
