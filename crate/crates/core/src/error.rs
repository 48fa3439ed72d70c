use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Numerical failures are never swallowed: a residual computed next to a pole
/// or on a diverging contour is worse than no residual at all.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no convergence in {what}: {evals} evaluations, error estimate {err:.3e}")]
    NonConvergence {
        what: &'static str,
        evals: usize,
        err: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "integrand does not decay on the contour: tail {tail:.3e} exceeds budget {budget:.3e}"
    )]
    DecayViolation { tail: f64, budget: f64 },

    #[error("pole: {0}")]
    Pole(String),

    #[error("Fresnel integral diverges in {factor}: Im(a*y^2) = {im:.3e}")]
    FresnelDivergence { factor: String, im: f64 },

    #[error("zero quadratic coefficient passed to a Fourier factor")]
    ZeroQuad,

    #[error("degenerate base point after prefix [{prefix}]: {detail}")]
    DegenerateBasePoint { prefix: String, detail: String },

    #[error("the two words differ as integer matrices")]
    MatrixMismatch,

    #[error("branch error: {0}")]
    Branch(String),

    #[error("log-log fit unstable: residual {residual:.3}")]
    FitUnstable { residual: f64 },

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("no admissible Gaussian probe: {0}")]
    NoProbe(String),
}

impl Error {
    /// Short machine-readable name, used by the CLI report.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonConvergence { .. } => "NonConvergence",
            Error::Domain(_) => "DomainError",
            Error::DecayViolation { .. } => "DecayViolation",
            Error::Pole(_) => "PoleError",
            Error::FresnelDivergence { .. } => "FresnelDivergence",
            Error::ZeroQuad => "ZeroQuad",
            Error::DegenerateBasePoint { .. } => "DegenerateBasePoint",
            Error::MatrixMismatch => "MatrixMismatch",
            Error::Branch(_) => "BranchError",
            Error::FitUnstable { .. } => "FitUnstable",
            Error::InvalidTolerance(_) => "InvalidTolerance",
            Error::NoProbe(_) => "NoProbe",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
