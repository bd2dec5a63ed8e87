use thiserror::Error;

/// Crate-wide error type. Numerical routines report *why* they failed and
/// where, so the CLI can map failures onto its exit-code contract.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge: worst subinterval [{a}, {b}], error estimate {estimate:e}")]
    NonConvergence { a: f64, b: f64, estimate: f64 },

    #[error("grid too coarse: need at least {needed} nodes, got {got}")]
    GridTooCoarse { needed: usize, got: usize },

    #[error("{context}: grid must be uniformly spaced")]
    NonUniformGrid { context: &'static str },

    #[error("seed branch mismatch at r = {radius}: quadrature and ODE continuation differ by {rel_err:e} (relative)")]
    BranchMismatch { radius: f64, rel_err: f64 },

    #[error("singular family: {what} vanishes near r = {radius}")]
    SingularFamily { radius: f64, what: &'static str },

    #[error("kernel combination c1*g1 + c2*g2 changes sign near r = {radius}")]
    CombinationZero { radius: f64 },

    #[error("missing derivatives: {0} requires d1 and d2 to be populated")]
    MissingDerivatives(&'static str),

    #[error("eigensolver failed to converge on level {level}")]
    ConvergenceFailure { level: usize },

    #[error("shooting bracket failure on level {level}: {detail}")]
    BracketFailure { level: usize, detail: String },

    #[error("factorization certificate failed: {0}")]
    CertificateFailure(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
