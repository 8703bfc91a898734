use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("spectral parameter {re}{im:+}i lies on the excluded half-axis [0, inf)")]
    OnPositiveAxis { re: f64, im: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {0} (only 1, 2, 3)")]
    UnsupportedDimension(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("pole of the Gamma function at {re}{im:+}i")]
    GammaPole { re: f64, im: f64 },
    #[error("formula degenerate (Gamma pole at d/2 - zeta = {0}), use free_green")]
    DegenerateKernel(f64),
    #[error("zero potential: every cube is below the mass floor")]
    ZeroPotential,
    #[error("{what} did not converge after {iterations} iterations (partial estimate {estimate})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        estimate: f64,
    },
    #[error("no eigenvalue located: residual {residual} at {re}{im:+}i")]
    NoEigenvalue { re: f64, im: f64, residual: f64 },
    #[error("search converged to the boundary of the admissible set at {re}{im:+}i")]
    BoundaryConvergence { re: f64, im: f64 },
    #[error("inconsistent corpus: {0}")]
    Inconsistent(String),
    #[error("matrix is singular")]
    Singular,
    #[error("i/o error: {0}")]
    Io(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
