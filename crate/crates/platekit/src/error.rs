use thiserror::Error;

/// Errors produced by platekit operations.
#[derive(Debug, Error)]
pub enum PlateError {
    #[error("invalid moduli: {0}")]
    InvalidModuli(String),
    #[error("tensor symmetry violated: max deviation {max_dev:e} exceeds tolerance {tol:e}")]
    SymmetryViolation { max_dev: f64, tol: f64 },
    #[error("tensor kind mismatch: expected {expected}, got {got}")]
    KindMismatch {
        expected: &'static str,
        got: &'static str,
    },
    #[error("underdetermined moduli: cannot derive {0} from the supplied fields")]
    Underdetermined(&'static str),
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("curve orientation is clockwise; positively oriented (counterclockwise) input required")]
    ClockwiseOrientation,
    #[error("field length {got} does not match curve node count {expected}")]
    FieldLengthMismatch { expected: usize, got: usize },
    #[error("dataset kind mismatch: {0} vs {1}")]
    DatasetKindMismatch(&'static str, &'static str),
    #[error("inadmissible data: {check} residual {residual:e} exceeds tolerance {tol:e}")]
    Inadmissible {
        check: &'static str,
        residual: f64,
        tol: f64,
    },
    #[error("strain field is incompatible: residual {0:e}")]
    IncompatibleStrain(f64),
    #[error("polynomial degree {got} exceeds supported cap {cap}")]
    DegreeTooHigh { got: usize, cap: usize },
    #[error("not a plate solution: PDE residual {0:e}")]
    PdeResidual(f64),
    #[error("dichotomy coefficient a0 = {0:e} is not positive at sample {1}")]
    NonPositiveA0(f64, usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, PlateError>;
