use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e} exceeds tolerance)")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix contains NaN or infinite entries")]
    NonFinite,

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPsd { eigenvalue: f64 },

    #[error("matrix is not a contraction (norm {norm:.12})")]
    NotContraction { norm: f64 },

    #[error("Cayley chart is singular at this base point")]
    SingularChart,

    #[error("rank index k = {k} outside 1..={dim}")]
    KOutOfRange { k: usize, dim: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("enumeration of {count} subsets exceeds the budget of {budget}")]
    TooLarge { count: u128, budget: u128 },

    #[error("spectral model has no atoms")]
    EmptyModel,

    #[error("dilation parameter is not unitary (residual {residual:.3e})")]
    NotUnitaryParameter { residual: f64 },

    #[error("defect numbers differ: d_A = {d_a}, d_A* = {d_a_adj}")]
    DefectMismatch { d_a: usize, d_a_adj: usize },

    #[error("optimizer did not reach the target (best gap {best_gap:.3e})")]
    OptimizerDidNotConverge { best_gap: f64 },

    #[error(
        "A*A + B*B exceeds the identity (min eigenvalue of I - A*A - B*B is {min_eigenvalue:.3e})"
    )]
    ConstraintViolated { min_eigenvalue: f64 },

    #[error("eigenvalue prescription not met numerically (residual {residual:.3e})")]
    PrescriptionInfeasibleNumerically { residual: f64 },

    #[error("invalid eigenvalue prescription: {0}")]
    InvalidPrescription(String),

    #[error("weights are not real and sorted in descending order")]
    WeightsNotSortedReal,

    #[error("{0} did not converge")]
    NoConvergence(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable tag used by the CLI error stream.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NonFinite => "NonFinite",
            Error::NotPsd { .. } => "NotPSD",
            Error::NotContraction { .. } => "NotContraction",
            Error::SingularChart => "SingularChart",
            Error::KOutOfRange { .. } => "KOutOfRange",
            Error::Shape(_) => "ShapeError",
            Error::TooLarge { .. } => "TooLarge",
            Error::EmptyModel => "EmptyModel",
            Error::NotUnitaryParameter { .. } => "NotUnitaryParameter",
            Error::DefectMismatch { .. } => "DefectMismatch",
            Error::OptimizerDidNotConverge { .. } => "OptimizerDidNotConverge",
            Error::ConstraintViolated { .. } => "ConstraintViolated",
            Error::PrescriptionInfeasibleNumerically { .. } => "PrescriptionInfeasibleNumerically",
            Error::InvalidPrescription(_) => "InvalidPrescription",
            Error::WeightsNotSortedReal => "WeightsNotSortedReal",
            Error::NoConvergence(_) => "NoConvergence",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Parse { .. } => "ParseError",
        }
    }
}
