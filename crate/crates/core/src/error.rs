use alloc::string::String;

/// Errors raised by the cone, volume, Futaki and auxiliary computations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("cone contains a line")]
    NotPointed,
    #[error("rays span a proper subspace of dimension {span} < {rank}")]
    NotFullDim { rank: usize, span: usize },
    #[error("input exceeds desk-scale limits: {0}")]
    TooLarge(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("Gorenstein system <gamma, v_i> = 1 - c_i is inconsistent")]
    NotQGorenstein,
    #[error("boundary coefficient of ray {index} is {value} >= 1")]
    NotKlt { index: usize, value: String },
    #[error("vector is not in the interior of the Reeb cone")]
    NotInReebCone,
    #[error("rounding k*xi leaves the Reeb cone; increase k")]
    RoundingExitsCone,
    #[error("log discrepancy of xi0 is not positive")]
    DegenerateXi,
    #[error("Newton iterates approached the boundary of the Reeb cone")]
    BoundaryEscape,
    #[error("minimization did not converge within {iters} iterations")]
    NotConverged { iters: usize },
    #[error("truncation bound {bound} too small: tail bound {tail} exceeds tolerance")]
    TruncationTooSmall { bound: f64, tail: f64 },
    #[error("Richardson extrapolation diverged")]
    ExtrapolationDiverged,
    #[error("leading coefficient {estimate} disagrees with vol {vol}")]
    VolumeMismatch { estimate: f64, vol: f64 },
    #[error("ideal is not primary to the maximal ideal: {0}")]
    NotPrimary(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI error payload.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPointed => "NotPointed",
            Error::NotFullDim { .. } => "NotFullDim",
            Error::TooLarge(_) => "TooLarge",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidInput(_) => "InvalidInput",
            Error::NotQGorenstein => "NotQGorenstein",
            Error::NotKlt { .. } => "NotKlt",
            Error::NotInReebCone => "NotInReebCone",
            Error::RoundingExitsCone => "RoundingExitsCone",
            Error::DegenerateXi => "DegenerateXi",
            Error::BoundaryEscape => "BoundaryEscape",
            Error::NotConverged { .. } => "NotConverged",
            Error::TruncationTooSmall { .. } => "TruncationTooSmall",
            Error::ExtrapolationDiverged => "ExtrapolationDiverged",
            Error::VolumeMismatch { .. } => "VolumeMismatch",
            Error::NotPrimary(_) => "NotPrimary",
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
