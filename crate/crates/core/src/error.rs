use thiserror::Error;

/// Errors raised by the exact algebra, the Darboux machinery and the
/// bispectral checks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("pivot beta_{0} is singular; alpha0 is inadmissible at this level")]
    SingularPivot(usize),
    #[error("exact window exhausted: {levels} levels cannot support {needed}")]
    WindowExhausted { levels: usize, needed: usize },
    #[error("insufficient levels: need {needed}, have {available}")]
    InsufficientLevels { needed: usize, available: usize },
    #[error("insufficient moments: need {needed}, have {available}")]
    InsufficientMoments { needed: usize, available: usize },
    #[error("block Hankel system is singular at degree {0}")]
    DegenerateMoments(usize),
    #[error("moments are not exactly representable: {0}")]
    InexactParameters(String),
    #[error("unsupported weight configuration: {0}")]
    UnsupportedKind(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("alpha0 is singular")]
    SingularAlpha0,
    #[error("alpha0 is not symmetric")]
    AsymmetricAlpha0,
    #[error("operator is not bispectral at n = {n}: residual {residual} at degree {degree}, entry ({row}, {col})")]
    NotBispectral {
        n: usize,
        degree: usize,
        row: usize,
        col: usize,
        residual: String,
    },
    #[error("malformed structure: {0}")]
    Structure(String),
}

impl Error {
    /// Stable variant name, used in CLI diagnostics.
    pub fn variant(&self) -> &'static str {
        match self {
            Error::SingularMatrix => "SingularMatrix",
            Error::SizeMismatch(_) => "SizeMismatch",
            Error::SingularPivot(_) => "SingularPivot",
            Error::WindowExhausted { .. } => "WindowExhausted",
            Error::InsufficientLevels { .. } => "InsufficientLevels",
            Error::InsufficientMoments { .. } => "InsufficientMoments",
            Error::DegenerateMoments(_) => "DegenerateMoments",
            Error::InexactParameters(_) => "InexactParameters",
            Error::UnsupportedKind(_) => "UnsupportedKind",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::SingularAlpha0 => "SingularAlpha0",
            Error::AsymmetricAlpha0 => "AsymmetricAlpha0",
            Error::NotBispectral { .. } => "NotBispectral",
            Error::Structure(_) => "Structure",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
