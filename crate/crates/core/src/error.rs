use thiserror::Error;

use crate::fock::Statistics;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mode count must be at least 1, got {0}")]
    InvalidModeCount(usize),

    #[error("mode {mode} out of range 1..={num_modes}")]
    ModeOutOfRange { mode: usize, num_modes: usize },

    #[error("statistics mismatch: expected {expected:?}, found {found:?}")]
    StatisticsMismatch { expected: Statistics, found: Statistics },

    #[error("mode count mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("invalid occupation vector: {0}")]
    InvalidOccupation(String),

    #[error("{particles} fermions do not fit into {modes} modes")]
    FermiSectorTooLarge { particles: usize, modes: usize },

    #[error("particle number {found} exceeds the configured maximum {max}")]
    SectorOverflow { found: usize, max: usize },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("fermionic state has indefinite particle-number parity in block {block}")]
    FermiParityIndefinite { block: u8 },

    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),

    #[error("max degree must be at least 2, got {0}")]
    InvalidMaxDegree(usize),

    #[error("monomial-pair budget exceeded: {needed} pairs > cap {cap}")]
    BudgetExceeded { needed: usize, cap: usize },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("invalid two-particle state: {0}")]
    InvalidTwoParticleState(String),

    #[error("state is not confined to the {expected}-particle sector")]
    WrongSector { expected: usize },

    #[error("operation requires identical particles (symmetric or antisymmetric state)")]
    DistinguishableParticles,

    #[error("singular value decomposition did not converge")]
    NoConvergence,

    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),

    #[error("{0}")]
    Io(String),

    #[error("malformed JSON: {0}")]
    Json(String),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Json(_) | Error::InvalidOccupation(_) => 2,
            Error::InvalidBipartition(_) | Error::UnknownStrategy(_) => 2,
            Error::BudgetExceeded { .. } | Error::SectorOverflow { .. } => 4,
            Error::Io(_) => 1,
            _ => 3,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
