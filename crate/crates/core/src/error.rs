use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("player count {n} outside supported range 1..={max}")]
    PlayerCount { n: usize, max: usize },

    #[error("expected {expected} values for {n} players, got {got}")]
    Length { n: usize, expected: usize, got: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("player {} out of range for {n} players", player + 1)]
    PlayerOutOfRange { player: usize, n: usize },

    #[error("player {} is already a member of {coalition}", player + 1)]
    PlayerInCoalition { player: usize, coalition: String },

    #[error("coalition mask {mask:#b} out of range for {n} players")]
    CoalitionOutOfRange { mask: u32, n: usize },

    #[error("{coalition} is not a minimal set of the game")]
    NotMinimal { coalition: String },

    #[error("game has no minimal set to truncate")]
    NoMinimalSet,

    #[error("game is not binary: value {value} at {coalition}")]
    NotBinary { coalition: String, value: f64 },

    #[error("game is not monotone")]
    NotMonotone,

    #[error("game value at the empty coalition must be 0, got {0}")]
    NonzeroEmptyValue(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(String),

    #[error("embedding is not injective or out of range: {0}")]
    InvalidEmbedding(String),

    #[error("invalid probe request: {0}")]
    InvalidProbe(String),

    #[error("{what} {value} exceeds the supported limit {limit}")]
    SizeLimit { what: &'static str, value: usize, limit: usize },

    #[error("parse error: {0}")]
    Parse(String),
}
