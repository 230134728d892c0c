use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty distribution")]
    Empty,

    #[error("label count {labels} does not match probability count {probs}")]
    LabelCount { labels: usize, probs: usize },

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("invalid probability at index {idx}: {value}")]
    InvalidProbability { idx: usize, value: f64 },

    #[error("not normalized: sum = {sum}")]
    NotNormalized { sum: f64 },

    #[error("matrix has {got} entries, expected {rows} x {cols}")]
    Shape { rows: usize, cols: usize, got: usize },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("invalid order α = {0}: must be finite and > 0")]
    InvalidAlpha(f64),

    #[error("operation undefined at α = 1: {0}")]
    AlphaOne(&'static str),

    #[error("operation requires α > 1, got {0}")]
    AlphaNotAboveOne(f64),

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("invalid solver configuration: {0}")]
    Config(String),

    #[error("alphabet {x} x {y} too large for brute-force oracle (max 3 x 3)")]
    OracleTooLarge { x: usize, y: usize },

    #[error("exact enumeration of {pairs} sequence pairs exceeds the cap of {cap}")]
    EnumerationCap { pairs: f64, cap: f64 },

    #[error("invalid simulation parameters: {0}")]
    Simulation(String),
}
