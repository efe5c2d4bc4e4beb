use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum TflocError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension N = {0} is not supported (N >= 2 required)")]
    InvalidDimension(usize),

    #[error("window is the zero signal")]
    ZeroWindow,

    #[error("zero signal not allowed here")]
    ZeroSignal,

    #[error("invalid window parameter: {0}")]
    InvalidWindowParam(String),

    #[error("exponent p = {0} out of range [1, inf]")]
    InvalidExponent(f64),

    #[error("rank k = {k} exceeds dimension N = {n}")]
    RankExceedsDimension { k: usize, n: usize },

    #[error(
        "lambda = 0 with vanishing spreading multiplier; ambiguity zero set: {}",
        format_zero_set(zeros)
    )]
    VanishingMultiplier { zeros: Vec<(usize, usize)> },

    #[error("inconsistent singular system: {0}")]
    InvalidSingularSystem(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

fn format_zero_set(zeros: &[(usize, usize)]) -> String {
    let shown: Vec<String> = zeros
        .iter()
        .take(8)
        .map(|(x, w)| format!("({x},{w})"))
        .collect();
    if zeros.len() > 8 {
        format!("[{} ... {} points total]", shown.join(", "), zeros.len())
    } else {
        format!("[{}]", shown.join(", "))
    }
}

pub type Result<T> = std::result::Result<T, TflocError>;
