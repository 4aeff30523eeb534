use thiserror::Error;

/// Errors raised by the numerical operations of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid size {0} must be a power of two and at least 16")]
    InvalidGridSize(usize),

    #[error("grid mismatch: {left} samples vs {right} samples")]
    GridMismatch { left: usize, right: usize },

    #[error("field has {got} samples but the grid has {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("frequency {frequency} aliases on a grid of {size} points")]
    Aliasing { frequency: i64, size: usize },

    #[error("exponent p = {0} is not allowed (need p >= 1)")]
    InvalidExponent(f64),

    #[error("Sobolev order s = {0} must be finite and nonnegative")]
    InvalidSobolevOrder(f64),

    #[error("scale range {j_min}..={j_max} does not fit a grid of {size} points (need 0 <= j_min < j_max and 2^j_max <= N/4)")]
    BandTooSmall { j_min: u32, j_max: u32, size: usize },

    #[error("scale {scale} outside the family range {j_min}..={j_max}")]
    ScaleOutOfRange { scale: u32, j_min: u32, j_max: u32 },

    #[error("symbol is not normalized: {0}")]
    SymbolNotNormalized(String),

    #[error("exponent pair (p, q) = ({p}, {q}) violates 1 < p, q < inf and 1/p + 1/q = 1/2")]
    ExponentPair { p: f64, q: f64 },

    #[error("dual function has L2 norm {0} > 1")]
    DualNormTooLarge(f64),

    #[error("dyadic level {level} is too deep (deepest resolvable level is {max})")]
    LevelTooDeep { level: u32, max: u32 },

    #[error("dyadic index {index} out of range at level {level}")]
    IntervalIndex { level: u32, index: u64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("frequency {frequency} is outside the tensor window")]
    WindowOverflow { frequency: i64 },

    #[error("truncation {k} exceeds the output window size {size}")]
    TruncationOutOfRange { k: usize, size: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
