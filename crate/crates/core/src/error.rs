//! Error type shared by all rating operations.

use thiserror::Error;

/// Errors produced while validating inputs or running the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RatingError {
    #[error("dimension mismatch: rating has {rating} players, results have {results}")]
    DimensionMismatch { rating: usize, results: usize },

    #[error("at least 2 players are required, got {0}")]
    TooFewPlayers(usize),

    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("{what} must be {constraint}, got {value}")]
    OutOfRange {
        what: &'static str,
        constraint: &'static str,
        value: f64,
    },

    #[error("rating components must sum to zero within {tolerance:e}, got {sum:e}")]
    UncenteredRating { sum: f64, tolerance: f64 },

    #[error("result cells must be non-negative, got {value} at ({row}, {col})")]
    NegativePoints { row: usize, col: usize, value: f64 },

    #[error("result diagonal must be zero, got {value} for player {player}")]
    NonZeroDiagonal { player: usize, value: f64 },

    #[error("player index {index} out of range for {count} players")]
    PlayerOutOfRange { index: usize, count: usize },

    #[error("player index {0} appears twice in the subset")]
    DuplicatePlayer(usize),

    #[error("period index {index} out of range for {count} periods")]
    PeriodOutOfRange { index: usize, count: usize },

    #[error("ledger holds no periods")]
    EmptyLedger,

    #[error("period matrices disagree on player count: {first} vs {found}")]
    MixedPeriodSizes { first: usize, found: usize },

    #[error("trace does not replay as repetitions of the given results")]
    NonConstantLedger,

    #[error(
        "no convergence within {cap} loops (best residual {residual:e}, target {epsilon:e})"
    )]
    LoopLimit {
        cap: u64,
        residual: f64,
        epsilon: f64,
    },
}

pub type Result<T> = std::result::Result<T, RatingError>;

pub(crate) fn ensure_finite(what: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(RatingError::NonFinite { what, value })
    }
}

pub(crate) fn ensure_positive(what: &'static str, value: f64) -> Result<()> {
    ensure_finite(what, value)?;
    if value > 0.0 {
        Ok(())
    } else {
        Err(RatingError::OutOfRange {
            what,
            constraint: "positive",
            value,
        })
    }
}
