//! Rating vectors: points on the zero-sum hyperplane, measured in internal
//! (dimensionless) units and compared in the L1 norm.

use crate::error::{RatingError, Result};

/// Per-player slack allowed on the zero-sum constraint. A rating over `n`
/// players must sum to zero within `n * SUM_TOLERANCE_PER_PLAYER`.
pub const SUM_TOLERANCE_PER_PLAYER: f64 = 1e-12;

/// Zero-sum tolerance for a vector of `n` players.
pub fn sum_tolerance(n: usize) -> f64 {
    n as f64 * SUM_TOLERANCE_PER_PLAYER
}

/// A rating vector: one real value per player, summing to zero.
///
/// The zero-sum constraint pins down the otherwise arbitrary additive offset
/// of a rating scale; only differences between components carry meaning.
#[derive(Debug, Clone, PartialEq)]
pub struct Rating {
    values: Vec<f64>,
}

impl Rating {
    /// The all-zero rating for `n` players.
    pub fn zero(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(RatingError::TooFewPlayers(n));
        }
        Ok(Self {
            values: vec![0.0; n],
        })
    }

    /// Wraps a vector that already satisfies the invariants: at least two
    /// components, all finite, sum within [`sum_tolerance`] of zero.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(RatingError::TooFewPlayers(values.len()));
        }
        for &v in &values {
            if !v.is_finite() {
                return Err(RatingError::NonFinite {
                    what: "rating component",
                    value: v,
                });
            }
        }
        let sum: f64 = values.iter().sum();
        let tolerance = sum_tolerance(values.len());
        if sum.abs() > tolerance {
            return Err(RatingError::UncenteredRating { sum, tolerance });
        }
        Ok(Self { values })
    }

    /// Subtracts the mean and wraps the result, restoring the zero-sum
    /// invariant after accumulated round-off.
    pub fn centered(mut values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(RatingError::TooFewPlayers(values.len()));
        }
        for &v in &values {
            if !v.is_finite() {
                return Err(RatingError::NonFinite {
                    what: "rating component",
                    value: v,
                });
            }
        }
        recenter(&mut values);
        Ok(Self { values })
    }

    /// Internal constructor for vectors produced by the maps in this crate,
    /// which are zero-sum by construction up to round-off.
    pub(crate) fn from_map_output(values: Vec<f64>) -> Self {
        debug_assert!(values.len() >= 2);
        debug_assert!(
            values.iter().sum::<f64>().abs() <= 1e-6 * (1.0 + l1(&values)),
            "map output drifted off the zero-sum hyperplane"
        );
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, player: usize) -> f64 {
        self.values[player]
    }

    /// Sum of absolute components.
    pub fn l1_norm(&self) -> f64 {
        l1(&self.values)
    }

    /// L1 distance to another rating of the same length.
    pub fn l1_distance(&self, other: &Rating) -> f64 {
        assert_eq!(self.len(), other.len(), "ratings must have equal length");
        l1_diff(&self.values, &other.values)
    }
}

impl std::ops::Index<usize> for Rating {
    type Output = f64;

    fn index(&self, player: usize) -> &f64 {
        &self.values[player]
    }
}

pub(crate) fn l1(values: &[f64]) -> f64 {
    values.iter().map(|v| v.abs()).sum()
}

pub(crate) fn l1_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

pub(crate) fn recenter(values: &mut [f64]) {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    for v in values.iter_mut() {
        *v -= mean;
    }
}
