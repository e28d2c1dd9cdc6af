//! Competition results: a non-negative matrix with zero diagonal, where cell
//! `(i, j)` holds the points player `i` gained against player `j`.

use crate::error::{RatingError, Result};

/// An `n x n` result matrix. Cells are real points (fractional values are
/// fine; decay weighting produces them), the diagonal is exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultMatrix {
    n: usize,
    cells: Vec<f64>,
}

impl ResultMatrix {
    /// The empty result set for `n` players.
    pub fn zero(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(RatingError::TooFewPlayers(n));
        }
        Ok(Self {
            n,
            cells: vec![0.0; n * n],
        })
    }

    /// Builds a matrix from rows, validating non-negativity and the zero
    /// diagonal.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(RatingError::TooFewPlayers(n));
        }
        let mut cells = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(RatingError::DimensionMismatch {
                    rating: row.len(),
                    results: n,
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(RatingError::NonFinite {
                        what: "result cell",
                        value: v,
                    });
                }
                if v < 0.0 {
                    return Err(RatingError::NegativePoints {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
                if i == j && v != 0.0 {
                    return Err(RatingError::NonZeroDiagonal {
                        player: i,
                        value: v,
                    });
                }
                cells.push(v);
            }
        }
        Ok(Self { n, cells })
    }

    /// Two-player result: player 0 gained `points_a` against player 1, who
    /// gained `points_b` back.
    pub fn duel(points_a: f64, points_b: f64) -> Result<Self> {
        Self::from_rows(vec![vec![0.0, points_a], vec![points_b, 0.0]])
    }

    pub fn player_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.n + j]
    }

    /// Adds `points >= 0` to cell `(i, j)`.
    pub fn add_points(&mut self, i: usize, j: usize, points: f64) -> Result<()> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(RatingError::NonZeroDiagonal {
                player: i,
                value: points,
            });
        }
        if !points.is_finite() {
            return Err(RatingError::NonFinite {
                what: "points",
                value: points,
            });
        }
        if points < 0.0 {
            return Err(RatingError::NegativePoints {
                row: i,
                col: j,
                value: points,
            });
        }
        self.cells[i * self.n + j] += points;
        Ok(())
    }

    /// Entrywise L1 norm: the total number of points in play.
    pub fn l1_norm(&self) -> f64 {
        self.cells.iter().sum()
    }

    /// L1 distance to another result matrix of the same size.
    pub fn l1_distance(&self, other: &ResultMatrix) -> f64 {
        assert_eq!(self.n, other.n, "result matrices must have equal size");
        self.cells
            .iter()
            .zip(&other.cells)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }

    /// Largest total `p_ij + p_ji` contested between any single pair.
    pub fn max_pair_sum(&self) -> f64 {
        let mut max = 0.0_f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                max = max.max(self.get(i, j) + self.get(j, i));
            }
        }
        max
    }

    /// Every cell multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        crate::error::ensure_positive("scale factor", factor)?;
        Ok(Self {
            n: self.n,
            cells: self.cells.iter().map(|c| c * factor).collect(),
        })
    }

    /// The transposed results: every outcome reversed.
    pub fn transposed(&self) -> Self {
        let mut cells = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                cells[j * self.n + i] = self.get(i, j);
            }
        }
        Self { n: self.n, cells }
    }

    /// Relabels players: cell `(i, j)` moves to `(perm[i], perm[j])`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(RatingError::DimensionMismatch {
                rating: perm.len(),
                results: self.n,
            });
        }
        let mut seen = vec![false; self.n];
        for &t in perm {
            if t >= self.n {
                return Err(RatingError::PlayerOutOfRange {
                    index: t,
                    count: self.n,
                });
            }
            if seen[t] {
                return Err(RatingError::DuplicatePlayer(t));
            }
            seen[t] = true;
        }
        let mut cells = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                cells[perm[i] * self.n + perm[j]] = self.get(i, j);
            }
        }
        Ok(Self { n: self.n, cells })
    }

    /// Adds another result matrix cell by cell.
    pub fn merged(&self, other: &ResultMatrix) -> Result<Self> {
        if self.n != other.n {
            return Err(RatingError::MixedPeriodSizes {
                first: self.n,
                found: other.n,
            });
        }
        Ok(Self {
            n: self.n,
            cells: self
                .cells
                .iter()
                .zip(&other.cells)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Total points player `i` contested: `sum_j (p_ij + p_ji)`.
    pub fn contested(&self, i: usize) -> f64 {
        (0..self.n).map(|j| self.get(i, j) + self.get(j, i)).sum()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(RatingError::PlayerOutOfRange {
                index: i,
                count: self.n,
            })
        }
    }

    pub(crate) fn set_raw(&mut self, i: usize, j: usize, value: f64) {
        self.cells[i * self.n + j] = value;
    }
}
