//! The classical Elo map and the contraction machinery built on top of it.
//!
//! For a rating `x` and results `p`, the map compares the points each player
//! gained with the points a logistic model expects from the rating gaps:
//!
//! ```text
//! elo_k(x, p)_i = k * sum_j ( p_ij - (p_ij + p_ji) / (1 + exp(x_j - x_i)) )
//! ```
//!
//! The pairwise terms are antisymmetric, so the output sums to zero and its
//! L1 norm never exceeds `2 k ||p||_1`. Damping the map with a factor
//! `xi = G / (G + 1)`, `G = k (n - 1) / 4 * max_ij (p_ij + p_ji)`, makes it a
//! contraction on the rating space, which is what the fixed-point solvers in
//! [`crate::solver`] exploit.

use crate::error::{ensure_positive, RatingError, Result};
use crate::matrix::ResultMatrix;
use crate::rating::{l1_diff, Rating};

/// `1 / (1 + exp(t))`, the expected share of a contested point for the
/// player whose rating leads by `-t`.
///
/// Evaluated so that `exp` only ever sees a non-positive argument; the naive
/// form overflows once ratings drift a few hundred units apart.
pub(crate) fn expected_share(t: f64) -> f64 {
    if t >= 0.0 {
        let z = (-t).exp();
        z / (1.0 + z)
    } else {
        1.0 / (1.0 + t.exp())
    }
}

/// Computes the map into a caller-provided buffer. No validation; the solver
/// calls this once per loop.
pub(crate) fn map_into(x: &[f64], p: &ResultMatrix, k: f64, out: &mut [f64]) {
    let n = x.len();
    out.fill(0.0);
    for i in 0..n {
        for j in (i + 1)..n {
            let pij = p.get(i, j);
            let pji = p.get(j, i);
            if pij == 0.0 && pji == 0.0 {
                continue;
            }
            let u = k * (pij - (pij + pji) * expected_share(x[j] - x[i]));
            out[i] += u;
            out[j] -= u;
        }
    }
}

fn check_pair(x: &Rating, p: &ResultMatrix) -> Result<()> {
    if x.len() != p.player_count() {
        return Err(RatingError::DimensionMismatch {
            rating: x.len(),
            results: p.player_count(),
        });
    }
    Ok(())
}

/// The classical Elo adjustment for rating `x` under results `p` with
/// dynamising parameter `k`.
///
/// Returns a zero-sum vector with `||elo||_1 <= 2 k ||p||_1`.
pub fn classical_elo_map(x: &Rating, p: &ResultMatrix, k: f64) -> Result<Rating> {
    check_pair(x, p)?;
    ensure_positive("k", k)?;
    let mut out = vec![0.0; x.len()];
    map_into(x.values(), p, k, &mut out);
    Ok(Rating::from_map_output(out))
}

/// `||x - elo_k(x, p)||_1`: how far `x` is from justifying itself.
///
/// This is a certified upper bound on the L1 distance from `x` to the unique
/// fixed point of the map, so any iterate carries its own precision
/// certificate.
pub fn residual(x: &Rating, p: &ResultMatrix, k: f64) -> Result<f64> {
    let image = classical_elo_map(x, p, k)?;
    Ok(l1_diff(x.values(), image.values()))
}

/// The contraction constant `G = k (n - 1) / 4 * max_ij (p_ij + p_ji)` and
/// the safe damping factor `xi* = G / (G + 1)`.
///
/// Damping with any `xi in [xi*, 1)` contracts L1 distances by `xi`.
pub fn contraction_bound(p: &ResultMatrix, k: f64) -> Result<(f64, f64)> {
    ensure_positive("k", k)?;
    let n = p.player_count() as f64;
    let g = k * (n - 1.0) / 4.0 * p.max_pair_sum();
    Ok((g, g / (g + 1.0)))
}

/// One damped step `xi * x + (1 - xi) * elo_k(x, p)`.
///
/// Fixed points are the same for every `xi in [0, 1)`: exactly the ratings
/// that reproduce the results.
pub fn phi_step(x: &Rating, p: &ResultMatrix, k: f64, xi: f64) -> Result<Rating> {
    if !(0.0..1.0).contains(&xi) {
        return Err(RatingError::OutOfRange {
            what: "xi",
            constraint: "in [0, 1)",
            value: xi,
        });
    }
    let image = classical_elo_map(x, p, k)?;
    let out = x
        .values()
        .iter()
        .zip(image.values())
        .map(|(xv, ev)| xi * xv + (1.0 - xi) * ev)
        .collect();
    Ok(Rating::from_map_output(out))
}

/// The limit of `elo_k(p) / k` as `k` shrinks: each player's average point
/// surplus, `sum_j (p_ij - p_ji) / 2`.
pub fn small_k_slope(p: &ResultMatrix) -> Rating {
    let n = p.player_count();
    let mut out = vec![0.0; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let half = (p.get(i, j) - p.get(j, i)) / 2.0;
            out[i] += half;
            out[j] -= half;
        }
    }
    Rating::from_map_output(out)
}
