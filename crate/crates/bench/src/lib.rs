//! Deterministic instance generators shared by the benchmarks.

use fixelo::ResultMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Dense random results: every ordered pair gets points in `[0, max_cell)`.
pub fn dense_results(seed: u64, n: usize, max_cell: f64) -> ResultMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                rows[i][j] = rng.gen_range(0.0..max_cell);
            }
        }
    }
    ResultMatrix::from_rows(rows).expect("generated cells are valid")
}

/// Sparse league: each player meets a handful of neighbours, so per-player
/// point totals stay capped as `n` grows.
pub fn league_results(seed: u64, n: usize, rounds: usize) -> ResultMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = ResultMatrix::zero(n).expect("n >= 2");
    for r in 1..=rounds {
        for i in 0..n {
            let j = (i + r) % n;
            if i == j {
                continue;
            }
            let a = rng.gen_range(0.0..2.0);
            m.add_points(i, j, a).expect("valid points");
            m.add_points(j, i, 2.0 - a).expect("valid points");
        }
    }
    m
}
