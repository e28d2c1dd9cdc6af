//! Shared helpers for the integration suites: deterministic instance
//! generators and reference oracles that stay independent of the solver
//! implementation they check.

// Each test target compiles this module separately and uses its own subset.
#![allow(dead_code)]

use fixelo::{ResultMatrix, SolverConfig};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random results: `n` players, cells uniform in `[0, max_cell)`.
pub fn random_results(rng: &mut ChaCha8Rng, n: usize, max_cell: f64) -> ResultMatrix {
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

/// Block-diagonal results assembled from independent blocks.
pub fn block_diagonal(blocks: &[ResultMatrix]) -> ResultMatrix {
    let n: usize = blocks.iter().map(|b| b.player_count()).sum();
    let mut rows = vec![vec![0.0; n]; n];
    let mut offset = 0;
    for block in blocks {
        let m = block.player_count();
        for i in 0..m {
            for j in 0..m {
                rows[offset + i][offset + j] = block.get(i, j);
            }
        }
        offset += m;
    }
    ResultMatrix::from_rows(rows).expect("blocks are valid")
}

/// Ensures every positive cell has a positive reverse cell, which makes each
/// weak component strongly connected.
pub fn with_mutual_edges(p: &ResultMatrix, floor: f64) -> ResultMatrix {
    let n = p.player_count();
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            rows[i][j] = p.get(i, j);
        }
    }
    for i in 0..n {
        for j in 0..n {
            if rows[i][j] > 0.0 && rows[j][i] == 0.0 {
                rows[j][i] = floor;
            }
        }
    }
    ResultMatrix::from_rows(rows).expect("floored cells are valid")
}

/// Two-player reference: bisection on the on-hyperplane fixed-point equation
/// `x = k * (a - (a + b) / (1 + e^{-2x}))`, independent of the iterative
/// solvers.
pub fn duel_root(a: f64, b: f64, k: f64) -> f64 {
    let share = |t: f64| {
        if t >= 0.0 {
            let z = (-t).exp();
            z / (1.0 + z)
        } else {
            1.0 / (1.0 + t.exp())
        }
    };
    let f = |x: f64| k * (a - (a + b) * share(-2.0 * x)) - x;
    let (mut lo, mut hi) = (-700.0, 700.0);
    assert!(f(lo) > 0.0 && f(hi) < 0.0, "bisection bracket failed");
    for _ in 0..220 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn config(k: f64, epsilon: f64) -> SolverConfig {
    SolverConfig::new(k, epsilon).expect("valid test config")
}
