//! Fixed-point solvers for the self-justifying rating.
//!
//! Two routes to the same point:
//!
//! * [`oracle_solve`] iterates the damped map at the fixed safe factor
//!   `xi* = G / (G + 1)`. Convergence is plain Banach iteration; slow but
//!   beyond doubt, which makes it the reference the adaptive solver is
//!   checked against.
//! * [`solve`] runs the adaptive scheme: it keeps trying smaller damping
//!   factors (squaring `xi`) while the residual keeps shrinking, and backs
//!   off (square root, then a continuity window of `c` loops) whenever a
//!   loop fails to beat `xi` times the best residual so far. Termination
//!   within [`loop_bound`] loops is guaranteed in exact arithmetic.
//!
//! Every returned rating carries its residual `||x - elo_k(x, p)||_1`, which
//! is a certified upper bound on the L1 distance to the true fixed point.

use crate::elo::{contraction_bound, map_into};
use crate::error::{ensure_positive, RatingError, Result};
use crate::matrix::ResultMatrix;
use crate::rating::{l1_diff, recenter, Rating};

/// Default continuity parameter: after a failed damping reduction, hold `xi`
/// for this many loops before trying to reduce it again.
pub const DEFAULT_C: u32 = 4;

/// Parameters for the fixed-point solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Dynamising parameter: how strongly results move ratings.
    pub k: f64,
    /// Target precision: the returned residual is at most this (L1).
    pub epsilon: f64,
    /// Continuity parameter for the adaptive damping schedule.
    pub c: u32,
    /// Hard cap on solver loops. `None` derives `10 * loop_bound` at solve
    /// time; the bound itself depends on the instance.
    pub max_loops: Option<u64>,
}

impl SolverConfig {
    pub fn new(k: f64, epsilon: f64) -> Result<Self> {
        ensure_positive("k", k)?;
        ensure_positive("epsilon", epsilon)?;
        Ok(Self {
            k,
            epsilon,
            c: DEFAULT_C,
            max_loops: None,
        })
    }

    /// Config with the default precision for `p`: `1e-9 * max(1, 2k||p||_1)`,
    /// i.e. nine digits relative to the largest possible first adjustment.
    pub fn auto(k: f64, p: &ResultMatrix) -> Result<Self> {
        ensure_positive("k", k)?;
        Self::new(k, default_epsilon(k, p))
    }

    pub fn with_c(mut self, c: u32) -> Self {
        self.c = c;
        self
    }

    pub fn with_max_loops(mut self, cap: u64) -> Self {
        self.max_loops = Some(cap.max(1));
        self
    }

    fn effective_cap(&self, bound: u64) -> u64 {
        self.max_loops
            .unwrap_or_else(|| bound.saturating_mul(10))
            .max(1)
    }
}

/// The default library precision for results `p` at parameter `k`.
pub fn default_epsilon(k: f64, p: &ResultMatrix) -> f64 {
    1e-9 * (2.0 * k * p.l1_norm()).max(1.0)
}

/// Outcome of a solve: the rating plus its certificate and loop accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    /// The computed rating.
    pub rating: Rating,
    /// Certified bound on the distance to the true fixed point:
    /// `||rating - elo_k(rating, p)||_1`.
    pub residual: f64,
    /// Loops the solver actually ran.
    pub loops_used: u64,
    /// A-priori loop bound for this instance (see [`loop_bound`]).
    pub loop_bound: u64,
    /// Damping factor when the solver stopped.
    pub xi_final: f64,
    /// True when progress stalled at floating-point resolution before the
    /// residual reached `epsilon`; the rating then carries the best certified
    /// residual attained (at most `16 * epsilon`).
    pub stalled: bool,
}

/// A-priori bound on the number of solver loops:
///
/// ```text
/// 1                                                if 2 k ||p||_1 <= eps
/// ceil( ceil((G + 1) ln(2 k ||p||_1 / eps)) * (c + 2) / (c + 1) ) + 1
/// ```
pub fn loop_bound(p: &ResultMatrix, cfg: &SolverConfig) -> u64 {
    let amplitude = 2.0 * cfg.k * p.l1_norm();
    if amplitude <= cfg.epsilon {
        return 1;
    }
    let n = p.player_count() as f64;
    let g = cfg.k * (n - 1.0) / 4.0 * p.max_pair_sum();
    let inner = ((g + 1.0) * (amplitude / cfg.epsilon).ln()).ceil();
    let c = cfg.c as f64;
    let outer = (inner * (c + 2.0) / (c + 1.0)).ceil();
    (outer as u64).saturating_add(1)
}

/// Reference solver: damped iteration at the fixed safe factor
/// `xi* = G / (G + 1)` from the zero rating until the residual certificate
/// drops to `epsilon`.
pub fn oracle_solve(p: &ResultMatrix, cfg: &SolverConfig) -> Result<SolveOutcome> {
    ensure_positive("k", cfg.k)?;
    ensure_positive("epsilon", cfg.epsilon)?;
    let n = p.player_count();
    let bound = loop_bound(p, cfg);
    let cap = cfg.effective_cap(bound);
    let (_, xi) = contraction_bound(p, cfg.k)?;

    let mut x = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut loops = 0u64;
    loop {
        loops += 1;
        map_into(&x, p, cfg.k, &mut e);
        let d = l1_diff(&x, &e);
        if d <= cfg.epsilon {
            return Ok(SolveOutcome {
                rating: Rating::centered(x)?,
                residual: d,
                loops_used: loops,
                loop_bound: bound,
                xi_final: xi,
                stalled: false,
            });
        }
        if loops >= cap {
            return Err(RatingError::LoopLimit {
                cap,
                residual: d,
                epsilon: cfg.epsilon,
            });
        }
        for i in 0..n {
            x[i] = xi * x[i] + (1.0 - xi) * e[i];
        }
        recenter(&mut x);
    }
}

/// Adaptive solver. Returns a rating whose residual certificate is at most
/// `epsilon`, within [`loop_bound`] loops, unless floating-point round-off
/// stalls the iteration first (see [`SolveOutcome::stalled`]).
pub fn solve(p: &ResultMatrix, cfg: &SolverConfig) -> Result<SolveOutcome> {
    ensure_positive("k", cfg.k)?;
    ensure_positive("epsilon", cfg.epsilon)?;
    let n = p.player_count();
    let bound = loop_bound(p, cfg);
    let cap = cfg.effective_cap(bound);
    let stall_window = 64u64.max(bound.saturating_mul(4));
    let (_, xi_star) = contraction_bound(p, cfg.k)?;

    let mut x = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut xi = xi_star;
    let mut w = 0u32;
    let mut d_perm = f64::INFINITY;
    let mut x_perm = vec![0.0; n];
    let mut e_perm = vec![0.0; n];
    let mut stale = 0u64;
    let mut loops = 0u64;

    loop {
        loops += 1;
        map_into(&x, p, cfg.k, &mut e);
        let d = l1_diff(&x, &e);
        if d <= cfg.epsilon {
            return Ok(SolveOutcome {
                rating: Rating::centered(x)?,
                residual: d,
                loops_used: loops,
                loop_bound: bound,
                xi_final: xi,
                stalled: false,
            });
        }

        // The comparison is false on the first loop: d is finite and d_perm
        // starts at infinity (0 * inf compares as NaN when xi == 0).
        if d > xi * d_perm {
            xi = xi.sqrt();
            w = cfg.c;
        } else if w > 0 {
            w -= 1;
        } else {
            xi = xi * xi;
        }

        if d < d_perm {
            x_perm.copy_from_slice(&x);
            e_perm.copy_from_slice(&e);
            d_perm = d;
            stale = 0;
        } else {
            stale += 1;
            // Termination is proven for exact arithmetic only. Near machine
            // precision the iterates can cycle without improving; hand back
            // the best certified rating instead of spinning to the cap.
            if stale >= stall_window && d_perm <= 16.0 * cfg.epsilon {
                return Ok(SolveOutcome {
                    rating: Rating::centered(x_perm)?,
                    residual: d_perm,
                    loops_used: loops,
                    loop_bound: bound,
                    xi_final: xi,
                    stalled: true,
                });
            }
        }

        if loops >= cap {
            return Err(RatingError::LoopLimit {
                cap,
                residual: d_perm.min(d),
                epsilon: cfg.epsilon,
            });
        }

        for i in 0..n {
            x[i] = xi * x_perm[i] + (1.0 - xi) * e_perm[i];
        }
        recenter(&mut x);
    }
}
