//! Elo-style ratings computed as fixed points.
//!
//! The classical Elo update compares results against expectations formed
//! from the *previous* rating, which overcompensates and makes the outcome
//! depend on update order. This crate instead computes the *self-justifying*
//! rating: the unique rating vector whose own expectations reproduce the
//! observed results, i.e. the fixed point of the classical Elo map. The
//! fixed point exists and is unique for every result matrix and every
//! dynamising parameter `k`, and an adaptive damped iteration finds it with
//! a certified precision bound and a provable loop budget.
//!
//! Module map:
//!
//! * [`rating`] / [`matrix`]: the rating space and result matrices.
//! * [`elo`]: the classical Elo map and its contraction machinery.
//! * [`solver`]: the adaptive fixed-point solver plus a plain damped
//!   reference solver.
//! * [`graph`]: result-graph connectivity, component-wise solving, and the
//!   large-`k` asymptote.
//! * [`ledger`]: per-period accumulation, the sequential classical rating
//!   for comparison, publishing, and inclusion gating.

pub mod elo;
pub mod error;
pub mod graph;
pub mod ledger;
pub mod matrix;
pub mod rating;
pub mod solver;

pub use elo::{classical_elo_map, contraction_bound, phi_step, residual, small_k_slope};
pub use error::{RatingError, Result};
pub use graph::{
    analyze, asymptotic_rating, restrict, solve_by_components, AsymptoticRating,
    ConnectivityReport, ResultGraph,
};
pub use ledger::{
    check_classical_convergence, gate_matrix, gate_players, publish, ClassicalTrace, GateReport,
    PeriodLedger, PlayerRegistry, PublishConfig, TraceVerdict, Weighting, CHESS_SIGMA,
};
pub use matrix::ResultMatrix;
pub use rating::Rating;
pub use solver::{
    default_epsilon, loop_bound, oracle_solve, solve, SolveOutcome, SolverConfig, DEFAULT_C,
};
