//! Period bookkeeping: the player registry, per-period result accumulation
//! with equal or geometrically decaying weights, the sequential classical
//! Elo for comparison, and the published-rating transform.

use std::collections::HashMap;

use crate::elo::classical_elo_map;
use crate::error::{ensure_positive, RatingError, Result};
use crate::graph::{asymptotic_rating, AsymptoticRating};
use crate::matrix::ResultMatrix;
use crate::rating::{recenter, Rating};
use crate::solver::{solve, SolveOutcome, SolverConfig};

/// Chess-style deviation factor: one class interval of 200 published points
/// per half unit of internal rating.
pub const CHESS_SIGMA: f64 = 400.0 / std::f64::consts::LN_10;

/// Maps opaque player identifiers to dense indices in first-seen order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlayerRegistry {
    ids: Vec<String>,
    index: HashMap<String, usize>,
}

impl PlayerRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the index for `id`, assigning the next free one on first
    /// sight. Indices never change afterwards.
    pub fn intern(&mut self, id: &str) -> usize {
        if let Some(&i) = self.index.get(id) {
            return i;
        }
        let i = self.ids.len();
        self.ids.push(id.to_string());
        self.index.insert(id.to_string(), i);
        i
    }

    pub fn lookup(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.ids[index]
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.ids
    }
}

/// How past periods count towards the current rating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weighting {
    /// Every period counts fully: `q^l = sum_i p^i`.
    Equal,
    /// Older periods decay geometrically: `q^l = sum_i f^(l-i) p^i`.
    Geometric { factor: f64 },
}

/// An ordered sequence of per-period result matrices plus the weighting
/// used to accumulate them.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodLedger {
    periods: Vec<ResultMatrix>,
    weighting: Weighting,
}

impl PeriodLedger {
    pub fn new(periods: Vec<ResultMatrix>, weighting: Weighting) -> Result<Self> {
        if let Weighting::Geometric { factor } = weighting {
            if !factor.is_finite() || factor <= 0.0 || factor >= 1.0 {
                return Err(RatingError::OutOfRange {
                    what: "decay factor",
                    constraint: "in (0, 1)",
                    value: factor,
                });
            }
        }
        if let Some(first) = periods.first() {
            let n = first.player_count();
            for p in &periods {
                if p.player_count() != n {
                    return Err(RatingError::MixedPeriodSizes {
                        first: n,
                        found: p.player_count(),
                    });
                }
            }
        }
        Ok(Self { periods, weighting })
    }

    pub fn periods(&self) -> &[ResultMatrix] {
        &self.periods
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }

    pub fn player_count(&self) -> Result<usize> {
        self.periods
            .first()
            .map(|p| p.player_count())
            .ok_or(RatingError::EmptyLedger)
    }

    /// The accumulated results `q^l` up to and including period `l`.
    ///
    /// Computed by the telescoping recurrence `q^l = f * q^(l-1) + p^l`
    /// (with `f = 1` for equal weighting).
    pub fn accumulate(&self, l: usize) -> Result<ResultMatrix> {
        if l >= self.periods.len() {
            return Err(RatingError::PeriodOutOfRange {
                index: l,
                count: self.periods.len(),
            });
        }
        let mut q = self.periods[0].clone();
        for p in &self.periods[1..=l] {
            q = match self.weighting {
                Weighting::Equal => q.merged(p)?,
                Weighting::Geometric { factor } => q.scaled(factor)?.merged(p)?,
            };
        }
        Ok(q)
    }

    /// The rating standing at the end of period `l`: a fresh solve of the
    /// accumulated results. No previously computed rating enters.
    pub fn rate_period(&self, l: usize, cfg: &SolverConfig) -> Result<SolveOutcome> {
        solve(&self.accumulate(l)?, cfg)
    }

    /// Runs the sequential classical update `x^(l+1) = x^l + elo_k(x^l, p^l)`
    /// from zero through every period and classifies the tail behaviour.
    pub fn classical_sequence(&self, cfg: &SolverConfig) -> Result<ClassicalTrace> {
        let n = self.player_count()?;
        let mut ratings = Vec::with_capacity(self.periods.len() + 1);
        ratings.push(Rating::zero(n)?);
        for p in &self.periods {
            let current = ratings.last().expect("trace starts with zero");
            let step = classical_elo_map(current, p, cfg.k)?;
            let mut next: Vec<f64> = current
                .values()
                .iter()
                .zip(step.values())
                .map(|(x, e)| x + e)
                .collect();
            recenter(&mut next);
            ratings.push(Rating::new(next)?);
        }
        let verdict = classify_trace(&ratings, cfg.epsilon);
        Ok(ClassicalTrace { ratings, verdict })
    }
}

/// Tail behaviour of a classical trajectory.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceVerdict {
    /// The tail settled: every pair of recent iterates is within epsilon.
    Converged(Rating),
    /// The tail alternates between two clusters.
    Oscillating {
        period: usize,
        attractors: Vec<Rating>,
    },
    Undetermined,
}

/// The classical trajectory `x^0 = 0, x^(l+1) = x^l + elo_k(x^l, p^l)`,
/// one entry per period boundary, plus the tail classification.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalTrace {
    ratings: Vec<Rating>,
    verdict: TraceVerdict,
}

impl ClassicalTrace {
    pub fn ratings(&self) -> &[Rating] {
        &self.ratings
    }

    pub fn final_rating(&self) -> &Rating {
        self.ratings.last().expect("trace holds at least x^0")
    }

    pub fn verdict(&self) -> &TraceVerdict {
        &self.verdict
    }
}

/// Window of trailing iterates examined by the verdict.
const VERDICT_WINDOW: usize = 20;
/// Minimum separation between oscillation clusters, in epsilons.
const CLUSTER_SEPARATION: f64 = 10.0;

fn classify_trace(ratings: &[Rating], epsilon: f64) -> TraceVerdict {
    let window = ratings.len().min(VERDICT_WINDOW);
    if window < 2 {
        return TraceVerdict::Undetermined;
    }
    let start = ratings.len() - window;
    let tail = &ratings[start..];

    let max_pairwise = |xs: &[&Rating]| -> f64 {
        let mut max = 0.0_f64;
        for (a, x) in xs.iter().enumerate() {
            for y in &xs[a + 1..] {
                max = max.max(x.l1_distance(y));
            }
        }
        max
    };

    let all: Vec<&Rating> = tail.iter().collect();
    if max_pairwise(&all) < epsilon {
        return TraceVerdict::Converged(ratings.last().expect("non-empty").clone());
    }

    // Period-2 test: split the window by absolute index parity.
    let evens: Vec<&Rating> = tail
        .iter()
        .enumerate()
        .filter(|(off, _)| (start + off) % 2 == 0)
        .map(|(_, r)| r)
        .collect();
    let odds: Vec<&Rating> = tail
        .iter()
        .enumerate()
        .filter(|(off, _)| (start + off) % 2 == 1)
        .map(|(_, r)| r)
        .collect();
    if evens.len() >= 2 && odds.len() >= 2 {
        let even_tight = max_pairwise(&evens) < epsilon;
        let odd_tight = max_pairwise(&odds) < epsilon;
        let last_even = *evens.last().expect("checked non-empty");
        let last_odd = *odds.last().expect("checked non-empty");
        if even_tight && odd_tight && last_even.l1_distance(last_odd) >= CLUSTER_SEPARATION * epsilon
        {
            return TraceVerdict::Oscillating {
                period: 2,
                attractors: vec![last_even.clone(), last_odd.clone()],
            };
        }
    }
    TraceVerdict::Undetermined
}

/// When the classical iteration on constantly repeated results `p` has
/// converged, its limit must be the large-`k` asymptote (both are the unique
/// zero of the undynamised map). Returns whether the two agree within a
/// tolerance derived from the solver precision, or `None` when the trace did
/// not converge so there is nothing to check.
///
/// The trace is replayed against `p` first; a trace that was not produced by
/// repeating `p` is rejected.
pub fn check_classical_convergence(
    trace: &ClassicalTrace,
    p: &ResultMatrix,
    cfg: &SolverConfig,
) -> Result<Option<bool>> {
    let n = p.player_count();
    let replay_tol = 1e-9 * (1.0 + p.l1_norm());
    if trace.ratings.is_empty()
        || trace.ratings[0].len() != n
        || trace.ratings[0].l1_norm() > replay_tol
    {
        return Err(RatingError::NonConstantLedger);
    }
    for pair in trace.ratings.windows(2) {
        let step = classical_elo_map(&pair[0], p, cfg.k)?;
        let mut expected: Vec<f64> = pair[0]
            .values()
            .iter()
            .zip(step.values())
            .map(|(x, e)| x + e)
            .collect();
        recenter(&mut expected);
        let drift = crate::rating::l1_diff(&expected, pair[1].values());
        if drift > replay_tol {
            return Err(RatingError::NonConstantLedger);
        }
    }

    let TraceVerdict::Converged(limit) = trace.verdict() else {
        return Ok(None);
    };
    let tol = cfg.epsilon.max(1e-8);
    let agreement = 10.0 * (tol + cfg.epsilon);
    match asymptotic_rating(p, tol)? {
        AsymptoticRating::Bounded(asymptote) => {
            Ok(Some(limit.l1_distance(&asymptote) <= agreement))
        }
        _ => Ok(Some(false)),
    }
}

/// Affine transform onto the published scale, plus the inclusion threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct PublishConfig {
    /// Average published rating.
    pub mu: f64,
    /// Deviation factor: published points per internal unit.
    pub sigma: f64,
    /// Minimum total points a player must have contested to be rated.
    pub min_games: f64,
}

impl PublishConfig {
    pub fn new(mu: f64, sigma: f64, min_games: f64) -> Result<Self> {
        crate::error::ensure_finite("mu", mu)?;
        ensure_positive("sigma", sigma)?;
        crate::error::ensure_finite("min_games", min_games)?;
        if min_games < 0.0 {
            return Err(RatingError::OutOfRange {
                what: "min_games",
                constraint: "non-negative",
                value: min_games,
            });
        }
        Ok(Self {
            mu,
            sigma,
            min_games,
        })
    }
}

impl Default for PublishConfig {
    fn default() -> Self {
        Self {
            mu: 1500.0,
            sigma: CHESS_SIGMA,
            min_games: 0.0,
        }
    }
}

/// The published rating `mu + sigma * x_i` per player.
pub fn publish(x: &Rating, cfg: &PublishConfig) -> Vec<f64> {
    x.values().iter().map(|&v| cfg.mu + cfg.sigma * v).collect()
}

/// Inclusion gate at period `l`: players are rated only once they have
/// contested at least `min_games` points on the accumulated matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GateReport {
    /// Indices of rated players, ascending.
    pub included: Vec<usize>,
    /// Indices of unrated players, ascending.
    pub excluded: Vec<usize>,
    /// The accumulated matrix with excluded players' rows and columns
    /// zeroed.
    pub reduced: ResultMatrix,
}

/// Applies the inclusion threshold to the accumulated results at period `l`.
pub fn gate_players(ledger: &PeriodLedger, l: usize, cfg: &PublishConfig) -> Result<GateReport> {
    let q = ledger.accumulate(l)?;
    gate_matrix(&q, cfg)
}

/// Same gate applied directly to an accumulated matrix.
pub fn gate_matrix(q: &ResultMatrix, cfg: &PublishConfig) -> Result<GateReport> {
    let n = q.player_count();
    let mut included = Vec::new();
    let mut excluded = Vec::new();
    for i in 0..n {
        if q.contested(i) >= cfg.min_games {
            included.push(i);
        } else {
            excluded.push(i);
        }
    }
    let reduced = crate::graph::restrict(q, &included)?;
    Ok(GateReport {
        included,
        excluded,
        reduced,
    })
}
