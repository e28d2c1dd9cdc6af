//! Result-graph connectivity and what it says about extreme ratings.
//!
//! The result graph has an edge `i -> j` whenever `p_ij > 0`. Ratings stay
//! bounded as `k` grows exactly when every weakly connected component is
//! strongly connected; one-sided domination (a group that only ever takes
//! points off another) sends the gap between them to infinity. Weak
//! components also decompose the fixed-point problem: the rating of the
//! whole is the sum of the ratings of the parts.

use rayon::prelude::*;

use crate::elo::classical_elo_map;
use crate::error::{ensure_positive, RatingError, Result};
use crate::matrix::ResultMatrix;
use crate::rating::Rating;
use crate::solver::{solve, SolveOutcome, SolverConfig};

/// Directed graph over players with an edge wherever points were taken.
#[derive(Debug, Clone)]
pub struct ResultGraph {
    out_edges: Vec<Vec<usize>>,
}

impl ResultGraph {
    pub fn from_results(p: &ResultMatrix) -> Self {
        let n = p.player_count();
        let mut out_edges = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                if i != j && p.get(i, j) > 0.0 {
                    out_edges[i].push(j);
                }
            }
        }
        Self { out_edges }
    }

    pub fn player_count(&self) -> usize {
        self.out_edges.len()
    }

    pub fn neighbours(&self, i: usize) -> &[usize] {
        &self.out_edges[i]
    }
}

/// Connectivity analysis of a result matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectivityReport {
    components: Vec<Vec<usize>>,
    strong_flags: Vec<bool>,
    bounded: bool,
}

impl ConnectivityReport {
    /// Weakly connected components; each sorted ascending, the list ordered
    /// by smallest member.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// Per-component flag: is the induced directed subgraph strongly
    /// connected? Singletons count as strongly connected.
    pub fn strong_flags(&self) -> &[bool] {
        &self.strong_flags
    }

    /// True when every component is strongly connected, i.e. ratings stay
    /// bounded for arbitrarily large `k`.
    pub fn bounded(&self) -> bool {
        self.bounded
    }
}

/// Computes weak components, per-component strong connectivity, and the
/// boundedness verdict for the result graph of `p`.
pub fn analyze(p: &ResultMatrix) -> ConnectivityReport {
    let n = p.player_count();
    let graph = ResultGraph::from_results(p);

    // Weak components: BFS over the undirected closure.
    let mut component_of = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut queue = Vec::new();
    for start in 0..n {
        if component_of[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        component_of[start] = id;
        queue.push(start);
        let mut members = vec![start];
        while let Some(v) = queue.pop() {
            for u in 0..n {
                if component_of[u] == usize::MAX && (p.get(v, u) > 0.0 || p.get(u, v) > 0.0) {
                    component_of[u] = id;
                    queue.push(u);
                    members.push(u);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }

    let scc_of = tarjan_scc_ids(&graph);
    let strong_flags: Vec<bool> = components
        .iter()
        .map(|members| {
            let first = scc_of[members[0]];
            members.iter().all(|&v| scc_of[v] == first)
        })
        .collect();
    let bounded = strong_flags.iter().all(|&f| f);

    ConnectivityReport {
        components,
        strong_flags,
        bounded,
    }
}

/// Iterative Tarjan SCC; returns the component id of each vertex.
fn tarjan_scc_ids(graph: &ResultGraph) -> Vec<usize> {
    let n = graph.player_count();
    let mut ids = vec![usize::MAX; n];
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut scc_count = 0usize;
    // Explicit DFS frames: (vertex, next out-edge offset).
    let mut frames: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        frames.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut edge)) = frames.last_mut() {
            if *edge < graph.neighbours(v).len() {
                let w = graph.neighbours(v)[*edge];
                *edge += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        ids[w] = scc_count;
                        if w == v {
                            break;
                        }
                    }
                    scc_count += 1;
                }
            }
        }
    }
    ids
}

/// Masks `p` to the subset `t`: cells survive only when both players are in
/// `t`. Indices must be in range and distinct.
pub fn restrict(p: &ResultMatrix, t: &[usize]) -> Result<ResultMatrix> {
    let n = p.player_count();
    let mut keep = vec![false; n];
    for &i in t {
        if i >= n {
            return Err(RatingError::PlayerOutOfRange { index: i, count: n });
        }
        if keep[i] {
            return Err(RatingError::DuplicatePlayer(i));
        }
        keep[i] = true;
    }
    let mut out = ResultMatrix::zero(n)?;
    for i in 0..n {
        if !keep[i] {
            continue;
        }
        for j in 0..n {
            if keep[j] {
                out.set_raw(i, j, p.get(i, j));
            }
        }
    }
    Ok(out)
}

/// Solves each weakly connected component independently (at precision
/// `epsilon / m` for `m` components, so the summed certificate still reads
/// `epsilon`) and sums the per-component ratings.
///
/// Components share no data, so they are solved in parallel; the merge order
/// is fixed by the component order, keeping the result deterministic.
pub fn solve_by_components(p: &ResultMatrix, cfg: &SolverConfig) -> Result<SolveOutcome> {
    let report = analyze(p);
    let m = report.components().len();
    let split_cfg = SolverConfig {
        epsilon: cfg.epsilon / m as f64,
        ..cfg.clone()
    };

    let outcomes: Vec<SolveOutcome> = report
        .components()
        .par_iter()
        .map(|members| solve(&restrict(p, members)?, &split_cfg))
        .collect::<Result<_>>()?;

    let n = p.player_count();
    let mut values = vec![0.0; n];
    let mut residual = 0.0;
    let mut loops_used = 0u64;
    let mut bound = 0u64;
    let mut xi_final = 0.0_f64;
    let mut stalled = false;
    for out in &outcomes {
        for (acc, v) in values.iter_mut().zip(out.rating.values()) {
            *acc += v;
        }
        residual += out.residual;
        loops_used = loops_used.saturating_add(out.loops_used);
        bound = bound.saturating_add(out.loop_bound);
        xi_final = xi_final.max(out.xi_final);
        stalled |= out.stalled;
    }
    // A single component is the whole problem again: same matrix, same
    // epsilon, so this reduces to a plain solve bit for bit.
    if m == 1 {
        return Ok(outcomes.into_iter().next().expect("one component"));
    }
    Ok(SolveOutcome {
        rating: Rating::centered(values)?,
        residual,
        loops_used,
        loop_bound: bound,
        xi_final,
        stalled,
    })
}

/// Where ratings head as `k` grows without bound.
#[derive(Debug, Clone, PartialEq)]
pub enum AsymptoticRating {
    /// The limit rating; per component it is the unique zero of the
    /// undynamised map `elo_1(., p)`.
    Bounded(Rating),
    /// Some component is not strongly connected; rating gaps grow without
    /// bound and no limit exists.
    Unbounded,
    /// The ladder hit its ceiling before reaching `tol`; carries the last
    /// iterate and the residual it achieved.
    Truncated { rating: Rating, achieved: f64 },
}

/// Largest exponent tried on the doubling ladder `k = 2^m`.
const LADDER_CEILING: u32 = 40;

/// Computes the large-`k` limit of the rating, or reports that none exists.
///
/// When the report says bounded, ratings are solved at `k = 2^m` for
/// `m = 0, 1, 2, ...` until successive solutions differ by less than `tol`
/// in L1 and the limit candidate zeroes the undynamised map to within `tol`.
/// Both checks are evaluated against `p` rescaled to unit maximum pair sum;
/// the limit itself is scale-invariant, and an absolute residual on the raw
/// scale would make the stopping point depend on the arbitrary points unit.
pub fn asymptotic_rating(p: &ResultMatrix, tol: f64) -> Result<AsymptoticRating> {
    ensure_positive("tol", tol)?;
    let report = analyze(p);
    if !report.bounded() {
        return Ok(AsymptoticRating::Unbounded);
    }
    let max_pair = p.max_pair_sum();
    if max_pair == 0.0 {
        return Ok(AsymptoticRating::Bounded(Rating::zero(p.player_count())?));
    }
    let unit = p.scaled(1.0 / max_pair)?;

    let mut previous: Option<Rating> = None;
    let mut achieved = f64::INFINITY;
    for m in 0..=LADDER_CEILING {
        let k = (2.0_f64).powi(m as i32);
        let cfg = SolverConfig::new(k, tol / 16.0)?;
        let rating = solve(&unit, &cfg)?.rating;
        if let Some(prev) = previous {
            let diff = rating.l1_distance(&prev);
            let condition = classical_elo_map(&rating, &unit, 1.0)?.l1_norm();
            achieved = diff.max(condition);
            if diff < tol && condition <= tol {
                return Ok(AsymptoticRating::Bounded(rating));
            }
        }
        previous = Some(rating);
    }
    Ok(AsymptoticRating::Truncated {
        rating: previous.expect("ladder ran at least once"),
        achieved,
    })
}
