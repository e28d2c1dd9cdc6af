//! The four subcommands: solve, classical, analyze, compare.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde_json::json;

use fixelo::{
    analyze, asymptotic_rating, gate_matrix, publish, residual, solve, solve_by_components,
    AsymptoticRating, ClassicalTrace, PeriodLedger, PlayerRegistry, PublishConfig, Rating,
    ResultMatrix, SolveOutcome, SolverConfig, TraceVerdict, Weighting, CHESS_SIGMA,
};

use crate::ingest::{ingest_path, Ingested};
use crate::output::{csv as csv_rows, players_json, render_columns, sort_rows, table, PlayerRow};

/// Process failure classes with their exit codes.
pub enum CmdError {
    /// Exit 1: the input file was rejected.
    Ingest(String),
    /// Exit 2: the solver stalled at floating-point resolution or ran out of
    /// loops.
    Solver(String),
}

impl CmdError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CmdError::Ingest(_) => 1,
            CmdError::Solver(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CmdError::Ingest(m) | CmdError::Solver(m) => m,
        }
    }
}

fn solver_error(e: fixelo::RatingError) -> CmdError {
    CmdError::Solver(e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

fn parse_decay(raw: &str) -> Result<f64, String> {
    let value: f64 = raw.parse().map_err(|e| format!("{e}"))?;
    if value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(format!("decay factor must be in (0, 1), got {value}"))
    }
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Input CSV: period,player_a,player_b,points_a,points_b
    #[arg(long)]
    pub input: PathBuf,
    /// Dynamising parameter: how strongly results move ratings
    #[arg(long)]
    pub k: f64,
    /// Target precision (L1); defaults to 1e-9 * max(1, 2k||p||_1)
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Continuity parameter of the adaptive solver
    #[arg(long, default_value_t = fixelo::DEFAULT_C)]
    pub c: u32,
    /// Average published rating
    #[arg(long, default_value_t = 1500.0)]
    pub mu: f64,
    /// Published points per internal rating unit
    #[arg(long, default_value_t = CHESS_SIGMA)]
    pub sigma: f64,
    /// Geometric decay factor per period (equal weighting when absent)
    #[arg(long, value_parser = parse_decay)]
    pub decay: Option<f64>,
    /// Minimum points contested before a player is rated
    #[arg(long, default_value_t = 0.0)]
    pub min_games: f64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Solve each weakly connected component independently
    #[arg(long)]
    pub by_components: bool,
}

#[derive(Args, Debug)]
pub struct ClassicalArgs {
    #[command(flatten)]
    pub common: SolveArgs,
    /// Emit the per-period trajectory as CSV instead of the final table
    #[arg(long)]
    pub trace: bool,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Input CSV: period,player_a,player_b,points_a,points_b
    #[arg(long)]
    pub input: PathBuf,
    /// Period index to accumulate through (default: the last one)
    #[arg(long)]
    pub period: Option<usize>,
}

/// Precision used for the large-k limit in `analyze`.
const ASYMPTOTE_TOL: f64 = 1e-6;

struct Prepared {
    registry: PlayerRegistry,
    ledger: PeriodLedger,
    /// Accumulated matrix at the final period, before gating.
    accumulated: ResultMatrix,
    /// Gated matrix: excluded players' rows and columns zeroed.
    reduced: ResultMatrix,
    included: Vec<usize>,
    publish_cfg: PublishConfig,
    solver_cfg: SolverConfig,
}

fn weighting(args: &SolveArgs) -> Weighting {
    match args.decay {
        Some(factor) => Weighting::Geometric { factor },
        None => Weighting::Equal,
    }
}

fn prepare(args: &SolveArgs) -> Result<Option<Prepared>, CmdError> {
    let Ingested { registry, periods } =
        ingest_path(&args.input).map_err(|e| CmdError::Ingest(e.to_string()))?;
    if registry.is_empty() {
        return Ok(None);
    }
    let ledger = PeriodLedger::new(periods, weighting(args)).map_err(solver_error)?;
    let accumulated = ledger.accumulate(ledger.len() - 1).map_err(solver_error)?;
    let publish_cfg =
        PublishConfig::new(args.mu, args.sigma, args.min_games).map_err(solver_error)?;
    let gate = gate_matrix(&accumulated, &publish_cfg).map_err(solver_error)?;
    let epsilon = args
        .epsilon
        .unwrap_or_else(|| fixelo::default_epsilon(args.k, &gate.reduced));
    let solver_cfg = SolverConfig::new(args.k, epsilon)
        .map_err(solver_error)?
        .with_c(args.c);
    Ok(Some(Prepared {
        registry,
        ledger,
        accumulated,
        reduced: gate.reduced,
        included: gate.included,
        publish_cfg,
        solver_cfg,
    }))
}

fn empty_output(format: Format) {
    match format {
        Format::Table => print!("{}", table(&[])),
        Format::Csv => print!("{}", csv_rows(&[])),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({ "players": [] })).expect("static json")
        ),
    }
}

fn player_rows(prepared: &Prepared, rating: &Rating) -> Vec<PlayerRow> {
    let published = publish(rating, &prepared.publish_cfg);
    (0..prepared.registry.len())
        .map(|i| PlayerRow {
            id: prepared.registry.name(i).to_string(),
            rating: rating.get(i),
            published: prepared
                .included
                .contains(&i)
                .then(|| published[i]),
            games: prepared.accumulated.contested(i),
        })
        .collect()
}

fn certificate_json(outcome: &SolveOutcome, cfg: &SolverConfig) -> serde_json::Value {
    json!({
        "k": cfg.k,
        "epsilon": cfg.epsilon,
        "c": cfg.c,
        "residual": outcome.residual,
        "loops_used": outcome.loops_used,
        "loop_bound": outcome.loop_bound,
        "xi_final": outcome.xi_final,
        "stalled": outcome.stalled,
    })
}

fn stall_check(outcome: &SolveOutcome) -> Result<(), CmdError> {
    if outcome.stalled {
        Err(CmdError::Solver(format!(
            "solver stalled at floating-point resolution: certified residual {:e} (target {:e})",
            outcome.residual, outcome.residual / 16.0
        )))
    } else {
        Ok(())
    }
}

pub fn cmd_solve(args: &SolveArgs) -> Result<(), CmdError> {
    let Some(prepared) = prepare(args)? else {
        empty_output(args.format);
        return Ok(());
    };
    let outcome = if args.by_components {
        solve_by_components(&prepared.reduced, &prepared.solver_cfg)
    } else {
        solve(&prepared.reduced, &prepared.solver_cfg)
    }
    .map_err(solver_error)?;

    let mut rows = player_rows(&prepared, &outcome.rating);
    sort_rows(&mut rows);
    match args.format {
        Format::Table => print!("{}", table(&rows)),
        Format::Csv => print!("{}", csv_rows(&rows)),
        Format::Json => {
            let doc = json!({
                "certificate": certificate_json(&outcome, &prepared.solver_cfg),
                "mu": prepared.publish_cfg.mu,
                "sigma": prepared.publish_cfg.sigma,
                "min_games": prepared.publish_cfg.min_games,
                "players": players_json(&rows),
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("valid json"));
        }
    }
    stall_check(&outcome)
}

fn gated_ledger(prepared: &Prepared) -> Result<PeriodLedger, CmdError> {
    if prepared.included.len() == prepared.registry.len() {
        return Ok(prepared.ledger.clone());
    }
    let periods = prepared
        .ledger
        .periods()
        .iter()
        .map(|p| fixelo::restrict(p, &prepared.included))
        .collect::<fixelo::Result<Vec<_>>>()
        .map_err(solver_error)?;
    PeriodLedger::new(periods, prepared.ledger.weighting()).map_err(solver_error)
}

fn verdict_json(verdict: &TraceVerdict) -> serde_json::Value {
    match verdict {
        TraceVerdict::Converged(_) => json!({ "kind": "converged" }),
        TraceVerdict::Oscillating { period, attractors } => json!({
            "kind": "oscillating",
            "period": period,
            "attractors": attractors
                .iter()
                .map(|a| a.values().to_vec())
                .collect::<Vec<_>>(),
        }),
        TraceVerdict::Undetermined => json!({ "kind": "undetermined" }),
    }
}

fn verdict_line(verdict: &TraceVerdict) -> String {
    match verdict {
        TraceVerdict::Converged(_) => "verdict: converged".to_string(),
        TraceVerdict::Oscillating { period, attractors } => {
            let points: Vec<String> = attractors
                .iter()
                .map(|a| format!("{:.4}", a.get(0)))
                .collect();
            format!(
                "verdict: oscillating (period {period}, player-0 attractors {})",
                points.join(" / ")
            )
        }
        TraceVerdict::Undetermined => "verdict: undetermined".to_string(),
    }
}

fn trace_csv(registry: &PlayerRegistry, trace: &ClassicalTrace) -> String {
    let mut header = vec!["period".to_string()];
    header.extend(registry.names().iter().cloned());
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    writer.write_record(&header).expect("in-memory write");
    for (l, rating) in trace.ratings().iter().enumerate() {
        let mut record = vec![l.to_string()];
        record.extend(rating.values().iter().map(|v| v.to_string()));
        writer.write_record(&record).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

pub fn cmd_classical(args: &ClassicalArgs) -> Result<(), CmdError> {
    let Some(prepared) = prepare(&args.common)? else {
        if args.trace {
            println!("period");
        } else {
            empty_output(args.common.format);
        }
        return Ok(());
    };
    let ledger = gated_ledger(&prepared)?;
    let trace = ledger
        .classical_sequence(&prepared.solver_cfg)
        .map_err(solver_error)?;

    if args.trace {
        print!("{}", trace_csv(&prepared.registry, &trace));
        return Ok(());
    }

    let mut rows = player_rows(&prepared, trace.final_rating());
    sort_rows(&mut rows);
    match args.common.format {
        Format::Table => {
            print!("{}", table(&rows));
            println!("{}", verdict_line(trace.verdict()));
        }
        Format::Csv => {
            print!("{}", csv_rows(&rows));
            println!("# {}", verdict_line(trace.verdict()));
        }
        Format::Json => {
            let doc = json!({
                "k": prepared.solver_cfg.k,
                "epsilon": prepared.solver_cfg.epsilon,
                "verdict": verdict_json(trace.verdict()),
                "players": players_json(&rows),
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("valid json"));
        }
    }
    Ok(())
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), CmdError> {
    let Ingested { registry, periods } =
        ingest_path(&args.input).map_err(|e| CmdError::Ingest(e.to_string()))?;
    if registry.is_empty() {
        println!("no players");
        return Ok(());
    }
    let ledger = PeriodLedger::new(periods, Weighting::Equal).map_err(solver_error)?;
    let last = ledger.len() - 1;
    let period = args.period.unwrap_or(last);
    let accumulated = ledger.accumulate(period).map_err(solver_error)?;

    let report = analyze(&accumulated);
    println!("components:");
    for (idx, (members, strong)) in report
        .components()
        .iter()
        .zip(report.strong_flags())
        .enumerate()
    {
        let names: Vec<&str> = members.iter().map(|&i| registry.name(i)).collect();
        let tag = if *strong {
            "strongly connected"
        } else {
            "not strongly connected"
        };
        println!("  {idx}: {} [{tag}]", names.join(", "));
    }

    if !report.bounded() {
        println!("bounded: no");
        println!(
            "warning: one-sided results; expect unbounded growth of rating gaps as k increases"
        );
        return Ok(());
    }
    println!("bounded: yes");

    match asymptotic_rating(&accumulated, ASYMPTOTE_TOL).map_err(solver_error)? {
        AsymptoticRating::Bounded(rating) => {
            println!("asymptotic ratings:");
            let mut cells = vec![["player".to_string(), "rating".to_string()]];
            for i in 0..registry.len() {
                cells.push([registry.name(i).to_string(), format!("{:.6}", rating.get(i))]);
            }
            print!("{}", render_columns(&cells));
            Ok(())
        }
        AsymptoticRating::Unbounded => unreachable!("bounded was checked above"),
        AsymptoticRating::Truncated { rating, achieved } => {
            println!("asymptotic ratings (not converged, residual {achieved:e}):");
            let mut cells = vec![["player".to_string(), "rating".to_string()]];
            for i in 0..registry.len() {
                cells.push([registry.name(i).to_string(), format!("{:.6}", rating.get(i))]);
            }
            print!("{}", render_columns(&cells));
            Err(CmdError::Solver(format!(
                "asymptote not reached: residual {achieved:e} above tolerance {ASYMPTOTE_TOL:e}"
            )))
        }
    }
}

pub fn cmd_compare(args: &SolveArgs) -> Result<(), CmdError> {
    let Some(prepared) = prepare(args)? else {
        empty_output(args.format);
        return Ok(());
    };
    let ledger = gated_ledger(&prepared)?;
    let trace = ledger
        .classical_sequence(&prepared.solver_cfg)
        .map_err(solver_error)?;
    let classical = trace.final_rating();
    let fixed = solve(&prepared.reduced, &prepared.solver_cfg).map_err(solver_error)?;

    let k = prepared.solver_cfg.k;
    let classical_residual = residual(classical, &prepared.reduced, k).map_err(solver_error)?;
    let fixed_residual = fixed.residual;
    let gap = classical.l1_distance(&fixed.rating);

    match args.format {
        Format::Table | Format::Csv => {
            if args.format == Format::Table {
                let mut cells = vec![[
                    "player".to_string(),
                    "classical".to_string(),
                    "self_justifying".to_string(),
                ]];
                for i in 0..prepared.registry.len() {
                    cells.push([
                        prepared.registry.name(i).to_string(),
                        format!("{:.6}", classical.get(i)),
                        format!("{:.6}", fixed.rating.get(i)),
                    ]);
                }
                print!("{}", render_columns(&cells));
            } else {
                println!("player,classical,self_justifying");
                for i in 0..prepared.registry.len() {
                    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
                    writer
                        .write_record([
                            prepared.registry.name(i).to_string(),
                            format!("{:.6}", classical.get(i)),
                            format!("{:.6}", fixed.rating.get(i)),
                        ])
                        .expect("in-memory write");
                    print!(
                        "{}",
                        String::from_utf8(writer.into_inner().expect("in-memory flush"))
                            .expect("csv is utf-8")
                    );
                }
            }
            println!("l1 difference: {gap:.6}");
            println!("classical residual: {classical_residual:.6}");
            println!("self-justifying residual: {fixed_residual:.9}");
        }
        Format::Json => {
            let players: Vec<serde_json::Value> = (0..prepared.registry.len())
                .map(|i| {
                    json!({
                        "id": prepared.registry.name(i),
                        "classical": classical.get(i),
                        "self_justifying": fixed.rating.get(i),
                    })
                })
                .collect();
            let doc = json!({
                "k": k,
                "l1_difference": gap,
                "classical_residual": classical_residual,
                "self_justifying_residual": fixed_residual,
                "players": players,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("valid json"));
        }
    }
    stall_check(&fixed)
}
