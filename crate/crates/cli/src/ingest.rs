//! CSV ingestion: `period,player_a,player_b,points_a,points_b` rows become a
//! player registry (first-seen order) and one result matrix per period.

use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use fixelo::{PlayerRegistry, ResultMatrix};

pub const HEADER: [&str; 5] = ["period", "player_a", "player_b", "points_a", "points_b"];

/// A rejected input file; the message carries the offending line number.
#[derive(Debug)]
pub struct IngestError(pub String);

impl fmt::Display for IngestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for IngestError {}

/// Parsed input: the registry plus one matrix per period. Period indices in
/// the file may have gaps; the missing periods are empty matrices.
#[derive(Debug)]
pub struct Ingested {
    pub registry: PlayerRegistry,
    pub periods: Vec<ResultMatrix>,
}

impl Ingested {
    pub fn is_empty(&self) -> bool {
        self.registry.is_empty()
    }
}

pub fn ingest_path(path: &Path) -> Result<Ingested, IngestError> {
    let file = File::open(path)
        .map_err(|e| IngestError(format!("cannot open {}: {e}", path.display())))?;
    ingest_reader(file)
}

pub fn ingest_reader<R: Read>(reader: R) -> Result<Ingested, IngestError> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = csv
        .headers()
        .map_err(|e| IngestError(format!("cannot read header: {e}")))?;
    if headers.iter().ne(HEADER) {
        return Err(IngestError(format!(
            "header must be `{}`, got `{}`",
            HEADER.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }

    struct Row {
        period: usize,
        a: usize,
        b: usize,
        points_a: f64,
        points_b: f64,
    }

    let mut registry = PlayerRegistry::new();
    let mut rows = Vec::new();
    let mut max_period = 0usize;
    for record in csv.records() {
        let record = record.map_err(|e| match e.position() {
            Some(pos) => IngestError(format!("line {}: malformed row: {e}", pos.line())),
            None => IngestError(format!("malformed row: {e}")),
        })?;
        let line = record
            .position()
            .map(|p| p.line())
            .unwrap_or_default();
        let field = |idx: usize, name: &str| -> Result<String, IngestError> {
            record
                .get(idx)
                .map(str::to_string)
                .ok_or_else(|| IngestError(format!("line {line}: missing field `{name}`")))
        };
        if record.len() != HEADER.len() {
            return Err(IngestError(format!(
                "line {line}: expected {} fields, got {}",
                HEADER.len(),
                record.len()
            )));
        }

        let period: usize = field(0, "period")?.parse().map_err(|e| {
            IngestError(format!("line {line}: period must be a non-negative integer ({e})"))
        })?;
        let player_a = field(1, "player_a")?;
        let player_b = field(2, "player_b")?;
        if player_a == player_b {
            return Err(IngestError(format!(
                "line {line}: player_a and player_b are both `{player_a}`"
            )));
        }
        let parse_points = |idx: usize, name: &str| -> Result<f64, IngestError> {
            let raw = field(idx, name)?;
            let value: f64 = raw
                .parse()
                .map_err(|e| IngestError(format!("line {line}: {name} is not a number ({e})")))?;
            if !value.is_finite() {
                return Err(IngestError(format!(
                    "line {line}: {name} must be finite, got {value}"
                )));
            }
            if value < 0.0 {
                return Err(IngestError(format!(
                    "line {line}: {name} must be non-negative, got {value}"
                )));
            }
            Ok(value)
        };
        let points_a = parse_points(3, "points_a")?;
        let points_b = parse_points(4, "points_b")?;

        let a = registry.intern(&player_a);
        let b = registry.intern(&player_b);
        max_period = max_period.max(period);
        rows.push(Row {
            period,
            a,
            b,
            points_a,
            points_b,
        });
    }

    if registry.is_empty() {
        return Ok(Ingested {
            registry,
            periods: Vec::new(),
        });
    }

    let n = registry.len();
    let mut periods = Vec::with_capacity(max_period + 1);
    for _ in 0..=max_period {
        periods.push(ResultMatrix::zero(n).expect("ingest always sees >= 2 players"));
    }
    for row in rows {
        // Rows for the same pair and period sum up.
        periods[row.period]
            .add_points(row.a, row.b, row.points_a)
            .expect("validated points");
        periods[row.period]
            .add_points(row.b, row.a, row.points_b)
            .expect("validated points");
    }

    Ok(Ingested { registry, periods })
}

/// Writes a ledger back out in the ingest schema. Cells print in Rust's
/// shortest round-trip notation, so re-ingesting reproduces them exactly.
pub fn emit_csv(registry: &PlayerRegistry, periods: &[ResultMatrix]) -> String {
    let mut out = String::from("period,player_a,player_b,points_a,points_b\n");
    for (l, p) in periods.iter().enumerate() {
        let n = p.player_count();
        for i in 0..n {
            for j in (i + 1)..n {
                let forward = p.get(i, j);
                let reverse = p.get(j, i);
                if forward > 0.0 || reverse > 0.0 {
                    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
                    writer
                        .write_record([
                            l.to_string(),
                            registry.name(i).to_string(),
                            registry.name(j).to_string(),
                            forward.to_string(),
                            reverse.to_string(),
                        ])
                        .expect("in-memory write");
                    out.push_str(
                        &String::from_utf8(writer.into_inner().expect("in-memory flush"))
                            .expect("csv output is utf-8"),
                    );
                }
            }
        }
    }
    out
}
