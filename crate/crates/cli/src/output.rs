//! Rendering helpers: aligned tables, CSV, and JSON with full precision.

use serde_json::{json, Value};

/// One output row of the solve/classical tables.
pub struct PlayerRow {
    pub id: String,
    pub rating: f64,
    /// `None` for players below the inclusion threshold.
    pub published: Option<f64>,
    pub games: f64,
}

impl PlayerRow {
    fn published_text(&self) -> String {
        match self.published {
            Some(v) => format!("{v:.2}"),
            None => "unrated".to_string(),
        }
    }
}

/// Sorts rated rows by published rating descending (ties by the order the
/// rows came in, i.e. registry order), with unrated rows after, in registry
/// order.
pub fn sort_rows(rows: &mut [PlayerRow]) {
    let mut indexed: Vec<(usize, bool, f64)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (i, r.published.is_some(), r.published.unwrap_or(0.0)))
        .collect();
    indexed.sort_by(|a, b| {
        b.1.cmp(&a.1)
            .then_with(|| b.2.total_cmp(&a.2))
            .then_with(|| a.0.cmp(&b.0))
    });
    let order: Vec<usize> = indexed.into_iter().map(|(i, _, _)| i).collect();
    let mut scratch: Vec<Option<PlayerRow>> = rows.iter_mut().map(|_| None).collect();
    for (target, &source) in order.iter().enumerate() {
        scratch[target] = Some(PlayerRow {
            id: std::mem::take(&mut rows[source].id),
            rating: rows[source].rating,
            published: rows[source].published,
            games: rows[source].games,
        });
    }
    for (slot, row) in rows.iter_mut().zip(scratch) {
        *slot = row.expect("every slot filled");
    }
}

pub fn table(rows: &[PlayerRow]) -> String {
    let mut cells: Vec<[String; 4]> = vec![[
        "player".to_string(),
        "rating".to_string(),
        "published".to_string(),
        "games".to_string(),
    ]];
    for row in rows {
        cells.push([
            row.id.clone(),
            format!("{:.6}", row.rating),
            row.published_text(),
            format!("{:.1}", row.games),
        ]);
    }
    render_columns(&cells)
}

pub fn csv(rows: &[PlayerRow]) -> String {
    let mut out = String::from("player,rating,published,games\n");
    for row in rows {
        let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
        writer
            .write_record([
                row.id.clone(),
                format!("{:.6}", row.rating),
                row.published_text(),
                format!("{:.1}", row.games),
            ])
            .expect("in-memory write");
        out.push_str(
            &String::from_utf8(writer.into_inner().expect("in-memory flush"))
                .expect("csv output is utf-8"),
        );
    }
    out
}

pub fn players_json(rows: &[PlayerRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|row| {
                json!({
                    "id": row.id,
                    "rating": row.rating,
                    "published": row.published,
                    "games": row.games,
                    "rated": row.published.is_some(),
                })
            })
            .collect(),
    )
}

/// Pads each column to its widest cell, two spaces between columns.
pub fn render_columns<const W: usize>(cells: &[[String; W]]) -> String {
    let mut widths = [0usize; W];
    for row in cells {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for row in cells {
        let mut line = String::new();
        for (idx, cell) in row.iter().enumerate() {
            if idx > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            if idx + 1 < W {
                line.push_str(&" ".repeat(widths[idx] - cell.len()));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
