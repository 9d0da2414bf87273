//! Pluggable example synthesizers.
//!
//! A backend receives the three prompt messages plus the `x` schema and
//! returns one [`SyntheticRow`]. Two implementations ship here:
//! [`llm::LlmBackend`] talks to a chat-completion endpoint through a
//! persistent reply cache, and [`surrogate::SurrogateBackend`] is a seeded
//! stand-in that interpolates the Best rows of its own prompt.

pub mod cache;
pub mod llm;
pub mod markdown;
pub mod surrogate;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{Cell, ColumnSpec, Kind, Table};

pub use llm::{BackendConfig, LlmBackend};
pub use surrogate::SurrogateBackend;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BackendError {
    #[error("transport error: {0}")]
    Transport(String),
    #[error("endpoint returned status {status}: {body}")]
    Status { status: u16, body: String },
    #[error("reply is not a chat completion: {message}")]
    BadEnvelope { message: String, raw: String },
    #[error("no markdown table row in reply")]
    NoTableRow { raw: String },
    #[error("reply row has {found} cells, schema has {expected}")]
    CellCount { expected: usize, found: usize, raw: String },
    #[error("cell `{value}` for column `{column}` is not a number")]
    BadCell { column: String, value: String, raw: String },
    #[error("prompt could not be read back: {0}")]
    Prompt(String),
    #[error("cache: {0}")]
    Cache(String),
}

impl BackendError {
    /// Output-format failures, worth re-asking for.
    pub fn is_malformed(&self) -> bool {
        matches!(
            self,
            BackendError::NoTableRow { .. }
                | BackendError::CellCount { .. }
                | BackendError::BadCell { .. }
                | BackendError::BadEnvelope { .. }
        )
    }

    /// The raw reply, when the failure came from parsing one.
    pub fn raw_reply(&self) -> Option<&str> {
        match self {
            BackendError::BadEnvelope { raw, .. }
            | BackendError::NoTableRow { raw }
            | BackendError::CellCount { raw, .. }
            | BackendError::BadCell { raw, .. } => Some(raw),
            _ => None,
        }
    }
}

/// One `x` column as a backend sees it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemaColumn {
    pub name: String,
    pub kind: Kind,
    pub lo: f64,
    pub hi: f64,
    pub levels: Vec<String>,
    /// Most frequent level over the whole table (symbolic columns).
    pub mode: Option<String>,
}

/// Schema of a table's independent columns, in column order.
pub fn schema_for(table: &Table) -> Vec<SchemaColumn> {
    table
        .x_columns()
        .enumerate()
        .map(|(j, col): (usize, &ColumnSpec)| {
            let mode = (col.kind == Kind::Symbolic).then(|| {
                let counts = table.level_counts(j);
                // BTreeMap order makes the smallest level win ties
                counts
                    .iter()
                    .fold(None::<(&str, usize)>, |acc, (&lvl, &c)| match acc {
                        Some((_, best)) if best >= c => acc,
                        _ => Some((lvl, c)),
                    })
                    .map(|(l, _)| l.to_string())
                    .unwrap_or_default()
            });
            SchemaColumn {
                name: col.name.clone(),
                kind: col.kind,
                lo: col.lo,
                hi: col.hi,
                levels: col.levels.clone(),
                mode,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisRequest {
    pub system: String,
    pub human: String,
    pub task: String,
    pub schema: Vec<SchemaColumn>,
}

impl SynthesisRequest {
    /// Everything the model reads, as one string.
    pub fn prompt_text(&self) -> String {
        format!("{}\n\n{}\n\n{}", self.system, self.human, self.task)
    }
}

/// A proposed `x` vector, already conformed to the schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticRow {
    pub x: Vec<Cell>,
}

impl SyntheticRow {
    /// Clamps numeric cells into `[lo, hi]` and maps unknown symbols to the
    /// column mode.
    pub fn conform(cells: Vec<Cell>, schema: &[SchemaColumn]) -> SyntheticRow {
        let x = cells
            .into_iter()
            .zip(schema)
            .map(|(cell, col)| match (col.kind, cell) {
                (Kind::Numeric, Cell::Num(v)) => Cell::Num(v.clamp(col.lo, col.hi)),
                (Kind::Numeric, Cell::Sym(_)) => Cell::Num(col.lo),
                (Kind::Symbolic, Cell::Sym(s)) if col.levels.binary_search(&s).is_ok() => Cell::Sym(s),
                (Kind::Symbolic, _) => Cell::Sym(col.mode.clone().unwrap_or_default()),
            })
            .collect();
        SyntheticRow { x }
    }

    /// Clamped to ranges and restricted to observed levels.
    pub fn is_conformant(&self, schema: &[SchemaColumn]) -> bool {
        self.x.len() == schema.len()
            && self.x.iter().zip(schema).all(|(cell, col)| match cell {
                Cell::Num(v) => col.kind == Kind::Numeric && (col.lo..=col.hi).contains(v),
                Cell::Sym(s) => col.kind == Kind::Symbolic && col.levels.binary_search(s).is_ok(),
            })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackendStats {
    pub network_calls: usize,
    pub cache_hits: usize,
    pub cache_misses: usize,
}

/// Produces one synthetic row per call. Implementations must be callable
/// from concurrent runs.
pub trait SynthesisBackend: Send + Sync {
    fn synthesize(&self, req: &SynthesisRequest, rng: &mut ChaCha8Rng) -> Result<SyntheticRow, BackendError>;

    fn stats(&self) -> BackendStats {
        BackendStats::default()
    }
}

impl<B: SynthesisBackend + ?Sized> SynthesisBackend for &B {
    fn synthesize(&self, req: &SynthesisRequest, rng: &mut ChaCha8Rng) -> Result<SyntheticRow, BackendError> {
        (**self).synthesize(req, rng)
    }

    fn stats(&self) -> BackendStats {
        (**self).stats()
    }
}

impl<B: SynthesisBackend + ?Sized> SynthesisBackend for std::sync::Arc<B> {
    fn synthesize(&self, req: &SynthesisRequest, rng: &mut ChaCha8Rng) -> Result<SyntheticRow, BackendError> {
        (**self).synthesize(req, rng)
    }

    fn stats(&self) -> BackendStats {
        (**self).stats()
    }
}

/// Turns the first data row of a markdown reply into a conformed row.
///
/// When the reply table has a header naming every schema column, cells are
/// picked by name. Otherwise cells are positional; one extra leading
/// non-numeric cell (a `Best`/`Better` tag) is dropped.
pub fn parse_reply(reply: &str, schema: &[SchemaColumn]) -> Result<SyntheticRow, BackendError> {
    let raw = || reply.to_string();
    let table = markdown::first_table(reply).ok_or_else(|| BackendError::NoTableRow { raw: raw() })?;
    let row = table.rows.first().ok_or_else(|| BackendError::NoTableRow { raw: raw() })?;

    let by_name: Option<Vec<&str>> = table.header.as_ref().and_then(|header| {
        schema
            .iter()
            .map(|col| {
                let idx = header.iter().position(|h| h.trim_end_matches(['+', '-']) == col.name)?;
                row.get(idx).map(String::as_str)
            })
            .collect()
    });
    let cells: Vec<&str> = match by_name {
        Some(cells) => cells,
        None if row.len() == schema.len() => row.iter().map(String::as_str).collect(),
        None if row.len() == schema.len() + 1 && row[0].parse::<f64>().is_err() => {
            row[1..].iter().map(String::as_str).collect()
        }
        None => return Err(BackendError::CellCount { expected: schema.len(), found: row.len(), raw: raw() }),
    };

    let mut parsed = Vec::with_capacity(schema.len());
    for (value, col) in cells.into_iter().zip(schema) {
        let value = markdown::strip_emphasis(value);
        parsed.push(match col.kind {
            Kind::Numeric => match value.replace(',', "").parse::<f64>() {
                Ok(v) if v.is_finite() => Cell::Num(v),
                _ => {
                    return Err(BackendError::BadCell {
                        column: col.name.clone(),
                        value: value.to_string(),
                        raw: raw(),
                    })
                }
            },
            Kind::Symbolic => Cell::Sym(value.to_string()),
        });
    }
    Ok(SyntheticRow::conform(parsed, schema))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::load_table;
    use crate::fixtures::TABLE2;

    fn table2_schema() -> Vec<SchemaColumn> {
        schema_for(&load_table(TABLE2.as_bytes(), "ss").unwrap())
    }

    #[test]
    fn bare_row_parses_positionally() {
        let row = parse_reply("| 50 | 3 | 9 |", &table2_schema()).unwrap();
        assert_eq!(row.x, vec![Cell::Num(50.0), Cell::Num(3.0), Cell::Num(9.0)]);
    }

    #[test]
    fn prose_then_table_takes_first_data_row() {
        let reply = "Here is a better configuration.\n\n| Spout_wait | Spliters | Counters |\n|---|---|---|\n| 12 | 5 | 16 |\n| 99 | 1 | 1 |\n\nIt should do well.";
        let row = parse_reply(reply, &table2_schema()).unwrap();
        assert_eq!(row.x, vec![Cell::Num(12.0), Cell::Num(5.0), Cell::Num(16.0)]);
    }

    #[test]
    fn header_with_extra_columns_selects_by_name() {
        let reply = "| class | Counters | Spout_wait | Spliters | Throughput+ |\n|:-|-:|-|-|-|\n| Better | 16 | **11** | 4 | 23000 |";
        let row = parse_reply(reply, &table2_schema()).unwrap();
        assert_eq!(row.x, vec![Cell::Num(11.0), Cell::Num(4.0), Cell::Num(16.0)]);
    }

    #[test]
    fn leading_tag_is_dropped() {
        let row = parse_reply("| Better | 10 | 6 | 17 |", &table2_schema()).unwrap();
        assert_eq!(row.x, vec![Cell::Num(10.0), Cell::Num(6.0), Cell::Num(17.0)]);
    }

    #[test]
    fn out_of_range_values_are_clamped() {
        let row = parse_reply("| 1e9 | -4 | 17 |", &table2_schema()).unwrap();
        assert_eq!(row.x, vec![Cell::Num(10000.0), Cell::Num(1.0), Cell::Num(17.0)]);
        assert!(row.is_conformant(&table2_schema()));
    }

    #[test]
    fn parse_failures_are_distinct() {
        let s = table2_schema();
        assert!(matches!(parse_reply("no table here", &s), Err(BackendError::NoTableRow { .. })));
        assert!(matches!(parse_reply("| 1 | 2 |", &s), Err(BackendError::CellCount { expected: 3, found: 2, .. })));
        let err = parse_reply("| 1 | two | 3 |", &s).unwrap_err();
        assert!(matches!(err, BackendError::BadCell { .. }));
        assert_eq!(err.raw_reply(), Some("| 1 | two | 3 |"));
        assert!(err.is_malformed());
        assert!(!BackendError::Transport("x".into()).is_malformed());
    }

    #[test]
    fn unknown_symbol_maps_to_mode() {
        let t = load_table("color,N,Y-\nred,1,0\nblue,2,1\nred,3,1\n".as_bytes(), "s").unwrap();
        let s = schema_for(&t);
        assert_eq!(s[0].mode.as_deref(), Some("red"));
        let row = parse_reply("| purple | 2.5 |", &s).unwrap();
        assert_eq!(row.x, vec![Cell::Sym("red".into()), Cell::Num(2.5)]);
        let row = parse_reply("| blue | 2.5 |", &s).unwrap();
        assert_eq!(row.x[0], Cell::Sym("blue".into()));
    }
}
