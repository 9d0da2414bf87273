//! MOOT tables: header classification, CSV ingestion, serialization and
//! seeded shuffling.
//!
//! A MOOT header encodes each column's type and role in its name:
//!
//! - a leading uppercase letter marks a numeric column, anything else is symbolic;
//! - a trailing `+` marks a goal to maximize, a trailing `-` a goal to minimize;
//! - every other column is an independent (`x`) column.
//!
//! Goal values (`y`) stay hidden on every row until a [`LabelLedger`] reveals
//! them.
//!
//! [`LabelLedger`]: crate::learner::LabelLedger

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::Read;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DataError {
    #[error("header is empty")]
    EmptyHeader,
    #[error("column {index} has an empty name")]
    EmptyName { index: usize },
    #[error("duplicate column name `{0}` after stripping goal sigils")]
    DuplicateName(String),
    #[error("table needs at least one goal column (name ending in + or -)")]
    NoGoals,
    #[error("table needs at least one independent column")]
    NoIndependents,
    #[error("goal column `{0}` is symbolic; goals must be numeric (leading uppercase letter)")]
    SymbolicGoal(String),
    #[error("table has a header but no rows")]
    EmptyBody,
    #[error("line {line}: expected {expected} cells, found {found}")]
    Ragged { line: usize, expected: usize, found: usize },
    #[error("line {line}, column `{column}`: missing value")]
    MissingCell { line: usize, column: String },
    #[error("line {line}, column `{column}`: `{value}` is not a finite number")]
    NotNumeric { line: usize, column: String, value: String },
    #[error("csv: {0}")]
    Csv(String),
}

impl From<csv::Error> for DataError {
    fn from(e: csv::Error) -> Self {
        DataError::Csv(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Numeric,
    Symbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Independent,
    Goal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Maximize,
    Minimize,
    None,
}

/// One classified column. `lo`/`hi` are meaningful for numeric columns only;
/// `levels` holds the sorted observed values of a symbolic column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub name: String,
    pub kind: Kind,
    pub role: Role,
    pub direction: Direction,
    pub lo: f64,
    pub hi: f64,
    pub levels: Vec<String>,
}

impl ColumnSpec {
    pub fn is_numeric(&self) -> bool {
        self.kind == Kind::Numeric
    }

    pub fn is_goal(&self) -> bool {
        self.role == Role::Goal
    }

    /// The header spelling of this column, sigil included.
    pub fn header_name(&self) -> String {
        match self.direction {
            Direction::Maximize => format!("{}+", self.name),
            Direction::Minimize => format!("{}-", self.name),
            Direction::None => self.name.clone(),
        }
    }

    pub fn range(&self) -> f64 {
        self.hi - self.lo
    }
}

/// An `x` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Cell {
    Num(f64),
    Sym(String),
}

impl Cell {
    pub fn as_num(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Sym(_) => None,
        }
    }

    pub fn as_sym(&self) -> Option<&str> {
        match self {
            Cell::Sym(s) => Some(s),
            Cell::Num(_) => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(v) => write!(f, "{v}"),
            Cell::Sym(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub id: usize,
    pub x: Vec<Cell>,
    y: Vec<f64>,
    labeled: bool,
}

impl Row {
    /// A fresh, unlabeled row.
    pub fn new(id: usize, x: Vec<Cell>, y: Vec<f64>) -> Self {
        Row { id, x, y, labeled: false }
    }

    pub fn is_labeled(&self) -> bool {
        self.labeled
    }

    /// Goal values, visible only once the row is labeled.
    pub fn goals(&self) -> Option<&[f64]> {
        self.labeled.then_some(self.y.as_slice())
    }

    pub(crate) fn reveal(&mut self) {
        self.labeled = true;
    }

    /// Ground-truth goals regardless of labeling. Evaluation code only
    /// (pool envelopes, oracles); learners must go through a ledger.
    pub fn hidden_goals(&self) -> &[f64] {
        &self.y
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<ColumnSpec>,
    pub rows: Vec<Row>,
    x_cols: Vec<usize>,
    y_cols: Vec<usize>,
}

/// Classifies raw header names into column specs (ranges left empty).
pub fn parse_header<S: AsRef<str>>(names: &[S]) -> Result<Vec<ColumnSpec>, DataError> {
    if names.is_empty() {
        return Err(DataError::EmptyHeader);
    }
    let mut seen = HashSet::new();
    let mut specs = Vec::with_capacity(names.len());
    for (index, raw) in names.iter().enumerate() {
        let raw = raw.as_ref().trim();
        let (stem, role, direction) = if let Some(s) = raw.strip_suffix('+') {
            (s, Role::Goal, Direction::Maximize)
        } else if let Some(s) = raw.strip_suffix('-') {
            (s, Role::Goal, Direction::Minimize)
        } else {
            (raw, Role::Independent, Direction::None)
        };
        if stem.is_empty() {
            return Err(DataError::EmptyName { index });
        }
        let kind = if stem.chars().next().is_some_and(char::is_uppercase) {
            Kind::Numeric
        } else {
            Kind::Symbolic
        };
        if !seen.insert(stem.to_string()) {
            return Err(DataError::DuplicateName(stem.to_string()));
        }
        specs.push(ColumnSpec {
            name: stem.to_string(),
            kind,
            role,
            direction,
            lo: 0.0,
            hi: 0.0,
            levels: Vec::new(),
        });
    }
    if !specs.iter().any(ColumnSpec::is_goal) {
        return Err(DataError::NoGoals);
    }
    if specs.iter().all(ColumnSpec::is_goal) {
        return Err(DataError::NoIndependents);
    }
    if let Some(c) = specs.iter().find(|c| c.is_goal() && !c.is_numeric()) {
        return Err(DataError::SymbolicGoal(c.name.clone()));
    }
    Ok(specs)
}

/// Reads a MOOT CSV stream. Cells are trimmed; empty and `?` cells are
/// rejected.
pub fn load_table<R: Read>(source: R, name: &str) -> Result<Table, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut records = reader.records();
    let header = match records.next() {
        Some(r) => r?,
        None => return Err(DataError::EmptyHeader),
    };
    let names: Vec<&str> = header.iter().collect();
    if names.iter().all(|n| n.is_empty()) {
        return Err(DataError::EmptyHeader);
    }
    let columns = parse_header(&names)?;

    let mut raw_rows = Vec::new();
    for record in records {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        // blank lines
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != columns.len() {
            return Err(DataError::Ragged { line, expected: columns.len(), found: record.len() });
        }
        let mut x = Vec::new();
        let mut y = Vec::new();
        for (col, value) in columns.iter().zip(record.iter()) {
            if value.is_empty() || value == "?" {
                return Err(DataError::MissingCell { line, column: col.name.clone() });
            }
            let cell = match col.kind {
                Kind::Numeric => match value.parse::<f64>() {
                    Ok(v) if v.is_finite() => Cell::Num(v),
                    _ => {
                        return Err(DataError::NotNumeric {
                            line,
                            column: col.name.clone(),
                            value: value.to_string(),
                        })
                    }
                },
                Kind::Symbolic => Cell::Sym(value.to_string()),
            };
            match (col.role, cell) {
                (Role::Goal, Cell::Num(v)) => y.push(v),
                (Role::Goal, Cell::Sym(_)) => unreachable!("symbolic goals rejected by parse_header"),
                (Role::Independent, c) => x.push(c),
            }
        }
        raw_rows.push((x, y));
    }
    if raw_rows.is_empty() {
        return Err(DataError::EmptyBody);
    }
    let rows = raw_rows
        .into_iter()
        .enumerate()
        .map(|(id, (x, y))| Row::new(id, x, y))
        .collect();
    Table::new(name, columns, rows)
}

impl Table {
    /// Builds a table from classified columns and rows, recomputing every
    /// column's range and level set from the rows.
    pub fn new(name: &str, mut columns: Vec<ColumnSpec>, rows: Vec<Row>) -> Result<Table, DataError> {
        if rows.is_empty() {
            return Err(DataError::EmptyBody);
        }
        let x_cols: Vec<usize> = (0..columns.len()).filter(|&i| !columns[i].is_goal()).collect();
        let y_cols: Vec<usize> = (0..columns.len()).filter(|&i| columns[i].is_goal()).collect();
        if y_cols.is_empty() {
            return Err(DataError::NoGoals);
        }
        if x_cols.is_empty() {
            return Err(DataError::NoIndependents);
        }
        for row in &rows {
            if row.x.len() != x_cols.len() || row.y.len() != y_cols.len() {
                return Err(DataError::Ragged {
                    line: row.id + 2,
                    expected: columns.len(),
                    found: row.x.len() + row.y.len(),
                });
            }
        }
        for (j, &c) in x_cols.iter().enumerate() {
            let col = &mut columns[c];
            match col.kind {
                Kind::Numeric => {
                    let vals = rows.iter().map(|r| {
                        r.x[j].as_num().ok_or_else(|| DataError::NotNumeric {
                            line: r.id + 2,
                            column: col.name.clone(),
                            value: r.x[j].to_string(),
                        })
                    });
                    let (lo, hi) = min_max(vals)?;
                    col.lo = lo;
                    col.hi = hi;
                    col.levels.clear();
                }
                Kind::Symbolic => {
                    let mut levels: Vec<String> = rows
                        .iter()
                        .map(|r| r.x[j].to_string())
                        .collect::<HashSet<_>>()
                        .into_iter()
                        .collect();
                    levels.sort();
                    col.levels = levels;
                    col.lo = 0.0;
                    col.hi = 0.0;
                }
            }
        }
        for (j, &c) in y_cols.iter().enumerate() {
            let (lo, hi) = min_max(rows.iter().map(|r| Ok(r.y[j])))?;
            columns[c].lo = lo;
            columns[c].hi = hi;
        }
        Ok(Table { name: name.to_string(), columns, rows, x_cols, y_cols })
    }

    pub fn x_columns(&self) -> impl Iterator<Item = &ColumnSpec> + '_ {
        self.x_cols.iter().map(move |&i| &self.columns[i])
    }

    pub fn y_columns(&self) -> impl Iterator<Item = &ColumnSpec> + '_ {
        self.y_cols.iter().map(move |&i| &self.columns[i])
    }

    pub fn x_specs(&self) -> Vec<ColumnSpec> {
        self.x_columns().cloned().collect()
    }

    pub fn y_specs(&self) -> Vec<ColumnSpec> {
        self.y_columns().cloned().collect()
    }

    pub fn x_count(&self) -> usize {
        self.x_cols.len()
    }

    pub fn y_count(&self) -> usize {
        self.y_cols.len()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, id: usize) -> &Row {
        &self.rows[id]
    }

    pub(crate) fn row_mut(&mut self, id: usize) -> &mut Row {
        &mut self.rows[id]
    }

    /// MOOT CSV text; `load_table` on the output rebuilds an equal table.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(self.columns.iter().map(ColumnSpec::header_name))
            .expect("in-memory write");
        for row in &self.rows {
            let mut xi = row.x.iter();
            let mut yi = row.y.iter();
            let fields: Vec<String> = self
                .columns
                .iter()
                .map(|c| match c.role {
                    Role::Independent => xi.next().expect("aligned x").to_string(),
                    Role::Goal => yi.next().expect("aligned y").to_string(),
                })
                .collect();
            w.write_record(&fields).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8 input yields utf8 output")
    }

    /// Frequency of each level of symbolic x column `j` (x-aligned index).
    pub fn level_counts(&self, j: usize) -> BTreeMap<&str, usize> {
        let mut counts = BTreeMap::new();
        for r in &self.rows {
            if let Cell::Sym(s) = &r.x[j] {
                *counts.entry(s.as_str()).or_insert(0) += 1;
            }
        }
        counts
    }
}

fn min_max<I: Iterator<Item = Result<f64, DataError>>>(vals: I) -> Result<(f64, f64), DataError> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in vals {
        let v = v?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

/// Returns the table with rows in a seed-determined order and ids
/// re-indexed to match. Column ranges are unchanged.
pub fn shuffle_rows(mut table: Table, seed: u64) -> Table {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    table.rows.shuffle(&mut rng);
    for (id, row) in table.rows.iter_mut().enumerate() {
        row.id = id;
    }
    table
}
