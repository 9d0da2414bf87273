//! Few-shot prompt construction: the column metadata table, the Best/Rest
//! examples table, and the three message texts.

use std::collections::BTreeMap;

use crate::data::{Cell, Kind, Table};
use crate::scoring::Scored;
use crate::backend::markdown;
use crate::backend::surrogate::CLASS_COLUMN;

/// Fixed-format number rendering, stable across platforms.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.fract() == 0.0 && v.abs() < 1e15 {
        return format!("{}", v as i64);
    }
    if v.abs() >= 1e-3 && v.abs() < 1e15 {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        return if s == "-0" { "0".into() } else { s.to_string() };
    }
    format!("{v:.4e}")
}

fn fmt_cell(c: &Cell) -> String {
    match c {
        Cell::Num(v) => fmt_num(*v),
        Cell::Sym(s) => s.clone(),
    }
}

fn numeric_stats(vals: &[f64]) -> [String; 4] {
    if vals.is_empty() {
        return ["-".into(), "-".into(), "-".into(), "-".into()];
    }
    let n = vals.len() as f64;
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = vals.iter().sum::<f64>() / n;
    let sd = if vals.len() > 1 {
        (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    [fmt_num(lo), fmt_num(hi), fmt_num(mean), fmt_num(sd)]
}

fn symbolic_stats(vals: &[&str]) -> [String; 4] {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for v in vals {
        *counts.entry(v).or_insert(0) += 1;
    }
    let n = vals.len() as f64;
    let top = counts.values().copied().max().unwrap_or(0);
    let mode = counts.iter().find(|(_, &c)| c == top).map(|(v, _)| v.to_string()).unwrap_or_else(|| "-".into());
    let entropy: f64 = counts.values().map(|&c| c as f64 / n).map(|p| -p * p.log2()).sum();
    let first = counts.keys().next().map(|s| s.to_string()).unwrap_or_else(|| "-".into());
    let last = counts.keys().next_back().map(|s| s.to_string()).unwrap_or_else(|| "-".into());
    [first, last, mode, fmt_num(entropy)]
}

/// One markdown row per column: name, min, max, mean or mode, sd or
/// entropy (bits). `x` statistics cover every row; goal statistics cover
/// only the `labeled` rows.
pub fn build_meta(table: &Table, labeled: &[Scored]) -> String {
    let mut rows = Vec::with_capacity(table.columns.len());
    let mut xi = 0;
    let mut yi = 0;
    for col in &table.columns {
        let stats = if col.is_goal() {
            let vals: Vec<f64> = labeled
                .iter()
                .filter_map(|s| table.row(s.id).goals().map(|g| g[yi]))
                .collect();
            yi += 1;
            numeric_stats(&vals)
        } else {
            let j = xi;
            xi += 1;
            match col.kind {
                Kind::Numeric => numeric_stats(&table.rows.iter().filter_map(|r| r.x[j].as_num()).collect::<Vec<_>>()),
                Kind::Symbolic => symbolic_stats(&table.rows.iter().filter_map(|r| r.x[j].as_sym()).collect::<Vec<_>>()),
            }
        };
        let mut row = vec![col.header_name()];
        row.extend(stats);
        rows.push(row);
    }
    markdown::render(&["column", "min", "max", "mean_or_mode", "sd_or_entropy"], &rows)
}

/// Examples table: Best rows first, then Rest, each tagged in the class
/// column, with `x` and goal values.
pub fn build_examples(table: &Table, best: &[Scored], rest: &[Scored]) -> String {
    let mut header = vec![CLASS_COLUMN.to_string()];
    header.extend(table.x_columns().map(|c| c.header_name()));
    header.extend(table.y_columns().map(|c| c.header_name()));
    let tagged = best.iter().map(|s| ("Best", s)).chain(rest.iter().map(|s| ("Rest", s)));
    let rows: Vec<Vec<String>> = tagged
        .map(|(tag, s)| {
            let row = table.row(s.id);
            let mut cells = vec![tag.to_string()];
            cells.extend(row.x.iter().map(fmt_cell));
            cells.extend(row.goals().unwrap_or(&[]).iter().map(|v| fmt_num(*v)));
            cells
        })
        .collect();
    markdown::render(&header, &rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PromptBundle {
    pub meta_markdown: String,
    pub examples_markdown: String,
    /// `x` column names the reply must fill, in order.
    pub output_columns: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Messages {
    pub system: String,
    pub human: String,
    pub task: String,
}

pub fn render_prompt(bundle: &PromptBundle) -> Messages {
    let system = format!(
        "You are given a dataset with several features. The rows have been categorized into \"Best\" and \"Rest\" \
examples based on their overall performance. Below are the key features and their descriptions from the dataset:\n\n{}",
        bundle.meta_markdown
    );
    let human = format!("Given Examples:\n\n{}", bundle.examples_markdown);
    let format_rows: Vec<Vec<String>> = Vec::new();
    let task = format!(
        "Generate an examples that is Better:\n\
This should outperform the given \"Best\" examples by optimizing the relevant features to better combinations.\n\n\
Consider the inter-dependencies between features, and ensure that the generated examples follow logical consistency \
within the dataset's context.\n\n\
Return the output in the same markdown structure:\n\n{}\
Reply with exactly one data row under this header, giving a value for every column.\n",
        markdown::render(&bundle.output_columns, &format_rows)
    );
    Messages { system, human, task }
}
