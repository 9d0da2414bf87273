//! Plot-ready CSV curves.
//!
//! - `envelope.csv`: `budget,rank,dataset,stratum,pool_min,pool_mean,treatment,mean_best_score`.
//!   One row per (budget, dataset, treatment); `rank` orders datasets by
//!   `pool_min` ascending. `pool_min` is the optimal line, `pool_mean` the
//!   untreated line. Rows with `dataset = ALL` hold the unweighted mean
//!   over datasets and an empty rank.
//! - `budget_vs_score.csv`: `treatment,budget,mean_best_score,datasets`.
//!   Mean over datasets of the per-dataset mean best score; the `optimal`
//!   treatment is the mean pool minimum.
//! - `budget_vs_time.csv`: `treatment,budget,mean_wall_time,log10_mean_wall_time`,
//!   wall time in seconds averaged over every successful cell.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::report::{CellStatus, ExperimentReport};
use super::{io_err, HarnessError, Treatment};

pub const ENVELOPE_FILE: &str = "envelope.csv";
pub const SCORE_FILE: &str = "budget_vs_score.csv";
pub const TIME_FILE: &str = "budget_vs_time.csv";

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Mean best score per (budget, treatment, dataset) over successful cells.
fn cell_means(report: &ExperimentReport) -> BTreeMap<(usize, Treatment, String), f64> {
    let mut acc: BTreeMap<(usize, Treatment, String), Vec<f64>> = BTreeMap::new();
    for r in &report.records {
        if let (CellStatus::Ok, Some(s)) = (r.status, r.best_score) {
            acc.entry((r.budget, r.treatment, r.dataset.clone())).or_default().push(s);
        }
    }
    acc.into_iter().map(|(k, v)| (k, mean(&v))).collect()
}

pub fn envelope_csv(report: &ExperimentReport) -> String {
    let means = cell_means(report);
    let mut order: Vec<_> = report.datasets.iter().collect();
    order.sort_by(|a, b| a.pool_min.total_cmp(&b.pool_min).then_with(|| a.name.cmp(&b.name)));
    let mut budgets: Vec<usize> = report.records.iter().map(|r| r.budget).collect();
    budgets.sort_unstable();
    budgets.dedup();
    let mut treatments: Vec<Treatment> = report.records.iter().map(|r| r.treatment).collect();
    treatments.sort();
    treatments.dedup();

    let mut s = String::from("budget,rank,dataset,stratum,pool_min,pool_mean,treatment,mean_best_score\n");
    for &b in &budgets {
        for &t in &treatments {
            let mut mins = Vec::new();
            let mut pool_means = Vec::new();
            let mut achieved = Vec::new();
            for (rank, d) in order.iter().enumerate() {
                let Some(&m) = means.get(&(b, t, d.name.clone())) else { continue };
                let _ = writeln!(s, "{b},{rank},{},{},{},{},{t},{m}", d.name, d.stratum, d.pool_min, d.pool_mean);
                mins.push(d.pool_min);
                pool_means.push(d.pool_mean);
                achieved.push(m);
            }
            if !achieved.is_empty() {
                let _ = writeln!(s, "{b},,ALL,all,{},{},{t},{}", mean(&mins), mean(&pool_means), mean(&achieved));
            }
        }
    }
    s
}

pub fn score_csv(report: &ExperimentReport) -> String {
    let means = cell_means(report);
    let mut by: BTreeMap<(String, usize), Vec<f64>> = BTreeMap::new();
    for ((b, t, _), m) in &means {
        by.entry((t.as_str().to_string(), *b)).or_default().push(*m);
    }
    let budgets: Vec<usize> = by.keys().map(|(_, b)| *b).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let optimal: Vec<f64> = report.datasets.iter().map(|d| d.pool_min).collect();
    if !optimal.is_empty() {
        for &b in &budgets {
            by.insert(("optimal".into(), b), optimal.clone());
        }
    }
    let mut s = String::from("treatment,budget,mean_best_score,datasets\n");
    for ((t, b), v) in &by {
        let _ = writeln!(s, "{t},{b},{},{}", mean(v), v.len());
    }
    s
}

pub fn time_csv(report: &ExperimentReport) -> String {
    let ok: std::collections::HashSet<_> = report
        .records
        .iter()
        .filter(|r| r.status == CellStatus::Ok)
        .map(|r| (r.dataset.as_str(), r.treatment, r.budget, r.repeat))
        .collect();
    let mut by: BTreeMap<(Treatment, usize), Vec<f64>> = BTreeMap::new();
    for t in &report.timings {
        if ok.contains(&t.key()) {
            by.entry((t.treatment, t.budget)).or_default().push(t.wall_time);
        }
    }
    let mut s = String::from("treatment,budget,mean_wall_time,log10_mean_wall_time\n");
    for ((t, b), v) in &by {
        let m = mean(v);
        // zero-duration cells (baseline) would give -inf
        let log = if m > 0.0 { format!("{}", m.log10()) } else { String::new() };
        let _ = writeln!(s, "{t},{b},{m},{log}");
    }
    s
}

/// Writes the three curve files into `out`.
pub fn emit_curves(report: &ExperimentReport, out: &Path) -> Result<(), HarnessError> {
    if report.records.is_empty() {
        return Err(HarnessError::EmptyReport);
    }
    fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
    for (name, body) in [(ENVELOPE_FILE, envelope_csv(report)), (SCORE_FILE, score_csv(report)), (TIME_FILE, time_csv(report))] {
        let path = out.join(name);
        fs::write(&path, body).map_err(|e| io_err(&path, e))?;
    }
    Ok(())
}
