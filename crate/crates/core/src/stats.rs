//! Scott-Knott ranking with a bootstrap + Cliff's delta gate, rank-table
//! aggregation, and the NEO sample-size bound.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Conventional "small" effect threshold for Cliff's delta.
pub const SMALL_EFFECT: f64 = 0.147;
pub const DEFAULT_RESAMPLES: usize = 512;
pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("empty sample")]
    EmptySample,
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("non-finite sample in `{0}`")]
    NonFinite(String),
    #[error("resamples must be positive")]
    NoResamples,
    #[error("{name} must lie in (0, 1), got {value}")]
    OutOfUnit { name: &'static str, value: f64 },
    #[error("no treatments to rank")]
    NoTreatments,
    #[error("no datasets to tabulate")]
    NoDatasets,
    #[error("dataset `{dataset}` ranks a different treatment set")]
    InconsistentTreatments { dataset: String },
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// `(#{a_i > b_j} - #{a_i < b_j}) / (|a| |b|)`, counted in
/// `O((|a| + |b|) log |b|)` by binary search over sorted `b`.
pub fn cliffs_delta(a: &[f64], b: &[f64]) -> Result<f64, StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let mut sorted = b.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut net: i64 = 0;
    for &x in a {
        let below = sorted.partition_point(|&y| y < x);
        let not_above = sorted.partition_point(|&y| y <= x);
        let above = sorted.len() - not_above;
        net += below as i64 - above as i64;
    }
    Ok(net as f64 / (a.len() * b.len()) as f64)
}

/// Pooled bootstrap test of `H0: a and b share one distribution`. True iff
/// the observed `|mean(a) - mean(b)|` exceeds the `(1 - alpha)` quantile of
/// the same statistic over `resamples` draws from the pooled sample.
pub fn bootstrap_distinct<R: Rng + ?Sized>(a: &[f64], b: &[f64], resamples: usize, alpha: f64, rng: &mut R) -> Result<bool, StatsError> {
    if resamples == 0 {
        return Err(StatsError::NoResamples);
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(StatsError::OutOfUnit { name: "alpha", value: alpha });
    }
    for s in [a, b] {
        if s.len() < 2 {
            return Err(StatsError::TooFewSamples { need: 2, got: s.len() });
        }
    }
    let observed = (mean(a) - mean(b)).abs();
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let mut draw = |n: usize| (0..n).map(|_| pooled[rng.random_range(0..pooled.len())]).sum::<f64>() / n as f64;
    let mut null: Vec<f64> = (0..resamples).map(|_| (draw(a.len()) - draw(b.len())).abs()).collect();
    null.sort_by(f64::total_cmp);
    let idx = (((1.0 - alpha) * resamples as f64).ceil() as usize).clamp(1, resamples) - 1;
    Ok(observed > null[idx])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreatmentSamples {
    pub name: String,
    pub values: Vec<f64>,
}

impl TreatmentSamples {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Self {
        TreatmentSamples { name: name.into(), values }
    }

    pub fn mean(&self) -> f64 {
        mean(&self.values)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Group {
    pub rank: usize,
    pub members: Vec<String>,
    pub mean: f64,
}

/// Groups in ascending mean order; ranks count up from 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedGroups {
    pub groups: Vec<Group>,
}

impl RankedGroups {
    pub fn rank_of(&self, treatment: &str) -> Option<usize> {
        self.groups.iter().find(|g| g.members.iter().any(|m| m == treatment)).map(|g| g.rank)
    }

    pub fn treatments(&self) -> BTreeSet<&str> {
        self.groups.iter().flat_map(|g| g.members.iter().map(String::as_str)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkConfig {
    pub small_effect: f64,
    pub resamples: usize,
    pub alpha: f64,
}

impl Default for SkConfig {
    fn default() -> Self {
        SkConfig { small_effect: SMALL_EFFECT, resamples: DEFAULT_RESAMPLES, alpha: DEFAULT_ALPHA }
    }
}

fn pooled(ts: &[&TreatmentSamples]) -> Vec<f64> {
    ts.iter().flat_map(|t| t.values.iter().copied()).collect()
}

/// Cut index in `1..len` maximizing the between-group sum of squares;
/// the first maximum wins.
fn best_cut(ts: &[&TreatmentSamples]) -> usize {
    let all = pooled(ts);
    let mu = mean(&all);
    let total: f64 = all.iter().sum();
    let n_total = all.len() as f64;
    let mut left_sum = 0.0;
    let mut left_n = 0.0;
    let mut best = (1, f64::NEG_INFINITY);
    for cut in 1..ts.len() {
        left_sum += ts[cut - 1].values.iter().sum::<f64>();
        left_n += ts[cut - 1].values.len() as f64;
        let right_n = n_total - left_n;
        let m1 = left_sum / left_n;
        let m2 = (total - left_sum) / right_n;
        let ss = left_n * (m1 - mu).powi(2) + right_n * (m2 - mu).powi(2);
        if ss > best.1 {
            best = (cut, ss);
        }
    }
    best.0
}

fn divide<R: Rng + ?Sized>(ts: &[&TreatmentSamples], cfg: &SkConfig, rng: &mut R, out: &mut Vec<Vec<String>>) -> Result<(), StatsError> {
    if ts.len() > 1 {
        let cut = best_cut(ts);
        let (left, right) = ts.split_at(cut);
        let (a, b) = (pooled(left), pooled(right));
        if bootstrap_distinct(&a, &b, cfg.resamples, cfg.alpha, rng)? && cliffs_delta(&a, &b)?.abs() > cfg.small_effect {
            divide(left, cfg, rng, out)?;
            return divide(right, cfg, rng, out);
        }
    }
    out.push(ts.iter().map(|t| t.name.clone()).collect());
    Ok(())
}

/// Sorts treatments by mean (name breaks ties) and splits recursively
/// while both the bootstrap and the effect-size gate agree.
pub fn scott_knott<R: Rng + ?Sized>(treatments: &[TreatmentSamples], cfg: &SkConfig, rng: &mut R) -> Result<RankedGroups, StatsError> {
    if treatments.is_empty() {
        return Err(StatsError::NoTreatments);
    }
    for t in treatments {
        if t.values.len() < 2 {
            return Err(StatsError::TooFewSamples { need: 2, got: t.values.len() });
        }
        if t.values.iter().any(|v| !v.is_finite()) {
            return Err(StatsError::NonFinite(t.name.clone()));
        }
    }
    let mut sorted: Vec<&TreatmentSamples> = treatments.iter().collect();
    sorted.sort_by(|p, q| p.mean().total_cmp(&q.mean()).then_with(|| p.name.cmp(&q.name)));
    let mut parts = Vec::new();
    divide(&sorted, cfg, rng, &mut parts)?;
    let by_name: BTreeMap<&str, &TreatmentSamples> = treatments.iter().map(|t| (t.name.as_str(), t)).collect();
    let groups = parts
        .into_iter()
        .enumerate()
        .map(|(rank, members)| {
            let vals: Vec<f64> = members.iter().flat_map(|m| by_name[m.as_str()].values.iter().copied()).collect();
            Group { rank, mean: mean(&vals), members }
        })
        .collect();
    Ok(RankedGroups { groups })
}

/// Percentage of datasets placing each treatment at each rank.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    pub treatments: Vec<String>,
    /// `cells[i][r]`: percent of datasets where `treatments[i]` has rank `r`.
    pub cells: Vec<Vec<u32>>,
    pub datasets: usize,
}

impl RankTable {
    pub fn columns(&self) -> usize {
        self.cells.first().map_or(0, Vec::len)
    }

    pub fn cell(&self, treatment: &str, rank: usize) -> Option<u32> {
        let i = self.treatments.iter().position(|t| t == treatment)?;
        self.cells[i].get(rank).copied()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("treatment");
        for r in 0..self.columns() {
            let _ = write!(s, ",rank{r}");
        }
        s.push('\n');
        for (t, row) in self.treatments.iter().zip(&self.cells) {
            s.push_str(t);
            for c in row {
                let _ = write!(s, ",{c}");
            }
            s.push('\n');
        }
        s
    }

    /// Markdown table; zero cells are left blank.
    pub fn to_markdown(&self) -> String {
        let mut s = String::from("| treatment |");
        for r in 0..self.columns() {
            let _ = write!(s, " {r} |");
        }
        s.push_str("\n| --- |");
        s.push_str(&" ---: |".repeat(self.columns()));
        s.push('\n');
        for (t, row) in self.treatments.iter().zip(&self.cells) {
            let _ = write!(s, "| {t} |");
            for &c in row {
                if c == 0 {
                    s.push_str("  |");
                } else {
                    let _ = write!(s, " {c} |");
                }
            }
            s.push('\n');
        }
        s
    }
}

/// Tabulates ranks over datasets. Columns run `0..T` for `T` treatments
/// (the most ranks a partition can produce); rows sort by descending rank-0
/// share, then by lower ranks, then by name.
pub fn rank_table(per_dataset: &BTreeMap<String, RankedGroups>) -> Result<RankTable, StatsError> {
    let (_, first) = per_dataset.iter().next().ok_or(StatsError::NoDatasets)?;
    let names: BTreeSet<&str> = first.treatments();
    for (dataset, groups) in per_dataset {
        if groups.treatments() != names {
            return Err(StatsError::InconsistentTreatments { dataset: dataset.clone() });
        }
    }
    let width = names.len();
    let n = per_dataset.len();
    let mut rows: Vec<(String, Vec<usize>)> = names
        .iter()
        .map(|&t| {
            let mut counts = vec![0usize; width];
            for groups in per_dataset.values() {
                counts[groups.rank_of(t).expect("checked membership")] += 1;
            }
            (t.to_string(), counts)
        })
        .collect();
    rows.sort_by(|(na, ca), (nb, cb)| cb.cmp(ca).then_with(|| na.cmp(nb)));
    let cells = rows
        .iter()
        .map(|(_, counts)| counts.iter().map(|&c| (100.0 * c as f64 / n as f64).round() as u32).collect())
        .collect();
    Ok(RankTable { treatments: rows.into_iter().map(|(t, _)| t).collect(), cells, datasets: n })
}

/// Smallest `n >= 1` with `1 - (1 - eps)^n >= confidence`.
pub fn neo_samples(confidence: f64, epsilon: f64) -> Result<usize, StatsError> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(StatsError::OutOfUnit { name: "confidence", value: confidence });
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(StatsError::OutOfUnit { name: "epsilon", value: epsilon });
    }
    let raw = (1.0 - confidence).ln() / (1.0 - epsilon).ln();
    // absorb rounding when the ratio is an exact integer
    let mut n = (raw - 1e-9).ceil().max(1.0) as usize;
    while 1.0 - (1.0 - epsilon).powi(n as i32) < confidence {
        n += 1;
    }
    Ok(n)
}
