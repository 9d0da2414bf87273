//! Result records, the manifest, rank aggregation and report files.
//!
//! Output directory layout:
//!
//! - `results.jsonl`: one [`CellRecord`] per line, sorted by cell key. No
//!   wall-clock data, so reruns with one seed are byte-identical.
//! - `timings.jsonl`: one [`TimingRecord`] per line.
//! - `datasets.json`: the [`DatasetInfo`] list.
//! - `manifest.json`: config, config hash, seeds, timestamps, backend stats.
//! - `ranks_B{budget}_{stratum}.csv` / `.md`: rank tables for the `low`,
//!   `medium`, `high` strata and `all`.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{io_err, pool_stats, rank_seed, ExperimentConfig, HarnessError, Stratum, Treatment};
use crate::backend::BackendStats;
use crate::data::Table;
use crate::stats::{rank_table, scott_knott, RankTable, RankedGroups, SkConfig, TreatmentSamples};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub name: String,
    pub path: String,
    pub rows: usize,
    pub x_dims: usize,
    pub y_dims: usize,
    pub stratum: Stratum,
    /// Best true score in the pool.
    pub pool_min: f64,
    /// Mean true score over the pool.
    pub pool_mean: f64,
}

impl DatasetInfo {
    pub fn describe(table: &Table, path: &Path) -> Self {
        let (pool_min, pool_mean) = pool_stats(table);
        DatasetInfo {
            name: table.name.clone(),
            path: path.display().to_string(),
            rows: table.len(),
            x_dims: table.x_count(),
            y_dims: table.y_count(),
            stratum: Stratum::of_dims(table.x_count()),
            pool_min,
            pool_mean,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellStatus {
    Ok,
    Failed,
}

/// Where a best score falls relative to the pool minimum and mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Envelope {
    Inside,
    /// Worse than an untreated random row on average.
    AboveMean,
    /// Better than the pool optimum; signals a scoring bug.
    BelowMin,
}

impl Envelope {
    pub fn classify(score: f64, pool_min: f64, pool_mean: f64) -> Envelope {
        const TOL: f64 = 1e-12;
        if score < pool_min - TOL {
            Envelope::BelowMin
        } else if score > pool_mean + TOL {
            Envelope::AboveMean
        } else {
            Envelope::Inside
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub dataset: String,
    pub stratum: Stratum,
    pub treatment: Treatment,
    pub budget: usize,
    pub repeat: usize,
    pub seed: u64,
    pub status: CellStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub best_score: Option<f64>,
    pub best_row_id: Option<usize>,
    pub labels_spent: usize,
    pub failed_rounds: usize,
    pub envelope: Option<Envelope>,
}

impl CellRecord {
    pub fn key(&self) -> (&str, Treatment, usize, usize) {
        (&self.dataset, self.treatment, self.budget, self.repeat)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRecord {
    pub dataset: String,
    pub treatment: Treatment,
    pub budget: usize,
    pub repeat: usize,
    /// Seconds.
    pub wall_time: f64,
}

impl TimingRecord {
    pub fn key(&self) -> (&str, Treatment, usize, usize) {
        (&self.dataset, self.treatment, self.budget, self.repeat)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSeed {
    pub dataset: String,
    pub treatment: Treatment,
    pub budget: usize,
    pub repeat: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool_version: String,
    pub config: ExperimentConfig,
    pub config_sha256: String,
    pub master_seed: u64,
    pub started_at: String,
    pub finished_at: String,
    pub cells: usize,
    pub failed_cells: usize,
    /// True when any configured cell failed.
    pub incomplete: bool,
    pub envelope_above_mean: usize,
    pub envelope_below_min: usize,
    pub backend_stats: BackendStats,
    pub cell_seeds: Vec<CellSeed>,
}

impl Manifest {
    pub fn new(cfg: &ExperimentConfig, records: &[CellRecord], started_at: String, backend_stats: BackendStats) -> Self {
        let failed_cells = records.iter().filter(|r| r.status == CellStatus::Failed).count();
        let count = |e: Envelope| records.iter().filter(|r| r.envelope == Some(e)).count();
        Manifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config: cfg.clone(),
            config_sha256: cfg.hash(),
            master_seed: cfg.seed,
            started_at,
            finished_at: chrono::Utc::now().to_rfc3339(),
            cells: records.len(),
            failed_cells,
            incomplete: failed_cells > 0,
            envelope_above_mean: count(Envelope::AboveMean),
            envelope_below_min: count(Envelope::BelowMin),
            backend_stats,
            cell_seeds: records
                .iter()
                .map(|r| CellSeed { dataset: r.dataset.clone(), treatment: r.treatment, budget: r.budget, repeat: r.repeat, seed: r.seed })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StratumTable {
    pub budget: usize,
    /// `low`, `medium`, `high` or `all`.
    pub stratum: String,
    pub table: RankTable,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RankSummary {
    /// Scott-Knott groups keyed by (budget, dataset).
    pub groups: BTreeMap<(usize, String), RankedGroups>,
    pub tables: Vec<StratumTable>,
    /// (budget, dataset) pairs left out because a treatment had fewer than
    /// two successful repeats.
    pub skipped: Vec<(usize, String)>,
}

/// Scott-Knott per (dataset, budget), then rank tables per stratum and
/// overall. Deterministic in `master_seed`.
pub fn rank_cells(records: &[CellRecord], datasets: &[DatasetInfo], master_seed: u64, sk: &SkConfig) -> RankSummary {
    let mut samples: BTreeMap<(usize, &str), BTreeMap<Treatment, Vec<f64>>> = BTreeMap::new();
    let mut treatments: BTreeMap<Treatment, ()> = BTreeMap::new();
    for r in records {
        treatments.insert(r.treatment, ());
        if let (CellStatus::Ok, Some(s)) = (r.status, r.best_score) {
            samples.entry((r.budget, &r.dataset)).or_default().entry(r.treatment).or_default().push(s);
        }
    }
    let mut budgets: Vec<usize> = records.iter().map(|r| r.budget).collect();
    budgets.sort_unstable();
    budgets.dedup();

    let mut summary = RankSummary::default();
    for &budget in &budgets {
        for (idx, info) in datasets.iter().enumerate() {
            let Some(per) = samples.get(&(budget, info.name.as_str())) else {
                continue;
            };
            let complete = treatments.keys().all(|t| per.get(t).is_some_and(|v| v.len() >= 2));
            if !complete {
                summary.skipped.push((budget, info.name.clone()));
                continue;
            }
            let ts: Vec<TreatmentSamples> = per.iter().map(|(t, v)| TreatmentSamples::new(t.as_str(), v.clone())).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(rank_seed(master_seed, idx, budget));
            match scott_knott(&ts, sk, &mut rng) {
                Ok(g) => {
                    summary.groups.insert((budget, info.name.clone()), g);
                }
                Err(e) => {
                    log::warn!("ranking {} at B={budget} failed: {e}", info.name);
                    summary.skipped.push((budget, info.name.clone()));
                }
            }
        }
        let strata: [(&str, Option<Stratum>); 4] =
            [("low", Some(Stratum::Low)), ("medium", Some(Stratum::Medium)), ("high", Some(Stratum::High)), ("all", None)];
        for (label, stratum) in strata {
            let per_dataset: BTreeMap<String, RankedGroups> = datasets
                .iter()
                .filter(|d| stratum.is_none_or(|s| d.stratum == s))
                .filter_map(|d| summary.groups.get(&(budget, d.name.clone())).map(|g| (d.name.clone(), g.clone())))
                .collect();
            if per_dataset.is_empty() {
                continue;
            }
            match rank_table(&per_dataset) {
                Ok(table) => summary.tables.push(StratumTable { budget, stratum: label.to_string(), table }),
                Err(e) => log::warn!("rank table B={budget} {label}: {e}"),
            }
        }
    }
    summary
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub records: Vec<CellRecord>,
    pub timings: Vec<TimingRecord>,
    pub datasets: Vec<DatasetInfo>,
    pub ranks: RankSummary,
    pub manifest: Manifest,
}

pub const RESULTS_FILE: &str = "results.jsonl";
pub const TIMINGS_FILE: &str = "timings.jsonl";
pub const DATASETS_FILE: &str = "datasets.json";
pub const MANIFEST_FILE: &str = "manifest.json";

fn write_file(path: &Path, contents: &[u8]) -> Result<(), HarnessError> {
    let mut f = fs::File::create(path).map_err(|e| io_err(path, e))?;
    f.write_all(contents).map_err(|e| io_err(path, e))
}

fn jsonl<T: Serialize>(items: &[T]) -> Vec<u8> {
    let mut out = Vec::new();
    for item in items {
        serde_json::to_writer(&mut out, item).expect("records serialize");
        out.push(b'\n');
    }
    out
}

fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, HarnessError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| {
            serde_json::from_str(l)
                .map_err(|e| HarnessError::BadReport { path: path.display().to_string(), message: format!("line {}: {e}", i + 1) })
        })
        .collect()
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, HarnessError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::BadReport { path: path.display().to_string(), message: e.to_string() })
}

/// Writes the rank tables as CSV and markdown.
pub fn write_ranks(ranks: &RankSummary, out: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
    for t in &ranks.tables {
        let stem = format!("ranks_B{}_{}", t.budget, t.stratum);
        write_file(&out.join(format!("{stem}.csv")), t.table.to_csv().as_bytes())?;
        let md = format!("B = {}, {} ({} datasets)\n\n{}", t.budget, t.stratum, t.table.datasets, t.table.to_markdown());
        write_file(&out.join(format!("{stem}.md")), md.as_bytes())?;
    }
    Ok(())
}

impl ExperimentReport {
    pub fn write(&self, out: &Path) -> Result<(), HarnessError> {
        fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
        write_file(&out.join(RESULTS_FILE), &jsonl(&self.records))?;
        write_file(&out.join(TIMINGS_FILE), &jsonl(&self.timings))?;
        let datasets = serde_json::to_vec_pretty(&self.datasets).expect("datasets serialize");
        write_file(&out.join(DATASETS_FILE), &datasets)?;
        let manifest = serde_json::to_vec_pretty(&self.manifest).expect("manifest serializes");
        write_file(&out.join(MANIFEST_FILE), &manifest)?;
        write_ranks(&self.ranks, out)
    }

    /// Reloads a written report. Ranks are recomputed from the records.
    pub fn read(dir: &Path) -> Result<Self, HarnessError> {
        let records: Vec<CellRecord> = read_jsonl(&dir.join(RESULTS_FILE))?;
        let timings: Vec<TimingRecord> = read_jsonl(&dir.join(TIMINGS_FILE))?;
        let datasets: Vec<DatasetInfo> = read_json(&dir.join(DATASETS_FILE))?;
        let manifest: Manifest = read_json(&dir.join(MANIFEST_FILE))?;
        if records.is_empty() {
            return Err(HarnessError::EmptyReport);
        }
        let ranks = rank_cells(&records, &datasets, manifest.master_seed, &SkConfig::default());
        Ok(ExperimentReport { records, timings, datasets, ranks, manifest })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(dataset: &str, t: Treatment, repeat: usize, score: f64) -> CellRecord {
        CellRecord {
            dataset: dataset.into(),
            stratum: Stratum::Low,
            treatment: t,
            budget: 20,
            repeat,
            seed: 0,
            status: CellStatus::Ok,
            error: None,
            best_score: Some(score),
            best_row_id: Some(0),
            labels_spent: 20,
            failed_rounds: 0,
            envelope: Some(Envelope::Inside),
        }
    }

    fn info(name: &str, stratum: Stratum) -> DatasetInfo {
        DatasetInfo { name: name.into(), path: String::new(), rows: 100, x_dims: 3, y_dims: 2, stratum, pool_min: 0.0, pool_mean: 0.5 }
    }

    #[test]
    fn envelope_classes() {
        assert_eq!(Envelope::classify(0.2, 0.1, 0.5), Envelope::Inside);
        assert_eq!(Envelope::classify(0.1, 0.1, 0.5), Envelope::Inside);
        assert_eq!(Envelope::classify(0.6, 0.1, 0.5), Envelope::AboveMean);
        assert_eq!(Envelope::classify(0.0, 0.1, 0.5), Envelope::BelowMin);
    }

    #[test]
    fn ranking_separates_clear_winner() {
        let mut records = Vec::new();
        for d in ["a", "b"] {
            for r in 0..10 {
                records.push(rec(d, Treatment::Tpe, r, 0.1 + r as f64 * 1e-3));
                records.push(rec(d, Treatment::Random, r, 0.4 + r as f64 * 1e-3));
            }
        }
        let datasets = [info("a", Stratum::Low), info("b", Stratum::High)];
        let s = rank_cells(&records, &datasets, 1, &SkConfig::default());
        assert_eq!(s.groups.len(), 2);
        let labels: Vec<&str> = s.tables.iter().map(|t| t.stratum.as_str()).collect();
        assert_eq!(labels, ["low", "high", "all"]);
        let all = &s.tables[2].table;
        assert_eq!(all.cell("tpe", 0), Some(100));
        assert_eq!(all.cell("random", 1), Some(100));
        assert_eq!(s, rank_cells(&records, &datasets, 1, &SkConfig::default()));
    }

    #[test]
    fn incomplete_dataset_is_skipped() {
        let mut records = vec![rec("a", Treatment::Tpe, 0, 0.1), rec("a", Treatment::Tpe, 1, 0.1), rec("a", Treatment::Random, 0, 0.3)];
        records[2].status = CellStatus::Ok;
        let s = rank_cells(&records, &[info("a", Stratum::Low)], 0, &SkConfig::default());
        assert!(s.groups.is_empty());
        assert_eq!(s.skipped, vec![(20, "a".to_string())]);
    }
}
