//! Experiment orchestration over the (dataset, treatment, budget, repeat)
//! matrix.
//!
//! Every cell gets its own seed, shuffles its own copy of the table and
//! runs one treatment. Cells run on a bounded rayon pool and are sorted
//! before anything is written, so output does not depend on scheduling.

pub mod curves;
pub mod report;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::backend::{BackendConfig, BackendError, LlmBackend, SurrogateBackend, SynthesisBackend};
use crate::data::{load_table, shuffle_rows, DataError, Table};
use crate::gpm::GpConfig;
use crate::learner::{run_loop, Policy, RunResult, DEFAULT_WARM};
use crate::scoring::Scorer;
use crate::synthcore::{plan_budget, run_synthcore, DEFAULT_SHOTS};
use crate::tpe::TpeConfig;

pub use curves::emit_curves;
pub use report::{rank_cells, CellRecord, CellStatus, DatasetInfo, Envelope, ExperimentReport, Manifest, RankSummary, TimingRecord};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("no datasets found")]
    NoDatasets,
    #[error("{path}: {source}")]
    Dataset { path: String, source: DataError },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("backend: {0}")]
    Backend(#[from] BackendError),
    #[error("report is empty")]
    EmptyReport,
    #[error("bad report file {path}: {message}")]
    BadReport { path: String, message: String },
}

pub(crate) fn io_err(path: &Path, e: impl fmt::Display) -> HarnessError {
    HarnessError::Io { path: path.display().to_string(), message: e.to_string() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Treatment {
    Synthcore,
    UcbGpm,
    Tpe,
    Exploit,
    Explore,
    Random,
    Baseline,
}

impl Treatment {
    pub const ALL: [Treatment; 7] = [
        Treatment::Synthcore,
        Treatment::UcbGpm,
        Treatment::Tpe,
        Treatment::Exploit,
        Treatment::Explore,
        Treatment::Random,
        Treatment::Baseline,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Treatment::Synthcore => "synthcore",
            Treatment::UcbGpm => "ucb_gpm",
            Treatment::Tpe => "tpe",
            Treatment::Exploit => "exploit",
            Treatment::Explore => "explore",
            Treatment::Random => "random",
            Treatment::Baseline => "baseline",
        }
    }

    fn code(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for Treatment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Treatment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Treatment::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown treatment `{s}` (expected one of synthcore, ucb_gpm, tpe, exploit, explore, random, baseline)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stratum {
    Low,
    Medium,
    High,
}

impl Stratum {
    pub fn as_str(self) -> &'static str {
        match self {
            Stratum::Low => "low",
            Stratum::Medium => "medium",
            Stratum::High => "high",
        }
    }

    pub fn of_dims(x_dims: usize) -> Stratum {
        match x_dims {
            0..=5 => Stratum::Low,
            6..=11 => Stratum::Medium,
            _ => Stratum::High,
        }
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Low below 6 independent columns, high above 11.
pub fn classify_dimensionality(table: &Table) -> Stratum {
    Stratum::of_dims(table.x_count())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Surrogate,
    Llm,
}

impl FromStr for BackendKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "surrogate" => Ok(BackendKind::Surrogate),
            "llm" => Ok(BackendKind::Llm),
            _ => Err(format!("unknown backend `{s}` (expected surrogate or llm)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// CSV files, or directories whose `*.csv` files are all used.
    pub data: Vec<PathBuf>,
    pub treatments: Vec<Treatment>,
    pub budgets: Vec<usize>,
    pub repeats: usize,
    pub seed: u64,
    pub backend: BackendKind,
    pub llm: BackendConfig,
    /// Examples per synthesis round.
    pub shots: usize,
    /// Random labels before model-guided acquisition.
    pub warm: usize,
    pub out: PathBuf,
    pub jobs: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            data: Vec::new(),
            treatments: Treatment::ALL.to_vec(),
            budgets: vec![20, 30, 50, 100],
            repeats: 20,
            seed: 0,
            backend: BackendKind::Surrogate,
            llm: BackendConfig::default(),
            shots: DEFAULT_SHOTS,
            warm: DEFAULT_WARM,
            out: PathBuf::from("results"),
            jobs: 1,
        }
    }
}

const DATASET_BITS: u32 = 24;
const TREATMENT_BITS: u32 = 3;
const BUDGET_BITS: u32 = 20;
const REPEAT_BITS: u32 = 17;

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.repeats == 0 {
            return bad("repeats must be at least 1".into());
        }
        if self.repeats >= 1 << REPEAT_BITS {
            return bad(format!("repeats must be below {}", 1u64 << REPEAT_BITS));
        }
        if self.budgets.is_empty() {
            return bad("no budgets".into());
        }
        if self.treatments.is_empty() {
            return bad("no treatments".into());
        }
        if self.jobs == 0 {
            return bad("jobs must be at least 1".into());
        }
        if self.warm < 2 {
            return bad("warm start needs at least 2 labels".into());
        }
        for &b in &self.budgets {
            if b < self.warm || b >= 1 << BUDGET_BITS {
                return bad(format!("budget {b} outside [{}, {})", self.warm, 1u64 << BUDGET_BITS));
            }
        }
        if self.data.is_empty() {
            return Err(HarnessError::NoDatasets);
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&json))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn mix(master: u64, dataset: usize, code: u64, budget: usize, repeat: usize) -> u64 {
    let packed = (dataset as u64) << (TREATMENT_BITS + BUDGET_BITS + REPEAT_BITS)
        | code << (BUDGET_BITS + REPEAT_BITS)
        | (budget as u64) << REPEAT_BITS
        | repeat as u64;
    splitmix64(packed ^ splitmix64(master))
}

/// Seed of one cell. Injective over the packed key for a fixed master
/// seed: the key fits in 64 bits and both mixing steps are bijections.
pub fn cell_seed(master: u64, dataset: usize, treatment: Treatment, budget: usize, repeat: usize) -> u64 {
    debug_assert!(dataset < 1 << DATASET_BITS && budget < 1 << BUDGET_BITS && repeat < 1 << REPEAT_BITS);
    mix(master, dataset, treatment.code(), budget, repeat)
}

/// Seed for the Scott-Knott rng of one (dataset, budget) ranking. Uses the
/// one treatment code no cell uses.
pub fn rank_seed(master: u64, dataset: usize, budget: usize) -> u64 {
    mix(master, dataset, 7, budget, 0)
}

/// Expands directories to their `*.csv` files and returns a sorted,
/// de-duplicated list.
pub fn discover_datasets(paths: &[PathBuf]) -> Result<Vec<PathBuf>, HarnessError> {
    let mut found = Vec::new();
    for p in paths {
        if p.is_dir() {
            let entries = fs::read_dir(p).map_err(|e| io_err(p, e))?;
            for entry in entries {
                let path = entry.map_err(|e| io_err(p, e))?.path();
                if path.is_file() && path.extension().is_some_and(|x| x.eq_ignore_ascii_case("csv")) {
                    found.push(path);
                }
            }
        } else if p.is_file() {
            found.push(p.clone());
        } else {
            return Err(io_err(p, "no such file or directory"));
        }
    }
    found.sort();
    found.dedup();
    if found.is_empty() {
        return Err(HarnessError::NoDatasets);
    }
    Ok(found)
}

fn dataset_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

/// A loaded dataset with its untreated pool statistics.
pub struct LoadedDataset {
    pub info: DatasetInfo,
    pub table: Table,
}

pub fn load_datasets(paths: &[PathBuf]) -> Result<Vec<LoadedDataset>, HarnessError> {
    let files = discover_datasets(paths)?;
    let mut out: Vec<LoadedDataset> = Vec::with_capacity(files.len());
    for path in files {
        let name = dataset_name(&path);
        if out.iter().any(|d| d.info.name == name) {
            return Err(HarnessError::Config(format!("two datasets named `{name}`")));
        }
        let file = fs::File::open(&path).map_err(|e| io_err(&path, e))?;
        let table = load_table(file, &name).map_err(|source| HarnessError::Dataset { path: path.display().to_string(), source })?;
        let info = DatasetInfo::describe(&table, &path);
        out.push(LoadedDataset { info, table });
    }
    Ok(out)
}

pub fn make_backend(cfg: &ExperimentConfig) -> Result<Arc<dyn SynthesisBackend>, HarnessError> {
    Ok(match cfg.backend {
        BackendKind::Surrogate => Arc::new(SurrogateBackend::default()),
        BackendKind::Llm => Arc::new(LlmBackend::new(cfg.llm.clone())?),
    })
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    dataset: usize,
    treatment: Treatment,
    budget: usize,
    repeat: usize,
}

fn run_treatment(table: Table, treatment: Treatment, budget: usize, cfg: &ExperimentConfig, seed: u64, backend: &dyn SynthesisBackend) -> Result<RunResult, String> {
    let policy = match treatment {
        Treatment::Synthcore => {
            let plan = plan_budget(budget, cfg.shots).map_err(|e| e.to_string())?.with_seed(seed);
            return run_synthcore(table, backend, &plan).map_err(|e| e.to_string());
        }
        Treatment::UcbGpm => Policy::Ucb(GpConfig::default()),
        Treatment::Tpe => Policy::Tpe(TpeConfig::default()),
        Treatment::Exploit => Policy::Exploit,
        Treatment::Explore => Policy::Explore,
        Treatment::Random => Policy::Random,
        Treatment::Baseline => unreachable!("baseline does not label"),
    };
    run_loop(table, &policy, budget, cfg.warm, seed).map_err(|e| e.to_string())
}

fn run_cell(cell: Cell, data: &LoadedDataset, cfg: &ExperimentConfig, backend: &dyn SynthesisBackend) -> (CellRecord, TimingRecord) {
    let seed = cell_seed(cfg.seed, cell.dataset, cell.treatment, cell.budget, cell.repeat);
    let info = &data.info;
    let mut rec = CellRecord {
        dataset: info.name.clone(),
        stratum: info.stratum,
        treatment: cell.treatment,
        budget: cell.budget,
        repeat: cell.repeat,
        seed,
        status: CellStatus::Ok,
        error: None,
        best_score: None,
        best_row_id: None,
        labels_spent: 0,
        failed_rounds: 0,
        envelope: None,
    };
    let started = Instant::now();
    if cell.treatment == Treatment::Baseline {
        rec.best_score = Some(info.pool_mean);
    } else {
        let table = shuffle_rows(data.table.clone(), seed);
        let learner_seed = splitmix64(seed);
        match run_treatment(table, cell.treatment, cell.budget, cfg, learner_seed, backend) {
            Ok(r) => {
                rec.best_score = Some(r.best_score);
                rec.best_row_id = Some(r.best_row_id);
                rec.labels_spent = r.labels_spent;
                rec.failed_rounds = r.failed_rounds;
            }
            Err(e) => {
                log::warn!("{} {} B={} r={} failed: {e}", info.name, cell.treatment, cell.budget, cell.repeat);
                rec.status = CellStatus::Failed;
                rec.error = Some(e);
            }
        }
    }
    rec.envelope = rec.best_score.map(|s| Envelope::classify(s, info.pool_min, info.pool_mean));
    let timing = TimingRecord {
        dataset: rec.dataset.clone(),
        treatment: rec.treatment,
        budget: rec.budget,
        repeat: rec.repeat,
        wall_time: started.elapsed().as_secs_f64(),
    };
    (rec, timing)
}

/// Runs the whole matrix with the backend the config names.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    cfg.validate()?;
    let backend = make_backend(cfg)?;
    run_experiment_with(cfg, backend.as_ref())
}

/// Runs the whole matrix against a caller-supplied backend.
pub fn run_experiment_with(cfg: &ExperimentConfig, backend: &dyn SynthesisBackend) -> Result<ExperimentReport, HarnessError> {
    cfg.validate()?;
    let started_at = chrono::Utc::now().to_rfc3339();
    let datasets = load_datasets(&cfg.data)?;
    if datasets.len() >= 1 << DATASET_BITS {
        return Err(HarnessError::Config("too many datasets".into()));
    }
    let mut treatments = cfg.treatments.clone();
    treatments.sort();
    treatments.dedup();
    let mut budgets = cfg.budgets.clone();
    budgets.sort_unstable();
    budgets.dedup();

    let mut cells = Vec::new();
    for dataset in 0..datasets.len() {
        for &treatment in &treatments {
            for &budget in &budgets {
                for repeat in 0..cfg.repeats {
                    cells.push(Cell { dataset, treatment, budget, repeat });
                }
            }
        }
    }
    log::info!("{} datasets, {} cells, {} jobs", datasets.len(), cells.len(), cfg.jobs);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    let outcomes: Vec<(CellRecord, TimingRecord)> =
        pool.install(|| cells.par_iter().map(|&c| run_cell(c, &datasets[c.dataset], cfg, backend)).collect());
    let (mut records, mut timings): (Vec<_>, Vec<_>) = outcomes.into_iter().unzip();
    records.sort_by(|a, b| a.key().cmp(&b.key()));
    timings.sort_by(|a, b| a.key().cmp(&b.key()));

    let infos: Vec<DatasetInfo> = datasets.into_iter().map(|d| d.info).collect();
    let ranks = rank_cells(&records, &infos, cfg.seed, &Default::default());
    let manifest = Manifest::new(cfg, &records, started_at, backend.stats());
    Ok(ExperimentReport { records, timings, datasets: infos, ranks, manifest })
}

/// Mean and minimum of the true scores over the whole pool.
pub fn pool_stats(table: &Table) -> (f64, f64) {
    let scores = Scorer::new(table).true_scores(table);
    let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = scores.iter().sum::<f64>() / scores.len() as f64;
    (min, mean)
}
