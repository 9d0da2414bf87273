//! Ensemble of independent few-shot synthesis rounds.
//!
//! A run labels `L` random rows, then performs `M` rounds. Each round
//! labels `N` fresh random rows, splits them into Best and Rest halves,
//! asks a [`SynthesisBackend`] for a better row in a fresh session, and
//! labels the pool row nearest to the proposal. The best of all
//! `L + M * (N + 1)` labels is returned.
//!
//! Rounds share nothing but the table metadata (fixed after the warm
//! start) and the ledger; round `i` draws from its own rng stream.

pub mod prompt;

use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::backend::{schema_for, BackendError, SynthesisBackend, SynthesisRequest, SyntheticRow};
use crate::data::{Cell, ColumnSpec, Row, Table};
use crate::learner::{unlabeled_ids, LabelLedger, LearnError, RunResult};
use crate::scoring::{best_rest_split, Scored, Scorer};

pub use prompt::{build_examples, build_meta, render_prompt, Messages, PromptBundle};

/// Re-asks after a malformed reply before a round is abandoned.
pub const MALFORMED_RETRIES: usize = 2;

/// Share of the budget spent on the warm start.
pub const WARM_FRACTION: f64 = 0.6;

/// Default examples shown per round.
pub const DEFAULT_SHOTS: usize = 3;

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("budget {budget} cannot afford one round of {shots} shots plus a warm start of 2")]
    BudgetTooSmall { budget: usize, shots: usize },
    #[error("inconsistent config: {0}")]
    BadConfig(String),
    #[error("table has {rows} rows, fewer than the budget {budget}")]
    PoolExhausted { budget: usize, rows: usize },
    #[error("nearest-row search over an empty pool")]
    EmptyPool,
    #[error(transparent)]
    Learn(#[from] LearnError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthConfig {
    pub budget: usize,
    pub warm: usize,
    pub rounds: usize,
    pub shots: usize,
    pub seed: u64,
}

impl SynthConfig {
    /// Explicit `(L, M, N)`; must satisfy `B = L + M * (N + 1)`.
    pub fn new(budget: usize, warm: usize, rounds: usize, shots: usize, seed: u64) -> Result<Self, SynthError> {
        let cfg = SynthConfig { budget, warm, rounds, shots, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        if self.warm < 2 || self.rounds < 1 || self.shots < 2 {
            return Err(SynthError::BadConfig(format!(
                "need L >= 2, M >= 1, N >= 2; got L={}, M={}, N={}",
                self.warm, self.rounds, self.shots
            )));
        }
        if self.warm + self.rounds * (self.shots + 1) != self.budget {
            return Err(SynthError::BadConfig(format!(
                "{} + {} * ({} + 1) != {}",
                self.warm, self.rounds, self.shots, self.budget
            )));
        }
        Ok(())
    }

    pub fn with_seed(self, seed: u64) -> Self {
        SynthConfig { seed, ..self }
    }
}

/// Splits a budget into warm start and rounds: `M = floor(0.4 B / (N + 1))`
/// (at least 1) and `L = B - M (N + 1)`.
pub fn plan_budget(budget: usize, shots: usize) -> Result<SynthConfig, SynthError> {
    if shots < 2 {
        return Err(SynthError::BadConfig(format!("N must be at least 2, got {shots}")));
    }
    if budget < 10 || budget < shots + 1 + 2 {
        return Err(SynthError::BudgetTooSmall { budget, shots });
    }
    let rounds = ((((1.0 - WARM_FRACTION) * budget as f64) + 1e-9) / (shots + 1) as f64).floor() as usize;
    let rounds = rounds.max(1);
    let warm = budget - rounds * (shots + 1);
    SynthConfig::new(budget, warm, rounds, shots, 0)
}

/// Pool row closest to the synthetic row. Numeric gaps are scaled by the
/// column range, symbols compare 0/1, and the Euclidean norm is divided by
/// `sqrt(d)`. Ties go to the smaller id.
pub fn nearest_row(pool: &[&Row], synthetic: &SyntheticRow, x_columns: &[ColumnSpec]) -> Result<(usize, f64), SynthError> {
    let d = x_columns.len().max(1) as f64;
    let mut best: Option<(usize, f64)> = None;
    for row in pool {
        let sq: f64 = row
            .x
            .iter()
            .zip(&synthetic.x)
            .zip(x_columns)
            .map(|((a, b), col)| match (a, b) {
                (Cell::Num(p), Cell::Num(q)) => {
                    let span = col.hi - col.lo;
                    if span > 0.0 { ((p - q) / span).powi(2) } else { 0.0 }
                }
                (Cell::Sym(p), Cell::Sym(q)) => f64::from(u8::from(p != q)),
                _ => 1.0,
            })
            .sum();
        let dist = sq.sqrt() / d.sqrt();
        best = match best {
            Some((bid, bd)) if bd < dist || (bd == dist && bid < row.id) => Some((bid, bd)),
            _ => Some((row.id, dist)),
        };
    }
    best.ok_or(SynthError::EmptyPool)
}

/// A round that stopped early. Labels bought before the failure stay in
/// the ledger and are listed here.
#[derive(Debug, Error, PartialEq)]
#[error("synthesis round aborted after {} labels: {cause}", labeled.len())]
pub struct RoundError {
    pub labeled: Vec<Scored>,
    pub cause: RoundFailure,
}

#[derive(Debug, Error, PartialEq)]
pub enum RoundFailure {
    #[error(transparent)]
    Backend(BackendError),
    #[error(transparent)]
    Synth(SynthError),
}

/// Everything a round needs besides the ledger and rng.
pub struct RoundContext<'a> {
    pub scorer: &'a Scorer,
    pub meta: &'a str,
    pub backend: &'a dyn SynthesisBackend,
    pub shots: usize,
}

fn abort(labeled: Vec<Scored>, cause: RoundFailure) -> RoundError {
    RoundError { labeled, cause }
}

/// One few-shot round: label `N` random rows, prompt, label the row nearest
/// the reply. Returns all `N + 1` labels.
pub fn synthesize_round(
    table: &mut Table,
    ledger: &mut LabelLedger,
    ctx: &RoundContext<'_>,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Scored>, RoundError> {
    let n = ctx.shots;
    let pool = unlabeled_ids(table);
    if pool.len() < n + 1 || ledger.remaining() < n + 1 {
        let cause = SynthError::PoolExhausted { budget: ledger.budget(), rows: table.len() };
        return Err(abort(Vec::new(), RoundFailure::Synth(cause)));
    }

    let mut picks: Vec<usize> = sample(rng, pool.len(), n).into_iter().map(|i| pool[i]).collect();
    picks.sort_unstable();
    let mut labeled = Vec::with_capacity(n + 1);
    for id in picks {
        match ledger.label(table, ctx.scorer, id) {
            Ok(s) => labeled.push(s),
            Err(e) => return Err(abort(labeled, RoundFailure::Synth(e.into()))),
        }
    }

    let (best, rest) = match best_rest_split(&labeled, 0.5) {
        Ok(split) => split,
        Err(e) => return Err(abort(labeled, RoundFailure::Synth(LearnError::from(e).into()))),
    };
    let bundle = PromptBundle {
        meta_markdown: ctx.meta.to_string(),
        examples_markdown: build_examples(table, &best, &rest),
        output_columns: table.x_columns().map(|c| c.header_name()).collect(),
    };
    let Messages { system, human, task } = render_prompt(&bundle);
    let request = SynthesisRequest { system, human, task, schema: schema_for(table) };

    let mut attempt = 0;
    let synthetic = loop {
        match ctx.backend.synthesize(&request, rng) {
            Ok(row) => break row,
            Err(e) if e.is_malformed() && attempt < MALFORMED_RETRIES => {
                log::debug!("malformed synthesis reply, retrying: {e}");
                attempt += 1;
            }
            Err(e) => return Err(abort(labeled, RoundFailure::Backend(e))),
        }
    };

    let x_columns = table.x_specs();
    let remaining: Vec<&Row> = table.rows.iter().filter(|r| !r.is_labeled()).collect();
    let target = match nearest_row(&remaining, &synthetic, &x_columns) {
        Ok((id, _)) => id,
        Err(e) => return Err(abort(labeled, RoundFailure::Synth(e))),
    };
    match ledger.label(table, ctx.scorer, target) {
        Ok(s) => labeled.push(s),
        Err(e) => return Err(abort(labeled, RoundFailure::Synth(e.into()))),
    }
    Ok(labeled)
}

/// Rng for round `round` (0-based) of a run; stream 0 is the warm start.
pub fn round_rng(seed: u64, round: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(round as u64 + 1);
    rng
}

/// Full ensemble run on an owned (already shuffled) table.
pub fn run_synthcore(mut table: Table, backend: &dyn SynthesisBackend, config: &SynthConfig) -> Result<RunResult, SynthError> {
    config.validate()?;
    if table.len() < config.budget {
        return Err(SynthError::PoolExhausted { budget: config.budget, rows: table.len() });
    }
    let started = Instant::now();
    let scorer = Scorer::new(&table);
    let mut ledger = LabelLedger::new(config.budget);

    let mut warm_rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut warm_ids = sample(&mut warm_rng, table.len(), config.warm).into_vec();
    warm_ids.sort_unstable();
    for id in warm_ids {
        ledger.label(&mut table, &scorer, id)?;
    }
    let meta = build_meta(&table, ledger.labeled());

    let ctx = RoundContext { scorer: &scorer, meta: &meta, backend, shots: config.shots };
    let mut failed = 0;
    for round in 0..config.rounds {
        let mut rng = round_rng(config.seed, round);
        if let Err(e) = synthesize_round(&mut table, &mut ledger, &ctx, &mut rng) {
            log::warn!("round {round} of {} failed: {e}", table.name);
            failed += 1;
        }
    }
    let mut result = RunResult::from_ledger(&ledger, started.elapsed().as_secs_f64()).expect("warm start labels >= 2");
    result.failed_rounds = failed;
    Ok(result)
}
