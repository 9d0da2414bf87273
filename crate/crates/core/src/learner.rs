//! The budgeted labeling loop over a fixed pool of rows, and the simple
//! acquisition policies that plug into it.
//!
//! A run labels `warm` random rows, then repeatedly asks its [`Policy`] for
//! one unlabeled row until the budget is spent, and returns the labeled row
//! closest to heaven. Model-based policies refit from the ledger on every
//! step.
//!
//! Exploit and explore use a two-class Naive Bayes model over the best and
//! rest halves of the labeled rows: exploit picks the row maximizing `b / r`,
//! explore the row minimizing `|b - r|`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{Cell, ColumnSpec, Kind, Row, Table};
use crate::encode::Encoder;
use crate::gpm::{acquire_ucb, GpConfig, GpError, GpModel};
use crate::scoring::{best_rest_split, ScoreError, Scored, Scorer};
use crate::tpe::{acquire_tpe, ParzenPair, TpeConfig, TpeError};

/// Labels bought before any model is consulted.
pub const DEFAULT_WARM: usize = 4;

#[derive(Debug, Error, PartialEq)]
pub enum LearnError {
    #[error("budget {budget} must be at least warm start {warm}, and warm at least 2")]
    BadBudget { budget: usize, warm: usize },
    #[error("pool of {rows} rows cannot supply {budget} labels")]
    PoolExhausted { budget: usize, rows: usize },
    #[error("budget of {0} labels already spent")]
    BudgetSpent(usize),
    #[error("acquisition over an empty pool")]
    EmptyPool,
    #[error("row {0} does not exist")]
    NoSuchRow(usize),
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error(transparent)]
    Gp(#[from] GpError),
    #[error(transparent)]
    Tpe(#[from] TpeError),
}

/// Which rows have been labeled, and at what cost.
#[derive(Debug, Clone)]
pub struct LabelLedger {
    budget: usize,
    labeled: Vec<Scored>,
}

impl LabelLedger {
    pub fn new(budget: usize) -> Self {
        LabelLedger { budget, labeled: Vec::with_capacity(budget) }
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn spent(&self) -> usize {
        self.labeled.len()
    }

    pub fn remaining(&self) -> usize {
        self.budget - self.labeled.len()
    }

    /// Labeled rows in labeling order.
    pub fn labeled(&self) -> &[Scored] {
        &self.labeled
    }

    /// Reveals a row's goals and records its score. Labeling an already
    /// labeled row returns its score and spends nothing.
    pub fn label(&mut self, table: &mut Table, scorer: &Scorer, id: usize) -> Result<Scored, LearnError> {
        if id >= table.len() {
            return Err(LearnError::NoSuchRow(id));
        }
        if table.row(id).is_labeled() {
            if let Some(s) = self.labeled.iter().find(|s| s.id == id) {
                return Ok(*s);
            }
        }
        if self.remaining() == 0 {
            return Err(LearnError::BudgetSpent(self.budget));
        }
        let row = table.row_mut(id);
        row.reveal();
        let scored = Scored { id, score: scorer.score(row)? };
        self.labeled.push(scored);
        Ok(scored)
    }

    /// The labeled row with the lowest score (ties to the smaller id).
    pub fn best(&self) -> Option<Scored> {
        self.labeled
            .iter()
            .copied()
            .min_by(|a, b| a.score.total_cmp(&b.score).then(a.id.cmp(&b.id)))
    }
}

/// Ids of unlabeled rows, ascending.
pub fn unlabeled_ids(table: &Table) -> Vec<usize> {
    table.rows.iter().filter(|r| !r.is_labeled()).map(|r| r.id).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    pub row_id: usize,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub best_row_id: usize,
    pub best_score: f64,
    pub labels_spent: usize,
    pub trace: Vec<TraceStep>,
    /// Seconds; excluded from reproducibility comparisons.
    pub wall_time: f64,
    /// Synthesis rounds abandoned after backend failures.
    #[serde(default)]
    pub failed_rounds: usize,
}

impl RunResult {
    pub fn from_ledger(ledger: &LabelLedger, wall_time: f64) -> Option<RunResult> {
        let best = ledger.best()?;
        Some(RunResult {
            best_row_id: best.id,
            best_score: best.score,
            labels_spent: ledger.spent(),
            trace: ledger
                .labeled()
                .iter()
                .enumerate()
                .map(|(step, s)| TraceStep { step, row_id: s.id, score: s.score })
                .collect(),
            wall_time,
            failed_rounds: 0,
        })
    }
}

/// A one-row-at-a-time acquisition policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Policy {
    Random,
    Exploit,
    Explore,
    Ucb(GpConfig),
    Tpe(TpeConfig),
}

impl Policy {
    fn needs_encoding(&self) -> bool {
        matches!(self, Policy::Ucb(_) | Policy::Tpe(_))
    }
}

/// Uniform choice from the pool.
pub fn acquire_random<R: Rng + ?Sized>(pool: &[usize], rng: &mut R) -> Result<usize, LearnError> {
    if pool.is_empty() {
        return Err(LearnError::EmptyPool);
    }
    Ok(pool[rng.random_range(0..pool.len())])
}

#[derive(Debug, Clone)]
enum Attribute {
    Gaussian { mean: f64, sd: f64 },
    Levels { counts: HashMap<String, usize>, n: usize, k: usize },
}

#[derive(Debug, Clone)]
struct ClassModel {
    log_prior: f64,
    attrs: Vec<Attribute>,
}

impl ClassModel {
    fn fit(columns: &[ColumnSpec], rows: &[&Row], total: usize) -> Self {
        let n = rows.len();
        let attrs = columns
            .iter()
            .enumerate()
            .map(|(j, col)| match col.kind {
                Kind::Numeric => {
                    let vals: Vec<f64> = rows.iter().filter_map(|r| r.x[j].as_num()).collect();
                    let mean = vals.iter().sum::<f64>() / n as f64;
                    let sd = if n > 1 {
                        (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
                    } else {
                        0.0
                    };
                    Attribute::Gaussian { mean, sd: sd.max(1e-6 * col.range()).max(1e-12) }
                }
                Kind::Symbolic => {
                    let mut counts = HashMap::new();
                    for r in rows {
                        if let Cell::Sym(s) = &r.x[j] {
                            *counts.entry(s.clone()).or_insert(0) += 1;
                        }
                    }
                    Attribute::Levels { counts, n, k: col.levels.len().max(1) }
                }
            })
            .collect();
        ClassModel { log_prior: (n as f64 / total as f64).ln(), attrs }
    }

    fn log_likelihood(&self, row: &Row) -> f64 {
        let mut total = self.log_prior;
        for (attr, cell) in self.attrs.iter().zip(&row.x) {
            total += match (attr, cell) {
                (Attribute::Gaussian { mean, sd }, Cell::Num(v)) => {
                    -0.5 * ((v - mean) / sd).powi(2) - sd.ln() - 0.5 * (2.0 * PI).ln()
                }
                (Attribute::Levels { counts, n, k }, Cell::Sym(s)) => {
                    let c = counts.get(s).copied().unwrap_or(0);
                    ((c + 1) as f64 / (n + k) as f64).ln()
                }
                _ => 0.0,
            };
        }
        total
    }
}

/// Two-class Naive Bayes over `x`: Gaussian per numeric attribute,
/// Laplace-smoothed frequencies per symbolic attribute, priors by class size.
#[derive(Debug, Clone)]
pub struct NaiveBayes {
    best: ClassModel,
    rest: ClassModel,
}

impl NaiveBayes {
    pub fn fit(x_columns: &[ColumnSpec], best: &[&Row], rest: &[&Row]) -> Result<Self, LearnError> {
        if best.is_empty() || rest.is_empty() {
            return Err(LearnError::Score(ScoreError::TooFewRows(best.len() + rest.len())));
        }
        let total = best.len() + rest.len();
        Ok(NaiveBayes {
            best: ClassModel::fit(x_columns, best, total),
            rest: ClassModel::fit(x_columns, rest, total),
        })
    }

    /// `(ln b, ln r)`.
    pub fn log_likelihoods(&self, row: &Row) -> (f64, f64) {
        (self.best.log_likelihood(row), self.rest.log_likelihood(row))
    }
}

/// Best and rest class likelihoods of a row's `x` values.
pub fn likelihoods(x_columns: &[ColumnSpec], row: &Row, best: &[&Row], rest: &[&Row]) -> Result<(f64, f64), LearnError> {
    let (b, r) = NaiveBayes::fit(x_columns, best, rest)?.log_likelihoods(row);
    Ok((b.exp(), r.exp()))
}

/// `ln |b - r|` from the two log likelihoods, without leaving log space.
fn log_abs_gap(lb: f64, lr: f64) -> f64 {
    let hi = lb.max(lr);
    let d = (lb - lr).abs();
    if d == 0.0 {
        return f64::NEG_INFINITY;
    }
    hi + (-(-d).exp()).ln_1p()
}

fn argmax_by<F>(pool: &[&Row], key: F) -> Result<usize, LearnError>
where
    F: Fn(&Row) -> f64,
{
    let mut best: Option<(usize, f64)> = None;
    for row in pool {
        let v = key(row);
        best = match best {
            Some((bid, bv)) if bv > v || (bv == v && bid < row.id) => Some((bid, bv)),
            _ => Some((row.id, v)),
        };
    }
    best.map(|(id, _)| id).ok_or(LearnError::EmptyPool)
}

/// Pool row maximizing `b / r`.
pub fn acquire_exploit(x_columns: &[ColumnSpec], pool: &[&Row], best: &[&Row], rest: &[&Row]) -> Result<usize, LearnError> {
    if pool.is_empty() {
        return Err(LearnError::EmptyPool);
    }
    let nb = NaiveBayes::fit(x_columns, best, rest)?;
    argmax_by(pool, |row| {
        let (lb, lr) = nb.log_likelihoods(row);
        lb - lr
    })
}

/// Pool row maximizing `1 / |b - r|`.
pub fn acquire_explore(x_columns: &[ColumnSpec], pool: &[&Row], best: &[&Row], rest: &[&Row]) -> Result<usize, LearnError> {
    if pool.is_empty() {
        return Err(LearnError::EmptyPool);
    }
    let nb = NaiveBayes::fit(x_columns, best, rest)?;
    argmax_by(pool, |row| {
        let (lb, lr) = nb.log_likelihoods(row);
        -log_abs_gap(lb, lr)
    })
}

fn best_rest_rows<'t>(table: &'t Table, ledger: &LabelLedger) -> Result<(Vec<&'t Row>, Vec<&'t Row>), LearnError> {
    let (best, rest) = best_rest_split(ledger.labeled(), 0.5)?;
    Ok((
        best.iter().map(|s| table.row(s.id)).collect(),
        rest.iter().map(|s| table.row(s.id)).collect(),
    ))
}

fn next_row(
    policy: &Policy,
    table: &Table,
    ledger: &LabelLedger,
    encoded: &[Vec<f64>],
    encoder: Option<&Encoder>,
    rng: &mut ChaCha8Rng,
) -> Result<usize, LearnError> {
    let pool = unlabeled_ids(table);
    if pool.is_empty() {
        return Err(LearnError::PoolExhausted { budget: ledger.budget(), rows: table.len() });
    }
    match policy {
        Policy::Random => acquire_random(&pool, rng),
        Policy::Exploit | Policy::Explore => {
            let x_columns = table.x_specs();
            let rows: Vec<&Row> = pool.iter().map(|&id| table.row(id)).collect();
            let (best, rest) = best_rest_rows(table, ledger)?;
            if *policy == Policy::Exploit {
                acquire_exploit(&x_columns, &rows, &best, &rest)
            } else {
                acquire_explore(&x_columns, &rows, &best, &rest)
            }
        }
        Policy::Ucb(cfg) => {
            let xs = ledger.labeled().iter().map(|s| encoded[s.id].clone()).collect();
            let ys = ledger.labeled().iter().map(|s| s.score).collect();
            let model = GpModel::fit(xs, ys, cfg)?;
            Ok(acquire_ucb(&model, pool.iter().map(|&id| (id, encoded[id].as_slice())))?)
        }
        Policy::Tpe(cfg) => {
            let blocks = encoder.expect("tpe runs carry an encoder").blocks();
            let pair = ParzenPair::fit(ledger.labeled(), encoded, blocks, cfg.gamma)?;
            Ok(acquire_tpe(&pair, pool.iter().map(|&id| (id, encoded[id].as_slice())))?)
        }
    }
}

/// Runs one budgeted active-learning episode on an owned (already
/// shuffled) table.
pub fn run_loop(mut table: Table, policy: &Policy, budget: usize, warm: usize, seed: u64) -> Result<RunResult, LearnError> {
    if warm < 2 || budget < warm {
        return Err(LearnError::BadBudget { budget, warm });
    }
    if table.len() < budget {
        return Err(LearnError::PoolExhausted { budget, rows: table.len() });
    }
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scorer = Scorer::new(&table);
    let mut ledger = LabelLedger::new(budget);

    let (encoder, encoded) = if policy.needs_encoding() {
        let enc = Encoder::new(&table.x_specs());
        let encoded = table.rows.iter().map(|r| enc.encode(r)).collect();
        (Some(enc), encoded)
    } else {
        (None, Vec::new())
    };

    let mut warm_ids = sample(&mut rng, table.len(), warm).into_vec();
    warm_ids.sort_unstable();
    for id in warm_ids {
        ledger.label(&mut table, &scorer, id)?;
    }
    while ledger.remaining() > 0 {
        let id = next_row(policy, &table, &ledger, &encoded, encoder.as_ref(), &mut rng)?;
        ledger.label(&mut table, &scorer, id)?;
    }
    Ok(RunResult::from_ledger(&ledger, started.elapsed().as_secs_f64()).expect("budget >= 2 labels"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{load_table, parse_header};

    fn numeric_table(xs: &[f64], ys: &[f64]) -> Table {
        let cols = parse_header(&["X", "Y-"]).unwrap();
        let rows = xs
            .iter()
            .zip(ys)
            .enumerate()
            .map(|(i, (&x, &y))| Row::new(i, vec![Cell::Num(x)], vec![y]))
            .collect();
        Table::new("t", cols, rows).unwrap()
    }

    fn ramp(n: usize) -> Table {
        let xs: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (x - n as f64 * 0.3).powi(2)).collect();
        numeric_table(&xs, &ys)
    }

    #[test]
    fn ledger_accounting() {
        let mut t = ramp(10);
        let s = Scorer::new(&t);
        let mut l = LabelLedger::new(2);
        l.label(&mut t, &s, 3).unwrap();
        l.label(&mut t, &s, 3).unwrap();
        assert_eq!(l.spent(), 1);
        l.label(&mut t, &s, 4).unwrap();
        assert_eq!(l.label(&mut t, &s, 5), Err(LearnError::BudgetSpent(2)));
        assert_eq!(l.spent(), 2);
        assert!(t.row(3).is_labeled() && !t.row(5).is_labeled());
    }

    #[test]
    fn exhaustive_budget_finds_pool_optimum() {
        let t = ramp(30);
        let optimum = Scorer::new(&t).true_scores(&t).into_iter().fold(f64::INFINITY, f64::min);
        for policy in [Policy::Random, Policy::Exploit, Policy::Explore, Policy::Ucb(GpConfig::default()), Policy::Tpe(TpeConfig::default())] {
            let r = run_loop(t.clone(), &policy, 30, 4, 7).unwrap();
            assert_eq!(r.labels_spent, 30);
            assert_eq!(r.best_score, optimum, "{policy:?}");
        }
    }

    #[test]
    fn random_runs_are_reproducible() {
        let t = ramp(50);
        let a = run_loop(t.clone(), &Policy::Random, 10, 4, 99).unwrap();
        let b = run_loop(t, &Policy::Random, 10, 4, 99).unwrap();
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.best_row_id, b.best_row_id);
    }

    #[test]
    fn spends_exactly_the_budget() {
        let r = run_loop(ramp(1000), &Policy::Exploit, 20, 4, 1).unwrap();
        assert_eq!(r.labels_spent, 20);
        assert_eq!(r.trace.len(), 20);
        let min = r.trace.iter().map(|s| s.score).fold(f64::INFINITY, f64::min);
        assert_eq!(r.best_score, min);
        let mut ids: Vec<usize> = r.trace.iter().map(|s| s.row_id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 20);
    }

    #[test]
    fn loop_errors() {
        assert_eq!(run_loop(ramp(10), &Policy::Random, 11, 4, 0).unwrap_err(), LearnError::PoolExhausted { budget: 11, rows: 10 });
        assert_eq!(run_loop(ramp(10), &Policy::Random, 3, 4, 0).unwrap_err(), LearnError::BadBudget { budget: 3, warm: 4 });
        assert_eq!(run_loop(ramp(10), &Policy::Random, 5, 1, 0).unwrap_err(), LearnError::BadBudget { budget: 5, warm: 1 });
    }

    #[test]
    fn random_acquisition() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(acquire_random(&[42], &mut rng).unwrap(), 42);
        assert_eq!(acquire_random(&[], &mut rng), Err(LearnError::EmptyPool));
        let a: Vec<usize> = (0..5).map(|_| acquire_random(&[1, 2, 3, 4], &mut ChaCha8Rng::seed_from_u64(8)).unwrap()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn random_acquisition_is_uniform() {
        // chi-square over 10 cells, 10^4 draws; 99.9% critical value for 9 dof is 27.88
        let pool: Vec<usize> = (0..10).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut counts = [0usize; 10];
        for _ in 0..10_000 {
            counts[acquire_random(&pool, &mut rng).unwrap()] += 1;
        }
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - 1000.0).powi(2) / 1000.0).sum();
        assert!(chi2 < 27.88, "chi2 {chi2}");
        // each cell within 3 sigma of its expectation
        let sigma = (10_000.0f64 * 0.1 * 0.9).sqrt();
        assert!(counts.iter().all(|&c| (c as f64 - 1000.0).abs() < 3.0 * sigma));
    }

    fn rows_of(t: &Table) -> Vec<&Row> {
        t.rows.iter().collect()
    }

    #[test]
    fn likelihood_dominance_and_symmetry() {
        let t = numeric_table(&[0.0, 10.0, 11.0, 12.0], &[1.0, 2.0, 3.0, 4.0]);
        let rows = rows_of(&t);
        let cols = t.x_specs();
        let (b, r) = likelihoods(&cols, rows[0], &rows[..1], &rows[1..]).unwrap();
        assert!(b > r);
        for row in &rows {
            let (b, r) = likelihoods(&cols, row, &rows, &rows).unwrap();
            assert_eq!(b, r);
        }
    }

    #[test]
    fn gaussian_likelihood_by_hand() {
        // best {1, 3}: mean 2, sd sqrt(2); rest {6, 8, 10}: mean 8, sd 2; query 4
        let t = numeric_table(&[1.0, 3.0, 6.0, 8.0, 10.0, 4.0], &[0.0; 6]);
        let rows = rows_of(&t);
        let (b, r) = likelihoods(&t.x_specs(), rows[5], &rows[..2], &rows[2..5]).unwrap();
        let pdf = |x: f64, m: f64, s: f64| (-0.5 * ((x - m) / s).powi(2)).exp() / (s * (2.0 * PI).sqrt());
        let eb = 0.4 * pdf(4.0, 2.0, 2f64.sqrt());
        let er = 0.6 * pdf(4.0, 8.0, 2.0);
        assert!((b - eb).abs() < 1e-12);
        assert!((r - er).abs() < 1e-12);
        assert!(((b / r) - (eb / er)).abs() < 1e-9);
    }

    #[test]
    fn symbolic_likelihood_is_laplace_smoothed() {
        let t = load_table("c,Y-\na,1\na,2\nb,3\nb,4\n".as_bytes(), "s").unwrap();
        let rows = rows_of(&t);
        // best {a, a}, rest {b, b}; query a: best (2+1)/(2+2) * 0.5, rest (0+1)/(2+2) * 0.5
        let (b, r) = likelihoods(&t.x_specs(), rows[0], &rows[..2], &rows[2..]).unwrap();
        assert!((b - 0.375).abs() < 1e-12);
        assert!((r - 0.125).abs() < 1e-12);
    }

    #[test]
    fn exploit_picks_clone_of_best() {
        let t = numeric_table(&[0.0, 0.5, 9.0, 10.0, 0.0, 5.0, 9.5], &[0.0; 7]);
        let rows = rows_of(&t);
        let cols = t.x_specs();
        let pool = [rows[4], rows[5], rows[6]];
        assert_eq!(acquire_exploit(&cols, &pool, &rows[..2], &rows[2..4]).unwrap(), 4);
    }

    #[test]
    fn explore_prefers_balanced_row() {
        // best {0, 2}, rest {8, 10}: same sd, so x = 5 has b = r exactly
        let t = numeric_table(&[0.0, 2.0, 8.0, 10.0, 1.0, 5.0, 9.0], &[0.0; 7]);
        let rows = rows_of(&t);
        let cols = t.x_specs();
        let pool = [rows[4], rows[5], rows[6]];
        assert_eq!(acquire_explore(&cols, &pool, &rows[..2], &rows[2..4]).unwrap(), 5);
        assert_eq!(acquire_explore(&cols, &[], &rows[..2], &rows[2..4]), Err(LearnError::EmptyPool));
    }

    #[test]
    fn three_row_pool_matches_enumeration() {
        let t = numeric_table(&[1.0, 2.0, 7.0, 9.0, 3.0, 4.5, 6.0], &[0.0; 7]);
        let rows = rows_of(&t);
        let cols = t.x_specs();
        let (best, rest) = (&rows[..2], &rows[2..4]);
        let pool = [rows[4], rows[5], rows[6]];
        let brute: Vec<(usize, f64, f64)> = pool
            .iter()
            .map(|r| {
                let (b, rr) = likelihoods(&cols, r, best, rest).unwrap();
                (r.id, b, rr)
            })
            .collect();
        let exploit = brute.iter().max_by(|a, b| (a.1 / a.2).total_cmp(&(b.1 / b.2))).unwrap().0;
        let explore = brute.iter().max_by(|a, b| (1.0 / (a.1 - a.2).abs()).total_cmp(&(1.0 / (b.1 - b.2).abs()))).unwrap().0;
        assert_eq!(acquire_exploit(&cols, &pool, best, rest).unwrap(), exploit);
        assert_eq!(acquire_explore(&cols, &pool, best, rest).unwrap(), explore);
    }

    #[test]
    fn exploit_ignores_id_relabeling() {
        let xs = [0.0, 0.5, 9.0, 10.0, 0.2, 5.0, 9.5, 3.0];
        let t = numeric_table(&xs, &[0.0; 8]);
        let rows = rows_of(&t);
        let cols = t.x_specs();
        let pick = acquire_exploit(&cols, &rows[4..], &rows[..2], &rows[2..4]).unwrap();
        // same rows, pool ids reversed
        let relabeled: Vec<Row> = rows[4..].iter().rev().enumerate().map(|(i, r)| Row::new(100 + i, r.x.clone(), vec![0.0])).collect();
        let pool: Vec<&Row> = relabeled.iter().collect();
        let pick2 = acquire_exploit(&cols, &pool, &rows[..2], &rows[2..4]).unwrap();
        let x_of = |id: usize| if id >= 100 { relabeled[id - 100].x.clone() } else { t.row(id).x.clone() };
        assert_eq!(x_of(pick), x_of(pick2));
    }
}
