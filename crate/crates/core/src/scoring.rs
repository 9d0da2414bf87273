//! Distance to heaven: per-goal min-max normalization and the Chebyshev
//! distance to the ideal point, plus the best/rest split used by the
//! model-based learners.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{ColumnSpec, Direction, Row, Table};

#[derive(Debug, Error, PartialEq)]
pub enum ScoreError {
    #[error("value {value} outside [{lo}, {hi}] of goal `{column}`; column ranges are stale")]
    OutOfRange { column: String, value: f64, lo: f64, hi: f64 },
    #[error("row {0} is not labeled")]
    Unlabeled(usize),
    #[error("row has {found} goal values, expected {expected}")]
    GoalCount { expected: usize, found: usize },
    #[error("split needs at least 2 rows, got {0}")]
    TooFewRows(usize),
    #[error("split fraction {0} must lie strictly between 0 and 1")]
    BadFraction(f64),
}

/// Normalized targets per goal: 1 for maximize, 0 for minimize.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealPoint(Vec<f64>);

impl IdealPoint {
    pub fn for_goals<'a, I: IntoIterator<Item = &'a ColumnSpec>>(goals: I) -> Self {
        IdealPoint(
            goals
                .into_iter()
                .map(|c| if c.direction == Direction::Maximize { 1.0 } else { 0.0 })
                .collect(),
        )
    }

    pub fn targets(&self) -> &[f64] {
        &self.0
    }
}

/// `(value - lo) / (hi - lo)`, or 0 for a constant column.
pub fn normalize_goal(value: f64, col: &ColumnSpec) -> Result<f64, ScoreError> {
    if !(col.lo..=col.hi).contains(&value) {
        return Err(ScoreError::OutOfRange {
            column: col.name.clone(),
            value,
            lo: col.lo,
            hi: col.hi,
        });
    }
    if col.hi == col.lo {
        return Ok(0.0);
    }
    Ok((value - col.lo) / (col.hi - col.lo))
}

/// Chebyshev distance of a labeled row to the ideal point.
pub fn chebyshev(row: &Row, ideal: &IdealPoint, goal_cols: &[ColumnSpec]) -> Result<f64, ScoreError> {
    let y = row.goals().ok_or(ScoreError::Unlabeled(row.id))?;
    chebyshev_goals(y, ideal, goal_cols)
}

/// Chebyshev distance over raw goal values.
pub fn chebyshev_goals(y: &[f64], ideal: &IdealPoint, goal_cols: &[ColumnSpec]) -> Result<f64, ScoreError> {
    if y.len() != goal_cols.len() || ideal.0.len() != goal_cols.len() {
        return Err(ScoreError::GoalCount { expected: goal_cols.len(), found: y.len() });
    }
    let mut worst = 0.0f64;
    for ((&v, col), &target) in y.iter().zip(goal_cols).zip(&ideal.0) {
        worst = worst.max((normalize_goal(v, col)? - target).abs());
    }
    Ok(worst)
}

/// Scores rows of one table. Holds the goal columns and ideal point so
/// callers do not rebuild them per row.
#[derive(Debug, Clone)]
pub struct Scorer {
    goals: Vec<ColumnSpec>,
    ideal: IdealPoint,
}

impl Scorer {
    pub fn new(table: &Table) -> Self {
        let goals = table.y_specs();
        let ideal = IdealPoint::for_goals(&goals);
        Scorer { goals, ideal }
    }

    pub fn score(&self, row: &Row) -> Result<f64, ScoreError> {
        chebyshev(row, &self.ideal, &self.goals)
    }

    /// Ground-truth score, ignoring the labeled flag. For evaluation only.
    pub fn true_score(&self, row: &Row) -> f64 {
        chebyshev_goals(row.hidden_goals(), &self.ideal, &self.goals)
            .expect("table ranges cover their own rows")
    }

    /// Ground-truth scores of every row, in row order.
    pub fn true_scores(&self, table: &Table) -> Vec<f64> {
        table.rows.iter().map(|r| self.true_score(r)).collect()
    }
}

/// A labeled row id with its distance to heaven.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scored {
    pub id: usize,
    pub score: f64,
}

/// Sorts ascending by `(score, id)`.
pub fn sort_scored(rows: &mut [Scored]) {
    rows.sort_by(|a, b| a.score.total_cmp(&b.score).then(a.id.cmp(&b.id)));
}

/// `ceil(fraction * n)` clamped to `[1, n - 1]`, so both sides are non-empty.
pub(crate) fn head_count(fraction: f64, n: usize) -> usize {
    // guard against products like 0.7 * 10 = 7.000000000000001
    let k = (fraction * n as f64 - 1e-9).ceil() as usize;
    k.clamp(1, n - 1)
}

/// Splits rows into the first `ceil(fraction * n)` by score (best) and the
/// remainder (rest). Ties break by ascending row id.
pub fn best_rest_split(rows: &[Scored], fraction: f64) -> Result<(Vec<Scored>, Vec<Scored>), ScoreError> {
    if rows.len() < 2 {
        return Err(ScoreError::TooFewRows(rows.len()));
    }
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(ScoreError::BadFraction(fraction));
    }
    let mut sorted = rows.to_vec();
    sort_scored(&mut sorted);
    let rest = sorted.split_off(head_count(fraction, rows.len()));
    Ok((sorted, rest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::load_table;
    use crate::fixtures::TABLE2;
    use proptest::prelude::*;

    fn labeled(table: &Table, id: usize) -> Row {
        let mut r = table.row(id).clone();
        r.reveal();
        r
    }

    #[test]
    fn normalize_endpoints_and_table2_latency() {
        let t = load_table(TABLE2.as_bytes(), "ss").unwrap();
        let lat = t.y_columns().nth(1).unwrap().clone();
        assert_eq!(normalize_goal(lat.lo, &lat).unwrap(), 0.0);
        assert_eq!(normalize_goal(lat.hi, &lat).unwrap(), 1.0);
        // (158.68 - 156.83) / (9421 - 156.83)
        let expected = 1.85 / 9264.17;
        assert!((normalize_goal(158.68, &lat).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.0001997).abs() < 1e-7);
        assert!(matches!(normalize_goal(9500.0, &lat), Err(ScoreError::OutOfRange { .. })));
    }

    #[test]
    fn constant_goal_normalizes_to_zero() {
        let t = load_table("A,B-\n1,4\n2,4\n".as_bytes(), "c").unwrap();
        let b = t.y_columns().next().unwrap();
        assert_eq!(normalize_goal(4.0, b).unwrap(), 0.0);
    }

    #[test]
    fn table2_first_and_last_rows() {
        let t = load_table(TABLE2.as_bytes(), "ss").unwrap();
        let s = Scorer::new(&t);
        // throughput of row 0 is the max (distance 0); latency distance 1.85/9264.17
        let first = s.score(&labeled(&t, 0)).unwrap();
        assert!((first - 1.85 / 9264.17).abs() < 1e-12);
        assert!(first <= 0.001);
        assert_eq!(s.score(&labeled(&t, 7)).unwrap(), 1.0);
        assert_eq!(s.score(t.row(0)), Err(ScoreError::Unlabeled(0)));
    }

    #[test]
    fn ideal_row_scores_zero() {
        let t = load_table("A,B+,C-\n1,10,0\n2,0,5\n".as_bytes(), "i").unwrap();
        assert_eq!(Scorer::new(&t).score(&labeled(&t, 0)).unwrap(), 0.0);
    }

    fn sc(pairs: &[(usize, f64)]) -> Vec<Scored> {
        pairs.iter().map(|&(id, score)| Scored { id, score }).collect()
    }

    #[test]
    fn split_sizes() {
        let six = sc(&[(0, 0.6), (1, 0.5), (2, 0.4), (3, 0.3), (4, 0.2), (5, 0.1)]);
        let (best, rest) = best_rest_split(&six, 0.5).unwrap();
        assert_eq!((best.len(), rest.len()), (3, 3));
        assert_eq!(best.iter().map(|s| s.id).collect::<Vec<_>>(), vec![5, 4, 3]);

        let five = sc(&[(0, 0.1), (1, 0.2), (2, 0.3), (3, 0.4), (4, 0.5)]);
        let (best, rest) = best_rest_split(&five, 0.25).unwrap();
        assert_eq!((best.len(), rest.len()), (2, 3));
    }

    #[test]
    fn split_ties_break_by_id() {
        let rows = sc(&[(4, 0.5), (2, 0.5), (9, 0.5), (1, 0.5)]);
        let (best, rest) = best_rest_split(&rows, 0.5).unwrap();
        assert_eq!(best.iter().map(|s| s.id).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(rest.iter().map(|s| s.id).collect::<Vec<_>>(), vec![4, 9]);
    }

    #[test]
    fn split_errors() {
        assert_eq!(best_rest_split(&sc(&[(0, 0.1)]), 0.5), Err(ScoreError::TooFewRows(1)));
        assert_eq!(best_rest_split(&sc(&[(0, 0.1), (1, 0.2)]), 1.0), Err(ScoreError::BadFraction(1.0)));
    }

    fn goal_table(a: &[f64], b: &[f64]) -> Table {
        let mut csv = String::from("X,A+,B-\n");
        for (i, (p, q)) in a.iter().zip(b).enumerate() {
            csv.push_str(&format!("{i},{p},{q}\n"));
        }
        load_table(csv.as_bytes(), "p").unwrap()
    }

    fn all_scores(t: &Table) -> Vec<f64> {
        let s = Scorer::new(t);
        (0..t.len()).map(|i| s.score(&labeled(t, i)).unwrap()).collect()
    }

    proptest! {
        #[test]
        fn scores_in_unit_interval(rows in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 1..40)) {
            let (a, b): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
            for s in all_scores(&goal_table(&a, &b)) {
                prop_assert!((0.0..=1.0).contains(&s));
            }
        }

        #[test]
        fn positive_affine_rescale_preserves_scores(
            rows in prop::collection::vec((0i32..1000, 0i32..1000), 2..30),
            scale in 1i32..50,
            shift in -500i32..500,
        ) {
            // integer-valued data keeps the rescaled arithmetic exact
            let a: Vec<f64> = rows.iter().map(|r| r.0 as f64).collect();
            let b: Vec<f64> = rows.iter().map(|r| r.1 as f64).collect();
            let b2: Vec<f64> = b.iter().map(|v| v * scale as f64 + shift as f64).collect();
            let s1 = all_scores(&goal_table(&a, &b));
            let s2 = all_scores(&goal_table(&a, &b2));
            for (p, q) in s1.iter().zip(&s2) {
                prop_assert!((p - q).abs() < 1e-12);
            }
            let scored = |s: &[f64]| s.iter().enumerate().map(|(id, &score)| Scored { id, score }).collect::<Vec<_>>();
            let ids = |v: Vec<Scored>| v.into_iter().map(|s| s.id).collect::<Vec<_>>();
            let (b1, _) = best_rest_split(&scored(&s1), 0.5).unwrap();
            let (b2, _) = best_rest_split(&scored(&s2), 0.5).unwrap();
            // equal up to rounding; compare membership only when scores are well separated
            if s1.iter().zip(&s2).all(|(p, q)| p == q) {
                prop_assert_eq!(ids(b1), ids(b2));
            }
        }

        #[test]
        fn worsening_a_goal_never_improves(
            rows in prop::collection::vec((0.0f64..100.0, 0.0f64..100.0), 2..20),
            bump in 0.0f64..50.0,
        ) {
            let a: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let b: Vec<f64> = rows.iter().map(|r| r.1).collect();
            let t = goal_table(&a, &b);
            let s = Scorer::new(&t);
            let lat = t.y_specs();
            let ideal = IdealPoint::for_goals(&lat);
            // worsen goal B (minimize) of row 0, staying inside the column range
            let y = t.row(0).hidden_goals().to_vec();
            let worse = [y[0], (y[1] + bump).min(lat[1].hi)];
            prop_assert!(chebyshev_goals(&worse, &ideal, &lat).unwrap() >= s.true_score(t.row(0)));
        }

        #[test]
        fn split_partitions(scores in prop::collection::vec(0.0f64..1.0, 2..50), frac in 0.01f64..0.99) {
            let rows: Vec<Scored> = scores.iter().enumerate().map(|(id, &score)| Scored { id, score }).collect();
            let (best, rest) = best_rest_split(&rows, frac).unwrap();
            prop_assert_eq!(best.len() + rest.len(), rows.len());
            let mut ids: Vec<usize> = best.iter().chain(&rest).map(|s| s.id).collect();
            ids.sort();
            prop_assert_eq!(ids, (0..rows.len()).collect::<Vec<_>>());
            let worst_best = best.iter().map(|s| s.score).fold(f64::MIN, f64::max);
            prop_assert!(rest.iter().all(|s| s.score >= worst_best));
        }
    }
}
