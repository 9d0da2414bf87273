//! Tree-structured Parzen estimator over a fixed candidate pool.
//!
//! Labeled rows are split at the `gamma` quantile of their Chebyshev score.
//! The better side feeds the density `l(x)`, the worse side `g(x)`, and the
//! pool row minimizing `g(x) / l(x)` is labeled next.
//!
//! Densities are products of per-dimension Parzen estimates in the encoded
//! space. A numeric dimension mixes one Gaussian kernel per support point
//! (Scott's bandwidth) with one uniform prior component over `[0, 1]`, all
//! weighted equally. One-hot blocks use Laplace-smoothed level frequencies.
//!
//! The bandwidth is floored at `1 / min(100, n + 1)` of the encoded range
//! `[0, 1]`. Without that clip a tight low set
//! shrinks `l(x)` to spikes and the pool argmax crawls one row at a time
//! around the best warm-start point.

use std::f64::consts::PI;

use thiserror::Error;

use crate::encode::Block;
use crate::scoring::{head_count, sort_scored, Scored};

/// Smallest density returned; also bounds the log-space arithmetic.
pub const DENSITY_FLOOR: f64 = 1e-300;

#[derive(Debug, Error, PartialEq)]
pub enum TpeError {
    #[error("quantile split needs at least 2 rows, got {0}")]
    TooFewRows(usize),
    #[error("gamma {0} must lie strictly between 0 and 1")]
    BadGamma(f64),
    #[error("density needs at least one support point")]
    NoSupport,
    #[error("acquisition over an empty pool")]
    EmptyPool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TpeConfig {
    pub gamma: f64,
}

impl Default for TpeConfig {
    fn default() -> Self {
        TpeConfig { gamma: 0.25 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantileSplit {
    pub low: Vec<Scored>,
    pub high: Vec<Scored>,
    pub y_star: f64,
}

/// First `ceil(gamma * n)` rows by ascending score form `low`; ties break by
/// row id. `y_star` is the score of the first `high` row.
pub fn split_by_quantile(rows: &[Scored], gamma: f64) -> Result<QuantileSplit, TpeError> {
    if rows.len() < 2 {
        return Err(TpeError::TooFewRows(rows.len()));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(TpeError::BadGamma(gamma));
    }
    let mut low = rows.to_vec();
    sort_scored(&mut low);
    let high = low.split_off(head_count(gamma, rows.len()));
    let y_star = high[0].score;
    Ok(QuantileSplit { low, high, y_star })
}

#[derive(Debug, Clone)]
enum DimModel {
    Kernel { dim: usize, centres: Vec<f64>, bandwidth: f64 },
    Levels { start: usize, width: usize, counts: Vec<usize>, n: usize },
}

/// Per-dimension Parzen density over encoded points.
#[derive(Debug, Clone)]
pub struct ParzenEstimator {
    dims: Vec<DimModel>,
}

impl ParzenEstimator {
    pub fn fit(points: &[&[f64]], blocks: &[Block]) -> Result<Self, TpeError> {
        let n = points.len();
        if n == 0 {
            return Err(TpeError::NoSupport);
        }
        let dims = blocks
            .iter()
            .map(|block| match block {
                Block::Numeric { dim } => {
                    let centres: Vec<f64> = points.iter().map(|p| p[*dim]).collect();
                    DimModel::Kernel { dim: *dim, bandwidth: scott_bandwidth(&centres), centres }
                }
                Block::OneHot { start, levels } => {
                    let width = levels.len();
                    let mut counts = vec![0; width];
                    for p in points {
                        if let Some(k) = hot_index(&p[*start..start + width]) {
                            counts[k] += 1;
                        }
                    }
                    DimModel::Levels { start: *start, width, counts, n }
                }
            })
            .collect();
        Ok(ParzenEstimator { dims })
    }

    /// Log density, floored at `ln(DENSITY_FLOOR)`.
    pub fn log_density(&self, q: &[f64]) -> f64 {
        let mut total = 0.0;
        for dim in &self.dims {
            total += match dim {
                DimModel::Kernel { dim, centres, bandwidth } => {
                    let log_norm = -(bandwidth * (2.0 * PI).sqrt()).ln();
                    let mut terms: Vec<f64> = centres.iter().map(|c| log_norm - 0.5 * ((q[*dim] - c) / bandwidth).powi(2)).collect();
                    // uniform prior component, density 1 on [0, 1]
                    terms.push(0.0);
                    log_sum_exp(&terms) - ((centres.len() + 1) as f64).ln()
                }
                DimModel::Levels { start, width, counts, n } => {
                    let hits = hot_index(&q[*start..start + width]).map_or(0, |k| counts[k]);
                    ((hits + 1) as f64 / (*n + width) as f64).ln()
                }
            };
        }
        total.max(DENSITY_FLOOR.ln())
    }

    pub fn density(&self, q: &[f64]) -> f64 {
        let ld = self.log_density(q);
        if ld <= DENSITY_FLOOR.ln() {
            DENSITY_FLOOR
        } else {
            ld.exp().max(DENSITY_FLOOR)
        }
    }
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let top = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    top + xs.iter().map(|x| (x - top).exp()).sum::<f64>().ln()
}

fn hot_index(block: &[f64]) -> Option<usize> {
    block.iter().position(|&v| v > 0.5)
}

/// Lower bound on the bandwidth for `n` support points.
pub fn bandwidth_floor(n: usize) -> f64 {
    1.0 / (n as f64 + 1.0).min(100.0)
}

/// Scott's rule for one dimension, `sd * n^(-1/5)`, clipped from below.
fn scott_bandwidth(values: &[f64]) -> f64 {
    let n = values.len();
    let floor = bandwidth_floor(n);
    if n < 2 {
        return floor;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (var.sqrt() * (n as f64).powf(-0.2)).max(floor)
}

/// Density of `query` under a Parzen estimator fitted to `points`.
pub fn kde_density(points: &[&[f64]], query: &[f64], blocks: &[Block]) -> Result<f64, TpeError> {
    Ok(ParzenEstimator::fit(points, blocks)?.density(query))
}

#[derive(Debug, Clone)]
pub struct ParzenPair {
    pub gamma: f64,
    pub y_star: f64,
    pub l: ParzenEstimator,
    pub g: ParzenEstimator,
}

impl ParzenPair {
    /// Fits `l` and `g` from labeled scores and their encoded inputs
    /// (`encoded[id]`).
    pub fn fit(labeled: &[Scored], encoded: &[Vec<f64>], blocks: &[Block], gamma: f64) -> Result<Self, TpeError> {
        let split = split_by_quantile(labeled, gamma)?;
        let pts = |side: &[Scored]| side.iter().map(|s| encoded[s.id].as_slice()).collect::<Vec<_>>();
        Ok(ParzenPair {
            gamma,
            y_star: split.y_star,
            l: ParzenEstimator::fit(&pts(&split.low), blocks)?,
            g: ParzenEstimator::fit(&pts(&split.high), blocks)?,
        })
    }

    /// `ln g(x) - ln l(x)`.
    pub fn log_ratio(&self, q: &[f64]) -> f64 {
        self.g.log_density(q) - self.l.log_density(q)
    }
}

/// Pool row minimizing `g(x) / l(x)`; ties go to the smaller id.
pub fn acquire_tpe<'a, I>(pair: &ParzenPair, pool: I) -> Result<usize, TpeError>
where
    I: IntoIterator<Item = (usize, &'a [f64])>,
{
    let mut best: Option<(usize, f64)> = None;
    for (id, x) in pool {
        let v = pair.log_ratio(x);
        best = match best {
            Some((bid, bv)) if bv < v || (bv == v && bid < id) => Some((bid, bv)),
            _ => Some((id, v)),
        };
    }
    best.map(|(id, _)| id).ok_or(TpeError::EmptyPool)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sc(scores: &[f64]) -> Vec<Scored> {
        scores.iter().enumerate().map(|(id, &score)| Scored { id, score }).collect()
    }

    const ONE_D: [Block; 1] = [Block::Numeric { dim: 0 }];

    #[test]
    fn split_sizes_and_threshold() {
        let rows = sc(&[0.8, 0.1, 0.5, 0.3, 0.9, 0.2, 0.7, 0.4]);
        let s = split_by_quantile(&rows, 0.25).unwrap();
        assert_eq!((s.low.len(), s.high.len()), (2, 6));
        assert_eq!(s.low.iter().map(|r| r.id).collect::<Vec<_>>(), vec![1, 5]);
        assert_eq!(s.y_star, 0.3);
    }

    #[test]
    fn split_ties_by_id() {
        let s = split_by_quantile(&sc(&[0.5; 8]), 0.25).unwrap();
        assert_eq!(s.low.iter().map(|r| r.id).collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn split_matches_sort_oracle() {
        // 20 scores from a fixed LCG; the oracle sorts indices by value directly
        let mut state = 12345u64;
        let scores: Vec<f64> = (0..20)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64
            })
            .collect();
        let mut order: Vec<usize> = (0..20).collect();
        order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap());
        let mut expected = order[..5].to_vec();
        expected.sort();
        let s = split_by_quantile(&sc(&scores), 0.25).unwrap();
        let mut got: Vec<usize> = s.low.iter().map(|r| r.id).collect();
        got.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn split_errors() {
        assert_eq!(split_by_quantile(&sc(&[0.1]), 0.25), Err(TpeError::TooFewRows(1)));
        assert_eq!(split_by_quantile(&sc(&[0.1, 0.2]), 0.0), Err(TpeError::BadGamma(0.0)));
    }

    #[test]
    fn single_point_peak() {
        let p = [0.4];
        let d = kde_density(&[&p], &[0.4], &ONE_D).unwrap();
        // one point: bandwidth is the clip 1 / (1 + 1); kernel and prior weigh 1/2 each
        let h = 0.5;
        assert!((d - 0.5 * (1.0 / (h * (2.0 * PI).sqrt()) + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn far_query_falls_to_prior_share() {
        // 150 coincident points: sd 0, bandwidth clipped to 0.01
        let p = [0.0];
        let pts = vec![&p[..]; 150];
        let d = kde_density(&pts, &[1.0], &ONE_D).unwrap();
        assert!((d - 1.0 / 151.0).abs() < 1e-15);
    }

    #[test]
    fn product_over_many_dims_hits_floor() {
        // each dimension contributes at most 1/151 far from the support
        let blocks: Vec<Block> = (0..300).map(|dim| Block::Numeric { dim }).collect();
        let p = vec![0.0; 300];
        let pts = vec![p.as_slice(); 150];
        assert_eq!(kde_density(&pts, &vec![1.0; 300], &blocks).unwrap(), DENSITY_FLOOR);
    }

    #[test]
    fn bandwidth_clip_values() {
        assert_eq!(bandwidth_floor(1), 0.5);
        assert_eq!(bandwidth_floor(3), 0.25);
        assert_eq!(bandwidth_floor(99), 0.01);
        assert_eq!(bandwidth_floor(5000), 0.01);
    }

    #[test]
    fn two_point_mixture_by_hand() {
        let (a, b) = ([0.2], [0.9]);
        let q = 0.35;
        // sample sd of {0.2, 0.9} is 0.7 / sqrt(2); Scott: sd * 2^(-1/5), above the 1/3 clip
        let h = 0.7 / 2f64.sqrt() * 2f64.powf(-0.2);
        assert!(h > 1.0 / 3.0);
        let phi = |c: f64| (-0.5 * ((q - c) / h).powi(2)).exp() / (h * (2.0 * PI).sqrt());
        let expected = (phi(0.2) + phi(0.9) + 1.0) / 3.0;
        let got = kde_density(&[&a, &b], &[q], &ONE_D).unwrap();
        assert!((got - expected).abs() < 1e-10);
    }

    #[test]
    fn categorical_block_is_laplace_smoothed() {
        let blocks = [Block::OneHot { start: 0, levels: vec!["a".into(), "b".into(), "c".into()] }];
        let (pa, pb) = ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        let pts: [&[f64]; 3] = [&pa, &pa, &pb];
        // (2 + 1) / (3 + 3)
        assert!((kde_density(&pts, &pa, &blocks).unwrap() - 0.5).abs() < 1e-12);
        // unseen level c: (0 + 1) / 6
        assert!((kde_density(&pts, &[0.0, 0.0, 1.0], &blocks).unwrap() - 1.0 / 6.0).abs() < 1e-12);
    }

    fn pair(low: &[[f64; 2]], high: &[[f64; 2]]) -> ParzenPair {
        let blocks = [Block::Numeric { dim: 0 }, Block::Numeric { dim: 1 }];
        let lp: Vec<&[f64]> = low.iter().map(|p| &p[..]).collect();
        let hp: Vec<&[f64]> = high.iter().map(|p| &p[..]).collect();
        ParzenPair {
            gamma: 0.25,
            y_star: 0.0,
            l: ParzenEstimator::fit(&lp, &blocks).unwrap(),
            g: ParzenEstimator::fit(&hp, &blocks).unwrap(),
        }
    }

    #[test]
    fn picks_low_cluster_centre() {
        let p = pair(&[[0.1, 0.1], [0.2, 0.2], [0.15, 0.1]], &[[0.8, 0.9], [0.9, 0.8], [0.85, 0.85], [0.7, 0.9]]);
        let pool = [[0.15, 0.133], [0.85, 0.85], [0.5, 0.5]];
        let id = acquire_tpe(&p, pool.iter().enumerate().map(|(i, x)| (i, &x[..]))).unwrap();
        assert_eq!(id, 0);
    }

    #[test]
    fn identical_densities_fall_back_to_id() {
        let pts = [[0.3, 0.3], [0.6, 0.2]];
        let p = pair(&pts, &pts);
        let pool = [[0.9, 0.9], [0.3, 0.3], [0.1, 0.5]];
        let id = acquire_tpe(&p, pool.iter().enumerate().map(|(i, x)| (i + 10, &x[..]))).unwrap();
        assert_eq!(id, 10);
        assert_eq!(acquire_tpe(&p, std::iter::empty()), Err(TpeError::EmptyPool));
    }

    #[test]
    fn acquisition_matches_exhaustive_ratio() {
        let p = pair(
            &[[0.2, 0.3], [0.25, 0.35], [0.3, 0.2]],
            &[[0.7, 0.6], [0.5, 0.9], [0.9, 0.1], [0.6, 0.5], [0.8, 0.8]],
        );
        let pool: Vec<[f64; 2]> = (0..30).map(|i| [(i as f64 * 0.37).fract(), (i as f64 * 0.61).fract()]).collect();
        let mut best = (0, f64::INFINITY);
        for (i, x) in pool.iter().enumerate() {
            let r = p.g.density(x) / p.l.density(x);
            if r < best.1 {
                best = (i, r);
            }
        }
        let id = acquire_tpe(&p, pool.iter().enumerate().map(|(i, x)| (i, &x[..]))).unwrap();
        assert_eq!(id, best.0);
    }

    proptest! {
        #[test]
        fn quantile_split_partitions(scores in prop::collection::vec(0.0f64..1.0, 2..60), gamma in 0.01f64..0.99) {
            let rows = sc(&scores);
            let s = split_by_quantile(&rows, gamma).unwrap();
            let k = ((gamma * rows.len() as f64) - 1e-9).ceil().clamp(1.0, (rows.len() - 1) as f64) as usize;
            prop_assert_eq!(s.low.len(), k);
            prop_assert_eq!(s.low.len() + s.high.len(), rows.len());
            prop_assert!(s.low.iter().all(|l| s.high.iter().all(|h| (l.score, l.id) < (h.score, h.id))));
        }

        #[test]
        fn smaller_gamma_never_grows_low_set(scores in prop::collection::vec(0.0f64..1.0, 2..60), a in 0.01f64..0.99, b in 0.01f64..0.99) {
            let (small, large) = if a <= b { (a, b) } else { (b, a) };
            let rows = sc(&scores);
            let lo_small: Vec<usize> = split_by_quantile(&rows, small).unwrap().low.iter().map(|s| s.id).collect();
            let lo_large: Vec<usize> = split_by_quantile(&rows, large).unwrap().low.iter().map(|s| s.id).collect();
            prop_assert!(lo_small.iter().all(|id| lo_large.contains(id)));
        }

        #[test]
        fn common_scale_leaves_ratio_argmin(shift in -50.0f64..50.0) {
            // adding ln(c) to both log densities multiplies both by c
            let p = pair(&[[0.2, 0.3], [0.3, 0.2]], &[[0.7, 0.6], [0.9, 0.1], [0.6, 0.5]]);
            let pool: Vec<[f64; 2]> = (0..15).map(|i| [(i as f64 * 0.29).fract(), (i as f64 * 0.53).fract()]).collect();
            let plain = acquire_tpe(&p, pool.iter().enumerate().map(|(i, x)| (i, &x[..]))).unwrap();
            let scaled = pool
                .iter()
                .enumerate()
                .map(|(i, x)| (i, (p.g.log_density(x) + shift) - (p.l.log_density(x) + shift)))
                .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
            prop_assert_eq!(plain, scaled.0);
        }
    }
}
