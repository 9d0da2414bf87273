//! Gaussian-process surrogate over encoded `x` vectors with an upper
//! confidence bound acquisition, mirrored for minimization.
//!
//! The GP models the Chebyshev score directly. Targets are centred on their
//! mean, the kernel is squared-exponential with lengthscale `sqrt(d)/2` and
//! signal variance `var(y)`, and a diagonal jitter starting at `1e-6` is
//! doubled until the Gram matrix factorizes (giving up past `1e-2`).
//! Hyperparameters are never re-optimized.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GpError {
    #[error("GP fit needs at least 2 observations, got {0}")]
    TooFewPoints(usize),
    #[error("{x} inputs but {y} targets")]
    Mismatch { x: usize, y: usize },
    #[error("covariance matrix not positive definite even with jitter {0}")]
    NotPositiveDefinite(f64),
    #[error("acquisition over an empty pool")]
    EmptyPool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpConfig {
    /// Exploration weight on the posterior sd.
    pub kappa: f64,
    pub jitter_start: f64,
    pub jitter_max: f64,
}

impl Default for GpConfig {
    fn default() -> Self {
        GpConfig { kappa: 2.0, jitter_start: 1e-6, jitter_max: 1e-2 }
    }
}

#[derive(Debug, Clone)]
pub struct GpModel {
    x: Vec<Vec<f64>>,
    y_mean: f64,
    signal_var: f64,
    lengthscale: f64,
    jitter: f64,
    kappa: f64,
    chol: Cholesky<f64, Dyn>,
    alpha: DVector<f64>,
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum()
}

impl GpModel {
    pub fn fit(x: Vec<Vec<f64>>, y: Vec<f64>, cfg: &GpConfig) -> Result<GpModel, GpError> {
        let n = x.len();
        if n != y.len() {
            return Err(GpError::Mismatch { x: n, y: y.len() });
        }
        if n < 2 {
            return Err(GpError::TooFewPoints(n));
        }
        let d = x[0].len().max(1);
        let lengthscale = (d as f64).sqrt() / 2.0;
        let y_mean = y.iter().sum::<f64>() / n as f64;
        let signal_var = y.iter().map(|v| (v - y_mean).powi(2)).sum::<f64>() / n as f64;
        let signal_var = signal_var.max(1e-12);

        let gram = DMatrix::from_fn(n, n, |i, j| {
            signal_var * (-squared_distance(&x[i], &x[j]) / (2.0 * lengthscale * lengthscale)).exp()
        });
        let mut jitter = cfg.jitter_start;
        let chol = loop {
            let mut k = gram.clone();
            for i in 0..n {
                k[(i, i)] += jitter;
            }
            if let Some(c) = k.cholesky() {
                break c;
            }
            if jitter >= cfg.jitter_max {
                return Err(GpError::NotPositiveDefinite(jitter));
            }
            jitter = (jitter * 2.0).min(cfg.jitter_max);
        };
        let centred = DVector::from_iterator(n, y.iter().map(|v| v - y_mean));
        let alpha = chol.solve(&centred);
        Ok(GpModel { x, y_mean, signal_var, lengthscale, jitter, kappa: cfg.kappa, chol, alpha })
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn signal_sd(&self) -> f64 {
        self.signal_var.sqrt()
    }

    pub fn lengthscale(&self) -> f64 {
        self.lengthscale
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    fn kernel(&self, a: &[f64], b: &[f64]) -> f64 {
        self.signal_var * (-squared_distance(a, b) / (2.0 * self.lengthscale * self.lengthscale)).exp()
    }

    /// Posterior mean and standard deviation at an encoded input.
    pub fn posterior(&self, q: &[f64]) -> (f64, f64) {
        let k = DVector::from_iterator(self.x.len(), self.x.iter().map(|xi| self.kernel(xi, q)));
        let mean = self.y_mean + k.dot(&self.alpha);
        let v = self
            .chol
            .l_dirty()
            .solve_lower_triangular(&k)
            .expect("cholesky factor has a non-zero diagonal");
        let var = (self.signal_var - v.norm_squared()).max(0.0);
        (mean, var.sqrt())
    }

    /// `mu - kappa * sigma`; lower is more promising.
    pub fn lower_bound(&self, q: &[f64]) -> f64 {
        let (mu, sigma) = self.posterior(q);
        mu - self.kappa * sigma
    }
}

/// Row id minimizing `mu - kappa * sigma` over the pool; ties go to the
/// smaller id.
pub fn acquire_ucb<'a, I>(model: &GpModel, pool: I) -> Result<usize, GpError>
where
    I: IntoIterator<Item = (usize, &'a [f64])>,
{
    let mut best: Option<(usize, f64)> = None;
    for (id, x) in pool {
        let v = model.lower_bound(x);
        best = match best {
            Some((bid, bv)) if bv < v || (bv == v && bid < id) => Some((bid, bv)),
            _ => Some((id, v)),
        };
    }
    best.map(|(id, _)| id).ok_or(GpError::EmptyPool)
}
