//! Pooled and per-replication quantile estimators.
//!
//! For R independent paths of run-length L (N = R * L pooled entries), two
//! competing estimators of the steady-state alpha-quantile are provided:
//!
//! * pooled: the ceil(N * alpha)-th order statistic of all N entries;
//! * average: the mean over replications of each path's
//!   ceil(L * alpha)-th order statistic.
//!
//! Order statistics follow the ceiling convention throughout (no
//! interpolation). Single-alpha queries run through `select_nth_unstable`
//! (expected linear time); multi-alpha queries sort once and index.

use crate::error::{Error, Result};
use crate::processes::{check_alpha, SamplePath};

/// How a `QuantileEstimate` was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Pooled,
    Average,
    Single,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Pooled => "pooled",
            Method::Average => "average",
            Method::Single => "single",
        }
    }
}

/// An estimator output with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileEstimate {
    pub value: f64,
    pub alpha: f64,
    pub method: Method,
    /// Number of replications behind the estimate.
    pub r: usize,
    /// Run-length of each replication.
    pub l: usize,
}

impl QuantileEstimate {
    /// Total pooled sample size N = R * L.
    pub fn n(&self) -> usize {
        self.r * self.l
    }
}

/// R sample paths of identical run-length; immutable once constructed.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationSet {
    paths: Vec<SamplePath>,
}

impl ReplicationSet {
    pub fn new(paths: Vec<SamplePath>) -> Result<Self> {
        let first = paths.first().ok_or(Error::EmptyInput("replication set"))?;
        let expected = first.len();
        for (index, p) in paths.iter().enumerate() {
            if p.len() != expected {
                return Err(Error::LengthMismatch {
                    index,
                    expected,
                    got: p.len(),
                });
            }
        }
        Ok(ReplicationSet { paths })
    }

    pub fn paths(&self) -> &[SamplePath] {
        &self.paths
    }

    /// Number of replications R.
    pub fn r(&self) -> usize {
        self.paths.len()
    }

    /// Run-length L shared by every path.
    pub fn l(&self) -> usize {
        self.paths[0].len()
    }

    /// Pooled sample size N = R * L.
    pub fn n(&self) -> usize {
        self.r() * self.l()
    }

    /// All entries in replication-major order.
    pub fn pooled_entries(&self) -> impl Iterator<Item = f64> + '_ {
        self.paths.iter().flat_map(|p| p.entries().iter().copied())
    }
}

/// 1-based order-statistic rank ceil(n * alpha), clamped into [1, n].
pub(crate) fn order_rank(n: usize, alpha: f64) -> usize {
    ((n as f64 * alpha).ceil() as usize).clamp(1, n)
}

/// k-th smallest (1-based) via quickselect on a scratch buffer.
fn select_kth(scratch: &mut [f64], k: usize) -> f64 {
    debug_assert!(k >= 1 && k <= scratch.len());
    let (_, kth, _) = scratch.select_nth_unstable_by(k - 1, f64::total_cmp);
    *kth
}

/// Pooled quantile estimator: the ceil(N * alpha)-th order statistic of all
/// pooled entries.
pub fn pooled_quantile(data: &ReplicationSet, alpha: f64) -> Result<QuantileEstimate> {
    check_alpha(alpha)?;
    let mut scratch: Vec<f64> = data.pooled_entries().collect();
    let k = order_rank(scratch.len(), alpha);
    Ok(QuantileEstimate {
        value: select_kth(&mut scratch, k),
        alpha,
        method: Method::Pooled,
        r: data.r(),
        l: data.l(),
    })
}

/// Pooled quantiles for several levels, amortized over one full sort.
pub fn pooled_quantiles(data: &ReplicationSet, alphas: &[f64]) -> Result<Vec<QuantileEstimate>> {
    for &a in alphas {
        check_alpha(a)?;
    }
    if alphas.len() == 1 {
        return Ok(vec![pooled_quantile(data, alphas[0])?]);
    }
    let mut sorted: Vec<f64> = data.pooled_entries().collect();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(alphas
        .iter()
        .map(|&alpha| QuantileEstimate {
            value: sorted[order_rank(sorted.len(), alpha) - 1],
            alpha,
            method: Method::Pooled,
            r: data.r(),
            l: data.l(),
        })
        .collect())
}

/// Classical per-replication sample quantile: the ceil(L * alpha)-th order
/// statistic of one path.
pub fn single_path_quantile(path: &SamplePath, alpha: f64) -> Result<QuantileEstimate> {
    check_alpha(alpha)?;
    if path.is_empty() {
        return Err(Error::EmptyInput("sample path"));
    }
    let mut scratch = path.entries().to_vec();
    let k = order_rank(scratch.len(), alpha);
    Ok(QuantileEstimate {
        value: select_kth(&mut scratch, k),
        alpha,
        method: Method::Single,
        r: 1,
        l: path.len(),
    })
}

/// Average quantile estimator: the mean over replications of the
/// per-path sample quantiles.
pub fn average_quantile(data: &ReplicationSet, alpha: f64) -> Result<QuantileEstimate> {
    check_alpha(alpha)?;
    let sum: f64 = data
        .paths()
        .iter()
        .map(|p| single_path_quantile(p, alpha).map(|e| e.value))
        .sum::<Result<f64>>()?;
    Ok(QuantileEstimate {
        value: sum / data.r() as f64,
        alpha,
        method: Method::Average,
        r: data.r(),
        l: data.l(),
    })
}

/// Average quantiles for several levels, amortized over one sort per path.
pub fn average_quantiles(data: &ReplicationSet, alphas: &[f64]) -> Result<Vec<QuantileEstimate>> {
    for &a in alphas {
        check_alpha(a)?;
    }
    let l = data.l();
    let mut sums = vec![0.0_f64; alphas.len()];
    let mut scratch = vec![0.0_f64; l];
    for path in data.paths() {
        scratch.copy_from_slice(path.entries());
        scratch.sort_unstable_by(f64::total_cmp);
        for (sum, &alpha) in sums.iter_mut().zip(alphas) {
            *sum += scratch[order_rank(l, alpha) - 1];
        }
    }
    Ok(alphas
        .iter()
        .zip(&sums)
        .map(|(&alpha, &sum)| QuantileEstimate {
            value: sum / data.r() as f64,
            alpha,
            method: Method::Average,
            r: data.r(),
            l,
        })
        .collect())
}

/// Pooled empirical CDF at `x`: the fraction of entries `<= x`.
pub fn empirical_cdf(data: &ReplicationSet, x: f64) -> f64 {
    let below = data.pooled_entries().filter(|&v| v <= x).count();
    below as f64 / data.n() as f64
}
