//! Replication runner and micro-replication experiment loop.
//!
//! A `RunPlan` names R logical replications ("processors") of run-length L;
//! the number of worker threads is an execution detail that never affects
//! output. Replication j of micro-replication m always draws from the
//! stream `derive(base_seed, m, j)`, so a result is a pure function of
//! `(plan, base_seed)` and identical across machines, worker counts and
//! thread interleavings.
//!
//! Parallelism is at replication granularity: a dependent path cannot be
//! split into chunks, so each path stays serial and whole replications are
//! distributed over workers. Micro-replications are processed one at a
//! time; only the estimates are retained.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::{average_quantiles, pooled_quantiles, Method, ReplicationSet};
use crate::processes::{check_alpha, true_quantile, ProcessModel};
use crate::rng::derive;

/// One parallel run: R replications of run-length L.
#[derive(Debug, Clone, PartialEq)]
pub struct RunPlan {
    pub model: ProcessModel,
    /// Logical replication count (simulated processors).
    pub r: usize,
    /// Run-length per replication.
    pub l: usize,
    pub base_seed: u64,
    /// Worker threads; capped at `r` internally.
    pub workers: usize,
}

impl RunPlan {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.r == 0 {
            return Err(Error::InvalidParameter("r must be >= 1".into()));
        }
        if self.l == 0 {
            return Err(Error::InvalidParameter("l must be >= 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidParameter("workers must be >= 1".into()));
        }
        Ok(())
    }
}

/// A full MSE experiment: `micro_reps` repetitions of a `RunPlan`, with
/// estimates collected at each quantile level.
#[derive(Debug, Clone, PartialEq)]
pub struct MicroPlan {
    pub run: RunPlan,
    pub micro_reps: usize,
    pub alphas: Vec<f64>,
}

impl MicroPlan {
    pub fn validate(&self) -> Result<()> {
        self.run.validate()?;
        if self.micro_reps == 0 {
            return Err(Error::InvalidParameter("micro_reps must be >= 1".into()));
        }
        if self.alphas.is_empty() {
            return Err(Error::InvalidParameter("alphas must be nonempty".into()));
        }
        for &a in &self.alphas {
            check_alpha(a)?;
        }
        Ok(())
    }
}

fn build_pool(plan: &RunPlan) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(plan.workers.min(plan.r))
        .build()
        .map_err(|e| Error::WorkerPool(e.to_string()))
}

fn run_in_pool(pool: &rayon::ThreadPool, plan: &RunPlan, micro: u64) -> Result<ReplicationSet> {
    let paths = pool.install(|| {
        (0..plan.r)
            .into_par_iter()
            .map(|j| {
                let stream = derive(plan.base_seed, micro, j as u64);
                let stream_id = stream.id();
                plan.model
                    .generate(plan.l, stream)
                    .map_err(|e| Error::ReplicationFailed {
                        replication: j,
                        stream_id,
                        source: Box::new(e),
                    })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    ReplicationSet::new(paths)
}

/// Run plan's R replications (micro index 0) and assemble the pooled array.
pub fn run_replications(plan: &RunPlan) -> Result<ReplicationSet> {
    run_replications_at(plan, 0)
}

/// Run the plan's replications for a specific micro-replication index.
pub fn run_replications_at(plan: &RunPlan, micro: u64) -> Result<ReplicationSet> {
    plan.validate()?;
    let pool = build_pool(plan)?;
    run_in_pool(&pool, plan, micro)
}

/// Raw estimates from a micro-replication experiment, indexed
/// `[alpha][micro]`, together with the analytic truth per level.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateTable {
    pub r: usize,
    pub l: usize,
    pub micro_reps: usize,
    pub alphas: Vec<f64>,
    pub truths: Vec<f64>,
    pub pooled: Vec<Vec<f64>>,
    pub average: Vec<Vec<f64>>,
}

impl EstimateTable {
    /// Estimates for one (alpha index, method) series.
    pub fn series(&self, alpha_idx: usize, method: Method) -> &[f64] {
        match method {
            Method::Pooled => &self.pooled[alpha_idx],
            _ => &self.average[alpha_idx],
        }
    }

    /// MSE / bias / variance summary of every (alpha, method) series.
    pub fn summarize(&self) -> Vec<MethodSummary> {
        let mut rows = Vec::with_capacity(self.alphas.len() * 2);
        for (i, (&alpha, &truth)) in self.alphas.iter().zip(&self.truths).enumerate() {
            for method in [Method::Pooled, Method::Average] {
                rows.push(MethodSummary::from_series(
                    alpha,
                    method,
                    truth,
                    self.series(i, method),
                ));
            }
        }
        rows
    }
}

/// Micro-replication summary of one estimator at one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodSummary {
    pub alpha: f64,
    pub method: Method,
    pub truth: f64,
    pub micro_reps: usize,
    /// Mean squared error around the analytic truth.
    pub mse: f64,
    /// Mean estimate minus truth.
    pub bias: f64,
    /// Sample variance of the estimates (0 by convention for one rep).
    pub variance: f64,
}

impl MethodSummary {
    pub fn from_series(alpha: f64, method: Method, truth: f64, series: &[f64]) -> Self {
        let m = series.len();
        let mean = series.iter().sum::<f64>() / m as f64;
        let mse = series.iter().map(|v| (v - truth).powi(2)).sum::<f64>() / m as f64;
        let variance = if m > 1 {
            series.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1) as f64
        } else {
            0.0
        };
        MethodSummary {
            alpha,
            method,
            truth,
            micro_reps: m,
            mse,
            bias: mean - truth,
            variance,
        }
    }
}

/// Run the full micro-replication loop: one replication set per micro index,
/// pooled and average estimates at every requested level.
pub fn run_micro_experiment(plan: &MicroPlan) -> Result<EstimateTable> {
    plan.validate()?;
    let truths = plan
        .alphas
        .iter()
        .map(|&a| true_quantile(&plan.run.model, a))
        .collect::<Result<Vec<_>>>()?;
    let pool = build_pool(&plan.run)?;
    let mut pooled = vec![Vec::with_capacity(plan.micro_reps); plan.alphas.len()];
    let mut average = vec![Vec::with_capacity(plan.micro_reps); plan.alphas.len()];
    for m in 0..plan.micro_reps {
        let set = run_in_pool(&pool, &plan.run, m as u64)?;
        let p = pooled_quantiles(&set, &plan.alphas)?;
        let a = average_quantiles(&set, &plan.alphas)?;
        for i in 0..plan.alphas.len() {
            pooled[i].push(p[i].value);
            average[i].push(a[i].value);
        }
    }
    Ok(EstimateTable {
        r: plan.run.r,
        l: plan.run.l,
        micro_reps: plan.micro_reps,
        alphas: plan.alphas.clone(),
        truths,
        pooled,
        average,
    })
}
