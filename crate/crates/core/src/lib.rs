//! Quantile estimation for parallel steady-state simulation.
//!
//! Steady-state simulation produces R independent sample paths of
//! dependent outputs, each of run-length L. This crate implements the two
//! natural quantile estimators over such output — the pooled sample
//! quantile of all N = R * L entries and the average of per-replication
//! sample quantiles — together with the machinery needed to compare them
//! empirically: stationary AR(1) and M/M/1 sojourn-time generators with
//! analytic marginal oracles, long-run variance estimation, Bahadur
//! residual and normality diagnostics, and a deterministic
//! micro-replication engine whose output is independent of worker count.
//!
//! The two estimators share the same asymptotic variance, but the pooled
//! estimator's bias shrinks with the pooled sample size N while the
//! average estimator's bias is pinned to the per-path run-length L — the
//! property the `verify` suite demonstrates end to end.

pub mod asymptotics;
pub mod engine;
pub mod error;
pub mod estimators;
pub mod processes;
pub mod rng;
pub mod special;
pub mod verify;

pub use asymptotics::{
    bahadur_residual, default_truncation_lag, estimate_v2_batch_means, estimate_v2_truncated,
    kolmogorov_distance, normality_check, standardized_errors, AsymptoticProfile,
    BahadurDiagnostic, NormalityReport, V2Source,
};
pub use engine::{
    run_micro_experiment, run_replications, run_replications_at, EstimateTable, MethodSummary,
    MicroPlan, RunPlan,
};
pub use error::{Error, Result};
pub use estimators::{
    average_quantile, average_quantiles, empirical_cdf, pooled_quantile, pooled_quantiles,
    single_path_quantile, Method, QuantileEstimate, ReplicationSet,
};
pub use processes::{
    generate_ar1, generate_mm1, true_density_at_quantile, true_quantile, Ar1Params, Mm1Params,
    ProcessModel, ProcessVariant, SamplePath, DEFAULT_MM1_WARMUP,
};
pub use rng::{derive, mix64, RngStream};
