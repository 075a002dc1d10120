//! End-to-end verification suite.
//!
//! Ten stochastic and exact checks demonstrate that the estimators, the
//! generators and the run engine behave as the asymptotic theory predicts:
//! analytic-oracle agreement on long paths, exact agreement with sort-based
//! brute force, normality of standardized pooled errors, decay of the
//! Bahadur remainder, the bias-order separation between the pooled and
//! average estimators, their shared asymptotic variance, determinism
//! across worker counts, and cross-agreement of the two long-run-variance
//! estimators.
//!
//! Every gate is pinned as a constant in [`gates`]; the suite runs from a
//! single 64-bit seed and its report is byte-identical across runs and
//! machines. The same functions back the `acceptance` test target and the
//! CLI `verify` subcommand.

use crate::asymptotics::{
    bahadur_residual, default_truncation_lag, estimate_v2_batch_means, estimate_v2_truncated,
    normality_check, standardized_errors, AsymptoticProfile, V2Source,
};
use crate::engine::{run_micro_experiment, run_replications, MethodSummary, MicroPlan, RunPlan};
use crate::estimators::{
    average_quantile, pooled_quantile, single_path_quantile, Method, QuantileEstimate,
    ReplicationSet,
};
use crate::processes::{
    true_density_at_quantile, true_quantile, Ar1Params, Mm1Params, ProcessModel, ProcessVariant,
    SamplePath,
};
use crate::rng::{derive, mix64, RngStream};

/// Seed used when none is given on the command line.
pub const DEFAULT_SEED: u64 = 1729;

/// Pass/fail thresholds for every check, pinned in one place.
pub mod gates {
    /// Long-path empirical quantiles must sit within this many estimated
    /// standard errors of the analytic truth.
    pub const ORACLE_SE_FACTOR: f64 = 3.0;
    /// Standardized pooled errors: |sample mean| bound.
    pub const CLT_MEAN_ABS_MAX: f64 = 0.15;
    /// Standardized pooled errors: sample-variance window.
    pub const CLT_VARIANCE_RANGE: (f64, f64) = (0.8, 1.2);
    /// Standardized pooled errors: Kolmogorov distance bound.
    pub const CLT_KS_MAX: f64 = 0.08;
    /// Log-log slope of mean |Bahadur residual| against N must be at most
    /// this (the theoretical rate is -3/4; the gate is deliberately loose
    /// because of the log L factor and finite-sample noise).
    pub const BAHADUR_SLOPE_MAX: f64 = -0.5;
    /// mean|residual| / (N^{-3/4} ln L) may not grow by more than this
    /// factor from the shortest to the longest run-length.
    pub const BAHADUR_RATIO_GROWTH_MAX: f64 = 1.5;
    /// Pooled bias at R=64 must shrink to at most this fraction of R=1.
    pub const BIAS_POOLED_RATIO_MAX: f64 = 0.5;
    /// Average-estimator bias must stay within this factor band as R grows.
    pub const BIAS_AVERAGE_RATIO_RANGE: (f64, f64) = (1.0 / 3.0, 3.0);
    /// Urgent-deadline regime: pooled MSE at most this multiple of average.
    pub const URGENT_MSE_FACTOR: f64 = 1.1;
    /// Relative gap allowed between the two estimators' sample variances.
    pub const SHARED_VARIANCE_REL: f64 = 0.20;
    /// Relative gap allowed between each sample variance and v^2/(N f^2).
    pub const PREDICTED_VARIANCE_REL: f64 = 0.25;
    /// Relative gap allowed between the two v^2 estimators.
    pub const V2_CROSS_REL: f64 = 0.10;
}

const ORACLE_PATH_LEN: usize = 10_000_000;
const ORACLE_BATCH_SIZE: usize = 5_000;

/// Suite configuration.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Worker threads per run; affects speed only, never output.
    pub workers: usize,
    /// Fault-injection hook: shifts the analytic truth inside the
    /// oracle-consistency check so tests can prove the check has teeth.
    pub truth_shift: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: DEFAULT_SEED,
            workers: std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1),
            truth_shift: 0.0,
        }
    }
}

/// One labelled pass/fail line inside a check.
#[derive(Debug, Clone)]
pub struct CheckCase {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckCase {
    fn new(label: impl Into<String>, passed: bool, detail: String) -> Self {
        CheckCase {
            label: label.into(),
            passed,
            detail,
        }
    }
}

/// Result of one of the ten checks.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub id: usize,
    pub name: &'static str,
    pub cases: Vec<CheckCase>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }
}

/// Independent sub-seed for check `tag`.
fn subseed(seed: u64, tag: u64) -> u64 {
    mix64(seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn fmt(x: f64) -> String {
    format!("{x:.6e}")
}

fn model_label(model: &ProcessModel) -> String {
    match model.variant {
        ProcessVariant::Ar1(p) => format!("ar1 phi={}", p.phi),
        ProcessVariant::Mm1(p) => format!("mm1 rho={}", p.utilization),
    }
}

fn ar1_model(phi: f64) -> ProcessModel {
    ProcessModel::ar1(Ar1Params::standard(phi).expect("valid phi"))
}

fn mm1_model(rho: f64) -> ProcessModel {
    ProcessModel::mm1(Mm1Params::standard(rho).expect("valid rho"))
}

/// Check 1: empirical quantiles of 1e7-entry paths against analytic truth,
/// within three estimated standard errors.
pub fn check_oracle_consistency(opts: &VerifyOptions) -> CheckOutcome {
    let seed = subseed(opts.seed, 1);
    let models = [
        ar1_model(0.0),
        ar1_model(0.3),
        ar1_model(0.5),
        ar1_model(0.9),
        mm1_model(0.7),
        mm1_model(0.9),
    ];
    let mut cases = Vec::new();
    for (idx, model) in models.iter().enumerate() {
        let path = model
            .generate(ORACLE_PATH_LEN, derive(seed, 0, idx as u64))
            .expect("generation");
        for &alpha in &[0.5, 0.95] {
            let truth = true_quantile(model, alpha).expect("truth") + opts.truth_shift;
            let density = true_density_at_quantile(model, alpha).expect("density");
            let emp = single_path_quantile(&path, alpha).expect("quantile").value;
            let v2 = estimate_v2_batch_means(&path, truth, ORACLE_BATCH_SIZE).expect("v2");
            let se = (v2 / (ORACLE_PATH_LEN as f64 * density * density)).sqrt();
            let err = (emp - truth).abs();
            let bound = gates::ORACLE_SE_FACTOR * se;
            cases.push(CheckCase::new(
                format!("{} alpha={}", model_label(model), alpha),
                err <= bound,
                format!("|err| {} vs 3 se {}", fmt(err), fmt(bound)),
            ));
        }
    }
    CheckOutcome {
        id: 1,
        name: "oracle consistency",
        cases,
    }
}

fn sort_rank(n: usize, alpha: f64) -> usize {
    ((n as f64 * alpha).ceil() as usize).clamp(1, n)
}

fn sorted_pooled_oracle(data: &ReplicationSet, alpha: f64) -> f64 {
    let mut all: Vec<f64> = data.pooled_entries().collect();
    all.sort_by(f64::total_cmp);
    all[sort_rank(all.len(), alpha) - 1]
}

fn sorted_average_oracle(data: &ReplicationSet, alpha: f64) -> f64 {
    data.paths()
        .iter()
        .map(|p| {
            let mut v = p.entries().to_vec();
            v.sort_by(f64::total_cmp);
            v[sort_rank(v.len(), alpha) - 1]
        })
        .sum::<f64>()
        / data.r() as f64
}

fn random_set(rng: &mut RngStream, r: usize, l: usize) -> ReplicationSet {
    // A quarter of the sets are quantized to one decimal to exercise ties.
    let quantize = rng.next_u64() % 4 == 0;
    let paths = (0..r)
        .map(|_| {
            let entries = (0..l)
                .map(|_| {
                    let v = rng.normal(0.0, 1.0);
                    if quantize {
                        (v * 10.0).round() / 10.0
                    } else {
                        v
                    }
                })
                .collect();
            SamplePath::new(entries, 0).expect("finite entries")
        })
        .collect();
    ReplicationSet::new(paths).expect("nonempty")
}

/// Check 2: selection-based estimators agree exactly with full-sort brute
/// force on 1000 random replication sets.
pub fn check_estimator_definitions(opts: &VerifyOptions) -> CheckOutcome {
    let mut rng = RngStream::from_id(subseed(opts.seed, 2));
    let total = 1000;
    let mut mismatches = 0;
    for _ in 0..total {
        let r = 1 + (rng.next_u64() % 20) as usize;
        let max_l = (10_000 / r).max(1) as u64;
        let l = 1 + (rng.next_u64() % max_l) as usize;
        let alpha = rng.uniform();
        let data = random_set(&mut rng, r, l);
        let pooled = pooled_quantile(&data, alpha).expect("pooled").value;
        let average = average_quantile(&data, alpha).expect("average").value;
        if pooled != sorted_pooled_oracle(&data, alpha)
            || average != sorted_average_oracle(&data, alpha)
        {
            mismatches += 1;
        }
    }
    CheckOutcome {
        id: 2,
        name: "estimator definitions vs sort oracle",
        cases: vec![CheckCase::new(
            format!("{total} random replication sets (N <= 1e4)"),
            mismatches == 0,
            format!("{} exact matches of {total}", total - mismatches),
        )],
    }
}

/// Check 3: with a single replication the pooled, average and single-path
/// estimators coincide exactly.
pub fn check_r1_collapse(opts: &VerifyOptions) -> CheckOutcome {
    let mut rng = RngStream::from_id(subseed(opts.seed, 3));
    let total = 100;
    let mut mismatches = 0;
    for _ in 0..total {
        let l = 1 + (rng.next_u64() % 2000) as usize;
        let alpha = rng.uniform();
        let data = random_set(&mut rng, 1, l);
        let pooled = pooled_quantile(&data, alpha).expect("pooled").value;
        let average = average_quantile(&data, alpha).expect("average").value;
        let single = single_path_quantile(&data.paths()[0], alpha)
            .expect("single")
            .value;
        if pooled != average || pooled != single {
            mismatches += 1;
        }
    }
    CheckOutcome {
        id: 3,
        name: "R=1 estimator collapse",
        cases: vec![CheckCase::new(
            format!("{total} random single-replication sets"),
            mismatches == 0,
            format!("{} exact collapses of {total}", total - mismatches),
        )],
    }
}

/// Check 4: standardized pooled errors sqrt(N)(est - truth)/sigma look
/// standard normal, with sigma from the batch-means oracle.
pub fn check_pooled_normality(opts: &VerifyOptions) -> CheckOutcome {
    let seed = subseed(opts.seed, 4);
    let model = ar1_model(0.5);
    let alpha = 0.5;
    let (r, l, micro_reps) = (4usize, 5_000usize, 500usize);

    let truth = true_quantile(&model, alpha).expect("truth");
    let density = true_density_at_quantile(&model, alpha).expect("density");
    let oracle_path = model
        .generate(ORACLE_PATH_LEN, derive(subseed(seed, 40), 0, 0))
        .expect("oracle path");
    let v2 = estimate_v2_batch_means(&oracle_path, truth, ORACLE_BATCH_SIZE).expect("v2");
    let profile = AsymptoticProfile::new(v2, density, alpha, V2Source::BatchMeans).expect("profile");

    let table = run_micro_experiment(&MicroPlan {
        run: RunPlan {
            model,
            r,
            l,
            base_seed: seed,
            workers: opts.workers,
        },
        micro_reps,
        alphas: vec![alpha],
    })
    .expect("experiment");
    let estimates: Vec<QuantileEstimate> = table.pooled[0]
        .iter()
        .map(|&value| QuantileEstimate {
            value,
            alpha,
            method: Method::Pooled,
            r,
            l,
        })
        .collect();
    let z = standardized_errors(&estimates, truth, &profile).expect("standardize");
    let rep = normality_check(&z).expect("report");

    let (vlo, vhi) = gates::CLT_VARIANCE_RANGE;
    CheckOutcome {
        id: 4,
        name: "pooled-estimator normality",
        cases: vec![
            CheckCase::new(
                "|mean| of standardized errors",
                rep.mean.abs() <= gates::CLT_MEAN_ABS_MAX,
                format!("{} vs bound {}", fmt(rep.mean.abs()), fmt(gates::CLT_MEAN_ABS_MAX)),
            ),
            CheckCase::new(
                "variance of standardized errors",
                rep.variance >= vlo && rep.variance <= vhi,
                format!("{} vs window [{}, {}]", fmt(rep.variance), fmt(vlo), fmt(vhi)),
            ),
            CheckCase::new(
                "Kolmogorov distance to N(0,1)",
                rep.ks_distance <= gates::CLT_KS_MAX,
                format!("{} vs bound {}", fmt(rep.ks_distance), fmt(gates::CLT_KS_MAX)),
            ),
        ],
    }
}

/// Check 5: mean |Bahadur residual| decays with N at a log-log slope of at
/// most -1/2, and tracks the N^{-3/4} ln L scale without growing.
pub fn check_bahadur_decay(opts: &VerifyOptions) -> CheckOutcome {
    let seed = subseed(opts.seed, 5);
    let model = ar1_model(0.5);
    let alpha = 0.5;
    let micro_reps = 200;
    let truth = true_quantile(&model, alpha).expect("truth");
    let density = true_density_at_quantile(&model, alpha).expect("density");

    let mut rows = Vec::new(); // (n, mean |residual|, bound scale)
    for &l in &[1_000usize, 10_000, 100_000] {
        let plan = RunPlan {
            model,
            r: 4,
            l,
            base_seed: seed,
            workers: opts.workers,
        };
        let mut sum_abs = 0.0;
        let mut bound = 0.0;
        for m in 0..micro_reps {
            let set = crate::engine::run_replications_at(&plan, m as u64).expect("run");
            let d = bahadur_residual(&set, alpha, truth, density).expect("residual");
            sum_abs += d.residual.abs();
            bound = d.bound_scale;
        }
        rows.push((4 * l, sum_abs / micro_reps as f64, bound));
    }

    let decreasing = rows.windows(2).all(|w| w[1].1 < w[0].1);
    let slope = log_log_slope(&rows.iter().map(|r| (r.0 as f64, r.1)).collect::<Vec<_>>());
    let ratio_first = rows[0].1 / rows[0].2;
    let ratio_last = rows[2].1 / rows[2].2;

    CheckOutcome {
        id: 5,
        name: "Bahadur residual decay",
        cases: vec![
            CheckCase::new(
                "mean |residual| strictly decreases over L in {1e3, 1e4, 1e5}",
                decreasing,
                rows.iter()
                    .map(|r| fmt(r.1))
                    .collect::<Vec<_>>()
                    .join(" > "),
            ),
            CheckCase::new(
                "log-log slope vs N",
                slope <= gates::BAHADUR_SLOPE_MAX,
                format!("{} vs max {}", fmt(slope), fmt(gates::BAHADUR_SLOPE_MAX)),
            ),
            CheckCase::new(
                "residual / (N^-3/4 ln L) does not grow",
                ratio_last <= gates::BAHADUR_RATIO_GROWTH_MAX * ratio_first,
                format!("{} -> {}", fmt(ratio_first), fmt(ratio_last)),
            ),
        ],
    }
}

fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn summary_for(table_rows: &[MethodSummary], method: Method) -> MethodSummary {
    *table_rows
        .iter()
        .find(|s| s.method == method)
        .expect("summary present")
}

/// Check 6: growing R shrinks the pooled estimator's bias but leaves the
/// average estimator's bias at the same order.
pub fn check_bias_order_separation(opts: &VerifyOptions) -> CheckOutcome {
    let seed = subseed(opts.seed, 6);
    let model = mm1_model(0.9);
    let alpha = 0.95;
    let micro_reps = 2_000;
    let mut bias = std::collections::BTreeMap::new();
    for &r in &[1usize, 64] {
        let table = run_micro_experiment(&MicroPlan {
            run: RunPlan {
                model,
                r,
                l: 400,
                base_seed: seed,
                workers: opts.workers,
            },
            micro_reps,
            alphas: vec![alpha],
        })
        .expect("experiment");
        let rows = table.summarize();
        bias.insert(
            r,
            (
                summary_for(&rows, Method::Pooled).bias,
                summary_for(&rows, Method::Average).bias,
            ),
        );
    }
    let (bp1, ba1) = bias[&1];
    let (bp64, ba64) = bias[&64];
    let pooled_ratio = bp64.abs() / bp1.abs();
    let average_ratio = ba64.abs() / ba1.abs();
    let (alo, ahi) = gates::BIAS_AVERAGE_RATIO_RANGE;
    CheckOutcome {
        id: 6,
        name: "bias-order separation",
        cases: vec![
            CheckCase::new(
                "pooled |bias| shrinks from R=1 to R=64",
                pooled_ratio <= gates::BIAS_POOLED_RATIO_MAX,
                format!(
                    "|{}| -> |{}|, ratio {} vs max {}",
                    fmt(bp1),
                    fmt(bp64),
                    fmt(pooled_ratio),
                    fmt(gates::BIAS_POOLED_RATIO_MAX)
                ),
            ),
            CheckCase::new(
                "average |bias| stays at the same order",
                average_ratio >= alo && average_ratio <= ahi,
                format!(
                    "|{}| -> |{}|, ratio {} vs window [{}, {}]",
                    fmt(ba1),
                    fmt(ba64),
                    fmt(average_ratio),
                    fmt(alo),
                    fmt(ahi)
                ),
            ),
        ],
    }
}

/// Check 7: with a short run-length and many processors the pooled
/// estimator's MSE is no worse than 1.1x the average estimator's.
pub fn check_urgent_mse_ordering(opts: &VerifyOptions) -> CheckOutcome {
    let seed = subseed(opts.seed, 7);
    let alpha = 0.95;
    let mut cases = Vec::new();
    for model in [ar1_model(0.9), mm1_model(0.9)] {
        let table = run_micro_experiment(&MicroPlan {
            run: RunPlan {
                model,
                r: 64,
                l: 1_000,
                base_seed: seed,
                workers: opts.workers,
            },
            micro_reps: 100,
            alphas: vec![alpha],
        })
        .expect("experiment");
        let rows = table.summarize();
        let mse_p = summary_for(&rows, Method::Pooled).mse;
        let mse_a = summary_for(&rows, Method::Average).mse;
        cases.push(CheckCase::new(
            format!("{} alpha={alpha} L=1000 R=64", model_label(&model)),
            mse_p <= gates::URGENT_MSE_FACTOR * mse_a,
            format!(
                "pooled {} vs {} x average {}",
                fmt(mse_p),
                gates::URGENT_MSE_FACTOR,
                fmt(mse_a)
            ),
        ));
    }
    CheckOutcome {
        id: 7,
        name: "urgent-deadline MSE ordering",
        cases,
    }
}

/// Check 8: both estimators share the asymptotic variance v^2 / (N f^2).
pub fn check_shared_variance(opts: &VerifyOptions) -> CheckOutcome {
    let seed = subseed(opts.seed, 8);
    let model = ar1_model(0.5);
    let alpha = 0.5;
    let (r, l, micro_reps) = (16usize, 10_000usize, 500usize);

    let truth = true_quantile(&model, alpha).expect("truth");
    let density = true_density_at_quantile(&model, alpha).expect("density");
    let oracle_path = model
        .generate(ORACLE_PATH_LEN, derive(subseed(seed, 80), 0, 0))
        .expect("oracle path");
    let v2 = estimate_v2_batch_means(&oracle_path, truth, ORACLE_BATCH_SIZE).expect("v2");
    let predicted = v2 / ((r * l) as f64 * density * density);

    let table = run_micro_experiment(&MicroPlan {
        run: RunPlan {
            model,
            r,
            l,
            base_seed: seed,
            workers: opts.workers,
        },
        micro_reps,
        alphas: vec![alpha],
    })
    .expect("experiment");
    let rows = table.summarize();
    let var_p = summary_for(&rows, Method::Pooled).variance;
    let var_a = summary_for(&rows, Method::Average).variance;
    let cross_rel = (var_p - var_a).abs() / var_p.max(var_a);

    let rel = |v: f64| (v - predicted).abs() / predicted;
    CheckOutcome {
        id: 8,
        name: "shared asymptotic variance",
        cases: vec![
            CheckCase::new(
                "pooled and average variances agree",
                cross_rel <= gates::SHARED_VARIANCE_REL,
                format!(
                    "{} vs {}, rel {} vs max {}",
                    fmt(var_p),
                    fmt(var_a),
                    fmt(cross_rel),
                    fmt(gates::SHARED_VARIANCE_REL)
                ),
            ),
            CheckCase::new(
                "pooled variance matches v^2/(N f^2)",
                rel(var_p) <= gates::PREDICTED_VARIANCE_REL,
                format!("{} vs predicted {}, rel {}", fmt(var_p), fmt(predicted), fmt(rel(var_p))),
            ),
            CheckCase::new(
                "average variance matches v^2/(N f^2)",
                rel(var_a) <= gates::PREDICTED_VARIANCE_REL,
                format!("{} vs predicted {}, rel {}", fmt(var_a), fmt(predicted), fmt(rel(var_a))),
            ),
        ],
    }
}

/// Check 9: output is a pure function of the seed — invariant to worker
/// count, reproducible, and all experiment-scale streams are distinct.
pub fn check_determinism(opts: &VerifyOptions) -> CheckOutcome {
    let seed = subseed(opts.seed, 9);
    let plan_with = |workers: usize| RunPlan {
        model: ar1_model(0.5),
        r: 8,
        l: 1_000,
        base_seed: seed,
        workers,
    };
    let reference = run_replications(&plan_with(1)).expect("run");
    let same_2 = run_replications(&plan_with(2)).expect("run") == reference;
    let same_8 = run_replications(&plan_with(8)).expect("run") == reference;

    let micro_plan = MicroPlan {
        run: plan_with(4),
        micro_reps: 3,
        alphas: vec![0.3, 0.9],
    };
    let repeat = run_micro_experiment(&micro_plan).expect("table")
        == run_micro_experiment(&micro_plan).expect("table");

    let mut seen = std::collections::HashSet::new();
    let mut distinct = true;
    for micro in 0..100u64 {
        for j in 0..64u64 {
            distinct &= seen.insert(derive(seed, micro, j));
        }
    }

    CheckOutcome {
        id: 9,
        name: "determinism",
        cases: vec![
            CheckCase::new(
                "replication output invariant to workers in {1, 2, 8}",
                same_2 && same_8,
                format!("workers=2 identical: {same_2}, workers=8 identical: {same_8}"),
            ),
            CheckCase::new(
                "micro-replication table reproducible",
                repeat,
                format!("identical: {repeat}"),
            ),
            CheckCase::new(
                "6400 derived streams distinct (micro < 100, replication < 64)",
                distinct,
                format!("distinct: {distinct}"),
            ),
        ],
    }
}

/// Check 10: the truncated-autocovariance and batch-means long-run-variance
/// estimators agree within 10% on 1e7-entry paths at the median.
pub fn check_v2_cross_oracle(opts: &VerifyOptions) -> CheckOutcome {
    let seed = subseed(opts.seed, 10);
    let mut cases = Vec::new();
    for (idx, &phi) in [0.0, 0.5, 0.9].iter().enumerate() {
        let model = ar1_model(phi);
        let path = model
            .generate(ORACLE_PATH_LEN, derive(seed, 0, idx as u64))
            .expect("path");
        let data = ReplicationSet::new(vec![path]).expect("set");
        let lag = default_truncation_lag(ORACLE_PATH_LEN);
        // Always at the median; additionally at the 0.95 quantile for the
        // strongest dependence, where truncation is under the most stress.
        let alphas: &[f64] = if phi == 0.9 { &[0.5, 0.95] } else { &[0.5] };
        for &alpha in alphas {
            let threshold = true_quantile(&model, alpha).expect("quantile");
            let batch = estimate_v2_batch_means(&data.paths()[0], threshold, ORACLE_BATCH_SIZE)
                .expect("batch");
            let trunc = estimate_v2_truncated(&data, threshold, lag).expect("truncated");
            let rel = (trunc - batch).abs() / trunc.max(batch);
            cases.push(CheckCase::new(
                format!("ar1 phi={phi} at the {alpha} quantile"),
                rel <= gates::V2_CROSS_REL,
                format!(
                    "truncated {} vs batch-means {}, rel {} vs max {}",
                    fmt(trunc),
                    fmt(batch),
                    fmt(rel),
                    fmt(gates::V2_CROSS_REL)
                ),
            ));
        }
    }
    CheckOutcome {
        id: 10,
        name: "long-run variance cross-check",
        cases,
    }
}

/// Run all ten checks in order.
pub fn run_all(opts: &VerifyOptions) -> Vec<CheckOutcome> {
    vec![
        check_oracle_consistency(opts),
        check_estimator_definitions(opts),
        check_r1_collapse(opts),
        check_pooled_normality(opts),
        check_bahadur_decay(opts),
        check_bias_order_separation(opts),
        check_urgent_mse_ordering(opts),
        check_shared_variance(opts),
        check_determinism(opts),
        check_v2_cross_oracle(opts),
    ]
}

/// Render the pass/fail table. Output is byte-identical for a given seed.
pub fn render_report(opts: &VerifyOptions, outcomes: &[CheckOutcome]) -> String {
    let mut out = String::new();
    out.push_str("quantpool verification report\n");
    out.push_str(&format!("seed: {}\n\n", opts.seed));
    let mut passed_checks = 0;
    for outcome in outcomes {
        let status = if outcome.passed() { "PASS" } else { "FAIL" };
        if outcome.passed() {
            passed_checks += 1;
        }
        out.push_str(&format!("{:>2}. {:<42} {}\n", outcome.id, outcome.name, status));
        for case in &outcome.cases {
            let status = if case.passed { "pass" } else { "FAIL" };
            out.push_str(&format!(
                "      [{status}] {:<58} {}\n",
                case.label, case.detail
            ));
        }
    }
    out.push_str(&format!(
        "\nresult: {} ({passed_checks}/{} checks passed)\n",
        if passed_checks == outcomes.len() {
            "PASS"
        } else {
            "FAIL"
        },
        outcomes.len()
    ));
    out
}
