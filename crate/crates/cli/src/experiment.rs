//! Experiment sweeps: MSE over processor grids, and bias/variance tables.

use quantpool::{run_micro_experiment, Method, MicroPlan, ProcessModel, RunPlan};

use crate::config::{ExperimentConfig, Scenario};
use crate::csvio::{fmt_real, BIAS_VARIANCE_HEADER, EXPERIMENT_HEADER};
use crate::svg::{mse_chart, Series};
use crate::CliError;

/// Rendered outputs for one scenario of the `experiment` command.
pub struct ScenarioOutput {
    pub name: String,
    pub csv: String,
    /// (file name, markup) per quantile level.
    pub charts: Vec<(String, String)>,
}

fn run_plan(
    model: ProcessModel,
    scenario: &Scenario,
    r: usize,
    l: usize,
    config: &ExperimentConfig,
) -> Result<quantpool::EstimateTable, CliError> {
    run_micro_experiment(&MicroPlan {
        run: RunPlan {
            model,
            r,
            l,
            base_seed: config.base_seed,
            workers: config.effective_workers(),
        },
        micro_reps: config.micro_reps,
        alphas: scenario.alphas.clone(),
    })
    .map_err(|e| CliError::Config(format!("scenario '{}': {e}", scenario.name)))
}

fn alpha_slug(alpha: f64) -> String {
    format!("{alpha}").replace('.', "p").replace('-', "m")
}

/// MSE sweep for one scenario: one CSV, one chart per quantile level.
pub fn run_experiment_scenario(
    scenario: &Scenario,
    config: &ExperimentConfig,
) -> Result<ScenarioOutput, CliError> {
    let model = scenario.model.to_model()?;
    let mut csv = String::from(EXPERIMENT_HEADER);
    csv.push('\n');
    // (alpha index, method index 0=pooled/1=average) -> (R, mse) points
    let mut points = vec![[Vec::new(), Vec::new()]; scenario.alphas.len()];

    for &r in &scenario.r_grid {
        let table = run_plan(model, scenario, r, scenario.l, config)?;
        for row in table.summarize() {
            let alpha_idx = scenario
                .alphas
                .iter()
                .position(|&a| a == row.alpha)
                .expect("summary alpha comes from the scenario");
            let method_idx = match row.method {
                Method::Pooled => 0,
                _ => 1,
            };
            points[alpha_idx][method_idx].push((r, row.mse));
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                scenario.name,
                model.kind(),
                fmt_real(model.param()),
                scenario.l,
                r,
                fmt_real(row.alpha),
                row.method.label(),
                row.micro_reps,
                fmt_real(row.truth),
                fmt_real(row.mse),
                fmt_real(row.bias),
                fmt_real(row.variance),
            ));
        }
    }

    let charts = scenario
        .alphas
        .iter()
        .enumerate()
        .map(|(i, &alpha)| {
            let title = format!(
                "{} L={} alpha={alpha}: MSE vs processors",
                scenario.name, scenario.l
            );
            let markup = mse_chart(
                &title,
                &[
                    Series {
                        label: "pooled",
                        points: &points[i][0],
                    },
                    Series {
                        label: "average",
                        points: &points[i][1],
                    },
                ],
            );
            (format!("{}_alpha_{}.svg", scenario.name, alpha_slug(alpha)), markup)
        })
        .collect();

    Ok(ScenarioOutput {
        name: scenario.name.clone(),
        csv,
        charts,
    })
}

/// Bias/variance sweep over two regimes: fixed run-length (N grows with R)
/// and fixed total budget (L shrinks as R grows). Emits one CSV covering
/// every scenario, with the theoretical bias scales
/// `bound_pooled = N^{-3/4} ln L` and `bound_average = L^{-3/4} ln L`
/// alongside the measurements.
pub fn run_bias_variance(config: &ExperimentConfig) -> Result<String, CliError> {
    let mut csv = String::from(BIAS_VARIANCE_HEADER);
    csv.push('\n');
    for scenario in &config.scenarios {
        let model = scenario.model.to_model()?;
        let budget = scenario.l * scenario.r_grid.last().copied().unwrap_or(1);
        for &(mode, fixed_budget) in &[("fixed_l", false), ("fixed_budget", true)] {
            for &r in &scenario.r_grid {
                let l = if fixed_budget {
                    if budget % r != 0 {
                        return Err(CliError::Config(format!(
                            "scenario '{}': budget {budget} not divisible by R={r}",
                            scenario.name
                        )));
                    }
                    budget / r
                } else {
                    scenario.l
                };
                let n = r * l;
                let bound_pooled = (n as f64).powf(-0.75) * (l as f64).ln();
                let bound_average = (l as f64).powf(-0.75) * (l as f64).ln();
                let table = run_plan(model, scenario, r, l, config)?;
                for row in table.summarize() {
                    csv.push_str(&format!(
                        "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                        scenario.name,
                        model.kind(),
                        fmt_real(model.param()),
                        mode,
                        l,
                        r,
                        fmt_real(row.alpha),
                        row.method.label(),
                        row.micro_reps,
                        fmt_real(row.truth),
                        fmt_real(row.bias),
                        fmt_real(row.variance),
                        fmt_real(bound_pooled),
                        fmt_real(bound_average),
                    ));
                }
            }
        }
    }
    Ok(csv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ModelConfig, Scenario};
    use std::path::PathBuf;

    fn tiny_config() -> ExperimentConfig {
        ExperimentConfig {
            base_seed: 99,
            micro_reps: 5,
            output_dir: PathBuf::from("unused"),
            workers: Some(2),
            scenarios: vec![Scenario {
                name: "smoke".into(),
                model: ModelConfig::Ar1 {
                    phi: 0.5,
                    mu: 0.0,
                    sigma: 1.0,
                    warmup: 0,
                },
                l: 64,
                alphas: vec![0.5, 0.9],
                r_grid: vec![1, 2, 4],
            }],
        }
    }

    #[test]
    fn experiment_emits_one_row_per_cell() {
        let config = tiny_config();
        let out = run_experiment_scenario(&config.scenarios[0], &config).unwrap();
        // 3 R values x 2 alphas x 2 methods + header
        assert_eq!(out.csv.lines().count(), 1 + 12);
        assert!(out.csv.starts_with(EXPERIMENT_HEADER));
        assert_eq!(out.charts.len(), 2);
        assert_eq!(out.charts[0].0, "smoke_alpha_0p5.svg");
    }

    #[test]
    fn mse_decomposition_holds_per_row() {
        let config = tiny_config();
        let out = run_experiment_scenario(&config.scenarios[0], &config).unwrap();
        for line in out.csv.lines().skip(1) {
            let fields: Vec<&str> = line.split(',').collect();
            let m: f64 = fields[7].parse().unwrap();
            let mse: f64 = fields[9].parse().unwrap();
            let bias: f64 = fields[10].parse().unwrap();
            let variance: f64 = fields[11].parse().unwrap();
            let recomposed = bias * bias + variance * (m - 1.0) / m;
            assert!((mse - recomposed).abs() <= 1e-12 * mse.max(1e-300));
        }
    }

    #[test]
    fn r1_rows_have_identical_methods() {
        let config = tiny_config();
        let csv = run_bias_variance(&config).unwrap();
        let rows: Vec<Vec<&str>> = csv
            .lines()
            .skip(1)
            .map(|l| l.split(',').collect())
            .filter(|f: &Vec<&str>| f[5] == "1")
            .collect();
        // pooled/average pairs share every numeric column at R=1
        for pair in rows.chunks(2) {
            assert_eq!(pair[0][7], "pooled");
            assert_eq!(pair[1][7], "average");
            assert_eq!(pair[0][10], pair[1][10], "bias differs at R=1");
            assert_eq!(pair[0][11], pair[1][11], "variance differs at R=1");
        }
    }

    #[test]
    fn fixed_budget_shrinks_l() {
        let config = tiny_config();
        let csv = run_bias_variance(&config).unwrap();
        let budget_rows: Vec<Vec<&str>> = csv
            .lines()
            .skip(1)
            .map(|l| l.split(',').collect())
            .filter(|f: &Vec<&str>| f[3] == "fixed_budget")
            .collect();
        for f in budget_rows {
            let l: usize = f[4].parse().unwrap();
            let r: usize = f[5].parse().unwrap();
            assert_eq!(l * r, 64 * 4, "budget must stay constant");
        }
    }
}
