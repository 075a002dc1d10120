//! JSON experiment configuration.
//!
//! A config names a base seed, a micro-replication count, an output
//! directory and a list of scenarios; each scenario pins a model, a
//! run-length, the quantile levels and an ascending processor grid.
//! Command-line flags override the top-level fields. The built-in default
//! configs cover AR(1) at phi in {0.3, 0.5, 0.9} and M/M/1 at rho in
//! {0.7, 0.9} under both the urgent (L = 1000) and relaxed (L = 10000)
//! regimes.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use quantpool::{Ar1Params, Mm1Params, ProcessModel, DEFAULT_MM1_WARMUP};

use crate::CliError;

pub const DEFAULT_BASE_SEED: u64 = 20_240_517;
pub const DEFAULT_MICRO_REPS: usize = 100;
pub const DEFAULT_R_GRID: [usize; 7] = [1, 2, 4, 8, 16, 32, 64];
pub const DEFAULT_ALPHAS: [f64; 2] = [0.5, 0.95];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_seed")]
    pub base_seed: u64,
    #[serde(default = "default_micro_reps")]
    pub micro_reps: usize,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Worker threads; defaults to the machine's parallelism.
    #[serde(default)]
    pub workers: Option<usize>,
    pub scenarios: Vec<Scenario>,
}

fn default_seed() -> u64 {
    DEFAULT_BASE_SEED
}

fn default_micro_reps() -> usize {
    DEFAULT_MICRO_REPS
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Used in CSV rows and output file names.
    pub name: String,
    pub model: ModelConfig,
    /// Run-length per replication.
    pub l: usize,
    pub alphas: Vec<f64>,
    /// Ascending replication (processor) grid.
    pub r_grid: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    Ar1 {
        phi: f64,
        #[serde(default)]
        mu: f64,
        #[serde(default = "default_sigma")]
        sigma: f64,
        #[serde(default)]
        warmup: usize,
    },
    Mm1 {
        utilization: f64,
        #[serde(default = "default_arrival_rate")]
        arrival_rate: f64,
        #[serde(default = "default_mm1_warmup")]
        warmup: usize,
    },
}

fn default_sigma() -> f64 {
    1.0
}

fn default_arrival_rate() -> f64 {
    1.0
}

fn default_mm1_warmup() -> usize {
    DEFAULT_MM1_WARMUP
}

impl ModelConfig {
    pub fn to_model(&self) -> Result<ProcessModel, CliError> {
        let model = match *self {
            ModelConfig::Ar1 {
                phi,
                mu,
                sigma,
                warmup,
            } => ProcessModel::ar1(
                Ar1Params::new(mu, phi, sigma).map_err(|e| CliError::Config(e.to_string()))?,
            )
            .with_warmup(warmup),
            ModelConfig::Mm1 {
                utilization,
                arrival_rate,
                warmup,
            } => ProcessModel::mm1(
                Mm1Params::new(arrival_rate, utilization)
                    .map_err(|e| CliError::Config(e.to_string()))?,
            )
            .with_warmup(warmup),
        };
        Ok(model)
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
        let config: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.micro_reps == 0 {
            return Err(CliError::Config("micro_reps must be >= 1".into()));
        }
        if self.scenarios.is_empty() {
            return Err(CliError::Config("scenarios must be nonempty".into()));
        }
        let mut names = std::collections::HashSet::new();
        for s in &self.scenarios {
            let field = |what: &str| format!("scenario '{}': {what}", s.name);
            if s.name.is_empty()
                || !s
                    .name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.')
            {
                return Err(CliError::Config(format!(
                    "scenario name '{}' must be nonempty and contain only [A-Za-z0-9._-]",
                    s.name
                )));
            }
            if !names.insert(s.name.clone()) {
                return Err(CliError::Config(format!(
                    "duplicate scenario name '{}'",
                    s.name
                )));
            }
            if s.l == 0 {
                return Err(CliError::Config(field("l must be >= 1")));
            }
            if s.alphas.is_empty() {
                return Err(CliError::Config(field("alphas must be nonempty")));
            }
            for &a in &s.alphas {
                if !(a.is_finite() && a > 0.0 && a < 1.0) {
                    return Err(CliError::Config(field(&format!(
                        "alpha {a} outside (0, 1)"
                    ))));
                }
            }
            if s.r_grid.is_empty() {
                return Err(CliError::Config(field("r_grid must be nonempty")));
            }
            if s.r_grid[0] == 0 {
                return Err(CliError::Config(field("r values must be >= 1")));
            }
            if !s.r_grid.windows(2).all(|w| w[0] < w[1]) {
                return Err(CliError::Config(field("r_grid must be strictly ascending")));
            }
            s.model.to_model()?;
        }
        Ok(())
    }

    /// Override top-level fields from command-line flags.
    pub fn with_overrides(
        mut self,
        seed: Option<u64>,
        workers: Option<usize>,
        out: Option<PathBuf>,
        micro_reps: Option<usize>,
    ) -> Self {
        if let Some(s) = seed {
            self.base_seed = s;
        }
        if let Some(w) = workers {
            self.workers = Some(w);
        }
        if let Some(o) = out {
            self.output_dir = o;
        }
        if let Some(m) = micro_reps {
            self.micro_reps = m;
        }
        self
    }

    pub fn effective_workers(&self) -> usize {
        self.workers.unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
    }
}

fn ar1_scenario(phi: f64, l: usize) -> Scenario {
    Scenario {
        name: format!("ar1_phi{}_L{l}", phi.to_string().replace('.', "")),
        model: ModelConfig::Ar1 {
            phi,
            mu: 0.0,
            sigma: 1.0,
            warmup: 0,
        },
        l,
        alphas: DEFAULT_ALPHAS.to_vec(),
        r_grid: DEFAULT_R_GRID.to_vec(),
    }
}

fn mm1_scenario(rho: f64, l: usize) -> Scenario {
    Scenario {
        name: format!("mm1_rho{}_L{l}", rho.to_string().replace('.', "")),
        model: ModelConfig::Mm1 {
            utilization: rho,
            arrival_rate: 1.0,
            warmup: DEFAULT_MM1_WARMUP,
        },
        l,
        alphas: DEFAULT_ALPHAS.to_vec(),
        r_grid: DEFAULT_R_GRID.to_vec(),
    }
}

/// The full MSE sweep: every model under both deadline regimes.
pub fn default_experiment_config() -> ExperimentConfig {
    let mut scenarios = Vec::new();
    for &l in &[1_000usize, 10_000] {
        for &phi in &[0.3, 0.5, 0.9] {
            scenarios.push(ar1_scenario(phi, l));
        }
        for &rho in &[0.7, 0.9] {
            scenarios.push(mm1_scenario(rho, l));
        }
    }
    ExperimentConfig {
        base_seed: DEFAULT_BASE_SEED,
        micro_reps: DEFAULT_MICRO_REPS,
        output_dir: default_output_dir(),
        workers: None,
        scenarios,
    }
}

/// Default bias/variance sweep: short fixed run-length, sparse grid, tail
/// quantile.
pub fn default_bias_variance_config() -> ExperimentConfig {
    let grid = vec![1, 4, 16, 64];
    let mut ar1 = ar1_scenario(0.9, 400);
    ar1.name = "ar1_phi09_bv".into();
    ar1.alphas = vec![0.95];
    ar1.r_grid = grid.clone();
    let mut mm1 = mm1_scenario(0.9, 400);
    mm1.name = "mm1_rho09_bv".into();
    mm1.alphas = vec![0.95];
    mm1.r_grid = grid;
    ExperimentConfig {
        base_seed: DEFAULT_BASE_SEED,
        micro_reps: DEFAULT_MICRO_REPS,
        output_dir: default_output_dir(),
        workers: None,
        scenarios: vec![ar1, mm1],
    }
}
