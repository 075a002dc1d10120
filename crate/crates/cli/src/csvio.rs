//! CSV emission and ingestion.
//!
//! Reals are written in decimal scientific notation with 17 significant
//! digits, which round-trips every f64 exactly. Column orders are part of
//! the tool's contract and covered by a golden-file test.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use quantpool::{ReplicationSet, SamplePath};

use crate::CliError;

/// Raw-path CSV header.
pub const PATHS_HEADER: &str = "replication,index,value";
/// Experiment CSV header.
pub const EXPERIMENT_HEADER: &str =
    "scenario,model,param,L,R,alpha,method,micro_reps,truth,mse,bias,variance";
/// Bias/variance sweep CSV header.
pub const BIAS_VARIANCE_HEADER: &str = "scenario,model,param,mode,L,R,alpha,method,micro_reps,\
truth,bias,variance,bound_pooled,bound_average";

/// 17 significant digits; round-trips f64 exactly.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| CliError::Io(format!("creating {}: {e}", parent.display())))?;
        }
    }
    fs::write(path, text).map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

/// Serialize a replication set as `replication,index,value` rows.
pub fn paths_to_csv(data: &ReplicationSet) -> String {
    let mut out = String::with_capacity(data.n() * 32);
    out.push_str(PATHS_HEADER);
    out.push('\n');
    for (j, path) in data.paths().iter().enumerate() {
        for (i, &v) in path.entries().iter().enumerate() {
            let _ = writeln!(out, "{j},{i},{}", fmt_real(v));
        }
    }
    out
}

/// Parse a raw-path CSV back into a replication set.
pub fn paths_from_csv(text: &str) -> Result<ReplicationSet, CliError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == PATHS_HEADER => {}
        other => {
            return Err(CliError::Config(format!(
                "expected header '{PATHS_HEADER}', found {other:?}"
            )))
        }
    }
    let mut per_rep: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let (rep, _idx, value) = match (fields.next(), fields.next(), fields.next()) {
            (Some(r), Some(i), Some(v)) => (r, i, v),
            _ => {
                return Err(CliError::Config(format!(
                    "line {}: expected 3 fields",
                    lineno + 2
                )))
            }
        };
        let rep: usize = rep
            .parse()
            .map_err(|_| CliError::Config(format!("line {}: bad replication", lineno + 2)))?;
        let value: f64 = value
            .parse()
            .map_err(|_| CliError::Config(format!("line {}: bad value", lineno + 2)))?;
        if rep >= per_rep.len() {
            per_rep.resize_with(rep + 1, Vec::new);
        }
        per_rep[rep].push(value);
    }
    let paths = per_rep
        .into_iter()
        .enumerate()
        .map(|(j, entries)| {
            SamplePath::new(entries, j as u64).map_err(|e| CliError::Config(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    ReplicationSet::new(paths).map_err(|e| CliError::Config(e.to_string()))
}
