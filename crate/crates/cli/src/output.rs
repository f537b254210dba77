//! CSV histories, JSON summaries and effective-config files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::experiment::Report;
use crate::CliError;

pub const CSV_HEADER: &str = "method,theta,T,dx,dt,iteration,error_linf_l2,trace_error_l2,wallclock_ms";

/// Overrides `[output] directory` when set.
pub const OUTPUT_DIR_ENV: &str = "DNWR_OUTPUT_DIR";

/// Seventeen significant digits.
fn sci(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

pub fn csv(report: &Report) -> String {
    let disc = &report.config.discretization;
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &report.results {
        let c = &r.combination;
        let theta = c.theta.map(|t| t.to_string()).unwrap_or_default();
        for row in &r.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                c.method,
                theta,
                c.t_end,
                disc.dx,
                disc.dt,
                row.iteration,
                sci(row.error_linf_l2),
                sci(row.trace_error_l2),
                r.wallclock_ms
            )
            .expect("write to string");
        }
    }
    out
}

#[derive(Debug, Serialize)]
struct Summary<'a> {
    command: &'a str,
    version: &'a str,
    tolerance: f64,
    dx: f64,
    dt: f64,
    combinations: Vec<CombinationSummary>,
}

#[derive(Debug, Serialize)]
struct CombinationSummary {
    method: String,
    theta: Option<f64>,
    #[serde(rename = "T")]
    t_end: f64,
    status: &'static str,
    message: Option<String>,
    iterations_run: usize,
    iterations_to_tolerance: Option<usize>,
    final_error_linf_l2: Option<f64>,
    diverged: bool,
    finite_step_bound: Option<usize>,
    symmetric_rate: Option<f64>,
}

pub fn summary_json(report: &Report) -> String {
    let combinations = report
        .results
        .iter()
        .map(|r| CombinationSummary {
            method: r.combination.method.to_string(),
            theta: r.combination.theta,
            t_end: r.combination.t_end,
            status: if r.failure.is_some() { "failed" } else { "ok" },
            message: r.failure.clone(),
            iterations_run: r.rows.len(),
            iterations_to_tolerance: r.converged_at,
            final_error_linf_l2: r.rows.last().map(|row| row.error_linf_l2).filter(|v| v.is_finite()),
            diverged: r.diverged,
            finite_step_bound: r.finite_step_bound,
            symmetric_rate: r.symmetric_rate,
        })
        .collect();
    let summary = Summary {
        command: report.mode.name(),
        version: env!("CARGO_PKG_VERSION"),
        tolerance: report.config.run.tolerance,
        dx: report.config.discretization.dx,
        dt: report.config.discretization.dt,
        combinations,
    };
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    text
}

/// Paths of the files written for one report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Written {
    pub csv: PathBuf,
    pub summary: PathBuf,
    pub effective_config: PathBuf,
}

/// Output directory after applying the environment override.
pub fn output_dir(report: &Report) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => PathBuf::from(&report.config.output.directory),
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_all(report: &Report, dir: &Path) -> Result<Written, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let stem = &report.config.output.name;
    let written = Written {
        csv: dir.join(format!("{stem}.csv")),
        summary: dir.join(format!("{stem}_summary.json")),
        effective_config: dir.join(format!("{stem}_effective.toml")),
    };
    write(&written.csv, &csv(report))?;
    write(&written.summary, &summary_json(report))?;
    write(&written.effective_config, &report.config.to_toml())?;
    Ok(written)
}
