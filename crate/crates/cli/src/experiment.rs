//! Sweeps over (method, θ, T) combinations.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use dnwr_core::theory::{finite_step_bound, symmetric_rate};
use dnwr_core::waveform::{fixed_point_guess, monodomain, run_with, InitialGuess, StageExecutor};
use dnwr_core::{Discretization, Method, SpaceTimeField, WaveProblem, WrConfig};
use rayon::prelude::*;

use crate::config::{Config, GuessName};
use crate::CliError;

/// Runs the two halves of a driver stage on the rayon pool.
pub struct RayonExecutor;

impl StageExecutor for RayonExecutor {
    fn join<A, B, FA, FB>(&self, a: FA, b: FB) -> (A, B)
    where
        A: Send,
        B: Send,
        FA: FnOnce() -> A + Send,
        FB: FnOnce() -> B + Send,
    {
        rayon::join(a, b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Run,
    /// Needs at least two methods and uses each method's optimal θ.
    Compare,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Run => "run",
            Mode::Compare => "compare",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Combination {
    pub method: Method,
    pub theta: Option<f64>,
    pub t_end: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub iteration: usize,
    pub error_linf_l2: f64,
    pub trace_error_l2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CombinationResult {
    pub combination: Combination,
    pub rows: Vec<Row>,
    pub converged_at: Option<usize>,
    pub diverged: bool,
    pub wallclock_ms: f64,
    /// Set when the driver or the reference solve failed.
    pub failure: Option<String>,
    pub finite_step_bound: Option<usize>,
    pub symmetric_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub mode: Mode,
    pub config: Config,
    pub results: Vec<CombinationResult>,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.results.iter().filter(|r| r.failure.is_some()).count()
    }
}

/// All combinations in configuration order: methods, then θ, then T.
pub fn combinations(cfg: &Config, mode: Mode) -> Vec<Combination> {
    let mut out = Vec::new();
    for method in cfg.methods() {
        let thetas = match mode {
            Mode::Run => cfg.thetas_for(method),
            Mode::Compare => vec![method.uses_theta().then(|| method.optimal_theta())],
        };
        for theta in thetas {
            for &t_end in &cfg.run.t_end {
                out.push(Combination { method, theta, t_end });
            }
        }
    }
    out
}

pub fn execute(cfg: &Config, mode: Mode) -> Result<Report, CliError> {
    if mode == Mode::Compare && cfg.run.methods.len() < 2 {
        return Err(CliError::Config(
            "[run] methods: compare needs at least two methods".into(),
        ));
    }
    let problem = cfg.problem().map_err(CliError::Config)?;
    let combos = combinations(cfg, mode);

    let mut windows: Vec<f64> = Vec::new();
    for c in &combos {
        if !windows.iter().any(|t| t.to_bits() == c.t_end.to_bits()) {
            windows.push(c.t_end);
        }
    }
    let references: BTreeMap<u64, Result<Arc<SpaceTimeField>, String>> = windows
        .par_iter()
        .map(|&t| {
            let r = discretization(cfg, t)
                .and_then(|d| monodomain(&problem, &d, cfg.start_mode()))
                .map(Arc::new)
                .map_err(|e| e.to_string());
            (t.to_bits(), r)
        })
        .collect();

    let results = combos
        .par_iter()
        .map(|c| run_combination(cfg, &problem, c, &references[&c.t_end.to_bits()]))
        .collect();
    Ok(Report {
        mode,
        config: cfg.clone(),
        results,
    })
}

fn discretization(cfg: &Config, t_end: f64) -> dnwr_core::Result<Discretization> {
    Discretization::with_window(cfg.discretization.dx, cfg.discretization.dt, t_end)
}

fn run_combination(
    cfg: &Config,
    problem: &WaveProblem,
    c: &Combination,
    reference: &Result<Arc<SpaceTimeField>, String>,
) -> CombinationResult {
    let (a, b, speed) = (problem.a(), problem.b(), problem.wave_speed);
    let mut result = CombinationResult {
        combination: *c,
        rows: Vec::new(),
        converged_at: None,
        diverged: false,
        wallclock_ms: 0.0,
        failure: None,
        finite_step_bound: finite_step_bound(c.method, a, b, speed, c.t_end).ok(),
        symmetric_rate: c.theta.and_then(|t| symmetric_rate(c.method, t).ok()),
    };
    let reference = match reference {
        Ok(r) => r,
        Err(e) => {
            result.failure = Some(format!("reference solve failed: {e}"));
            return result;
        }
    };
    let outcome = (|| {
        let disc = discretization(cfg, c.t_end)?;
        let mut wr = WrConfig::new(c.method)
            .with_max_iterations(cfg.run.max_iterations)
            .with_tolerance(cfg.run.tolerance)
            .with_start(cfg.start_mode());
        wr.flux_mode = cfg.flux_mode();
        wr.overlap_cells = cfg.run.overlap_cells;
        if let Some(theta) = c.theta {
            wr.theta = theta;
        }
        wr.initial_guess = match cfg.run.initial_guess {
            GuessName::PolyT2 => InitialGuess::quadratic(),
            GuessName::Zero => InitialGuess::Function(dnwr_core::problem::zero_fn()),
            GuessName::MonodomainTrace => fixed_point_guess(problem, &disc, &wr, reference)?,
        };
        let start = Instant::now();
        let out = run_with(problem, &disc, &wr, Some(reference), &RayonExecutor)?;
        Ok::<_, dnwr_core::Error>((out, start.elapsed()))
    })();
    match outcome {
        Ok((out, elapsed)) => {
            if cfg.run.record_wallclock {
                result.wallclock_ms = elapsed.as_secs_f64() * 1e3;
            }
            result.rows = out
                .history
                .records
                .iter()
                .map(|r| Row {
                    iteration: r.iteration,
                    error_linf_l2: r.error_linf_l2,
                    trace_error_l2: r.trace_error_l2,
                })
                .collect();
            result.converged_at = out.history.converged_at;
            result.diverged = out.history.diverged;
        }
        Err(e) => result.failure = Some(e.to_string()),
    }
    result
}
