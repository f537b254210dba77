//! Two-subdomain waveform relaxation drivers.
//!
//! All drivers iterate over whole space-time subdomain solves and record, per iteration,
//! the `L∞(0,T; L²)` error of the assembled iterate against the monodomain discrete solution
//! and the discrete `L²` error of the interface trace.

mod dnwr;
mod nnwr;
mod swr;

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{usage, Result};
use crate::field::{error_linf_l2, SpaceTimeField, TimeTrace};
use crate::problem::{Discretization, ScalarFn, WaveProblem};
use crate::stepper::{solve, BoundaryCondition, FluxMode, StartMode, SubdomainProblem};

pub use dnwr::dnwr_iterate;
pub use nnwr::nnwr_iterate;
pub use swr::{swr_classical_iterate, swr_optimized_iterate};

/// Errors above this are treated as divergence and end the iteration.
const DIVERGENCE_CEILING: f64 = 1e150;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Dirichlet-Neumann waveform relaxation.
    Dnwr,
    /// Neumann-Neumann waveform relaxation.
    Nnwr,
    /// Overlapping Schwarz waveform relaxation with Dirichlet exchange.
    SwrClassical,
    /// Non-overlapping Schwarz waveform relaxation with absorbing exchange.
    SwrOptimized,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Dnwr, Method::Nnwr, Method::SwrClassical, Method::SwrOptimized];

    pub fn name(self) -> &'static str {
        match self {
            Method::Dnwr => "DNWR",
            Method::Nnwr => "NNWR",
            Method::SwrClassical => "SWR_CLASSICAL",
            Method::SwrOptimized => "SWR_OPTIMIZED",
        }
    }

    pub fn from_name(name: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.name().eq_ignore_ascii_case(name))
    }

    /// Relaxation parameter giving finite-step convergence (unused by the Schwarz variants).
    pub fn optimal_theta(self) -> f64 {
        match self {
            Method::Dnwr => 0.5,
            Method::Nnwr => 0.25,
            Method::SwrClassical | Method::SwrOptimized => 1.0,
        }
    }

    pub fn uses_theta(self) -> bool {
        matches!(self, Method::Dnwr | Method::Nnwr)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Starting interface data.
#[derive(Clone)]
pub enum InitialGuess {
    /// A function of time, sampled for every interface datum the method needs.
    Function(ScalarFn),
    /// One trace, used for every interface datum.
    Trace(TimeTrace),
    /// Separate data for the left and right subdomain (Schwarz variants). For classical
    /// Schwarz these are Dirichlet values at the artificial boundaries; for the optimized
    /// variant they are the absorbing-condition right-hand sides.
    Pair { left: TimeTrace, right: TimeTrace },
}

impl fmt::Debug for InitialGuess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialGuess::Function(_) => f.write_str("Function(..)"),
            InitialGuess::Trace(t) => f.debug_tuple("Trace").field(t).finish(),
            InitialGuess::Pair { left, right } => f
                .debug_struct("Pair")
                .field("left", left)
                .field("right", right)
                .finish(),
        }
    }
}

impl InitialGuess {
    /// `t ↦ t²`.
    pub fn quadratic() -> Self {
        InitialGuess::Function(crate::problem::scalar_fn(|t| t * t))
    }

    fn left(&self, disc: &Discretization) -> Result<TimeTrace> {
        self.pick(disc, true)
    }

    fn right(&self, disc: &Discretization) -> Result<TimeTrace> {
        self.pick(disc, false)
    }

    fn single(&self, disc: &Discretization) -> Result<TimeTrace> {
        match self {
            InitialGuess::Pair { .. } => Err(usage("this method takes a single interface trace")),
            _ => self.pick(disc, true),
        }
    }

    fn pick(&self, disc: &Discretization, left: bool) -> Result<TimeTrace> {
        let trace = match self {
            InitialGuess::Function(f) => TimeTrace::sample(disc.dt, disc.n_time, |t| f(t)),
            InitialGuess::Trace(t) => t.clone(),
            InitialGuess::Pair { left: l, right: r } => {
                if left {
                    l.clone()
                } else {
                    r.clone()
                }
            }
        };
        if trace.values().len() != disc.n_time + 1 {
            return Err(usage(format!(
                "initial guess has {} samples, expected {}",
                trace.values().len(),
                disc.n_time + 1
            )));
        }
        Ok(trace)
    }
}

/// When to stop iterating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stopping {
    /// Error against the monodomain reference at most `tolerance`.
    #[default]
    Reference,
    /// Discrete `L²` change of the interface data at most `tolerance`; needs no reference.
    Increment,
}

#[derive(Debug, Clone)]
pub struct WrConfig {
    pub method: Method,
    /// Relaxation parameter in `(0, 1]`; ignored by the Schwarz variants.
    pub theta: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub initial_guess: InitialGuess,
    /// Overlap in cells for classical Schwarz, centred on the interface.
    pub overlap_cells: usize,
    pub flux_mode: FluxMode,
    pub start_mode: StartMode,
    pub stopping: Stopping,
}

impl WrConfig {
    /// Optimal relaxation, `h⁰(t) = t²`, tolerance `1e-10`, 24 cells of overlap.
    pub fn new(method: Method) -> Self {
        WrConfig {
            method,
            theta: method.optimal_theta(),
            max_iterations: 30,
            tolerance: 1e-10,
            initial_guess: InitialGuess::quadratic(),
            overlap_cells: 24,
            flux_mode: FluxMode::SchemeConsistent,
            start_mode: StartMode::Taylor,
            stopping: Stopping::Reference,
        }
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_start(mut self, start: StartMode) -> Self {
        self.start_mode = start;
        self
    }

    pub fn with_guess(mut self, guess: InitialGuess) -> Self {
        self.initial_guess = guess;
        self
    }

    pub fn with_max_iterations(mut self, n: usize) -> Self {
        self.max_iterations = n;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.method.uses_theta() && !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(usage(format!("theta must lie in (0, 1], got {}", self.theta)));
        }
        if self.method == Method::SwrClassical && self.overlap_cells == 0 {
            return Err(usage("classical Schwarz needs at least one cell of overlap"));
        }
        if self.max_iterations == 0 {
            return Err(usage("max_iterations must be at least 1"));
        }
        if !(self.tolerance >= 0.0) {
            return Err(usage(format!("tolerance must be nonnegative, got {}", self.tolerance)));
        }
        Ok(())
    }

    fn expect(&self, method: Method) -> Result<()> {
        if self.method != method {
            return Err(usage(format!("config is for {}, driver runs {}", self.method, method)));
        }
        self.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    /// 1-based iteration index.
    pub iteration: usize,
    /// `max_n ||u(t_n) - u^k(t_n)||_{L²}` against the monodomain solution; NaN without a reference.
    pub error_linf_l2: f64,
    /// Discrete `L²`-in-time error of the interface trace; NaN without a reference.
    pub trace_error_l2: f64,
    /// Discrete `L²` change of the interface data produced by this iteration.
    pub increment_l2: f64,
    /// `L²` norm of the flux jump across the interface (Neumann-Neumann only).
    pub flux_jump_l2: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterationHistory {
    pub records: Vec<IterationRecord>,
    /// First iteration meeting the stopping criterion.
    pub converged_at: Option<usize>,
    /// Set when the iteration was abandoned because the error blew up.
    pub diverged: bool,
}

impl IterationHistory {
    pub fn errors(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.error_linf_l2).collect()
    }

    pub fn trace_errors(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.trace_error_l2).collect()
    }

    pub fn last(&self) -> Option<&IterationRecord> {
        self.records.last()
    }

    /// First iteration whose error is at most `tol`.
    pub fn iterations_to(&self, tol: f64) -> Option<usize> {
        self.records
            .iter()
            .find(|r| r.error_linf_l2 <= tol)
            .map(|r| r.iteration)
    }
}

/// Final state of a driver run.
#[derive(Debug, Clone)]
pub struct WrOutcome {
    pub history: IterationHistory,
    /// Subdomain fields of the last iteration, left subdomain first.
    pub subdomains: Vec<SpaceTimeField>,
    /// The assembled iterate on the whole domain (interface node from the left subdomain).
    pub assembled: SpaceTimeField,
    /// Interface data after the last update, one entry per exchanged datum.
    pub interface: Vec<TimeTrace>,
    /// `max_n` mismatch between the two subdomains at the interface node in the last iterate.
    pub interface_discrepancy: f64,
}

/// Runs concurrent-capable stages of a driver. Results must not depend on the executor.
pub trait StageExecutor: Sync {
    fn join<A, B, FA, FB>(&self, a: FA, b: FB) -> (A, B)
    where
        A: Send,
        B: Send,
        FA: FnOnce() -> A + Send,
        FB: FnOnce() -> B + Send;
}

/// Runs both stages on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl StageExecutor for Sequential {
    fn join<A, B, FA, FB>(&self, a: FA, b: FB) -> (A, B)
    where
        A: Send,
        B: Send,
        FA: FnOnce() -> A + Send,
        FB: FnOnce() -> B + Send,
    {
        (a(), b())
    }
}

/// The single-domain discrete solution used as the convergence reference.
pub fn monodomain(problem: &WaveProblem, disc: &Discretization, start: StartMode) -> Result<SpaceTimeField> {
    problem.validate()?;
    disc.check_problem(problem)?;
    let p = SubdomainProblem::restricted(
        problem,
        problem.x_left,
        problem.x_right,
        BoundaryCondition::Dirichlet(TimeTrace::sample(disc.dt, disc.n_time, |t| (problem.g_left)(t))),
        BoundaryCondition::Dirichlet(TimeTrace::sample(disc.dt, disc.n_time, |t| (problem.g_right)(t))),
        *disc,
        start,
    );
    solve(&p)
}

/// Dispatches on `cfg.method`, running independent stage solves through `exec`.
pub fn run_with<E: StageExecutor>(
    problem: &WaveProblem,
    disc: &Discretization,
    cfg: &WrConfig,
    reference: Option<&SpaceTimeField>,
    exec: &E,
) -> Result<WrOutcome> {
    match cfg.method {
        Method::Dnwr => dnwr::run(problem, disc, cfg, reference),
        Method::Nnwr => nnwr::run(problem, disc, cfg, reference, exec),
        Method::SwrClassical => swr::run_classical(problem, disc, cfg, reference, exec),
        Method::SwrOptimized => swr::run_optimized(problem, disc, cfg, reference, exec),
    }
}

/// [`run_with`] on the calling thread.
pub fn run(
    problem: &WaveProblem,
    disc: &Discretization,
    cfg: &WrConfig,
    reference: Option<&SpaceTimeField>,
) -> Result<WrOutcome> {
    run_with(problem, disc, cfg, reference, &Sequential)
}

/// Interface data that makes iteration 1 reproduce `reference`.
pub fn fixed_point_guess(
    problem: &WaveProblem,
    disc: &Discretization,
    cfg: &WrConfig,
    reference: &SpaceTimeField,
) -> Result<InitialGuess> {
    let layout = Layout::new(problem, disc)?;
    match cfg.method {
        Method::Dnwr | Method::Nnwr => Ok(InitialGuess::Trace(reference.trace(layout.interface_node))),
        Method::SwrClassical => {
            let (left_ext, right_ext) = swr::overlap_split(cfg.overlap_cells);
            Ok(InitialGuess::Pair {
                left: reference.trace(layout.interface_node + left_ext),
                right: reference.trace(layout.interface_node - right_ext),
            })
        }
        Method::SwrOptimized => swr::optimized_fixed_point(problem, disc, cfg, reference, &layout),
    }
}

/// Node bookkeeping of the two non-overlapping subdomains.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Layout {
    pub interface_node: usize,
    pub right_cells: usize,
}

impl Layout {
    pub fn new(problem: &WaveProblem, disc: &Discretization) -> Result<Self> {
        problem.validate()?;
        let left_cells = disc.cells(problem.a())?;
        let right_cells = disc.cells(problem.b())?;
        Ok(Layout {
            interface_node: left_cells,
            right_cells,
        })
    }
}

pub(crate) fn boundary_traces(problem: &WaveProblem, disc: &Discretization) -> (TimeTrace, TimeTrace) {
    (
        TimeTrace::sample(disc.dt, disc.n_time, |t| (problem.g_left)(t)),
        TimeTrace::sample(disc.dt, disc.n_time, |t| (problem.g_right)(t)),
    )
}

/// Produces the reference when the stopping rule needs one and none was supplied.
pub(crate) fn resolve_reference<'a>(
    problem: &WaveProblem,
    disc: &Discretization,
    cfg: &WrConfig,
    reference: Option<&'a SpaceTimeField>,
    owned: &'a mut Option<SpaceTimeField>,
) -> Result<Option<&'a SpaceTimeField>> {
    if let Some(r) = reference {
        return Ok(Some(r));
    }
    if cfg.stopping == Stopping::Reference {
        *owned = Some(monodomain(problem, disc, cfg.start_mode)?);
        return Ok(owned.as_ref());
    }
    Ok(None)
}

/// Accumulates the iteration history and applies the stopping rule.
pub(crate) struct Tracker<'a> {
    cfg: &'a WrConfig,
    reference: Option<&'a SpaceTimeField>,
    reference_trace: Option<TimeTrace>,
    history: IterationHistory,
}

impl<'a> Tracker<'a> {
    pub fn new(cfg: &'a WrConfig, reference: Option<&'a SpaceTimeField>, interface_node: usize) -> Result<Self> {
        let reference_trace = match reference {
            Some(r) if interface_node < r.n_nodes() => Some(r.trace(interface_node)),
            Some(_) => return Err(usage("reference field does not cover the interface")),
            None => None,
        };
        Ok(Tracker {
            cfg,
            reference,
            reference_trace,
            history: IterationHistory::default(),
        })
    }

    /// Records iteration `k`; returns `true` when iteration should stop.
    pub fn record(
        &mut self,
        k: usize,
        assembled: &SpaceTimeField,
        trace: &TimeTrace,
        increment_l2: f64,
        flux_jump_l2: Option<f64>,
    ) -> Result<bool> {
        let (error, trace_error) = match (self.reference, &self.reference_trace) {
            (Some(r), Some(rt)) => (error_linf_l2(r, assembled)?, trace.sub(rt)?.l2()),
            _ => (f64::NAN, f64::NAN),
        };
        self.history.records.push(IterationRecord {
            iteration: k,
            error_linf_l2: error,
            trace_error_l2: trace_error,
            increment_l2,
            flux_jump_l2,
        });
        let measure = match self.cfg.stopping {
            Stopping::Reference => error,
            Stopping::Increment => increment_l2,
        };
        if measure <= self.cfg.tolerance {
            self.history.converged_at = Some(k);
            return Ok(true);
        }
        let blown = |v: f64| v.is_infinite() || v > DIVERGENCE_CEILING;
        if blown(error) || blown(increment_l2) || increment_l2.is_nan() || (self.reference.is_some() && error.is_nan())
        {
            self.history.diverged = true;
            return Ok(true);
        }
        Ok(false)
    }

    pub fn finish(self) -> IterationHistory {
        self.history
    }
}
