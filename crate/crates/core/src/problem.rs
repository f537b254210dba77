//! Continuous problem data and the space-time grid shared by every solve.

use alloc::format;
use alloc::sync::Arc;
use core::fmt;

use crate::error::{usage, Result};

/// A real function of one variable (space or time).
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A source term `f(x, t)`.
pub type SourceFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Relative slack used when checking that lengths are integer multiples of the grid spacing.
const GRID_SLACK: f64 = 1e-9;

pub fn scalar_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> ScalarFn {
    Arc::new(f)
}

pub fn zero_fn() -> ScalarFn {
    Arc::new(|_| 0.0)
}

/// `u_tt - c^2 u_xx = f` on `(x_left, x_right)` with Dirichlet data at both ends,
/// split at `interface` into a left subdomain of length `a` and a right one of length `b`.
#[derive(Clone)]
pub struct WaveProblem {
    pub x_left: f64,
    pub interface: f64,
    pub x_right: f64,
    pub wave_speed: f64,
    pub u0: ScalarFn,
    pub v0: ScalarFn,
    pub g_left: ScalarFn,
    pub g_right: ScalarFn,
    /// `None` means `f = 0`.
    pub source: Option<SourceFn>,
}

impl fmt::Debug for WaveProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WaveProblem")
            .field("x_left", &self.x_left)
            .field("interface", &self.interface)
            .field("x_right", &self.x_right)
            .field("wave_speed", &self.wave_speed)
            .field("has_source", &self.source.is_some())
            .finish_non_exhaustive()
    }
}

impl WaveProblem {
    pub fn new(
        x_left: f64,
        interface: f64,
        x_right: f64,
        wave_speed: f64,
        u0: ScalarFn,
        v0: ScalarFn,
        g_left: ScalarFn,
        g_right: ScalarFn,
        source: Option<SourceFn>,
    ) -> Result<Self> {
        let p = WaveProblem {
            x_left,
            interface,
            x_right,
            wave_speed,
            u0,
            v0,
            g_left,
            g_right,
            source,
        };
        p.validate()?;
        Ok(p)
    }

    /// Zero initial data, zero source and homogeneous boundary data: the error equations.
    pub fn zero_data(x_left: f64, interface: f64, x_right: f64, wave_speed: f64) -> Result<Self> {
        Self::new(
            x_left,
            interface,
            x_right,
            wave_speed,
            zero_fn(),
            zero_fn(),
            zero_fn(),
            zero_fn(),
            None,
        )
    }

    /// Unit wave speed, `u(x,0) = 0`, `u_t(x,0) = x e^{-x}` and boundary values
    /// `u(x_b, t) = x_b e^{-x_b} t` at both physical ends. On `(-3, 2)` this is the
    /// standard benchmark with `u(-3,t) = -3e^3 t` and `u(2,t) = 2e^{-2} t`.
    pub fn benchmark(x_left: f64, interface: f64, x_right: f64) -> Result<Self> {
        let gl = x_left * libm::exp(-x_left);
        let gr = x_right * libm::exp(-x_right);
        Self::new(
            x_left,
            interface,
            x_right,
            1.0,
            zero_fn(),
            scalar_fn(|x| x * libm::exp(-x)),
            scalar_fn(move |t| gl * t),
            scalar_fn(move |t| gr * t),
            None,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_left, self.interface, self.x_right, self.wave_speed]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(usage("problem coordinates and wave speed must be finite"));
        }
        if !(self.x_left < self.interface && self.interface < self.x_right) {
            return Err(usage(format!(
                "need x_left < interface < x_right, got {} < {} < {}",
                self.x_left, self.interface, self.x_right
            )));
        }
        if self.wave_speed <= 0.0 {
            return Err(usage(format!("wave speed must be positive, got {}", self.wave_speed)));
        }
        Ok(())
    }

    /// Length of the left subdomain.
    pub fn a(&self) -> f64 {
        self.interface - self.x_left
    }

    /// Length of the right subdomain.
    pub fn b(&self) -> f64 {
        self.x_right - self.interface
    }

    pub fn source_at(&self, x: f64, t: f64) -> f64 {
        self.source.as_ref().map_or(0.0, |f| f(x, t))
    }
}

/// Uniform grid spacing, time step and number of steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discretization {
    pub dx: f64,
    pub dt: f64,
    pub n_time: usize,
}

impl Discretization {
    pub fn new(dx: f64, dt: f64, n_time: usize) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite()) || !(dt > 0.0 && dt.is_finite()) {
            return Err(usage(format!("dx and dt must be positive, got dx={dx}, dt={dt}")));
        }
        if n_time == 0 {
            return Err(usage("need at least one time step"));
        }
        Ok(Discretization { dx, dt, n_time })
    }

    /// Builds the discretization of the window `(0, t_end)`; `t_end` must be a multiple of `dt`.
    pub fn with_window(dx: f64, dt: f64, t_end: f64) -> Result<Self> {
        let n = whole_multiple(t_end, dt)
            .ok_or_else(|| usage(format!("time window {t_end} is not an integer multiple of dt={dt}")))?;
        Self::new(dx, dt, n)
    }

    pub fn t_end(&self) -> f64 {
        self.n_time as f64 * self.dt
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.dt
    }

    /// CFL number `c dt / dx`.
    pub fn cfl(&self, wave_speed: f64) -> f64 {
        wave_speed * self.dt / self.dx
    }

    /// Number of cells covering `length`, if it is an integer multiple of `dx`.
    pub fn cells(&self, length: f64) -> Result<usize> {
        whole_multiple(length, self.dx)
            .ok_or_else(|| usage(format!("length {length} is not an integer multiple of dx={}", self.dx)))
    }

    /// Checks that both subdomains of `problem` are resolved by whole cells.
    pub fn check_problem(&self, problem: &WaveProblem) -> Result<()> {
        self.cells(problem.a())?;
        self.cells(problem.b())?;
        Ok(())
    }
}

/// `Some(n)` when `length = n * step` up to a small relative slack.
pub(crate) fn whole_multiple(length: f64, step: f64) -> Option<usize> {
    if !(length > 0.0) || !(step > 0.0) {
        return None;
    }
    let ratio = length / step;
    let n = libm::round(ratio);
    if n >= 1.0 && (ratio - n).abs() <= GRID_SLACK * ratio.max(1.0) {
        Some(n as usize)
    } else {
        None
    }
}
