//! Leapfrog solver for `u_tt - c^2 u_xx = f` on one interval.
//!
//! Every subproblem of the waveform drivers (monodomain reference, Dirichlet and Neumann
//! subdomain solves, correction solves and absorbing-boundary solves) goes through
//! [`solve`]. Interior nodes use the centred stencil
//!
//! ```text
//! u_j^{n+1} = 2u_j^n - u_j^{n-1} + λ²(u_{j+1}^n - 2u_j^n + u_{j-1}^n) + dt² f(x_j, t_n)
//! ```
//!
//! and non-Dirichlet ends apply the same stencil with a ghost value outside the interval.
//! For outward normal derivative `g` the ghost is `u_inner + 2 dx g` on either side.
//!
//! [`extract_flux`] inverts that ghost relation on a computed field, so a Neumann solve fed
//! with the extracted flux reproduces the field it came from to roundoff.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{usage, Error, Result};
use crate::field::{lattice_x, SpaceTimeField, TimeTrace};
use crate::problem::{zero_fn, Discretization, ScalarFn, SourceFn, WaveProblem};
use crate::quad;

/// CFL numbers up to `1 + CFL_SLACK` are accepted as `λ = 1`.
const CFL_SLACK: f64 = 1e-12;
const DALEMBERT_QUAD_TOL: f64 = 1e-14;

/// End of an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Data imposed at one end of an interval, sampled at every time level.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryCondition {
    /// Prescribed value. The level-0 sample is ignored; level 0 always comes from `u0`.
    Dirichlet(TimeTrace),
    /// Prescribed outward normal derivative.
    Neumann(TimeTrace),
    /// Prescribed `(∂_n + (1/c) ∂_t) u`.
    Absorbing(TimeTrace),
}

impl BoundaryCondition {
    fn trace(&self) -> &TimeTrace {
        match self {
            BoundaryCondition::Dirichlet(t) | BoundaryCondition::Neumann(t) | BoundaryCondition::Absorbing(t) => t,
        }
    }

    pub fn homogeneous_dirichlet(n_time: usize, dt: f64) -> Self {
        BoundaryCondition::Dirichlet(TimeTrace::zeros(dt, n_time))
    }
}

/// How level 1 is produced from the initial data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StartMode {
    /// Second-order Taylor expansion using the discrete Laplacian of `u0`.
    #[default]
    Taylor,
    /// d'Alembert's formula with the velocity integral done by adaptive quadrature. Needs `f = 0`.
    ExactDalembert,
}

/// How the outward normal derivative is recovered from a computed field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FluxMode {
    /// Inverts the ghost-node relation of the scheme at the boundary node.
    #[default]
    SchemeConsistent,
    /// Second-order one-sided difference.
    OneSided,
}

/// One interval, its data and its boundary conditions.
#[derive(Clone)]
pub struct SubdomainProblem {
    pub x_left: f64,
    pub x_right: f64,
    pub wave_speed: f64,
    pub u0: ScalarFn,
    pub v0: ScalarFn,
    pub source: Option<SourceFn>,
    pub left: BoundaryCondition,
    pub right: BoundaryCondition,
    pub disc: Discretization,
    pub start: StartMode,
}

impl fmt::Debug for SubdomainProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubdomainProblem")
            .field("x_left", &self.x_left)
            .field("x_right", &self.x_right)
            .field("wave_speed", &self.wave_speed)
            .field("disc", &self.disc)
            .field("start", &self.start)
            .finish_non_exhaustive()
    }
}

impl SubdomainProblem {
    /// The restriction of `problem` to `(x_left, x_right)` with the given end conditions.
    pub fn restricted(
        problem: &WaveProblem,
        x_left: f64,
        x_right: f64,
        left: BoundaryCondition,
        right: BoundaryCondition,
        disc: Discretization,
        start: StartMode,
    ) -> Self {
        SubdomainProblem {
            x_left,
            x_right,
            wave_speed: problem.wave_speed,
            u0: problem.u0.clone(),
            v0: problem.v0.clone(),
            source: problem.source.clone(),
            left,
            right,
            disc,
            start,
        }
    }

    /// Zero initial data and zero source on `(x_left, x_right)`.
    pub fn homogeneous(
        x_left: f64,
        x_right: f64,
        wave_speed: f64,
        left: BoundaryCondition,
        right: BoundaryCondition,
        disc: Discretization,
        start: StartMode,
    ) -> Self {
        SubdomainProblem {
            x_left,
            x_right,
            wave_speed,
            u0: zero_fn(),
            v0: zero_fn(),
            source: None,
            left,
            right,
            disc,
            start,
        }
    }

    pub fn cfl(&self) -> f64 {
        self.disc.cfl(self.wave_speed)
    }

    pub fn n_nodes(&self) -> Result<usize> {
        if !(self.x_left < self.x_right) {
            return Err(usage(format!("empty interval ({}, {})", self.x_left, self.x_right)));
        }
        Ok(self.disc.cells(self.x_right - self.x_left)? + 1)
    }

    fn node_x(&self, j: usize) -> f64 {
        lattice_x(self.x_left, self.disc.dx, j as f64)
    }

    fn source_at(&self, x: f64, t: f64) -> f64 {
        self.source.as_ref().map_or(0.0, |f| f(x, t))
    }

    fn validate(&self) -> Result<Stencil> {
        if !(self.wave_speed > 0.0) {
            return Err(usage(format!("wave speed must be positive, got {}", self.wave_speed)));
        }
        let lambda = self.cfl();
        if lambda > 1.0 + CFL_SLACK || !lambda.is_finite() {
            return Err(Error::Unstable { cfl: lambda });
        }
        let n_nodes = self.n_nodes()?;
        for (name, bc) in [("left", &self.left), ("right", &self.right)] {
            let len = bc.trace().values().len();
            if len != self.disc.n_time + 1 {
                return Err(usage(format!(
                    "{name} boundary trace has {len} samples, expected {}",
                    self.disc.n_time + 1
                )));
            }
        }
        if self.start == StartMode::ExactDalembert && self.source.is_some() {
            return Err(usage("the d'Alembert starter requires a zero source"));
        }
        Ok(Stencil {
            lambda,
            lambda2: lambda * lambda,
            n_nodes,
        })
    }

    /// Level-1 value at node `j` when every neighbour takes its `u0` value; for boundary
    /// nodes the outside neighbour is `u0` evaluated one cell beyond the interval.
    fn start_value(&self, st: &Stencil, j: usize) -> f64 {
        let dx = self.disc.dx;
        let dt = self.disc.dt;
        let x = self.node_x(j);
        match self.start {
            StartMode::Taylor => {
                let u = (self.u0)(x);
                let lap = (self.u0)(x + dx) - 2.0 * u + (self.u0)(x - dx);
                u + dt * (self.v0)(x) + 0.5 * st.lambda2 * lap + 0.5 * dt * dt * self.source_at(x, 0.0)
            }
            StartMode::ExactDalembert => {
                let h = self.wave_speed * dt;
                let v0 = &self.v0;
                let integral = quad::integrate(&|s| v0(s), x - h, x + h, DALEMBERT_QUAD_TOL);
                0.5 * ((self.u0)(x + h) + (self.u0)(x - h)) + integral / (2.0 * self.wave_speed)
            }
        }
    }

    /// `u0` one cell outside the interval on `side`.
    fn outside_u0(&self, side: Side, n_nodes: usize) -> f64 {
        match side {
            Side::Left => (self.u0)(lattice_x(self.x_left, self.disc.dx, -1.0)),
            Side::Right => (self.u0)(lattice_x(self.x_left, self.disc.dx, n_nodes as f64)),
        }
    }
}

struct Stencil {
    lambda: f64,
    lambda2: f64,
    n_nodes: usize,
}

/// Second difference at an end node, summed in the order the interior stencil uses.
fn laplacian(side: Side, ghost: f64, c: f64, c_i: f64) -> f64 {
    match side {
        Side::Right => ghost - 2.0 * c + c_i,
        Side::Left => c_i - 2.0 * c + ghost,
    }
}

fn end_nodes(side: Side, n_nodes: usize) -> (usize, usize, usize) {
    match side {
        Side::Left => (0, 1, 2),
        Side::Right => (n_nodes - 1, n_nodes.saturating_sub(2), n_nodes.saturating_sub(3)),
    }
}

/// Level-1 row. Boundary nodes take the Dirichlet value or apply the starter with the
/// ghost value implied by the Neumann or absorbing data at level 0.
pub fn first_step(p: &SubdomainProblem) -> Result<Vec<f64>> {
    let st = p.validate()?;
    Ok(first_row(p, &st))
}

fn first_row(p: &SubdomainProblem, st: &Stencil) -> Vec<f64> {
    let n = st.n_nodes;
    let mut row: Vec<f64> = (0..n).map(|j| p.start_value(st, j)).collect();
    for (side, bc) in [(Side::Left, &p.left), (Side::Right, &p.right)] {
        let (e, i, _) = end_nodes(side, n);
        row[e] = match bc {
            BoundaryCondition::Dirichlet(trace) => trace.get(1),
            BoundaryCondition::Neumann(g) => {
                let ghost = (p.u0)(p.node_x(i)) + 2.0 * p.disc.dx * g.get(0);
                row[e] + 0.5 * st.lambda2 * (ghost - p.outside_u0(side, n))
            }
            BoundaryCondition::Absorbing(r) => {
                let dudn = r.get(0) - (p.v0)(p.node_x(e)) / p.wave_speed;
                let ghost = (p.u0)(p.node_x(i)) + 2.0 * p.disc.dx * dudn;
                row[e] + 0.5 * st.lambda2 * (ghost - p.outside_u0(side, n))
            }
        };
    }
    row
}

/// Runs the leapfrog scheme over the whole window.
pub fn solve(p: &SubdomainProblem) -> Result<SpaceTimeField> {
    let st = p.validate()?;
    let dx = p.disc.dx;
    let dt = p.disc.dt;
    let n_nodes = st.n_nodes;
    let n_time = p.disc.n_time;
    let mut u = SpaceTimeField::zeros(p.x_left, dx, dt, n_nodes, n_time);
    for (j, v) in u.row_mut(0).iter_mut().enumerate() {
        *v = (p.u0)(p.node_x(j));
    }
    let row1 = first_row(p, &st);
    u.row_mut(1).copy_from_slice(&row1);

    let l2 = st.lambda2;
    let mut next = alloc::vec![0.0; n_nodes];
    for n in 1..n_time {
        let t = n as f64 * dt;
        {
            let prev = u.row(n - 1);
            let cur = u.row(n);
            for j in 1..n_nodes - 1 {
                next[j] = 2.0 * cur[j] - prev[j] + l2 * (cur[j + 1] - 2.0 * cur[j] + cur[j - 1]);
            }
            if p.source.is_some() {
                for (j, v) in next.iter_mut().enumerate().take(n_nodes - 1).skip(1) {
                    *v += dt * dt * p.source_at(p.node_x(j), t);
                }
            }
            for (side, bc) in [(Side::Left, &p.left), (Side::Right, &p.right)] {
                let (e, i, _) = end_nodes(side, n_nodes);
                let f = dt * dt * p.source_at(p.node_x(e), t);
                next[e] = match bc {
                    BoundaryCondition::Dirichlet(trace) => trace.get(n + 1),
                    BoundaryCondition::Neumann(g) => {
                        let ghost = cur[i] + 2.0 * dx * g.get(n);
                        2.0 * cur[e] - prev[e] + l2 * laplacian(side, ghost, cur[e], cur[i]) + f
                    }
                    BoundaryCondition::Absorbing(r) => {
                        let lam = st.lambda;
                        (2.0 * (1.0 - l2) * cur[e] - (1.0 - lam) * prev[e] + 2.0 * l2 * (cur[i] + dx * r.get(n)) + f)
                            / (1.0 + lam)
                    }
                };
            }
        }
        u.row_mut(n + 1).copy_from_slice(&next);
    }
    Ok(u)
}

/// Value beyond the end `side` implied by the scheme at levels `0..n_time`.
///
/// Level 0 inverts the level-1 starter relation, later levels the boundary-node stencil.
pub fn ghost_values(p: &SubdomainProblem, u: &SpaceTimeField, side: Side) -> Result<Vec<f64>> {
    let st = p.validate()?;
    let n_nodes = u.n_nodes();
    let n_time = u.n_time();
    if n_nodes < 2 || st.n_nodes != n_nodes || p.disc.n_time != n_time {
        return Err(usage("field does not match the subdomain problem"));
    }
    let (e, i, _) = end_nodes(side, n_nodes);
    let l2 = st.lambda2;
    let x_e = u.node_x(e);
    let mut ghost = Vec::with_capacity(n_time);
    ghost.push(p.outside_u0(side, n_nodes) + 2.0 / l2 * (u.at(1, e) - p.start_value(&st, e)));
    for n in 1..n_time {
        let f = p.source_at(x_e, n as f64 * u.dt()) * u.dt() * u.dt();
        let (c, c_i) = (u.at(n, e), u.at(n, i));
        let (next, prev) = (u.at(n + 1, e), u.at(n - 1, e));
        let s = (next - f - (2.0 * c - prev)) / l2;
        let guess = match side {
            Side::Right => (s - c_i) + 2.0 * c,
            Side::Left => s - (c_i - 2.0 * c),
        };
        let forward = |g: f64| 2.0 * c - prev + l2 * laplacian(side, g, c, c_i) + f;
        ghost.push(invert(forward, l2, next, guess));
    }
    Ok(ghost)
}

/// `v` with `base + step * v` as close to `target` in floating point as a few Newton
/// corrections get.
pub(crate) fn encode(base: f64, step: f64, target: f64) -> f64 {
    invert(|v| base + step * v, step, target, (target - base) / step)
}

/// Newton corrections of `guess` towards `forward(v) == target` for a forward map with
/// approximate constant `slope`; returns the candidate with the smallest miss.
fn invert(forward: impl Fn(f64) -> f64, slope: f64, target: f64, guess: f64) -> f64 {
    let mut v = guess;
    let mut best = (f64::INFINITY, v);
    for _ in 0..6 {
        let miss = target - forward(v);
        if miss.abs() < best.0 {
            best = (miss.abs(), v);
        }
        if miss == 0.0 {
            break;
        }
        v += miss / slope;
    }
    best.1
}

/// Outward normal derivative at one end of a field computed by [`solve`] for `p`.
///
/// In [`FluxMode::SchemeConsistent`] the ghost value is recovered from the boundary-node
/// stencil (and, at level 0, from the level-1 starter relation). The last level has no
/// successor and repeats the previous value.
pub fn extract_flux(p: &SubdomainProblem, u: &SpaceTimeField, side: Side, mode: FluxMode) -> Result<TimeTrace> {
    let n_nodes = u.n_nodes();
    if n_nodes < 3 {
        return Err(usage(format!(
            "flux extraction needs at least 3 nodes, field has {n_nodes}"
        )));
    }
    let n_time = u.n_time();
    let dx = u.dx();
    let (e, i, i2) = end_nodes(side, n_nodes);
    let mut g = alloc::vec![0.0; n_time + 1];
    match mode {
        FluxMode::OneSided => {
            for (n, v) in g.iter_mut().enumerate() {
                *v = (3.0 * u.at(n, e) - 4.0 * u.at(n, i) + u.at(n, i2)) / (2.0 * dx);
            }
        }
        FluxMode::SchemeConsistent => {
            let ghost = ghost_values(p, u, side)?;
            let step = -2.0 * dx;
            for (n, v) in g.iter_mut().enumerate().take(n_time) {
                *v = encode(ghost[n], step, u.at(n, i));
            }
            g[n_time] = g[n_time - 1];
        }
    }
    Ok(TimeTrace::new(u.dt(), g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::error_linf_l2;
    use crate::problem::scalar_fn;
    use core::f64::consts::PI;

    fn disc(dx: f64, dt: f64, n: usize) -> Discretization {
        Discretization::new(dx, dt, n).unwrap()
    }

    #[test]
    fn zero_data_gives_zero_field() {
        let d = disc(0.1, 0.1, 20);
        let p = SubdomainProblem::homogeneous(
            0.0,
            1.0,
            1.0,
            BoundaryCondition::homogeneous_dirichlet(20, 0.1),
            BoundaryCondition::Neumann(TimeTrace::zeros(0.1, 20)),
            d,
            StartMode::Taylor,
        );
        let u = solve(&p).unwrap();
        assert!(u.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn rejects_cfl_above_one() {
        let d = disc(0.1, 0.11, 5);
        let p = SubdomainProblem::homogeneous(
            0.0,
            1.0,
            1.0,
            BoundaryCondition::homogeneous_dirichlet(5, 0.11),
            BoundaryCondition::homogeneous_dirichlet(5, 0.11),
            d,
            StartMode::Taylor,
        );
        assert!(matches!(solve(&p), Err(Error::Unstable { .. })));
    }

    #[test]
    fn rejects_short_trace_and_sourced_dalembert() {
        let d = disc(0.1, 0.1, 5);
        let mut p = SubdomainProblem::homogeneous(
            0.0,
            1.0,
            1.0,
            BoundaryCondition::homogeneous_dirichlet(4, 0.1),
            BoundaryCondition::homogeneous_dirichlet(5, 0.1),
            d,
            StartMode::Taylor,
        );
        assert!(matches!(solve(&p), Err(Error::Usage(_))));
        p.left = BoundaryCondition::homogeneous_dirichlet(5, 0.1);
        p.start = StartMode::ExactDalembert;
        p.source = Some(alloc::sync::Arc::new(|x, _| x));
        assert!(matches!(first_step(&p), Err(Error::Usage(_))));
    }

    #[test]
    fn standing_wave_is_exact_at_unit_cfl() {
        let n = 200;
        let d = disc(0.01, 0.01, n);
        let mut p = SubdomainProblem::homogeneous(
            0.0,
            1.0,
            1.0,
            BoundaryCondition::homogeneous_dirichlet(n, 0.01),
            BoundaryCondition::homogeneous_dirichlet(n, 0.01),
            d,
            StartMode::ExactDalembert,
        );
        p.u0 = scalar_fn(|x| (PI * x).sin());
        let u = solve(&p).unwrap();
        let exact = SpaceTimeField::sample(0.0, 0.01, 0.01, 101, n, |x, t| (PI * t).cos() * (PI * x).sin());
        let worst = u
            .values()
            .iter()
            .zip(exact.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(worst <= 1e-12, "max deviation {worst}");
    }

    #[test]
    fn taylor_start_with_velocity_only() {
        let d = disc(0.02, 0.02, 3);
        let mut p = SubdomainProblem::homogeneous(
            -3.0,
            2.0,
            1.0,
            BoundaryCondition::homogeneous_dirichlet(3, 0.02),
            BoundaryCondition::homogeneous_dirichlet(3, 0.02),
            d,
            StartMode::Taylor,
        );
        p.v0 = scalar_fn(|x| x * (-x).exp());
        let row = first_step(&p).unwrap();
        for (j, v) in row.iter().enumerate().take(row.len() - 1).skip(1) {
            let x = -3.0 + j as f64 * 0.02;
            assert!((v - 0.02 * x * (-x).exp()).abs() < 1e-15);
        }
        p.left = BoundaryCondition::Dirichlet(TimeTrace::sample(0.02, 3, |t| 7.0 * t));
        assert!((first_step(&p).unwrap()[0] - 0.14).abs() < 1e-15);
    }

    #[test]
    fn dalembert_start_matches_antiderivative() {
        let d = disc(0.02, 0.02, 3);
        let mut p = SubdomainProblem::homogeneous(
            -1.0,
            1.0,
            1.0,
            BoundaryCondition::homogeneous_dirichlet(3, 0.02),
            BoundaryCondition::homogeneous_dirichlet(3, 0.02),
            d,
            StartMode::ExactDalembert,
        );
        p.v0 = scalar_fn(|x| x * (-x).exp());
        let anti = |x: f64| -(x + 1.0) * (-x).exp();
        let row = first_step(&p).unwrap();
        // node 50 sits at x = 0
        let expected = 0.5 * (anti(0.02) - anti(-0.02));
        assert!((row[50] - expected).abs() < 1e-12);
        // high-precision value of (P(0.02) - P(-0.02)) / 2
        assert!((row[50] - -2.666773334857154e-6).abs() < 1e-15);
        for (j, v) in row.iter().enumerate().take(100).skip(1) {
            let x = -1.0 + j as f64 * 0.02;
            assert!((v - 0.5 * (anti(x + 0.02) - anti(x - 0.02))).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_profile_has_unit_flux() {
        let n = 6;
        let d = disc(0.1, 0.05, n);
        let mut p = SubdomainProblem::homogeneous(
            0.0,
            1.0,
            2.0,
            BoundaryCondition::Dirichlet(TimeTrace::zeros(0.05, n)),
            BoundaryCondition::Dirichlet(TimeTrace::sample(0.05, n, |_| 1.0)),
            d,
            StartMode::Taylor,
        );
        p.u0 = scalar_fn(|x| x);
        let u = solve(&p).unwrap();
        assert!(u
            .values()
            .chunks(11)
            .all(|r| r.iter().enumerate().all(|(j, v)| (v - j as f64 * 0.1).abs() < 1e-14)));
        for mode in [FluxMode::SchemeConsistent, FluxMode::OneSided] {
            let right = extract_flux(&p, &u, Side::Right, mode).unwrap();
            assert!(
                right.values().iter().all(|g| (g - 1.0).abs() < 1e-12),
                "{mode:?}: {right:?}"
            );
            let left = extract_flux(&p, &u, Side::Left, mode).unwrap();
            assert!(
                left.values().iter().all(|g| (g + 1.0).abs() < 1e-12),
                "{mode:?}: {left:?}"
            );
        }
    }

    #[test]
    fn zero_field_zero_flux_and_narrow_field_rejected() {
        let d = disc(0.5, 0.5, 4);
        let p = SubdomainProblem::homogeneous(
            0.0,
            1.0,
            1.0,
            BoundaryCondition::homogeneous_dirichlet(4, 0.5),
            BoundaryCondition::homogeneous_dirichlet(4, 0.5),
            d,
            StartMode::Taylor,
        );
        let u = solve(&p).unwrap();
        assert!(extract_flux(&p, &u, Side::Right, FluxMode::SchemeConsistent)
            .unwrap()
            .values()
            .iter()
            .all(|g| *g == 0.0));
        let narrow = u.restrict(0, 1).unwrap();
        assert!(extract_flux(&p, &narrow, Side::Right, FluxMode::OneSided).is_err());
    }

    #[test]
    fn neumann_solve_reproduces_dirichlet_solve() {
        for start in [StartMode::Taylor, StartMode::ExactDalembert] {
            for lambda in [1.0, 0.7] {
                let dx = 0.05;
                let dt = lambda * dx;
                let n = 60;
                let d = disc(dx, dt, n);
                let mut p = SubdomainProblem::homogeneous(
                    -1.0,
                    0.5,
                    1.0,
                    BoundaryCondition::Dirichlet(TimeTrace::sample(dt, n, |t| t.sin())),
                    BoundaryCondition::Dirichlet(TimeTrace::sample(dt, n, |t| t * t - 0.3 * t)),
                    d,
                    start,
                );
                p.u0 = scalar_fn(|x| 0.2 * x * x);
                p.v0 = scalar_fn(|x| (2.0 * x).cos());
                let u = solve(&p).unwrap();
                for side in [Side::Left, Side::Right] {
                    let g = extract_flux(&p, &u, side, FluxMode::SchemeConsistent).unwrap();
                    let mut q = p.clone();
                    match side {
                        Side::Left => q.left = BoundaryCondition::Neumann(g),
                        Side::Right => q.right = BoundaryCondition::Neumann(g),
                    }
                    let v = solve(&q).unwrap();
                    let e = error_linf_l2(&u, &v).unwrap();
                    assert!(e <= 1e-12, "{start:?} λ={lambda} {side:?}: {e}");
                }
            }
        }
    }

    #[test]
    fn absorbing_end_lets_a_pulse_leave() {
        // a right-moving pulse exits through an absorbing right end without reflection
        let dx = 0.01;
        let n = 150;
        let d = disc(dx, dx, n);
        let pulse = |x: f64| (-200.0 * (x - 0.5) * (x - 0.5)).exp();
        let mut p = SubdomainProblem::homogeneous(
            0.0,
            1.0,
            1.0,
            BoundaryCondition::homogeneous_dirichlet(n, dx),
            BoundaryCondition::Absorbing(TimeTrace::zeros(dx, n)),
            d,
            StartMode::ExactDalembert,
        );
        p.u0 = scalar_fn(pulse);
        p.v0 = scalar_fn(move |x| 400.0 * (x - 0.5) * pulse(x));
        let u = solve(&p).unwrap();
        assert!(u.row(n).iter().all(|v| v.abs() < 1e-12));
    }
}
