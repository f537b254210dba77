use alloc::format;

use crate::error::{usage, Result};
use crate::field::{concatenate, SpaceTimeField, TimeTrace};
use crate::problem::{Discretization, WaveProblem};
use crate::stepper::{encode, extract_flux, ghost_values, solve, BoundaryCondition, FluxMode, Side, SubdomainProblem};

use super::{
    boundary_traces, resolve_reference, InitialGuess, Layout, Method, Sequential, StageExecutor, Tracker, WrConfig,
    WrOutcome,
};

/// Cells by which the left subdomain reaches past the interface, and the right one before it.
pub(super) fn overlap_split(overlap_cells: usize) -> (usize, usize) {
    (overlap_cells - overlap_cells / 2, overlap_cells / 2)
}

/// Classical Schwarz waveform relaxation with Dirichlet exchange on overlapping subdomains
/// `(x_left, Γ + L/2)` and `(Γ - L/2, x_right)`, Jacobi ordering, on the calling thread.
pub fn swr_classical_iterate(
    problem: &WaveProblem,
    disc: &Discretization,
    cfg: &WrConfig,
    reference: Option<&SpaceTimeField>,
) -> Result<WrOutcome> {
    cfg.expect(Method::SwrClassical)?;
    run_classical(problem, disc, cfg, reference, &Sequential)
}

/// Optimized Schwarz waveform relaxation without overlap: each subdomain imposes
/// `(∂_n + (1/c)∂_t) u_i^k = (∂_n + (1/c)∂_t) u_j^{k-1}` at the interface, with the
/// right-hand side evaluated from the partner's field by the scheme's own stencils.
pub fn swr_optimized_iterate(
    problem: &WaveProblem,
    disc: &Discretization,
    cfg: &WrConfig,
    reference: Option<&SpaceTimeField>,
) -> Result<WrOutcome> {
    cfg.expect(Method::SwrOptimized)?;
    run_optimized(problem, disc, cfg, reference, &Sequential)
}

pub(super) fn run_classical<E: StageExecutor>(
    problem: &WaveProblem,
    disc: &Discretization,
    cfg: &WrConfig,
    reference: Option<&SpaceTimeField>,
    exec: &E,
) -> Result<WrOutcome> {
    cfg.validate()?;
    let layout = Layout::new(problem, disc)?;
    let (ext_left, ext_right) = overlap_split(cfg.overlap_cells);
    if ext_left >= layout.right_cells || ext_right >= layout.interface_node {
        return Err(usage(format!(
            "overlap of {} cells does not fit subdomains of {} and {} cells",
            cfg.overlap_cells, layout.interface_node, layout.right_cells
        )));
    }
    let mut owned = None;
    let reference = resolve_reference(problem, disc, cfg, reference, &mut owned)?;
    let mut tracker = Tracker::new(cfg, reference, layout.interface_node)?;
    let (g_left, g_right) = boundary_traces(problem, disc);
    let left_end = problem.interface + ext_left as f64 * disc.dx;
    let right_start = problem.interface - ext_right as f64 * disc.dx;
    let mut d1 = cfg.initial_guess.left(disc)?;
    let mut d2 = cfg.initial_guess.right(disc)?;

    let mut k = 0;
    loop {
        k += 1;
        let p1 = SubdomainProblem::restricted(
            problem,
            problem.x_left,
            left_end,
            BoundaryCondition::Dirichlet(g_left.clone()),
            BoundaryCondition::Dirichlet(d1.clone()),
            *disc,
            cfg.start_mode,
        );
        let p2 = SubdomainProblem::restricted(
            problem,
            right_start,
            problem.x_right,
            BoundaryCondition::Dirichlet(d2.clone()),
            BoundaryCondition::Dirichlet(g_right.clone()),
            *disc,
            cfg.start_mode,
        );
        let (r1, r2) = exec.join(|| solve(&p1), || solve(&p2));
        let (u1, u2) = (r1?, r2?);
        let next1 = u2.trace(ext_left + ext_right);
        let next2 = u1.trace(layout.interface_node - ext_right);
        let increment = pair_increment(&next1, &d1, &next2, &d2)?;
        d1 = next1;
        d2 = next2;

        let left_part = u1.restrict(0, layout.interface_node)?;
        let right_part = u2.restrict(ext_right, u2.n_nodes() - 1)?;
        let joined = concatenate(&left_part, &right_part)?;
        let trace = joined.field.trace(layout.interface_node);
        let stop = tracker.record(k, &joined.field, &trace, increment, None)?;
        if stop || k >= cfg.max_iterations {
            return Ok(WrOutcome {
                history: tracker.finish(),
                subdomains: alloc::vec![u1, u2],
                assembled: joined.field,
                interface: alloc::vec![d1, d2],
                interface_discrepancy: joined.discrepancy,
            });
        }
    }
}

pub(super) fn run_optimized<E: StageExecutor>(
    problem: &WaveProblem,
    disc: &Discretization,
    cfg: &WrConfig,
    reference: Option<&SpaceTimeField>,
    exec: &E,
) -> Result<WrOutcome> {
    cfg.validate()?;
    let layout = Layout::new(problem, disc)?;
    let mut owned = None;
    let reference = resolve_reference(problem, disc, cfg, reference, &mut owned)?;
    let mut tracker = Tracker::new(cfg, reference, layout.interface_node)?;
    let (g_left, g_right) = boundary_traces(problem, disc);
    let mut r1 = cfg.initial_guess.left(disc)?;
    let mut r2 = cfg.initial_guess.right(disc)?;

    let mut k = 0;
    loop {
        k += 1;
        let p1 = SubdomainProblem::restricted(
            problem,
            problem.x_left,
            problem.interface,
            BoundaryCondition::Dirichlet(g_left.clone()),
            BoundaryCondition::Absorbing(r1.clone()),
            *disc,
            cfg.start_mode,
        );
        let p2 = SubdomainProblem::restricted(
            problem,
            problem.interface,
            problem.x_right,
            BoundaryCondition::Absorbing(r2.clone()),
            BoundaryCondition::Dirichlet(g_right.clone()),
            *disc,
            cfg.start_mode,
        );
        let (s1, s2) = exec.join(|| solve(&p1), || solve(&p2));
        let (u1, u2) = (s1?, s2?);
        let next1 = absorbing_data(&p2, &u2, Side::Left, cfg.flux_mode)?;
        let next2 = absorbing_data(&p1, &u1, Side::Right, cfg.flux_mode)?;
        let increment = pair_increment(&next1, &r1, &next2, &r2)?;
        r1 = next1;
        r2 = next2;

        let joined = concatenate(&u1, &u2)?;
        let trace = u1.trace(layout.interface_node);
        let stop = tracker.record(k, &joined.field, &trace, increment, None)?;
        if stop || k >= cfg.max_iterations {
            return Ok(WrOutcome {
                history: tracker.finish(),
                subdomains: alloc::vec![u1, u2],
                assembled: joined.field,
                interface: alloc::vec![r1, r2],
                interface_discrepancy: joined.discrepancy,
            });
        }
    }
}

/// Absorbing data for the partner of `p`: `(∂_{n'} + (1/c)∂_t) u` at the end `side` of `u`,
/// where `n'` is the partner's outward normal, i.e. minus the outward normal of `p`.
///
/// In [`FluxMode::SchemeConsistent`] the data is solved from the partner's absorbing update,
/// with the ghost value of `u` standing in for the partner's interior neighbour.
fn absorbing_data(p: &SubdomainProblem, u: &SpaceTimeField, side: Side, mode: FluxMode) -> Result<TimeTrace> {
    let node = match side {
        Side::Left => 0,
        Side::Right => u.n_nodes() - 1,
    };
    let n_time = u.n_time();
    let c = p.wave_speed;
    let flux = extract_flux(p, u, side, mode)?;
    let mut data = alloc::vec![0.0; n_time + 1];
    data[0] = -flux.get(0) + (p.v0)(u.node_x(node)) / c;
    match mode {
        FluxMode::OneSided => {
            for (n, v) in data.iter_mut().enumerate().take(n_time).skip(1) {
                let rate = (u.at(n + 1, node) - u.at(n - 1, node)) / (2.0 * u.dt());
                *v = -flux.get(n) + rate / c;
            }
        }
        FluxMode::SchemeConsistent => {
            let ghost = ghost_values(p, u, side)?;
            let (dx, dt) = (u.dx(), u.dt());
            let lam = c * dt / dx;
            let l2 = lam * lam;
            let x = u.node_x(node);
            for (n, v) in data.iter_mut().enumerate().take(n_time).skip(1) {
                let f = dt * dt * p.source.as_ref().map_or(0.0, |s| s(x, n as f64 * dt));
                let (now, before) = (u.at(n, node), u.at(n - 1, node));
                let target =
                    ((1.0 + lam) * u.at(n + 1, node) - f - 2.0 * (1.0 - l2) * now + (1.0 - lam) * before) / (2.0 * l2);
                *v = encode(ghost[n], dx, target);
            }
        }
    }
    if n_time > 1 {
        data[n_time] = data[n_time - 1];
    }
    Ok(TimeTrace::new(u.dt(), data))
}

fn pair_increment(new1: &TimeTrace, old1: &TimeTrace, new2: &TimeTrace, old2: &TimeTrace) -> Result<f64> {
    let a = new1.sub(old1)?.l2();
    let b = new2.sub(old2)?.l2();
    Ok(libm::hypot(a, b))
}

pub(super) fn optimized_fixed_point(
    problem: &WaveProblem,
    disc: &Discretization,
    cfg: &WrConfig,
    reference: &SpaceTimeField,
    layout: &Layout,
) -> Result<InitialGuess> {
    let ref1 = reference.restrict(0, layout.interface_node)?;
    let ref2 = reference.restrict(layout.interface_node, reference.n_nodes() - 1)?;
    let dirichlet = || BoundaryCondition::homogeneous_dirichlet(disc.n_time, disc.dt);
    let p1 = SubdomainProblem::restricted(
        problem,
        problem.x_left,
        problem.interface,
        dirichlet(),
        dirichlet(),
        *disc,
        cfg.start_mode,
    );
    let p2 = SubdomainProblem::restricted(
        problem,
        problem.interface,
        problem.x_right,
        dirichlet(),
        dirichlet(),
        *disc,
        cfg.start_mode,
    );
    Ok(InitialGuess::Pair {
        left: absorbing_data(&p2, &ref2, Side::Left, cfg.flux_mode)?,
        right: absorbing_data(&p1, &ref1, Side::Right, cfg.flux_mode)?,
    })
}
