use crate::error::Result;
use crate::field::{concatenate, SpaceTimeField};
use crate::problem::{Discretization, WaveProblem};
use crate::stepper::{extract_flux, solve, BoundaryCondition, Side, SubdomainProblem};

use super::{
    boundary_traces, resolve_reference, Layout, Method, Sequential, StageExecutor, Tracker, WrConfig, WrOutcome,
};

/// Neumann-Neumann waveform relaxation on the calling thread.
///
/// Each iteration runs Dirichlet solves on both subdomains with the interface trace
/// `w^{k-1}`, sums their outward fluxes into `σ^k`, runs homogeneous correction solves with
/// Neumann data `σ^k`, and updates `w^k = w^{k-1} - θ (ψ₁^k + ψ₂^k)|_Γ`.
pub fn nnwr_iterate(
    problem: &WaveProblem,
    disc: &Discretization,
    cfg: &WrConfig,
    reference: Option<&SpaceTimeField>,
) -> Result<WrOutcome> {
    cfg.expect(Method::Nnwr)?;
    run(problem, disc, cfg, reference, &Sequential)
}

pub(super) fn run<E: StageExecutor>(
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
    let zero = BoundaryCondition::homogeneous_dirichlet(disc.n_time, disc.dt);
    let mut w = cfg.initial_guess.single(disc)?;
    let theta = cfg.theta;
    let (x_left, gamma, x_right) = (problem.x_left, problem.interface, problem.x_right);

    let mut k = 0;
    loop {
        k += 1;
        let p1 = SubdomainProblem::restricted(
            problem,
            x_left,
            gamma,
            BoundaryCondition::Dirichlet(g_left.clone()),
            BoundaryCondition::Dirichlet(w.clone()),
            *disc,
            cfg.start_mode,
        );
        let p2 = SubdomainProblem::restricted(
            problem,
            gamma,
            x_right,
            BoundaryCondition::Dirichlet(w.clone()),
            BoundaryCondition::Dirichlet(g_right.clone()),
            *disc,
            cfg.start_mode,
        );
        let (r1, r2) = exec.join(
            || solve(&p1).and_then(|u| Ok((extract_flux(&p1, &u, Side::Right, cfg.flux_mode)?, u))),
            || solve(&p2).and_then(|u| Ok((extract_flux(&p2, &u, Side::Left, cfg.flux_mode)?, u))),
        );
        let (g1, u1) = r1?;
        let (g2, u2) = r2?;
        let jump = g1.combine(1.0, &g2, 1.0)?;

        let q1 = SubdomainProblem::homogeneous(
            x_left,
            gamma,
            problem.wave_speed,
            zero.clone(),
            BoundaryCondition::Neumann(jump.clone()),
            *disc,
            cfg.start_mode,
        );
        let q2 = SubdomainProblem::homogeneous(
            gamma,
            x_right,
            problem.wave_speed,
            BoundaryCondition::Neumann(jump.clone()),
            zero.clone(),
            *disc,
            cfg.start_mode,
        );
        let (c1, c2) = exec.join(|| solve(&q1), || solve(&q2));
        let psi1 = c1?.trace(layout.interface_node);
        let psi2 = c2?.trace(0);
        let correction = psi1.combine(1.0, &psi2, 1.0)?;
        let next = w.combine(1.0, &correction, -theta)?;
        let increment = next.sub(&w)?.l2();
        let joined = concatenate(&u1, &u2)?;
        w = next;
        let stop = tracker.record(k, &joined.field, &w, increment, Some(jump.l2()))?;
        if stop || k >= cfg.max_iterations {
            return Ok(WrOutcome {
                history: tracker.finish(),
                subdomains: alloc::vec![u1, u2],
                assembled: joined.field,
                interface: alloc::vec![w],
                interface_discrepancy: joined.discrepancy,
            });
        }
    }
}
