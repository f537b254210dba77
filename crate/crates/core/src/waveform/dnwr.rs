use crate::error::Result;
use crate::field::{concatenate, SpaceTimeField};
use crate::problem::{Discretization, WaveProblem};
use crate::stepper::{extract_flux, solve, BoundaryCondition, Side, SubdomainProblem};

use super::{boundary_traces, resolve_reference, Layout, Method, Tracker, WrConfig, WrOutcome};

/// Dirichlet-Neumann waveform relaxation.
///
/// Each iteration solves the left subdomain with the interface trace `h^{k-1}` as Dirichlet
/// data, passes its outward flux to a Neumann solve on the right subdomain, and relaxes
/// `h^k = θ u₂^k|_Γ + (1 - θ) h^{k-1}`. The two solves are inherently sequential.
pub fn dnwr_iterate(
    problem: &WaveProblem,
    disc: &Discretization,
    cfg: &WrConfig,
    reference: Option<&SpaceTimeField>,
) -> Result<WrOutcome> {
    cfg.expect(Method::Dnwr)?;
    run(problem, disc, cfg, reference)
}

pub(super) fn run(
    problem: &WaveProblem,
    disc: &Discretization,
    cfg: &WrConfig,
    reference: Option<&SpaceTimeField>,
) -> Result<WrOutcome> {
    cfg.validate()?;
    let layout = Layout::new(problem, disc)?;
    let mut owned = None;
    let reference = resolve_reference(problem, disc, cfg, reference, &mut owned)?;
    let mut tracker = Tracker::new(cfg, reference, layout.interface_node)?;
    let (g_left, g_right) = boundary_traces(problem, disc);
    let mut h = cfg.initial_guess.single(disc)?;
    let theta = cfg.theta;

    let mut k = 0;
    loop {
        k += 1;
        let p1 = SubdomainProblem::restricted(
            problem,
            problem.x_left,
            problem.interface,
            BoundaryCondition::Dirichlet(g_left.clone()),
            BoundaryCondition::Dirichlet(h.clone()),
            *disc,
            cfg.start_mode,
        );
        let u1 = solve(&p1)?;
        let flux = extract_flux(&p1, &u1, Side::Right, cfg.flux_mode)?;
        let p2 = SubdomainProblem::restricted(
            problem,
            problem.interface,
            problem.x_right,
            BoundaryCondition::Neumann(flux.scaled(-1.0)),
            BoundaryCondition::Dirichlet(g_right.clone()),
            *disc,
            cfg.start_mode,
        );
        let u2 = solve(&p2)?;
        let next = u2.trace(0).combine(theta, &h, 1.0 - theta)?;
        let increment = next.sub(&h)?.l2();
        let joined = concatenate(&u1, &u2)?;
        h = next;
        let stop = tracker.record(k, &joined.field, &h, increment, None)?;
        if stop || k >= cfg.max_iterations {
            return Ok(WrOutcome {
                history: tracker.finish(),
                subdomains: alloc::vec![u1, u2],
                assembled: joined.field,
                interface: alloc::vec![h],
                interface_discrepancy: joined.discrepancy,
            });
        }
    }
}
