//! Waveform relaxation for the one-dimensional wave equation on two subdomains.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure numerics:
//!
//! - [`problem`] and [`field`]: problem data, grids, space-time fields, traces and norms.
//! - [`stepper`]: the leapfrog kernel with Dirichlet, Neumann and absorbing ends, plus
//!   scheme-consistent flux extraction.
//! - [`waveform`]: the Dirichlet-Neumann, Neumann-Neumann and Schwarz iteration drivers.
//! - [`theory`]: Laplace-domain iteration symbols written as exact delay polynomials,
//!   finite-step bounds and a time-domain trace predictor.
//!
//! IO, configuration files and the command line live in the companion `dnwr-cli` crate.

#![no_std]

extern crate alloc;

mod error;
pub mod field;
pub mod problem;
mod quad;
pub mod stepper;
pub mod theory;
pub mod waveform;

pub use error::{Error, Result};
pub use field::{concatenate, error_linf_l2, l2_space, Concatenated, SpaceTimeField, TimeTrace};
pub use problem::{Discretization, ScalarFn, SourceFn, WaveProblem};
pub use stepper::{BoundaryCondition, FluxMode, Side, StartMode, SubdomainProblem};
pub use waveform::{IterationHistory, IterationRecord, Method, WrConfig, WrOutcome};
