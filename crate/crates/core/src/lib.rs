//! Ground and first excited states of the Gross-Pitaevskii equation with
//! repulsive interaction, their energy and chemical-potential gaps, and the
//! closed-form asymptotic expansions used to check them.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, timing and the
//! command-line driver live in the `gpegap` crate.
//!
//! Module map:
//!
//! * [`domain`]: box domains, tensor grids with boundary conditions,
//!   quadrature and discrete Laplacians, trapping potentials.
//! * [`functional`]: wave fields, energy, chemical potential and residuals.
//! * [`solver`]: normalized gradient flow (backward-Euler finite
//!   differences) for ground states and symmetry-constrained first excited
//!   states, plus warm-started continuation in the interaction strength.
//! * [`asymptotics`]: weak/strong interaction expansions and approximate
//!   profiles.
//! * [`gaps`]: gap curves, conjectured lower bounds and numeric versus
//!   asymptotic comparisons.
#![cfg_attr(not(test), no_std)]
#![warn(missing_debug_implementations)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod asymptotics;
pub mod domain;
mod error;
pub mod functional;
pub mod gaps;
mod linalg;
mod math;
pub mod solver;

pub use domain::{diameter, eval_potential, make_grid, BoundaryCondition, BoxDomain, Grid, PotentialSpec};
pub use error::{Error, Result};
pub use functional::{apply_hamiltonian, eigen_residual, energy, normalize, EnergyBreakdown, WaveField};
pub use solver::{
    befd_step, continue_in_beta, initial_guess, solve_excited, solve_ground, ExcitedMode, ProblemSpec, SolveReport,
    SolveStatus, SolverConfig,
};
