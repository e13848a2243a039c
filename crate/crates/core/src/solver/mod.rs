//! Normalized gradient flow with a semi-implicit backward-Euler finite
//! difference step, for ground states and symmetry-constrained first excited
//! states, plus warm-started continuation in the interaction strength.
//!
//! Each step solves
//!
//! ```text
//! (1/τ - ½Δ_h + V + β|φⁿ|²) φ* = φⁿ/τ,    φⁿ⁺¹ = φ*/‖φ*‖₂
//! ```
//!
//! with a tridiagonal solve in 1D and diagonally preconditioned conjugate
//! gradients otherwise. Excited states are computed inside an invariant
//! subspace: fields odd in `x1` ([`ExcitedMode::OddInX1`]) or fields in the
//! rotation sector `φ(Rx) = iφ(x)` that contains the winding-one vortex
//! ([`ExcitedMode::Vortex`]). One-dimensional problems without a mirror
//! symmetry use Newton continuation of the linear first excited state
//! ([`ExcitedMode::NodalContinuation`]).

mod flow;
mod initial;
mod nodal;
mod symmetry;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::time::Duration;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::domain::{
    classify, eval_potential, make_grid, BoundaryCondition, BoxDomain, Degeneracy, Grid, PotentialSpec,
    DEGENERACY_REL_TOL,
};
use crate::error::{Error, Result};
use crate::functional::{EnergyBreakdown, WaveField};
use crate::math;

pub use flow::befd_step;
pub use symmetry::winding_number;

/// Which state a solve targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ExcitedMode {
    /// Ground state.
    #[default]
    None,
    /// Real state odd under `x1 -> L1 - x1`.
    OddInX1,
    /// Complex state with winding number one about the domain center (the
    /// `x1 x2` plane), or the plane wave `e^{2πi x1/L1}` on periodic grids.
    Vortex,
    /// Newton continuation in `β` of the first excited linear eigenstate
    /// (1D, non-periodic).
    NodalContinuation,
}

impl ExcitedMode {
    pub fn name(self) -> &'static str {
        match self {
            Self::None => "none",
            Self::OddInX1 => "odd-x1",
            Self::Vortex => "vortex",
            Self::NodalContinuation => "nodal",
        }
    }
}

impl core::str::FromStr for ExcitedMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "none" | "ground" => Ok(Self::None),
            "odd-x1" | "odd" | "oddinx1" => Ok(Self::OddInX1),
            "vortex" => Ok(Self::Vortex),
            "nodal" | "nodal-continuation" => Ok(Self::NodalContinuation),
            other => Err(Error::InvalidConfig(format!("unknown excited mode '{other}'"))),
        }
    }
}

/// Gradient-flow parameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SolverConfig {
    /// Time step; `None` selects `max(1e-4, 0.1 / (1 + β max|φ0|²))`.
    pub tau: Option<f64>,
    /// Stop when `‖φⁿ⁺¹ - φⁿ‖_∞ / τ` falls below this ...
    pub stop_tol: f64,
    /// ... and the eigen-residual falls below this.
    pub residual_tol: f64,
    pub max_iter: usize,
    /// Relative tolerance of the conjugate-gradient solves; tightened to
    /// `0.01 * stop_tol * τ` when that is smaller.
    pub linear_tol: f64,
    pub linear_max_iter: usize,
    pub mode: ExcitedMode,
    /// Initial field; replaces the built-in guess when present.
    pub warm_start: Option<WaveField>,
    /// Largest tolerated symmetry drift per step before the projection.
    pub symmetry_tol: f64,
    /// Record the energy after every step.
    pub record_history: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tau: None,
            stop_tol: 1e-7,
            residual_tol: 1e-6,
            max_iter: 200_000,
            linear_tol: 1e-10,
            linear_max_iter: 2_000,
            mode: ExcitedMode::None,
            warm_start: None,
            symmetry_tol: 1e-8,
            record_history: true,
        }
    }
}

impl SolverConfig {
    pub fn with_mode(mut self, mode: ExcitedMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if self.tau.is_some_and(|t| !positive(t)) {
            return Err(Error::InvalidConfig(String::from("tau must be positive")));
        }
        if !(positive(self.stop_tol) && positive(self.residual_tol) && positive(self.linear_tol)) {
            return Err(Error::InvalidConfig(String::from("tolerances must be positive")));
        }
        if self.max_iter == 0 || self.linear_max_iter == 0 {
            return Err(Error::InvalidConfig(String::from("iteration limits must be positive")));
        }
        Ok(())
    }

    /// Default time step for an initial field with peak density `max_rho`.
    pub fn default_tau(beta: f64, max_rho: f64) -> f64 {
        (0.1 / (1.0 + beta * max_rho)).max(1e-4)
    }
}

/// A discretized stationary GPE problem.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ProblemSpec {
    pub domain: BoxDomain,
    /// Stored nodes per axis.
    pub nodes: Vec<usize>,
    pub bc: BoundaryCondition,
    pub potential: PotentialSpec,
    pub beta: f64,
    /// Overrides the automatic degeneracy classification.
    pub degeneracy: Option<Degeneracy>,
}

impl ProblemSpec {
    pub fn new(
        domain: BoxDomain,
        nodes: Vec<usize>,
        bc: BoundaryCondition,
        potential: PotentialSpec,
        beta: f64,
    ) -> Self {
        Self { domain, nodes, bc, potential, beta, degeneracy: None }
    }

    /// Whole-space problem for a trapping potential with quadratic growth,
    /// truncated to the centered box with half-length
    /// `max(8/√γ_j, 1.5 √(2μ_TF)/γ_j)` per axis, where `μ_TF` is the
    /// Thomas-Fermi chemical potential at `beta_for_size`. Sweeps should pass
    /// their largest `β` so that every point shares one grid.
    pub fn whole_space(potential: PotentialSpec, nodes: Vec<usize>, beta: f64, beta_for_size: f64) -> Result<Self> {
        potential.validate()?;
        let gammas = potential.trap_frequencies().ok_or_else(|| {
            Error::InvalidConfig(String::from("whole-space problems need a quadratically growing potential"))
        })?;
        let lengths = truncation_lengths(&gammas, beta_for_size.max(beta));
        Ok(Self::new(BoxDomain::new(lengths)?, nodes, BoundaryCondition::TruncatedWholeSpace, potential, beta))
    }

    pub fn with_beta(&self, beta: f64) -> Self {
        Self { beta, ..self.clone() }
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn grid(&self) -> Result<Grid> {
        make_grid(&self.domain, &self.nodes, self.bc)
    }

    pub fn potential_values(&self, grid: &Grid) -> Result<Vec<f64>> {
        eval_potential(&self.potential, grid)
    }

    pub fn degeneracy(&self) -> Degeneracy {
        self.degeneracy.unwrap_or_else(|| classify(&self.domain, self.bc, &self.potential, DEGENERACY_REL_TOL))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(Error::InvalidConfig(format!("beta must be >= 0 (got {})", self.beta)));
        }
        self.potential.validate()
    }
}

/// Thomas-Fermi chemical potential `½((d+2) Πγ_j β / C_d)^{2/(d+2)}`.
pub fn thomas_fermi_mu(gammas: &[f64], beta: f64) -> f64 {
    let d = gammas.len() as f64;
    let c_d = match gammas.len() {
        1 => 2.0,
        2 => math::PI,
        _ => 4.0 * math::PI / 3.0,
    };
    let b2: f64 = gammas.iter().product();
    0.5 * math::powf((d + 2.0) * b2 * beta / c_d, 2.0 / (d + 2.0))
}

/// Full truncation-box lengths for trap frequencies `gammas` at `beta`.
pub fn truncation_lengths(gammas: &[f64], beta: f64) -> Vec<f64> {
    let mu = thomas_fermi_mu(gammas, beta);
    gammas.iter().map(|g| 2.0 * (8.0 / math::sqrt(*g)).max(1.5 * math::sqrt(2.0 * mu) / g)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SolveStatus {
    Converged,
    NotConverged,
}

/// Outcome of a solve.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SolveReport {
    /// Normalized final state.
    pub field: WaveField,
    pub energy: EnergyBreakdown,
    pub residual: f64,
    /// Gradient-flow steps, or Newton iterations for nodal continuation.
    pub iterations: usize,
    /// Energy after every step (gradient flow) or at every accepted
    /// continuation point (nodal continuation).
    pub energy_history: Vec<f64>,
    /// Winding number after every step (vortex mode only).
    pub winding_history: Vec<i32>,
    /// Time step used (zero for nodal continuation).
    pub tau: f64,
    pub mode: ExcitedMode,
    pub status: SolveStatus,
    /// Filled in by callers that have a clock.
    pub wall_time: Option<Duration>,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }
}

/// The built-in normalized initial guess for `mode`.
pub fn initial_guess(spec: &ProblemSpec, mode: ExcitedMode) -> Result<WaveField> {
    let grid = spec.grid()?;
    initial::guess(spec, &grid, mode)
}

/// Ground state by normalized gradient flow.
pub fn solve_ground(spec: &ProblemSpec, cfg: &SolverConfig) -> Result<SolveReport> {
    let cfg = SolverConfig { mode: ExcitedMode::None, ..cfg.clone() };
    flow::run(spec, &cfg)
}

/// First excited state in the mode selected by `cfg.mode`.
pub fn solve_excited(spec: &ProblemSpec, cfg: &SolverConfig) -> Result<SolveReport> {
    match cfg.mode {
        ExcitedMode::None => Err(Error::InvalidConfig(String::from("solve_excited needs an excited mode"))),
        ExcitedMode::NodalContinuation => nodal::sweep(spec, &[spec.beta], cfg).pop().unwrap_or(Err(Error::ZeroField)),
        _ => flow::run(spec, cfg),
    }
}

/// Solve at every `β` in `betas` (strictly ascending), warm-starting each
/// solve from the last successful one. Failures are returned in place and do
/// not stop the sweep.
pub fn continue_in_beta(spec: &ProblemSpec, betas: &[f64], cfg: &SolverConfig) -> Result<Vec<Result<SolveReport>>> {
    if betas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Unsorted);
    }
    if cfg.mode == ExcitedMode::NodalContinuation {
        return Ok(nodal::sweep(spec, betas, cfg));
    }
    let mut out = Vec::with_capacity(betas.len());
    let mut warm = cfg.warm_start.clone();
    for &beta in betas {
        let step_cfg = SolverConfig { warm_start: warm.clone(), ..cfg.clone() };
        let result = flow::run(&spec.with_beta(beta), &step_cfg);
        match &result {
            Ok(r) => warm = Some(r.field.clone()),
            Err(Error::NotConverged { report, .. }) => warm = Some(report.field.clone()),
            Err(_) => {}
        }
        out.push(result);
    }
    Ok(out)
}
