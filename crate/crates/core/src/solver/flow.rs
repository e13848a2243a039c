//! The backward-Euler step and the gradient-flow driver.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use log::{debug, trace};

use super::symmetry::{winding_number, Projector};
use super::{initial, ExcitedMode, ProblemSpec, SolveReport, SolveStatus, SolverConfig};
use crate::domain::{BoundaryCondition, Grid};
use crate::error::{Error, Result};
use crate::functional::{eigen_residual, energy, normalize, WaveField};
use crate::linalg::{pcg, Tridiagonal};
use crate::math;

/// Solver for `(1/τ - ½Δ_h + V + β|φⁿ|²) u = f` with `φⁿ` frozen.
pub(super) struct Stepper<'a> {
    grid: &'a Grid,
    /// `V - min(0, min V)`: lifting a negative potential keeps the operator
    /// positive definite and only rescales the effective time step.
    v_lift: Vec<f64>,
    beta: f64,
    tau: f64,
    linear_tol: f64,
    linear_max_iter: usize,
}

impl<'a> Stepper<'a> {
    pub(super) fn new(grid: &'a Grid, v: &[f64], beta: f64, tau: f64, cfg: &SolverConfig) -> Self {
        let vmin = v.iter().copied().fold(0.0, f64::min);
        Self {
            grid,
            v_lift: v.iter().map(|x| x - vmin).collect(),
            beta,
            tau,
            // solve errors enter the stopping test divided by τ
            linear_tol: cfg.linear_tol.min(0.01 * cfg.stop_tol * tau).max(1e-15),
            linear_max_iter: cfg.linear_max_iter,
        }
    }

    /// One step without the final normalization; returns the new field and
    /// the number of linear iterations.
    pub(super) fn advance(&self, phi: &WaveField) -> Result<(WaveField, usize)> {
        let rho = phi.density();
        let shift: Vec<f64> = (0..rho.len()).map(|i| 1.0 / self.tau + self.v_lift[i] + self.beta * rho[i]).collect();
        let inv_tau = 1.0 / self.tau;
        let mut iters = 0;
        let mut solve_part = |part: &[f64]| -> Result<Vec<f64>> {
            let rhs: Vec<f64> = part.iter().map(|p| p * inv_tau).collect();
            if self.grid.dim() == 1 {
                self.solve_1d(&shift, &rhs)
            } else {
                let (x, it) = self.solve_nd(&shift, &rhs, part)?;
                iters += it;
                Ok(x)
            }
        };
        let re = solve_part(&phi.re)?;
        let im = match &phi.im {
            Some(im) => Some(solve_part(im)?),
            None => None,
        };
        Ok((WaveField { re, im }, iters))
    }

    fn solve_1d(&self, shift: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
        let n = rhs.len();
        let h = self.grid.axes()[0].spacing;
        let off = -0.5 / (h * h);
        let mut t = Tridiagonal {
            lower: vec![off; n],
            diag: shift.iter().map(|s| s + 1.0 / (h * h)).collect(),
            upper: vec![off; n],
        };
        match self.grid.bc() {
            BoundaryCondition::Periodic => t.solve_cyclic(rhs),
            BoundaryCondition::Neumann => {
                t.upper[0] = 2.0 * off;
                t.lower[n - 1] = 2.0 * off;
                t.solve(rhs)
            }
            _ => t.solve(rhs),
        }
    }

    fn solve_nd(&self, shift: &[f64], rhs: &[f64], guess: &[f64]) -> Result<(Vec<f64>, usize)> {
        let grid = self.grid;
        let stencil: f64 = grid.axes().iter().map(|a| 1.0 / (a.spacing * a.spacing)).sum();
        let diag: Vec<f64> = shift.iter().map(|s| s + stencil).collect();
        let apply = |u: &[f64], out: &mut [f64]| {
            grid.laplacian(u, out);
            for i in 0..u.len() {
                out[i] = -0.5 * out[i] + shift[i] * u[i];
            }
        };
        // φⁿ is within O(τ) of the solution
        let mut x: Vec<f64> = guess.to_vec();
        let it = pcg(apply, &diag, grid.weights(), rhs, &mut x, self.linear_tol, self.linear_max_iter)?;
        Ok((x, it))
    }
}

/// One normalized backward-Euler gradient-flow step from a normalized field.
pub fn befd_step(phi: &WaveField, v: &[f64], beta: f64, tau: f64, grid: &Grid) -> Result<WaveField> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidConfig(alloc::string::String::from("tau must be positive")));
    }
    if phi.len() != grid.len() || v.len() != grid.len() {
        return Err(Error::DimensionMismatch { expected: grid.len(), found: phi.len().min(v.len()) });
    }
    let stepper = Stepper::new(grid, v, beta, tau, &SolverConfig::default());
    let (next, _) = stepper.advance(phi)?;
    normalize(&next, grid)
}

fn max_change(a: &WaveField, b: &WaveField) -> f64 {
    let mut m = a.re.iter().zip(&b.re).map(|(x, y)| math::abs(x - y)).fold(0.0, f64::max);
    if a.im.is_some() || b.im.is_some() {
        m = m.max((0..a.len()).map(|i| math::abs(a.im_at(i) - b.im_at(i))).fold(0.0, f64::max));
    }
    m
}

/// Flip the sign so the field overlaps positively with `reference`.
fn align_sign(phi: WaveField, reference: &WaveField, grid: &Grid) -> WaveField {
    if phi.im.is_some() {
        return phi;
    }
    if grid.inner(&phi.re, &reference.re) < 0.0 {
        WaveField::real(phi.re.iter().map(|v| -v).collect())
    } else {
        phi
    }
}

/// Gradient flow for the ground state (`mode = None`) or inside the
/// invariant subspace selected by `cfg.mode`.
pub(super) fn run(spec: &ProblemSpec, cfg: &SolverConfig) -> Result<SolveReport> {
    cfg.validate()?;
    spec.validate()?;
    let grid = spec.grid()?;
    let v = spec.potential_values(&grid)?;
    if cfg.mode == ExcitedMode::Vortex && spec.degeneracy() != crate::domain::Degeneracy::Degenerate {
        return Err(Error::DegeneracyMismatch(alloc::format!(
            "vortex mode requested for a nondegenerate {} problem",
            spec.bc.name()
        )));
    }
    let projector = Projector::for_mode(cfg.mode, &grid, &v)?;
    let reference = initial::guess(spec, &grid, cfg.mode)?;
    let start = match &cfg.warm_start {
        Some(w) if w.len() == grid.len() => {
            let w = if cfg.mode == ExcitedMode::Vortex && w.im.is_none() {
                WaveField { re: w.re.clone(), im: Some(vec![0.0; w.len()]) }
            } else {
                w.clone()
            };
            normalize(&w, &grid)?
        }
        Some(w) => return Err(Error::DimensionMismatch { expected: grid.len(), found: w.len() }),
        None => reference.clone(),
    };
    let (start, _) = projector.apply(start);
    let mut phi = normalize(&start, &grid)?;
    let beta = spec.beta;
    let tau = cfg.tau.unwrap_or_else(|| SolverConfig::default_tau(beta, phi.max_abs() * phi.max_abs()));
    let stepper = Stepper::new(&grid, &v, beta, tau, cfg);
    let vortex = cfg.mode == ExcitedMode::Vortex;

    let mut energy_history = Vec::new();
    let mut winding_history = Vec::new();
    if cfg.record_history {
        energy_history.push(energy(&phi, &v, beta, &grid)?.energy);
        if vortex {
            winding_history.push(winding_number(&phi, &grid).unwrap_or(0));
        }
    }
    let mut residual = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;
    debug!("gradient flow: mode={} beta={beta} tau={tau} nodes={}", cfg.mode.name(), grid.len());
    while iterations < cfg.max_iter {
        iterations += 1;
        let (raw, lin) = stepper.advance(&phi)?;
        let raw = normalize(&raw, &grid)?;
        let (projected, drift) = projector.apply(raw);
        if drift > cfg.symmetry_tol {
            return Err(Error::SymmetryViolated { drift, what: "iterate left the invariant subspace" });
        }
        let next = match projector {
            Projector::Identity => projected,
            _ => normalize(&projected, &grid)?,
        };
        let change = max_change(&next, &phi) / tau;
        phi = next;
        if cfg.record_history {
            energy_history.push(energy(&phi, &v, beta, &grid)?.energy);
            if vortex {
                winding_history.push(winding_number(&phi, &grid).unwrap_or(0));
            }
        }
        trace!("step {iterations}: change {change:e}, linear iterations {lin}");
        if change < cfg.stop_tol {
            residual = eigen_residual(&phi, &v, beta, &grid)?;
            if residual < cfg.residual_tol {
                converged = true;
                break;
            }
        }
    }
    if !converged {
        residual = eigen_residual(&phi, &v, beta, &grid)?;
    }
    let phi = align_sign(phi, &reference, &grid);
    let report = SolveReport {
        energy: energy(&phi, &v, beta, &grid)?,
        field: phi,
        residual,
        iterations,
        energy_history,
        winding_history,
        tau,
        mode: cfg.mode,
        status: if converged { SolveStatus::Converged } else { SolveStatus::NotConverged },
        wall_time: None,
    };
    debug!(
        "gradient flow done: converged={converged} iterations={iterations} E={} residual={residual:e}",
        report.energy.energy
    );
    if converged {
        Ok(report)
    } else {
        Err(Error::NotConverged { iterations, residual, report: Box::new(report) })
    }
}
