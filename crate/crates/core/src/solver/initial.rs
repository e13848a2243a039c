//! Built-in initial guesses: the non-interacting states of each problem class.

use alloc::vec::Vec;

use super::{ExcitedMode, ProblemSpec};
use crate::domain::{BoundaryCondition, Grid};
use crate::error::Result;
use crate::functional::{normalize, WaveField};
use crate::math::{self, PI};

/// Real ground-like envelope at node `i`.
fn ground_profile(spec: &ProblemSpec, grid: &Grid, i: usize) -> f64 {
    let x = grid.coords(i);
    match (grid.bc(), spec.potential.trap_frequencies()) {
        (BoundaryCondition::Periodic | BoundaryCondition::Neumann, _) => 1.0,
        (BoundaryCondition::TruncatedWholeSpace, Some(gammas)) => {
            math::exp(-0.5 * gammas.iter().zip(&x).map(|(g, xi)| g * xi * xi).sum::<f64>())
        }
        _ => {
            grid.axes().iter().enumerate().map(|(a, axis)| math::sin(PI * (x[a] - axis.origin) / axis.length)).product()
        }
    }
}

/// Real profile odd in `x1` about the midline.
fn odd_profile(spec: &ProblemSpec, grid: &Grid, i: usize) -> f64 {
    let x = grid.coords(i);
    let axis = &grid.axes()[0];
    let s = (x[0] - axis.origin) / axis.length;
    let rest: f64 = match (grid.bc(), spec.potential.trap_frequencies()) {
        (BoundaryCondition::TruncatedWholeSpace, Some(_)) => {
            return (x[0] - axis.center()) * ground_profile(spec, grid, i)
        }
        (BoundaryCondition::Neumann, _) => return math::cos(PI * s),
        (BoundaryCondition::Periodic, _) => return math::sin(2.0 * PI * s),
        _ => grid
            .axes()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(a, ax)| math::sin(PI * (x[a] - ax.origin) / ax.length))
            .product(),
    };
    math::sin(2.0 * PI * s) * rest
}

pub(super) fn guess(spec: &ProblemSpec, grid: &Grid, mode: ExcitedMode) -> Result<WaveField> {
    let n = grid.len();
    let field = match mode {
        ExcitedMode::None => WaveField::real((0..n).map(|i| ground_profile(spec, grid, i)).collect()),
        ExcitedMode::OddInX1 | ExcitedMode::NodalContinuation => {
            WaveField::real((0..n).map(|i| odd_profile(spec, grid, i)).collect())
        }
        ExcitedMode::Vortex if grid.bc() == BoundaryCondition::Periodic => {
            let axis = &grid.axes()[0];
            let theta: Vec<f64> = (0..n).map(|i| 2.0 * PI * (grid.coords(i)[0] - axis.origin) / axis.length).collect();
            WaveField::complex(
                theta.iter().map(|t| math::cos(*t)).collect(),
                theta.iter().map(|t| math::sin(*t)).collect(),
            )?
        }
        ExcitedMode::Vortex => {
            let c = grid.center();
            let mut re = Vec::with_capacity(n);
            let mut im = Vec::with_capacity(n);
            for i in 0..n {
                let x = grid.coords(i);
                let g = ground_profile(spec, grid, i);
                re.push((x[0] - c[0]) * g);
                im.push((x[1] - c[1]) * g);
            }
            WaveField::complex(re, im)?
        }
    };
    normalize(&field, grid)
}
