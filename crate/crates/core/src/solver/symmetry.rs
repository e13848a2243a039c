//! Invariant-subspace projectors and the vortex winding diagnostic.

use alloc::string::String;
use alloc::vec::Vec;

use super::ExcitedMode;
use crate::domain::{BoundaryCondition, Grid};
use crate::error::{Error, Result};
use crate::functional::WaveField;
use crate::math::{self, PI};

/// Relative tolerance for the symmetry of the sampled potential.
const POTENTIAL_SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub(super) enum Projector {
    Identity,
    /// `Pφ = (φ - φ∘M) / 2` with `M` the mirror in `x1`.
    Odd {
        mirror: Vec<usize>,
    },
    /// `Pφ = ¼ Σ_k (-i)^k φ∘S^k`, where `S` is a quarter turn about the
    /// center or a quarter-period shift along `x1`.
    Sector {
        map: Vec<usize>,
    },
}

fn check_invariant(v: &[f64], map: &[usize], what: &'static str) -> Result<()> {
    let scale = v.iter().fold(1.0f64, |m, x| m.max(math::abs(*x)));
    let drift = v.iter().zip(map).map(|(a, &j)| math::abs(a - v[j])).fold(0.0, f64::max);
    if drift > POTENTIAL_SYMMETRY_TOL * scale {
        return Err(Error::SymmetryViolated { drift, what });
    }
    Ok(())
}

impl Projector {
    pub(super) fn for_mode(mode: ExcitedMode, grid: &Grid, v: &[f64]) -> Result<Self> {
        match mode {
            ExcitedMode::None | ExcitedMode::NodalContinuation => Ok(Self::Identity),
            ExcitedMode::OddInX1 => {
                let mirror: Vec<usize> = (0..grid.len()).map(|i| grid.mirror_x1(i)).collect();
                check_invariant(v, &mirror, "potential is not symmetric in x1")?;
                Ok(Self::Odd { mirror })
            }
            ExcitedMode::Vortex if grid.bc() == BoundaryCondition::Periodic => {
                if grid.axes()[0].nodes % 4 != 0 {
                    return Err(Error::InvalidConfig(String::from(
                        "periodic vortex mode needs a multiple of 4 nodes along x1",
                    )));
                }
                let map: Vec<usize> = (0..grid.len()).map(|i| grid.quarter_shift(i)).collect();
                check_invariant(v, &map, "potential is not invariant under a quarter-period shift")?;
                Ok(Self::Sector { map })
            }
            ExcitedMode::Vortex => {
                if !grid.supports_quarter_turn() {
                    return Err(Error::InvalidConfig(String::from(
                        "vortex mode needs d >= 2 with equal x1, x2 lengths and node counts",
                    )));
                }
                if grid.axes()[0].nodes % 2 != 0 {
                    return Err(Error::InvalidConfig(String::from(
                        "vortex mode needs an even node count so the core sits at a cell center",
                    )));
                }
                let map: Vec<usize> = (0..grid.len()).map(|i| grid.quarter_turn(i)).collect();
                check_invariant(v, &map, "potential is not invariant under a quarter turn")?;
                Ok(Self::Sector { map })
            }
        }
    }

    /// Project `phi`, returning the projection and the sup-norm drift
    /// `‖φ - Pφ‖_∞ / ‖φ‖_∞`.
    pub(super) fn apply(&self, phi: WaveField) -> (WaveField, f64) {
        match self {
            Self::Identity => (phi, 0.0),
            Self::Odd { mirror } => {
                let re: Vec<f64> = (0..phi.len()).map(|i| 0.5 * (phi.re[i] - phi.re[mirror[i]])).collect();
                let im = phi
                    .im
                    .as_ref()
                    .map(|im| (0..phi.len()).map(|i| 0.5 * (im[i] - im[mirror[i]])).collect::<Vec<f64>>());
                let out = WaveField { re, im };
                let drift = drift(&phi, &out);
                (out, drift)
            }
            Self::Sector { map } => {
                let n = phi.len();
                let mut re = alloc::vec![0.0; n];
                let mut im = alloc::vec![0.0; n];
                for i in 0..n {
                    let j1 = map[i];
                    let j2 = map[j1];
                    let j3 = map[j2];
                    // (-i)^k φ(S^k x), k = 0..3
                    re[i] = 0.25 * (phi.re[i] + phi.im_at(j1) - phi.re[j2] - phi.im_at(j3));
                    im[i] = 0.25 * (phi.im_at(i) - phi.re[j1] - phi.im_at(j2) + phi.re[j3]);
                }
                let out = WaveField { re, im: Some(im) };
                let drift = drift(&phi, &out);
                (out, drift)
            }
        }
    }
}

fn drift(a: &WaveField, b: &WaveField) -> f64 {
    let scale = a.max_abs();
    let d = (0..a.len())
        .map(|i| {
            let dr = a.re[i] - b.re[i];
            let di = a.im_at(i) - b.im_at(i);
            math::sqrt(dr * dr + di * di)
        })
        .fold(0.0, f64::max);
    if scale > 0.0 {
        d / scale
    } else {
        d
    }
}

fn wrap(mut d: f64) -> f64 {
    while d > PI {
        d -= 2.0 * PI;
    }
    while d <= -PI {
        d += 2.0 * PI;
    }
    d
}

/// Winding number of the phase around the domain center: the four nodes
/// surrounding the center cell in the `x1 x2` plane (middle `x3` slice), or
/// the whole `x1` ring on periodic grids. `None` for real or 1D non-periodic
/// fields, or when the field vanishes on the loop.
pub fn winding_number(phi: &WaveField, grid: &Grid) -> Option<i32> {
    phi.im.as_ref()?;
    let loop_nodes: Vec<usize> = if grid.bc() == BoundaryCondition::Periodic {
        (0..grid.axes()[0].nodes).map(|i| grid.flat_index([i, 0, 0])).collect()
    } else {
        if grid.dim() < 2 {
            return None;
        }
        let (n1, n2) = (grid.axes()[0].nodes, grid.axes()[1].nodes);
        let k = if grid.dim() == 3 { grid.axes()[2].nodes / 2 } else { 0 };
        let (i0, i1) = ((n1 - 1) / 2, n1 / 2);
        let (j0, j1) = ((n2 - 1) / 2, n2 / 2);
        if i0 == i1 || j0 == j1 {
            // odd node counts: walk the ring of the 8 nodes around the center node
            let (i0, i1, j0, j1) = (i0 - 1, i1 + 1, j0 - 1, j1 + 1);
            [(i0, j0), (i0 + 1, j0), (i1, j0), (i1, j0 + 1), (i1, j1), (i0 + 1, j1), (i0, j1), (i0, j0 + 1)]
                .iter()
                .map(|&(i, j)| grid.flat_index([i, j, k]))
                .collect()
        } else {
            [(i0, j0), (i1, j0), (i1, j1), (i0, j1)].iter().map(|&(i, j)| grid.flat_index([i, j, k])).collect()
        }
    };
    if loop_nodes.iter().any(|&i| phi.re[i] == 0.0 && phi.im_at(i) == 0.0) {
        return None;
    }
    let total: f64 = (0..loop_nodes.len())
        .map(|s| {
            let a = loop_nodes[s];
            let b = loop_nodes[(s + 1) % loop_nodes.len()];
            wrap(phi.phase(b) - phi.phase(a))
        })
        .sum();
    Some(math::round(total / (2.0 * PI)) as i32)
}
