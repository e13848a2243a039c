use alloc::vec;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::{BoundaryCondition, BoxDomain};
use crate::error::{Error, Result};
use crate::math;

/// Fewer nodes than this cannot resolve the first excited mode.
pub const MIN_NODES: usize = 8;

/// One tensor-grid direction.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Axis {
    /// Stored nodes along this direction.
    pub nodes: usize,
    pub length: f64,
    /// Coordinate of the lower domain boundary.
    pub origin: f64,
    pub spacing: f64,
}

impl Axis {
    /// Coordinate of stored node `i`.
    pub fn coord(&self, i: usize, bc: BoundaryCondition) -> f64 {
        let offset = if bc.is_dirichlet_like() { 1.0 } else { 0.0 };
        self.origin + (i as f64 + offset) * self.spacing
    }

    pub fn center(&self) -> f64 {
        self.origin + 0.5 * self.length
    }

    /// Trapezoid weight of stored node `i`.
    fn weight(&self, i: usize, bc: BoundaryCondition) -> f64 {
        match bc {
            BoundaryCondition::Neumann if i == 0 || i + 1 == self.nodes => 0.5 * self.spacing,
            _ => self.spacing,
        }
    }
}

/// Uniform tensor grid over a box, row-major with the first axis slowest.
///
/// Dirichlet-type grids store interior nodes only (`h = L/(n+1)`), periodic
/// grids store `n` nodes with wraparound (`h = L/n`) and Neumann grids store
/// both end points (`h = L/(n-1)`) with ghost-point reflection.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    axes: Vec<Axis>,
    bc: BoundaryCondition,
    strides: Vec<usize>,
    weights: Vec<f64>,
}

/// Build the grid for `domain` with `nodes[j]` stored nodes along axis `j`.
/// Whole-space truncation boxes are centered at the origin; all other boxes
/// start at zero.
pub fn make_grid(domain: &BoxDomain, nodes: &[usize], bc: BoundaryCondition) -> Result<Grid> {
    if nodes.len() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), found: nodes.len() });
    }
    if let Some((axis, &n)) = nodes.iter().enumerate().find(|(_, &n)| n < MIN_NODES) {
        return Err(Error::GridTooCoarse { axis, nodes: n, min: MIN_NODES });
    }
    let axes: Vec<Axis> = domain
        .lengths()
        .iter()
        .zip(nodes)
        .map(|(&length, &n)| {
            let intervals = match bc {
                BoundaryCondition::Dirichlet | BoundaryCondition::TruncatedWholeSpace => n + 1,
                BoundaryCondition::Periodic => n,
                BoundaryCondition::Neumann => n - 1,
            };
            let origin = if bc == BoundaryCondition::TruncatedWholeSpace { -0.5 * length } else { 0.0 };
            Axis { nodes: n, length, origin, spacing: length / intervals as f64 }
        })
        .collect();
    let mut strides = vec![1usize; axes.len()];
    for a in (0..axes.len().saturating_sub(1)).rev() {
        strides[a] = strides[a + 1] * axes[a + 1].nodes;
    }
    let len: usize = axes.iter().map(|a| a.nodes).product();
    let mut weights = vec![1.0; len];
    for (a, axis) in axes.iter().enumerate() {
        for (idx, w) in weights.iter_mut().enumerate() {
            let i = (idx / strides[a]) % axis.nodes;
            *w *= axis.weight(i, bc);
        }
    }
    Ok(Grid { axes, bc, strides, weights })
}

impl Grid {
    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Number of stored nodes.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.nodes).collect()
    }

    /// Quadrature weight of every stored node (product of axis weights).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn volume(&self) -> f64 {
        self.axes.iter().map(|a| a.length).product()
    }

    pub fn multi_index(&self, idx: usize) -> [usize; 3] {
        let mut out = [0; 3];
        for (a, axis) in self.axes.iter().enumerate() {
            out[a] = (idx / self.strides[a]) % axis.nodes;
        }
        out
    }

    pub fn flat_index(&self, multi: [usize; 3]) -> usize {
        (0..self.dim()).map(|a| multi[a] * self.strides[a]).sum()
    }

    /// Node coordinates; unused trailing entries are zero.
    pub fn coords(&self, idx: usize) -> [f64; 3] {
        let mi = self.multi_index(idx);
        let mut x = [0.0; 3];
        for (a, axis) in self.axes.iter().enumerate() {
            x[a] = axis.coord(mi[a], self.bc);
        }
        x
    }

    pub fn center(&self) -> [f64; 3] {
        let mut c = [0.0; 3];
        for (a, axis) in self.axes.iter().enumerate() {
            c[a] = axis.center();
        }
        c
    }

    /// Quadrature of a grid field.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// Weighted inner product of two real grid fields.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        self.weights.iter().zip(a.iter().zip(b)).map(|(w, (x, y))| w * x * y).sum()
    }

    /// Trapezoidal quadrature of a function of position over the closed box,
    /// boundary nodes included. For Dirichlet grids this is the rule whose
    /// restriction to fields vanishing on the boundary is [`Grid::integrate`].
    pub fn integrate_fn(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        let rules: Vec<Vec<(f64, f64)>> = self
            .axes
            .iter()
            .map(|axis| {
                let h = axis.spacing;
                match self.bc {
                    BoundaryCondition::Periodic => (0..axis.nodes).map(|i| (axis.origin + i as f64 * h, h)).collect(),
                    _ => {
                        let last = math::round(axis.length / h) as usize;
                        (0..=last)
                            .map(|i| {
                                let w = if i == 0 || i == last { 0.5 * h } else { h };
                                (axis.origin + i as f64 * h, w)
                            })
                            .collect()
                    }
                }
            })
            .collect();
        let mut total = 0.0;
        let mut x = [0.0; 3];
        let counts: Vec<usize> = rules.iter().map(Vec::len).collect();
        let n: usize = counts.iter().product();
        for flat in 0..n {
            let mut rem = flat;
            let mut w = 1.0;
            for a in (0..rules.len()).rev() {
                let i = rem % counts[a];
                rem /= counts[a];
                x[a] = rules[a][i].0;
                w *= rules[a][i].1;
            }
            total += w * f(&x[..rules.len()]);
        }
        total
    }

    /// `out = Δ_h u` with second-order centered differences and the grid's
    /// boundary condition.
    pub fn laplacian(&self, u: &[f64], out: &mut [f64]) {
        debug_assert_eq!(u.len(), self.len());
        out.iter_mut().for_each(|o| *o = 0.0);
        for (a, axis) in self.axes.iter().enumerate() {
            let s = self.strides[a];
            let n = axis.nodes;
            let inv_h2 = 1.0 / (axis.spacing * axis.spacing);
            let block = n * s;
            for base in (0..self.len()).step_by(block) {
                for i in 0..n {
                    let row = base + i * s;
                    for k in 0..s {
                        let c = row + k;
                        let (left, right) = self.neighbours(u, base, i, k, s, n);
                        out[c] += (left - 2.0 * u[c] + right) * inv_h2;
                    }
                }
            }
        }
    }

    #[inline]
    fn neighbours(&self, u: &[f64], base: usize, i: usize, k: usize, s: usize, n: usize) -> (f64, f64) {
        let at = |j: usize| u[base + j * s + k];
        match self.bc {
            BoundaryCondition::Dirichlet | BoundaryCondition::TruncatedWholeSpace => {
                let l = if i == 0 { 0.0 } else { at(i - 1) };
                let r = if i + 1 == n { 0.0 } else { at(i + 1) };
                (l, r)
            }
            BoundaryCondition::Periodic => {
                let l = if i == 0 { at(n - 1) } else { at(i - 1) };
                let r = if i + 1 == n { at(0) } else { at(i + 1) };
                (l, r)
            }
            BoundaryCondition::Neumann => {
                let l = if i == 0 { at(1) } else { at(i - 1) };
                let r = if i + 1 == n { at(n - 2) } else { at(i + 1) };
                (l, r)
            }
        }
    }

    /// `∫|D_h u|²` from forward differences over every grid edge (boundary
    /// edges included for Dirichlet, the wraparound edge for periodic).
    pub fn gradient_norm_sq(&self, u: &[f64]) -> f64 {
        let mut total = 0.0;
        for (a, axis) in self.axes.iter().enumerate() {
            let s = self.strides[a];
            let n = axis.nodes;
            let h = axis.spacing;
            let block = n * s;
            for base in (0..self.len()).step_by(block) {
                for k in 0..s {
                    // cross-sectional weight: product of the other axes' weights
                    let cross = self.weights[base + k] / axis.weight(0, self.bc);
                    let at = |j: usize| u[base + j * s + k];
                    let mut line = 0.0;
                    for i in 0..n - 1 {
                        let d = at(i + 1) - at(i);
                        line += d * d;
                    }
                    match self.bc {
                        BoundaryCondition::Dirichlet | BoundaryCondition::TruncatedWholeSpace => {
                            line += at(0) * at(0) + at(n - 1) * at(n - 1);
                        }
                        BoundaryCondition::Periodic => {
                            let d = at(0) - at(n - 1);
                            line += d * d;
                        }
                        BoundaryCondition::Neumann => {}
                    }
                    total += cross * line / h;
                }
            }
        }
        total
    }

    /// Index of the mirror image of node `idx` under `x1 -> 2 c1 - x1`, where
    /// `c1` is the midline of the first axis.
    pub fn mirror_x1(&self, idx: usize) -> usize {
        let mut mi = self.multi_index(idx);
        let n = self.axes[0].nodes;
        mi[0] = match self.bc {
            BoundaryCondition::Periodic => (n - mi[0]) % n,
            _ => n - 1 - mi[0],
        };
        self.flat_index(mi)
    }

    /// Whether a quarter turn about the domain center in the `x1 x2` plane
    /// maps nodes onto nodes.
    pub fn supports_quarter_turn(&self) -> bool {
        self.dim() >= 2
            && self.bc != BoundaryCondition::Periodic
            && self.axes[0].nodes == self.axes[1].nodes
            && math::rel_eq(self.axes[0].length, self.axes[1].length, 1e-12)
    }

    /// Index of the node at `R x`, where `R` rotates by +90 degrees about the
    /// domain center in the `x1 x2` plane: `(a, b) -> (-b, a)` relative to the
    /// center. Requires [`Grid::supports_quarter_turn`].
    pub fn quarter_turn(&self, idx: usize) -> usize {
        let mut mi = self.multi_index(idx);
        let n = self.axes[0].nodes;
        let (i, j) = (mi[0], mi[1]);
        mi[0] = n - 1 - j;
        mi[1] = i;
        self.flat_index(mi)
    }

    /// Index of the node at `x + L1/4 e1` on a periodic grid whose first axis
    /// has a multiple of four nodes.
    pub fn quarter_shift(&self, idx: usize) -> usize {
        let mut mi = self.multi_index(idx);
        let n = self.axes[0].nodes;
        mi[0] = (mi[0] + n / 4) % n;
        self.flat_index(mi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::PI;

    fn grid(l: &[f64], n: &[usize], bc: BoundaryCondition) -> Grid {
        make_grid(&BoxDomain::new(l.to_vec()).unwrap(), n, bc).unwrap()
    }

    #[test]
    fn dirichlet_spacing() {
        let g = grid(&[2.0], &[255], BoundaryCondition::Dirichlet);
        assert_eq!(g.len(), 255);
        assert_eq!(g.axes()[0].spacing, 0.0078125);
        assert_eq!(g.coords(0)[0], 0.0078125);
        assert_eq!(g.coords(254)[0], 2.0 - 0.0078125);
    }

    #[test]
    fn periodic_constant_quadrature_is_exact() {
        let g = grid(&[1.0], &[64], BoundaryCondition::Periodic);
        assert_eq!(g.integrate(&vec![1.0; 64]), 1.0);
    }

    #[test]
    fn constant_quadrature_every_bc() {
        for bc in [
            BoundaryCondition::Dirichlet,
            BoundaryCondition::Neumann,
            BoundaryCondition::Periodic,
            BoundaryCondition::TruncatedWholeSpace,
        ] {
            let g = grid(&[2.0, 1.0, 0.7], &[17, 12, 9], bc);
            let q = g.integrate_fn(|_| 1.0);
            assert!((q - 1.4).abs() < 1e-12 * 1.4, "{bc:?}: {q}");
        }
        let n = grid(&[2.0, 1.0], &[17, 12], BoundaryCondition::Neumann);
        assert!((n.integrate(&vec![1.0; n.len()]) - 2.0).abs() < 1e-13);
    }

    #[test]
    fn sine_product_density_integrates_to_one() {
        // closed form: ∫ sin² (π x / L) dx = L/2 per axis, so the normalized
        // product density has unit mass.
        let g = grid(&[2.0, 1.0], &[128, 64], BoundaryCondition::Dirichlet);
        let a0sq = 1.0 / 2.0;
        let rho: Vec<f64> = (0..g.len())
            .map(|i| {
                let x = g.coords(i);
                4.0 * a0sq * (libm::sin(PI * x[0] / 2.0) * libm::sin(PI * x[1])).powi(2)
            })
            .collect();
        assert!((g.integrate(&rho) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn too_coarse_and_mismatch() {
        let d = BoxDomain::new(vec![1.0, 1.0]).unwrap();
        assert!(matches!(
            make_grid(&d, &[8, 7], BoundaryCondition::Dirichlet),
            Err(Error::GridTooCoarse { axis: 1, nodes: 7, .. })
        ));
        assert!(matches!(make_grid(&d, &[8], BoundaryCondition::Dirichlet), Err(Error::DimensionMismatch { .. })));
    }

    fn laplacian_eigen_error(n: usize) -> f64 {
        let l = [2.0, 1.0];
        let g = grid(&l, &[n, n], BoundaryCondition::Dirichlet);
        let u: Vec<f64> = (0..g.len())
            .map(|i| {
                let x = g.coords(i);
                libm::sin(PI * x[0] / l[0]) * libm::sin(PI * x[1] / l[1])
            })
            .collect();
        let mut lu = vec![0.0; g.len()];
        g.laplacian(&u, &mut lu);
        let lambda = -g.inner(&u, &lu) / g.inner(&u, &u);
        let exact = PI * PI * (1.0 / 4.0 + 1.0);
        (lambda - exact).abs()
    }

    #[test]
    fn dirichlet_laplacian_second_order() {
        // halve h (n+1 doubles)
        let e1 = laplacian_eigen_error(31);
        let e2 = laplacian_eigen_error(63);
        let ratio = e1 / e2;
        assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn summation_by_parts_all_bcs() {
        for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann, BoundaryCondition::Periodic] {
            let g = grid(&[1.3, 0.8], &[11, 9], bc);
            let u: Vec<f64> = (0..g.len()).map(|i| libm::sin(1.0 + 0.37 * i as f64)).collect();
            let mut lu = vec![0.0; g.len()];
            g.laplacian(&u, &mut lu);
            let a = -g.inner(&u, &lu);
            let b = g.gradient_norm_sq(&u);
            assert!((a - b).abs() < 1e-12 * b.abs(), "{bc:?}: {a} vs {b}");
        }
    }

    #[test]
    fn periodic_shift_commutes_with_laplacian() {
        let g = grid(&[1.0, 0.5], &[16, 12], BoundaryCondition::Periodic);
        let u: Vec<f64> = (0..g.len()).map(|i| libm::cos(0.3 * i as f64) + 0.1 * i as f64).collect();
        let shifted: Vec<f64> = (0..g.len()).map(|i| u[g.quarter_shift(i)]).collect();
        let (mut lu, mut ls) = (vec![0.0; g.len()], vec![0.0; g.len()]);
        g.laplacian(&u, &mut lu);
        g.laplacian(&shifted, &mut ls);
        for i in 0..g.len() {
            assert!((ls[i] - lu[g.quarter_shift(i)]).abs() < 1e-9);
        }
        assert!((g.integrate(&u) - g.integrate(&shifted)).abs() < 1e-12);
    }

    #[test]
    fn symmetry_maps_are_involutions() {
        let g = grid(&[1.0, 1.0], &[10, 10], BoundaryCondition::Dirichlet);
        for i in 0..g.len() {
            assert_eq!(g.mirror_x1(g.mirror_x1(i)), i);
            let r4 = g.quarter_turn(g.quarter_turn(g.quarter_turn(g.quarter_turn(i))));
            assert_eq!(r4, i);
            let (x, c) = (g.coords(i), g.center());
            let y = g.coords(g.quarter_turn(i));
            assert!((y[0] - c[0] + (x[1] - c[1])).abs() < 1e-12);
            assert!((y[1] - c[1] - (x[0] - c[0])).abs() < 1e-12);
        }
        let p = grid(&[1.0], &[16], BoundaryCondition::Periodic);
        for i in 0..16 {
            let x = p.coords(i)[0];
            let m = p.coords(p.mirror_x1(i))[0];
            assert!(((x + m) % 1.0).abs() < 1e-12 || ((x + m) - 1.0).abs() < 1e-12);
        }
    }
}
