//! Discrete energy, chemical potential, normalization, Hamiltonian
//! application and eigen-residual.
//!
//! Every integral uses the grid quadrature weights, and the kinetic term is
//! `⟨φ, -½Δ_h φ⟩` so that `μ = E + (β/2)∫|φ|⁴` holds at the discrete level.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::domain::Grid;
use crate::error::{Error, Result};
use crate::math;

/// Grid function, real or complex. The imaginary part is stored only when it
/// may be nonzero.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct WaveField {
    pub re: Vec<f64>,
    pub im: Option<Vec<f64>>,
}

impl WaveField {
    pub fn real(re: Vec<f64>) -> Self {
        Self { re, im: None }
    }

    /// Complex field; lengths must agree.
    pub fn complex(re: Vec<f64>, im: Vec<f64>) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::DimensionMismatch { expected: re.len(), found: im.len() });
        }
        Ok(Self { re, im: Some(im) })
    }

    pub fn zeros(len: usize) -> Self {
        Self::real(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    /// True when no imaginary part is stored.
    pub fn is_real(&self) -> bool {
        self.im.is_none()
    }

    /// Imaginary part at node `i` (zero for real fields).
    #[inline]
    pub fn im_at(&self, i: usize) -> f64 {
        self.im.as_ref().map_or(0.0, |im| im[i])
    }

    /// `|φ|²` at every node.
    pub fn density(&self) -> Vec<f64> {
        match &self.im {
            None => self.re.iter().map(|r| r * r).collect(),
            Some(im) => self.re.iter().zip(im).map(|(r, i)| r * r + i * i).collect(),
        }
    }

    /// Phase `arg φ` at node `i`.
    pub fn phase(&self, i: usize) -> f64 {
        math::atan2(self.im_at(i), self.re[i])
    }

    /// Multiply by `e^{iθ}`.
    pub fn rotate_phase(&self, theta: f64) -> Self {
        let (s, c) = (math::sin(theta), math::cos(theta));
        let im = (0..self.len()).map(|i| s * self.re[i] + c * self.im_at(i)).collect();
        let re = (0..self.len()).map(|i| c * self.re[i] - s * self.im_at(i)).collect();
        Self { re, im: Some(im) }
    }

    /// Drop an imaginary part that is identically zero.
    pub fn compact(mut self) -> Self {
        if self.im.as_ref().is_some_and(|im| im.iter().all(|v| *v == 0.0)) {
            self.im = None;
        }
        self
    }

    pub fn max_abs(&self) -> f64 {
        math::sqrt(self.density().iter().fold(0.0, |m: f64, d| m.max(*d)))
    }

    pub fn is_finite(&self) -> bool {
        self.re.iter().all(|v| v.is_finite()) && self.im.as_ref().map_or(true, |im| im.iter().all(|v| v.is_finite()))
    }

    fn parts(&self) -> impl Iterator<Item = &Vec<f64>> {
        core::iter::once(&self.re).chain(self.im.as_ref())
    }

    fn check(&self, grid: &Grid) -> Result<()> {
        if self.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), found: self.len() });
        }
        if !self.is_finite() {
            return Err(Error::NonFinite("wave field"));
        }
        Ok(())
    }
}

/// Discrete `‖φ‖₂²`.
pub fn norm_sq(phi: &WaveField, grid: &Grid) -> f64 {
    grid.integrate(&phi.density())
}

/// Scale `φ` to unit discrete L² norm.
pub fn normalize(phi: &WaveField, grid: &Grid) -> Result<WaveField> {
    phi.check(grid)?;
    let n2 = norm_sq(phi, grid);
    if !(n2 > 0.0) {
        return Err(Error::ZeroField);
    }
    let s = 1.0 / math::sqrt(n2);
    Ok(WaveField {
        re: phi.re.iter().map(|v| v * s).collect(),
        im: phi.im.as_ref().map(|im| im.iter().map(|v| v * s).collect()),
    })
}

/// Parts of the discrete energy functional.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct EnergyBreakdown {
    /// `½∫|∇φ|²`
    pub kinetic: f64,
    /// `∫V|φ|²`
    pub potential: f64,
    /// `∫|φ|⁴`
    pub interaction: f64,
    pub energy: f64,
    pub chemical_potential: f64,
    pub beta: f64,
}

fn check_inputs(phi: &WaveField, v: &[f64], beta: f64, grid: &Grid) -> Result<()> {
    phi.check(grid)?;
    if v.len() != grid.len() {
        return Err(Error::DimensionMismatch { expected: grid.len(), found: v.len() });
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("potential"));
    }
    if !beta.is_finite() {
        return Err(Error::NonFinite("beta"));
    }
    Ok(())
}

/// `⟨φ, -½Δ_h φ⟩`.
pub fn kinetic(phi: &WaveField, grid: &Grid) -> f64 {
    let mut lap = vec![0.0; grid.len()];
    phi.parts()
        .map(|part| {
            grid.laplacian(part, &mut lap);
            -0.5 * grid.inner(part, &lap)
        })
        .sum()
}

/// `½∫|D_h φ|²` from edge differences; agrees with [`kinetic`] by summation
/// by parts.
pub fn kinetic_by_differencing(phi: &WaveField, grid: &Grid) -> f64 {
    phi.parts().map(|part| 0.5 * grid.gradient_norm_sq(part)).sum()
}

/// Energy, its parts and the chemical potential of a normalized field.
pub fn energy(phi: &WaveField, v: &[f64], beta: f64, grid: &Grid) -> Result<EnergyBreakdown> {
    check_inputs(phi, v, beta, grid)?;
    let rho = phi.density();
    let kin = kinetic(phi, grid);
    let pot = grid.inner(v, &rho);
    let int = grid.inner(&rho, &rho);
    let energy = kin + pot + 0.5 * beta * int;
    Ok(EnergyBreakdown {
        kinetic: kin,
        potential: pot,
        interaction: int,
        energy,
        chemical_potential: energy + 0.5 * beta * int,
        beta,
    })
}

fn hamiltonian_part(part: &[f64], rho: &[f64], v: &[f64], beta: f64, grid: &Grid) -> Vec<f64> {
    let mut out = vec![0.0; grid.len()];
    grid.laplacian(part, &mut out);
    for i in 0..out.len() {
        out[i] = -0.5 * out[i] + (v[i] + beta * rho[i]) * part[i];
    }
    out
}

/// `(-½Δ_h + V + β|φ|²) φ`, not normalized.
pub fn apply_hamiltonian(phi: &WaveField, v: &[f64], beta: f64, grid: &Grid) -> Result<WaveField> {
    check_inputs(phi, v, beta, grid)?;
    let rho = phi.density();
    Ok(WaveField {
        re: hamiltonian_part(&phi.re, &rho, v, beta, grid),
        im: phi.im.as_ref().map(|im| hamiltonian_part(im, &rho, v, beta, grid)),
    })
}

/// `‖(-½Δ_h + V + β|φ|²)φ - μφ‖₂` with `μ` the discrete chemical potential.
pub fn eigen_residual(phi: &WaveField, v: &[f64], beta: f64, grid: &Grid) -> Result<f64> {
    let mu = energy(phi, v, beta, grid)?.chemical_potential;
    let h = apply_hamiltonian(phi, v, beta, grid)?;
    let mut r = WaveField { re: h.re.iter().zip(&phi.re).map(|(a, b)| a - mu * b).collect(), im: None };
    if let (Some(hi), Some(pi)) = (&h.im, &phi.im) {
        r.im = Some(hi.iter().zip(pi).map(|(a, b)| a - mu * b).collect());
    }
    Ok(math::sqrt(norm_sq(&r, grid)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{make_grid, BoundaryCondition, BoxDomain};
    use crate::math::PI;

    fn line(l: f64, n: usize, bc: BoundaryCondition) -> Grid {
        make_grid(&BoxDomain::new(vec![l]).unwrap(), &[n], bc).unwrap()
    }

    fn sine_mode(g: &Grid, l: f64, k: f64) -> WaveField {
        let re = (0..g.len()).map(|i| math::sin(k * PI * g.coords(i)[0] / l)).collect();
        normalize(&WaveField::real(re), g).unwrap()
    }

    #[test]
    fn normalize_constant() {
        let g = line(1.0, 64, BoundaryCondition::Periodic);
        let phi = normalize(&WaveField::real(vec![2.0; 64]), &g).unwrap();
        assert!(phi.re.iter().all(|v| (v - 1.0).abs() < 1e-15));
        let again = normalize(&phi, &g).unwrap();
        assert!(again.re.iter().zip(&phi.re).all(|(a, b)| (a - b).abs() < 1e-15));
        assert!(matches!(normalize(&WaveField::zeros(64), &g), Err(Error::ZeroField)));
    }

    #[test]
    fn box_ground_energy_linear_and_weak() {
        let g = line(2.0, 511, BoundaryCondition::Dirichlet);
        let phi = sine_mode(&g, 2.0, 1.0);
        let v = vec![0.0; g.len()];
        let e0 = energy(&phi, &v, 0.0, &g).unwrap();
        assert!((e0.energy - PI * PI / 8.0).abs() < 1e-4);
        // ∫ (sin² / 1)² with A0² = 1/2 normalization: (1/4) * 3L/8 * 4 = 0.75
        let e1 = energy(&phi, &v, 0.1, &g).unwrap();
        assert!((e1.energy - (PI * PI / 8.0 + 0.0375)).abs() < 1e-4, "{}", e1.energy);
        assert!((e1.interaction - 0.75).abs() < 1e-9);
    }

    #[test]
    fn neumann_constant_energy() {
        let g = line(2.0, 64, BoundaryCondition::Neumann);
        let phi = normalize(&WaveField::real(vec![1.0; 64]), &g).unwrap();
        let e = energy(&phi, &vec![0.0; 64], 4.0, &g).unwrap();
        assert!((e.energy - 1.0).abs() < 1e-14);
        assert!((e.chemical_potential - 2.0).abs() < 1e-14);
        assert!(e.kinetic.abs() < 1e-14);
    }

    #[test]
    fn linear_eigenpair_residual() {
        // discrete sine modes are exact eigenvectors of Δ_h
        let g = line(2.0, 127, BoundaryCondition::Dirichlet);
        let phi = sine_mode(&g, 2.0, 1.0);
        let v = vec![0.0; g.len()];
        assert!(eigen_residual(&phi, &v, 0.0, &g).unwrap() < 1e-12);
        let h = g.axes()[0].spacing;
        let discrete = (2.0 - 2.0 * math::cos(PI * h / 2.0)) / (h * h) * 0.5;
        let e = energy(&phi, &v, 0.0, &g).unwrap();
        assert!((e.energy - discrete).abs() < 1e-12);
        // the wrong state at β=10 is far from stationary
        assert!(eigen_residual(&phi, &v, 10.0, &g).unwrap() > 0.1);
    }

    #[test]
    fn constant_periodic_hamiltonian() {
        let g = line(1.0, 16, BoundaryCondition::Periodic);
        let phi = WaveField::real(vec![0.5; 16]);
        let h = apply_hamiltonian(&phi, &[0.0; 16], 3.0, &g).unwrap();
        assert!(h.re.iter().all(|v| (v - 3.0 * 0.125).abs() < 1e-15));
    }

    #[test]
    fn complex_field_kinetic_consistency() {
        let g = make_grid(&BoxDomain::new(vec![1.0, 1.0]).unwrap(), &[12, 12], BoundaryCondition::Dirichlet).unwrap();
        let re: Vec<f64> = (0..g.len()).map(|i| math::sin(0.3 * i as f64)).collect();
        let im: Vec<f64> = (0..g.len()).map(|i| math::cos(0.7 * i as f64)).collect();
        let phi = normalize(&WaveField::complex(re, im).unwrap(), &g).unwrap();
        let a = kinetic(&phi, &g);
        let b = kinetic_by_differencing(&phi, &g);
        assert!((a - b).abs() < 1e-12 * a);
        let v = vec![0.3; g.len()];
        let e = energy(&phi, &v, 2.0, &g).unwrap();
        let er = energy(&phi.rotate_phase(1.234), &v, 2.0, &g).unwrap();
        assert!((e.energy - er.energy).abs() < 1e-13 * e.energy);
    }
}
