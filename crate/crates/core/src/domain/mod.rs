//! Computational domains: boxes, tensor grids with boundary conditions,
//! trapezoidal quadrature, second-order difference operators and trapping
//! potentials.

mod grid;
mod potential;

use alloc::format;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math;

pub use grid::{make_grid, Axis, Grid, MIN_NODES};
pub use potential::{eval_potential, Convexity, NonconvexDemo, PotentialSpec};

/// Relative tolerance used when deciding whether the two largest box lengths
/// (or the two smallest trap frequencies) coincide.
pub const DEGENERACY_REL_TOL: f64 = 1e-12;

/// Rectangular domain `(0, L1) x ... x (0, Ld)` with `d` in `1..=3`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct BoxDomain {
    lengths: Vec<f64>,
    sorted: bool,
}

impl BoxDomain {
    pub fn new(lengths: Vec<f64>) -> Result<Self> {
        if lengths.is_empty() || lengths.len() > 3 {
            return Err(Error::InvalidDomain(format!("dimension must be 1, 2 or 3 (got {})", lengths.len())));
        }
        if let Some(bad) = lengths.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(Error::InvalidDomain(format!("length {bad} is not positive")));
        }
        let sorted = lengths.windows(2).all(|w| w[0] >= w[1]);
        Ok(Self { lengths, sorted })
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn dim(&self) -> usize {
        self.lengths.len()
    }

    /// True when `L1 >= L2 >= ... >= Ld`.
    pub fn is_sorted(&self) -> bool {
        self.sorted
    }

    pub fn volume(&self) -> f64 {
        self.lengths.iter().product()
    }

    pub fn diameter(&self) -> f64 {
        math::sqrt(self.lengths.iter().map(|l| l * l).sum())
    }

    /// Lengths in descending order.
    pub fn sorted_lengths(&self) -> Vec<f64> {
        let mut l = self.lengths.clone();
        l.sort_by(|a, b| b.total_cmp(a));
        l
    }

    /// Two largest lengths equal within `rel_tol` (always false in 1D).
    pub fn has_equal_leading_lengths(&self, rel_tol: f64) -> bool {
        let l = self.sorted_lengths();
        l.len() >= 2 && math::rel_eq(l[0], l[1], rel_tol)
    }
}

/// Largest distance between two points of the box.
pub fn diameter(domain: &BoxDomain) -> f64 {
    domain.diameter()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
    Periodic,
    /// Whole space, truncated to a centered box with homogeneous Dirichlet
    /// conditions.
    TruncatedWholeSpace,
}

impl BoundaryCondition {
    pub fn name(self) -> &'static str {
        match self {
            Self::Dirichlet => "dirichlet",
            Self::Neumann => "neumann",
            Self::Periodic => "periodic",
            Self::TruncatedWholeSpace => "whole-space",
        }
    }

    /// Zero boundary values (only interior nodes are stored).
    pub fn is_dirichlet_like(self) -> bool {
        matches!(self, Self::Dirichlet | Self::TruncatedWholeSpace)
    }
}

impl core::str::FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dirichlet" => Ok(Self::Dirichlet),
            "neumann" => Ok(Self::Neumann),
            "periodic" => Ok(Self::Periodic),
            "whole-space" | "wholespace" | "truncated" | "truncated-whole-space" => Ok(Self::TruncatedWholeSpace),
            other => Err(Error::InvalidConfig(format!("unknown boundary condition '{other}'"))),
        }
    }
}

/// Whether the eigenspace of the second-smallest linear eigenvalue is one
/// dimensional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Degeneracy {
    Nondegenerate,
    Degenerate,
}

/// Classify a problem. Zero potentials on boxes are degenerate when the two
/// largest lengths coincide; periodic rings are always degenerate (cosine and
/// sine share the first excited level); harmonic traps are degenerate when the
/// two smallest frequencies coincide. Everything else is reported
/// nondegenerate and may be overridden by the caller.
pub fn classify(domain: &BoxDomain, bc: BoundaryCondition, potential: &PotentialSpec, rel_tol: f64) -> Degeneracy {
    let degenerate = match (bc, potential) {
        (BoundaryCondition::Periodic, PotentialSpec::Zero) => true,
        (_, PotentialSpec::Zero) => domain.has_equal_leading_lengths(rel_tol),
        (_, PotentialSpec::Harmonic { gammas }) => gammas.len() >= 2 && math::rel_eq(gammas[0], gammas[1], rel_tol),
        _ => false,
    };
    if degenerate {
        Degeneracy::Degenerate
    } else {
        Degeneracy::Nondegenerate
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn diameter_examples() {
        let d = |l: Vec<f64>| diameter(&BoxDomain::new(l).unwrap());
        assert_eq!(d(vec![2.0]), 2.0);
        assert!((d(vec![2.0, 1.0]) - 2.236_067_977_499_79).abs() < 1e-12);
        assert!((d(vec![1.0, 1.0, 1.0]) - 1.732_050_807_568_877_2).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(BoxDomain::new(vec![]).is_err());
        assert!(BoxDomain::new(vec![1.0, 0.0]).is_err());
        assert!(BoxDomain::new(vec![1.0, -2.0]).is_err());
        assert!(BoxDomain::new(vec![f64::NAN]).is_err());
        assert!(BoxDomain::new(vec![1.0; 4]).is_err());
    }

    #[test]
    fn sorted_flag() {
        assert!(BoxDomain::new(vec![2.0, 1.0, 1.0]).unwrap().is_sorted());
        assert!(!BoxDomain::new(vec![1.0, 2.0]).unwrap().is_sorted());
    }

    #[test]
    fn classification() {
        let sq = BoxDomain::new(vec![1.0, 1.0]).unwrap();
        let rect = BoxDomain::new(vec![2.0, 1.0]).unwrap();
        let line = BoxDomain::new(vec![2.0]).unwrap();
        let zero = PotentialSpec::Zero;
        assert_eq!(classify(&sq, BoundaryCondition::Dirichlet, &zero, 1e-12), Degeneracy::Degenerate);
        assert_eq!(classify(&rect, BoundaryCondition::Dirichlet, &zero, 1e-12), Degeneracy::Nondegenerate);
        assert_eq!(classify(&line, BoundaryCondition::Neumann, &zero, 1e-12), Degeneracy::Nondegenerate);
        assert_eq!(classify(&line, BoundaryCondition::Periodic, &zero, 1e-12), Degeneracy::Degenerate);
        let h = PotentialSpec::Harmonic { gammas: vec![1.0, 1.0] };
        assert_eq!(classify(&sq, BoundaryCondition::TruncatedWholeSpace, &h, 1e-12), Degeneracy::Degenerate);
        let h2 = PotentialSpec::Harmonic { gammas: vec![1.0, 2.0] };
        assert_eq!(classify(&sq, BoundaryCondition::TruncatedWholeSpace, &h2, 1e-12), Degeneracy::Nondegenerate);
        // near-equal lengths beyond the tolerance stay nondegenerate
        let near = BoxDomain::new(vec![1.0 + 1e-9, 1.0]).unwrap();
        assert_eq!(classify(&near, BoundaryCondition::Dirichlet, &zero, 1e-12), Degeneracy::Nondegenerate);
        assert_eq!(classify(&near, BoundaryCondition::Dirichlet, &zero, 1e-6), Degeneracy::Degenerate);
    }
}
