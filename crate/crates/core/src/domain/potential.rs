use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::Grid;
use crate::error::{Error, Result};
use crate::math;

/// Built-in non-convex potentials on `(0, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum NonconvexDemo {
    /// `-10 x^2`
    NegativeQuadratic,
    /// `10 sin(10 (x - 1))`
    Oscillating,
}

impl NonconvexDemo {
    fn eval(self, x: f64) -> f64 {
        match self {
            Self::NegativeQuadratic => -10.0 * x * x,
            Self::Oscillating => 10.0 * math::sin(10.0 * (x - 1.0)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::NegativeQuadratic => "negative-quadratic",
            Self::Oscillating => "oscillating",
        }
    }
}

/// External trapping potential.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case", tag = "kind"))]
pub enum PotentialSpec {
    /// `V = 0` (box potential when paired with a bounded domain).
    Zero,
    /// `V = ½ Σ γ_j² x_j²` about the origin, with `0 < γ_1 <= ... <= γ_d`.
    Harmonic { gammas: Vec<f64> },
    /// `V = ½ γ² x² + V0 cos(k x)` in 1D.
    HarmonicPlusCosine { gamma: f64, v0: f64, k: f64 },
    /// `V = V0 Σ (x_j - c_j)²`; the dimension is the length of `center`.
    ShiftedQuadratic { v0: f64, center: Vec<f64> },
    /// 1D non-convex examples.
    Nonconvex { demo: NonconvexDemo },
    /// Values sampled at every stored grid node, row-major.
    Tabulated { values: Vec<f64> },
}

/// Convexity of a potential: `D²V >= γ_v² I` for the reported `gamma_v`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Convexity {
    Convex {
        gamma_v: f64,
    },
    Nonconvex,
    /// Not known in closed form (tabulated data).
    Unknown,
}

impl PotentialSpec {
    /// Parse whitespace-delimited node values (one or more per line).
    pub fn tabulated_from_text(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            for tok in line.split_whitespace() {
                let v: f64 = tok
                    .parse()
                    .map_err(|_| Error::InvalidConfig(format!("line {}: '{tok}' is not a number", line_no + 1)))?;
                if !v.is_finite() {
                    return Err(Error::NonFinite("tabulated potential"));
                }
                values.push(v);
            }
        }
        if values.is_empty() {
            return Err(Error::InvalidConfig(String::from("tabulated potential is empty")));
        }
        Ok(Self::Tabulated { values })
    }

    /// Required spatial dimension, if the variant fixes one.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Self::Zero | Self::Tabulated { .. } => None,
            Self::Harmonic { gammas } => Some(gammas.len()),
            Self::HarmonicPlusCosine { .. } | Self::Nonconvex { .. } => Some(1),
            Self::ShiftedQuadratic { center, .. } => Some(center.len()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        match self {
            Self::Harmonic { gammas } => {
                if gammas.is_empty() || gammas.len() > 3 {
                    return bad(format!("harmonic trap needs 1 to 3 frequencies, got {}", gammas.len()));
                }
                if gammas.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
                    return bad(String::from("trap frequencies must be positive"));
                }
                if gammas.windows(2).any(|w| w[0] > w[1]) {
                    return bad(String::from("trap frequencies must be ascending"));
                }
            }
            Self::HarmonicPlusCosine { gamma, v0, k } => {
                if !(gamma.is_finite() && *gamma > 0.0 && v0.is_finite() && k.is_finite()) {
                    return bad(String::from("harmonic-plus-cosine needs gamma > 0 and finite V0, k"));
                }
            }
            Self::ShiftedQuadratic { v0, center } => {
                if !(v0.is_finite() && *v0 >= 0.0) || center.iter().any(|c| !c.is_finite()) {
                    return bad(String::from("shifted quadratic needs V0 >= 0 and a finite center"));
                }
                if center.is_empty() || center.len() > 3 {
                    return bad(String::from("shifted quadratic center must have 1 to 3 entries"));
                }
            }
            Self::Tabulated { values } if values.iter().any(|v| !v.is_finite()) => {
                return Err(Error::NonFinite("tabulated potential"));
            }
            _ => {}
        }
        Ok(())
    }

    /// Closed-form convexity modulus for built-in potentials.
    pub fn convexity(&self) -> Convexity {
        match self {
            Self::Zero => Convexity::Convex { gamma_v: 0.0 },
            Self::Harmonic { gammas } => {
                Convexity::Convex { gamma_v: gammas.iter().copied().fold(f64::INFINITY, f64::min) }
            }
            Self::HarmonicPlusCosine { gamma, v0, k } => {
                let curvature = gamma * gamma - math::abs(*v0) * k * k;
                if curvature >= 0.0 {
                    Convexity::Convex { gamma_v: math::sqrt(curvature) }
                } else {
                    Convexity::Nonconvex
                }
            }
            Self::ShiftedQuadratic { v0, .. } => Convexity::Convex { gamma_v: math::sqrt(2.0 * v0) },
            Self::Nonconvex { .. } => Convexity::Nonconvex,
            Self::Tabulated { .. } => Convexity::Unknown,
        }
    }

    /// Frequencies of the quadratic part, used to size whole-space truncation
    /// boxes.
    pub fn trap_frequencies(&self) -> Option<Vec<f64>> {
        match self {
            Self::Harmonic { gammas } => Some(gammas.clone()),
            Self::HarmonicPlusCosine { gamma, .. } => Some(alloc::vec![*gamma]),
            Self::ShiftedQuadratic { v0, center } if *v0 > 0.0 => Some(alloc::vec![math::sqrt(2.0 * v0); center.len()]),
            _ => None,
        }
    }

    /// Pointwise value at `x` (length `d`). Tabulated potentials have no
    /// pointwise form and return `None`.
    pub fn value_at(&self, x: &[f64]) -> Option<f64> {
        Some(match self {
            Self::Zero => 0.0,
            Self::Harmonic { gammas } => 0.5 * gammas.iter().zip(x).map(|(g, xi)| g * g * xi * xi).sum::<f64>(),
            Self::HarmonicPlusCosine { gamma, v0, k } => 0.5 * gamma * gamma * x[0] * x[0] + v0 * math::cos(k * x[0]),
            Self::ShiftedQuadratic { v0, center } => {
                v0 * center.iter().zip(x).map(|(c, xi)| (xi - c) * (xi - c)).sum::<f64>()
            }
            Self::Nonconvex { demo } => demo.eval(x[0]),
            Self::Tabulated { .. } => return None,
        })
    }
}

/// Potential values at every stored node of `grid`.
pub fn eval_potential(spec: &PotentialSpec, grid: &Grid) -> Result<Vec<f64>> {
    spec.validate()?;
    if let Some(d) = spec.dim() {
        if d != grid.dim() {
            return Err(Error::DimensionMismatch { expected: grid.dim(), found: d });
        }
    }
    let values = match spec {
        PotentialSpec::Tabulated { values } => {
            if values.len() != grid.len() {
                return Err(Error::DimensionMismatch { expected: grid.len(), found: values.len() });
            }
            values.clone()
        }
        _ => (0..grid.len())
            .map(|i| {
                let x = grid.coords(i);
                spec.value_at(&x[..grid.dim()]).unwrap_or(0.0)
            })
            .collect(),
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("potential"));
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{make_grid, BoundaryCondition, BoxDomain};
    use alloc::vec;

    #[test]
    fn pointwise_examples() {
        let h = PotentialSpec::Harmonic { gammas: vec![1.0] };
        assert_eq!(h.value_at(&[1.0]), Some(0.5));
        let hc = PotentialSpec::HarmonicPlusCosine { gamma: 1.0, v0: 0.5, k: 1.0 };
        assert_eq!(hc.value_at(&[0.0]), Some(0.5));
        let s = PotentialSpec::ShiftedQuadratic { v0: 3.0, center: vec![1.0] };
        assert_eq!(s.value_at(&[0.0]), Some(3.0));
        assert_eq!(PotentialSpec::Nonconvex { demo: NonconvexDemo::NegativeQuadratic }.value_at(&[2.0]), Some(-40.0));
        assert_eq!(PotentialSpec::Nonconvex { demo: NonconvexDemo::Oscillating }.value_at(&[1.0]), Some(0.0));
    }

    #[test]
    fn zero_field_and_dimension_check() {
        let g = make_grid(&BoxDomain::new(vec![1.0, 1.0]).unwrap(), &[8, 8], BoundaryCondition::Dirichlet).unwrap();
        assert!(eval_potential(&PotentialSpec::Zero, &g).unwrap().iter().all(|v| *v == 0.0));
        let h = PotentialSpec::Harmonic { gammas: vec![1.0] };
        assert!(matches!(eval_potential(&h, &g), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn harmonic_order_enforced() {
        let h = PotentialSpec::Harmonic { gammas: vec![2.0, 1.0] };
        assert!(h.validate().is_err());
        assert!(PotentialSpec::Harmonic { gammas: vec![0.0] }.validate().is_err());
    }

    #[test]
    fn tabulated_roundtrip() {
        let g = make_grid(&BoxDomain::new(vec![1.0]).unwrap(), &[8], BoundaryCondition::Periodic).unwrap();
        let spec = PotentialSpec::tabulated_from_text("0\n1\n2 3\n4\n5\n6\n7\n").unwrap();
        let v = eval_potential(&spec, &g).unwrap();
        assert_eq!(v, (0..8).map(f64::from).collect::<Vec<_>>());
        let short = PotentialSpec::tabulated_from_text("1 2 3").unwrap();
        assert!(eval_potential(&short, &g).is_err());
        assert!(PotentialSpec::tabulated_from_text("1 x").is_err());
    }

    #[test]
    fn convexity_moduli() {
        assert_eq!(PotentialSpec::Harmonic { gammas: vec![1.0, 3.0] }.convexity(), Convexity::Convex { gamma_v: 1.0 });
        assert_eq!(
            PotentialSpec::ShiftedQuadratic { v0: 2.0, center: vec![1.0] }.convexity(),
            Convexity::Convex { gamma_v: 2.0 }
        );
        match (PotentialSpec::HarmonicPlusCosine { gamma: 1.0, v0: 0.5, k: 1.0 }).convexity() {
            Convexity::Convex { gamma_v } => assert!((gamma_v - math::sqrt(0.5)).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        assert_eq!(PotentialSpec::HarmonicPlusCosine { gamma: 1.0, v0: 2.0, k: 1.0 }.convexity(), Convexity::Nonconvex);
        assert_eq!(PotentialSpec::Nonconvex { demo: NonconvexDemo::Oscillating }.convexity(), Convexity::Nonconvex);
    }
}
