//! Thomas-Fermi and matched-asymptotic profiles sampled on a grid.

use alloc::string::String;
use alloc::vec::Vec;
use core::str::FromStr;

use crate::domain::{BoundaryCondition, Grid};
use crate::error::{Error, Result};
use crate::functional::{normalize, WaveField};
use crate::math;

/// `φ⁽¹⁾_{L,μ}(x)`: flat bulk with `tanh` layers at both walls.
pub fn phi_box_ground_1d(l: f64, mu: f64, x: f64) -> f64 {
    let s = math::sqrt(mu);
    math::tanh(s * x) + math::tanh(s * (l - x)) - math::tanh(s * l)
}

/// `φ⁽²⁾_{L,μ}(x)`: wall layers plus an interior kink at `L/2`.
pub fn phi_box_excited_1d(l: f64, mu: f64, x: f64) -> f64 {
    let s = math::sqrt(mu);
    math::tanh(s * x) - math::tanh(s * (l - x)) + math::tanh(s * (0.5 * l - x))
}

/// Vortex core `f_a(r) = sqrt(2μr² / (1 + 2μr²))`.
pub fn f_a(r: f64, mu: f64) -> f64 {
    let q = 2.0 * mu * r * r;
    math::sqrt(q / (1.0 + q))
}

/// Neumann excited profile `sqrt(μ/β) tanh(sqrt(μ)(L/2 - x))`.
pub fn neumann_excited_1d(l: f64, mu: f64, beta: f64, x: f64) -> f64 {
    math::sqrt(mu / beta) * math::tanh(math::sqrt(mu) * (0.5 * l - x))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    /// Product of `φ⁽¹⁾` factors on a Dirichlet box.
    BoxGround,
    /// `φ⁽²⁾` in `x1` times `φ⁽¹⁾` factors on a Dirichlet box.
    BoxExcited,
    /// Matched vortex density on a square 2D Dirichlet box, with phase `e^{iθ}`.
    BoxVortex,
    /// `sqrt((μ - V)₊/β)` for `V = ½Σγ_j²x_j²`.
    HarmonicGround { gammas: Vec<f64> },
    /// Matched odd-in-`x1` excited profile in a harmonic trap.
    HarmonicExcited { gammas: Vec<f64> },
    /// Matched vortex density in an isotropic 2D trap, with phase `e^{iθ}`.
    HarmonicVortex { gamma: f64 },
    /// Interior kink on a Neumann interval.
    NeumannExcited,
}

impl ProfileKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::BoxGround => "box-ground",
            Self::BoxExcited => "box-excited",
            Self::BoxVortex => "box-vortex",
            Self::HarmonicGround { .. } => "harmonic-ground",
            Self::HarmonicExcited { .. } => "harmonic-excited",
            Self::HarmonicVortex { .. } => "harmonic-vortex",
            Self::NeumannExcited => "neumann-excited",
        }
    }

    /// Parse a kind name; harmonic kinds take `gammas` (the first entry for
    /// the vortex).
    pub fn parse(name: &str, gammas: &[f64]) -> Result<Self> {
        let need = || {
            if gammas.is_empty() {
                Err(Error::InvalidConfig(String::from("harmonic profiles need trap frequencies")))
            } else {
                Ok(())
            }
        };
        Ok(match name {
            "box-ground" => Self::BoxGround,
            "box-excited" => Self::BoxExcited,
            "box-vortex" => Self::BoxVortex,
            "harmonic-ground" => {
                need()?;
                Self::HarmonicGround { gammas: gammas.to_vec() }
            }
            "harmonic-excited" => {
                need()?;
                Self::HarmonicExcited { gammas: gammas.to_vec() }
            }
            "harmonic-vortex" => {
                need()?;
                Self::HarmonicVortex { gamma: gammas[0] }
            }
            "neumann-excited" => Self::NeumannExcited,
            other => return Err(Error::InvalidConfig(alloc::format!("unknown profile kind '{other}'"))),
        })
    }
}

impl FromStr for ProfileKind {
    type Err = Error;

    /// Parses the box and Neumann kinds; harmonic kinds need [`ProfileKind::parse`].
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, &[])
    }
}

/// A profile in the paper's un-normalized form and after normalization on
/// the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub mu: f64,
    pub raw: WaveField,
    pub normalized: WaveField,
}

struct Sampler<'a> {
    kind: &'a ProfileKind,
    grid: &'a Grid,
    beta: f64,
}

impl Sampler<'_> {
    fn check(&self) -> Result<()> {
        let g = self.grid;
        let bc = g.bc();
        let ok = match self.kind {
            ProfileKind::BoxGround | ProfileKind::BoxExcited => bc.is_dirichlet_like(),
            ProfileKind::BoxVortex => bc.is_dirichlet_like() && g.supports_quarter_turn() && g.dim() == 2,
            ProfileKind::HarmonicGround { gammas } | ProfileKind::HarmonicExcited { gammas } => {
                gammas.len() == g.dim() && gammas.iter().all(|x| *x > 0.0)
            }
            ProfileKind::HarmonicVortex { gamma } => g.dim() == 2 && *gamma > 0.0,
            ProfileKind::NeumannExcited => bc == BoundaryCondition::Neumann,
        };
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::InvalidConfig(String::from("profiles need beta > 0")));
        }
        if !ok {
            return Err(Error::InvalidConfig(alloc::format!(
                "profile '{}' does not fit a {}D {} grid",
                self.kind.name(),
                g.dim(),
                bc.name()
            )));
        }
        Ok(())
    }

    /// Offsets from the box corner.
    fn local(&self, i: usize) -> [f64; 3] {
        let mut x = self.grid.coords(i);
        for (a, axis) in self.grid.axes().iter().enumerate() {
            x[a] -= axis.origin;
        }
        x
    }

    fn polar(&self, i: usize) -> (f64, f64) {
        let x = self.grid.coords(i);
        let c = self.grid.center();
        let (dx, dy) = (x[0] - c[0], x[1] - c[1]);
        (math::sqrt(dx * dx + dy * dy), math::atan2(dy, dx))
    }

    fn sample(&self, mu: f64) -> WaveField {
        let g = self.grid;
        let n = g.len();
        let amp = math::sqrt(mu / self.beta);
        let lengths: Vec<f64> = g.axes().iter().map(|a| a.length).collect();
        let real = |f: &dyn Fn(usize) -> f64| WaveField::real((0..n).map(f).collect());
        let vortex = |rho: &dyn Fn(usize) -> f64| {
            let mut re = Vec::with_capacity(n);
            let mut im = Vec::with_capacity(n);
            for i in 0..n {
                let m = math::sqrt(rho(i).max(0.0));
                let (_, theta) = self.polar(i);
                re.push(m * math::cos(theta));
                im.push(m * math::sin(theta));
            }
            WaveField { re, im: Some(im) }
        };
        match self.kind {
            ProfileKind::BoxGround => real(&|i| {
                let x = self.local(i);
                amp * (0..g.dim()).map(|a| phi_box_ground_1d(lengths[a], mu, x[a])).product::<f64>()
            }),
            ProfileKind::BoxExcited => real(&|i| {
                let x = self.local(i);
                amp * phi_box_excited_1d(lengths[0], mu, x[0])
                    * (1..g.dim()).map(|a| phi_box_ground_1d(lengths[a], mu, x[a])).product::<f64>()
            }),
            ProfileKind::BoxVortex => vortex(&|i| {
                let x = self.local(i);
                let (r, _) = self.polar(i);
                let outer = phi_box_ground_1d(lengths[0], mu, x[0]) * phi_box_ground_1d(lengths[1], mu, x[1]);
                let fa = f_a(r, mu);
                mu / self.beta * (fa * fa + outer * outer - 1.0)
            }),
            ProfileKind::HarmonicGround { gammas } => real(&|i| {
                let x = g.coords(i);
                let v: f64 = (0..g.dim()).map(|a| 0.5 * gammas[a] * gammas[a] * x[a] * x[a]).sum();
                math::sqrt((mu - v).max(0.0) / self.beta)
            }),
            ProfileKind::HarmonicExcited { gammas } => real(&|i| {
                let x = g.coords(i);
                let rest: f64 = (1..g.dim()).map(|a| 0.5 * gammas[a] * gammas[a] * x[a] * x[a]).sum();
                let g1 = mu - 0.5 * gammas[0] * gammas[0] * x[0] * x[0] - rest;
                let g2 = mu - rest;
                if g1 < 0.0 {
                    return 0.0;
                }
                let (s1, s2) = (math::sqrt(g1 / self.beta), math::sqrt(g2 / self.beta));
                let t = math::tanh(x[0] * math::sqrt(g2));
                if x[0] >= 0.0 {
                    s1 + s2 * (t - 1.0)
                } else {
                    -s1 + s2 * (1.0 + t)
                }
            }),
            ProfileKind::HarmonicVortex { gamma } => vortex(&|i| {
                let (r, _) = self.polar(i);
                let fa = f_a(r, mu);
                fa * fa * (2.0 * mu - gamma * gamma * r * r).max(0.0) / (2.0 * self.beta)
            }),
            ProfileKind::NeumannExcited => real(&|i| neumann_excited_1d(lengths[0], mu, self.beta, self.local(i)[0])),
        }
    }

    fn mass(&self, mu: f64) -> f64 {
        let f = self.sample(mu);
        let rho = f.density();
        self.grid.integrate(&rho)
    }

    /// `μ` with unit mass on the grid, by bisection in `ln μ`.
    fn mu_from_normalization(&self) -> Result<f64> {
        let mut lo = 1e-8;
        let mut hi = 1.0;
        while self.mass(hi) < 1.0 {
            lo = hi;
            hi *= 4.0;
            if hi > 1e300 {
                return Err(Error::Unavailable(String::from("profile mass never reaches 1")));
            }
        }
        for _ in 0..200 {
            let mid = math::sqrt(lo * hi);
            if self.mass(mid) < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// Sample a closed-form profile. Without `mu` the chemical potential is
/// fixed by unit mass on the grid.
pub fn profile(kind: &ProfileKind, grid: &Grid, beta: f64, mu: Option<f64>) -> Result<Profile> {
    let s = Sampler { kind, grid, beta };
    s.check()?;
    let mu = match mu {
        Some(m) if m.is_finite() && m > 0.0 => m,
        Some(m) => return Err(Error::InvalidConfig(alloc::format!("mu must be positive (got {m})"))),
        None => s.mu_from_normalization()?,
    };
    let raw = s.sample(mu);
    let normalized = normalize(&raw, grid)?;
    Ok(Profile { mu, raw, normalized })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::HarmonicConstants;
    use crate::domain::{make_grid, BoxDomain};

    #[test]
    fn closed_form_points() {
        assert_eq!(phi_box_ground_1d(2.0, 50.0, 0.0), 0.0);
        assert!(phi_box_excited_1d(2.0, 50.0, 1.0).abs() < 1e-15);
        assert!((f_a(1.0 / (2.0f64 * 7.0).sqrt(), 7.0) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((phi_box_ground_1d(2.0, 1e4, 1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn harmonic_tf_radius() {
        let c = HarmonicConstants::new(&[1.0]).unwrap();
        let mu = c.mu_tf(1000.0);
        assert!((mu - 65.5185).abs() < 1e-4, "{mu}");
        assert!(((2.0 * mu).sqrt() - 11.45).abs() < 5e-3);
    }

    #[test]
    fn normalization_fixes_mu() {
        let g = make_grid(&BoxDomain::new(vec![2.0]).unwrap(), &[1023], BoundaryCondition::Dirichlet).unwrap();
        let p = profile(&ProfileKind::BoxGround, &g, 1000.0, None).unwrap();
        assert!((g.integrate(&p.raw.density()) - 1.0).abs() < 1e-10);
        // strong-regime chemical potential within a few percent
        assert!((p.mu / 522.861 - 1.0).abs() < 0.02, "{}", p.mu);
        let p = profile(&ProfileKind::BoxExcited, &g, 1000.0, None).unwrap();
        assert!(p.raw.re[0] > 0.0 && p.raw.re[1022] < 0.0);
    }

    #[test]
    fn vortex_profiles_are_complex_and_normalized() {
        let g = make_grid(&BoxDomain::new(vec![1.0, 1.0]).unwrap(), &[32, 32], BoundaryCondition::Dirichlet).unwrap();
        let p = profile(&ProfileKind::BoxVortex, &g, 500.0, None).unwrap();
        assert!(p.normalized.im.is_some());
        assert!((g.integrate(&p.normalized.density()) - 1.0).abs() < 1e-12);
        assert_eq!(crate::solver::winding_number(&p.normalized, &g), Some(1));
        assert!(profile(&ProfileKind::NeumannExcited, &g, 1.0, None).is_err());
        assert!("nope".parse::<ProfileKind>().is_err());
    }
}
