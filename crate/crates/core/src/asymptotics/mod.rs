//! Closed-form weak and strong interaction expansions of the ground and first
//! excited energies and chemical potentials, and the approximate profiles
//! they are built from.
//!
//! Every value is an [`AsymptoticEstimate`] tagged with the regime its
//! formula belongs to. Evaluating a formula outside its regime is allowed but
//! flagged through [`Validity::OutsideRegime`].

mod profiles;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::domain::DEGENERACY_REL_TOL;
use crate::error::{Error, Result};
use crate::math::{self, PI, SQRT_2};

pub use profiles::{f_a, neumann_excited_1d, phi_box_excited_1d, phi_box_ground_1d, profile, Profile, ProfileKind};

/// Weak-interaction formulas are flagged above this `β`.
pub const WEAK_MAX_BETA: f64 = 1.0;
/// Strong-interaction formulas are flagged below this `β`.
pub const STRONG_MIN_BETA: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Regime {
    /// Weak interaction, remainder `o(β)`.
    WeakFirstOrder,
    /// Weak interaction, remainder `o(β²)`.
    WeakSecondOrder,
    /// Strong interaction, remainder `o(1)` or smaller.
    Strong,
    /// Strong interaction, leading logarithmic term only.
    StrongLogarithmic,
    /// Exact for every `β`.
    Exact,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Self::WeakFirstOrder => "weak-o(beta)",
            Self::WeakSecondOrder => "weak-o(beta^2)",
            Self::Strong => "strong",
            Self::StrongLogarithmic => "strong-log",
            Self::Exact => "exact",
        }
    }

    fn is_weak(self) -> bool {
        matches!(self, Self::WeakFirstOrder | Self::WeakSecondOrder)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Validity {
    InRegime,
    /// Evaluated at a `β` outside the regime of the formula.
    OutsideRegime,
}

/// One asymptotic value.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct AsymptoticEstimate {
    pub value: f64,
    pub regime: Regime,
    pub validity: Validity,
}

impl AsymptoticEstimate {
    fn new(value: f64, regime: Regime, beta: f64) -> Self {
        let outside = (regime.is_weak() && beta > WEAK_MAX_BETA)
            || (matches!(regime, Regime::Strong | Regime::StrongLogarithmic) && beta < STRONG_MIN_BETA);
        Self { value, regime, validity: if outside { Validity::OutsideRegime } else { Validity::InRegime } }
    }

    /// Human-readable validity note.
    pub fn note(&self) -> &'static str {
        match (self.regime, self.validity) {
            (Regime::Exact, _) => "exact for all beta",
            (_, Validity::OutsideRegime) => "extrapolated outside the regime of the formula",
            (Regime::StrongLogarithmic, _) => "leading logarithmic term; O(1) remainder unknown",
            (r, _) if r.is_weak() => "weak-interaction expansion",
            _ => "strong-interaction expansion",
        }
    }

    pub fn is_extrapolated(&self) -> bool {
        self.validity == Validity::OutsideRegime
    }
}

/// Ground and first excited energies and chemical potentials.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Levels {
    pub e_g: AsymptoticEstimate,
    pub mu_g: AsymptoticEstimate,
    pub e_1: AsymptoticEstimate,
    pub mu_1: AsymptoticEstimate,
}

/// Energy and chemical-potential gaps.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Gaps {
    pub delta_e: AsymptoticEstimate,
    pub delta_mu: AsymptoticEstimate,
}

/// Levels together with the gaps (which may carry more terms than the level
/// difference).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Expansion {
    pub levels: Levels,
    pub gaps: Gaps,
}

impl Levels {
    fn from_values(values: [f64; 4], regime: Regime, beta: f64) -> Self {
        let est = |v| AsymptoticEstimate::new(v, regime, beta);
        Self { e_g: est(values[0]), mu_g: est(values[1]), e_1: est(values[2]), mu_1: est(values[3]) }
    }

    /// Gaps as level differences.
    pub fn gaps(&self) -> Gaps {
        let diff = |a: AsymptoticEstimate, b: AsymptoticEstimate| AsymptoticEstimate {
            value: a.value - b.value,
            regime: a.regime,
            validity: if a.is_extrapolated() || b.is_extrapolated() {
                Validity::OutsideRegime
            } else {
                Validity::InRegime
            },
        };
        Gaps { delta_e: diff(self.e_1, self.e_g), delta_mu: diff(self.mu_1, self.mu_g) }
    }

    fn expansion(self) -> Expansion {
        Expansion { gaps: self.gaps(), levels: self }
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("beta must be >= 0 (got {beta})")))
    }
}

fn check_lengths(lengths: &[f64]) -> Result<()> {
    if lengths.is_empty() || lengths.len() > 3 || lengths.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(Error::InvalidDomain(String::from("need 1 to 3 positive lengths")));
    }
    if lengths.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidDomain(String::from("box lengths must be sorted L1 >= L2 >= ... >= Ld")));
    }
    Ok(())
}

fn leading_pair_equal(values: &[f64]) -> bool {
    values.len() >= 2 && math::rel_eq(values[0], values[1], DEGENERACY_REL_TOL)
}

/// Constants of the box-potential expansions for `L1 >= L2 >= ... >= Ld`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct BoxConstants {
    pub lengths: Vec<f64>,
    /// `1/sqrt(Π L_j)`
    pub a0: f64,
    pub a1: f64,
    /// `(π²/2) Σ 1/L_j²`
    pub a2: f64,
    /// `Σ 1/L_j`
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
    /// `Σ 1/L_j²`
    pub a6: f64,
}

impl BoxConstants {
    pub fn new(lengths: &[f64]) -> Result<Self> {
        check_lengths(lengths)?;
        let l1 = lengths[0];
        let a0 = 1.0 / math::sqrt(lengths.iter().product());
        let a3: f64 = lengths.iter().map(|l| 1.0 / l).sum();
        let a6: f64 = lengths.iter().map(|l| 1.0 / (l * l)).sum();
        let mut a4 = 0.0;
        for j in 0..lengths.len() {
            for k in j + 1..lengths.len() {
                a4 += 4.0 / (lengths[j] * lengths[k]);
            }
        }
        let a5 = a4 + lengths.iter().skip(1).map(|lj| 4.0 / (l1 * lj)).sum::<f64>();
        Ok(Self {
            lengths: lengths.to_vec(),
            a0,
            a1: 2.0 / l1 * (25.0 / (9.0 * l1) + 2.0 / 9.0 * a3),
            a2: 0.5 * PI * PI * a6,
            a3,
            a4,
            a5,
            a6,
        })
    }

    pub fn dim(&self) -> usize {
        self.lengths.len()
    }

    /// `C_{k1,k2,k3}` (3D only).
    pub fn c(&self, k: [f64; 3]) -> Result<f64> {
        if self.dim() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: self.dim() });
        }
        let l = &self.lengths;
        let q: Vec<f64> = (0..3).map(|j| k[j] * k[j] / (l[j] * l[j])).collect();
        let mut s1 = 0.0;
        for j in 0..3 {
            s1 += l[j] * l[j] / (k[j] * k[j]);
        }
        let mut s2 = 0.0;
        for i in 0..3 {
            for j in i + 1..3 {
                s2 += 1.0 / (q[i] + q[j]);
            }
        }
        let s3 = 1.0 / q.iter().sum::<f64>();
        Ok(pow4(self.a0) * (81.0 * s1 + 9.0 * s2 + s3))
    }

    /// Second-order gap coefficients `(G_d^(1), G_d^(2))`.
    pub fn g(&self) -> Result<(f64, f64)> {
        let pi2 = PI * PI;
        let g1 = match self.dim() {
            1 => 3.0 / (64.0 * pi2),
            2 => {
                let l1 = self.lengths[0];
                pow4(self.a0) / (64.0 * pi2) * (27.0 / 4.0 * l1 * l1 + 3.0 / (self.a6 * (self.a6 * l1 * l1 + 3.0)))
            }
            _ => (self.c([1.0, 1.0, 1.0])? - self.c([2.0, 1.0, 1.0])?) / (256.0 * pi2),
        };
        Ok((g1, 3.0 * g1))
    }
}

fn pow4(x: f64) -> f64 {
    let x2 = x * x;
    x2 * x2
}

/// Constants of the harmonic-trap expansions for `γ1 <= ... <= γd`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct HarmonicConstants {
    pub gammas: Vec<f64>,
    /// `Π sqrt(γ_j / 2π)`
    pub b0: f64,
    /// `½ Σ γ_j`
    pub b1: f64,
    /// `Π γ_j`
    pub b2: f64,
    /// 2, π, 4π/3 for d = 1, 2, 3
    pub c_d: f64,
}

impl HarmonicConstants {
    pub fn new(gammas: &[f64]) -> Result<Self> {
        if gammas.is_empty() || gammas.len() > 3 || gammas.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
            return Err(Error::InvalidConfig(String::from("need 1 to 3 positive trap frequencies")));
        }
        if gammas.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidConfig(String::from("trap frequencies must be ascending")));
        }
        Ok(Self {
            gammas: gammas.to_vec(),
            b0: gammas.iter().map(|g| math::sqrt(g / (2.0 * PI))).product(),
            b1: 0.5 * gammas.iter().sum::<f64>(),
            b2: gammas.iter().product(),
            c_d: match gammas.len() {
                1 => 2.0,
                2 => PI,
                _ => 4.0 * PI / 3.0,
            },
        })
    }

    pub fn dim(&self) -> usize {
        self.gammas.len()
    }

    /// Thomas-Fermi chemical potential `½((d+2) B2 β / C_d)^{2/(d+2)}`.
    pub fn mu_tf(&self, beta: f64) -> f64 {
        let d = self.dim() as f64;
        0.5 * math::powf((d + 2.0) * self.b2 * beta / self.c_d, 2.0 / (d + 2.0))
    }
}

/// Box potential, weak interaction. `degenerate` selects the vortex-branch
/// excited level (requires `d >= 2` and `L1 = L2`).
pub fn box_weak(lengths: &[f64], beta: f64, degenerate: bool) -> Result<Levels> {
    check_beta(beta)?;
    let c = BoxConstants::new(lengths)?;
    let d = c.dim() as f64;
    let l1 = lengths[0];
    if degenerate && !leading_pair_equal(lengths) {
        return Err(Error::DegeneracyMismatch(String::from("degenerate box needs d >= 2 and L1 = L2")));
    }
    let a02 = c.a0 * c.a0;
    let lin = math::powf(3.0, d) * a02 / math::powf(2.0, d + 1.0);
    let base1 = 1.5 * PI * PI / (l1 * l1) + c.a2;
    let (e1, m1) = if degenerate {
        (base1 + 13.0 * d / 32.0 * a02 * beta, base1 + 13.0 * d / 16.0 * a02 * beta)
    } else {
        (base1 + lin * beta, base1 + 2.0 * lin * beta)
    };
    Ok(Levels::from_values([c.a2 + lin * beta, c.a2 + 2.0 * lin * beta, e1, m1], Regime::WeakFirstOrder, beta))
}

/// Box potential, nondegenerate, weak interaction to second order in `β`.
pub fn box_gap_weak_secondorder(lengths: &[f64], beta: f64) -> Result<Gaps> {
    check_beta(beta)?;
    let c = BoxConstants::new(lengths)?;
    if leading_pair_equal(lengths) {
        return Err(Error::DegeneracyMismatch(String::from(
            "second-order weak gap is only available in the nondegenerate case",
        )));
    }
    let (g1, g2) = c.g()?;
    let base = 1.5 * PI * PI / (lengths[0] * lengths[0]);
    let est = |v| AsymptoticEstimate::new(v, Regime::WeakSecondOrder, beta);
    Ok(Gaps { delta_e: est(base + g1 * beta * beta), delta_mu: est(base + g2 * beta * beta) })
}

/// Box potential, nondegenerate excited level, strong interaction.
pub fn box_strong(lengths: &[f64], beta: f64) -> Result<Levels> {
    check_beta(beta)?;
    let c = BoxConstants::new(lengths)?;
    let l1 = lengths[0];
    let (a0, a3) = (c.a0, c.a3);
    let sb = math::sqrt(beta);
    let k = a3 * l1 + 1.0;
    Ok(Levels::from_values(
        [
            0.5 * a0 * a0 * beta + 4.0 * a0 * a3 / 3.0 * sb + 2.0 * a3 * a3 - 8.0 * c.a4 / 9.0,
            a0 * a0 * beta + 2.0 * a0 * a3 * sb + 2.0 * a3 * a3 - c.a4,
            0.5 * a0 * a0 * beta + 4.0 * a0 * k / (3.0 * l1) * sb + 2.0 * k * k / (l1 * l1) - 8.0 * c.a5 / 9.0,
            a0 * a0 * beta + 2.0 * a0 * k / l1 * sb + 2.0 * k * k / (l1 * l1) - c.a5,
        ],
        Regime::Strong,
        beta,
    ))
}

/// 2D square box `L x L`, vortex branch, strong interaction: `(E1, μ1)` and
/// the leading logarithmic gaps.
pub fn box_degenerate_strong_2d(l: f64, beta: f64) -> Result<Expansion> {
    check_beta(beta)?;
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::InvalidDomain(String::from("length must be positive")));
    }
    let ground = box_strong(&[l, l], beta)?;
    let l2 = l * l;
    let log_term = PI / (2.0 * l2) * math::ln(beta);
    let sb = math::sqrt(beta);
    let e1 =
        AsymptoticEstimate::new(beta / (2.0 * l2) + 8.0 * sb / (3.0 * l2) + log_term, Regime::StrongLogarithmic, beta);
    let mu1 = AsymptoticEstimate::new(beta / l2 + 4.0 * sb / l2 + log_term, Regime::StrongLogarithmic, beta);
    let gap = AsymptoticEstimate::new(log_term, Regime::StrongLogarithmic, beta);
    Ok(Expansion {
        levels: Levels { e_g: ground.e_g, mu_g: ground.mu_g, e_1: e1, mu_1: mu1 },
        gaps: Gaps { delta_e: gap, delta_mu: gap },
    })
}

/// Harmonic trap, weak interaction. `degenerate` selects the vortex branch
/// (requires `γ1 = γ2`).
pub fn harmonic_weak(gammas: &[f64], beta: f64, degenerate: bool) -> Result<Levels> {
    check_beta(beta)?;
    let c = HarmonicConstants::new(gammas)?;
    if degenerate && !leading_pair_equal(gammas) {
        return Err(Error::DegeneracyMismatch(String::from("degenerate trap needs d >= 2 and gamma1 = gamma2")));
    }
    let g1 = gammas[0];
    let (b0, b1) = (c.b0, c.b1);
    let d = c.dim() as f64;
    let (e1, m1) = if degenerate {
        (g1 + b1 + b0 * d / 8.0 * beta, g1 + b1 + b0 * d / 4.0 * beta)
    } else {
        (g1 + b1 + 3.0 * b0 / 8.0 * beta, g1 + b1 + 3.0 * b0 / 4.0 * beta)
    };
    Ok(Levels::from_values([b1 + 0.5 * b0 * beta, b1 + b0 * beta, e1, m1], Regime::WeakFirstOrder, beta))
}

/// Harmonic trap, nondegenerate, strong interaction. With `higher_order`
/// the gaps carry the next correction in `β^{-2/(d+2)}`.
pub fn harmonic_strong(gammas: &[f64], beta: f64, higher_order: bool) -> Result<Expansion> {
    check_beta(beta)?;
    let c = HarmonicConstants::new(gammas)?;
    let d = c.dim() as f64;
    let g1 = gammas[0];
    let mu = c.mu_tf(beta);
    let eg = (2.0 + d) / (4.0 + d) * mu;
    let shift = 0.5 * SQRT_2 * g1;
    let levels = Levels::from_values([eg, mu, eg + shift, mu + shift], Regime::Strong, beta);
    let mut gaps = levels.gaps();
    if higher_order {
        let scale = math::powf(c.c_d / (c.b2 * beta), 2.0 / (d + 2.0));
        let de = g1 * g1 * math::powf(d + 2.0, d / (d + 2.0)) / 4.0 * scale;
        let dm = g1 * g1 * d * math::powf(d + 2.0, -2.0 / (d + 2.0)) / 4.0 * scale;
        gaps.delta_e.value = shift + de;
        gaps.delta_mu.value = shift + dm;
    }
    Ok(Expansion { levels, gaps })
}

/// 2D isotropic trap, vortex branch, strong interaction.
pub fn harmonic_degenerate_strong_2d(gamma: f64, beta: f64) -> Result<Expansion> {
    check_beta(beta)?;
    let ground = harmonic_strong(&[gamma, gamma], beta, false)?.levels;
    let term = gamma / 2.0 * math::sqrt(PI / beta) * math::ln(beta);
    let est = |v| AsymptoticEstimate::new(v, Regime::StrongLogarithmic, beta);
    Ok(Expansion {
        levels: Levels {
            e_g: ground.e_g,
            mu_g: ground.mu_g,
            e_1: est(ground.e_g.value + term),
            mu_1: est(ground.mu_g.value + 0.5 * term),
        },
        gaps: Gaps { delta_e: est(term), delta_mu: est(0.5 * term) },
    })
}

/// Zero potential with periodic boundary conditions (exact for all `β`).
pub fn periodic_exact(lengths: &[f64], beta: f64) -> Result<Expansion> {
    check_beta(beta)?;
    let c = BoxConstants::new(lengths)?;
    let a02 = c.a0 * c.a0;
    let k = 2.0 * PI * PI / (lengths[0] * lengths[0]);
    Ok(Levels::from_values([0.5 * a02 * beta, a02 * beta, k + 0.5 * a02 * beta, k + a02 * beta], Regime::Exact, beta)
        .expansion())
}

/// Which expansion to evaluate for Neumann boxes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum RegimeChoice {
    Weak,
    Strong,
}

/// Zero potential with homogeneous Neumann conditions. The ground level is
/// exact for every `β`; the excited level follows `regime`.
pub fn neumann_asym(lengths: &[f64], beta: f64, degenerate: bool, regime: RegimeChoice) -> Result<Expansion> {
    check_beta(beta)?;
    let c = BoxConstants::new(lengths)?;
    if degenerate && !leading_pair_equal(lengths) {
        return Err(Error::DegeneracyMismatch(String::from("degenerate box needs d >= 2 and L1 = L2")));
    }
    let l1 = lengths[0];
    let a0 = c.a0;
    let a02 = a0 * a0;
    let exact = |v| AsymptoticEstimate::new(v, Regime::Exact, beta);
    let (e1, m1) = match (regime, degenerate) {
        (RegimeChoice::Weak, false) => {
            let b = PI * PI / (2.0 * l1 * l1);
            let est = |v| AsymptoticEstimate::new(v, Regime::WeakFirstOrder, beta);
            (est(b + 0.75 * a02 * beta), est(b + 1.5 * a02 * beta))
        }
        (RegimeChoice::Weak, true) => {
            let b = PI * PI / (2.0 * l1 * l1);
            let est = |v| AsymptoticEstimate::new(v, Regime::WeakFirstOrder, beta);
            (est(b + 0.625 * a02 * beta), est(b + 1.25 * a02 * beta))
        }
        (RegimeChoice::Strong, false) => {
            let sb = math::sqrt(beta);
            let est = |v| AsymptoticEstimate::new(v, Regime::Strong, beta);
            let tail = 2.0 / (l1 * l1);
            (est(0.5 * a02 * beta + 4.0 * a0 / (3.0 * l1) * sb + tail), est(a02 * beta + 2.0 * a0 / l1 * sb + tail))
        }
        (RegimeChoice::Strong, true) => {
            if c.dim() != 2 {
                return Err(Error::Unavailable(String::from(
                    "strong-interaction degenerate Neumann expansion exists only in 2D",
                )));
            }
            let l2 = l1 * l1;
            let log_term = PI / (2.0 * l2) * math::ln(beta);
            let est = |v| AsymptoticEstimate::new(v, Regime::StrongLogarithmic, beta);
            (est(beta / (2.0 * l2) + log_term), est(beta / l2 + log_term))
        }
    };
    Ok(Levels { e_g: exact(0.5 * a02 * beta), mu_g: exact(a02 * beta), e_1: e1, mu_1: m1 }.expansion())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn box_weak_examples() {
        let l = box_weak(&[2.0], 0.0, false).unwrap();
        assert!(close(l.e_g.value, 1.233_700_550_136_169_7, 1e-12));
        assert!(close(l.e_1.value, 4.934_802_200_544_679, 1e-12));
        let l = box_weak(&[2.0], 0.1, false).unwrap();
        assert!(close(l.e_g.value, 1.271_200_550_136_17, 1e-12));
        assert!(close(l.mu_g.value, 1.308_700_550_136_17, 1e-12));
        let l = box_weak(&[1.0, 1.0], 0.1, true).unwrap();
        assert!(close(l.e_1.value, 24.755_261_003_2, 1e-7), "{}", l.e_1.value);
        assert!(matches!(box_weak(&[2.0, 1.0], 0.1, true), Err(Error::DegeneracyMismatch(_))));
        assert!(box_weak(&[1.0, 2.0], 0.1, false).is_err());
    }

    #[test]
    fn box_second_order_examples() {
        let g = box_gap_weak_secondorder(&[2.0], 0.0).unwrap();
        assert!(close(g.delta_e.value, 3.701_101_650_408_509, 1e-12));
        let g = box_gap_weak_secondorder(&[2.0], 1.0).unwrap();
        assert!(close(g.delta_e.value, 3.705_851_2, 1e-6));
        assert!(close(g.delta_mu.value, 3.715_350_3, 1e-6));
        assert_eq!(g.delta_e.regime, Regime::WeakSecondOrder);
        assert!(box_gap_weak_secondorder(&[1.0, 1.0], 1.0).is_err());
        let (g1, g2) = BoxConstants::new(&[2.0]).unwrap().g().unwrap();
        assert_eq!(g2, 3.0 * g1);
    }

    #[test]
    fn box_strong_examples() {
        let l = box_strong(&[2.0], 1000.0).unwrap();
        assert!(close(l.e_g.value, 265.407, 5e-4));
        assert!(close(l.mu_g.value, 522.861, 5e-4));
        let g = l.gaps();
        assert!(close(g.delta_e.value, 16.407, 5e-4));
        assert!(close(g.delta_mu.value, 23.861, 5e-4));
        let c = BoxConstants::new(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!((c.a3, c.a4, c.a5), (3.0, 12.0, 20.0));
        assert!(box_strong(&[2.0], 0.5).unwrap().e_g.is_extrapolated());
    }

    #[test]
    fn strong_box_gap_matches_proposition_form() {
        for l in [[2.0, 1.0, 0.5], [3.0, 2.0, 1.0]] {
            for d in 1..=3 {
                let c = BoxConstants::new(&l[..d]).unwrap();
                let beta = 777.0;
                let g = box_strong(&l[..d], beta).unwrap().gaps();
                let de = 4.0 * c.a0 / (3.0 * l[0]) * beta.sqrt() + c.a1;
                let dm = 2.0 * c.a0 / l[0] * beta.sqrt() + 6.0 / (l[0] * l[0]);
                assert!(close(g.delta_e.value, de, 1e-10));
                assert!(close(g.delta_mu.value, dm, 1e-10));
            }
        }
    }

    #[test]
    fn box_degenerate_strong_examples() {
        let x = box_degenerate_strong_2d(1.0, 1000.0).unwrap();
        assert!(close(x.levels.e_1.value, 595.18, 5e-3), "{}", x.levels.e_1.value);
        assert!(close(x.gaps.delta_e.value, 10.851, 5e-4));
        let x = box_degenerate_strong_2d(2.0, core::f64::consts::E * core::f64::consts::E).unwrap();
        assert!(close(x.gaps.delta_e.value, PI / 4.0, 1e-12));
    }

    #[test]
    fn harmonic_examples() {
        let l = harmonic_weak(&[1.0], 0.0, false).unwrap();
        assert_eq!((l.e_g.value, l.e_1.value), (0.5, 1.5));
        let l = harmonic_weak(&[1.0], 0.1, false).unwrap();
        assert!(close(l.mu_g.value, 0.539_894, 1e-6));
        let l = harmonic_weak(&[1.0, 1.0], 0.1, true).unwrap();
        assert!(close(l.e_1.value, 2.003_978_9, 1e-7));
        let x = harmonic_strong(&[1.0], 100.0, false).unwrap();
        assert!(close(x.levels.mu_g.value, 14.116, 5e-4));
        assert!(close(x.levels.e_g.value, 8.469, 5e-4));
        let x = harmonic_strong(&[1.0], 100.0, true).unwrap();
        assert!(close(x.gaps.delta_e.value, 0.733_68, 1e-5));
        let x = harmonic_strong(&[1.0], 1e12, false).unwrap();
        assert!(close(x.gaps.delta_e.value, 0.5 * SQRT_2, 1e-7));
        let x = harmonic_degenerate_strong_2d(1.0, 1000.0).unwrap();
        assert!(close(x.gaps.delta_e.value, 0.193_589_5, 1e-6));
        assert!(close(x.gaps.delta_mu.value, 0.096_794_8, 1e-6));
        let x = harmonic_degenerate_strong_2d(3.0, core::f64::consts::E).unwrap();
        assert!(close(x.gaps.delta_e.value, 1.5 * (PI / core::f64::consts::E).sqrt(), 1e-12));
        assert!(harmonic_weak(&[1.0, 2.0], 0.1, true).is_err());
    }

    #[test]
    fn periodic_and_neumann_examples() {
        let x = periodic_exact(&[1.0], 10.0).unwrap();
        assert_eq!(x.levels.e_g.value, 5.0);
        assert_eq!(x.levels.mu_g.value, 10.0);
        assert!(close(x.gaps.delta_e.value, 19.739_209, 1e-6));
        assert_eq!(x.gaps.delta_e.regime, Regime::Exact);
        assert!(close(periodic_exact(&[2.0], 0.0).unwrap().gaps.delta_e.value, PI * PI / 2.0, 1e-12));
        assert!(close(periodic_exact(&[2.0, 1.0], 7.0).unwrap().gaps.delta_e.value, PI * PI / 2.0, 1e-12));
        let n = neumann_asym(&[2.0], 4.0, false, RegimeChoice::Weak).unwrap();
        assert!(close(n.levels.e_g.value, 1.0, 1e-14) && close(n.levels.mu_g.value, 2.0, 1e-14));
        let n = neumann_asym(&[2.0], 0.0, false, RegimeChoice::Weak).unwrap();
        assert!(close(n.gaps.delta_e.value, 1.233_700_55, 1e-8));
        let n = neumann_asym(&[2.0], 1000.0, false, RegimeChoice::Strong).unwrap();
        assert!(close(n.gaps.delta_mu.value, 22.861, 5e-4));
        assert!(neumann_asym(&[1.0, 1.0, 1.0], 1000.0, true, RegimeChoice::Strong).is_err());
    }
}
