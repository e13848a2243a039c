//! Gap curves, conjectured lower bounds and comparison against the
//! asymptotic expansions.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::asymptotics::{self, Gaps, Levels, Regime, RegimeChoice, WEAK_MAX_BETA};
use crate::domain::{BoundaryCondition, BoxDomain, Convexity, Degeneracy, PotentialSpec};
use crate::error::{Error, Result};
use crate::math::{self, PI, SQRT_2};
use crate::solver::{ProblemSpec, SolveReport};

/// Absolute slack allowed below a conjectured bound before a sample counts
/// as a violation; covers the O(h²) discretization error of numeric gaps.
pub const CONJECTURE_TOL: f64 = 5e-4;
/// Finite-difference threshold for the monotonicity classification.
pub const MONOTONICITY_TOL: f64 = 1e-9;

/// The problem class a curve belongs to.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ProblemFingerprint {
    /// Box lengths; the truncation box for whole-space problems.
    pub lengths: Vec<f64>,
    pub bc: BoundaryCondition,
    pub potential: PotentialSpec,
    pub degeneracy: Degeneracy,
    /// Declared convexity of the potential; defaults to the closed form.
    pub convexity: Convexity,
}

impl ProblemFingerprint {
    pub fn from_spec(spec: &ProblemSpec) -> Self {
        Self {
            lengths: spec.domain.lengths().to_vec(),
            bc: spec.bc,
            potential: spec.potential.clone(),
            degeneracy: spec.degeneracy(),
            convexity: spec.potential.convexity(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lengths.len()
    }

    pub fn diameter(&self) -> f64 {
        math::sqrt(self.lengths.iter().map(|l| l * l).sum())
    }

    pub fn volume(&self) -> f64 {
        self.lengths.iter().product()
    }

    fn sorted_lengths(&self) -> Vec<f64> {
        BoxDomain::new(self.lengths.clone()).map(|d| d.sorted_lengths()).unwrap_or_default()
    }
}

/// Where a curve row came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Source {
    Numeric,
    Asymptotic(Regime),
}

/// Solver diagnostics carried by numeric rows.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Diagnostics {
    pub residual_g: f64,
    pub residual_1: f64,
    pub iters_g: usize,
    pub iters_1: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct GapRow {
    pub beta: f64,
    pub e_g: f64,
    pub mu_g: f64,
    pub e_1: f64,
    pub mu_1: f64,
    pub delta_e: f64,
    pub delta_mu: f64,
    pub source: Source,
    pub diagnostics: Option<Diagnostics>,
}

impl GapRow {
    fn new(beta: f64, [e_g, mu_g, e_1, mu_1]: [f64; 4], source: Source) -> Self {
        Self { beta, e_g, mu_g, e_1, mu_1, delta_e: e_1 - e_g, delta_mu: mu_1 - mu_g, source, diagnostics: None }
    }
}

/// Gaps over an increasing sequence of interaction strengths.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct GapCurve {
    pub problem: ProblemFingerprint,
    pub rows: Vec<GapRow>,
}

fn check_increasing(betas: &[f64]) -> Result<()> {
    if betas.windows(2).all(|w| w[0] < w[1]) && betas.iter().all(|b| b.is_finite()) {
        Ok(())
    } else {
        Err(Error::Unsorted)
    }
}

/// Assemble a curve from matched converged ground and excited solves.
pub fn build_gap_curve(
    problem: ProblemFingerprint,
    ground: &[SolveReport],
    excited: &[SolveReport],
    betas: &[f64],
) -> Result<GapCurve> {
    if ground.len() != betas.len() || excited.len() != betas.len() {
        return Err(Error::DimensionMismatch { expected: betas.len(), found: ground.len().min(excited.len()) });
    }
    check_increasing(betas)?;
    let mut rows = Vec::with_capacity(betas.len());
    for ((&beta, g), e) in betas.iter().zip(ground).zip(excited) {
        for r in [g, e] {
            if !r.converged() {
                return Err(Error::Data(format!("solve at beta={beta} did not converge")));
            }
            if !math::rel_eq(r.energy.beta, beta, 1e-14) && r.energy.beta != beta {
                return Err(Error::Data(format!("report for beta={} listed under beta={beta}", r.energy.beta)));
            }
        }
        let mut row = GapRow::new(
            beta,
            [g.energy.energy, g.energy.chemical_potential, e.energy.energy, e.energy.chemical_potential],
            Source::Numeric,
        );
        if !(row.delta_e > 0.0 && row.delta_mu > 0.0) {
            return Err(Error::Data(format!(
                "non-positive gap at beta={beta}: delta_E={:e}, delta_mu={:e}",
                row.delta_e, row.delta_mu
            )));
        }
        row.diagnostics = Some(Diagnostics {
            residual_g: g.residual,
            residual_1: e.residual,
            iters_g: g.iterations,
            iters_1: e.iterations,
        });
        rows.push(row);
    }
    Ok(GapCurve { problem, rows })
}

impl GapCurve {
    /// A curve evaluated from closed-form levels.
    pub fn asymptotic(
        problem: ProblemFingerprint,
        betas: &[f64],
        levels: impl Fn(f64) -> Result<Levels>,
    ) -> Result<Self> {
        check_increasing(betas)?;
        let rows = betas
            .iter()
            .map(|&b| {
                let l = levels(b)?;
                Ok(GapRow::new(
                    b,
                    [l.e_g.value, l.mu_g.value, l.e_1.value, l.mu_1.value],
                    Source::Asymptotic(l.e_1.regime),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { problem, rows })
    }

    pub fn betas(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.beta).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum BoundFamily {
    DirichletNondegenerate,
    DirichletDegenerate2d,
    WholeSpaceNondegenerate,
    WholeSpaceDegenerate,
    Periodic,
    Neumann,
}

/// The `β`-dependent Dirichlet bound: constant up to a breakpoint, then
/// `coeff * sqrt(β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PiecewiseBound {
    pub floor: f64,
    pub breakpoint: f64,
    pub coeff: f64,
}

impl PiecewiseBound {
    pub fn at(&self, beta: f64) -> f64 {
        if beta <= self.breakpoint {
            self.floor
        } else {
            self.coeff * math::sqrt(beta)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case", tag = "kind"))]
pub enum Bound {
    /// Lower bounds on the infimum over `β`, optionally with stronger
    /// `β`-dependent bounds.
    Infimum {
        delta_e: f64,
        delta_mu: f64,
        stronger: Option<(PiecewiseBound, PiecewiseBound)>,
    },
    /// `δ(β) >= γ_v - Cβ` for small `β` with unspecified `C > 0`, and decay to
    /// zero as `β → ∞`.
    WeakLinear {
        gamma_v: f64,
    },
    NotApplicable {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ConjectureBounds {
    pub family: Option<BoundFamily>,
    pub bound: Bound,
    pub diameter: f64,
    pub volume: f64,
    pub gamma_v: Option<f64>,
}

fn not_applicable(family: Option<BoundFamily>, p: &ProblemFingerprint, reason: &str) -> ConjectureBounds {
    ConjectureBounds {
        family,
        bound: Bound::NotApplicable { reason: String::from(reason) },
        diameter: p.diameter(),
        volume: p.volume(),
        gamma_v: None,
    }
}

/// Conjectured lower bounds for a problem class.
pub fn conjecture_bounds(problem: &ProblemFingerprint) -> ConjectureBounds {
    let d = problem.diameter();
    let vol = problem.volume();
    let d2 = d * d;
    let pi2 = PI * PI;
    let degenerate = problem.degeneracy == Degeneracy::Degenerate;
    let family = match (problem.bc, degenerate) {
        (BoundaryCondition::Dirichlet, false) => BoundFamily::DirichletNondegenerate,
        (BoundaryCondition::Dirichlet, true) => BoundFamily::DirichletDegenerate2d,
        (BoundaryCondition::TruncatedWholeSpace, false) => BoundFamily::WholeSpaceNondegenerate,
        (BoundaryCondition::TruncatedWholeSpace, true) => BoundFamily::WholeSpaceDegenerate,
        (BoundaryCondition::Periodic, _) => BoundFamily::Periodic,
        (BoundaryCondition::Neumann, _) => BoundFamily::Neumann,
    };
    let gamma_v = match problem.convexity {
        Convexity::Convex { gamma_v } => gamma_v,
        Convexity::Nonconvex => {
            return not_applicable(
                Some(family),
                problem,
                "the conjecture is not valid for non-convex trapping potentials",
            )
        }
        Convexity::Unknown => {
            return not_applicable(Some(family), problem, "convexity of the potential was not declared")
        }
    };
    let infimum = |e: f64, m: f64| Bound::Infimum { delta_e: e, delta_mu: m, stronger: None };
    let bound = match family {
        BoundFamily::DirichletNondegenerate => {
            let floor = 1.5 * pi2 / d2;
            let pi4 = pi2 * pi2;
            let denom = d * math::sqrt(vol);
            Bound::Infimum {
                delta_e: floor,
                delta_mu: floor,
                stronger: Some((
                    PiecewiseBound { floor, breakpoint: 81.0 * pi4 * vol / (64.0 * d2), coeff: 4.0 / (3.0 * denom) },
                    PiecewiseBound { floor, breakpoint: 9.0 * pi4 * vol / (16.0 * d2), coeff: 2.0 / denom },
                )),
            }
        }
        BoundFamily::DirichletDegenerate2d if problem.dim() == 2 => infimum(0.5 * pi2 / d2, 0.375 * pi2 / d2),
        BoundFamily::DirichletDegenerate2d => {
            return not_applicable(Some(family), problem, "no conjecture for degenerate Dirichlet problems outside 2D")
        }
        BoundFamily::WholeSpaceNondegenerate | BoundFamily::WholeSpaceDegenerate if gamma_v <= 0.0 => {
            return not_applicable(Some(family), problem, "whole-space bounds need a positive convexity modulus")
        }
        BoundFamily::WholeSpaceNondegenerate => infimum(0.5 * SQRT_2 * gamma_v, 0.5 * SQRT_2 * gamma_v),
        BoundFamily::WholeSpaceDegenerate => Bound::WeakLinear { gamma_v },
        BoundFamily::Periodic => infimum(2.0 * pi2 / d2, 2.0 * pi2 / d2),
        BoundFamily::Neumann => infimum(0.5 * pi2 / d2, 0.5 * pi2 / d2),
    };
    ConjectureBounds {
        family: Some(family),
        bound,
        diameter: d,
        volume: vol,
        gamma_v: matches!(family, BoundFamily::WholeSpaceNondegenerate | BoundFamily::WholeSpaceDegenerate)
            .then_some(gamma_v),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    /// Every step within the tolerance.
    Constant,
    Neither,
}

/// Classify a sequence by strict finite differences.
pub fn monotonicity(values: &[f64], tol: f64) -> Monotonicity {
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    if diffs.iter().all(|d| math::abs(*d) <= tol) {
        Monotonicity::Constant
    } else if diffs.iter().all(|d| *d > tol) {
        Monotonicity::Increasing
    } else if diffs.iter().all(|d| *d < -tol) {
        Monotonicity::Decreasing
    } else {
        Monotonicity::Neither
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum GapKind {
    Energy,
    ChemicalPotential,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Violation {
    pub beta: f64,
    pub gap: GapKind,
    /// How far the gap falls below the bound.
    pub magnitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Margin {
    pub beta: f64,
    pub delta_e: f64,
    pub delta_mu: f64,
}

/// Result of the weak-regime linear check for degenerate whole-space
/// problems.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct WeakLinearCheck {
    /// Smallest `C >= 0` with `δ(β) >= γ_v - Cβ` on the sampled weak window.
    pub c_e: f64,
    pub c_mu: f64,
    /// `δ(0) >= γ_v` within tolerance (when `β = 0` was sampled).
    pub holds_at_zero: bool,
    /// Both gaps decrease over the strong-regime tail.
    pub decaying: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ConjectureReport {
    pub applicable: bool,
    pub note: String,
    /// Minimum over the sampled `β` (not the true infimum).
    pub min_delta_e: (f64, f64),
    pub min_delta_mu: (f64, f64),
    pub margins: Vec<Margin>,
    pub violations: Vec<Violation>,
    /// Violations of the stronger `β`-dependent bound, when one exists.
    pub stronger_violations: Vec<Violation>,
    pub weak_linear: Option<WeakLinearCheck>,
    pub monotonicity_e: Monotonicity,
    pub monotonicity_mu: Monotonicity,
    pub tolerance: f64,
}

impl ConjectureReport {
    pub fn holds(&self) -> bool {
        self.applicable && self.violations.is_empty() && self.weak_linear.map_or(true, |w| w.holds_at_zero)
    }
}

fn violations(curve: &GapCurve, tol: f64, bound: impl Fn(f64) -> (f64, f64)) -> Vec<Violation> {
    let mut out = Vec::new();
    for r in &curve.rows {
        let (be, bm) = bound(r.beta);
        if r.delta_e < be - tol {
            out.push(Violation { beta: r.beta, gap: GapKind::Energy, magnitude: be - r.delta_e });
        }
        if r.delta_mu < bm - tol {
            out.push(Violation { beta: r.beta, gap: GapKind::ChemicalPotential, magnitude: bm - r.delta_mu });
        }
    }
    out
}

/// Compare a curve against its conjectured bounds with slack `tol`.
pub fn check_conjecture(curve: &GapCurve, bounds: &ConjectureBounds, tol: f64) -> Result<ConjectureReport> {
    if curve.rows.is_empty() {
        return Err(Error::Data(String::from("empty gap curve")));
    }
    let argmin = |f: fn(&GapRow) -> f64| {
        curve.rows.iter().map(|r| (r.beta, f(r))).fold((f64::NAN, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
    };
    let de: Vec<f64> = curve.rows.iter().map(|r| r.delta_e).collect();
    let dm: Vec<f64> = curve.rows.iter().map(|r| r.delta_mu).collect();
    let mut report = ConjectureReport {
        applicable: true,
        note: String::new(),
        min_delta_e: argmin(|r| r.delta_e),
        min_delta_mu: argmin(|r| r.delta_mu),
        margins: Vec::new(),
        violations: Vec::new(),
        stronger_violations: Vec::new(),
        weak_linear: None,
        monotonicity_e: monotonicity(&de, MONOTONICITY_TOL),
        monotonicity_mu: monotonicity(&dm, MONOTONICITY_TOL),
        tolerance: tol,
    };
    match &bounds.bound {
        Bound::NotApplicable { reason } => {
            report.applicable = false;
            report.note = format!("bounds not applicable: {reason}");
        }
        Bound::Infimum { delta_e, delta_mu, stronger } => {
            report.margins = curve
                .rows
                .iter()
                .map(|r| Margin { beta: r.beta, delta_e: r.delta_e - delta_e, delta_mu: r.delta_mu - delta_mu })
                .collect();
            report.violations = violations(curve, tol, |_| (*delta_e, *delta_mu));
            if let Some((pe, pm)) = stronger {
                report.stronger_violations = violations(curve, tol, |b| (pe.at(b), pm.at(b)));
            }
            report.note = String::from("minimum over the sampled beta values");
        }
        Bound::WeakLinear { gamma_v } => {
            let g = *gamma_v;
            let weak: Vec<&GapRow> = curve.rows.iter().filter(|r| r.beta <= WEAK_MAX_BETA).collect();
            let slope = |f: fn(&GapRow) -> f64| {
                weak.iter().filter(|r| r.beta > 0.0).map(|r| (g - f(r)) / r.beta).fold(0.0f64, f64::max)
            };
            let at_zero = weak.iter().filter(|r| r.beta == 0.0).all(|r| r.delta_e >= g - tol && r.delta_mu >= g - tol);
            let tail: Vec<&GapRow> = curve.rows.iter().filter(|r| r.beta > WEAK_MAX_BETA).collect();
            let decaying = tail.len() >= 2
                && tail.windows(2).all(|w| w[1].delta_e < w[0].delta_e && w[1].delta_mu < w[0].delta_mu);
            report.weak_linear = Some(WeakLinearCheck {
                c_e: slope(|r| r.delta_e),
                c_mu: slope(|r| r.delta_mu),
                holds_at_zero: at_zero,
                decaying,
            });
            report.margins = curve
                .rows
                .iter()
                .map(|r| Margin { beta: r.beta, delta_e: r.delta_e - g, delta_mu: r.delta_mu - g })
                .collect();
            report.note = String::from("weak-regime linear bound with fitted constants; limit-zero trend reported");
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ComparisonStatus {
    Available,
    /// Only the leading logarithmic term is known; compare slopes instead.
    LeadingOrderOnly,
    Unavailable,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ComparisonRow {
    pub beta: f64,
    pub numeric: (f64, f64),
    pub asymptotic: Option<Gaps>,
    /// `(numeric - asymptotic) / asymptotic` for `δ_E` and `δ_μ`.
    pub rel_diff: Option<(f64, f64)>,
    pub status: ComparisonStatus,
}

/// Least-squares fit `δ ≈ a + s ln β`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct LogSlopeFit {
    pub window: (f64, f64),
    pub points: usize,
    pub slope_e: f64,
    pub slope_mu: f64,
    /// Coefficient of `ln β` in the leading term.
    pub expected: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    pub log_slope: Option<LogSlopeFit>,
}

enum Family {
    DirichletBox { lengths: Vec<f64>, degenerate: bool },
    Harmonic { gammas: Vec<f64>, degenerate: bool },
    Periodic { lengths: Vec<f64> },
    Neumann { lengths: Vec<f64>, degenerate: bool },
}

fn family(p: &ProblemFingerprint) -> Option<Family> {
    let degenerate = p.degeneracy == Degeneracy::Degenerate;
    let lengths = p.sorted_lengths();
    match (p.bc, &p.potential) {
        (BoundaryCondition::Dirichlet, PotentialSpec::Zero) => Some(Family::DirichletBox { lengths, degenerate }),
        (BoundaryCondition::Periodic, PotentialSpec::Zero) => Some(Family::Periodic { lengths }),
        (BoundaryCondition::Neumann, PotentialSpec::Zero) => Some(Family::Neumann { lengths, degenerate }),
        (BoundaryCondition::TruncatedWholeSpace, PotentialSpec::Harmonic { gammas }) => {
            Some(Family::Harmonic { gammas: gammas.clone(), degenerate })
        }
        _ => None,
    }
}

/// The applicable gap formula at `β`, and whether it is leading-order only.
fn asymptotic_gaps(f: &Family, beta: f64) -> Result<(Gaps, bool)> {
    let weak = beta <= WEAK_MAX_BETA;
    Ok(match f {
        Family::DirichletBox { lengths, degenerate: false } if weak => {
            (asymptotics::box_gap_weak_secondorder(lengths, beta)?, false)
        }
        Family::DirichletBox { lengths, degenerate: false } => (asymptotics::box_strong(lengths, beta)?.gaps(), false),
        Family::DirichletBox { lengths, degenerate: true } if weak => {
            (asymptotics::box_weak(lengths, beta, true)?.gaps(), false)
        }
        Family::DirichletBox { lengths, degenerate: true } if lengths.len() == 2 => {
            (asymptotics::box_degenerate_strong_2d(lengths[0], beta)?.gaps, true)
        }
        Family::Harmonic { gammas, degenerate } if weak => {
            (asymptotics::harmonic_weak(gammas, beta, *degenerate)?.gaps(), false)
        }
        Family::Harmonic { gammas, degenerate: false } => {
            (asymptotics::harmonic_strong(gammas, beta, true)?.gaps, false)
        }
        Family::Harmonic { gammas, degenerate: true } if gammas.len() == 2 => {
            (asymptotics::harmonic_degenerate_strong_2d(gammas[0], beta)?.gaps, false)
        }
        Family::Periodic { lengths } => (asymptotics::periodic_exact(lengths, beta)?.gaps, false),
        Family::Neumann { lengths, degenerate } => {
            let regime = if weak { RegimeChoice::Weak } else { RegimeChoice::Strong };
            let x = asymptotics::neumann_asym(lengths, beta, *degenerate, regime)?;
            (x.gaps, x.gaps.delta_e.regime == Regime::StrongLogarithmic)
        }
        _ => return Err(Error::Unavailable(String::from("no strong-interaction formula for this class"))),
    })
}

/// Coefficient of `ln β` for classes whose strong-regime gap is logarithmic.
fn log_coefficient(f: &Family) -> Option<f64> {
    match f {
        Family::DirichletBox { lengths, degenerate: true } | Family::Neumann { lengths, degenerate: true }
            if lengths.len() == 2 =>
        {
            Some(PI / (2.0 * lengths[0] * lengths[0]))
        }
        _ => None,
    }
}

fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Relative differences between numeric gaps and the applicable formula,
/// plus a `ln β` slope fit for logarithmic regimes. `window` restricts the
/// fit; by default the upper half of the strong-regime samples is used.
pub fn compare_numeric_asymptotic(curve: &GapCurve, window: Option<(f64, f64)>) -> Comparison {
    let fam = family(&curve.problem);
    let rows = curve
        .rows
        .iter()
        .map(|r| {
            let numeric = (r.delta_e, r.delta_mu);
            match fam.as_ref().map(|f| asymptotic_gaps(f, r.beta)) {
                Some(Ok((g, leading_only))) => ComparisonRow {
                    beta: r.beta,
                    numeric,
                    asymptotic: Some(g),
                    rel_diff: Some((
                        (r.delta_e - g.delta_e.value) / g.delta_e.value,
                        (r.delta_mu - g.delta_mu.value) / g.delta_mu.value,
                    )),
                    status: if leading_only { ComparisonStatus::LeadingOrderOnly } else { ComparisonStatus::Available },
                },
                _ => ComparisonRow {
                    beta: r.beta,
                    numeric,
                    asymptotic: None,
                    rel_diff: None,
                    status: ComparisonStatus::Unavailable,
                },
            }
        })
        .collect();
    let log_slope = fam.as_ref().and_then(log_coefficient).and_then(|expected| {
        let strong: Vec<&GapRow> = curve.rows.iter().filter(|r| r.beta > WEAK_MAX_BETA).collect();
        let picked: Vec<&GapRow> = match window {
            Some((lo, hi)) => strong.into_iter().filter(|r| r.beta >= lo && r.beta <= hi).collect(),
            None => {
                let skip = strong.len() / 2;
                strong.into_iter().skip(skip).collect()
            }
        };
        if picked.len() < 2 {
            return None;
        }
        let x: Vec<f64> = picked.iter().map(|r| math::ln(r.beta)).collect();
        let ye: Vec<f64> = picked.iter().map(|r| r.delta_e).collect();
        let ym: Vec<f64> = picked.iter().map(|r| r.delta_mu).collect();
        Some(LogSlopeFit {
            window: (picked[0].beta, picked[picked.len() - 1].beta),
            points: picked.len(),
            slope_e: ls_slope(&x, &ye),
            slope_mu: ls_slope(&x, &ym),
            expected,
        })
    });
    Comparison { rows, log_slope }
}
