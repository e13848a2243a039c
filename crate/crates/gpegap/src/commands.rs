//! The four subcommands.

use std::path::Path;
use std::time::Instant;

use gpegap_core::asymptotics::{self, AsymptoticEstimate, Expansion, Levels, RegimeChoice, WEAK_MAX_BETA};
use gpegap_core::domain::{classify, BoxDomain, Degeneracy};
use gpegap_core::gaps::{
    check_conjecture, compare_numeric_asymptotic, conjecture_bounds, Comparison, ConjectureBounds, ConjectureReport,
    ProblemFingerprint, CONJECTURE_TOL,
};
use gpegap_core::solver::winding_number;
use gpegap_core::{
    initial_guess, solve_excited, solve_ground, BoundaryCondition, EnergyBreakdown, Error, ExcitedMode, PotentialSpec,
    ProblemSpec, SolveStatus, WaveField,
};
use log::info;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{ExcitedChoice, RegimeArg, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{fmt_f64, write_field, write_gap_csv, write_json};
use crate::problem::{build_spec, resolve_mode};
use crate::sweep;

#[derive(Debug, Serialize)]
struct ProblemSummary<'a> {
    lengths: &'a [f64],
    nodes: &'a [usize],
    bc: BoundaryCondition,
    potential: &'a PotentialSpec,
    beta: f64,
    degeneracy: Degeneracy,
}

impl<'a> ProblemSummary<'a> {
    fn new(spec: &'a ProblemSpec) -> Self {
        Self {
            lengths: spec.domain.lengths(),
            nodes: &spec.nodes,
            bc: spec.bc,
            potential: &spec.potential,
            beta: spec.beta,
            degeneracy: spec.degeneracy(),
        }
    }
}

#[derive(Debug, Serialize)]
struct SolveSummary<'a> {
    format: &'static str,
    problem: ProblemSummary<'a>,
    mode: ExcitedMode,
    status: SolveStatus,
    energy: EnergyBreakdown,
    residual: f64,
    iterations: usize,
    tau: f64,
    /// Energy never rose by more than round-off over the recorded steps.
    energy_nonincreasing: bool,
    winding: Option<i32>,
    winding_constant: Option<bool>,
}

fn perturbed_guess(spec: &ProblemSpec, mode: ExcitedMode, seed: u64, amplitude: f64) -> CliResult<WaveField> {
    let base = initial_guess(spec, mode)?;
    let scale = amplitude * base.max_abs();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jitter = |v: &[f64]| v.iter().map(|x| x + scale * rng.gen_range(-1.0..=1.0)).collect::<Vec<f64>>();
    let re = jitter(&base.re);
    Ok(match &base.im {
        Some(im) => WaveField::complex(re, jitter(im))?,
        None => WaveField::real(re),
    })
}

fn single_beta(cfg: &RunConfig) -> CliResult<f64> {
    match cfg.beta.as_deref() {
        None => Ok(0.0),
        Some([b]) => Ok(*b),
        Some(_) => Err(CliError::Config(String::from("solve takes a single beta"))),
    }
}

pub fn solve(cfg: &RunConfig) -> CliResult<()> {
    let beta = single_beta(cfg)?;
    let spec = build_spec(cfg, beta, beta)?;
    let mode = match cfg.excited {
        None => ExcitedMode::None,
        Some(choice) => resolve_mode(choice, &spec)?,
    };
    let mut scfg = cfg.solver_config().with_mode(mode);
    if cfg.perturb > 0.0 {
        scfg.warm_start = Some(perturbed_guess(&spec, mode, cfg.seed, cfg.perturb)?);
    }
    let started = Instant::now();
    let outcome = match mode {
        ExcitedMode::None => solve_ground(&spec, &scfg),
        _ => solve_excited(&spec, &scfg),
    };
    let report = match outcome {
        Ok(r) => r,
        Err(Error::NotConverged { report, .. }) => *report,
        Err(e) => return Err(e.into()),
    };
    info!("solve ({}) took {:.2?}", mode.name(), started.elapsed());

    let grid = spec.grid()?;
    let winding = (mode == ExcitedMode::Vortex && grid.dim() >= 2).then(|| winding_number(&report.field, &grid));
    let h = &report.energy_history;
    let summary = SolveSummary {
        format: "gpegap-solve-report-1",
        problem: ProblemSummary::new(&spec),
        mode,
        status: report.status,
        energy: report.energy,
        residual: report.residual,
        iterations: report.iterations,
        tau: report.tau,
        energy_nonincreasing: h.windows(2).all(|w| w[1] <= w[0] + 1e-12 * w[0].abs().max(1.0)),
        winding: winding.flatten(),
        winding_constant: (!report.winding_history.is_empty())
            .then(|| report.winding_history.windows(2).all(|w| w[0] == w[1])),
    };
    write_json(&cfg.out.join("report.json"), &summary)?;
    if cfg.field {
        write_field(&cfg.out.join("field.bin"), &report.field, &grid, &spec)?;
    }

    println!("mode      {}", mode.name());
    println!("status    {}", if report.converged() { "converged" } else { "not-converged" });
    println!("E         {}", fmt_f64(report.energy.energy));
    println!("mu        {}", fmt_f64(report.energy.chemical_potential));
    println!("residual  {:e}", report.residual);
    println!("iters     {}", report.iterations);
    if let Some(w) = summary.winding {
        println!("winding   {w}");
    }
    if report.converged() {
        Ok(())
    } else {
        Err(CliError::Convergence(format!(
            "{} iterations, eigen-residual {:e}; report written to {}",
            report.iterations,
            report.residual,
            cfg.out.join("report.json").display()
        )))
    }
}

#[derive(Debug, Serialize)]
struct ConjectureFile<'a> {
    format: &'static str,
    problem: &'a ProblemFingerprint,
    mode: ExcitedMode,
    bounds: ConjectureBounds,
    report: Option<ConjectureReport>,
    comparison: Option<Comparison>,
    failed_betas: Vec<f64>,
}

fn check_betas(betas: &[f64]) -> CliResult<()> {
    if betas.is_empty() {
        return Err(CliError::Config(String::from("the beta list is empty")));
    }
    if betas.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
        return Err(CliError::Config(String::from("beta values must be finite and >= 0")));
    }
    if betas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Config(String::from("beta values must be strictly ascending")));
    }
    Ok(())
}

/// Run a sweep and write `gaps.csv` and `conjecture.json` into `out`.
pub fn run_gap_sweep(cfg: &RunConfig, out: &Path) -> CliResult<sweep::Sweep> {
    let betas = cfg.betas();
    check_betas(&betas)?;
    let beta_max = *betas.last().expect("nonempty");
    let spec = build_spec(cfg, betas[0], beta_max)?;
    let mode = resolve_mode(cfg.excited.unwrap_or(ExcitedChoice::Auto), &spec)?;
    if mode == ExcitedMode::None {
        return Err(CliError::Config(String::from("gap-sweep needs an excited mode")));
    }
    let sweep = sweep::run(&spec, &betas, &cfg.solver_config(), mode, cfg.jobs)?;
    write_gap_csv(&out.join("gaps.csv"), &sweep.points)?;

    let curve = sweep.curve()?;
    let bounds = conjecture_bounds(&sweep.fingerprint);
    let report = curve.as_ref().map(|c| check_conjecture(c, &bounds, CONJECTURE_TOL)).transpose()?;
    let file = ConjectureFile {
        format: "gpegap-conjecture-1",
        problem: &sweep.fingerprint,
        mode,
        bounds,
        comparison: curve.as_ref().map(|c| compare_numeric_asymptotic(c, None)),
        report,
        failed_betas: sweep.failed(),
    };
    write_json(&out.join("conjecture.json"), &file)?;
    if let Some(r) = &file.report {
        println!("excited branch   {}", mode.name());
        println!("min delta_E      {} at beta={}", fmt_f64(r.min_delta_e.1), r.min_delta_e.0);
        println!("min delta_mu     {} at beta={}", fmt_f64(r.min_delta_mu.1), r.min_delta_mu.0);
        println!(
            "conjecture       {}",
            if !r.applicable {
                "not applicable"
            } else if r.holds() {
                "holds on the sampled betas"
            } else {
                "violated"
            }
        );
    }
    Ok(sweep)
}

pub fn gap_sweep(cfg: &RunConfig) -> CliResult<()> {
    let sweep = run_gap_sweep(cfg, &cfg.out)?;
    let failed = sweep.failed().len();
    let total = sweep.points.len();
    match failed {
        0 => Ok(()),
        f if f == total => Err(CliError::Convergence(format!("all {total} sweep points failed"))),
        f => Err(CliError::PartialSweep { failed: f, total }),
    }
}

fn sorted(values: &[f64], descending: bool) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| if descending { b.total_cmp(a) } else { a.total_cmp(b) });
    v
}

fn expansion(levels: Levels) -> Expansion {
    Expansion { gaps: levels.gaps(), levels }
}

/// The closed-form values for one problem class at `beta`.
pub fn asym_expansion(class: &str, cfg: &RunConfig, beta: f64) -> CliResult<Expansion> {
    let regime = cfg.regime.unwrap_or(if beta <= WEAK_MAX_BETA { RegimeArg::Weak } else { RegimeArg::Strong });
    let need = |v: &Option<Vec<f64>>, key: &str| {
        v.clone().ok_or_else(|| CliError::Config(format!("asym {class} needs '{key}'")))
    };
    let unsupported = |what: &str| CliError::Config(format!("no {what} expansion for this {class} problem"));
    let x = match class {
        "box" | "neumann" => {
            let lengths = sorted(&need(&cfg.lengths, "lengths")?, true);
            let bc = if class == "box" { BoundaryCondition::Dirichlet } else { BoundaryCondition::Neumann };
            let deg = cfg.degeneracy.unwrap_or_else(|| {
                BoxDomain::new(lengths.clone())
                    .map(|d| classify(&d, bc, &PotentialSpec::Zero, cfg.degeneracy_tol))
                    .unwrap_or(Degeneracy::Nondegenerate)
            }) == Degeneracy::Degenerate;
            match (class, regime) {
                (_, RegimeArg::Exact) => return Err(unsupported("exact")),
                ("box", RegimeArg::Weak) => {
                    let mut x = expansion(asymptotics::box_weak(&lengths, beta, deg)?);
                    if cfg.higher_order && !deg {
                        x.gaps = asymptotics::box_gap_weak_secondorder(&lengths, beta)?;
                    }
                    x
                }
                ("box", RegimeArg::Strong) if deg => match lengths.as_slice() {
                    [l, _] => asymptotics::box_degenerate_strong_2d(*l, beta)?,
                    _ => return Err(unsupported("strong-interaction")),
                },
                ("box", RegimeArg::Strong) => expansion(asymptotics::box_strong(&lengths, beta)?),
                (_, r) => {
                    let choice = if r == RegimeArg::Weak { RegimeChoice::Weak } else { RegimeChoice::Strong };
                    asymptotics::neumann_asym(&lengths, beta, deg, choice)?
                }
            }
        }
        "harmonic" => {
            let gammas = sorted(&need(&cfg.gamma, "gamma")?, false);
            let deg = cfg.degeneracy.unwrap_or_else(|| {
                let p = PotentialSpec::Harmonic { gammas: gammas.clone() };
                let d = BoxDomain::new(vec![1.0; gammas.len()]);
                d.map(|d| classify(&d, BoundaryCondition::TruncatedWholeSpace, &p, cfg.degeneracy_tol))
                    .unwrap_or(Degeneracy::Nondegenerate)
            }) == Degeneracy::Degenerate;
            match regime {
                RegimeArg::Exact => return Err(unsupported("exact")),
                RegimeArg::Weak => expansion(asymptotics::harmonic_weak(&gammas, beta, deg)?),
                RegimeArg::Strong if deg => match gammas.as_slice() {
                    [g, _] => asymptotics::harmonic_degenerate_strong_2d(*g, beta)?,
                    _ => return Err(unsupported("strong-interaction")),
                },
                RegimeArg::Strong => asymptotics::harmonic_strong(&gammas, beta, cfg.higher_order)?,
            }
        }
        "periodic" => asymptotics::periodic_exact(&sorted(&need(&cfg.lengths, "lengths")?, true), beta)?,
        other => {
            return Err(CliError::Config(format!(
                "unsupported problem class '{other}' (box, harmonic, periodic, neumann)"
            )))
        }
    };
    Ok(x)
}

fn estimates(x: &Expansion) -> [(&'static str, AsymptoticEstimate); 6] {
    let l = &x.levels;
    [
        ("E_g", l.e_g),
        ("mu_g", l.mu_g),
        ("E_1", l.e_1),
        ("mu_1", l.mu_1),
        ("delta_E", x.gaps.delta_e),
        ("delta_mu", x.gaps.delta_mu),
    ]
}

pub fn asym(class: &str, cfg: &RunConfig) -> CliResult<()> {
    let betas = cfg.beta.clone().ok_or_else(|| CliError::Config(String::from("asym needs 'beta'")))?;
    let mut blocks = Vec::with_capacity(betas.len());
    for &beta in &betas {
        let x = asym_expansion(class, cfg, beta)?;
        let outside: Vec<&str> = estimates(&x).iter().filter(|(_, e)| e.is_extrapolated()).map(|(n, _)| *n).collect();
        if !outside.is_empty() && !cfg.force {
            return Err(CliError::Config(format!(
                "beta={beta} lies outside the regime of {}; pass --force to print extrapolated values",
                outside.join(", ")
            )));
        }
        blocks.push((beta, x));
    }
    println!("# class={class} quantity value regime note");
    for (beta, x) in blocks {
        println!("beta = {beta}");
        for (name, e) in estimates(&x) {
            println!("  {name:<9} {:>24}  {:<15} {}", fmt_f64(e.value), e.regime.name(), e.note());
        }
    }
    Ok(())
}
