//! Plot-data recipes for the gap figures. Grids and `β` windows are pinned
//! here; bump [`RECIPE_VERSION`] when any of them changes.

use std::path::Path;

use gpegap_core::asymptotics::{self, Gaps, RegimeChoice};
use gpegap_core::gaps::{conjecture_bounds, Bound};
use log::info;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{write_series, Series};
use crate::sweep::{PointStatus, Sweep};

pub const RECIPE_VERSION: u32 = 1;

pub const RECIPES: [&str; 6] = [
    "box-1d-gaps",
    "harmonic-1d-gaps",
    "box-2d-degenerate-gaps",
    "neumann-1d-gaps",
    "periodic-gaps",
    "nonconvex-counterexamples",
];

/// Weak-interaction series stop here; strong ones start at 1.
const WEAK_WINDOW_END: f64 = 10.0;
const STRONG_WINDOW_START: f64 = 1.0;

fn recipe_config(base: &RunConfig, text: &str, betas: &[f64]) -> CliResult<RunConfig> {
    let mut cfg = RunConfig::from_text(text)?;
    cfg.beta = Some(betas.to_vec());
    cfg.tau = base.tau;
    cfg.stop_tol = base.stop_tol;
    cfg.residual_tol = base.residual_tol;
    cfg.max_iter = base.max_iter;
    cfg.jobs = base.jobs;
    Ok(cfg)
}

fn numeric(name: &str, description: &str, sweep: &Sweep) -> Series {
    Series {
        name: name.to_owned(),
        description: format!("{description} ({} branch)", sweep.mode.name()),
        points: sweep
            .points
            .iter()
            .filter(|p| p.status == PointStatus::Ok)
            .filter_map(|p| {
                let (g, e) = (p.ground.as_ref()?, p.excited.as_ref()?);
                Some((
                    p.beta,
                    e.energy.energy - g.energy.energy,
                    e.energy.chemical_potential - g.energy.chemical_potential,
                ))
            })
            .collect(),
    }
}

fn formula(
    name: &str,
    description: &str,
    betas: impl IntoIterator<Item = f64>,
    f: impl Fn(f64) -> gpegap_core::Result<Gaps>,
) -> CliResult<Series> {
    let points = betas
        .into_iter()
        .map(|b| f(b).map(|g| (b, g.delta_e.value, g.delta_mu.value)))
        .collect::<gpegap_core::Result<Vec<_>>>()?;
    Ok(Series { name: name.to_owned(), description: description.to_owned(), points })
}

fn bound(sweep: &Sweep, betas: &[f64]) -> CliResult<Series> {
    let b = conjecture_bounds(&sweep.fingerprint);
    match b.bound {
        Bound::Infimum { delta_e, delta_mu, .. } => Ok(Series {
            name: String::from("conjecture-bound"),
            description: String::from("conjectured lower bound on both gaps"),
            points: betas.iter().map(|&x| (x, delta_e, delta_mu)).collect(),
        }),
        other => Err(CliError::Other(anyhow::anyhow!("recipe expects an infimum bound, got {other:?}"))),
    }
}

fn weak(betas: &[f64]) -> impl Iterator<Item = f64> + '_ {
    betas.iter().copied().filter(|b| *b <= WEAK_WINDOW_END)
}

fn strong(betas: &[f64]) -> impl Iterator<Item = f64> + '_ {
    betas.iter().copied().filter(|b| *b >= STRONG_WINDOW_START)
}

/// Counts `(failed, total)` sweep points across a recipe.
type Tally = (usize, usize);

fn sweep_of(base: &RunConfig, text: &str, betas: &[f64], out: &Path, tally: &mut Tally) -> CliResult<Sweep> {
    let cfg = recipe_config(base, text, betas)?;
    let s = crate::commands::run_gap_sweep(&cfg, out)?;
    tally.0 += s.failed().len();
    tally.1 += s.points.len();
    Ok(s)
}

/// Run `recipe` and write its series under `out/<recipe>/`.
pub fn figure(recipe: &str, base: &RunConfig) -> CliResult<()> {
    let dir = base.out.join(recipe);
    let raw = dir.join("raw");
    let mut tally: Tally = (0, 0);
    let (title, series) = match recipe {
        "box-1d-gaps" => {
            let betas = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0];
            let l = [2.0];
            let s = sweep_of(base, "lengths = 2\nbc = dirichlet\nnodes = 512", &betas, &raw, &mut tally)?;
            (
                "Fundamental gaps, 1D box potential on (0, 2)",
                vec![
                    numeric("numeric", "gradient flow, n = 512", &s),
                    formula("weak-asym", "weak interaction, second order", weak(&betas), |b| {
                        asymptotics::box_gap_weak_secondorder(&l, b)
                    })?,
                    formula("strong-asym", "strong interaction", strong(&betas), |b| {
                        asymptotics::box_strong(&l, b).map(|x| x.gaps())
                    })?,
                    bound(&s, &betas)?,
                ],
            )
        }
        "harmonic-1d-gaps" => {
            let betas = [0.0, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1000.0];
            let g = [1.0];
            let s = sweep_of(base, "gamma = 1\nnodes = 1024", &betas, &raw, &mut tally)?;
            (
                "Fundamental gaps, 1D harmonic trap with gamma = 1",
                vec![
                    numeric("numeric", "gradient flow on the truncated line, n = 1024", &s),
                    formula("weak-asym", "weak interaction, first order", weak(&betas), |b| {
                        asymptotics::harmonic_weak(&g, b, false).map(|x| x.gaps())
                    })?,
                    formula("strong-asym", "strong interaction with the next correction", strong(&betas), |b| {
                        asymptotics::harmonic_strong(&g, b, true).map(|x| x.gaps)
                    })?,
                    bound(&s, &betas)?,
                ],
            )
        }
        "box-2d-degenerate-gaps" => {
            let betas = [0.0, 1.0, 10.0, 50.0, 100.0, 200.0, 500.0];
            let l = [1.0, 1.0];
            let s = sweep_of(base, "lengths = 1 1\nbc = dirichlet\nnodes = 64", &betas, &raw, &mut tally)?;
            (
                "Fundamental gaps, unit square box (degenerate, vortex branch)",
                vec![
                    numeric("numeric", "gradient flow, 64 x 64", &s),
                    formula("weak-asym", "weak interaction, first order", weak(&betas), |b| {
                        asymptotics::box_weak(&l, b, true).map(|x| x.gaps())
                    })?,
                    formula("strong-asym", "leading logarithmic term", strong(&betas), |b| {
                        asymptotics::box_degenerate_strong_2d(1.0, b).map(|x| x.gaps)
                    })?,
                    bound(&s, &betas)?,
                ],
            )
        }
        "neumann-1d-gaps" => {
            let betas = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0];
            let l = [2.0];
            let s = sweep_of(base, "lengths = 2\nbc = neumann\nnodes = 513", &betas, &raw, &mut tally)?;
            let neumann = |r| move |b| asymptotics::neumann_asym(&l, b, false, r).map(|x| x.gaps);
            (
                "Fundamental gaps, 1D Neumann box on (0, 2)",
                vec![
                    numeric("numeric", "gradient flow, n = 513", &s),
                    formula("weak-asym", "weak interaction, first order", weak(&betas), neumann(RegimeChoice::Weak))?,
                    formula("strong-asym", "strong interaction", strong(&betas), neumann(RegimeChoice::Strong))?,
                    bound(&s, &betas)?,
                ],
            )
        }
        "periodic-gaps" => {
            let betas = [0.0, 1.0, 10.0, 100.0, 1000.0];
            let s = sweep_of(base, "lengths = 1\nbc = periodic\nnodes = 1024", &betas, &raw, &mut tally)?;
            (
                "Fundamental gaps, periodic unit interval",
                vec![
                    numeric("numeric", "gradient flow, n = 1024", &s),
                    formula("exact", "exact for every beta", betas, |b| {
                        asymptotics::periodic_exact(&[1.0], b).map(|x| x.gaps)
                    })?,
                    bound(&s, &betas)?,
                ],
            )
        }
        "nonconvex-counterexamples" => {
            let betas = [0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0];
            let q = sweep_of(
                base,
                "lengths = 2\nbc = dirichlet\npotential = negative-quadratic\nnodes = 512",
                &betas,
                &raw.join("negative-quadratic"),
                &mut tally,
            )?;
            let o = sweep_of(
                base,
                "lengths = 2\nbc = dirichlet\npotential = oscillating\nnodes = 512",
                &betas,
                &raw.join("oscillating"),
                &mut tally,
            )?;
            let box_bound = 1.5 * std::f64::consts::PI.powi(2) / 4.0;
            (
                "Fundamental gaps for non-convex potentials on (0, 2)",
                vec![
                    numeric("numeric-negative-quadratic", "V = -10 x^2, n = 512", &q),
                    numeric("numeric-oscillating", "V = 10 sin(10 (x - 1)), n = 512", &o),
                    Series {
                        name: String::from("convex-bound"),
                        description: String::from("3 pi^2 / (2 D^2), the bound for convex potentials"),
                        points: betas.iter().map(|&b| (b, box_bound, box_bound)).collect(),
                    },
                ],
            )
        }
        other => {
            return Err(CliError::Config(format!("unknown figure recipe '{other}' (one of: {})", RECIPES.join(", "))))
        }
    };
    write_series(&dir, &format!("{title} [recipe v{RECIPE_VERSION}]"), &series)?;
    info!("wrote {} series to {}", series.len(), dir.display());
    println!("{}", dir.join("manifest.txt").display());
    match tally {
        (0, _) => Ok(()),
        (failed, total) => Err(CliError::PartialSweep { failed, total }),
    }
}
