//! Turning a [`RunConfig`] into a discretized problem.

use std::fs;

use gpegap_core::domain::{classify, BoxDomain, Degeneracy, NonconvexDemo};
use gpegap_core::{BoundaryCondition, ExcitedMode, PotentialSpec, ProblemSpec};

use crate::config::{ExcitedChoice, PotentialChoice, RunConfig};
use crate::error::{CliError, CliResult};

/// Default stored nodes per axis by dimension.
pub fn default_nodes(dim: usize) -> usize {
    match dim {
        1 => 2048,
        2 => 96,
        _ => 32,
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn gammas(cfg: &RunConfig, what: &str) -> CliResult<Vec<f64>> {
    cfg.gamma.clone().ok_or_else(|| config_err(format!("{what} needs 'gamma'")))
}

pub fn potential_spec(cfg: &RunConfig) -> CliResult<PotentialSpec> {
    let p = match cfg.potential_choice() {
        PotentialChoice::Zero => PotentialSpec::Zero,
        PotentialChoice::Harmonic => PotentialSpec::Harmonic { gammas: gammas(cfg, "a harmonic potential")? },
        PotentialChoice::HarmonicCosine { v0, k } => match gammas(cfg, "harmonic-cosine")?.as_slice() {
            [gamma] => PotentialSpec::HarmonicPlusCosine { gamma: *gamma, v0, k },
            _ => return Err(config_err("harmonic-cosine is one-dimensional; give a single gamma")),
        },
        PotentialChoice::ShiftedQuadratic { v0, center } => PotentialSpec::ShiftedQuadratic { v0, center },
        PotentialChoice::NegativeQuadratic => PotentialSpec::Nonconvex { demo: NonconvexDemo::NegativeQuadratic },
        PotentialChoice::Oscillating => PotentialSpec::Nonconvex { demo: NonconvexDemo::Oscillating },
        PotentialChoice::File(path) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| config_err(format!("cannot read potential file {}: {e}", path.display())))?;
            PotentialSpec::tabulated_from_text(&text)?
        }
    };
    p.validate()?;
    Ok(p)
}

fn nodes_for(cfg: &RunConfig, dim: usize) -> CliResult<Vec<usize>> {
    match cfg.nodes.as_deref() {
        None => Ok(vec![default_nodes(dim); dim]),
        Some([n]) => Ok(vec![*n; dim]),
        Some(n) if n.len() == dim => Ok(n.to_vec()),
        Some(n) => Err(config_err(format!("{} node counts given for a {dim}D problem", n.len()))),
    }
}

/// The problem at `beta`. Truncated whole-space boxes are sized for
/// `beta_max` so that every point of a sweep shares one grid.
pub fn build_spec(cfg: &RunConfig, beta: f64, beta_max: f64) -> CliResult<ProblemSpec> {
    let potential = potential_spec(cfg)?;
    let bc = cfg.boundary();
    let mut spec = match (&cfg.lengths, bc) {
        (None, BoundaryCondition::TruncatedWholeSpace) => {
            let dim = potential
                .dim()
                .ok_or_else(|| config_err("whole-space problems need 'lengths' or a trapping potential"))?;
            ProblemSpec::whole_space(potential, nodes_for(cfg, dim)?, beta, beta_max)?
        }
        (None, _) => return Err(config_err(format!("'lengths' is required for {} problems", bc.name()))),
        (Some(lengths), _) => {
            let domain = BoxDomain::new(lengths.clone())?;
            if let Some(d) = potential.dim().filter(|d| *d != domain.dim()) {
                return Err(config_err(format!("potential is {d}D but the box is {}D", domain.dim())));
            }
            let nodes = nodes_for(cfg, domain.dim())?;
            ProblemSpec::new(domain, nodes, bc, potential, beta)
        }
    };
    spec.degeneracy =
        Some(cfg.degeneracy.unwrap_or_else(|| classify(&spec.domain, spec.bc, &spec.potential, cfg.degeneracy_tol)));
    spec.validate()?;
    spec.grid()?;
    Ok(spec)
}

/// Resolve the excited branch for a problem.
pub fn resolve_mode(choice: ExcitedChoice, spec: &ProblemSpec) -> CliResult<ExcitedMode> {
    match choice {
        ExcitedChoice::Mode(m) => Ok(m),
        ExcitedChoice::Auto => {
            if spec.degeneracy() == Degeneracy::Degenerate {
                return Ok(ExcitedMode::Vortex);
            }
            if mirror_symmetric(spec)? {
                if !spec.domain.is_sorted() {
                    return Err(config_err("list lengths longest first so that x1 is the long axis"));
                }
                return Ok(ExcitedMode::OddInX1);
            }
            if spec.dim() == 1 && spec.bc != BoundaryCondition::Periodic {
                return Ok(ExcitedMode::NodalContinuation);
            }
            Err(config_err("no symmetry sector isolates the first excited state; pass --excited explicitly"))
        }
    }
}

/// Whether the potential is even under `x1 -> 2 c1 - x1` on the grid.
pub fn mirror_symmetric(spec: &ProblemSpec) -> CliResult<bool> {
    let grid = spec.grid()?;
    let v = spec.potential_values(&grid)?;
    let scale = v.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    Ok((0..v.len()).all(|i| (v[i] - v[grid.mirror_x1(i)]).abs() <= 1e-12 * scale))
}
