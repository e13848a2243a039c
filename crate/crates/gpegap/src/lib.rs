//! Command-line driver for Gross-Pitaevskii ground states, first excited
//! states and their fundamental gaps.
//!
//! Every run is described by a [`config::RunConfig`]: a `key = value` file
//! given with `--config`, overridden by flags. `--print-config` prints the
//! resolved configuration instead of running, and that output can be fed back
//! through `--config` unchanged.
//!
//! Exit codes: 0 success, 2 configuration error, 3 convergence failure,
//! 4 partial sweep failure, 1 anything else.

pub mod commands;
pub mod config;
pub mod error;
pub mod figures;
pub mod output;
pub mod problem;
pub mod sweep;

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Command, RunConfig};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "gpegap", version, about = "Fundamental gaps of the Gross-Pitaevskii equation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Ground state, or the excited state selected by --excited.
    Solve(Common),
    /// Ground and excited states over a list of beta values, with gaps and
    /// conjecture margins.
    GapSweep(Common),
    /// Closed-form asymptotic values for box, harmonic, periodic or neumann.
    Asym {
        class: String,
        #[command(flatten)]
        common: Common,
    },
    /// Plot data for a named figure recipe.
    Figure {
        recipe: String,
        #[command(flatten)]
        common: Common,
    },
}

/// Flags shared by every subcommand; each maps onto a config key.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Config file with `key = value` lines.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Print the resolved configuration and exit.
    #[arg(long)]
    pub print_config: bool,
    #[arg(long, num_args = 1..=3)]
    pub lengths: Option<Vec<String>>,
    /// Trap frequencies (harmonic potentials).
    #[arg(long, num_args = 1..=3)]
    pub gamma: Option<Vec<String>>,
    /// dirichlet, neumann, periodic or whole-space.
    #[arg(long)]
    pub bc: Option<String>,
    /// zero, harmonic, "harmonic-cosine V0 K", "shifted-quadratic V0 C..",
    /// negative-quadratic, oscillating or "file PATH".
    #[arg(long, allow_hyphen_values = true)]
    pub potential: Option<String>,
    #[arg(long, num_args = 1..)]
    pub beta: Option<Vec<String>>,
    /// MIN MAX COUNT, log-spaced with beta = 0 prepended.
    #[arg(long, num_args = 3)]
    pub beta_range: Option<Vec<String>>,
    /// Stored nodes per axis.
    #[arg(long, short = 'n', visible_alias = "n", num_args = 1..=3)]
    pub nodes: Option<Vec<String>>,
    #[arg(long)]
    pub tau: Option<String>,
    #[arg(long)]
    pub stop_tol: Option<String>,
    #[arg(long)]
    pub residual_tol: Option<String>,
    #[arg(long)]
    pub max_iter: Option<String>,
    /// auto, none, odd-x1, vortex or nodal.
    #[arg(long)]
    pub excited: Option<String>,
    /// auto, degenerate or nondegenerate.
    #[arg(long)]
    pub degeneracy: Option<String>,
    /// Relative tolerance for equal leading lengths or trap frequencies.
    #[arg(long)]
    pub degeneracy_tol: Option<String>,
    /// weak, strong or exact (asym).
    #[arg(long)]
    pub regime: Option<String>,
    #[arg(long)]
    pub higher_order: bool,
    /// Print asymptotic values outside the regime of their formula.
    #[arg(long)]
    pub force: bool,
    /// Output directory.
    #[arg(long)]
    pub out: Option<String>,
    /// Export the converged field (solve).
    #[arg(long)]
    pub field: bool,
    #[arg(long)]
    pub seed: Option<String>,
    /// Relative amplitude of a seeded perturbation of the initial guess.
    #[arg(long)]
    pub perturb: Option<String>,
    #[arg(long, short = 'j')]
    pub jobs: Option<String>,
}

impl Common {
    /// Flag values as config key/value pairs.
    pub fn overrides(&self) -> Vec<(&'static str, String)> {
        let mut kv = Vec::new();
        let mut one = |k: &'static str, v: &Option<String>| {
            if let Some(v) = v {
                kv.push((k, v.clone()));
            }
        };
        one("bc", &self.bc);
        one("potential", &self.potential);
        one("tau", &self.tau);
        one("stop-tol", &self.stop_tol);
        one("residual-tol", &self.residual_tol);
        one("max-iter", &self.max_iter);
        one("excited", &self.excited);
        one("degeneracy", &self.degeneracy);
        one("degeneracy-tol", &self.degeneracy_tol);
        one("regime", &self.regime);
        one("out", &self.out);
        one("seed", &self.seed);
        one("perturb", &self.perturb);
        one("jobs", &self.jobs);
        let lists = [
            ("lengths", &self.lengths),
            ("gamma", &self.gamma),
            ("beta", &self.beta),
            ("beta-range", &self.beta_range),
            ("nodes", &self.nodes),
        ];
        for (k, v) in lists {
            if let Some(v) = v {
                kv.push((k, v.join(" ")));
            }
        }
        for (k, on) in [("higher-order", self.higher_order), ("force", self.force), ("field", self.field)] {
            if on {
                kv.push((k, String::from("true")));
            }
        }
        kv
    }

    /// Defaults, then the config file, then flags.
    pub fn resolve(&self, command: Command) -> CliResult<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            cfg.apply_text(&text)?;
        }
        for (k, v) in self.overrides() {
            cfg.set(k, &v)?;
        }
        cfg.command = Some(command);
        Ok(cfg)
    }
}

/// Parse-free entry point used by `main` and the tests.
pub fn run(cli: Cli) -> CliResult<()> {
    let (command, common, target) = match &cli.command {
        Cmd::Solve(c) => (Command::Solve, c, None),
        Cmd::GapSweep(c) => (Command::GapSweep, c, None),
        Cmd::Asym { class, common } => (Command::Asym, common, Some(class.clone())),
        Cmd::Figure { recipe, common } => (Command::Figure, common, Some(recipe.clone())),
    };
    let mut cfg = common.resolve(command)?;
    match command {
        Command::Asym => cfg.class = target,
        Command::Figure => cfg.recipe = target,
        _ => {}
    }
    if common.print_config {
        print!("{}", cfg.to_text());
        return Ok(());
    }
    match command {
        Command::Solve => commands::solve(&cfg),
        Command::GapSweep => commands::gap_sweep(&cfg),
        Command::Asym => commands::asym(cfg.class.as_deref().unwrap_or_default(), &cfg),
        Command::Figure => figures::figure(cfg.recipe.as_deref().unwrap_or_default(), &cfg),
    }
}
