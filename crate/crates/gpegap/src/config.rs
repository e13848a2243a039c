//! Run configuration: a plain-text `key = value` file overlaid by command-line
//! flags.
//!
//! ```text
//! # gpegap run configuration
//! version = 1
//! command = gap-sweep
//! lengths = 2
//! bc = dirichlet
//! beta-range = 0.01 1000 13
//! nodes = 1024
//! ```
//!
//! Lists are separated by whitespace or commas; `#` starts a comment. Keys
//! that are absent fall back to the documented defaults, and [`RunConfig::to_text`]
//! writes every set key in a fixed order so that a parsed file prints back
//! unchanged.

use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use gpegap_core::domain::{Degeneracy, DEGENERACY_REL_TOL};
use gpegap_core::{BoundaryCondition, ExcitedMode, SolverConfig};

use crate::error::{CliError, CliResult};

/// Bumped whenever a default or key meaning changes.
pub const CONFIG_VERSION: u32 = 1;

pub const DEFAULT_BETA_RANGE: BetaRange = BetaRange { min: 0.01, max: 1000.0, count: 13 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    GapSweep,
    Asym,
    Figure,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Solve => "solve",
            Self::GapSweep => "gap-sweep",
            Self::Asym => "asym",
            Self::Figure => "figure",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "solve" => Ok(Self::Solve),
            "gap-sweep" => Ok(Self::GapSweep),
            "asym" => Ok(Self::Asym),
            "figure" => Ok(Self::Figure),
            other => Err(format!("unknown command '{other}'")),
        }
    }
}

/// Trapping potential as written in a config file.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialChoice {
    Zero,
    /// Frequencies come from the `gamma` key.
    Harmonic,
    /// `½γ²x² + V0 cos(kx)` with `γ` from the `gamma` key.
    HarmonicCosine {
        v0: f64,
        k: f64,
    },
    ShiftedQuadratic {
        v0: f64,
        center: Vec<f64>,
    },
    NegativeQuadratic,
    Oscillating,
    /// Whitespace-delimited node values.
    File(PathBuf),
}

impl fmt::Display for PotentialChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => f.write_str("zero"),
            Self::Harmonic => f.write_str("harmonic"),
            Self::HarmonicCosine { v0, k } => write!(f, "harmonic-cosine {v0} {k}"),
            Self::ShiftedQuadratic { v0, center } => write!(f, "shifted-quadratic {v0} {}", join(center)),
            Self::NegativeQuadratic => f.write_str("negative-quadratic"),
            Self::Oscillating => f.write_str("oscillating"),
            Self::File(p) => write!(f, "file {}", p.display()),
        }
    }
}

impl FromStr for PotentialChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let (head, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
        let nums = || parse_list::<f64>(rest);
        let choice = match head {
            "zero" | "box" => Self::Zero,
            "harmonic" => Self::Harmonic,
            "harmonic-cosine" => match nums()?.as_slice() {
                [v0, k] => Self::HarmonicCosine { v0: *v0, k: *k },
                _ => return Err(String::from("harmonic-cosine takes V0 and k")),
            },
            "shifted-quadratic" => match nums()?.split_first() {
                Some((v0, center)) if !center.is_empty() => Self::ShiftedQuadratic { v0: *v0, center: center.to_vec() },
                _ => return Err(String::from("shifted-quadratic takes V0 and a center")),
            },
            "negative-quadratic" => Self::NegativeQuadratic,
            "oscillating" => Self::Oscillating,
            "file" if !rest.trim().is_empty() => Self::File(PathBuf::from(rest.trim())),
            other => return Err(format!("unknown potential '{other}'")),
        };
        if !matches!(choice, Self::HarmonicCosine { .. } | Self::ShiftedQuadratic { .. } | Self::File(_))
            && !rest.trim().is_empty()
        {
            return Err(format!("potential '{head}' takes no arguments"));
        }
        Ok(choice)
    }
}

/// Which state `solve` targets, or how `gap-sweep` picks the excited branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExcitedChoice {
    /// Degenerate problems use the vortex sector, mirror-symmetric potentials
    /// the odd sector, other 1D problems nodal continuation.
    Auto,
    Mode(ExcitedMode),
}

impl fmt::Display for ExcitedChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Auto => f.write_str("auto"),
            Self::Mode(m) => f.write_str(m.name()),
        }
    }
}

impl FromStr for ExcitedChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "auto" => Ok(Self::Auto),
            other => other.parse().map(Self::Mode).map_err(|e: gpegap_core::Error| e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeArg {
    Weak,
    Strong,
    Exact,
}

impl RegimeArg {
    pub fn name(self) -> &'static str {
        match self {
            Self::Weak => "weak",
            Self::Strong => "strong",
            Self::Exact => "exact",
        }
    }
}

impl FromStr for RegimeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "weak" => Ok(Self::Weak),
            "strong" => Ok(Self::Strong),
            "exact" => Ok(Self::Exact),
            other => Err(format!("unknown regime '{other}' (weak, strong, exact)")),
        }
    }
}

/// `count` log-spaced values in `[min, max]`, with `β = 0` prepended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl BetaRange {
    pub fn values(&self) -> Vec<f64> {
        let mut out = vec![0.0];
        if self.count == 1 {
            out.push(self.min);
            return out;
        }
        let (a, b) = (self.min.ln(), self.max.ln());
        let steps = (self.count - 1) as f64;
        out.extend((0..self.count).map(|i| {
            if i + 1 == self.count {
                self.max
            } else {
                (a + (b - a) * i as f64 / steps).exp()
            }
        }));
        out
    }
}

/// Every parameter of a run. `None` means "derive from the other keys".
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub version: u32,
    pub command: Option<Command>,
    /// Problem class for `asym`.
    pub class: Option<String>,
    /// Recipe name for `figure`.
    pub recipe: Option<String>,
    pub lengths: Option<Vec<f64>>,
    pub gamma: Option<Vec<f64>>,
    /// Defaults to `whole-space` for harmonic potentials, `dirichlet`
    /// otherwise.
    pub bc: Option<BoundaryCondition>,
    /// Defaults to `harmonic` when `gamma` is set, `zero` otherwise.
    pub potential: Option<PotentialChoice>,
    /// Explicit interaction strengths; takes precedence over `beta_range`.
    pub beta: Option<Vec<f64>>,
    pub beta_range: BetaRange,
    /// Stored nodes per axis; one value is repeated over all axes.
    pub nodes: Option<Vec<usize>>,
    pub tau: Option<f64>,
    pub stop_tol: f64,
    pub residual_tol: f64,
    pub max_iter: usize,
    /// `solve` computes the ground state when unset.
    pub excited: Option<ExcitedChoice>,
    pub degeneracy: Option<Degeneracy>,
    /// Relative tolerance for calling the two leading lengths (or trap
    /// frequencies) equal when `degeneracy` is auto.
    pub degeneracy_tol: f64,
    /// `asym` picks weak for `β <= 1` and strong above when unset.
    pub regime: Option<RegimeArg>,
    pub higher_order: bool,
    /// Let `asym` print values outside the regime of their formula.
    pub force: bool,
    pub out: PathBuf,
    /// Export the converged field from `solve`.
    pub field: bool,
    pub seed: u64,
    /// Relative amplitude of the seeded initial-guess perturbation.
    pub perturb: f64,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let solver = SolverConfig::default();
        Self {
            version: CONFIG_VERSION,
            command: None,
            class: None,
            recipe: None,
            lengths: None,
            gamma: None,
            bc: None,
            potential: None,
            beta: None,
            beta_range: DEFAULT_BETA_RANGE,
            nodes: None,
            tau: None,
            stop_tol: solver.stop_tol,
            residual_tol: solver.residual_tol,
            max_iter: solver.max_iter,
            excited: None,
            degeneracy: None,
            degeneracy_tol: DEGENERACY_REL_TOL,
            regime: None,
            higher_order: false,
            force: false,
            out: PathBuf::from("out"),
            field: false,
            seed: 0,
            perturb: 0.0,
            jobs: 1,
        }
    }
}

fn join<T: fmt::Display>(values: &[T]) -> String {
    values.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn parse_list<T: FromStr>(value: &str) -> Result<Vec<T>, String> {
    value
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|_| format!("'{t}' is not a valid value")))
        .collect()
}

fn parse_one<T: FromStr>(value: &str) -> Result<T, String> {
    let v = value.trim();
    v.parse::<T>().map_err(|_| format!("'{v}' is not a valid value"))
}

fn parse_bool(value: &str) -> Result<bool, String> {
    match value.trim() {
        "true" | "yes" | "1" | "" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(format!("'{other}' is not a boolean")),
    }
}

fn nonempty<T>(v: Vec<T>) -> Result<Vec<T>, String> {
    if v.is_empty() {
        Err(String::from("expected at least one value"))
    } else {
        Ok(v)
    }
}

impl RunConfig {
    /// Parse a config file body on top of the defaults.
    pub fn from_text(text: &str) -> CliResult<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> CliResult<()> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected 'key = value'", no + 1)))?;
            self.set(key.trim(), value.trim()).map_err(|e| CliError::Config(format!("line {}: {e}", no + 1)))?;
        }
        Ok(())
    }

    /// Set one key. Keys accept `-` or `_` as separators.
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let key = key.replace('_', "-");
        let r: Result<(), String> = (|| {
            match key.as_str() {
                "version" => {
                    let v: u32 = parse_one(value)?;
                    if v != CONFIG_VERSION {
                        return Err(format!("unsupported config version {v} (expected {CONFIG_VERSION})"));
                    }
                    self.version = v;
                }
                "command" => self.command = Some(parse_one(value)?),
                "class" => self.class = Some(value.trim().to_owned()),
                "recipe" => self.recipe = Some(value.trim().to_owned()),
                "lengths" => self.lengths = Some(nonempty(parse_list(value)?)?),
                "gamma" => self.gamma = Some(nonempty(parse_list(value)?)?),
                "bc" => self.bc = Some(value.parse().map_err(|e: gpegap_core::Error| e.to_string())?),
                "potential" => self.potential = Some(value.parse()?),
                "beta" => self.beta = Some(nonempty(parse_list(value)?)?),
                "beta-range" => {
                    let v: Vec<f64> = parse_list(value)?;
                    match v.as_slice() {
                        [min, max, count]
                            if *min > 0.0 && (max > min || *count == 1.0) && count.fract() == 0.0 && *count >= 1.0 =>
                        {
                            self.beta_range = BetaRange { min: *min, max: *max, count: *count as usize };
                        }
                        _ => return Err(String::from("beta-range takes MIN MAX COUNT with 0 < MIN < MAX")),
                    }
                }
                "nodes" | "n" => self.nodes = Some(nonempty(parse_list(value)?)?),
                "tau" => {
                    self.tau = match value.trim() {
                        "auto" => None,
                        v => Some(parse_one(v)?),
                    }
                }
                "stop-tol" => self.stop_tol = parse_one(value)?,
                "residual-tol" => self.residual_tol = parse_one(value)?,
                "max-iter" => self.max_iter = parse_one(value)?,
                "excited" => self.excited = Some(value.parse()?),
                "degeneracy" => {
                    self.degeneracy = match value.trim() {
                        "auto" => None,
                        "degenerate" => Some(Degeneracy::Degenerate),
                        "nondegenerate" => Some(Degeneracy::Nondegenerate),
                        other => return Err(format!("unknown degeneracy '{other}'")),
                    }
                }
                "degeneracy-tol" => {
                    self.degeneracy_tol = parse_one(value)?;
                    if !(self.degeneracy_tol >= 0.0 && self.degeneracy_tol < 1.0) {
                        return Err(String::from("degeneracy-tol must lie in [0, 1)"));
                    }
                }
                "regime" => {
                    self.regime = match value.trim() {
                        "auto" => None,
                        v => Some(v.parse()?),
                    }
                }
                "higher-order" => self.higher_order = parse_bool(value)?,
                "force" => self.force = parse_bool(value)?,
                "out" => self.out = PathBuf::from(value.trim()),
                "field" => self.field = parse_bool(value)?,
                "seed" => self.seed = parse_one(value)?,
                "perturb" => self.perturb = parse_one(value)?,
                "jobs" => {
                    self.jobs = parse_one(value)?;
                    if self.jobs == 0 {
                        return Err(String::from("jobs must be at least 1"));
                    }
                }
                other => return Err(format!("unknown key '{other}'")),
            }
            Ok(())
        })();
        r.map_err(|e| CliError::Config(format!("{key}: {e}")))
    }

    /// Serialize every set key in a fixed order.
    pub fn to_text(&self) -> String {
        let mut s = String::from("# gpegap run configuration\n");
        let mut kv = |k: &str, v: &dyn fmt::Display| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("version", &self.version);
        if let Some(c) = self.command {
            kv("command", &c.name());
        }
        if let Some(c) = &self.class {
            kv("class", c);
        }
        if let Some(r) = &self.recipe {
            kv("recipe", r);
        }
        if let Some(l) = &self.lengths {
            kv("lengths", &join(l));
        }
        if let Some(g) = &self.gamma {
            kv("gamma", &join(g));
        }
        if let Some(bc) = self.bc {
            kv("bc", &bc.name());
        }
        if let Some(p) = &self.potential {
            kv("potential", p);
        }
        if let Some(b) = &self.beta {
            kv("beta", &join(b));
        }
        let r = self.beta_range;
        kv("beta-range", &format_args!("{} {} {}", r.min, r.max, r.count));
        if let Some(n) = &self.nodes {
            kv("nodes", &join(n));
        }
        match self.tau {
            Some(t) => kv("tau", &t),
            None => kv("tau", &"auto"),
        }
        kv("stop-tol", &self.stop_tol);
        kv("residual-tol", &self.residual_tol);
        kv("max-iter", &self.max_iter);
        if let Some(e) = self.excited {
            kv("excited", &e);
        }
        kv(
            "degeneracy",
            &match self.degeneracy {
                None => "auto",
                Some(Degeneracy::Degenerate) => "degenerate",
                Some(Degeneracy::Nondegenerate) => "nondegenerate",
            },
        );
        kv("degeneracy-tol", &self.degeneracy_tol);
        kv("regime", &self.regime.map_or("auto", RegimeArg::name));
        kv("higher-order", &self.higher_order);
        kv("force", &self.force);
        kv("out", &self.out.display());
        kv("field", &self.field);
        kv("seed", &self.seed);
        kv("perturb", &self.perturb);
        kv("jobs", &self.jobs);
        s
    }

    /// Interaction strengths: the explicit list, or the log range with `0`
    /// prepended.
    pub fn betas(&self) -> Vec<f64> {
        self.beta.clone().unwrap_or_else(|| self.beta_range.values())
    }

    pub fn potential_choice(&self) -> PotentialChoice {
        self.potential.clone().unwrap_or(if self.gamma.is_some() {
            PotentialChoice::Harmonic
        } else {
            PotentialChoice::Zero
        })
    }

    pub fn boundary(&self) -> BoundaryCondition {
        self.bc.unwrap_or(match self.potential_choice() {
            PotentialChoice::Harmonic | PotentialChoice::HarmonicCosine { .. } => {
                BoundaryCondition::TruncatedWholeSpace
            }
            _ => BoundaryCondition::Dirichlet,
        })
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            tau: self.tau,
            stop_tol: self.stop_tol,
            residual_tol: self.residual_tol,
            max_iter: self.max_iter,
            ..SolverConfig::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = RunConfig::default();
        assert_eq!(RunConfig::from_text(&cfg.to_text()).unwrap(), cfg);
    }

    #[test]
    fn parses_lists_and_comments() {
        let cfg = RunConfig::from_text("lengths = 1, 1 # square\nbeta=0 1 10\n\nn = 64").unwrap();
        assert_eq!(cfg.lengths, Some(vec![1.0, 1.0]));
        assert_eq!(cfg.beta, Some(vec![0.0, 1.0, 10.0]));
        assert_eq!(cfg.nodes, Some(vec![64]));
    }

    #[test]
    fn rejects_unknown_keys_and_versions() {
        assert!(RunConfig::from_text("colour = red").is_err());
        assert!(RunConfig::from_text("version = 2").is_err());
        assert!(RunConfig::from_text("lengths").is_err());
        assert!(RunConfig::from_text("jobs = 0").is_err());
    }

    #[test]
    fn log_range_has_zero_and_end_points() {
        let b = DEFAULT_BETA_RANGE.values();
        assert_eq!(b.len(), 14);
        assert_eq!(b[0], 0.0);
        assert!((b[1] - 0.01).abs() < 1e-15);
        assert_eq!(*b.last().unwrap(), 1000.0);
        assert!((b[7] - 10f64.sqrt()).abs() < 1e-12);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn potential_forms() {
        for s in ["zero", "harmonic", "harmonic-cosine 1 2.5", "shifted-quadratic 3 0.5 0.25", "oscillating"] {
            let p: PotentialChoice = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert!("harmonic 3".parse::<PotentialChoice>().is_err());
        assert!("shifted-quadratic 3".parse::<PotentialChoice>().is_err());
    }

    #[test]
    fn implied_potential_and_boundary() {
        let cfg = RunConfig::from_text("gamma = 1").unwrap();
        assert_eq!(cfg.potential_choice(), PotentialChoice::Harmonic);
        assert_eq!(cfg.boundary(), BoundaryCondition::TruncatedWholeSpace);
        assert_eq!(RunConfig::default().boundary(), BoundaryCondition::Dirichlet);
    }
}
