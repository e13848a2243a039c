//! Ground and excited solves over a list of interaction strengths.
//!
//! With one job every branch is continued in `β`, each solve warm-started
//! from the previous one; results are then bitwise reproducible. With more
//! jobs the points are solved cold on a thread pool and reassembled in `β`
//! order. Nodal continuation is inherently sequential and ignores `jobs`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use gpegap_core::gaps::{build_gap_curve, GapCurve, ProblemFingerprint};
use gpegap_core::{
    continue_in_beta, solve_excited, solve_ground, Error, ExcitedMode, ProblemSpec, SolveReport, SolverConfig,
};
use log::{info, warn};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStatus {
    Ok,
    GroundNotConverged,
    ExcitedNotConverged,
    GroundFailed,
    ExcitedFailed,
    NonpositiveGap,
}

impl PointStatus {
    pub fn name(self) -> &'static str {
        match self {
            Self::Ok => "ok",
            Self::GroundNotConverged => "ground-not-converged",
            Self::ExcitedNotConverged => "excited-not-converged",
            Self::GroundFailed => "ground-failed",
            Self::ExcitedFailed => "excited-failed",
            Self::NonpositiveGap => "nonpositive-gap",
        }
    }
}

/// One `β` of a sweep. Unconverged solves keep their last iterate.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub beta: f64,
    pub ground: Option<SolveReport>,
    pub excited: Option<SolveReport>,
    pub status: PointStatus,
    /// Solver error messages, if any.
    pub errors: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Sweep {
    pub fingerprint: ProblemFingerprint,
    pub mode: ExcitedMode,
    pub points: Vec<SweepPoint>,
}

impl Sweep {
    pub fn failed(&self) -> Vec<f64> {
        self.points.iter().filter(|p| p.status != PointStatus::Ok).map(|p| p.beta).collect()
    }

    /// The curve over the successful points, if any.
    pub fn curve(&self) -> gpegap_core::Result<Option<GapCurve>> {
        let ok: Vec<&SweepPoint> = self.points.iter().filter(|p| p.status == PointStatus::Ok).collect();
        if ok.is_empty() {
            return Ok(None);
        }
        let pick = |f: fn(&SweepPoint) -> &Option<SolveReport>| {
            ok.iter().map(|p| f(p).clone().expect("ok points carry both reports")).collect::<Vec<_>>()
        };
        let betas: Vec<f64> = ok.iter().map(|p| p.beta).collect();
        build_gap_curve(self.fingerprint.clone(), &pick(|p| &p.ground), &pick(|p| &p.excited), &betas).map(Some)
    }
}

type Outcome = gpegap_core::Result<SolveReport>;

fn split(outcome: Outcome) -> (Option<SolveReport>, Option<String>, bool) {
    match outcome {
        Ok(r) => (Some(r), None, true),
        Err(Error::NotConverged { report, .. }) => {
            let msg = format!("not converged after {} iterations (residual {:e})", report.iterations, report.residual);
            (Some(*report), Some(msg), false)
        }
        Err(e) => (None, Some(e.to_string()), false),
    }
}

fn point(beta: f64, ground: Outcome, excited: Outcome) -> SweepPoint {
    let (g, ge, g_ok) = split(ground);
    let (e, ee, e_ok) = split(excited);
    let status = match (&g, g_ok, &e, e_ok) {
        (None, ..) => PointStatus::GroundFailed,
        (_, false, ..) => PointStatus::GroundNotConverged,
        (_, _, None, _) => PointStatus::ExcitedFailed,
        (_, _, _, false) => PointStatus::ExcitedNotConverged,
        (Some(g), _, Some(e), _) => {
            if e.energy.energy > g.energy.energy && e.energy.chemical_potential > g.energy.chemical_potential {
                PointStatus::Ok
            } else {
                PointStatus::NonpositiveGap
            }
        }
    };
    if status != PointStatus::Ok {
        warn!("beta={beta}: {}", status.name());
    }
    SweepPoint { beta, ground: g, excited: e, status, errors: ge.into_iter().chain(ee).collect() }
}

fn parallel(
    spec: &ProblemSpec,
    betas: &[f64],
    cfg: &SolverConfig,
    mode: ExcitedMode,
    jobs: usize,
) -> Vec<(Outcome, Outcome)> {
    let tasks = 2 * betas.len();
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Outcome>>> = Mutex::new((0..tasks).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..jobs.min(tasks) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= tasks {
                    break;
                }
                let at = spec.with_beta(betas[k / 2]);
                let r =
                    if k % 2 == 0 { solve_ground(&at, cfg) } else { solve_excited(&at, &cfg.clone().with_mode(mode)) };
                results.lock().expect("worker panicked")[k] = Some(r);
            });
        }
    });
    let mut all = results.into_inner().expect("worker panicked").into_iter().map(|r| r.expect("every task ran"));
    (0..betas.len()).map(|_| (all.next().unwrap(), all.next().unwrap())).collect()
}

/// Solve ground and excited states at every `β` (strictly ascending).
pub fn run(
    spec: &ProblemSpec,
    betas: &[f64],
    cfg: &SolverConfig,
    mode: ExcitedMode,
    jobs: usize,
) -> gpegap_core::Result<Sweep> {
    if mode == ExcitedMode::None {
        return Err(Error::InvalidConfig(String::from("a gap sweep needs an excited mode")));
    }
    let started = Instant::now();
    let pairs: Vec<(Outcome, Outcome)> = if jobs <= 1 || mode == ExcitedMode::NodalContinuation {
        let ground = continue_in_beta(spec, betas, cfg)?;
        let excited = continue_in_beta(spec, betas, &cfg.clone().with_mode(mode))?;
        ground.into_iter().zip(excited).collect()
    } else {
        parallel(spec, betas, cfg, mode, jobs)
    };
    let points: Vec<SweepPoint> = betas.iter().zip(pairs).map(|(&b, (g, e))| point(b, g, e)).collect();
    info!("sweep of {} points ({}) took {:.2?}", betas.len(), mode.name(), started.elapsed());
    Ok(Sweep { fingerprint: ProblemFingerprint::from_spec(spec), mode, points })
}
