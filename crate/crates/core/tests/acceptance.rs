//! End-to-end acceptance criteria. Prints one `[PASS]`/`[FAIL]` line per
//! criterion. Failures exit non-zero only when `GPEGAP_ACCEPTANCE_STRICT`
//! is set, so the remaining workspace tests still run.
//!
//! Pass criterion numbers as arguments to run a subset:
//! `cargo test -p gpegap-core --test acceptance -- 3 7`.

use std::f64::consts::PI;
use std::time::Instant;

use gpegap_core::asymptotics::{self, HarmonicConstants, RegimeChoice};
use gpegap_core::domain::{Degeneracy, NonconvexDemo};
use gpegap_core::gaps::{
    build_gap_curve, check_conjecture, compare_numeric_asymptotic, conjecture_bounds, Bound, GapCurve,
    ProblemFingerprint, CONJECTURE_TOL,
};
use gpegap_core::{
    befd_step, continue_in_beta, eigen_residual, energy, solve_excited, solve_ground, BoundaryCondition, BoxDomain,
    ExcitedMode, PotentialSpec, ProblemSpec, SolveReport, SolverConfig,
};

struct Check {
    ok: bool,
    detail: String,
}

impl Check {
    fn new() -> Self {
        Self { ok: true, detail: String::new() }
    }

    /// Record `|got - want| <= tol`.
    fn abs(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        let pass = (got - want).abs() <= tol;
        self.push(pass, format!("{what}={got:.9} (want {want:.9} ± {tol:e})"));
    }

    /// Record `|got/want - 1| <= rel`.
    fn rel(&mut self, what: &str, got: f64, want: f64, rel: f64) {
        let r = (got / want - 1.0).abs();
        self.push(r <= rel, format!("{what}={got:.6} vs {want:.6} (rel {r:.2e} <= {rel})"));
    }

    fn that(&mut self, what: &str, pass: bool) {
        self.push(pass, what.to_string());
    }

    fn push(&mut self, pass: bool, msg: String) {
        self.ok &= pass;
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        if !pass {
            self.detail.push_str("!! ");
        }
        self.detail.push_str(&msg);
    }
}

fn spec(lengths: &[f64], n: &[usize], bc: BoundaryCondition, potential: PotentialSpec, beta: f64) -> ProblemSpec {
    ProblemSpec::new(BoxDomain::new(lengths.to_vec()).unwrap(), n.to_vec(), bc, potential, beta)
}

fn harmonic(gammas: &[f64], n: &[usize], beta: f64, beta_max: f64) -> ProblemSpec {
    ProblemSpec::whole_space(PotentialSpec::Harmonic { gammas: gammas.to_vec() }, n.to_vec(), beta, beta_max).unwrap()
}

fn cfg(mode: ExcitedMode) -> SolverConfig {
    SolverConfig { record_history: false, ..SolverConfig::default() }.with_mode(mode)
}

fn unwrap(r: gpegap_core::Result<SolveReport>) -> SolveReport {
    match r {
        Ok(r) => r,
        Err(gpegap_core::Error::NotConverged { report, .. }) => *report,
        Err(e) => panic!("solve failed: {e}"),
    }
}

/// Ground and excited sweeps over `betas`.
fn sweep(s: &ProblemSpec, betas: &[f64], mode: ExcitedMode, tau: Option<f64>) -> (Vec<SolveReport>, Vec<SolveReport>) {
    let base = SolverConfig { tau, ..cfg(ExcitedMode::None) };
    let g = continue_in_beta(s, betas, &base).unwrap().into_iter().map(unwrap).collect();
    let e = continue_in_beta(s, betas, &base.with_mode(mode)).unwrap().into_iter().map(unwrap).collect();
    (g, e)
}

fn curve(s: &ProblemSpec, betas: &[f64], g: &[SolveReport], e: &[SolveReport]) -> GapCurve {
    build_gap_curve(ProblemFingerprint::from_spec(s), g, e, betas).expect("gap curve")
}

fn converged(c: &mut Check, reports: &[SolveReport]) {
    let bad: Vec<f64> = reports.iter().filter(|r| !r.converged()).map(|r| r.energy.beta).collect();
    c.that(&format!("all solves converged (failed at {bad:?})"), bad.is_empty());
}

fn linear_limit() -> Check {
    let mut c = Check::new();
    let s = spec(&[2.0], &[512], BoundaryCondition::Dirichlet, PotentialSpec::Zero, 0.0);
    let t = Instant::now();
    let g = unwrap(solve_ground(&s, &cfg(ExcitedMode::None)));
    let e = unwrap(solve_excited(&s, &cfg(ExcitedMode::OddInX1)));
    let dt = t.elapsed().as_secs_f64();
    converged(&mut c, &[g.clone(), e.clone()]);
    c.abs("E_g", g.energy.energy, PI * PI / 8.0, 5e-4);
    c.abs("E_1", e.energy.energy, PI * PI / 2.0, 5e-4);
    c.that(&format!("runtime {dt:.2}s < 1s"), dt < 1.0);
    c
}

fn periodic_exactness() -> Check {
    let mut c = Check::new();
    let betas = [0.0, 1.0, 10.0, 100.0];
    let s = spec(&[1.0], &[16384], BoundaryCondition::Periodic, PotentialSpec::Zero, 0.0);
    let t = Instant::now();
    let (g, e) = sweep(&s, &betas, ExcitedMode::Vortex, None);
    let dt = t.elapsed().as_secs_f64();
    converged(&mut c, &g);
    converged(&mut c, &e);
    for (i, &b) in betas.iter().enumerate() {
        c.abs(&format!("E_g({b})"), g[i].energy.energy, b / 2.0, 1e-6);
        c.abs(&format!("dE({b})"), e[i].energy.energy - g[i].energy.energy, 2.0 * PI * PI, 1e-6);
        c.abs(
            &format!("dmu({b})"),
            e[i].energy.chemical_potential - g[i].energy.chemical_potential,
            2.0 * PI * PI,
            1e-6,
        );
    }
    c.that(&format!("runtime {dt:.2}s < 5s"), dt < 5.0);
    c
}

fn box_strong() -> Check {
    let mut c = Check::new();
    let s = spec(&[2.0], &[2048], BoundaryCondition::Dirichlet, PotentialSpec::Zero, 1000.0);
    let t = Instant::now();
    let g = unwrap(solve_ground(&s, &cfg(ExcitedMode::None)));
    let e = unwrap(solve_excited(&s, &cfg(ExcitedMode::OddInX1)));
    let dt = t.elapsed().as_secs_f64();
    converged(&mut c, &[g.clone(), e.clone()]);
    c.rel("mu_g", g.energy.chemical_potential, 522.861, 0.01);
    c.rel("dmu", e.energy.chemical_potential - g.energy.chemical_potential, 23.861, 0.02);
    c.that(&format!("runtime {dt:.1}s < 30s"), dt < 30.0);
    c
}

/// Least squares for `y ≈ Σ_k a_k x^k` over `powers`.
fn lsq(x: &[f64], y: &[f64], powers: &[i32]) -> Vec<f64> {
    let m = powers.len();
    let mut a = vec![vec![0.0; m + 1]; m];
    for (xi, yi) in x.iter().zip(y) {
        let row: Vec<f64> = powers.iter().map(|p| xi.powi(*p)).collect();
        for i in 0..m {
            for j in 0..m {
                a[i][j] += row[i] * row[j];
            }
            a[i][m] += row[i] * yi;
        }
    }
    for k in 0..m {
        let pivot = a[k].clone();
        for row in a.iter_mut().skip(k + 1) {
            let f = row[k] / pivot[k];
            row.iter_mut().zip(&pivot).skip(k).for_each(|(x, p)| *x -= f * p);
        }
    }
    let mut sol = vec![0.0; m];
    for k in (0..m).rev() {
        sol[k] = (a[k][m] - (k + 1..m).map(|j| a[k][j] * sol[j]).sum::<f64>()) / a[k][k];
    }
    sol
}

fn box_weak_second_order() -> Check {
    let mut c = Check::new();
    let betas: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let s = spec(&[2.0], &[4096], BoundaryCondition::Dirichlet, PotentialSpec::Zero, 0.0);
    let (g, e) = sweep(&s, &betas, ExcitedMode::OddInX1, None);
    converged(&mut c, &g);
    converged(&mut c, &e);
    let d: Vec<f64> = g.iter().zip(&e).map(|(g, e)| e.energy.energy - g.energy.energy).collect();
    let y: Vec<f64> = d.iter().map(|v| v - d[0]).collect();
    let coef = lsq(&betas, &y, &[1, 2, 3]);
    c.rel("beta^2 coefficient", coef[1], 3.0 / (64.0 * PI * PI), 0.10);
    c.abs("dE(0)", d[0], 3.0 * PI * PI / 8.0, 5e-4);
    c
}

fn harmonic_gap_limit() -> Check {
    let mut c = Check::new();
    let t = Instant::now();
    for (beta, target, tol) in [(100.0, 0.73368, 0.05), (1000.0, 0.0, 0.03)] {
        let want = if target > 0.0 {
            target
        } else {
            asymptotics::harmonic_strong(&[1.0], beta, true).unwrap().gaps.delta_e.value
        };
        let s = harmonic(&[1.0], &[2048], beta, beta);
        let g = unwrap(solve_ground(&s, &cfg(ExcitedMode::None)));
        let e = unwrap(solve_excited(&s, &cfg(ExcitedMode::OddInX1)));
        converged(&mut c, &[g.clone(), e.clone()]);
        c.rel(&format!("dE({beta})"), e.energy.energy - g.energy.energy, want, tol);
    }
    c.that(&format!("runtime {:.1}s", t.elapsed().as_secs_f64()), true);
    c
}

fn harmonic_weak_slope() -> Check {
    let mut c = Check::new();
    let h = 0.05;
    let betas = [0.0, h, 2.0 * h];
    let s = harmonic(&[1.0], &[1024], 0.0, 2.0 * h);
    let (g, e) = sweep(&s, &betas, ExcitedMode::OddInX1, None);
    converged(&mut c, &g);
    converged(&mut c, &e);
    let d: Vec<f64> = g.iter().zip(&e).map(|(g, e)| e.energy.energy - g.energy.energy).collect();
    let slope = (-3.0 * d[0] + 4.0 * d[1] - d[2]) / (2.0 * h);
    let b0 = HarmonicConstants::new(&[1.0]).unwrap().b0;
    c.rel("slope", slope, -b0 / 8.0, 0.10);
    c.abs("dE(0)", d[0], 1.0, 1e-4);
    c
}

fn degenerate_box() -> Check {
    let mut c = Check::new();
    let betas = [200.0, 500.0, 1000.0, 2000.0];
    let s = spec(&[1.0, 1.0], &[128, 128], BoundaryCondition::Dirichlet, PotentialSpec::Zero, 0.0);
    let t = Instant::now();
    let (g, v) = sweep(&s, &betas, ExcitedMode::Vortex, None);
    let odd = continue_in_beta(&s, &betas, &cfg(ExcitedMode::OddInX1)).unwrap();
    converged(&mut c, &g);
    converged(&mut c, &v);
    for (i, o) in odd.into_iter().enumerate() {
        let o = unwrap(o);
        c.that(
            &format!("vortex E_1={:.4} < odd E_1={:.4} at beta={}", v[i].energy.energy, o.energy.energy, betas[i]),
            v[i].energy.energy < o.energy.energy,
        );
    }
    let curve = curve(&s, &betas, &g, &v);
    let fit = compare_numeric_asymptotic(&curve, Some((200.0, 2000.0))).log_slope.expect("slope fit");
    c.rel("ln-beta slope of dE", fit.slope_e, PI / 2.0, 0.15);
    c.that(&format!("runtime {:.0}s", t.elapsed().as_secs_f64()), true);
    c
}

fn degenerate_harmonic() -> Check {
    let mut c = Check::new();
    let betas = [200.0, 1000.0];
    let s = harmonic(&[1.0, 1.0], &[192, 192], 0.0, 1000.0);
    let t = Instant::now();
    let (g, v) = sweep(&s, &betas, ExcitedMode::Vortex, None);
    converged(&mut c, &g);
    converged(&mut c, &v);
    let d: Vec<f64> = g.iter().zip(&v).map(|(g, v)| v.energy.energy - g.energy.energy).collect();
    for (i, &b) in betas.iter().enumerate() {
        c.rel(&format!("dE({b})"), d[i], 0.5 * (PI / b).sqrt() * b.ln(), 0.25);
    }
    c.that(&format!("dE(1000)={:.4} < dE(200)={:.4}", d[1], d[0]), d[1] < d[0]);
    c.that(&format!("runtime {:.0}s", t.elapsed().as_secs_f64()), true);
    c
}

fn neumann() -> Check {
    let mut c = Check::new();
    let s = spec(&[2.0], &[1025], BoundaryCondition::Neumann, PotentialSpec::Zero, 0.0);
    for b in [0.0, 4.0, 100.0] {
        let g = unwrap(solve_ground(&s.with_beta(b), &cfg(ExcitedMode::None)));
        converged(&mut c, std::slice::from_ref(&g));
        c.abs(&format!("E_g({b})"), g.energy.energy, b / 4.0, 1e-8);
        let spread = g.field.re.iter().fold(0.0f64, |m, v| m.max((v - 0.5f64.sqrt()).abs()));
        c.that(&format!("constant ground state at beta={b} (spread {spread:.1e})"), spread < 1e-8);
    }
    let g0 = unwrap(solve_ground(&s, &cfg(ExcitedMode::None)));
    let e0 = unwrap(solve_excited(&s, &cfg(ExcitedMode::OddInX1)));
    c.abs("dE(0)", e0.energy.energy - g0.energy.energy, PI * PI / 8.0, 5e-4);
    let s = spec(&[2.0], &[2049], BoundaryCondition::Neumann, PotentialSpec::Zero, 1000.0);
    let g = unwrap(solve_ground(&s, &cfg(ExcitedMode::None)));
    let e = unwrap(solve_excited(&s, &cfg(ExcitedMode::OddInX1)));
    converged(&mut c, &[g0, e0, g.clone(), e.clone()]);
    let want = asymptotics::neumann_asym(&[2.0], 1000.0, false, RegimeChoice::Strong).unwrap().gaps.delta_mu.value;
    c.rel("dmu(1000)", e.energy.chemical_potential - g.energy.chemical_potential, want, 0.02);
    c
}

fn margins(c: &mut Check, label: &str, s: &ProblemSpec, betas: &[f64], mode: ExcitedMode, n_ok: bool) {
    let (g, e) = sweep(s, betas, mode, None);
    let cur = curve(s, betas, &g, &e);
    let bounds = conjecture_bounds(&cur.problem);
    let r = check_conjecture(&cur, &bounds, CONJECTURE_TOL).unwrap();
    let (be, bm) = match &bounds.bound {
        Bound::Infimum { delta_e, delta_mu, .. } => (*delta_e, *delta_mu),
        Bound::WeakLinear { gamma_v } => (*gamma_v, *gamma_v),
        Bound::NotApplicable { .. } => (f64::NAN, f64::NAN),
    };
    c.that(
        &format!(
            "{label}: min dE {:.5} >= {be:.5}, min dmu {:.5} >= {bm:.5} (slack {CONJECTURE_TOL:e})",
            r.min_delta_e.1, r.min_delta_mu.1
        ),
        r.holds() && n_ok,
    );
}

fn conjecture_margins() -> Check {
    let mut c = Check::new();
    let beta_box: Vec<f64> = vec![0.0, 1.0, 10.0, 50.0, 100.0, 250.0, 500.0, 1000.0];
    margins(
        &mut c,
        "dirichlet box",
        &spec(&[2.0], &[1024], BoundaryCondition::Dirichlet, PotentialSpec::Zero, 0.0),
        &beta_box,
        ExcitedMode::OddInX1,
        true,
    );
    margins(
        &mut c,
        "dirichlet 2D degenerate",
        &spec(&[1.0, 1.0], &[64, 64], BoundaryCondition::Dirichlet, PotentialSpec::Zero, 0.0),
        &[0.0, 10.0, 100.0, 500.0],
        ExcitedMode::Vortex,
        true,
    );
    margins(
        &mut c,
        "periodic",
        &spec(&[1.0], &[4096], BoundaryCondition::Periodic, PotentialSpec::Zero, 0.0),
        &[0.0, 1.0, 10.0, 100.0],
        ExcitedMode::Vortex,
        true,
    );
    margins(
        &mut c,
        "neumann",
        &spec(&[2.0], &[1025], BoundaryCondition::Neumann, PotentialSpec::Zero, 0.0),
        &[0.0, 1.0, 10.0, 100.0, 1000.0],
        ExcitedMode::OddInX1,
        true,
    );
    let hb = [0.0, 1.0, 10.0, 100.0, 1000.0];
    margins(&mut c, "harmonic", &harmonic(&[1.0], &[2048], 0.0, 1000.0), &hb, ExcitedMode::OddInX1, true);
    let mut nonconvex = spec(
        &[2.0],
        &[512],
        BoundaryCondition::Dirichlet,
        PotentialSpec::Nonconvex { demo: NonconvexDemo::NegativeQuadratic },
        0.0,
    );
    nonconvex.degeneracy = Some(Degeneracy::Nondegenerate);
    let bounds = conjecture_bounds(&ProblemFingerprint::from_spec(&nonconvex));
    c.that("V=-10x^2 bounds NotApplicable", matches!(bounds.bound, Bound::NotApplicable { .. }));
    c
}

fn property_suite() -> Check {
    let mut c = Check::new();
    // normalization after every step and non-increasing energy at default tau
    let s = spec(&[2.0], &[256], BoundaryCondition::Dirichlet, PotentialSpec::Zero, 50.0);
    let grid = s.grid().unwrap();
    let v = s.potential_values(&grid).unwrap();
    let g = unwrap(solve_ground(&s, &SolverConfig { max_iter: 200, ..SolverConfig::default() }));
    let mut phi = gpegap_core::normalize(&gpegap_core::WaveField::real(vec![1.0; grid.len()]), &grid).unwrap();
    let tau = SolverConfig::default_tau(50.0, phi.max_abs().powi(2));
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        phi = befd_step(&phi, &v, 50.0, tau, &grid).unwrap();
        worst = worst.max((grid.integrate(&phi.density()) - 1.0).abs());
    }
    c.that(&format!("normalization drift {worst:.1e} <= 1e-12"), worst <= 1e-12);
    let rises = g.energy_history.windows(2).filter(|w| w[1] > w[0] + 1e-13 * w[0].abs()).count();
    c.that(&format!("energy non-increasing ({rises} rises)"), rises == 0);
    // mu = E + beta/2 ∫|φ|⁴
    let b = energy(&g.field, &v, 50.0, &grid).unwrap();
    let quartic: f64 = grid.integrate(&g.field.density().iter().map(|r| r * r).collect::<Vec<_>>());
    c.abs("mu - E - beta/2 ∫φ⁴", b.chemical_potential - b.energy - 25.0 * quartic, 0.0, 1e-12 * b.energy);
    // antisymmetry in OddInX1 solves
    let e = unwrap(solve_excited(&s, &cfg(ExcitedMode::OddInX1)));
    let n = grid.len();
    let asym = (0..n).map(|i| (e.field.re[i] + e.field.re[n - 1 - i]).abs()).fold(0.0, f64::max);
    c.that(&format!("odd solve antisymmetry {asym:.1e} <= 1e-10"), asym <= 1e-10);
    let residual = eigen_residual(&e.field, &v, 50.0, &grid).unwrap();
    c.that(&format!("odd solve residual {residual:.1e}"), residual < 1e-6);
    // winding number constant through a vortex solve
    let sv = spec(&[1.0, 1.0], &[48, 48], BoundaryCondition::Dirichlet, PotentialSpec::Zero, 100.0);
    let vr = unwrap(solve_excited(&sv, &SolverConfig::default().with_mode(ExcitedMode::Vortex)));
    let constant = !vr.winding_history.is_empty() && vr.winding_history.iter().all(|w| *w == 1);
    c.that(&format!("winding number 1 for all {} steps", vr.winding_history.len()), constant);
    // grid refinement at beta = 0
    let errs: Vec<f64> = [63usize, 127, 255]
        .iter()
        .map(|&n| {
            let s = spec(&[2.0], &[n], BoundaryCondition::Dirichlet, PotentialSpec::Zero, 0.0);
            (unwrap(solve_ground(&s, &cfg(ExcitedMode::None))).energy.energy - PI * PI / 8.0).abs()
        })
        .collect();
    let ratios = [errs[0] / errs[1], errs[1] / errs[2]];
    c.that(
        &format!("refinement ratios {:.3}, {:.3} ≈ 4", ratios[0], ratios[1]),
        ratios.iter().all(|r| (r - 4.0).abs() < 0.2),
    );
    c
}

type Criterion = (u32, &'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "linear limit (1D box, beta=0)", linear_limit),
        (2, "periodic exactness", periodic_exactness),
        (3, "box strong regime (1D, beta=1000)", box_strong),
        (4, "box weak second order", box_weak_second_order),
        (5, "harmonic gap limit", harmonic_gap_limit),
        (6, "harmonic weak slope", harmonic_weak_slope),
        (7, "degenerate 2D box vortex branch", degenerate_box),
        (8, "degenerate 2D harmonic decay", degenerate_harmonic),
        (9, "neumann", neumann),
        (10, "conjecture margins", conjecture_margins),
        (11, "property suite", property_suite),
    ];
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, run) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let check = run();
        let tag = if check.ok { "PASS" } else { "FAIL" };
        failed += usize::from(!check.ok);
        println!("[{tag}] {id:>2} {name} ({:.1}s): {}", t.elapsed().as_secs_f64(), check.detail);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        if std::env::var_os("GPEGAP_ACCEPTANCE_STRICT").is_some() {
            std::process::exit(1);
        }
    }
}
