//! Newton continuation in `β` of the first excited linear eigenstate, for
//! one-dimensional potentials without a mirror symmetry.
//!
//! The linear pair `(λ1, ψ1)` comes from Sturm-sequence bisection and
//! inverse iteration. Each continuation point solves
//!
//! ```text
//! F(φ, μ) = ((-½Δ_h + V + βφ²)φ - μφ,  ½(‖φ‖² - 1)) = 0
//! ```
//!
//! by Newton's method on the bordered Jacobian, eliminated block-wise with
//! pivoted tridiagonal solves.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use log::debug;

use super::{ExcitedMode, ProblemSpec, SolveReport, SolveStatus, SolverConfig};
use crate::domain::{BoundaryCondition, Grid};
use crate::error::{Error, Result};
use crate::functional::{eigen_residual, energy, normalize, WaveField};
use crate::linalg::Tridiagonal;
use crate::math;

const NEWTON_MAX_ITER: usize = 30;
const MAX_HALVINGS: usize = 40;

/// `-½Δ_h + V` on a 1D non-periodic grid.
fn linear_operator(grid: &Grid, v: &[f64]) -> Tridiagonal {
    let n = grid.len();
    let h = grid.axes()[0].spacing;
    let off = -0.5 / (h * h);
    let mut t =
        Tridiagonal { lower: vec![off; n], diag: v.iter().map(|x| x + 1.0 / (h * h)).collect(), upper: vec![off; n] };
    t.lower[0] = 0.0;
    t.upper[n - 1] = 0.0;
    if grid.bc() == BoundaryCondition::Neumann {
        t.upper[0] = 2.0 * off;
        t.lower[n - 1] = 2.0 * off;
    }
    t
}

fn apply(t: &Tridiagonal, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let mut s = t.diag[i] * x[i];
            if i > 0 {
                s += t.lower[i] * x[i - 1];
            }
            if i + 1 < n {
                s += t.upper[i] * x[i + 1];
            }
            s
        })
        .collect()
}

/// Number of eigenvalues below `x` (the operator is similar to the symmetric
/// tridiagonal matrix with off-diagonal `sqrt(lower[i+1] upper[i])`).
fn sturm_count(t: &Tridiagonal, x: f64) -> usize {
    let mut count = 0;
    let mut q = t.diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..t.len() {
        let e2 = t.lower[i] * t.upper[i - 1];
        let prev = if q == 0.0 { f64::EPSILON * (math::abs(t.diag[i - 1]) + 1.0) } else { q };
        q = t.diag[i] - x - e2 / prev;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// `k`-th smallest eigenvalue by bisection.
fn eigenvalue(t: &Tridiagonal, k: usize) -> f64 {
    let radius = |i: usize| math::abs(t.lower[i]) + math::abs(t.upper[i]);
    let mut lo = (0..t.len()).map(|i| t.diag[i] - radius(i)).fold(f64::INFINITY, f64::min);
    let mut hi = (0..t.len()).map(|i| t.diag[i] + radius(i)).fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(t, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvector for the isolated eigenvalue `lambda` by inverse iteration,
/// kept W-orthogonal to `deflate`.
fn eigenvector(t: &Tridiagonal, lambda: f64, grid: &Grid, deflate: &[&[f64]]) -> Result<Vec<f64>> {
    let n = t.len();
    let sigma = lambda + 1e-10 * (1.0 + math::abs(lambda));
    let mut shifted = t.clone();
    shifted.diag.iter_mut().for_each(|d| *d -= sigma);
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.01 * math::sin(1.0 + i as f64)).collect();
    for _ in 0..6 {
        for q in deflate {
            let c = grid.inner(&x, q) / grid.inner(q, q);
            x.iter_mut().zip(q.iter()).for_each(|(xi, qi)| *xi -= c * qi);
        }
        x = shifted.solve_pivoted(&x)?;
        let norm = math::sqrt(grid.inner(&x, &x));
        x.iter_mut().for_each(|v| *v /= norm);
    }
    // largest lobe positive
    let peak = x.iter().copied().fold(0.0f64, |m, v| if math::abs(v) > math::abs(m) { v } else { m });
    if peak < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
    }
    Ok(x)
}

/// Solve `J dφ - dμ φ = r1`, `⟨φ, dφ⟩ = r2` with `J` tridiagonal.
fn bordered_solve(j: &Tridiagonal, phi: &[f64], grid: &Grid, r1: &[f64], r2: f64) -> Result<(Vec<f64>, f64)> {
    let y = j.solve_pivoted(r1)?;
    let z = j.solve_pivoted(phi)?;
    let denom = grid.inner(phi, &z);
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::LinearSolve { iterations: 0, residual: f64::INFINITY });
    }
    let dmu = (r2 - grid.inner(phi, &y)) / denom;
    Ok((y.iter().zip(&z).map(|(a, b)| a + dmu * b).collect(), dmu))
}

struct Newton<'a> {
    h0: &'a Tridiagonal,
    grid: &'a Grid,
}

impl Newton<'_> {
    fn residual(&self, phi: &[f64], mu: f64, beta: f64) -> (Vec<f64>, f64) {
        let mut f1 = apply(self.h0, phi);
        for i in 0..phi.len() {
            f1[i] += (beta * phi[i] * phi[i] - mu) * phi[i];
        }
        let f2 = 0.5 * (self.grid.inner(phi, phi) - 1.0);
        (f1, f2)
    }

    /// Newton iterations from `(phi, mu)`; returns the solution and the
    /// iteration count, or `None` when the iteration fails to converge.
    fn solve(&self, mut phi: Vec<f64>, mut mu: f64, beta: f64) -> Option<(Vec<f64>, f64, usize)> {
        let scale = 1.0 + math::abs(mu) + beta;
        let mut last = f64::INFINITY;
        for it in 1..=NEWTON_MAX_ITER {
            let (f1, f2) = self.residual(&phi, mu, beta);
            let norm = math::sqrt(self.grid.inner(&f1, &f1)) + math::abs(f2);
            if !norm.is_finite() || (it > 3 && norm > 0.5 * last && norm > 1e-9 * scale) {
                return None;
            }
            last = norm;
            let mut j = self.h0.clone();
            for (d, p) in j.diag.iter_mut().zip(&phi) {
                *d += 3.0 * beta * p * p - mu;
            }
            let r1: Vec<f64> = f1.iter().map(|v| -v).collect();
            let (dphi, dmu) = bordered_solve(&j, &phi, self.grid, &r1, -f2).ok()?;
            phi.iter_mut().zip(&dphi).for_each(|(p, d)| *p += d);
            mu += dmu;
            let step = dphi.iter().fold(0.0f64, |m, d| m.max(math::abs(*d)));
            if step < 1e-13 * (1.0 + phi.iter().fold(0.0f64, |m, p| m.max(math::abs(*p)))) {
                return Some((phi, mu, it));
            }
        }
        None
    }
}

fn unavailable(what: &str) -> Error {
    Error::Unavailable(String::from(what))
}

/// Continue the first excited state through every `β` in `betas`
/// (ascending), reporting each point.
pub(super) fn sweep(spec: &ProblemSpec, betas: &[f64], cfg: &SolverConfig) -> Vec<Result<SolveReport>> {
    match setup(spec, cfg) {
        Ok((grid, v, h0)) => continue_through(spec, betas, cfg, &grid, &v, &h0),
        Err(e) => {
            let mut out = Vec::with_capacity(betas.len());
            out.push(Err(e));
            out.extend((1..betas.len()).map(|_| Err(unavailable("nodal continuation setup failed"))));
            out
        }
    }
}

fn setup(spec: &ProblemSpec, cfg: &SolverConfig) -> Result<(Grid, Vec<f64>, Tridiagonal)> {
    cfg.validate()?;
    spec.validate()?;
    if spec.dim() != 1 || spec.bc == BoundaryCondition::Periodic {
        return Err(Error::InvalidConfig(format!(
            "nodal continuation needs a 1D non-periodic problem (got d={}, {})",
            spec.dim(),
            spec.bc.name()
        )));
    }
    let grid = spec.grid()?;
    let v = spec.potential_values(&grid)?;
    let h0 = linear_operator(&grid, &v);
    Ok((grid, v, h0))
}

fn continue_through(
    spec: &ProblemSpec,
    betas: &[f64],
    cfg: &SolverConfig,
    grid: &Grid,
    v: &[f64],
    h0: &Tridiagonal,
) -> Vec<Result<SolveReport>> {
    let mut out = Vec::with_capacity(betas.len());
    let start = (|| -> Result<(Vec<f64>, f64)> {
        let l0 = eigenvalue(h0, 0);
        let l1 = eigenvalue(h0, 1);
        let psi0 = eigenvector(h0, l0, grid, &[])?;
        let psi1 = eigenvector(h0, l1, grid, &[&psi0])?;
        debug!("nodal continuation: linear eigenvalues {l0} {l1}");
        Ok((psi1, l1))
    })();
    let (mut phi, mut mu) = match start {
        Ok(s) => s,
        Err(e) => {
            out.push(Err(e));
            out.extend((1..betas.len()).map(|_| Err(unavailable("linear eigenpair failed"))));
            return out;
        }
    };
    let newton = Newton { h0, grid };
    let mut beta = 0.0;
    let mut prev: Option<(Vec<f64>, f64, f64)> = None;
    let mut history: Vec<f64> = Vec::new();
    let mut newton_iters = 0;
    let mut failed = false;
    let mut dbeta = betas.first().copied().unwrap_or(0.0).max(1e-3);
    for &target in betas {
        if failed {
            out.push(Err(unavailable("continuation stopped at an earlier point")));
            continue;
        }
        let mut halvings = 0;
        while beta < target {
            let step = dbeta.min(target - beta);
            let next_beta = if target - beta - step < 1e-12 * (1.0 + target) { target } else { beta + step };
            // secant predictor once two points are known
            let (guess_phi, guess_mu) = match &prev {
                Some((pphi, pmu, pbeta)) if beta > *pbeta => {
                    let r = (next_beta - beta) / (beta - pbeta);
                    (phi.iter().zip(pphi).map(|(a, b)| a + r * (a - b)).collect(), mu + r * (mu - pmu))
                }
                _ => (phi.clone(), mu),
            };
            match newton.solve(guess_phi, guess_mu, next_beta) {
                Some((p, m, its)) => {
                    newton_iters += its;
                    prev = Some((core::mem::replace(&mut phi, p), mu, beta));
                    mu = m;
                    beta = next_beta;
                    if let Ok(e) = energy(&WaveField::real(phi.clone()), v, beta, grid) {
                        history.push(e.energy);
                    }
                    dbeta = (2.0 * step).max(1e-3);
                    halvings = 0;
                }
                None => {
                    halvings += 1;
                    dbeta = 0.5 * step;
                    if halvings > MAX_HALVINGS {
                        failed = true;
                        break;
                    }
                }
            }
        }
        if failed {
            out.push(Err(Error::Unavailable(format!("nodal continuation stalled at beta = {beta}"))));
            continue;
        }
        out.push(report(spec.with_beta(target), &phi, v, grid, cfg, newton_iters, &history));
    }
    out
}

fn report(
    spec: ProblemSpec,
    phi: &[f64],
    v: &[f64],
    grid: &Grid,
    cfg: &SolverConfig,
    iterations: usize,
    history: &[f64],
) -> Result<SolveReport> {
    let field = normalize(&WaveField::real(phi.to_vec()), grid)?;
    let residual = eigen_residual(&field, v, spec.beta, grid)?;
    let converged = residual < cfg.residual_tol;
    let report = SolveReport {
        energy: energy(&field, v, spec.beta, grid)?,
        field,
        residual,
        iterations,
        energy_history: history.to_vec(),
        winding_history: Vec::new(),
        tau: 0.0,
        mode: ExcitedMode::NodalContinuation,
        status: if converged { SolveStatus::Converged } else { SolveStatus::NotConverged },
        wall_time: None,
    };
    if converged {
        Ok(report)
    } else {
        Err(Error::NotConverged { iterations, residual, report: alloc::boxed::Box::new(report) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{make_grid, BoxDomain};
    use crate::math::PI;

    #[test]
    fn bisection_matches_discrete_sine_spectrum() {
        let g = make_grid(&BoxDomain::new(vec![2.0]).unwrap(), &[63], BoundaryCondition::Dirichlet).unwrap();
        let t = linear_operator(&g, &vec![0.0; 63]);
        let h = g.axes()[0].spacing;
        for k in 0..3 {
            let exact = (1.0 - math::cos((k + 1) as f64 * PI * h / 2.0)) / (h * h);
            assert!((eigenvalue(&t, k) - exact).abs() < 1e-11 * exact);
        }
    }

    #[test]
    fn neumann_spectrum_and_vector() {
        let g = make_grid(&BoxDomain::new(vec![2.0]).unwrap(), &[64], BoundaryCondition::Neumann).unwrap();
        let t = linear_operator(&g, &vec![0.0; 64]);
        assert!(eigenvalue(&t, 0).abs() < 1e-10);
        let h = g.axes()[0].spacing;
        let l1 = (1.0 - math::cos(PI * h / 2.0)) / (h * h);
        assert!((eigenvalue(&t, 1) - l1).abs() < 1e-10);
        let psi0 = eigenvector(&t, eigenvalue(&t, 0), &g, &[]).unwrap();
        let psi1 = eigenvector(&t, l1, &g, &[&psi0]).unwrap();
        // cos(πx/2)
        let c = psi1[0];
        for (i, p) in psi1.iter().enumerate() {
            assert!((p - c * math::cos(PI * g.coords(i)[0] / 2.0)).abs() < 1e-8);
        }
    }

    #[test]
    fn pivoted_bordered_solve_is_consistent() {
        let g = make_grid(&BoxDomain::new(vec![1.0]).unwrap(), &[20], BoundaryCondition::Dirichlet).unwrap();
        let mut j = linear_operator(&g, &[0.0; 20]);
        j.diag.iter_mut().for_each(|d| *d -= 30.0);
        let phi: Vec<f64> = (0..20).map(|i| math::sin(PI * g.coords(i)[0])).collect();
        let r1: Vec<f64> = (0..20).map(|i| math::cos(i as f64)).collect();
        let (dphi, dmu) = bordered_solve(&j, &phi, &g, &r1, 0.3).unwrap();
        let jd = apply(&j, &dphi);
        for i in 0..20 {
            assert!((jd[i] - dmu * phi[i] - r1[i]).abs() < 1e-9);
        }
        assert!((g.inner(&phi, &dphi) - 0.3).abs() < 1e-12);
    }
}
