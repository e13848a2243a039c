//! Linear solvers for the implicit gradient-flow step and Newton updates.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Tridiagonal matrix with sub-diagonal `lower[i]` (row `i`, column `i-1`),
/// diagonal `diag[i]` and super-diagonal `upper[i]` (row `i`, column `i+1`).
/// `lower[0]` and `upper[n-1]` couple the ends for cyclic systems and are
/// ignored otherwise.
#[derive(Debug, Clone)]
pub(crate) struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    /// Thomas elimination without pivoting; the matrix must be diagonally
    /// dominant.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        let mut c = vec![0.0; n];
        let mut x = vec![0.0; n];
        let mut denom = self.diag[0];
        if denom == 0.0 {
            return Err(Error::LinearSolve { iterations: 0, residual: f64::INFINITY });
        }
        c[0] = self.upper[0] / denom;
        x[0] = rhs[0] / denom;
        for i in 1..n {
            denom = self.diag[i] - self.lower[i] * c[i - 1];
            if denom == 0.0 {
                return Err(Error::LinearSolve { iterations: i, residual: f64::INFINITY });
            }
            c[i] = if i + 1 < n { self.upper[i] / denom } else { 0.0 };
            x[i] = (rhs[i] - self.lower[i] * x[i - 1]) / denom;
        }
        for i in (0..n - 1).rev() {
            x[i] -= c[i] * x[i + 1];
        }
        finite(x)
    }

    /// Solve the cyclic system (corner entries `lower[0]`, `upper[n-1]`) by
    /// Sherman-Morrison on top of [`Tridiagonal::solve`].
    pub fn solve_cyclic(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        let alpha = self.upper[n - 1]; // row n-1, column 0
        let beta = self.lower[0]; // row 0, column n-1
        let gamma = -self.diag[0];
        let mut reduced = self.clone();
        reduced.diag[0] -= gamma;
        reduced.diag[n - 1] -= alpha * beta / gamma;
        let x = reduced.solve(rhs)?;
        let mut u = vec![0.0; n];
        u[0] = gamma;
        u[n - 1] = alpha;
        let z = reduced.solve(&u)?;
        let fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
        finite(x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect())
    }

    /// Gaussian elimination with partial pivoting (one extra fill-in
    /// diagonal), for indefinite systems.
    pub fn solve_pivoted(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        let mut dl: Vec<f64> = (0..n).map(|i| if i > 0 { self.lower[i] } else { 0.0 }).collect();
        let mut d = self.diag.clone();
        let mut du: Vec<f64> = (0..n).map(|i| if i + 1 < n { self.upper[i] } else { 0.0 }).collect();
        let mut du2 = vec![0.0; n];
        let mut b = rhs.to_vec();
        for i in 0..n - 1 {
            // dl[i + 1] is the sub-diagonal entry below d[i]
            if math::abs(d[i]) >= math::abs(dl[i + 1]) {
                if d[i] == 0.0 {
                    return Err(Error::LinearSolve { iterations: i, residual: f64::INFINITY });
                }
                let f = dl[i + 1] / d[i];
                d[i + 1] -= f * du[i];
                b[i + 1] -= f * b[i];
                dl[i + 1] = 0.0;
            } else {
                let f = d[i] / dl[i + 1];
                d[i] = dl[i + 1];
                let tmp = d[i + 1];
                d[i + 1] = du[i] - f * tmp;
                du[i] = tmp;
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -f;
                }
                b.swap(i, i + 1);
                b[i + 1] -= f * b[i];
            }
        }
        if d[n - 1] == 0.0 {
            return Err(Error::LinearSolve { iterations: n, residual: f64::INFINITY });
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= du[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= du2[i] * x[i + 2];
            }
            x[i] = s / d[i];
        }
        finite(x)
    }

    /// `A x` (non-cyclic).
    #[cfg(test)]
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.upper[i] * x[i + 1];
                }
                s
            })
            .collect()
    }
}

fn finite(x: Vec<f64>) -> Result<Vec<f64>> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(x)
    } else {
        Err(Error::NonFinite("linear solve"))
    }
}

/// Preconditioned conjugate gradients for an operator that is symmetric
/// positive definite in the inner product `⟨u, v⟩ = Σ w_i u_i v_i`, with a
/// diagonal preconditioner. `x` holds the initial guess and receives the
/// solution. Returns the iteration count.
pub(crate) fn pcg(
    apply: impl Fn(&[f64], &mut [f64]),
    diag: &[f64],
    weights: &[f64],
    b: &[f64],
    x: &mut [f64],
    rel_tol: f64,
    max_iter: usize,
) -> Result<usize> {
    let n = b.len();
    let dot = |u: &[f64], v: &[f64]| -> f64 { (0..n).map(|i| weights[i] * u[i] * v[i]).sum() };
    let b_norm = math::sqrt(dot(b, b));
    if b_norm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(0);
    }
    let mut ax = vec![0.0; n];
    apply(x, &mut ax);
    let mut r: Vec<f64> = (0..n).map(|i| b[i] - ax[i]).collect();
    let mut z: Vec<f64> = (0..n).map(|i| r[i] / diag[i]).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut q = vec![0.0; n];
    let mut res = math::sqrt(dot(&r, &r)) / b_norm;
    for it in 0..max_iter {
        if res <= rel_tol {
            return Ok(it);
        }
        apply(&p, &mut q);
        let pq = dot(&p, &q);
        if !(pq > 0.0) {
            return Err(Error::LinearSolve { iterations: it, residual: res });
        }
        let alpha = rz / pq;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
            z[i] = r[i] / diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        res = math::sqrt(dot(&r, &r)) / b_norm;
    }
    if res <= rel_tol {
        Ok(max_iter)
    } else {
        Err(Error::LinearSolve { iterations: max_iter, residual: res })
    }
}
