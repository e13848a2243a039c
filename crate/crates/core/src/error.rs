use alloc::boxed::Box;
use alloc::string::String;

use crate::solver::SolveReport;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("axis {axis} has {nodes} nodes; at least {min} are required")]
    GridTooCoarse { axis: usize, nodes: usize, min: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("field has zero norm")]
    ZeroField,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("linear solve stalled after {iterations} iterations (relative residual {residual:e})")]
    LinearSolve { iterations: usize, residual: f64 },
    #[error("not converged after {iterations} iterations (eigen-residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64, report: Box<SolveReport> },
    #[error("symmetry violated: drift {drift:e} ({what})")]
    SymmetryViolated { drift: f64, what: &'static str },
    #[error("interaction strengths must be sorted ascending")]
    Unsorted,
    #[error("degeneracy flag inconsistent with the problem: {0}")]
    DegeneracyMismatch(String),
    #[error("unavailable: {0}")]
    Unavailable(String),
    #[error("data error: {0}")]
    Data(String),
}
