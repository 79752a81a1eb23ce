use rayon::prelude::*;
use serde::Serialize;

use super::assemble::{assemble_witten, max_gradient};
use super::eig::{min_eig_with, EigOptions, EigResult, DEFAULT_MAX_ITER, DEFAULT_TOL};
use super::grid::{interpolate, GridSpec};
use crate::error::SpectralError;
use crate::poly::BivariatePoly;
use crate::report::ser_f64;

/// How the grid is chosen for each `λ`.
#[derive(Clone, Debug, Serialize)]
pub struct GridPolicy {
    #[serde(serialize_with = "ser_f64")]
    pub delta: f64,
    pub n_start: usize,
    pub n_max: usize,
    /// Accept `μ(2n)` once `|μ(n) − μ(2n)| < rel_tol·μ(2n)`.
    #[serde(serialize_with = "ser_f64")]
    pub rel_tol: f64,
    /// Grids with `h·max λ|∇φ|` above this are not trusted.
    #[serde(serialize_with = "ser_f64")]
    pub resolution: f64,
    #[serde(serialize_with = "ser_f64")]
    pub eig_tol: f64,
    pub max_iter: usize,
}

impl Default for GridPolicy {
    fn default() -> Self {
        GridPolicy {
            delta: 0.5,
            n_start: 64,
            n_max: 1024,
            rel_tol: 1e-3,
            resolution: 2.0,
            eig_tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

impl GridPolicy {
    /// A single grid of size `n`, no refinement.
    pub fn fixed(delta: f64, n: usize) -> Self {
        GridPolicy { delta, n_start: n, n_max: n, ..Default::default() }
    }

    fn validate(&self) -> Result<(), SpectralError> {
        GridSpec::new(self.delta, self.n_start)?;
        if self.n_max < self.n_start {
            return Err(SpectralError::InvalidParameter("n_max must be at least n_start".into()));
        }
        if !(self.eig_tol > 0.0 && self.rel_tol > 0.0 && self.resolution > 0.0) {
            return Err(SpectralError::InvalidParameter("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    #[serde(serialize_with = "ser_f64")]
    pub lambda: f64,
    #[serde(serialize_with = "ser_f64")]
    pub mu_min: f64,
    pub n_used: usize,
    /// Eigensolver converged and the accepted grid resolves `λ∇φ`.
    pub converged: bool,
    /// Relative eigenresidual of the accepted pair, see [`EigResult::relative_residual`].
    #[serde(serialize_with = "ser_f64")]
    pub residual: f64,
}

/// Smallest eigenvalue of `K` at one `λ` under the refinement policy.
pub fn solve_lambda(phi: &BivariatePoly, lambda: f64, policy: &GridPolicy) -> Result<SweepRecord, SpectralError> {
    policy.validate()?;
    let mut n = policy.n_start;
    let mut prev: Option<(GridSpec, EigResult)> = None;
    loop {
        let grid = GridSpec::new(policy.delta, n)?;
        let resolved = grid.h() * max_gradient(phi, lambda, &grid) <= policy.resolution;
        let last = n * 2 > policy.n_max;
        if !resolved && !last {
            n *= 2;
            continue;
        }
        let k = assemble_witten(phi, lambda, &grid);
        let start = prev.as_ref().map(|(g, r)| interpolate(&r.vector, g, &grid));
        let r = min_eig_with(&k, &EigOptions { tol: policy.eig_tol, max_iter: policy.max_iter, start });
        let record = SweepRecord {
            lambda,
            mu_min: r.mu,
            n_used: n,
            converged: r.converged && resolved,
            residual: r.relative_residual,
        };
        if let Some((_, p)) = &prev {
            if (p.mu - r.mu).abs() < policy.rel_tol * r.mu {
                return Ok(record);
            }
        }
        if last {
            return Ok(record);
        }
        prev = Some((grid, r));
        n *= 2;
    }
}

/// One record per `λ`, computed in parallel and returned in input order.
pub fn sweep(phi: &BivariatePoly, lambdas: &[f64], policy: &GridPolicy) -> Result<Vec<SweepRecord>, SpectralError> {
    if lambdas.is_empty() {
        return Err(SpectralError::InvalidParameter("lambda list is empty".into()));
    }
    if lambdas.windows(2).any(|w| !(w[0] < w[1])) || lambdas.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
        return Err(SpectralError::InvalidParameter("lambda list must be finite, nonnegative and increasing".into()));
    }
    policy.validate()?;
    lambdas.par_iter().map(|&l| solve_lambda(phi, l, policy)).collect()
}

/// `start·factor^k` for `k = 0..count`.
pub fn geometric_lambdas(start: f64, factor: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| start * factor.powi(k as i32)).collect()
}
