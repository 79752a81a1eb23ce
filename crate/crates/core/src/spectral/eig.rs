use serde::Serialize;

use super::amg::Amg;
use super::sparse::{dot, norm, CsrMatrix};
use crate::error::SpectralError;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 500;
const MAX_INNER: usize = 2000;

#[derive(Clone, Debug, Serialize)]
pub struct EigResult {
    pub mu: f64,
    /// `‖Kv - μv‖` for the unit vector `v`.
    pub residual: f64,
    /// `residual / max(μ + σ, floor/tol)`, where `floor = 64ε‖K‖∞` is the
    /// rounding level of `Kv`; converged exactly when this is `≤ tol`.
    pub relative_residual: f64,
    pub iterations: usize,
    /// Total preconditioned CG steps over all solves.
    pub inner_iterations: usize,
    pub converged: bool,
    #[serde(skip)]
    pub vector: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct EigOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Start vector; all ones when absent.
    pub start: Option<Vec<f64>>,
}

impl Default for EigOptions {
    fn default() -> Self {
        EigOptions { tol: DEFAULT_TOL, max_iter: DEFAULT_MAX_ITER, start: None }
    }
}

/// Smallest eigenvalue of a symmetric positive semidefinite `K`.
///
/// Inverse power iteration; each solve is preconditioned CG on `K + σI`,
/// `σ = 1e-10·trace(K)/dim`, warm-started at `v/(μ+σ)`. The next iterate is
/// the Rayleigh-Ritz minimizer over the solve result, the current and the
/// previous iterate, which contains the plain inverse-iteration step and
/// copes with nearly degenerate ground states. Stops when
/// `‖Kv - μv‖ ≤ tol·(μ+σ)` or the residual reaches the rounding floor
/// `64ε‖K‖∞`.
pub fn min_eig(k: &CsrMatrix, tol: f64, max_iter: usize) -> Result<EigResult, SpectralError> {
    let r = min_eig_with(k, &EigOptions { tol, max_iter, start: None });
    if r.converged {
        Ok(r)
    } else {
        Err(SpectralError::NoConvergence { max_iter, residual: r.relative_residual, mu: r.mu })
    }
}

/// As [`min_eig`], returning the best iterate with `converged = false`
/// instead of an error.
pub fn min_eig_with(k: &CsrMatrix, opts: &EigOptions) -> EigResult {
    let dim = k.nrows();
    assert_eq!(dim, k.ncols(), "operator must be square");
    let trace = k.trace();
    let mut v = match &opts.start {
        Some(s) if s.len() == dim && norm(s) > 0.0 => s.clone(),
        _ => vec![1.0; dim],
    };
    scale_to_unit(&mut v);
    if !(trace > 0.0) {
        // PSD with zero trace: K = 0
        return EigResult {
            mu: 0.0,
            residual: 0.0,
            relative_residual: 0.0,
            iterations: 0,
            inner_iterations: 0,
            converged: true,
            vector: v,
        };
    }
    let sigma = 1e-10 * trace / dim as f64;
    let shifted = k.shifted(sigma);
    let pre = Preconditioner::new(&shifted);
    let floor = 64.0 * f64::EPSILON * k.norm_inf();

    let mut best: Option<EigResult> = None;
    let mut inner_total = 0;
    let mut kv = vec![0.0; dim];
    let mut prev: Option<Vec<f64>> = None;
    for it in 0..=opts.max_iter {
        k.matvec_into(&v, &mut kv);
        let mu = dot(&v, &kv);
        let res = kv.iter().zip(&v).map(|(a, b)| (a - mu * b).powi(2)).sum::<f64>().sqrt();
        let denom = mu.max(0.0) + sigma;
        let scale = denom.max(floor / opts.tol);
        let converged = res <= opts.tol * scale;
        if best.as_ref().is_none_or(|b| res < b.residual) || converged {
            best = Some(EigResult {
                mu: mu.max(0.0),
                residual: res,
                relative_residual: res / scale,
                iterations: it,
                inner_iterations: inner_total,
                converged,
                vector: v.clone(),
            });
        }
        if converged || it == opts.max_iter {
            break;
        }
        let x0: Vec<f64> = v.iter().map(|x| x / denom).collect();
        let target = (0.1 * res / denom).clamp(1e-15, 0.5);
        let (w, steps) = pcg(&shifted, &pre, &v, x0, target);
        inner_total += steps;
        let mut basis = vec![w, v.clone()];
        basis.extend(prev.take());
        prev = Some(std::mem::replace(&mut v, rayleigh_ritz(k, basis)));
    }
    let mut out = best.expect("at least one iterate");
    out.inner_iterations = inner_total;
    out
}

fn scale_to_unit(v: &mut [f64]) {
    let n = norm(v);
    v.iter_mut().for_each(|x| *x /= n);
}

/// Lowest Ritz vector of `K` on the span of `basis`, normalized.
fn rayleigh_ritz(k: &CsrMatrix, basis: Vec<Vec<f64>>) -> Vec<f64> {
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(basis.len());
    for mut b in basis {
        let original = norm(&b);
        // twice is enough for orthogonality to working precision
        for _ in 0..2 {
            for e in &q {
                let c = dot(e, &b);
                b.iter_mut().zip(e).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = norm(&b);
        if n > 1e-10 * original && n > 0.0 {
            b.iter_mut().for_each(|x| *x /= n);
            q.push(b);
        }
    }
    let kq: Vec<Vec<f64>> = q.iter().map(|e| k.matvec(e)).collect();
    let m = q.len();
    let mut h = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in i..m {
            let x = 0.5 * (dot(&q[i], &kq[j]) + dot(&q[j], &kq[i]));
            h[i][j] = x;
            h[j][i] = x;
        }
    }
    let y = lowest_eigenvector(h);
    let mut v = vec![0.0; q[0].len()];
    for (c, e) in y.iter().zip(&q) {
        v.iter_mut().zip(e).for_each(|(x, e)| *x += c * e);
    }
    scale_to_unit(&mut v);
    v
}

/// Cyclic Jacobi on a small symmetric matrix.
fn lowest_eigenvector(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let m = a.len();
    let mut v: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _ in 0..50 {
        let off: f64 = (0..m).flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j].powi(2)).sum();
        let diag: f64 = (0..m).map(|i| a[i][i].powi(2)).sum();
        if off <= 1e-32 * diag.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..m {
            for r in p + 1..m {
                if a[p][r] == 0.0 {
                    continue;
                }
                let theta = (a[r][r] - a[p][p]) / (2.0 * a[p][r]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (x, y) = (row[p], row[r]);
                    row[p] = c * x - s * y;
                    row[r] = s * x + c * y;
                }
                let (lo, hi) = a.split_at_mut(r.max(p));
                let (ap, ar) = if p < r { (&mut lo[p], &mut hi[0]) } else { (&mut hi[0], &mut lo[r]) };
                for (x, y) in ap.iter_mut().zip(ar.iter_mut()) {
                    (*x, *y) = (c * *x - s * *y, s * *x + c * *y);
                }
                for row in v.iter_mut() {
                    let (x, y) = (row[p], row[r]);
                    row[p] = c * x - s * y;
                    row[r] = s * x + c * y;
                }
            }
        }
    }
    let lo = (0..m).min_by(|&i, &j| a[i][i].total_cmp(&a[j][j])).expect("nonempty");
    v.iter().map(|row| row[lo]).collect()
}

enum Preconditioner {
    Amg(Amg),
    Jacobi(Vec<f64>),
}

impl Preconditioner {
    fn new(a: &CsrMatrix) -> Self {
        let dim = a.nrows();
        let n = (dim as f64).sqrt().round() as usize;
        if n * n == dim {
            if let Some(amg) = Amg::new(a, n, n) {
                return Preconditioner::Amg(amg);
            }
        }
        Preconditioner::Jacobi(a.diag().iter().map(|d| if *d > 0.0 { 1.0 / d } else { 1.0 }).collect())
    }

    fn apply(&self, r: &[f64]) -> Vec<f64> {
        match self {
            Preconditioner::Amg(m) => m.apply(r),
            Preconditioner::Jacobi(d) => r.iter().zip(d).map(|(r, d)| r * d).collect(),
        }
    }
}

/// Preconditioned CG for `A x = b` from `x0`, until `‖b - Ax‖ ≤ tol·‖b‖`.
fn pcg(a: &CsrMatrix, pre: &Preconditioner, b: &[f64], mut x: Vec<f64>, tol: f64) -> (Vec<f64>, usize) {
    let target = tol * norm(b);
    let ax = a.matvec(&x);
    let mut r: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
    if norm(&r) <= target {
        return (x, 0);
    }
    let mut z = pre.apply(&r);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; b.len()];
    for step in 1..=MAX_INNER {
        a.matvec_into(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return (x, step);
        }
        let alpha = rz / pap;
        x.iter_mut().zip(&p).for_each(|(x, p)| *x += alpha * p);
        r.iter_mut().zip(&ap).for_each(|(r, ap)| *r -= alpha * ap);
        if norm(&r) <= target {
            return (x, step);
        }
        z = pre.apply(&r);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        p.iter_mut().zip(&z).for_each(|(p, z)| *p = z + beta * *p);
    }
    (x, MAX_INNER)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_identity() {
        let k = CsrMatrix::diagonal(&[3.5; 50]);
        let r = min_eig(&k, 1e-8, 100).unwrap();
        assert!((r.mu - 3.5).abs() < 1e-12);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn diagonal_smallest_entry() {
        let d: Vec<f64> = (0..30).map(|i| 1.0 + i as f64).collect();
        let r = min_eig(&CsrMatrix::diagonal(&d), 1e-10, 500).unwrap();
        assert!((r.mu - 1.0).abs() < 1e-10);
    }

    #[test]
    fn small_jacobi() {
        let y = lowest_eigenvector(vec![vec![2.0, 1.0, 0.0], vec![1.0, 2.0, 0.0], vec![0.0, 0.0, 5.0]]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((y[0].abs() - s).abs() < 1e-14 && (y[0] + y[1]).abs() < 1e-14 && y[2] == 0.0);
    }

    #[test]
    fn close_pair() {
        let mut d: Vec<f64> = (0..40).map(|i| 2.0 + i as f64).collect();
        d[0] = 1.0;
        d[1] = 1.0 + 1e-4;
        let r = min_eig(&CsrMatrix::diagonal(&d), 1e-10, 500).unwrap();
        assert!((r.mu - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_operator() {
        let k = CsrMatrix::from_triplets(4, 4, vec![]);
        assert_eq!(min_eig(&k, 1e-8, 10).unwrap().mu, 0.0);
    }

    #[test]
    fn no_convergence_reports_best() {
        let d: Vec<f64> = (0..30).map(|i| 1.0 + i as f64).collect();
        match min_eig(&CsrMatrix::diagonal(&d), 1e-14, 1) {
            Err(SpectralError::NoConvergence { max_iter: 1, mu, .. }) => assert!(mu > 1.0 && mu < 30.0),
            other => panic!("{other:?}"),
        }
    }
}
