use super::grid::GridSpec;
use super::sparse::CsrMatrix;
use crate::poly::{Axis, BivariatePoly};

/// `L = D⁺ + λΦ` along `axis`.
///
/// `D⁺` is the forward difference on the `n + 1` edges of every grid line,
/// boundary edges included, so that `D⁺ᵀD⁺` is the Dirichlet second
/// difference. `Φ = ∂φ/∂axis` is sampled at the left node of each edge. The
/// result has `n(n+1)` rows and `n²` columns.
pub fn assemble_l(phi: &BivariatePoly, lambda: f64, grid: &GridSpec, axis: Axis) -> CsrMatrix {
    let n = grid.n;
    let h = grid.h();
    let dphi = phi.partial_derivative(axis, 1).to_float();
    let xs = grid.nodes();
    let mut t = Vec::with_capacity(2 * n * (n + 1));
    for line in 0..n {
        for e in 0..=n {
            let row = line * (n + 1) + e;
            // node `k` on this line
            let index = |k: usize| match axis {
                Axis::X => line * n + k,
                Axis::Y => k * n + line,
            };
            if e < n {
                t.push((row, index(e), 1.0 / h));
            }
            if e > 0 {
                let k = e - 1;
                let (x, y) = match axis {
                    Axis::X => (xs[k], xs[line]),
                    Axis::Y => (xs[line], xs[k]),
                };
                t.push((row, index(k), -1.0 / h + lambda * dphi.eval(x, y)));
            }
        }
    }
    CsrMatrix::from_triplets(n * (n + 1), n * n, t)
}

/// The discrete Witten Laplacian `K = L1ᵀL1 + L2ᵀL2`.
pub fn assemble_witten(phi: &BivariatePoly, lambda: f64, grid: &GridSpec) -> CsrMatrix {
    let gram = |axis| {
        let l = assemble_l(phi, lambda, grid, axis);
        l.transpose().matmul(&l)
    };
    gram(Axis::X).add_scaled(1.0, &gram(Axis::Y), 1.0)
}

/// Largest `λ|∇φ|` over the nodes; `h` times this is the resolution figure
/// of the grid.
pub fn max_gradient(phi: &BivariatePoly, lambda: f64, grid: &GridSpec) -> f64 {
    let fx = phi.partial_derivative(Axis::X, 1).to_float();
    let fy = phi.partial_derivative(Axis::Y, 1).to_float();
    let xs = grid.nodes();
    let mut m: f64 = 0.0;
    for &y in &xs {
        for &x in &xs {
            m = m.max(fx.eval(x, y).hypot(fy.eval(x, y)));
        }
    }
    lambda.abs() * m
}
