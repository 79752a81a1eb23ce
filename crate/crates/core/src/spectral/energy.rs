use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::assemble::assemble_l;
use super::grid::GridSpec;
use super::sparse::dot;
use crate::poly::{Axis, BivariatePoly};

/// Relative defect of the integration-by-parts identity
/// `‖L1u‖² = ‖∂xu‖² + ‖λ∂xφ u‖² − λ⟨∂x²φ u, u⟩` on the grid:
///
/// `|‖D⁺u‖² + ‖λΦu‖² − ‖L1u‖² − λ⟨S u, u⟩| / (1 + ‖L1u‖²)`
///
/// with `h²`-weighted norms and `S` the nodal values of `∂x²φ`. Zero for
/// `φ = 0`, `O(h)` for smooth `u`.
pub fn energy_identity_check(phi: &BivariatePoly, lambda: f64, grid: &GridSpec, u: &[f64]) -> f64 {
    assert_eq!(u.len(), grid.dim());
    let w = grid.h() * grid.h();
    let d = assemble_l(phi, 0.0, grid, Axis::X).matvec(u);
    let l1 = assemble_l(phi, lambda, grid, Axis::X).matvec(u);
    let fx = phi.partial_derivative(Axis::X, 1).to_float();
    let fxx = phi.partial_derivative(Axis::X, 2).to_float();
    let xs = grid.nodes();
    let (mut pot, mut second) = (0.0, 0.0);
    for (j, &y) in xs.iter().enumerate() {
        for (i, &x) in xs.iter().enumerate() {
            let ui = u[j * grid.n + i];
            pot += (lambda * fx.eval(x, y) * ui).powi(2);
            second += fxx.eval(x, y) * ui * ui;
        }
    }
    let l1n = w * dot(&l1, &l1);
    let defect = w * (dot(&d, &d) + pot - lambda * second) - l1n;
    defect.abs() / (1.0 + l1n)
}

/// A smooth Dirichlet test function on the box: a random double sine
/// series with `terms²` modes and coefficients `N(0,1)/(kl)²`. The same seed
/// gives the same continuum function on every grid of the same box.
pub fn smooth_test_function(grid: &GridSpec, terms: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = vec![0.0; terms * terms];
    for k in 1..=terms {
        for l in 1..=terms {
            let z: f64 = StandardNormal.sample(&mut rng);
            c[(k - 1) * terms + (l - 1)] = z / ((k * l) as f64).powi(2);
        }
    }
    let d = grid.delta;
    let w = std::f64::consts::PI / (2.0 * d);
    grid.sample(|x, y| {
        let mut s = 0.0;
        for k in 1..=terms {
            let sx = (k as f64 * w * (x + d)).sin();
            for l in 1..=terms {
                s += c[(k - 1) * terms + (l - 1)] * sx * (l as f64 * w * (y + d)).sin();
            }
        }
        s
    })
}

/// `log(r_coarse/r_fine) / log(h_coarse/h_fine)`.
pub fn observed_order(coarse: (f64, f64), fine: (f64, f64)) -> f64 {
    let ((hc, rc), (hf, rf)) = (coarse, fine);
    (rc / rf).ln() / (hc / hf).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    #[test]
    fn zero_potential_is_exact() {
        let g = GridSpec::new(0.5, 20).unwrap();
        let u = smooth_test_function(&g, 4, 1);
        assert_eq!(energy_identity_check(&parse_poly("0").unwrap(), 10.0, &g, &u), 0.0);
    }

    #[test]
    fn linear_potential_first_order() {
        let phi = parse_poly("x").unwrap();
        let r = |n| {
            let g = GridSpec::new(0.5, n).unwrap();
            (g.h(), energy_identity_check(&phi, 3.0, &g, &smooth_test_function(&g, 4, 9)))
        };
        let (a, b) = (r(64), r(128));
        assert!(a.1 > 0.0 && observed_order(a, b) >= 0.9, "{a:?} {b:?}");
    }
}
