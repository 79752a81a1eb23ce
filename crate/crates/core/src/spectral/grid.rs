use serde::Serialize;

use crate::error::SpectralError;

/// Uniform Dirichlet grid on `(-δ, δ)²` with `n` interior nodes per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub delta: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn new(delta: f64, n: usize) -> Result<Self, SpectralError> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(SpectralError::InvalidParameter(format!("delta must be positive, got {delta}")));
        }
        if n == 0 {
            return Err(SpectralError::InvalidParameter("grid needs at least one interior node".into()));
        }
        Ok(GridSpec { delta, n })
    }

    pub fn h(&self) -> f64 {
        2.0 * self.delta / (self.n as f64 + 1.0)
    }

    /// Coordinate of interior node `i` (0-based): `-δ + (i+1)h`.
    pub fn node(&self, i: usize) -> f64 {
        -self.delta + (i as f64 + 1.0) * self.h()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Number of unknowns, `n²`; unknown `(i, j)` sits at index `j·n + i`.
    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    /// Samples `f` at the nodes in unknown order.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        let xs = self.nodes();
        let mut v = Vec::with_capacity(self.dim());
        for &y in &xs {
            for &x in &xs {
                v.push(f(x, y));
            }
        }
        v
    }
}

/// Bilinear interpolation of a grid function onto another grid on the same
/// box, with zero Dirichlet values outside.
pub fn interpolate(v: &[f64], from: &GridSpec, to: &GridSpec) -> Vec<f64> {
    let n = from.n;
    let h = from.h();
    let at = |i: isize, j: isize| -> f64 {
        if i < 0 || j < 0 || i >= n as isize || j >= n as isize {
            0.0
        } else {
            v[j as usize * n + i as usize]
        }
    };
    // Position in units of h measured from the left boundary node, minus one.
    let locate = |x: f64| -> (isize, f64) {
        let s = (x + from.delta) / h - 1.0;
        let i = s.floor();
        (i as isize, s - i)
    };
    to.sample(|x, y| {
        let (i, fx) = locate(x);
        let (j, fy) = locate(y);
        (1.0 - fx) * (1.0 - fy) * at(i, j)
            + fx * (1.0 - fy) * at(i + 1, j)
            + (1.0 - fx) * fy * at(i, j + 1)
            + fx * fy * at(i + 1, j + 1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_and_spacing() {
        let g = GridSpec::new(1.0, 2).unwrap();
        assert!((g.h() - 2.0 / 3.0).abs() < 1e-15);
        assert!((g.node(0) + 1.0 / 3.0).abs() < 1e-15);
        assert!((g.node(1) - 1.0 / 3.0).abs() < 1e-15);
        assert!(GridSpec::new(0.0, 4).is_err());
        assert!(GridSpec::new(1.0, 0).is_err());
    }

    #[test]
    fn interpolation_reproduces_bilinear_functions() {
        let a = GridSpec::new(0.5, 7).unwrap();
        let b = GridSpec::new(0.5, 16).unwrap();
        // vanishes on the boundary, bilinear on each cell away from it
        let f = |x: f64, y: f64| (0.25 - x * x) * (0.25 - y * y);
        let vb = interpolate(&a.sample(f), &a, &b);
        let exact = b.sample(f);
        let err = vb.iter().zip(&exact).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        assert!(err < a.h() * a.h());
        let same = interpolate(&a.sample(f), &a, &a);
        let err = same.iter().zip(a.sample(f)).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        assert!(err < 1e-15);
    }
}
