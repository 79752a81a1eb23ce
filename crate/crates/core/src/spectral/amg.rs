//! Smoothed-aggregation multigrid for the grid operators, used as a
//! preconditioner. Aggregates are 2×2 blocks of the tensor grid.

use super::sparse::CsrMatrix;

/// Levels at or below this size are solved with a dense Cholesky factor.
const COARSE_DIM: usize = 400;

struct Level {
    a: CsrMatrix,
    diag: Vec<f64>,
    /// Prolongation to this level from the next coarser one.
    p: CsrMatrix,
    r: CsrMatrix,
}

pub struct Amg {
    levels: Vec<Level>,
    coarse: DenseCholesky,
}

impl Amg {
    /// Builds the hierarchy for an SPD matrix on an `nx × ny` grid
    /// (unknown `(i, j)` at `j·nx + i`).
    pub fn new(a: &CsrMatrix, nx: usize, ny: usize) -> Option<Self> {
        assert_eq!(a.nrows(), nx * ny);
        let mut levels = Vec::new();
        let mut a = a.clone();
        let (mut nx, mut ny) = (nx, ny);
        while a.nrows() > COARSE_DIM && nx > 1 && ny > 1 {
            let (cx, cy) = (nx.div_ceil(2), ny.div_ceil(2));
            let tentative = aggregate(nx, ny);
            let diag = a.diag();
            if diag.iter().any(|d| !(*d > 0.0)) {
                return None;
            }
            let p = smooth_prolongation(&a, &diag, &tentative);
            let r = p.transpose();
            let coarse = r.matmul(&a.matmul(&p));
            levels.push(Level { a, diag, p, r });
            a = coarse;
            nx = cx;
            ny = cy;
        }
        let coarse = DenseCholesky::new(&a)?;
        Some(Amg { levels, coarse })
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len() + 1
    }

    /// One symmetric V-cycle applied to `b` with zero initial guess.
    pub fn apply(&self, b: &[f64]) -> Vec<f64> {
        self.cycle(0, b)
    }

    fn cycle(&self, k: usize, b: &[f64]) -> Vec<f64> {
        if k == self.levels.len() {
            return self.coarse.solve(b);
        }
        let lv = &self.levels[k];
        let mut x = vec![0.0; b.len()];
        gauss_seidel(&lv.a, &lv.diag, b, &mut x, true);
        gauss_seidel(&lv.a, &lv.diag, b, &mut x, false);
        let ax = lv.a.matvec(&x);
        let res: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let ec = self.cycle(k + 1, &lv.r.matvec(&res));
        let e = lv.p.matvec(&ec);
        for (xi, ei) in x.iter_mut().zip(&e) {
            *xi += ei;
        }
        gauss_seidel(&lv.a, &lv.diag, b, &mut x, false);
        gauss_seidel(&lv.a, &lv.diag, b, &mut x, true);
        x
    }
}

fn gauss_seidel(a: &CsrMatrix, diag: &[f64], b: &[f64], x: &mut [f64], forward: bool) {
    let n = a.nrows();
    let mut sweep = |r: usize| {
        let (cols, vals) = a.row(r);
        let mut s = b[r];
        for (&c, &v) in cols.iter().zip(vals) {
            if c != r {
                s -= v * x[c];
            }
        }
        x[r] = s / diag[r];
    };
    if forward {
        (0..n).for_each(&mut sweep);
    } else {
        (0..n).rev().for_each(&mut sweep);
    }
}

/// Piecewise-constant prolongation from 2×2 aggregates.
fn aggregate(nx: usize, ny: usize) -> CsrMatrix {
    let cx = nx.div_ceil(2);
    let mut t = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            t.push((j * nx + i, (j / 2) * cx + i / 2, 1.0));
        }
    }
    CsrMatrix::from_triplets(nx * ny, cx * ny.div_ceil(2), t)
}

/// `(I - ω D⁻¹A) P` with `ω = 4/(3ρ)`, `ρ` a Gershgorin bound on `ρ(D⁻¹A)`.
fn smooth_prolongation(a: &CsrMatrix, diag: &[f64], tentative: &CsrMatrix) -> CsrMatrix {
    let rho = (0..a.nrows())
        .map(|r| a.row(r).1.iter().map(|v| v.abs()).sum::<f64>() / diag[r])
        .fold(0.0, f64::max);
    let omega = 4.0 / (3.0 * rho);
    let inv: Vec<f64> = diag.iter().map(|d| omega / d).collect();
    let dinv_a = CsrMatrix::diagonal(&inv).matmul(a);
    tentative.add_scaled(1.0, &dinv_a.matmul(tentative), -1.0)
}

/// Dense Cholesky factor of a small SPD matrix.
pub struct DenseCholesky {
    n: usize,
    l: Vec<f64>,
}

impl DenseCholesky {
    pub fn new(a: &CsrMatrix) -> Option<Self> {
        let n = a.nrows();
        let mut l = vec![0.0; n * n];
        for (i, row) in a.to_dense().into_iter().enumerate() {
            l[i * n..i * n + n].copy_from_slice(&row);
        }
        for j in 0..n {
            let mut d = l[j * n + j];
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if !(d > 0.0) {
                return None;
            }
            let d = d.sqrt();
            l[j * n + j] = d;
            for i in j + 1..n {
                let mut s = l[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / d;
            }
        }
        Some(DenseCholesky { n, l })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, l) = (self.n, &self.l);
        let mut x = b.to_vec();
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= l[i * n + k] * x[k];
            }
            x[i] = s / l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= l[k * n + i] * x[k];
            }
            x[i] = s / l[i * n + i];
        }
        x
    }
}
