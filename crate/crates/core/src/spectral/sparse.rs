use rayon::prelude::*;

/// Compressed sparse row matrix. Column indices are sorted within each row
/// and unique.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

/// Below this many rows products run sequentially.
const PAR_ROWS: usize = 1 << 14;
const DOT_CHUNK: usize = 4096;

impl CsrMatrix {
    /// Builds from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(nrows: usize, ncols: usize, mut t: Vec<(usize, usize, f64)>) -> Self {
        t.sort_unstable_by_key(|e| (e.0, e.1));
        let mut indptr = vec![0; nrows + 1];
        let mut indices = Vec::with_capacity(t.len());
        let mut values: Vec<f64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in t {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) out of bounds");
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                values.push(v);
                indptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..nrows {
            indptr[r + 1] += indptr[r];
        }
        CsrMatrix { nrows, ncols, indptr, indices, values }
    }

    pub fn identity(n: usize) -> Self {
        CsrMatrix { nrows: n, ncols: n, indptr: (0..=n).collect(), indices: (0..n).collect(), values: vec![1.0; n] }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Self::identity(d.len());
        m.values.copy_from_slice(d);
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn indptr(&self) -> &[usize] {
        &self.indptr
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.indptr[r], self.indptr[r + 1]);
        (&self.indices[a..b], &self.values[a..b])
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (cols, vals) = self.row(r);
        cols.binary_search(&c).map_or(0.0, |k| vals[k])
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diag().iter().sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `‖A‖_∞`, the largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.nrows).map(|r| self.row(r).1.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// `y = A x`
    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        let row = |r: usize| -> f64 {
            let (a, b) = (self.indptr[r], self.indptr[r + 1]);
            let mut s = 0.0;
            for k in a..b {
                s += self.values[k] * x[self.indices[k]];
            }
            s
        };
        if self.nrows >= PAR_ROWS {
            y.par_iter_mut().enumerate().for_each(|(r, yr)| *yr = row(r));
        } else {
            y.iter_mut().enumerate().for_each(|(r, yr)| *yr = row(r));
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.ncols + 1];
        for &c in &self.indices {
            counts[c + 1] += 1;
        }
        for c in 0..self.ncols {
            counts[c + 1] += counts[c];
        }
        let indptr = counts.clone();
        let mut next = counts;
        let mut indices = vec![0; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                let k = next[c];
                indices[k] = r;
                values[k] = v;
                next[c] += 1;
            }
        }
        CsrMatrix { nrows: self.ncols, ncols: self.nrows, indptr, indices, values }
    }

    /// Sparse product `A B` (Gustavson, dense accumulator per row).
    pub fn matmul(&self, b: &CsrMatrix) -> Self {
        assert_eq!(self.ncols, b.nrows);
        let ncols = b.ncols;
        let row_product = |r: usize, acc: &mut Vec<f64>, mark: &mut Vec<usize>, out: &mut Vec<(usize, f64)>| {
            out.clear();
            let (ac, av) = self.row(r);
            for (&k, &a) in ac.iter().zip(av) {
                let (bc, bv) = b.row(k);
                for (&c, &bval) in bc.iter().zip(bv) {
                    if mark[c] != r + 1 {
                        mark[c] = r + 1;
                        acc[c] = 0.0;
                        out.push((c, 0.0));
                    }
                    acc[c] += a * bval;
                }
            }
            for e in out.iter_mut() {
                e.1 = acc[e.0];
            }
            out.sort_unstable_by_key(|e| e.0);
        };
        let chunk = 4096;
        let rows: Vec<Vec<(usize, f64)>> = (0..self.nrows.div_ceil(chunk))
            .into_par_iter()
            .flat_map_iter(|ci| {
                let mut acc = vec![0.0; ncols];
                let mut mark = vec![0usize; ncols];
                let mut tmp = Vec::new();
                let lo = ci * chunk;
                let hi = (lo + chunk).min(self.nrows);
                (lo..hi)
                    .map(|r| {
                        row_product(r, &mut acc, &mut mark, &mut tmp);
                        tmp.clone()
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut indptr = Vec::with_capacity(self.nrows + 1);
        indptr.push(0);
        let nnz: usize = rows.iter().map(Vec::len).sum();
        let mut indices = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        for r in rows {
            for (c, v) in r {
                indices.push(c);
                values.push(v);
            }
            indptr.push(indices.len());
        }
        CsrMatrix { nrows: self.nrows, ncols, indptr, indices, values }
    }

    /// `αA + βB`
    pub fn add_scaled(&self, alpha: f64, b: &CsrMatrix, beta: f64) -> Self {
        assert_eq!((self.nrows, self.ncols), (b.nrows, b.ncols));
        let mut indptr = vec![0];
        let mut indices = Vec::with_capacity(self.nnz() + b.nnz());
        let mut values = Vec::with_capacity(self.nnz() + b.nnz());
        for r in 0..self.nrows {
            let (ac, av) = self.row(r);
            let (bc, bv) = b.row(r);
            let (mut i, mut j) = (0, 0);
            while i < ac.len() || j < bc.len() {
                let take_a = j >= bc.len() || (i < ac.len() && ac[i] <= bc[j]);
                let take_b = i >= ac.len() || (j < bc.len() && bc[j] <= ac[i]);
                let (c, v) = match (take_a, take_b) {
                    (true, true) => {
                        let out = (ac[i], alpha * av[i] + beta * bv[j]);
                        i += 1;
                        j += 1;
                        out
                    }
                    (true, false) => {
                        let out = (ac[i], alpha * av[i]);
                        i += 1;
                        out
                    }
                    _ => {
                        let out = (bc[j], beta * bv[j]);
                        j += 1;
                        out
                    }
                };
                indices.push(c);
                values.push(v);
            }
            indptr.push(indices.len());
        }
        CsrMatrix { nrows: self.nrows, ncols: self.ncols, indptr, indices, values }
    }

    /// `A + σI`
    pub fn shifted(&self, sigma: f64) -> Self {
        self.add_scaled(1.0, &Self::diagonal(&vec![sigma; self.nrows]), 1.0)
    }

    /// `max |A_ij - A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        if self.nrows != self.ncols {
            return f64::INFINITY;
        }
        let t = self.transpose();
        self.add_scaled(1.0, &t, -1.0).max_abs()
    }

    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        self.asymmetry() <= rel_tol * self.max_abs()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.ncols]; self.nrows];
        for (r, row) in d.iter_mut().enumerate() {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                row[c] = v;
            }
        }
        d
    }
}

/// Inner product. Partial sums are taken over fixed-size chunks and added
/// in order, so the result does not depend on the thread count.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let chunk = |(x, y): (&[f64], &[f64])| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>();
    if a.len() >= PAR_ROWS {
        let parts: Vec<f64> = a.par_chunks(DOT_CHUNK).zip(b.par_chunks(DOT_CHUNK)).map(chunk).collect();
        parts.iter().sum()
    } else {
        a.chunks(DOT_CHUNK).zip(b.chunks(DOT_CHUNK)).map(chunk).sum()
    }
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
