//! Dense linear algebra over generic scalars.
//!
//! nalgebra is used for the f64-only diagnostics (singular values, rank,
//! condition numbers). Everything that must carry derivatives goes through
//! [`Mat`] and the full-pivot LU below, whose pivot choice looks only at real
//! parts so that dual parts follow the same elimination path.

use crate::error::{GeomError, Result};
use crate::scalar::Scalar;
use nalgebra::DMatrix;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Build from column vectors; `nrows` is needed when `cols` is empty.
    pub fn from_cols(nrows: usize, cols: &[Vec<S>]) -> Self {
        Self::from_fn(nrows, cols.len(), |i, j| cols[j][i])
    }

    pub fn from_rows(ncols: usize, rows: &[Vec<S>]) -> Self {
        Self::from_fn(rows.len(), ncols, |i, j| rows[i][j])
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn cols_vec(&self) -> Vec<Vec<S>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<S> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul(&self, o: &Mat<S>) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..o.cols {
                    let b = o[(k, j)];
                    out.data[i * o.cols + j] += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for j in 0..self.cols {
                    acc += self[(i, j)] * v[j];
                }
                acc
            })
            .collect()
    }

    /// `vᵀ M` as a vector.
    pub fn tmul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.rows, v.len(), "vector-matrix shape");
        (0..self.cols)
            .map(|j| {
                let mut acc = S::zero();
                for i in 0..self.rows {
                    acc += v[i] * self[(i, j)];
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Mat<S>) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(&a, &b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Mat<S>) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(&a, &b)| a - b).collect() }
    }

    pub fn scale(&self, k: S) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| a * k).collect() }
    }

    /// Horizontal concatenation.
    pub fn hcat(blocks: &[&Mat<S>]) -> Self {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hcat row mismatch");
            for i in 0..rows {
                for j in 0..b.cols {
                    out[(i, off + j)] = b[(i, j)];
                }
            }
            off += b.cols;
        }
        out
    }

    /// Vertical concatenation.
    pub fn vcat(blocks: &[&Mat<S>]) -> Self {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vcat column mismatch");
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Mat { rows, cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])])
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)])
    }

    pub fn col_range(&self, start: usize, end: usize) -> Self {
        Self::from_fn(self.rows, end - start, |i, j| self[(i, start + j)])
    }

    /// Real parts as an f64 matrix.
    pub fn re(&self) -> Mat<f64> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.re()).collect() }
    }

    /// `Aᵀ G B`.
    pub fn gram(a: &Mat<S>, g: &Mat<S>, b: &Mat<S>) -> Self {
        a.transpose().mul(&g.mul(b))
    }

    pub fn solve(&self, rhs: &Mat<S>) -> Result<Mat<S>> {
        Lu::new(self)?.solve(rhs)
    }

    pub fn solve_vec(&self, rhs: &[S]) -> Result<Vec<S>> {
        Lu::new(self)?.solve_vec(rhs)
    }

    pub fn inverse(&self) -> Result<Mat<S>> {
        Lu::new(self)?.solve(&Mat::identity(self.rows))
    }
}

impl<S> std::ops::Index<(usize, usize)> for Mat<S> {
    type Output = S;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Mat<S> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factorisation with complete pivoting, `P A Q = L U`.
pub struct Lu<S> {
    n: usize,
    lu: Mat<S>,
    row_perm: Vec<usize>,
    col_perm: Vec<usize>,
}

impl<S: Scalar> Lu<S> {
    pub fn new(a: &Mat<S>) -> Result<Self> {
        if a.rows != a.cols {
            return Err(GeomError::Dimension(format!("LU of a {}x{} matrix", a.rows, a.cols)));
        }
        let n = a.rows;
        let mut lu = a.clone();
        let mut row_perm: Vec<usize> = (0..n).collect();
        let mut col_perm: Vec<usize> = (0..n).collect();
        let scale = a.data.iter().fold(0.0f64, |m, x| m.max(x.re().abs()));
        for k in 0..n {
            let (mut pi, mut pj, mut best) = (k, k, -1.0);
            for i in k..n {
                for j in k..n {
                    let v = lu[(i, j)].re().abs();
                    if v > best {
                        best = v;
                        pi = i;
                        pj = j;
                    }
                }
            }
            if best <= scale * 1e-15 || best == 0.0 {
                return Err(GeomError::Degenerate {
                    what: format!("singular {n}x{n} matrix at elimination step {k}"),
                    cond: f64::INFINITY,
                });
            }
            if pi != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, pi * n + j);
                }
                row_perm.swap(k, pi);
            }
            if pj != k {
                for i in 0..n {
                    lu.data.swap(i * n + k, i * n + pj);
                }
                col_perm.swap(k, pj);
            }
            let piv = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / piv;
                lu[(i, k)] = f;
                for j in k + 1..n {
                    let t = lu[(k, j)];
                    lu[(i, j)] -= f * t;
                }
            }
        }
        Ok(Lu { n, lu, row_perm, col_perm })
    }

    pub fn solve_vec(&self, b: &[S]) -> Result<Vec<S>> {
        let n = self.n;
        if b.len() != n {
            return Err(GeomError::Dimension(format!("rhs of length {} for n = {n}", b.len())));
        }
        let mut y: Vec<S> = self.row_perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            for j in 0..i {
                let t = self.lu[(i, j)] * y[j];
                y[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = self.lu[(i, j)] * y[j];
                y[i] -= t;
            }
            y[i] = y[i] / self.lu[(i, i)];
        }
        let mut x = vec![S::zero(); n];
        for (k, &c) in self.col_perm.iter().enumerate() {
            x[c] = y[k];
        }
        Ok(x)
    }

    pub fn solve(&self, b: &Mat<S>) -> Result<Mat<S>> {
        let cols: Result<Vec<Vec<S>>> = (0..b.cols).map(|j| self.solve_vec(&b.col(j))).collect();
        Ok(Mat::from_cols(self.n, &cols?))
    }
}

/// Fixed elimination pattern for a smooth null-space basis.
///
/// Chosen once from a reference matrix; applying it to nearby matrices of the
/// same rank yields a basis that depends smoothly on the entries, because no
/// pivoting decision is re-made.
#[derive(Clone, Debug, PartialEq)]
pub struct PivotPattern {
    pub rows: Vec<usize>,
    pub pivots: Vec<usize>,
    pub free: Vec<usize>,
    pub ncols: usize,
}

impl PivotPattern {
    /// Greedy complete pivoting on `a`, stopping after `rank` steps.
    pub fn choose(a: &Mat<f64>, rank: usize) -> Result<Self> {
        let (m, n) = (a.rows, a.cols);
        if rank > m.min(n) {
            return Err(GeomError::Dimension(format!("rank {rank} for a {m}x{n} matrix")));
        }
        let mut w = a.clone();
        let mut rows_left: Vec<usize> = (0..m).collect();
        let mut cols_left: Vec<usize> = (0..n).collect();
        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        for _ in 0..rank {
            let (mut bi, mut bj, mut best) = (0, 0, -1.0);
            for (ii, &i) in rows_left.iter().enumerate() {
                for (jj, &j) in cols_left.iter().enumerate() {
                    let v = w[(i, j)].abs();
                    if v > best {
                        best = v;
                        bi = ii;
                        bj = jj;
                    }
                }
            }
            let (pi, pj) = (rows_left[bi], cols_left[bj]);
            if best <= 0.0 {
                return Err(GeomError::Degenerate { what: "pivot pattern ran out of pivots".into(), cond: f64::INFINITY });
            }
            for &i in &rows_left {
                if i == pi {
                    continue;
                }
                let f = w[(i, pj)] / w[(pi, pj)];
                for j in 0..n {
                    let t = w[(pi, j)];
                    w[(i, j)] -= f * t;
                }
            }
            rows.push(pi);
            pivots.push(pj);
            rows_left.remove(bi);
            cols_left.remove(bj);
        }
        let mut free = cols_left;
        free.sort_unstable();
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&k| pivots[k]);
        let rows = order.iter().map(|&k| rows[k]).collect();
        pivots.sort_unstable();
        Ok(PivotPattern { rows, pivots, free, ncols: n })
    }

    pub fn nullity(&self) -> usize {
        self.free.len()
    }

    /// Null-space basis of `a` (columns), one per free column: the free
    /// coordinate is 1, other free coordinates 0, pivot coordinates solved.
    pub fn null_space<S: Scalar>(&self, a: &Mat<S>) -> Result<Mat<S>> {
        if a.cols != self.ncols {
            return Err(GeomError::Dimension(format!("pattern for {} columns applied to {}", self.ncols, a.cols)));
        }
        let n = a.cols;
        let mut out = Mat::zeros(n, self.free.len());
        if self.pivots.is_empty() {
            for (k, &f) in self.free.iter().enumerate() {
                out[(f, k)] = S::one();
            }
            return Ok(out);
        }
        let ap = a.select_rows(&self.rows).select_cols(&self.pivots);
        let af = a.select_rows(&self.rows).select_cols(&self.free);
        let sol = ap.solve(&af)?;
        for (k, &f) in self.free.iter().enumerate() {
            out[(f, k)] = S::one();
            for (pi, &p) in self.pivots.iter().enumerate() {
                out[(p, k)] = -sol[(pi, k)];
            }
        }
        Ok(out)
    }
}

/// Null space spanned smoothly near a reference matrix, with the basis
/// pinned to an orthonormal reference basis `N₀`: at each matrix the result
/// is the orthogonal projection of `N₀` onto the current null space. Unlike
/// the raw [`PivotPattern`] basis its scale does not blow up where the pivot
/// block chosen at the reference becomes ill-conditioned.
#[derive(Clone, Debug, PartialEq)]
pub struct AnchoredNullSpace {
    pub pattern: PivotPattern,
    pub anchor: Mat<f64>,
}

impl AnchoredNullSpace {
    pub fn choose(a: &Mat<f64>, rank: usize) -> Result<Self> {
        let pattern = PivotPattern::choose(a, rank)?;
        let b = pattern.null_space(a)?;
        let anchor = if b.cols == 0 {
            b
        } else {
            let q = to_nalgebra(&b).qr().q();
            Mat::from_fn(b.rows, b.cols, |i, j| q[(i, j)])
        };
        Ok(AnchoredNullSpace { pattern, anchor })
    }

    pub fn nullity(&self) -> usize {
        self.pattern.nullity()
    }

    pub fn null_space<S: Scalar>(&self, a: &Mat<S>) -> Result<Mat<S>> {
        let b = self.pattern.null_space(a)?;
        if b.cols == 0 {
            return Ok(b);
        }
        let inv: Vec<S> = (0..b.cols).map(|k| S::one() / dot(&b.col(k), &b.col(k)).sqrt()).collect();
        let b = Mat::from_fn(b.rows, b.cols, |i, k| b[(i, k)] * inv[k]);
        let n0 = Mat::from_fn(self.anchor.rows, self.anchor.cols, |i, j| S::cst(self.anchor[(i, j)]));
        let bt = b.transpose();
        Ok(b.mul(&bt.mul(&b).solve(&bt.mul(&n0))?))
    }
}

pub fn to_nalgebra(m: &Mat<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows, m.cols, &m.data)
}

/// Singular values in descending order.
pub fn singular_values(m: &Mat<f64>) -> Vec<f64> {
    if m.rows == 0 || m.cols == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = to_nalgebra(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Numerical rank with singular values below `rel · max(σ_max, 1)` treated
/// as zero. The unit floor makes a matrix of pure roundoff rank 0.
pub fn numerical_rank(m: &Mat<f64>, rel: f64) -> usize {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0).max(1.0);
    s.iter().filter(|&&x| x > rel * top).count()
}

/// 2-norm condition number; infinite for singular or empty-rank input.
pub fn condition_number(m: &Mat<f64>) -> f64 {
    let s = singular_values(m);
    if s.is_empty() {
        return 1.0;
    }
    let lo = s[s.len() - 1];
    if lo == 0.0 {
        f64::INFINITY
    } else {
        s[0] / lo
    }
}

/// Orthonormal null-space basis from the SVD, as an independent oracle for
/// the pivoted construction.
pub fn svd_null_space(m: &Mat<f64>, rel: f64) -> Mat<f64> {
    let n = m.cols;
    let a = to_nalgebra(m);
    // Pad to at least n rows so the SVD exposes the full right basis.
    let padded = if a.nrows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (a.nrows(), n)).copy_from(&a);
        p
    } else {
        a
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let top = svd.singular_values.iter().fold(0.0f64, |m, &x| m.max(x));
    let cols: Vec<Vec<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= rel * top || top == 0.0)
        .map(|(k, _)| vt.row(k).iter().copied().collect())
        .collect();
    Mat::from_cols(n, &cols)
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        acc += *x * *y;
    }
    acc
}

pub fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn axpy<S: Scalar>(alpha: S, x: &[S], y: &mut [S]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * *xi;
    }
}

pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn scale<S: Scalar>(k: S, a: &[S]) -> Vec<S> {
    a.iter().map(|&x| k * x).collect()
}

/// Bilinear form `aᵀ G b`.
pub fn bilinear<S: Scalar>(g: &Mat<S>, a: &[S], b: &[S]) -> S {
    dot(a, &g.mul_vec(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Dual;

    fn m(rows: usize, cols: usize, d: &[f64]) -> Mat<f64> {
        Mat { rows, cols, data: d.to_vec() }
    }

    #[test]
    fn lu_solves_and_inverts() {
        let a = m(3, 3, &[0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0]);
        let inv = a.inverse().unwrap();
        let id = a.mul(&inv);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((id[(i, j)] - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = m(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(a.inverse(), Err(GeomError::Degenerate { .. })));
    }

    #[test]
    fn lu_propagates_derivatives() {
        // d/dt of A(t)^{-1} b with A = [[1+t, 0],[0, 2]], b = (1,1): (-1/(1+t)^2, 0)
        let t = Dual::new(0.5, 1.0);
        let a = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => Dual::cst(1.0) + t,
            (1, 1) => Dual::cst(2.0),
            _ => Dual::cst(0.0),
        });
        let x = a.solve_vec(&[Dual::cst(1.0), Dual::cst(1.0)]).unwrap();
        assert!((x[0].eps + 1.0 / 2.25).abs() < 1e-15);
        assert_eq!(x[1].eps, 0.0);
    }

    #[test]
    fn pivot_null_space_is_annihilated() {
        let a = m(2, 4, &[1.0, 2.0, 0.0, 1.0, 2.0, 4.0, 1.0, 0.0]);
        let pat = PivotPattern::choose(&a, 2).unwrap();
        assert_eq!(pat.nullity(), 2);
        let ns = pat.null_space(&a).unwrap();
        let z = a.mul(&ns);
        assert!(z.data.iter().all(|v| v.abs() < 1e-14));
        assert_eq!(numerical_rank(&ns, 1e-9), 2);
    }

    #[test]
    fn svd_helpers() {
        let a = m(2, 3, &[1.0, 0.0, 0.0, 0.0, 2.0, 0.0]);
        assert_eq!(numerical_rank(&a, 1e-9), 2);
        assert_eq!(numerical_rank(&Mat::from_fn(3, 3, |i, j| 1e-17 * (i + 2 * j) as f64), 1e-9), 0);
        let ns = svd_null_space(&a, 1e-9);
        assert_eq!(ns.cols, 1);
        assert!((ns[(2, 0)].abs() - 1.0).abs() < 1e-14);
        assert!((condition_number(&m(2, 2, &[2.0, 0.0, 0.0, 0.5])) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn concatenation_shapes() {
        let a = Mat::<f64>::identity(2);
        let b = m(2, 1, &[5.0, 6.0]);
        let h = Mat::hcat(&[&a, &b]);
        assert_eq!((h.rows, h.cols), (2, 3));
        assert_eq!(h[(1, 2)], 6.0);
        let v = Mat::vcat(&[&a, &h.select_cols(&[0, 1])]);
        assert_eq!((v.rows, v.cols), (4, 2));
    }
}
