//! Small dense real linear algebra: products, the matrix exponential,
//! symmetric eigendecomposition and shifted tridiagonal solves.
//!
//! Everything here works on row-major `f64` storage and is sized for the
//! difference-sector blocks of a two-mode Fock space (tens to a few hundred
//! rows), so the routines favour clarity over blocking tricks.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::math::{abs, sqrt};
use crate::{Error, Result};

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matmul: inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, factor: f64, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += factor * b;
        }
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| abs(self[(i, j)])).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(abs(*v)))
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max(abs(a - b)))
    }

    /// `max |(A^T A - I)_ij|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let gram = self.transpose().matmul(self);
        gram.max_abs_diff(&Matrix::identity(self.cols))
    }

    /// Solves `self * X = rhs` by LU with partial pivoting.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix> {
        assert!(self.is_square(), "solve: matrix must be square");
        assert_eq!(self.rows, rhs.rows, "solve: right-hand side has wrong height");
        let n = self.rows;
        let mut a = self.clone();
        let mut x = rhs.clone();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| abs(a[(i, col)]).total_cmp(&abs(a[(j, col)])))
                .unwrap_or(col);
            if a[(pivot, col)] == 0.0 {
                return Err(Error::NoConvergence {
                    routine: "LU factorisation (singular matrix)",
                });
            }
            if pivot != col {
                a.swap_rows(pivot, col);
                x.swap_rows(pivot, col);
            }
            let diag = a[(col, col)];
            for i in col + 1..n {
                let f = a[(i, col)] / diag;
                if f == 0.0 {
                    continue;
                }
                for j in col..n {
                    let v = a[(col, j)];
                    a[(i, j)] -= f * v;
                }
                for j in 0..x.cols {
                    let v = x[(col, j)];
                    x[(i, j)] -= f * v;
                }
            }
        }
        for col in (0..n).rev() {
            let diag = a[(col, col)];
            for j in 0..x.cols {
                let mut acc = x[(col, j)];
                for k in col + 1..n {
                    acc -= a[(col, k)] * x[(k, j)];
                }
                x[(col, j)] = acc / diag;
            }
        }
        Ok(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

// Padé(13,13) numerator coefficients for exp, Higham (2005).
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371_920_351_148_152;

/// Matrix exponential by scaling and squaring with a degree-13 Padé
/// approximant.
pub fn expm(a: &Matrix) -> Result<Matrix> {
    assert!(a.is_square(), "expm requires a square matrix");
    let n = a.rows();
    if n == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    let norm = a.norm_one();
    let mut squarings = 0u32;
    if norm > THETA13 {
        squarings = libm::ceil(libm::log2(norm / THETA13)) as u32;
    }
    let scaled = a.scaled(libm::exp2(-(squarings as f64)));

    let ident = Matrix::identity(n);
    let a2 = scaled.matmul(&scaled);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);

    let mut inner_u = a6.scaled(PADE13[13]);
    inner_u.add_scaled(PADE13[11], &a4);
    inner_u.add_scaled(PADE13[9], &a2);
    let mut u = a6.matmul(&inner_u);
    u.add_scaled(PADE13[7], &a6);
    u.add_scaled(PADE13[5], &a4);
    u.add_scaled(PADE13[3], &a2);
    u.add_scaled(PADE13[1], &ident);
    let u = scaled.matmul(&u);

    let mut inner_v = a6.scaled(PADE13[12]);
    inner_v.add_scaled(PADE13[10], &a4);
    inner_v.add_scaled(PADE13[8], &a2);
    let mut v = a6.matmul(&inner_v);
    v.add_scaled(PADE13[6], &a6);
    v.add_scaled(PADE13[4], &a4);
    v.add_scaled(PADE13[2], &a2);
    v.add_scaled(PADE13[0], &ident);

    let mut denom = v.clone();
    denom.add_scaled(-1.0, &u);
    let mut numer = v;
    numer.add_scaled(1.0, &u);
    let mut result = denom.solve(&numer)?;
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    Ok(result)
}

/// Eigendecomposition of a real symmetric matrix.
///
/// Returns eigenvalues in ascending order and the matrix whose columns are
/// the corresponding orthonormal eigenvectors. Householder reduction to
/// tridiagonal form followed by the implicit QL algorithm.
pub fn symmetric_eigen(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    assert!(a.is_square(), "symmetric_eigen requires a square matrix");
    let n = a.rows();
    if n == 0 {
        return Ok((Vec::new(), Matrix::zeros(0, 0)));
    }
    let mut v = a.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, &mut d, &mut e);
    tridiagonal_ql(&mut v, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values = order.iter().map(|&i| d[i]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, new)] = v[(r, old)];
        }
    }
    Ok((values, vectors))
}

fn tridiagonalize(v: &mut Matrix, d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }
    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| abs(*x)).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
                v[(j, i)] = 0.0;
            }
        } else {
            for dk in d[..i].iter_mut() {
                *dk /= scale;
                h += *dk * *dk;
            }
            let f = d[i - 1];
            let mut g = sqrt(h);
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e[..i].iter_mut() {
                *ej = 0.0;
            }
            for j in 0..i {
                let f = d[j];
                v[(j, i)] = f;
                let mut g = e[j] + v[(j, j)] * f;
                for k in j + 1..i {
                    g += v[(k, j)] * d[k];
                    e[k] += v[(k, j)] * f;
                }
                e[j] = g;
            }
            let mut f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    v[(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n - 1 {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    v[(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = 0.0;
    }
    v[(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

fn tridiagonal_ql(v: &mut Matrix, d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(abs(d[l]) + abs(e[l]));
        let mut m = l;
        while m < n - 1 && abs(e[m]) > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(Error::NoConvergence {
                        routine: "tridiagonal QL",
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = libm::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d[l + 2..].iter_mut() {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = libm::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let h = v[(k, i + 1)];
                        v[(k, i + 1)] = s * v[(k, i)] + c * h;
                        v[(k, i)] = c * v[(k, i)] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if abs(e[l]) <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Singular values and left singular vectors of `b` by one-sided (Hestenes)
/// Jacobi rotations.
///
/// Returns `(sigma, u)` with the columns of `u` orthonormal wherever
/// `sigma > 0`. For `b = S D` with `S` well conditioned and `D` diagonal the
/// small singular values keep full relative accuracy, which an
/// eigendecomposition of `b b^T` cannot offer.
pub fn jacobi_svd_left(b: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let rows = b.rows();
    let cols = b.cols();
    // Work on columns stored contiguously.
    let mut w: Vec<Vec<f64>> = (0..cols).map(|j| (0..rows).map(|i| b[(i, j)]).collect()).collect();
    let threshold = f64::EPSILON * sqrt(rows.max(1) as f64);
    let mut converged = false;
    for _ in 0..60 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (head, tail) = w.split_at_mut(q);
                let (wp, wq) = (&mut head[p], &mut tail[0]);
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for (x, y) in wp.iter().zip(wq.iter()) {
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == 0.0 || abs(gamma) <= threshold * sqrt(alpha) * sqrt(beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (abs(zeta) + libm::hypot(1.0, zeta));
                let c = 1.0 / libm::hypot(1.0, t);
                let s = c * t;
                for (x, y) in wp.iter_mut().zip(wq.iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = c * xp - s * yq;
                    *y = s * xp + c * yq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            routine: "one-sided Jacobi SVD",
        });
    }
    let mut sigma = vec![0.0; cols];
    let mut u = Matrix::zeros(rows, cols);
    for (j, col) in w.iter().enumerate() {
        let norm = sqrt(col.iter().map(|x| x * x).sum());
        sigma[j] = norm;
        if norm > 0.0 {
            for (i, x) in col.iter().enumerate() {
                u[(i, j)] = x / norm;
            }
        }
    }
    Ok((sigma, u))
}

/// Real symmetric tridiagonal matrix stored by its diagonal and
/// off-diagonal.
#[derive(Debug, Clone)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(
            diag.is_empty() && off.is_empty() || off.len() + 1 == diag.len(),
            "off-diagonal must be one shorter than the diagonal"
        );
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Normalised eigenvector for the eigenvalue nearest `shift`.
    pub fn eigenvector_near(&self, shift: f64, iterations: usize) -> Vec<f64> {
        tridiagonal_eigenvector(&self.diag, &self.off, shift, iterations)
    }
}

/// Normalised eigenvector of the symmetric tridiagonal matrix `(diag, off)`
/// for the eigenvalue nearest `shift`, by inverse iteration from a constant
/// start vector. The overall sign is whatever the iteration produces.
pub fn tridiagonal_eigenvector(diag: &[f64], off: &[f64], shift: f64, iterations: usize) -> Vec<f64> {
    let n = diag.len();
    if n == 0 {
        return Vec::new();
    }
    assert_eq!(off.len() + 1, n, "off-diagonal must be one shorter than the diagonal");
    let scale = diag
        .iter()
        .chain(off)
        .fold(1.0f64, |m, v| m.max(abs(*v)));
    let lu = ShiftedLu::factor(diag, off, shift, scale * f64::EPSILON);
    let mut x = vec![1.0; n];
    for _ in 0..iterations.max(1) {
        lu.solve_in_place(&mut x);
        let norm = sqrt(x.iter().map(|v| v * v).sum());
        if norm == 0.0 || !norm.is_finite() {
            break;
        }
        for v in x.iter_mut() {
            *v /= norm;
        }
    }
    x
}

/// LU factors of `T - shift I` with partial pivoting (LAPACK `gttrf`
/// layout: one sub-diagonal multiplier, up to two super-diagonals).
struct ShiftedLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(diag: &[f64], off: &[f64], shift: f64, pivot_floor: f64) -> Self {
        let n = diag.len();
        let mut d: Vec<f64> = diag.iter().map(|v| v - shift).collect();
        let mut dl = off.to_vec();
        let mut du = off.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if abs(d[i]) >= abs(dl[i]) {
                if d[i] == 0.0 {
                    d[i] = pivot_floor;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 1 < n - 1 {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        for di in d.iter_mut() {
            if abs(*di) < pivot_floor {
                *di = if *di < 0.0 { -pivot_floor } else { pivot_floor };
            }
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve_in_place(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotation(theta: f64) -> Matrix {
        let mut r = Matrix::zeros(2, 2);
        r[(0, 0)] = libm::cos(theta);
        r[(0, 1)] = -libm::sin(theta);
        r[(1, 0)] = libm::sin(theta);
        r[(1, 1)] = libm::cos(theta);
        r
    }

    #[test]
    fn expm_of_rotation_generator() {
        for &theta in &[0.0, 0.3, 2.0, 17.5] {
            let mut g = Matrix::zeros(2, 2);
            g[(0, 1)] = -theta;
            g[(1, 0)] = theta;
            let e = expm(&g).unwrap();
            assert!(e.max_abs_diff(&rotation(theta)) < 1e-13, "theta {theta}");
        }
    }

    #[test]
    fn expm_of_diagonal() {
        let a = Matrix::from_diagonal(&[-1.0, 0.5, 3.0]);
        let e = expm(&a).unwrap();
        for (i, v) in [-1.0f64, 0.5, 3.0].iter().enumerate() {
            assert!((e[(i, i)] - libm::exp(*v)).abs() < 1e-13 * libm::exp(*v));
        }
    }

    #[test]
    fn expm_of_nilpotent() {
        // exp of a strictly upper-triangular Jordan block is a truncated series.
        let mut a = Matrix::zeros(3, 3);
        a[(0, 1)] = 1.0;
        a[(1, 2)] = 1.0;
        let e = expm(&a).unwrap();
        assert!((e[(0, 2)] - 0.5).abs() < 1e-15);
        assert!((e[(0, 1)] - 1.0).abs() < 1e-15);
        assert_eq!(e[(2, 0)], 0.0);
    }

    #[test]
    fn symmetric_eigen_reconstructs() {
        let n = 7;
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = libm::sin((i * 3 + j * 7) as f64) + if i == j { 2.0 } else { 0.0 };
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        let (vals, vecs) = symmetric_eigen(&a).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        assert!(vecs.orthogonality_defect() < 1e-13);
        let recon = vecs
            .matmul(&Matrix::from_diagonal(&vals))
            .matmul(&vecs.transpose());
        assert!(recon.max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn symmetric_eigen_of_diagonal_keeps_values() {
        let a = Matrix::from_diagonal(&[3.0, -1.0, 2.0]);
        let (vals, _) = symmetric_eigen(&a).unwrap();
        assert_eq!(vals, std::vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn jacobi_svd_keeps_graded_singular_values() {
        // Orthogonal times a diagonal spanning 30 decades.
        let n = 6;
        let mut g = Matrix::zeros(n, n);
        for i in 0..n - 1 {
            g[(i + 1, i)] = 0.7;
            g[(i, i + 1)] = -0.7;
        }
        let q = expm(&g).unwrap();
        let scales: std::vec::Vec<f64> = (0..n).map(|k| libm::pow(10.0, -6.0 * k as f64)).collect();
        let b = q.matmul(&Matrix::from_diagonal(&scales));
        let (mut sigma, u) = jacobi_svd_left(&b).unwrap();
        sigma.sort_by(|a, b| b.total_cmp(a));
        for (s, e) in sigma.iter().zip(&scales) {
            assert!((s - e).abs() < 1e-13 * e, "{s} vs {e}");
        }
        assert!(u.orthogonality_defect() < 1e-13);
    }

    #[test]
    fn solve_matches_inverse() {
        let mut a = Matrix::zeros(3, 3);
        let entries = [[0.0, 2.0, 1.0], [1.0, 1.0, 0.0], [4.0, -1.0, 3.0]];
        for i in 0..3 {
            for j in 0..3 {
                a[(i, j)] = entries[i][j];
            }
        }
        let x = a.solve(&Matrix::identity(3)).unwrap();
        assert!(a.matmul(&x).max_abs_diff(&Matrix::identity(3)) < 1e-14);
    }

    #[test]
    fn inverse_iteration_finds_laplacian_mode() {
        // Path-graph Laplacian: eigenpairs are known in closed form.
        let n = 40;
        let t = SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1]);
        let k = 3;
        let angle = core::f64::consts::PI * (k + 1) as f64 / (n + 1) as f64;
        let lambda = 2.0 - 2.0 * libm::cos(angle);
        let v = t.eigenvector_near(lambda, 3);
        let sign = v[0].signum();
        let norm = libm::sqrt((n + 1) as f64 / 2.0);
        for (i, vi) in v.iter().enumerate() {
            let exact = libm::sin(angle * (i + 1) as f64) / norm;
            assert!((sign * vi - exact).abs() < 1e-12);
        }
    }
}
