//! Minimal dense linear algebra for the pursuit solvers.
//!
//! Plain `f64` in row-major storage. Problem sizes in this crate stay in
//! the low hundreds, so the one factorization we need (a column-pivoted
//! Householder QR for least squares) is written out directly instead of
//! binding a BLAS/LAPACK backend. That keeps results bit-reproducible
//! across machines, which the benchmark reports rely on.

use crate::error::{Error, Result};

/// Relative threshold on the pivoted R diagonal below which a column is
/// treated as linearly dependent on the ones before it.
const RANK_TOLERANCE: f64 = 1e-10;

/// Dense vector with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    data: Vec<f64>,
}

impl Vector {
    /// Builds a vector, rejecting NaN and infinite entries.
    pub fn new(data: Vec<f64>) -> Result<Self> {
        match data.iter().position(|x| !x.is_finite()) {
            Some(i) => Err(Error::NonFinite(i)),
            None => Ok(Self { data }),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self { data: vec![0.0; n] }
    }

    /// Internal constructor for values already known to be finite.
    pub(crate) fn from_raw(data: Vec<f64>) -> Self {
        Self { data }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Mutable access for in-place solver updates. Callers only write
    /// sums and products of existing finite entries, so the finiteness
    /// invariant is preserved.
    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.data.clone()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.data.iter()
    }

    /// Sum of squared entries.
    pub fn energy(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }

    pub fn norm_l2(&self) -> f64 {
        self.energy().sqrt()
    }

    pub fn scaled(&self, alpha: f64) -> Vector {
        Vector::from_raw(self.data.iter().map(|x| alpha * x).collect())
    }

    /// `self - other`, entrywise.
    pub fn minus(&self, other: &Vector) -> Result<Vector> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "vector lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(Vector::from_raw(
            self.data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.data[i]
    }
}

impl std::ops::IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.data[i]
    }
}

/// Dense row-major matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from a flat row-major buffer.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "buffer of {} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        match data.iter().position(|x| !x.is_finite()) {
            Some(i) => Err(Error::NonFinite(i)),
            None => Ok(Self { rows, cols, data }),
        }
    }

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
            m.set(i, i, 1.0);
        }
        m
    }

    /// Fills entry (i, j) from a closure; the closure must return finite
    /// values (checked).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    /// Row `i` as a contiguous slice.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Copy of column `j`.
    pub fn column(&self, j: usize) -> Vector {
        Vector::from_raw((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    pub fn col_energy(&self, j: usize) -> f64 {
        (0..self.rows).map(|i| self.get(i, j).powi(2)).sum()
    }

    /// `A v`.
    pub fn matvec(&self, v: &Vector) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to a length-{} vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let row = self.row(i);
            out[i] = row.iter().zip(v.iter()).map(|(a, x)| a * x).sum();
        }
        Ok(Vector::from_raw(out))
    }

    /// `Aᵀ v`, i.e. the correlation of `v` with every column.
    pub fn tr_matvec(&self, v: &Vector) -> Result<Vector> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix transposed against a length-{} vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let row = self.row(i);
            let vi = v[i];
            for (o, a) in out.iter_mut().zip(row.iter()) {
                *o += a * vi;
            }
        }
        Ok(Vector::from_raw(out))
    }

    /// `A B`.
    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(rrow.iter()) {
                    *o += aik * b;
                }
            }
        }
        Ok(out)
    }

    /// Gathers a column subset, preserving the order of `indices`.
    pub fn columns(&self, indices: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, indices.len());
        for (jj, &j) in indices.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, jj, self.get(i, j));
            }
        }
        out
    }

    /// `out += alpha * A[:, j]`.
    pub(crate) fn axpy_col(&self, j: usize, alpha: f64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.rows);
        for (i, o) in out.iter_mut().enumerate() {
            *o += alpha * self.get(i, j);
        }
    }
}

/// Inner product `⟨u, v⟩`.
pub fn inner(u: &Vector, v: &Vector) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch(format!(
            "inner product of lengths {} and {}",
            u.len(),
            v.len()
        )));
    }
    Ok(u.iter().zip(v.iter()).map(|(a, b)| a * b).sum())
}

/// Returns the unit-norm copy of `v` together with its original norm.
pub fn normalize_l2(v: &Vector) -> Result<(Vector, f64)> {
    let norm = v.norm_l2();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok((v.scaled(1.0 / norm), norm))
}

/// Unit-normalizes every column of `a`; returns the normalized matrix and
/// the vector of original column norms, so `a[:, j] = scales[j] * out[:, j]`.
pub fn column_normalize(a: &Matrix) -> Result<(Matrix, Vector)> {
    let mut out = a.clone();
    let mut scales = vec![0.0; a.cols()];
    for j in 0..a.cols() {
        let norm = a.col_energy(j).sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroColumn(j));
        }
        scales[j] = norm;
        for i in 0..a.rows() {
            out.set(i, j, out.get(i, j) / norm);
        }
    }
    Ok((out, Vector::from_raw(scales)))
}

/// Least-squares solution of `min_x ‖a x − y‖₂` via a column-pivoted
/// Householder QR. Requires `a` to have full column rank: any pivoted
/// diagonal below `1e-10` times the largest one is treated as rank
/// deficiency and reported as an error rather than solved arbitrarily.
pub fn least_squares(a: &Matrix, y: &Vector) -> Result<Vector> {
    let m = a.rows();
    let n = a.cols();
    if y.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} system with a length-{} right-hand side",
            m,
            n,
            y.len()
        )));
    }
    if n == 0 {
        return Err(Error::BadDimension("least squares with zero columns".into()));
    }
    if m < n {
        // Fewer rows than columns can never be full column rank.
        return Err(Error::RankDeficient);
    }

    // Working copies: `qr` holds the factorization in place, `rhs` gets the
    // Householder reflections applied as they are formed.
    let mut qr = a.clone();
    let mut rhs = y.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut first_diag = 0.0_f64;

    for step in 0..n {
        // Pivot: remaining column with the largest norm over rows step..m.
        let mut best = step;
        let mut best_norm = 0.0;
        for c in step..n {
            let norm: f64 = (step..m).map(|i| qr.get(i, c).powi(2)).sum::<f64>().sqrt();
            if norm > best_norm {
                best_norm = norm;
                best = c;
            }
        }
        if best != step {
            for i in 0..m {
                let tmp = qr.get(i, step);
                qr.set(i, step, qr.get(i, best));
                qr.set(i, best, tmp);
            }
            perm.swap(step, best);
        }
        if step == 0 {
            first_diag = best_norm;
        }
        if best_norm <= RANK_TOLERANCE * first_diag || best_norm == 0.0 {
            return Err(Error::RankDeficient);
        }

        // Householder vector v = x + sign(x0)‖x‖ e1 for the active column.
        let x0 = qr.get(step, step);
        let sign = if x0 >= 0.0 { 1.0 } else { -1.0 };
        let alpha = -sign * best_norm;
        let mut v = vec![0.0; m - step];
        v[0] = x0 - alpha;
        for i in step + 1..m {
            v[i - step] = qr.get(i, step);
        }
        let vtv: f64 = v.iter().map(|x| x * x).sum();
        // vtv == 0 cannot happen here: best_norm > 0 guarantees a nonzero
        // reflection.
        for c in step + 1..n {
            let dot: f64 = (step..m).map(|i| v[i - step] * qr.get(i, c)).sum();
            let s = 2.0 * dot / vtv;
            for i in step..m {
                qr.set(i, c, qr.get(i, c) - s * v[i - step]);
            }
        }
        let dot: f64 = (step..m).map(|i| v[i - step] * rhs[i]).sum();
        let s = 2.0 * dot / vtv;
        for i in step..m {
            rhs[i] -= s * v[i - step];
        }
        qr.set(step, step, alpha);
        for i in step + 1..m {
            qr.set(i, step, 0.0);
        }
    }

    // Back substitution on the (pivoted) upper-triangular system.
    let mut sol = vec![0.0; n];
    for j in (0..n).rev() {
        let mut acc = rhs[j];
        for c in j + 1..n {
            acc -= qr.get(j, c) * sol[c];
        }
        sol[j] = acc / qr.get(j, j);
    }

    let mut x = vec![0.0; n];
    for (k, &p) in perm.iter().enumerate() {
        x[p] = sol[k];
    }
    Vector::new(x)
}
