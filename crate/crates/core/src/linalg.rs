//! Dense complex eigensolver.
//!
//! The pipeline is the classic one: diagonal balancing, Householder reduction
//! to upper Hessenberg form, then single-shift complex QR iteration with
//! Wilkinson shifts and deflation. Eigenvectors, when requested, come from
//! back-substitution on the triangular Schur factor.
//!
//! Eigenvalues are always returned in `(Re, Im)` ascending order. Real parts
//! that agree to within [`ORDER_RTOL`] (relative to the spectral radius) are
//! treated as tied so that conjugate pairs come out with the negative
//! imaginary part first regardless of rounding noise in the real parts.

use std::ops::{Index, IndexMut};

use crate::{Error, Result, C64};

/// Relative tolerance under which two real parts are considered tied when
/// ordering eigenvalues.
pub const ORDER_RTOL: f64 = 1e-9;

/// Default dimension cap for [`eig_dense`].
pub const DEFAULT_MAX_DIM: usize = 4096;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
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

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(C64::conj).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols, "vector length does not match matrix");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    /// Eigenvalues in `(Re, Im)` ascending order.
    pub values: Vec<C64>,
    /// Unit-norm right eigenvectors as columns, matching `values`.
    pub vectors: Option<ComplexMatrix>,
    /// Relative residual `max ‖A v − μ v‖ / ‖A‖_F` when vectors were
    /// computed; otherwise the nominal backward error `dim · ε` of the
    /// unitary reduction.
    pub residual_bound: f64,
}

impl EigenResult {
    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EigOptions {
    pub max_dim: usize,
    /// Total QR sweep budget is `sweeps_per_dim · max(dim, 10)`.
    pub sweeps_per_dim: usize,
    pub balance: bool,
    pub vectors: bool,
}

impl Default for EigOptions {
    fn default() -> Self {
        Self {
            max_dim: DEFAULT_MAX_DIM,
            sweeps_per_dim: 30,
            balance: true,
            vectors: false,
        }
    }
}

/// All eigenvalues of a square complex matrix.
pub fn eig_dense(a: &ComplexMatrix) -> Result<EigenResult> {
    eig_dense_with(a, &EigOptions::default())
}

pub fn eig_dense_with(a: &ComplexMatrix, opts: &EigOptions) -> Result<EigenResult> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    let n = a.rows;
    if n > opts.max_dim {
        return Err(Error::DimensionLimit {
            dim: n,
            limit: opts.max_dim,
        });
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    if n == 0 {
        return Ok(EigenResult {
            values: Vec::new(),
            vectors: opts.vectors.then(|| ComplexMatrix::zeros(0, 0)),
            residual_bound: 0.0,
        });
    }

    let mut h = a.data.clone();
    let scale = if opts.balance {
        balance(&mut h, n)
    } else {
        vec![1.0; n]
    };
    let mut z = opts.vectors.then(|| ComplexMatrix::identity(n).data);
    hessenberg(&mut h, n, z.as_deref_mut());
    let max_iter = opts.sweeps_per_dim * n.max(10);
    hqr(&mut h, n, z.as_deref_mut(), max_iter)?;

    let raw: Vec<C64> = (0..n).map(|i| h[i * n + i]).collect();
    let order = spectrum_order(&raw);
    let values: Vec<C64> = order.iter().map(|&i| raw[i]).collect();

    match z {
        None => Ok(EigenResult {
            values,
            vectors: None,
            residual_bound: n as f64 * f64::EPSILON,
        }),
        Some(z) => {
            let vecs = schur_vectors(&h, &z, &scale, n);
            let mut sorted = ComplexMatrix::zeros(n, n);
            for (dst, &src) in order.iter().enumerate() {
                for r in 0..n {
                    sorted[(r, dst)] = vecs[r * n + src];
                }
            }
            let anorm = a.frobenius_norm().max(f64::MIN_POSITIVE);
            let mut worst: f64 = 0.0;
            for (j, mu) in values.iter().enumerate() {
                let v = sorted.column(j);
                let av = a.mul_vec(&v);
                let res = av
                    .iter()
                    .zip(&v)
                    .map(|(x, y)| (x - mu * y).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                worst = worst.max(res / anorm);
            }
            Ok(EigenResult {
                values,
                vectors: Some(sorted),
                residual_bound: worst,
            })
        }
    }
}

/// Eigenvalues of the complex symmetric tridiagonal matrix with the given
/// diagonal and off-diagonal (the same values above and below).
pub fn eig_tridiag_complex_symmetric(diag: &[C64], offdiag: &[C64]) -> Result<EigenResult> {
    let n = diag.len();
    if offdiag.len() + 1 != n.max(1) {
        return Err(Error::DimensionMismatch {
            expected: n.saturating_sub(1),
            got: offdiag.len(),
        });
    }
    let mut a = ComplexMatrix::zeros(n, n);
    for (i, d) in diag.iter().enumerate() {
        a[(i, i)] = *d;
    }
    for (i, e) in offdiag.iter().enumerate() {
        a[(i, i + 1)] = *e;
        a[(i + 1, i)] = *e;
    }
    eig_dense(&a)
}

/// Permutation that puts `values` into `(Re, Im)` ascending order, with real
/// parts inside a relative band of [`ORDER_RTOL`] treated as equal.
pub fn spectrum_order(values: &[C64]) -> Vec<usize> {
    let scale = values.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let tol = ORDER_RTOL * scale;
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| {
        values[a]
            .re
            .total_cmp(&values[b].re)
            .then(values[a].im.total_cmp(&values[b].im))
            .then(a.cmp(&b))
    });
    // Within each run of near-equal real parts, order by imaginary part.
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && values[idx[end]].re - values[idx[end - 1]].re <= tol {
            end += 1;
        }
        idx[start..end].sort_by(|&a, &b| {
            values[a]
                .im
                .total_cmp(&values[b].im)
                .then(values[a].re.total_cmp(&values[b].re))
                .then(a.cmp(&b))
        });
        start = end;
    }
    idx
}

/// Sorts a list of complex numbers with [`spectrum_order`].
pub fn sort_spectrum(values: &mut Vec<C64>) {
    let order = spectrum_order(values);
    *values = order.iter().map(|&i| values[i]).collect();
}

/// One matched pair from [`greedy_match`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchedPair {
    pub left: usize,
    pub right: usize,
    pub distance: f64,
}

/// Greedy minimal-distance matching: repeatedly pairs the closest unmatched
/// `(left, right)` elements, ties broken by index order. Produces
/// `min(left.len(), right.len())` pairs.
pub fn greedy_match(left: &[C64], right: &[C64]) -> Vec<MatchedPair> {
    let mut cand: Vec<MatchedPair> = Vec::with_capacity(left.len() * right.len());
    for (i, a) in left.iter().enumerate() {
        for (j, b) in right.iter().enumerate() {
            cand.push(MatchedPair {
                left: i,
                right: j,
                distance: (a - b).norm(),
            });
        }
    }
    cand.sort_by(|x, y| {
        x.distance
            .total_cmp(&y.distance)
            .then(x.left.cmp(&y.left))
            .then(x.right.cmp(&y.right))
    });
    let mut used_l = vec![false; left.len()];
    let mut used_r = vec![false; right.len()];
    let mut out = Vec::with_capacity(left.len().min(right.len()));
    for p in cand {
        if !used_l[p.left] && !used_r[p.right] {
            used_l[p.left] = true;
            used_r[p.right] = true;
            out.push(p);
        }
    }
    out
}

/// True if both multisets have the same size and greedy matching pairs every
/// element within `tol`.
pub fn multisets_match(left: &[C64], right: &[C64], tol: f64) -> bool {
    left.len() == right.len()
        && greedy_match(left, right)
            .iter()
            .all(|p| p.distance <= tol)
}

/// True if the multiset is closed under complex conjugation within `tol`.
pub fn is_conjugate_closed(values: &[C64], tol: f64) -> bool {
    let conj: Vec<C64> = values.iter().map(C64::conj).collect();
    multisets_match(values, &conj, tol)
}

/// Determinant by LU decomposition with partial pivoting.
pub fn determinant(a: &ComplexMatrix) -> Result<C64> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    let n = a.rows;
    let mut m = a.data.clone();
    let mut det = ONE;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| m[x * n + k].norm().total_cmp(&m[y * n + k].norm()))
            .unwrap_or(k);
        if m[p * n + k] == ZERO {
            return Ok(ZERO);
        }
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let pivot = m[k * n + k];
        det *= pivot;
        for i in k + 1..n {
            let f = m[i * n + k] / pivot;
            if f == ZERO {
                continue;
            }
            for j in k + 1..n {
                let t = m[k * n + j];
                m[i * n + j] -= f * t;
            }
        }
    }
    Ok(det)
}

#[inline]
fn cabs1(z: C64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Diagonal similarity scaling by powers of two so that row and column norms
/// are comparable. Returns the scaling factors `d` with `A_bal = D⁻¹ A D`.
fn balance(a: &mut [C64], n: usize) -> Vec<f64> {
    const RADIX: f64 = 2.0;
    const RADIX2: f64 = RADIX * RADIX;
    let mut scale = vec![1.0; n];
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += cabs1(a[j * n + i]);
                    r += cabs1(a[i * n + j]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX2;
            }
            g = r * RADIX;
            while c >= g {
                f /= RADIX;
                c /= RADIX2;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                scale[i] *= f;
                let inv = 1.0 / f;
                for j in 0..n {
                    a[i * n + j] *= inv;
                    a[j * n + i] *= f;
                }
            }
        }
        if converged {
            return scale;
        }
    }
}

/// Householder reduction to upper Hessenberg form, accumulating the unitary
/// factor into `z` when given.
fn hessenberg(a: &mut [C64], n: usize, mut z: Option<&mut [C64]>) {
    let mut v = vec![ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let tail: f64 = (k + 2..n).map(|i| a[i * n + k].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let xnorm = (x0.norm_sqr() + tail).sqrt();
        let phase = if x0 == ZERO { ONE } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;
        // v = x - alpha e1, only rows k+1..n are nonzero.
        v[k + 1] = x0 - alpha;
        for i in k + 2..n {
            v[i] = a[i * n + k];
        }
        let vnorm2: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum();
        let tau = 2.0 / vnorm2;

        // Left: A <- (I - tau v v^H) A on rows k+1.., columns k...
        for j in k..n {
            let mut s = ZERO;
            for i in k + 1..n {
                s += v[i].conj() * a[i * n + j];
            }
            s *= tau;
            for i in k + 1..n {
                a[i * n + j] -= v[i] * s;
            }
        }
        // Right: A <- A (I - tau v v^H) on all rows, columns k+1...
        for r in 0..n {
            let row = &mut a[r * n..(r + 1) * n];
            let mut s = ZERO;
            for i in k + 1..n {
                s += row[i] * v[i];
            }
            s *= tau;
            for i in k + 1..n {
                row[i] -= s * v[i].conj();
            }
        }
        if let Some(z) = z.as_deref_mut() {
            for r in 0..n {
                let row = &mut z[r * n..(r + 1) * n];
                let mut s = ZERO;
                for i in k + 1..n {
                    s += row[i] * v[i];
                }
                s *= tau;
                for i in k + 1..n {
                    row[i] -= s * v[i].conj();
                }
            }
        }
        a[(k + 1) * n + k] = alpha;
        for i in k + 2..n {
            a[i * n + k] = ZERO;
        }
    }
}

/// Complex Givens rotation `[c s; -s̄ c]` mapping `(f, g)` to `(r, 0)`.
#[inline]
fn givens(f: C64, g: C64) -> (f64, C64, C64) {
    if g == ZERO {
        return (1.0, ZERO, f);
    }
    if f == ZERO {
        let gn = g.norm();
        return (0.0, g.conj() / gn, C64::new(gn, 0.0));
    }
    let fn_ = f.norm();
    let norm = fn_.hypot(g.norm());
    let phase = f / fn_;
    (fn_ / norm, phase * g.conj() / norm, phase * norm)
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let t = (a - d) * 0.5;
    let bc = b * c;
    let disc = (t * t + bc).sqrt();
    let plus = t + disc;
    let minus = t - disc;
    let denom = if plus.norm() >= minus.norm() { plus } else { minus };
    if denom == ZERO {
        d
    } else {
        d - bc / denom
    }
}

/// Shifted QR iteration on an upper Hessenberg matrix. On return the
/// diagonal holds the eigenvalues; if `z` is given the full Schur form is
/// maintained and the Schur vectors accumulated.
fn hqr(h: &mut [C64], n: usize, mut z: Option<&mut [C64]>, max_iter: usize) -> Result<()> {
    let wantt = z.is_some();
    let eps = f64::EPSILON;
    let small = f64::MIN_POSITIVE * (n as f64 / eps);
    let mut total = 0usize;
    let mut i = n - 1;
    loop {
        let mut its = 0usize;
        // Iterate until the active block [l, i] splits off its last row.
        loop {
            let mut l = 0;
            for k in (1..=i).rev() {
                let sub = h[k * n + k - 1].norm();
                let mut tst = h[(k - 1) * n + k - 1].norm() + h[k * n + k].norm();
                if tst == 0.0 {
                    if k >= 2 {
                        tst += h[(k - 1) * n + k - 2].norm();
                    }
                    if k + 1 <= i {
                        tst += h[(k + 1) * n + k].norm();
                    }
                }
                if sub <= eps * tst || sub <= small {
                    h[k * n + k - 1] = ZERO;
                    l = k;
                    break;
                }
            }
            if l == i {
                break;
            }
            if total >= max_iter {
                let partial = (i + 1..n).map(|j| h[j * n + j]).collect();
                return Err(Error::NoConvergence {
                    iterations: total,
                    dim: n,
                    partial,
                });
            }
            its += 1;
            total += 1;

            let shift = if its % 30 == 10 {
                h[l * n + l] + 0.75 * h[(l + 1) * n + l].re.abs()
            } else if its % 30 == 20 {
                h[i * n + i] + 0.75 * h[i * n + i - 1].re.abs()
            } else {
                wilkinson_shift(
                    h[(i - 1) * n + i - 1],
                    h[(i - 1) * n + i],
                    h[i * n + i - 1],
                    h[i * n + i],
                )
            };

            let (row_lo, col_hi) = if wantt { (0, n - 1) } else { (l, i) };
            for k in l..i {
                let (x, y) = if k == l {
                    (h[l * n + l] - shift, h[(l + 1) * n + l])
                } else {
                    (h[k * n + k - 1], h[(k + 1) * n + k - 1])
                };
                let (c, s, r) = givens(x, y);
                if k > l {
                    h[k * n + k - 1] = r;
                    h[(k + 1) * n + k - 1] = ZERO;
                }
                let sc = s.conj();
                for j in k..=col_hi {
                    let a = h[k * n + j];
                    let b = h[(k + 1) * n + j];
                    h[k * n + j] = a * c + s * b;
                    h[(k + 1) * n + j] = b * c - sc * a;
                }
                let r_hi = (k + 2).min(i);
                for r in row_lo..=r_hi {
                    let a = h[r * n + k];
                    let b = h[r * n + k + 1];
                    h[r * n + k] = a * c + sc * b;
                    h[r * n + k + 1] = b * c - s * a;
                }
                if let Some(z) = z.as_deref_mut() {
                    for r in 0..n {
                        let a = z[r * n + k];
                        let b = z[r * n + k + 1];
                        z[r * n + k] = a * c + sc * b;
                        z[r * n + k + 1] = b * c - s * a;
                    }
                }
            }
        }
        if i == 0 {
            return Ok(());
        }
        i -= 1;
    }
}

/// Right eigenvectors from the triangular Schur factor `t`, Schur vectors
/// `z` and balancing factors. Columns are normalized to unit 2-norm.
fn schur_vectors(t: &[C64], z: &[C64], scale: &[f64], n: usize) -> Vec<C64> {
    let tnorm = t.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let smin = (f64::EPSILON * tnorm).max(f64::MIN_POSITIVE);
    let mut out = vec![ZERO; n * n];
    let mut x = vec![ZERO; n];
    for k in 0..n {
        let lambda = t[k * n + k];
        x.iter_mut().for_each(|v| *v = ZERO);
        x[k] = ONE;
        for i in (0..k).rev() {
            let mut s = ZERO;
            for j in i + 1..=k {
                s += t[i * n + j] * x[j];
            }
            let mut d = t[i * n + i] - lambda;
            if d.norm() < smin {
                d = C64::new(smin, 0.0);
            }
            x[i] = -s / d;
        }
        // v = D Z x
        let mut norm2 = 0.0;
        for r in 0..n {
            let mut s = ZERO;
            for j in 0..=k {
                s += z[r * n + j] * x[j];
            }
            s *= scale[r];
            out[r * n + k] = s;
            norm2 += s.norm_sqr();
        }
        let inv = 1.0 / norm2.sqrt();
        for r in 0..n {
            out[r * n + k] *= inv;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn assert_values(got: &[C64], want: &[C64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).norm() <= tol, "got {g}, want {w}");
        }
    }

    #[test]
    fn two_by_two_imaginary_coupling() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 0.5)], vec![c(0.0, 0.5), c(1.0, 0.0)]])
            .unwrap();
        let r = eig_dense(&a).unwrap();
        assert_values(&r.values, &[c(1.0, -0.5), c(1.0, 0.5)], 1e-14);
    }

    #[test]
    fn diagonal_input_is_sorted_exactly() {
        let a = ComplexMatrix::from_diagonal(&[c(3.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        let r = eig_dense(&a).unwrap();
        assert_eq!(r.values, vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
    }

    #[test]
    fn rotation_matrix() {
        let a = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        let r = eig_dense(&a).unwrap();
        assert_values(&r.values, &[c(0.0, -1.0), c(0.0, 1.0)], 1e-14);
    }

    #[test]
    fn rejects_non_square_and_oversized() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(eig_dense(&a), Err(Error::NotSquare { .. })));
        let opts = EigOptions {
            max_dim: 2,
            ..EigOptions::default()
        };
        assert!(matches!(
            eig_dense_with(&ComplexMatrix::identity(3), &opts),
            Err(Error::DimensionLimit { .. })
        ));
    }

    #[test]
    fn exhausted_sweep_budget_reports_partial_results() {
        let a = ComplexMatrix::from_real_rows(&[
            vec![1.0, 2.0, 0.5],
            vec![0.3, -1.0, 4.0],
            vec![2.0, 1.0, 0.0],
        ])
        .unwrap();
        let opts = EigOptions {
            sweeps_per_dim: 0,
            ..EigOptions::default()
        };
        match eig_dense_with(&a, &opts) {
            Err(Error::NoConvergence { dim, partial, .. }) => {
                assert_eq!(dim, 3);
                assert!(partial.len() < 3);
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn empty_and_scalar() {
        assert!(eig_dense(&ComplexMatrix::zeros(0, 0)).unwrap().values.is_empty());
        let r = eig_tridiag_complex_symmetric(&[c(4.0, 0.0)], &[]).unwrap();
        assert_eq!(r.values, vec![c(4.0, 0.0)]);
    }

    #[test]
    fn tridiagonal_examples() {
        let r = eig_tridiag_complex_symmetric(&[c(1.0, 0.0); 2], &[c(0.0, 0.5)]).unwrap();
        assert_values(&r.values, &[c(1.0, -0.5), c(1.0, 0.5)], 1e-14);

        // Closed form for a constant tridiagonal: 1 + 2ig cos(jπ/4).
        let g = 0.7;
        let r = eig_tridiag_complex_symmetric(&[c(1.0, 0.0); 3], &[c(0.0, g); 2]).unwrap();
        let mut want: Vec<C64> = (1..=3)
            .map(|j| c(1.0, 2.0 * g * (j as f64 * std::f64::consts::PI / 4.0).cos()))
            .collect();
        sort_spectrum(&mut want);
        assert_values(&r.values, &want, 1e-13);
        assert!((r.values[2] - c(1.0, g * 2f64.sqrt())).norm() < 1e-13);

        assert!(eig_tridiag_complex_symmetric(&[c(1.0, 0.0); 3], &[c(0.0, 1.0)]).is_err());
    }

    #[test]
    fn tridiagonal_agrees_with_dense_path() {
        let d: Vec<C64> = [1.0, 2.5, 0.3, 4.0, 1.1].iter().map(|&x| c(x, 0.0)).collect();
        let e: Vec<C64> = [0.4, -0.9, 1.3, 0.2].iter().map(|&x| c(0.0, x)).collect();
        let tri = eig_tridiag_complex_symmetric(&d, &e).unwrap();
        let mut a = ComplexMatrix::from_diagonal(&d);
        for (i, v) in e.iter().enumerate() {
            a[(i, i + 1)] = *v;
            a[(i + 1, i)] = *v;
        }
        let opts = EigOptions {
            balance: false,
            ..EigOptions::default()
        };
        let dense = eig_dense_with(&a, &opts).unwrap();
        let scale = d.iter().map(|z| z.norm()).fold(1.0, f64::max);
        assert!(multisets_match(&tri.values, &dense.values, 1e-10 * scale));
    }

    #[test]
    fn eigenvectors_have_small_residuals() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.2), c(3.0, -1.0), c(0.0, 0.0), c(0.5, 0.5)],
            vec![c(-2.0, 0.0), c(0.0, 1.0), c(1e3, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1e-3, 0.0), c(2.0, 0.0), c(1.0, 1.0)],
            vec![c(0.7, 0.0), c(0.0, 0.0), c(0.0, -3.0), c(-1.0, 0.0)],
        ])
        .unwrap();
        let opts = EigOptions {
            vectors: true,
            ..EigOptions::default()
        };
        let r = eig_dense_with(&a, &opts).unwrap();
        assert!(r.residual_bound < 1e-12, "residual {}", r.residual_bound);
        let plain = eig_dense(&a).unwrap();
        assert!(multisets_match(&r.values, &plain.values, 1e-10));
    }

    #[test]
    fn ordering_ties_real_parts_within_tolerance() {
        let vals = vec![c(1.0 + 1e-15, 0.5), c(1.0, -0.5), c(0.5, 3.0)];
        let order = spectrum_order(&vals);
        assert_eq!(order, vec![2, 1, 0]);
    }

    #[test]
    fn greedy_match_pairs_nearest_first() {
        let left = [c(0.0, 0.0), c(1.0, 0.0)];
        let right = [c(1.1, 0.0), c(0.05, 0.0), c(5.0, 0.0)];
        let pairs = greedy_match(&left, &right);
        assert_eq!(pairs.len(), 2);
        assert_eq!((pairs[0].left, pairs[0].right), (0, 1));
        assert_eq!((pairs[1].left, pairs[1].right), (1, 0));
        assert!(!multisets_match(&left, &right, 1.0));
    }

    #[test]
    fn determinant_of_known_matrix() {
        let a = ComplexMatrix::from_real_rows(&[
            vec![2.0, -1.0, 0.0],
            vec![-1.0, 2.0, -1.0],
            vec![0.0, -1.0, 2.0],
        ])
        .unwrap();
        assert!((determinant(&a).unwrap() - c(4.0, 0.0)).norm() < 1e-14);
        assert_eq!(determinant(&ComplexMatrix::zeros(2, 2)).unwrap(), ZERO);
    }

    fn complex_matrix(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
        (1..=max_dim).prop_flat_map(|n| {
            proptest::collection::vec((-2.0..2.0f64, -2.0..2.0f64), n * n).prop_map(move |v| {
                ComplexMatrix::from_row_major(n, n, v.into_iter().map(|(a, b)| c(a, b)).collect())
                    .unwrap()
            })
        })
    }

    fn signed_permutation(n: usize) -> impl Strategy<Value = (Vec<usize>, Vec<f64>)> {
        (
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            proptest::collection::vec(prop_oneof![Just(1.0), Just(-1.0)], n),
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn trace_and_determinant_identities(a in complex_matrix(12)) {
            let r = eig_dense(&a).unwrap();
            let sum: C64 = r.values.iter().sum();
            let tr = a.trace();
            let scale = a.frobenius_norm().max(1.0) * a.rows() as f64;
            prop_assert!((sum - tr).norm() <= 1e-10 * scale, "sum {} trace {}", sum, tr);

            let prod: C64 = r.values.iter().product();
            let det = determinant(&a).unwrap();
            prop_assert!(
                (prod - det).norm() <= 1e-8 * det.norm().max(1.0),
                "prod {} det {}", prod, det
            );
        }

        #[test]
        fn similarity_by_signed_permutation(
            (a, (perm, signs)) in complex_matrix(12)
                .prop_flat_map(|a| { let n = a.rows(); (Just(a), signed_permutation(n)) })
        ) {
            let n = a.rows();
            let mut s = ComplexMatrix::zeros(n, n);
            for j in 0..n {
                s[(j, perm[j])] = c(signs[j], 0.0);
            }
            let b = s.matmul(&a).unwrap().matmul(&s.transpose()).unwrap();
            let ra = eig_dense(&a).unwrap();
            let rb = eig_dense(&b).unwrap();
            let scale = a.frobenius_norm().max(1.0);
            prop_assert!(multisets_match(&ra.values, &rb.values, 1e-9 * scale));
        }

        #[test]
        fn output_is_sorted(a in complex_matrix(10)) {
            let r = eig_dense(&a).unwrap();
            let scale = r.values.iter().map(|z| z.norm()).fold(1.0, f64::max);
            for w in r.values.windows(2) {
                let tied = (w[1].re - w[0].re).abs() <= ORDER_RTOL * scale;
                prop_assert!(w[0].re <= w[1].re + ORDER_RTOL * scale);
                if tied {
                    prop_assert!(w[0].im <= w[1].im);
                }
            }
        }

        #[test]
        fn conjugate_closure_for_real_similarity(
            d in proptest::collection::vec(0.2..3.0f64, 2..9),
            g in -1.5..1.5f64,
        ) {
            // A = D + igC with C the chain adjacency; W = diag((-1)^j) maps
            // A to conj(A), so the spectrum is closed under conjugation.
            let n = d.len();
            let mut a = ComplexMatrix::from_diagonal(&d.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>());
            for i in 0..n - 1 {
                a[(i, i + 1)] = c(0.0, g);
                a[(i + 1, i)] = c(0.0, g);
            }
            let r = eig_dense(&a).unwrap();
            prop_assert!(is_conjugate_closed(&r.values, 1e-9 * d.iter().fold(1.0, |m: f64, x| m.max(*x))));
        }
    }
}
