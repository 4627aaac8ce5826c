//! Dense complex matrices and the handful of kernels every other module leans on.
//!
//! Storage is row-major. Multi-wire indices are big-endian: wire 0 is the most
//! significant digit, so a ket `|i_1 i_2 ... i_n>` has index `sum i_k d^(n-k)`.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest row or column count any constructor will produce.
pub const MAX_AXIS: usize = 1 << 24;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Absolute tolerance used by every equality check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_eps: f64,
}

impl Tolerance {
    pub const DEFAULT_EPS: f64 = 1e-12;
    /// Smallest tolerance the suites accept.
    pub const FLOOR: f64 = 1e-15;

    pub fn new(abs_eps: f64) -> Result<Self> {
        if !abs_eps.is_finite() || abs_eps < 0.0 {
            return Err(Error::InvalidParam(format!("tolerance must be a nonnegative number, got {abs_eps}")));
        }
        Ok(Self { abs_eps })
    }

    pub fn accepts(&self, residual: f64) -> bool {
        residual < self.abs_eps
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs_eps: Self::DEFAULT_EPS }
    }
}

#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        check_axis(rows)?;
        check_axis(cols)?;
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParam("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch { expected: rows * cols, got: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in diag.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    /// Column vector from amplitudes.
    pub fn column(amps: Vec<C64>) -> Self {
        Self { rows: amps.len(), cols: 1, data: amps }
    }

    /// Computational basis ket `|index>` of a `dim`-dimensional space.
    pub fn basis_ket(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim, 1);
        v.data[index] = ONE;
        v
    }

    /// `|a><b|` for column vectors `a` and `b`.
    pub fn outer(ket: &CMatrix, bra: &CMatrix) -> Self {
        let mut m = Self::zeros(ket.rows, bra.rows);
        for i in 0..ket.rows {
            for j in 0..bra.rows {
                m.data[i * bra.rows + j] = ket.data[i] * bra.data[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_vector(&self) -> bool {
        self.cols == 1
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x * c).collect() }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    pub fn add(&self, other: &CMatrix) -> Result<Self> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &CMatrix) -> Result<Self> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    fn zip_with(&self, other: &CMatrix, op: &'static str, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch { op, left: self.shape(), right: other.shape() });
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.conj()).collect() }
    }

    /// Frobenius norm (the 2-norm for column vectors).
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        self.scale_real(1.0 / n)
    }

    /// `<self|other>` for two column vectors of equal length.
    pub fn inner(&self, other: &CMatrix) -> Result<C64> {
        if !self.is_vector() || !other.is_vector() || self.rows != other.rows {
            return Err(Error::ShapeMismatch { op: "inner", left: self.shape(), right: other.shape() });
        }
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum())
    }

    /// Checks the state-vector invariant: one column, unit 2-norm within `1e-12`.
    pub fn ensure_state(&self) -> Result<()> {
        if !self.is_vector() {
            return Err(Error::ShapeMismatch { op: "state", left: self.shape(), right: (self.rows, 1) });
        }
        let n = self.norm();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(n));
        }
        Ok(())
    }

    /// Max-abs deviation of `a^dagger a` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let g = mul(&dagger(self), self).expect("square");
        residual(&g, &CMatrix::identity(self.rows)).expect("same shape")
    }

    pub fn ensure_unitary(&self, tol: f64) -> Result<()> {
        let defect = self.unitarity_defect();
        if defect < tol {
            Ok(())
        } else {
            Err(Error::NotUnitary(defect))
        }
    }

    pub fn pow(&self, k: usize) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare { op: "pow", rows: self.rows, cols: self.cols });
        }
        let mut acc = CMatrix::identity(self.rows);
        for _ in 0..k {
            acc = mul(&acc, self)?;
        }
        Ok(acc)
    }

    /// Number of entries that differ by more than `tol`.
    pub fn count_differences(&self, other: &CMatrix, tol: f64) -> Result<usize> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch { op: "compare", left: self.shape(), right: other.shape() });
        }
        Ok(self.data.iter().zip(&other.data).filter(|(a, b)| (**a - **b).norm() > tol).count())
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range for {}x{}", self.rows, self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range for {}x{}", self.rows, self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows.min(16) {
            write!(f, "  ")?;
            for c in 0..self.cols.min(16) {
                let z = self.data[r * self.cols + c];
                write!(f, "{:>7.3}{:+.3}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

fn check_axis(dim: usize) -> Result<()> {
    if dim > MAX_AXIS {
        Err(Error::SizeLimit { dim, limit: MAX_AXIS })
    } else {
        Ok(())
    }
}

/// Kronecker product: entry `(ia*rb + ib, ja*cb + jb) = a[ia,ja] * b[ib,jb]`.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let rows = a.rows.checked_mul(b.rows).ok_or(Error::SizeLimit { dim: usize::MAX, limit: MAX_AXIS })?;
    let cols = a.cols.checked_mul(b.cols).ok_or(Error::SizeLimit { dim: usize::MAX, limit: MAX_AXIS })?;
    check_axis(rows)?;
    check_axis(cols)?;
    let mut data = vec![ZERO; rows * cols];
    for ia in 0..a.rows {
        for ja in 0..a.cols {
            let x = a.data[ia * a.cols + ja];
            if x == ZERO {
                continue;
            }
            for ib in 0..b.rows {
                let row = (ia * b.rows + ib) * cols + ja * b.cols;
                for jb in 0..b.cols {
                    data[row + jb] = x * b.data[ib * b.cols + jb];
                }
            }
        }
    }
    Ok(CMatrix { rows, cols, data })
}

/// Left-to-right Kronecker product of a nonempty list.
pub fn tensor_all(factors: &[CMatrix]) -> Result<CMatrix> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::InvalidParam("empty tensor product".into()))?;
    rest.iter().try_fold(first.clone(), |acc, f| tensor(&acc, f))
}

/// `m` tensored with itself `k` times (`k >= 1`), or the 1x1 identity for `k = 0`.
pub fn tensor_power(m: &CMatrix, k: usize) -> Result<CMatrix> {
    let mut acc = CMatrix::identity(1);
    for _ in 0..k {
        acc = tensor(&acc, m)?;
    }
    Ok(acc)
}

pub fn dagger(a: &CMatrix) -> CMatrix {
    let mut m = CMatrix::zeros(a.cols, a.rows);
    for r in 0..a.rows {
        for c in 0..a.cols {
            m.data[c * a.rows + r] = a.data[r * a.cols + c].conj();
        }
    }
    m
}

pub fn transpose(a: &CMatrix) -> CMatrix {
    let mut m = CMatrix::zeros(a.cols, a.rows);
    for r in 0..a.rows {
        for c in 0..a.cols {
            m.data[c * a.rows + r] = a.data[r * a.cols + c];
        }
    }
    m
}

pub fn mul(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.cols != b.rows {
        return Err(Error::ShapeMismatch { op: "mul", left: a.shape(), right: b.shape() });
    }
    let mut data = vec![ZERO; a.rows * b.cols];
    for i in 0..a.rows {
        let out = &mut data[i * b.cols..(i + 1) * b.cols];
        for k in 0..a.cols {
            let x = a.data[i * a.cols + k];
            if x == ZERO {
                continue;
            }
            let brow = &b.data[k * b.cols..(k + 1) * b.cols];
            for (o, &y) in out.iter_mut().zip(brow) {
                *o += x * y;
            }
        }
    }
    Ok(CMatrix { rows: a.rows, cols: b.cols, data })
}

/// Product of a nonempty chain, `factors[0] * factors[1] * ...`.
pub fn mul_all(factors: &[&CMatrix]) -> Result<CMatrix> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::InvalidParam("empty product".into()))?;
    rest.iter().try_fold((*first).clone(), |acc, f| mul(&acc, f))
}

pub fn trace(a: &CMatrix) -> Result<C64> {
    if !a.is_square() {
        return Err(Error::NotSquare { op: "trace", rows: a.rows, cols: a.cols });
    }
    Ok((0..a.rows).map(|i| a.data[i * a.cols + i]).sum())
}

/// Normalized Hilbert-Schmidt inner product `tr(a^dagger b) / d`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Result<C64> {
    if !a.is_square() {
        return Err(Error::NotSquare { op: "hs_inner", rows: a.rows, cols: a.cols });
    }
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch { op: "hs_inner", left: a.shape(), right: b.shape() });
    }
    // tr(a^dagger b) = sum_ij conj(a_ij) b_ij
    let s: C64 = a.data.iter().zip(&b.data).map(|(x, y)| x.conj() * y).sum();
    Ok(s / a.rows as f64)
}

/// Max-abs entrywise difference.
pub fn residual(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch { op: "residual", left: a.shape(), right: b.shape() });
    }
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
}

/// Unitary that relabels wires: the digit on wire `q` moves to wire `perm[q]`.
pub fn permutation_matrix(perm: &[usize], local_dim: usize) -> Result<CMatrix> {
    let k = perm.len();
    let mut seen = vec![false; k];
    for &p in perm {
        if p >= k || seen[p] {
            return Err(Error::InvalidPermutation { perm: perm.to_vec(), len: k });
        }
        seen[p] = true;
    }
    if local_dim < 1 {
        return Err(Error::Dimension(local_dim));
    }
    let dim = (local_dim as u128).pow(k as u32);
    if dim > MAX_AXIS as u128 {
        return Err(Error::SizeLimit { dim: usize::MAX, limit: MAX_AXIS });
    }
    let dim = dim as usize;
    let mut m = CMatrix::zeros(dim, dim);
    let mut src = vec![0usize; k];
    let mut dst = vec![0usize; k];
    for s in 0..dim {
        to_digits(s, local_dim, &mut src);
        for q in 0..k {
            dst[perm[q]] = src[q];
        }
        let t = from_digits(&dst, local_dim);
        m.data[t * dim + s] = ONE;
    }
    Ok(m)
}

/// Big-endian digits of `index` in base `base`, written into `out`.
pub fn to_digits(mut index: usize, base: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
}

pub fn from_digits(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d)
}

/// Lifts a gate acting on `wires` (in that order) to the full `total`-wire space.
pub fn embed(gate: &CMatrix, wires: &[usize], total: usize, local_dim: usize) -> Result<CMatrix> {
    let k = wires.len();
    let sub = local_dim.pow(k as u32);
    if gate.shape() != (sub, sub) {
        return Err(Error::ShapeMismatch { op: "embed", left: gate.shape(), right: (sub, sub) });
    }
    let mut seen = vec![false; total];
    for &w in wires {
        if w >= total || seen[w] {
            return Err(Error::InvalidParam(format!("bad wire list {wires:?} for {total} wires")));
        }
        seen[w] = true;
    }
    let dim = local_dim.pow(total as u32);
    check_axis(dim)?;
    let mut m = CMatrix::zeros(dim, dim);
    let mut digits = vec![0usize; total];
    let mut sub_digits = vec![0usize; k];
    for col in 0..dim {
        to_digits(col, local_dim, &mut digits);
        let sub_col = from_digits(&wires.iter().map(|&w| digits[w]).collect::<Vec<_>>(), local_dim);
        for sub_row in 0..sub {
            let g = gate.data[sub_row * sub + sub_col];
            if g == ZERO {
                continue;
            }
            to_digits(sub_row, local_dim, &mut sub_digits);
            let mut out = digits.clone();
            for (i, &w) in wires.iter().enumerate() {
                out[w] = sub_digits[i];
            }
            let row = from_digits(&out, local_dim);
            m.data[row * dim + col] += g;
        }
    }
    Ok(m)
}

/// Rank by Gaussian elimination with partial pivoting; pivots below `pivot_tol` count as zero.
pub fn rank(a: &CMatrix, pivot_tol: f64) -> usize {
    let mut m = a.clone();
    let (rows, cols) = m.shape();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let (p, best) = (rank..rows)
            .map(|r| (r, m[(r, c)].norm()))
            .fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= pivot_tol {
            continue;
        }
        swap_rows(&mut m, rank, p);
        let pivot = m[(rank, c)];
        for r in rank + 1..rows {
            let factor = m[(r, c)] / pivot;
            if factor == ZERO {
                continue;
            }
            for cc in c..cols {
                let v = m[(rank, cc)];
                m[(r, cc)] -= factor * v;
            }
        }
        rank += 1;
    }
    rank
}

/// Solves `a x = b` for square `a` by Gaussian elimination with partial pivoting.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let n = a.rows;
    if !a.is_square() {
        return Err(Error::NotSquare { op: "solve", rows: a.rows, cols: a.cols });
    }
    if b.rows != n {
        return Err(Error::ShapeMismatch { op: "solve", left: a.shape(), right: b.shape() });
    }
    let mut m = a.clone();
    let mut x = b.clone();
    let scale = a.max_abs().max(1.0);
    for c in 0..n {
        let (p, best) = (c..n)
            .map(|r| (r, m[(r, c)].norm()))
            .fold((c, -1.0), |acc, v| if v.1 > acc.1 { v } else { acc });
        if best <= 1e-12 * scale {
            return Err(Error::Singular { rank: rank(a, 1e-12 * scale), size: n });
        }
        swap_rows(&mut m, c, p);
        swap_rows(&mut x, c, p);
        let pivot = m[(c, c)];
        for r in 0..n {
            if r == c {
                continue;
            }
            let factor = m[(r, c)] / pivot;
            if factor == ZERO {
                continue;
            }
            for cc in c..n {
                let v = m[(c, cc)];
                m[(r, cc)] -= factor * v;
            }
            for cc in 0..x.cols {
                let v = x[(c, cc)];
                x[(r, cc)] -= factor * v;
            }
        }
    }
    for r in 0..n {
        let pivot = m[(r, r)];
        for cc in 0..x.cols {
            x[(r, cc)] /= pivot;
        }
    }
    Ok(x)
}

fn swap_rows(m: &mut CMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    let cols = m.cols;
    for c in 0..cols {
        m.data.swap(a * cols + c, b * cols + c);
    }
}

/// Spectral norm of a Hermitian matrix, by power iteration on its square.
pub fn hermitian_spectral_norm(h: &CMatrix) -> Result<f64> {
    if !h.is_square() {
        return Err(Error::NotSquare { op: "spectral_norm", rows: h.rows, cols: h.cols });
    }
    let n = h.rows;
    let h2 = mul(h, h)?;
    let mut v = CMatrix::column((0..n).map(|i| C64::new(1.0 + 0.1 * i as f64, 0.05 * i as f64)).collect());
    v = v.normalized();
    let mut lambda = 0.0;
    for _ in 0..500 {
        let w = mul(&h2, &v)?;
        let nw = w.norm();
        if nw == 0.0 {
            return Ok(0.0);
        }
        let next = w.scale_real(1.0 / nw);
        let converged = (nw - lambda).abs() <= 1e-14 * nw.max(1.0);
        lambda = nw;
        v = next;
        if converged {
            break;
        }
    }
    Ok(lambda.sqrt())
}
