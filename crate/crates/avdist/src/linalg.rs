//! Dense complex matrices and the handful of decompositions the rest of the
//! toolkit is built on.
//!
//! Everything is row-major `Vec<Complex64>`; dimensions in this crate stay
//! small (a few thousand at most), so no sparsity or blocking is attempted.
//! Hermitian eigendecompositions are delegated to nalgebra's symmetric
//! (tridiagonalize + QR) solver, which is deterministic for a fixed input.

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = num_complex::Complex64;

/// Tolerance for treating a matrix as Hermitian (max-entry deviation).
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

/// Serialized form: `{"dim_rows", "dim_cols", "entries": [[re, im], ...]}`
/// with entries in row-major order. Finite doubles round-trip bit-exactly.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    dim_rows: usize,
    dim_cols: usize,
    entries: Vec<(f64, f64)>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            dim_rows: self.rows,
            dim_cols: self.cols,
            entries: self.entries.iter().map(|z| (z.re, z.im)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MatrixRepr::deserialize(d)?;
        if r.entries.len() != r.dim_rows * r.dim_cols {
            return Err(serde::de::Error::custom(format!(
                "expected {} entries, got {}",
                r.dim_rows * r.dim_cols,
                r.entries.len()
            )));
        }
        Ok(ComplexMatrix {
            rows: r.dim_rows,
            cols: r.dim_cols,
            entries: r.entries.iter().map(|&(re, im)| C64::new(re, im)).collect(),
        })
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, entries: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Row-major construction from real entries.
    pub fn from_real(rows: usize, cols: usize, vals: &[f64]) -> Self {
        assert_eq!(vals.len(), rows * cols);
        ComplexMatrix {
            rows,
            cols,
            entries: vals.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    pub fn diag(vals: &[C64]) -> Self {
        let mut m = Self::zeros(vals.len(), vals.len());
        for (i, &v) in vals.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// |i><j| in dimension d.
    pub fn ketbra(d: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(d, d);
        m[(i, j)] = C64::new(1.0, 0.0);
        m
    }

    /// Rank-one projector onto a (not necessarily normalized) vector.
    pub fn projector(v: &[C64]) -> Self {
        let n2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj() / n2)
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

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Apply to a vector.
    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Hilbert-Schmidt / Frobenius norm (works for any matrix).
    pub fn frobenius(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Hilbert-Schmidt inner product <A, B> = tr(A† B).
    pub fn hs_inner(&self, other: &Self) -> C64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-entry deviation from Hermiticity.
    pub fn hermiticity_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// (m + m†)/2 — used after the Hermiticity check to kill roundoff drift.
    pub fn hermitize(&self) -> Self {
        self.add(&self.dagger()).scale_re(0.5)
    }

    /// Kronecker product, row-major convention: `(A ⊗ B)[(i1*rB + i2), (j1*cB + j2)]
    /// = A[i1,j1] * B[i2,j2]`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self[(i1, j1)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        out[(i1 * other.rows + i2, j1 * other.cols + j2)] = a * other[(i2, j2)];
                    }
                }
            }
        }
        out
    }

    /// k-fold tensor power.
    pub fn tensor_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        let mut out = self.clone();
        for _ in 1..k {
            out = out.kron(self);
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex<f64>> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| {
            let z = self[(i, j)];
            Complex::new(z.re, z.im)
        })
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<Complex<f64>>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| C64::new(m[(i, j)].re, m[(i, j)].im))
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i * self.cols + j]
    }
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues ascending,
/// `vectors` holds the matching orthonormal eigenvectors as columns.
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Rejects non-square, non-finite, or non-Hermitian (beyond 1e-10 max-entry
/// deviation) input; within tolerance the matrix is symmetrized first so the
/// solver sees an exactly Hermitian operator.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    let n = m.require_square()?;
    if !m.is_finite() {
        return Err(Error::NotFinite);
    }
    let dev = m.hermiticity_deviation();
    if dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let sym = m.hermitize();
    let eig = sym.to_nalgebra().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| {
        let z = eig.eigenvectors[(i, order[j])];
        C64::new(z.re, z.im)
    });
    Ok(HermitianEig { values, vectors })
}

/// Schatten 1-, 2- and ∞-norms of a Hermitian matrix, computed from its
/// eigenvalues.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SchattenNorms {
    pub trace_norm: f64,
    pub hs_norm: f64,
    pub op_norm: f64,
}

pub fn schatten_norms(m: &ComplexMatrix) -> Result<SchattenNorms> {
    let eig = hermitian_eig(m)?;
    Ok(SchattenNorms {
        trace_norm: eig.values.iter().map(|v| v.abs()).sum(),
        hs_norm: eig.values.iter().map(|v| v * v).sum::<f64>().sqrt(),
        op_norm: eig.values.iter().map(|v| v.abs()).fold(0.0, f64::max),
    })
}

/// Operator norm (largest singular value) of an arbitrary matrix, via the
/// top eigenvalue of m†m.
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    let gram = m.dagger().mul(m);
    let eig = hermitian_eig(&gram)?;
    Ok(eig.values.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

/// Apply a real function to a Hermitian matrix through its spectrum.
pub fn hermitian_function(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    let v = &eig.vectors;
    let d = ComplexMatrix::diag(
        &eig.values.iter().map(|&x| C64::new(f(x), 0.0)).collect::<Vec<_>>(),
    );
    Ok(v.mul(&d).mul(&v.dagger()))
}

/// Partial trace over one tensor factor.
///
/// `dims` lists the local dimensions in tensor order (row-major Kronecker
/// convention, matching [`ComplexMatrix::kron`]); `traced` is the index of the
/// factor to trace out.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], traced: usize) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    let total: usize = dims.iter().product();
    if total != n || traced >= dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "partial_trace: matrix dim {n}, factors {dims:?}, traced index {traced}"
        )));
    }
    let left: usize = dims[..traced].iter().product();
    let mid = dims[traced];
    let right: usize = dims[traced + 1..].iter().product();
    let out_dim = left * right;
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for l1 in 0..left {
        for r1 in 0..right {
            for l2 in 0..left {
                for r2 in 0..right {
                    let mut s = C64::new(0.0, 0.0);
                    for k in 0..mid {
                        let row = (l1 * mid + k) * right + r1;
                        let col = (l2 * mid + k) * right + r2;
                        s += m[(row, col)];
                    }
                    out[(l1 * right + r1, l2 * right + r2)] = s;
                }
            }
        }
    }
    Ok(out)
}

/// Conjugate a matrix on ⊗ᵢ C^{dims[i]} by the subsystem reordering that
/// places old factor `order[j]` at new position `j`.
pub fn reorder_subsystems(
    m: &ComplexMatrix,
    dims: &[usize],
    order: &[usize],
) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    let total: usize = dims.iter().product();
    let k = dims.len();
    if total != n {
        return Err(Error::DimensionMismatch(format!(
            "reorder_subsystems: matrix dim {n}, factors {dims:?}"
        )));
    }
    let mut seen = vec![false; k];
    for &o in order {
        if o >= k || seen[o] {
            return Err(Error::NotAPermutation(order.to_vec(), k));
        }
        seen[o] = true;
    }
    if order.len() != k {
        return Err(Error::NotAPermutation(order.to_vec(), k));
    }
    // flat index -> flat index under the reordering
    let map: Vec<usize> = (0..n)
        .map(|flat| {
            let mut idx = vec![0usize; k];
            let mut rem = flat;
            for i in (0..k).rev() {
                idx[i] = rem % dims[i];
                rem /= dims[i];
            }
            let mut out = 0usize;
            for j in 0..k {
                out = out * dims[order[j]] + idx[order[j]];
            }
            out
        })
        .collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            out[(map[r], map[c])] = m[(r, c)];
        }
    }
    Ok(out)
}

/// Maximum order of tensor-permutation operators.
pub const MAX_PERMUTATION_ORDER: usize = 4;
/// Maximum total dimension d^k of tensor-permutation operators.
pub const MAX_PERMUTATION_DIM: usize = 65536;

/// Permutation operator P_π on (C^d)^{⊗k}, with π given in one-line notation:
/// `perm[m] = π(m)` over 0-based slot labels. P_π maps |i_0 … i_{k-1}> to the
/// basis vector whose slot π(m) carries i_m.
pub fn permutation_operator(d: usize, perm: &[usize]) -> Result<ComplexMatrix> {
    let k = perm.len();
    if k == 0 || k > MAX_PERMUTATION_ORDER {
        return Err(Error::OrderTooLarge { k });
    }
    let mut seen = vec![false; k];
    for &p in perm {
        if p >= k || seen[p] {
            return Err(Error::NotAPermutation(perm.to_vec(), k));
        }
        seen[p] = true;
    }
    let dim = d.checked_pow(k as u32).filter(|&x| x <= MAX_PERMUTATION_DIM).ok_or(
        Error::DimensionTooLarge { dim: d.pow(k as u32), limit: MAX_PERMUTATION_DIM },
    )?;
    let mut out = ComplexMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut idx = vec![0usize; k];
        let mut rem = col;
        for i in (0..k).rev() {
            idx[i] = rem % d;
            rem /= d;
        }
        let mut row_idx = vec![0usize; k];
        for m in 0..k {
            row_idx[perm[m]] = idx[m];
        }
        let row = row_idx.iter().fold(0usize, |acc, &i| acc * d + i);
        out[(row, col)] = C64::new(1.0, 0.0);
    }
    Ok(out)
}

/// √m for a PSD Hermitian matrix; small negative eigenvalues (roundoff) are
/// clamped to zero.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    let v = &eig.vectors;
    let d = ComplexMatrix::diag(
        &eig
            .values
            .iter()
            .map(|&x| C64::new(x.max(0.0).sqrt(), 0.0))
            .collect::<Vec<_>>(),
    );
    Ok(v.mul(&d).mul(&v.dagger()))
}
