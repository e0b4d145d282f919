//! Dense complex linear algebra for desk-scale quantum operators.
//!
//! Matrices are stored row-major as flat `Vec<Complex64>`. The module is
//! deliberately small: arithmetic, a Hermitian eigendecomposition (backed by
//! nalgebra's complex `SymmetricEigen`, re-sorted to ascending eigenvalue
//! order), spectral matrix functions with an explicit support convention,
//! Kronecker products and partial traces over arbitrary factor subsets.
//!
//! Spectral policy used throughout the crate: eigenvalues with magnitude at
//! most [`SUPPORT_CUTOFF`] count as zero (outside the support), round-off
//! negatives above [`EIGENVALUE_CLIP_FLOOR`] are clipped to zero before a
//! scalar function is applied, and anything more negative is treated as
//! genuine and surfaces as a domain error when the function cannot take it.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Eigenvalues with `|lambda| <= SUPPORT_CUTOFF` are treated as exact zeros.
pub const SUPPORT_CUTOFF: f64 = 1e-12;

/// Round-off negatives in `(EIGENVALUE_CLIP_FLOOR, 0)` are clipped to zero
/// before a spectral function is applied; more negative values are genuine.
pub const EIGENVALUE_CLIP_FLOOR: f64 = -1e-9;

/// Hermiticity tolerance per unit dimension: a matrix of dimension `d` is
/// accepted as Hermitian when `||M - M^dagger||_F <= d * HERMITICITY_TOL`.
pub const HERMITICITY_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum LinmathError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    NotHermitian { residual: f64, tolerance: f64 },
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("keep set must not be empty")]
    EmptyKeep,
    #[error("entry ({row},{col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("function undefined at eigenvalue {eigenvalue:.6e}")]
    DomainError { eigenvalue: f64 },
}

/// Dense complex matrix, row-major storage.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting NaN/infinite values.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self, LinmathError> {
        if entries.len() != rows * cols {
            return Err(LinmathError::DimMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        for (k, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(LinmathError::NonFiniteEntry {
                    row: k / cols,
                    col: k % cols,
                });
            }
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix entry by entry. The callback must produce finite values.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    /// Square matrix with the given real numbers on the diagonal.
    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in diag.iter().enumerate() {
            m.entries[i * n + i] = Complex64::new(x, 0.0);
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

    /// Side length of a square matrix.
    ///
    /// # Panics
    /// Panics if the matrix is not square.
    pub fn dim(&self) -> usize {
        assert!(self.is_square(), "dim() called on non-square matrix");
        self.rows
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `||M - M^dagger||_F`, zero for exactly Hermitian matrices.
    pub fn hermiticity_residual(&self) -> f64 {
        assert!(self.is_square(), "hermiticity of non-square matrix");
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self[(i, j)] - self[(j, i)].conj();
                acc += d.norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Replaces the matrix by its Hermitian part `(M + M^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| *z * factor).collect(),
        }
    }

    pub fn scaled_complex(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| *z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix addition shape mismatch"
        );
        Self {
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
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix subtraction shape mismatch"
        );
        Self {
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
        assert_eq!(
            self.cols, other.rows,
            "matrix product shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Integer matrix power by repeated squaring; `pow(0)` is the identity.
    pub fn pow(&self, mut exponent: u64) -> Result<Self, LinmathError> {
        if !self.is_square() {
            return Err(LinmathError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        while exponent > 0 {
            if exponent & 1 == 1 {
                result = result.mul(&base);
            }
            exponent >>= 1;
            if exponent > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    /// Largest entrywise absolute difference; useful in tests and checks.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "comparison shape mismatch"
        );
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (row, col): (usize, usize)) -> &Complex64 {
        &self.entries[row * self.cols + col]
    }
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues in ascending
/// order and the matching orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Rebuilds `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.compose(&self.eigenvalues)
    }

    /// Builds `V diag(values) V^dagger` for arbitrary real diagonal values.
    pub fn compose(&self, values: &[f64]) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        assert_eq!(values.len(), n, "diagonal length mismatch");
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * values[k] * v[(j, k)].conj())
                .sum()
        })
    }
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending.
///
/// The input must be Hermitian within `HERMITICITY_TOL * dim` in Frobenius
/// norm; its Hermitian part is decomposed, so round-off asymmetry is ignored.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen, LinmathError> {
    if !m.is_square() {
        return Err(LinmathError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.dim();
    let residual = m.hermiticity_residual();
    let tolerance = HERMITICITY_TOL * n as f64;
    if residual > tolerance {
        return Err(LinmathError::NotHermitian { residual, tolerance });
    }
    let backend = DMatrix::<Complex64>::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let decomp = backend.symmetric_eigen();
    // nalgebra returns eigenvalues in no particular order; sort ascending and
    // permute the eigenvector columns to match.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| decomp.eigenvalues[a].total_cmp(&decomp.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| decomp.eigenvalues[k]).collect();
    let eigenvectors =
        ComplexMatrix::from_fn(n, n, |i, j| decomp.eigenvectors[(i, order[j])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Applies a real scalar function to a Hermitian matrix through its spectrum.
///
/// With `support_only` set, the input is treated as a nominally
/// positive-semidefinite operator: round-off negatives in
/// `(EIGENVALUE_CLIP_FLOOR, 0)` are clipped to zero, and eigenvalues inside
/// `[-SUPPORT_CUTOFF, SUPPORT_CUTOFF]` are mapped to zero without evaluating
/// `f`, which implements support-restricted functions such as the
/// pseudo-inverse or the `0 log 0 = 0` convention. Without it, `f` is applied
/// to the spectrum verbatim, so that functions of general Hermitian operators
/// (for example the exponential of a logarithm difference) are not distorted
/// near zero. A non-finite `f(lambda)` on a retained eigenvalue is a domain
/// error.
pub fn matrix_function(
    m: &ComplexMatrix,
    f: impl Fn(f64) -> f64,
    support_only: bool,
) -> Result<ComplexMatrix, LinmathError> {
    let eig = hermitian_eig(m)?;
    let mut mapped = Vec::with_capacity(eig.eigenvalues.len());
    for &raw in &eig.eigenvalues {
        let lambda = if support_only && raw < 0.0 && raw > EIGENVALUE_CLIP_FLOOR {
            0.0
        } else {
            raw
        };
        if support_only && lambda.abs() <= SUPPORT_CUTOFF {
            mapped.push(0.0);
            continue;
        }
        let y = f(lambda);
        if !y.is_finite() {
            return Err(LinmathError::DomainError { eigenvalue: lambda });
        }
        mapped.push(y);
    }
    Ok(eig.compose(&mapped))
}

/// Kronecker product; the first factor owns the most significant index, so
/// `kron(a, b)[(i_a*rows_b + i_b, j_a*cols_b + j_b)] = a[(i_a,j_a)] * b[(i_b,j_b)]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = (a.rows(), a.cols());
    let (rb, cb) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(ra * rb, ca * cb, |i, j| {
        a[(i / rb, j / cb)] * b[(i % rb, j % cb)]
    })
}

/// Traces out every tensor factor not listed in `keep`.
///
/// `dims` are the factor dimensions in tensor order (first factor most
/// significant); `keep` lists the factor positions to retain. The kept
/// factors keep their original relative order regardless of the order they
/// are listed in.
pub fn partial_trace(
    m: &ComplexMatrix,
    dims: &[usize],
    keep: &[usize],
) -> Result<ComplexMatrix, LinmathError> {
    if !m.is_square() {
        return Err(LinmathError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let total: usize = dims.iter().product();
    if total != m.dim() {
        return Err(LinmathError::DimMismatch(format!(
            "factor dimensions multiply to {total} but the matrix has dimension {}",
            m.dim()
        )));
    }
    if keep.is_empty() {
        return Err(LinmathError::EmptyKeep);
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() {
        return Err(LinmathError::DimMismatch(
            "keep positions must be distinct".into(),
        ));
    }
    if let Some(&bad) = kept.iter().find(|&&p| p >= dims.len()) {
        return Err(LinmathError::DimMismatch(format!(
            "keep position {bad} out of range for {} factors",
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|p| !kept.contains(p)).collect();

    let strides = tensor_strides(dims);
    let kept_offsets = subset_offsets(dims, &strides, &kept);
    let traced_offsets = subset_offsets(dims, &strides, &traced);

    let dim_kept = kept_offsets.len();
    let mut out = ComplexMatrix::zeros(dim_kept, dim_kept);
    for (rk, &row_base) in kept_offsets.iter().enumerate() {
        for (ck, &col_base) in kept_offsets.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &t in &traced_offsets {
                acc += m[(row_base + t, col_base + t)];
            }
            out.set(rk, ck, acc);
        }
    }
    Ok(out)
}

/// Frobenius norm of the commutator `AB - BA`.
pub fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64, LinmathError> {
    if !a.is_square() {
        return Err(LinmathError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if !b.is_square() {
        return Err(LinmathError::NotSquare {
            rows: b.rows(),
            cols: b.cols(),
        });
    }
    if a.dim() != b.dim() {
        return Err(LinmathError::DimMismatch(format!(
            "commutator needs equal dimensions, got {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(a.mul(b).sub(&b.mul(a)).frobenius_norm())
}

/// Row strides of each tensor factor (first factor most significant).
pub fn tensor_strides(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; dims.len()];
    for p in (0..dims.len().saturating_sub(1)).rev() {
        strides[p] = strides[p + 1] * dims[p + 1];
    }
    strides
}

/// All flat offsets spanned by the factors at `positions`, enumerated in
/// lexicographic order of the corresponding multi-index.
fn subset_offsets(dims: &[usize], strides: &[usize], positions: &[usize]) -> Vec<usize> {
    let mut offsets = vec![0usize];
    for &p in positions {
        let mut next = Vec::with_capacity(offsets.len() * dims[p]);
        for &base in &offsets {
            for k in 0..dims[p] {
                next.push(base + k * strides[p]);
            }
        }
        offsets = next;
    }
    offsets
}

/// Embeds an operator acting on the factors at `positions` (sorted
/// ascending) into the full tensor space, acting as the identity elsewhere.
pub fn embed_at(
    op: &ComplexMatrix,
    dims: &[usize],
    positions: &[usize],
) -> Result<ComplexMatrix, LinmathError> {
    if !op.is_square() {
        return Err(LinmathError::NotSquare {
            rows: op.rows(),
            cols: op.cols(),
        });
    }
    let mut sorted = positions.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != positions.len() {
        return Err(LinmathError::DimMismatch(
            "embed positions must be distinct".into(),
        ));
    }
    if let Some(&bad) = sorted.iter().find(|&&p| p >= dims.len()) {
        return Err(LinmathError::DimMismatch(format!(
            "embed position {bad} out of range for {} factors",
            dims.len()
        )));
    }
    let sub_dim: usize = sorted.iter().map(|&p| dims[p]).product();
    if sub_dim != op.dim() {
        return Err(LinmathError::DimMismatch(format!(
            "operator dimension {} does not match embedded factors ({sub_dim})",
            op.dim()
        )));
    }
    let rest: Vec<usize> = (0..dims.len()).filter(|p| !sorted.contains(p)).collect();
    let strides = tensor_strides(dims);
    let sub_offsets = subset_offsets(dims, &strides, &sorted);
    let rest_offsets = subset_offsets(dims, &strides, &rest);

    let total: usize = dims.iter().product();
    let mut out = ComplexMatrix::zeros(total, total);
    for (r, &row_base) in sub_offsets.iter().enumerate() {
        for (c, &col_base) in sub_offsets.iter().enumerate() {
            let v = op[(r, c)];
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            for &t in &rest_offsets {
                out.set(row_base + t, col_base + t, v);
            }
        }
    }
    Ok(out)
}
