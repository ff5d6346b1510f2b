//! Dense real and complex matrices up to 16×16.
//!
//! Everything here is sized for the spinor and two-vector spaces of a
//! four-dimensional inner product space: 4×4 maps, 6×6 operators on Λ²,
//! and 16×16 endomorphisms of a tensor product of two spinor spaces.
//! Eigenproblems are solved with cyclic Jacobi rotations; the SVD of a
//! square real map is read off from the Gram matrix `lᵀl`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

/// Largest supported row or column count.
pub const MAX_DIM: usize = 16;

/// Relative Frobenius asymmetry accepted by the eigensolvers.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// fraction of the full norm.
const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 60;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix of size {rows}x{cols} exceeds the {MAX_DIM}x{MAX_DIM} bound")]
    TooLarge { rows: usize, cols: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not self-adjoint: asymmetry {asymmetry:.3e} exceeds {allowed:.3e}")]
    NotSelfAdjoint { asymmetry: f64, allowed: f64 },
}

fn check_dims(rows: usize, cols: usize) -> Result<(), LinalgError> {
    if rows == 0 || cols == 0 || rows > MAX_DIM || cols > MAX_DIM {
        Err(LinalgError::TooLarge { rows, cols })
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Real matrices

/// Row-major real matrix with fixed dimensions.
#[derive(Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    /// # Panics
    /// If either dimension is zero or larger than [`MAX_DIM`].
    pub fn zeros(rows: usize, cols: usize) -> Self {
        check_dims(rows, cols).expect("invalid matrix dimensions");
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { 0.0 })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from nested rows, validating shape and finiteness.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        check_dims(nrows, ncols)?;
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != ncols {
                return Err(LinalgError::Shape(format!(
                    "row {i} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            for (j, &x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(LinalgError::NonFinite { row: i, col: j });
                }
                data.push(x);
            }
        }
        Ok(Self { rows: nrows, cols: ncols, data })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns<C: AsRef<[f64]>>(cols: &[C]) -> Self {
        let ncols = cols.len();
        let nrows = cols[0].as_ref().len();
        Self::from_fn(nrows, ncols, |i, j| cols[j].as_ref()[i])
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

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols).map(|r| r.to_vec()).collect()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[f64]) {
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| s * x).collect() }
    }

    /// `(M + Mᵀ)/2`.
    pub fn symmetrized(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]))
    }

    /// Frobenius norm of `M - Mᵀ`.
    pub fn asymmetry(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self[(i, j)] - self[(j, i)];
                s += d * d;
            }
        }
        s.sqrt()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `vᵀ M v`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        dot(v, &self.mul_vec(v))
    }

    pub fn determinant(&self) -> f64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = 1.0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[(i, k)].abs().total_cmp(&a[(j, k)].abs()))
                .unwrap();
            if a[(p, k)] == 0.0 {
                return 0.0;
            }
            if p != k {
                for j in 0..n {
                    let t = a[(k, j)];
                    a[(k, j)] = a[(p, j)];
                    a[(p, j)] = t;
                }
                det = -det;
            }
            det *= a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / a[(k, k)];
                for j in k..n {
                    let t = a[(k, j)];
                    a[(i, j)] -= f * t;
                }
            }
        }
        det
    }

    /// Real-to-complex embedding.
    pub fn to_complex(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| Complex64::new(self[(i, j)], 0.0))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &RealMatrix {
    type Output = RealMatrix;
    fn mul(self, rhs: &RealMatrix) -> RealMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = RealMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &RealMatrix {
    type Output = RealMatrix;
    fn add(self, rhs: &RealMatrix) -> RealMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RealMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &RealMatrix {
    type Output = RealMatrix;
    fn sub(self, rhs: &RealMatrix) -> RealMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RealMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &RealMatrix {
    type Output = RealMatrix;
    fn neg(self) -> RealMatrix {
        self.scale(-1.0)
    }
}

impl fmt::Debug for RealMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RealMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for x in self.row(i) {
                write!(f, "{x:>12.6e} ")?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

// ---------------------------------------------------------------------------
// Complex matrices

/// Row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        check_dims(rows, cols).expect("invalid matrix dimensions");
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
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

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| s * x).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of `M - M*`.
    pub fn hermitian_defect(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                s += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// Frobenius norm of `M + M*`.
    pub fn skew_hermitian_defect(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                s += (self[(i, j)] + self[(j, i)].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// Kronecker product `self ⊗ rhs`; the left factor indexes the outer block.
    pub fn kron(&self, rhs: &CMatrix) -> CMatrix {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        CMatrix::from_fn(rows, cols, |i, j| {
            self[(i / rhs.rows, j / rhs.cols)] * rhs[(i % rhs.rows, j % rhs.cols)]
        })
    }

    /// Submatrix on the given row/column index set.
    pub fn restrict(&self, idx: &[usize]) -> CMatrix {
        CMatrix::from_fn(idx.len(), idx.len(), |i, j| self[(idx[i], idx[j])])
    }

    /// Submatrix with distinct row and column index sets.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> CMatrix {
        CMatrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    /// `AB - BA`.
    pub fn commutator(&self, rhs: &CMatrix) -> CMatrix {
        &(self * rhs) - &(rhs * self)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.norm()))
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl AddAssign<&CMatrix> for CMatrix {
    fn add_assign(&mut self, rhs: &CMatrix) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale_real(-1.0)
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>9.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// A complex matrix known to be Hermitian within [`SYMMETRY_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct HermMatrix(CMatrix);

impl HermMatrix {
    pub fn new(m: CMatrix) -> Result<Self, LinalgError> {
        check_hermitian(&m)?;
        Ok(Self(m))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix {
        self.0
    }
}

// ---------------------------------------------------------------------------
// Eigenproblems

/// Eigen-decomposition of a real symmetric matrix: ascending eigenvalues,
/// eigenvectors stored as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: RealMatrix,
}

impl SymEigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }

    /// `Σ λᵢ vᵢ vᵢᵀ`.
    pub fn reconstruct(&self) -> RealMatrix {
        let n = self.values.len();
        RealMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| self.values[k] * self.vectors[(i, k)] * self.vectors[(j, k)]).sum()
        })
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermEigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.values.len()).map(|i| self.vectors[(i, k)]).collect()
    }
}

fn check_symmetric(m: &RealMatrix) -> Result<(), LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let asym = m.asymmetry();
    let allowed = SYMMETRY_TOL * m.frobenius_norm();
    if asym > allowed {
        return Err(LinalgError::NotSelfAdjoint { asymmetry: asym, allowed });
    }
    Ok(())
}

fn check_hermitian(m: &CMatrix) -> Result<(), LinalgError> {
    if m.rows != m.cols {
        return Err(LinalgError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let defect = m.hermitian_defect();
    let allowed = SYMMETRY_TOL * m.frobenius_norm();
    if defect > allowed {
        return Err(LinalgError::NotSelfAdjoint { asymmetry: defect, allowed });
    }
    Ok(())
}

fn jacobi_real(a: &mut RealMatrix, mut v: Option<&mut RealMatrix>) {
    let n = a.rows;
    let thresh = JACOBI_TOL * a.frobenius_norm();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += 2.0 * a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= thresh {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let zeta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
}

fn jacobi_complex(a: &mut CMatrix, mut v: Option<&mut CMatrix>) {
    let n = a.rows;
    let thresh = JACOBI_TOL * a.frobenius_norm();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += 2.0 * a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= thresh {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                // Phase-rotate the (p,q) pair to a real symmetric 2×2 block, then
                // apply the real rotation: G = diag(1, e^{-iφ}) · [[c, s], [-s, c]].
                let phase = apq / r;
                let zeta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let gpp = Complex64::new(c, 0.0);
                let gpq = Complex64::new(s, 0.0);
                let gqp = -phase.conj() * s;
                let gqq = phase.conj() * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * gpp + akq * gqp;
                    a[(k, q)] = akp * gpq + akq * gqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
                    a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * gpp + vkq * gqp;
                        v[(k, q)] = vkp * gpq + vkq * gqq;
                    }
                }
            }
        }
    }
}

fn ascending_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    idx
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a real symmetric matrix.
pub fn sym_eigen(m: &RealMatrix) -> Result<SymEigen, LinalgError> {
    check_symmetric(m)?;
    let n = m.rows;
    let mut a = m.symmetrized();
    let mut v = RealMatrix::identity(n);
    jacobi_real(&mut a, Some(&mut v));
    let diag = a.diagonal();
    let order = ascending_order(&diag);
    let values = order.iter().map(|&k| diag[k]).collect();
    let vectors = RealMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(SymEigen { values, vectors })
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
pub fn herm_eigen(m: &CMatrix) -> Result<HermEigen, LinalgError> {
    check_hermitian(m)?;
    let n = m.rows;
    let mut a = CMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()));
    let mut v = CMatrix::identity(n);
    jacobi_complex(&mut a, Some(&mut v));
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let order = ascending_order(&diag);
    let values = order.iter().map(|&k| diag[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermEigen { values, vectors })
}

/// Self-adjoint matrices whose spectrum can be computed here.
pub trait SelfAdjoint {
    /// Ascending eigenvalues.
    fn eigenvalues(&self) -> Result<Vec<f64>, LinalgError>;

    fn min_eigenvalue(&self) -> Result<f64, LinalgError> {
        Ok(self.eigenvalues()?[0])
    }

    fn max_eigenvalue(&self) -> Result<f64, LinalgError> {
        Ok(*self.eigenvalues()?.last().expect("nonempty spectrum"))
    }
}

impl SelfAdjoint for RealMatrix {
    fn eigenvalues(&self) -> Result<Vec<f64>, LinalgError> {
        check_symmetric(self)?;
        let mut a = self.symmetrized();
        jacobi_real(&mut a, None);
        let mut d = a.diagonal();
        d.sort_by(f64::total_cmp);
        Ok(d)
    }
}

impl SelfAdjoint for CMatrix {
    fn eigenvalues(&self) -> Result<Vec<f64>, LinalgError> {
        check_hermitian(self)?;
        let n = self.rows;
        let mut a = CMatrix::from_fn(n, n, |i, j| 0.5 * (self[(i, j)] + self[(j, i)].conj()));
        jacobi_complex(&mut a, None);
        let mut d: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
        d.sort_by(f64::total_cmp);
        Ok(d)
    }
}

impl SelfAdjoint for HermMatrix {
    fn eigenvalues(&self) -> Result<Vec<f64>, LinalgError> {
        self.0.eigenvalues()
    }
}

/// Smallest eigenvalue of a symmetric or Hermitian matrix.
pub fn min_eigenvalue<M: SelfAdjoint + ?Sized>(m: &M) -> Result<f64, LinalgError> {
    m.min_eigenvalue()
}

// ---------------------------------------------------------------------------
// Singular value decomposition

/// `l(wᵢ) = λᵢ vᵢ` with `{wᵢ}` (columns of `right`) and `{vᵢ}` (columns of
/// `left`) orthonormal and `λ` descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub left: RealMatrix,
    pub right: RealMatrix,
    pub singular_values: Vec<f64>,
}

impl Svd {
    /// `Σ λᵢ vᵢ wᵢᵀ`.
    pub fn reconstruct(&self) -> RealMatrix {
        let n = self.singular_values.len();
        RealMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.singular_values[k] * self.left[(i, k)] * self.right[(j, k)])
                .sum()
        })
    }
}

/// SVD of a square map of dimension at most 6, obtained by diagonalizing the
/// Gram matrix `lᵀl` and normalizing the images of its eigenvectors.
/// Vanishing singular values are completed to an orthonormal basis.
pub fn svd(l: &RealMatrix) -> Result<Svd, LinalgError> {
    if !l.is_square() {
        return Err(LinalgError::NotSquare { rows: l.rows, cols: l.cols });
    }
    let n = l.rows;
    if n > 6 {
        return Err(LinalgError::TooLarge { rows: n, cols: n });
    }
    let gram = &l.transpose() * l;
    let eig = sym_eigen(&gram.symmetrized())?;
    let zero_cut = 1e-11 * l.frobenius_norm();

    let mut right = RealMatrix::zeros(n, n);
    let mut left = RealMatrix::zeros(n, n);
    let mut sv = vec![0.0; n];
    let mut lefts: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut pending = Vec::new();
    for (slot, k) in (0..n).rev().enumerate() {
        let w = eig.vector(k);
        right.set_column(slot, &w);
        let image = l.mul_vec(&w);
        let lambda = norm(&image);
        if lambda > zero_cut {
            let mut u: Vec<f64> = image.iter().map(|x| x / lambda).collect();
            orthonormalize_against(&mut u, &lefts);
            sv[slot] = lambda;
            left.set_column(slot, &u);
            lefts.push(u);
        } else {
            pending.push(slot);
        }
    }
    for slot in pending {
        let u = complete_basis(&lefts, n);
        left.set_column(slot, &u);
        lefts.push(u);
    }
    Ok(Svd { left, right, singular_values: sv })
}

fn orthonormalize_against(u: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(u, b);
            for (x, y) in u.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
    let nu = norm(u);
    for x in u.iter_mut() {
        *x /= nu;
    }
}

/// A unit vector orthogonal to `basis`, taken from the standard basis vector
/// with the largest residual.
fn complete_basis(basis: &[Vec<f64>], n: usize) -> Vec<f64> {
    let mut best: Option<(f64, Vec<f64>)> = None;
    for k in 0..n {
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        for b in basis {
            let c = dot(&e, b);
            for (x, y) in e.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
        let r = norm(&e);
        if best.as_ref().map_or(true, |(br, _)| r > *br) {
            best = Some((r, e));
        }
    }
    let mut u = best.expect("n > 0").1;
    orthonormalize_against(&mut u, basis);
    u
}

/// Largest singular value, from the top eigenvalue of `mᵀm`.
pub fn largest_singular_value(m: &RealMatrix) -> f64 {
    let gram = (&m.transpose() * m).symmetrized();
    gram.max_eigenvalue().expect("Gram matrix is symmetric").max(0.0).sqrt()
}

/// Spectral norm of a symmetric matrix (largest absolute eigenvalue).
pub fn spectral_norm_sym(m: &RealMatrix) -> Result<f64, LinalgError> {
    let ev = m.eigenvalues()?;
    Ok(ev[0].abs().max(ev[ev.len() - 1].abs()))
}

/// Gram–Schmidt orthonormalization of the columns, fixing the sign of the last
/// column so the result has determinant +1 when square.
pub fn orthonormalize_columns(m: &RealMatrix) -> RealMatrix {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(m.cols);
    for j in 0..m.cols {
        let mut c = m.column(j);
        orthonormalize_against(&mut c, &cols);
        cols.push(c);
    }
    let mut q = RealMatrix::from_columns(&cols);
    if q.is_square() && q.determinant() < 0.0 {
        let last = q.cols - 1;
        for i in 0..q.rows {
            q[(i, last)] = -q[(i, last)];
        }
    }
    q
}
