//! Dense complex matrices and the handful of operations the simulator needs.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Sub};

use crate::parallel::{self, Parallelism};
use crate::{Error, Result, C64};

/// Tolerance on ‖m − m†‖_max accepted by [`herm_eig`].
pub const HERMITIAN_TOL: f64 = 1e-8;
/// Eigenvalues above this (but below zero) are clamped before square roots.
pub const CLAMP_TOL: f64 = 1e-8;
/// Eigenvalues below this abort a square root with a positivity error.
pub const POSITIVITY_FAIL: f64 = -1e-6;

/// Row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{}", self.rows, self.cols)?;
        if self.rows * self.cols <= 64 {
            for r in 0..self.rows {
                let row: Vec<String> = self
                    .row(r)
                    .iter()
                    .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                    .collect();
                writeln!(f, "  [{}]", row.join(", "))?;
            }
        }
        Ok(())
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows of real entries; handy for constants.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        Self::from_fn(n, m, |r, c| C64::new(rows[r][c], 0.0))
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// |v⟩⟨w|.
    pub fn outer(v: &[C64], w: &[C64]) -> Self {
        Self::from_fn(v.len(), w.len(), |r, c| v[r] * w[c].conj())
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

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// self += s * other, in place.
    pub fn axpy(&mut self, s: C64, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// ‖m − m†‖_max; infinite for non-square matrices.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    /// (m + m†)/2.
    pub fn hermitian_part(&self) -> Self {
        let n = self.rows;
        Self::from_fn(n, n, |r, c| (self[(r, c)] + self[(c, r)].conj()) * 0.5)
    }

    pub fn matmul(&self, other: &Self) -> Self {
        self.matmul_with(other, Parallelism::Parallel)
    }

    pub fn matmul_with(&self, other: &Self, par: Parallelism) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matmul: {}x{} times {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        let k = self.cols;
        let oc = other.cols;
        parallel::for_each_row(&mut out.data, oc, par, |r, out_row| {
            let a_row = &self.data[r * k..(r + 1) * k];
            for (i, &a) in a_row.iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let b_row = &other.data[i * oc..(i + 1) * oc];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        });
        out
    }

    /// a ρ a†.
    pub fn sandwich(&self, rho: &Self) -> Self {
        self.matmul(rho).matmul(&self.adjoint())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Add<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.clone();
        out.axpy(C64::new(-1.0, 0.0), rhs);
        out
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        self.axpy(C64::new(1.0, 0.0), rhs);
    }
}

impl Mul<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Kronecker product; entry ((i₁,i₂),(j₁,j₂)) = a[i₁,j₁]·b[i₂,j₂].
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows, b.cols);
    ComplexMatrix::from_fn(a.rows * br, a.cols * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

/// Kronecker product of a sequence, left to right.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1), |acc, f| kron(&acc, f))
}

/// Bit mask of qubit `q` in an `n`-qubit register (qubit 0 most significant).
#[inline]
pub fn qubit_mask(q: usize, n: usize) -> usize {
    1 << (n - 1 - q)
}

/// Index layout for acting on a subset of qubits: offsets of every local
/// pattern and the base indices of the complementary qubits.
struct SubsetLayout {
    offsets: Vec<usize>,
    bases: Vec<usize>,
}

impl SubsetLayout {
    fn new(qubits: &[usize], n: usize) -> Result<Self> {
        let mut seen = 0usize;
        for &q in qubits {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
            let m = qubit_mask(q, n);
            if seen & m != 0 {
                return Err(Error::DimensionMismatch(format!("qubit {q} listed twice")));
            }
            seen |= m;
        }
        let k = qubits.len();
        let offsets = (0..1usize << k)
            .map(|a| {
                qubits
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| a & (1 << (k - 1 - i)) != 0)
                    .map(|(_, &q)| qubit_mask(q, n))
                    .sum()
            })
            .collect();
        let bases = (0..1usize << n).filter(|i| i & seen == 0).collect();
        Ok(Self { offsets, bases })
    }
}

/// (op ⊗ I) · m where `op` acts on `qubits` (in the listed order) of an
/// `n`-qubit register.
pub fn apply_left_on(
    op: &ComplexMatrix,
    qubits: &[usize],
    n: usize,
    m: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let k = qubits.len();
    if op.rows != 1 << k || op.cols != 1 << k {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator on {k} qubits",
            op.rows, op.cols
        )));
    }
    if m.rows != 1 << n {
        return Err(Error::DimensionMismatch(format!(
            "{} rows for a {n}-qubit register",
            m.rows
        )));
    }
    let layout = SubsetLayout::new(qubits, n)?;
    let cols = m.cols;
    let mut out = ComplexMatrix::zeros(m.rows, cols);
    let local = 1usize << k;
    for &base in &layout.bases {
        for a in 0..local {
            let dst = (base + layout.offsets[a]) * cols;
            for b in 0..local {
                let w = op[(a, b)];
                if w.re == 0.0 && w.im == 0.0 {
                    continue;
                }
                let src = (base + layout.offsets[b]) * cols;
                for c in 0..cols {
                    let v = m.data[src + c];
                    out.data[dst + c] += w * v;
                }
            }
        }
    }
    Ok(out)
}

/// (op ⊗ I) m (op ⊗ I)†.
pub fn conjugate_on(
    op: &ComplexMatrix,
    qubits: &[usize],
    n: usize,
    m: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let x = apply_left_on(op, qubits, n, m)?;
    Ok(apply_left_on(op, qubits, n, &x.adjoint())?.adjoint())
}

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and the
/// unitary whose columns are the matching eigenvectors.
pub fn herm_eig(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("eigendecomposition of non-square matrix".into()));
    }
    let dev = m.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let n = m.rows;
    let h = m.hermitian_part();
    let dm = nalgebra::DMatrix::<C64>::from_fn(n, n, |r, c| h[(r, c)]);
    let eig = dm.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// V diag(f(λ)) V†.
pub fn spectral_map(values: &[f64], vectors: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let n = values.len();
    let fv: Vec<f64> = values.iter().map(|&l| f(l)).collect();
    ComplexMatrix::from_fn(n, n, |r, c| {
        (0..n)
            .map(|k| vectors[(r, k)] * fv[k] * vectors[(c, k)].conj())
            .sum()
    })
}

/// Principal square root of a Hermitian PSD matrix. Eigenvalues in
/// [−1e−6, 0) are clamped to zero; anything lower is a positivity error.
pub fn psd_sqrt_matrix(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (values, vectors) = herm_eig(m)?;
    if let Some(&min) = values.first() {
        if min < POSITIVITY_FAIL {
            return Err(Error::PositivityViolation(min));
        }
    }
    Ok(spectral_map(&values, &vectors, |l| l.max(0.0).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(ComplexMatrix::new(2, 2, vec![c(0.0, 0.0); 3]).is_err());
        assert!(ComplexMatrix::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_shape_and_entries() {
        let a = ComplexMatrix::from_fn(2, 3, |r, col| c((r * 3 + col) as f64, 1.0));
        let b = ComplexMatrix::from_fn(3, 2, |r, col| c(0.5, (r + col) as f64));
        let k = kron(&a, &b);
        assert_eq!((k.rows(), k.cols()), (6, 6));
        for i1 in 0..2 {
            for i2 in 0..3 {
                for j1 in 0..3 {
                    for j2 in 0..2 {
                        let want = a[(i1, j1)] * b[(i2, j2)];
                        assert_eq!(k[(i1 * 3 + i2, j1 * 2 + j2)], want);
                    }
                }
            }
        }
    }

    #[test]
    fn matmul_matches_naive() {
        let a = ComplexMatrix::from_fn(70, 5, |r, col| c(r as f64 * 0.1, col as f64));
        let b = ComplexMatrix::from_fn(5, 3, |r, col| c(1.0 - r as f64, col as f64 * 0.3));
        let p = a.matmul(&b);
        let s = a.matmul_with(&b, Parallelism::Sequential);
        for r in 0..70 {
            for col in 0..3 {
                let want: C64 = (0..5).map(|k| a[(r, k)] * b[(k, col)]).sum();
                assert!((p[(r, col)] - want).norm() < 1e-12);
            }
        }
        assert_eq!(p, s);
    }

    #[test]
    fn apply_left_on_matches_kron_embedding() {
        let op = ComplexMatrix::from_fn(4, 4, |r, col| c(r as f64 + 0.5, col as f64 - 1.0));
        let m = ComplexMatrix::from_fn(8, 8, |r, col| c((r * col) as f64, r as f64));
        // op on qubits (0,1) of 3: op ⊗ I
        let full = kron(&op, &ComplexMatrix::identity(2));
        let got = apply_left_on(&op, &[0, 1], 3, &m).unwrap();
        assert!(got.max_abs_diff(&full.matmul(&m)) < 1e-10);
        // op on qubits (1,2): I ⊗ op
        let full = kron(&ComplexMatrix::identity(2), &op);
        let got = apply_left_on(&op, &[1, 2], 3, &m).unwrap();
        assert!(got.max_abs_diff(&full.matmul(&m)) < 1e-10);
    }

    #[test]
    fn apply_left_on_rejects_bad_qubits() {
        let op = ComplexMatrix::identity(2);
        let m = ComplexMatrix::identity(4);
        assert!(matches!(
            apply_left_on(&op, &[2], 2, &m),
            Err(Error::QubitOutOfRange { index: 2, n: 2 })
        ));
    }

    #[test]
    fn herm_eig_pauli_z_and_x() {
        let z = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let (vals, _) = herm_eig(&z).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);

        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let (vals, vecs) = herm_eig(&x).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        // eigenvector for −1 is (|0⟩ − |1⟩)/√2 up to phase
        let v0 = vecs[(0, 0)];
        let v1 = vecs[(1, 0)];
        assert!((v0 + v1).norm() < 1e-12);
        assert!((v0.norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn herm_eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn psd_sqrt_clamps_tiny_negative_and_fails_large() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -5e-9]]);
        let s = psd_sqrt_matrix(&m).unwrap();
        assert!((s[(0, 0)].re - 1.0).abs() < 1e-14);
        assert_eq!(s[(1, 1)].re, 0.0);
        let bad = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1e-3]]);
        assert!(matches!(psd_sqrt_matrix(&bad), Err(Error::PositivityViolation(_))));
    }
}
