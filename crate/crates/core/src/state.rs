//! Density matrices over labelled qubit registers, partial traces and the
//! Uhlmann fidelity.
//!
//! Basis convention: |q₀ q₁ … q_{n−1}⟩ with qubit 0 the most significant bit,
//! σ_z|0⟩ = +|0⟩. Under H = (ω/2)σ_z the state |0⟩ is excited and |1⟩ is the
//! ground state; σ⁺ = |0⟩⟨1| raises and σ⁻ = |1⟩⟨0| lowers the energy.

use crate::linalg::{herm_eig, kron, psd_sqrt_matrix, qubit_mask, ComplexMatrix, CLAMP_TOL};
use crate::{Error, Result, C64};

/// Hermiticity tolerance accepted by [`DensityMatrix::new`].
pub const STATE_HERMITIAN_TOL: f64 = 1e-10;
/// Trace tolerance accepted by [`DensityMatrix::new`].
pub const STATE_TRACE_TOL: f64 = 1e-10;

/// Single-qubit operator library.
pub mod ops {
    use super::*;

    fn m(a: [[C64; 2]; 2]) -> ComplexMatrix {
        ComplexMatrix::from_fn(2, 2, |r, c| a[r][c])
    }

    const O: C64 = C64::new(0.0, 0.0);
    const L: C64 = C64::new(1.0, 0.0);
    const J: C64 = C64::new(0.0, 1.0);

    pub fn identity() -> ComplexMatrix {
        m([[L, O], [O, L]])
    }

    pub fn sigma_x() -> ComplexMatrix {
        m([[O, L], [L, O]])
    }

    pub fn sigma_y() -> ComplexMatrix {
        m([[O, -J], [J, O]])
    }

    pub fn sigma_z() -> ComplexMatrix {
        m([[L, O], [O, -L]])
    }

    /// σ⁺ = |0⟩⟨1| = (σ_x + iσ_y)/2.
    pub fn sigma_plus() -> ComplexMatrix {
        m([[O, L], [O, O]])
    }

    /// σ⁻ = |1⟩⟨0|.
    pub fn sigma_minus() -> ComplexMatrix {
        m([[O, O], [L, O]])
    }
}

/// I^⊗j ⊗ op ⊗ I^⊗(n−1−j).
pub fn embed(op: &ComplexMatrix, j: usize, n: usize) -> Result<ComplexMatrix> {
    if j >= n {
        return Err(Error::QubitOutOfRange { index: j, n });
    }
    if op.rows() != 2 || op.cols() != 2 {
        return Err(Error::DimensionMismatch("embed expects a 2x2 operator".into()));
    }
    let left = ComplexMatrix::identity(1 << j);
    let right = ComplexMatrix::identity(1 << (n - 1 - j));
    Ok(kron(&kron(&left, op), &right))
}

/// Computational basis vector |index⟩ in a 2ⁿ space.
pub fn basis_vector(n: usize, index: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); 1 << n];
    v[index] = C64::new(1.0, 0.0);
    v
}

fn log2_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::DimensionMismatch(format!("dimension {dim} is not a power of two")));
    }
    Ok(dim.trailing_zeros() as usize)
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("q{i}")).collect()
}

#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    labels: Vec<String>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (eigenvalues ≥ −1e−8).
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let n = Self::check_shape(&matrix)?;
        Self::with_labels(matrix, default_labels(n))
    }

    pub fn with_labels(matrix: ComplexMatrix, labels: Vec<String>) -> Result<Self> {
        let n = Self::check_shape(&matrix)?;
        if labels.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {n} qubits",
                labels.len()
            )));
        }
        let herm = matrix.hermiticity_deviation();
        if herm > STATE_HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("Hermiticity deviation {herm:.3e}")));
        }
        let tr = matrix.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > STATE_TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let (values, _) = herm_eig(&matrix)?;
        if values[0] < -CLAMP_TOL {
            return Err(Error::PositivityViolation(values[0]));
        }
        Ok(Self { matrix, labels })
    }

    /// Skips validation; used on hot paths whose outputs are checked elsewhere.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        let n = log2_dim(matrix.rows()).expect("power-of-two dimension");
        Self {
            matrix,
            labels: default_labels(n),
        }
    }

    fn check_shape(m: &ComplexMatrix) -> Result<usize> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch("density matrix must be square".into()));
        }
        log2_dim(m.rows())
    }

    /// |ψ⟩⟨ψ| for a normalized vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("state vector norm² {norm}")));
        }
        Self::new(ComplexMatrix::outer(psi, psi))
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if index >= 1 << n {
            return Err(Error::DimensionMismatch(format!("basis index {index} for {n} qubits")));
        }
        Ok(Self::from_matrix_unchecked(ComplexMatrix::outer(
            &basis_vector(n, index),
            &basis_vector(n, index),
        )))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let d = 1 << n;
        Self::from_matrix_unchecked(ComplexMatrix::identity(d).scale(C64::new(1.0 / d as f64, 0.0)))
    }

    /// Thermal state e^{−H/T}/Z of a diagonal Hamiltonian.
    pub fn thermal_diagonal(energies: &[f64], temperature: f64) -> Result<Self> {
        if temperature <= 0.0 {
            return Err(Error::param("temperature", "must be positive"));
        }
        let e0 = energies.iter().cloned().fold(f64::INFINITY, f64::min);
        let w: Vec<f64> = energies.iter().map(|e| (-(e - e0) / temperature).exp()).collect();
        let z: f64 = w.iter().sum();
        let diag: Vec<C64> = w.iter().map(|x| C64::new(x / z, 0.0)).collect();
        Self::new(ComplexMatrix::from_diag(&diag))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn n_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// ρ ⊗ σ with concatenated labels (duplicates get a numeric suffix).
    pub fn tensor(&self, other: &Self) -> Self {
        let mut labels = self.labels.clone();
        for l in &other.labels {
            let mut name = l.clone();
            let mut k = 1;
            while labels.contains(&name) {
                name = format!("{l}_{k}");
                k += 1;
            }
            labels.push(name);
        }
        Self {
            matrix: kron(&self.matrix, &other.matrix),
            labels,
        }
    }

    /// Reduced state on `keep`, in the register's original relative order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let n = self.n_qubits();
        if keep.is_empty() {
            return Err(Error::param("keep", "at least one qubit must be kept"));
        }
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if let Some(&q) = kept.iter().find(|&&q| q >= n) {
            return Err(Error::QubitOutOfRange { index: q, n });
        }
        let matrix = partial_trace_matrix(&self.matrix, &kept, n);
        let labels = kept.iter().map(|&q| self.labels[q].clone()).collect();
        Ok(Self { matrix, labels })
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(herm_eig(&self.matrix)?.0)
    }
}

/// Partial trace of a raw matrix keeping the sorted qubit list `kept`.
pub(crate) fn partial_trace_matrix(m: &ComplexMatrix, kept: &[usize], n: usize) -> ComplexMatrix {
    let k = kept.len();
    let keep_mask: usize = kept.iter().map(|&q| qubit_mask(q, n)).sum();
    let offsets: Vec<usize> = (0..1usize << k)
        .map(|a| {
            kept.iter()
                .enumerate()
                .filter(|(i, _)| a & (1 << (k - 1 - i)) != 0)
                .map(|(_, &q)| qubit_mask(q, n))
                .sum()
        })
        .collect();
    let traced: Vec<usize> = (0..1usize << n).filter(|i| i & keep_mask == 0).collect();
    ComplexMatrix::from_fn(1 << k, 1 << k, |a, b| {
        traced
            .iter()
            .map(|&t| m[(t + offsets[a], t + offsets[b])])
            .sum()
    })
}

/// Uhlmann fidelity F = (tr √(√ρ₀ ρ_t √ρ₀))², clamped into [0, 1].
pub fn fidelity(rho0: &DensityMatrix, rho_t: &DensityMatrix) -> Result<f64> {
    fidelity_matrices(rho0.matrix(), rho_t.matrix())
}

pub(crate) fn fidelity_matrices(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity between {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let s = psd_sqrt_matrix(a)?;
    let inner = s.matmul(b).matmul(&s).hermitian_part();
    let (values, _) = herm_eig(&inner)?;
    let root: f64 = values.iter().map(|&l| l.max(0.0).sqrt()).sum();
    Ok((root * root).clamp(0.0, 1.0))
}

/// ⟨ψ|ρ|ψ⟩ for a normalized vector.
pub fn pure_overlap(psi: &[C64], rho: &ComplexMatrix) -> f64 {
    let d = psi.len();
    let mut acc = C64::new(0.0, 0.0);
    for r in 0..d {
        if psi[r] == C64::new(0.0, 0.0) {
            continue;
        }
        for c in 0..d {
            acc += psi[r].conj() * rho[(r, c)] * psi[c];
        }
    }
    acc.re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::psd_sqrt_matrix;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn operator_library_relations() {
        let sp = ops::sigma_plus();
        let from_xy = &ops::sigma_x() + &ops::sigma_y().scale(C64::new(0.0, 1.0));
        assert!(sp.max_abs_diff(&from_xy.scale(c(0.5))) < 1e-15);
        assert_eq!(ops::sigma_minus(), sp.adjoint());
        // σ⁺|0⟩ = 0, σ⁺|1⟩ = |0⟩
        assert_eq!(sp[(0, 0)], c(0.0));
        assert_eq!(sp[(0, 1)], c(1.0));
    }

    #[test]
    fn kron_z_identity_is_diag() {
        let k = kron(&ops::sigma_z(), &ops::identity());
        let want = ComplexMatrix::from_diag(&[c(1.0), c(1.0), c(-1.0), c(-1.0)]);
        assert_eq!(k, want);
    }

    #[test]
    fn kron_xx_flips_00_to_11() {
        let k = kron(&ops::sigma_x(), &ops::sigma_x());
        assert_eq!(k[(3, 0)], c(1.0));
        assert_eq!(k[(0, 0)], c(0.0));
    }

    #[test]
    fn embed_examples() {
        assert_eq!(embed(&ops::sigma_z(), 0, 1).unwrap(), ops::sigma_z());
        let x1 = embed(&ops::sigma_x(), 1, 2).unwrap();
        // |00⟩ → |01⟩
        assert_eq!(x1[(1, 0)], c(1.0));
        let sp = embed(&ops::sigma_plus(), 2, 3).unwrap();
        for ket in 0..8usize {
            let col_norm: f64 = (0..8).map(|r| sp[(r, ket)].norm()).sum();
            if ket & 1 == 0 {
                assert_eq!(col_norm, 0.0, "σ⁺ on qubit 2 must annihilate |{ket:03b}⟩");
            } else {
                assert_eq!(sp[(ket ^ 1, ket)], c(1.0));
            }
        }
        assert!(matches!(
            embed(&ops::sigma_x(), 3, 3),
            Err(Error::QubitOutOfRange { index: 3, n: 3 })
        ));
    }

    #[test]
    fn validation_rejects_bad_states() {
        let not_unit = ComplexMatrix::from_diag(&[c(0.5), c(0.6)]);
        assert!(matches!(DensityMatrix::new(not_unit), Err(Error::InvalidState(_))));
        let negative = ComplexMatrix::from_diag(&[c(1.1), c(-0.1)]);
        assert!(matches!(
            DensityMatrix::new(negative),
            Err(Error::PositivityViolation(_))
        ));
        let mut skew = ComplexMatrix::from_diag(&[c(0.5), c(0.5)]);
        skew[(0, 1)] = c(0.1);
        assert!(matches!(DensityMatrix::new(skew), Err(Error::InvalidState(_))));
        let not_pow2 = ComplexMatrix::identity(3).scale(c(1.0 / 3.0));
        assert!(DensityMatrix::new(not_pow2).is_err());
    }

    #[test]
    fn partial_trace_of_product() {
        let a = DensityMatrix::new(ComplexMatrix::from_real_rows(&[&[0.7, 0.2], &[0.2, 0.3]])).unwrap();
        let b = DensityMatrix::basis(1, 1).unwrap();
        let ab = a.tensor(&b);
        assert!(ab.partial_trace(&[0]).unwrap().matrix().max_abs_diff(a.matrix()) < 1e-15);
        assert!(ab.partial_trace(&[1]).unwrap().matrix().max_abs_diff(b.matrix()) < 1e-15);
        assert!(ab.partial_trace(&[]).is_err());
        assert!(ab.partial_trace(&[2]).is_err());
        assert_eq!(ab.partial_trace(&[1, 0]).unwrap().matrix(), ab.matrix());
    }

    #[test]
    fn partial_trace_of_singlet_is_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [c(0.0), c(s), c(-s), c(0.0)];
        let rho = DensityMatrix::pure(&psi).unwrap();
        let red = rho.partial_trace(&[0]).unwrap();
        assert!(red.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale(c(0.5))) < 1e-15);
    }

    #[test]
    fn partial_trace_keeps_labels() {
        let rho = DensityMatrix::maximally_mixed(3);
        let red = rho.partial_trace(&[2, 0]).unwrap();
        assert_eq!(red.labels(), &["q0".to_string(), "q2".to_string()]);
    }

    #[test]
    fn thermal_populations() {
        // H = σ_z/2, T = 10: excited |0⟩ has weight e^{−1/10}/(1 + e^{−1/10})
        let rho = DensityMatrix::thermal_diagonal(&[0.5, -0.5], 10.0).unwrap();
        let (vals, _) = herm_eig(rho.matrix()).unwrap();
        let p_ground = 1.0 / (1.0 + (-0.1f64).exp());
        assert!((vals[1] - p_ground).abs() < 1e-14);
        assert!((vals[0] - (1.0 - p_ground)).abs() < 1e-14);
        assert!((rho.matrix()[(1, 1)].re - p_ground).abs() < 1e-14);
    }

    #[test]
    fn psd_sqrt_examples() {
        let half = ComplexMatrix::identity(2).scale(c(0.5));
        let s = psd_sqrt_matrix(&half).unwrap();
        assert!(s.max_abs_diff(&ComplexMatrix::identity(2).scale(c(0.5f64.sqrt()))) < 1e-14);
        let p0 = DensityMatrix::basis(1, 0).unwrap();
        assert!(psd_sqrt_matrix(p0.matrix()).unwrap().max_abs_diff(p0.matrix()) < 1e-14);
        let d = ComplexMatrix::from_diag(&[c(0.25), c(0.75)]);
        let s = psd_sqrt_matrix(&d).unwrap();
        assert!((s[(0, 0)].re - 0.5).abs() < 1e-14);
        assert!((s[(1, 1)].re - 0.75f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn fidelity_examples() {
        let z0 = DensityMatrix::basis(1, 0).unwrap();
        let z1 = DensityMatrix::basis(1, 1).unwrap();
        let mixed = DensityMatrix::maximally_mixed(1);
        assert!((fidelity(&z0, &z0).unwrap() - 1.0).abs() < 1e-12);
        assert!(fidelity(&z0, &z1).unwrap().abs() < 1e-12);
        assert!((fidelity(&z0, &mixed).unwrap() - 0.5).abs() < 1e-12);
        assert!(matches!(
            fidelity(&z0, &DensityMatrix::maximally_mixed(2)),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
