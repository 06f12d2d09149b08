//! Reduced dynamics of a qubit register coupled to one or more thermal baths.
//!
//! Each bath group couples its qubits through the collective ladder operators
//! S₁ = Σ σ⁺_j and S₂ = Σ σ⁻_j, so a collective group carries the cross terms
//! σ⁻_j ρ σ⁺_{j'} while a group of one qubit is an ordinary local bath.

mod integrator;
mod memory;
mod rhs;

use serde::{Deserialize, Serialize};

pub use integrator::{integrate, IntegrateOptions, StepDiagnostics, Trajectory};
pub use memory::{memory_rhs, KernelHistory};
pub use rhs::me_rhs;

use crate::bath::{BathSpec, ResolvedBath};
use crate::linalg::ComplexMatrix;
use crate::parallel::Parallelism;
use crate::state::{embed, ops};
use crate::{Error, Result, C64};

/// How the bath-induced part of the right-hand side is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    /// Closed-form time-dependent rate coefficients.
    #[default]
    TimeLocal,
    /// Trapezoidal quadrature of the kernel integrals on the integrator grid.
    MemoryConvolution,
    /// Stationary Lindblad rates Γ(n+1), Γn.
    LindbladOracle,
}

/// Picture in which the register state is represented.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    /// Schrödinger picture: −i[H_S, ρ] is part of the generator.
    #[default]
    Lab,
    /// Interaction picture with respect to H_S.
    Rotating,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BathGroup {
    pub qubits: Vec<usize>,
    pub spec: BathSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemModel {
    pub n_qubits: usize,
    pub omegas: Vec<f64>,
    pub groups: Vec<BathGroup>,
    pub backend: Backend,
    pub frame: Frame,
    #[serde(default)]
    pub parallelism: Parallelism,
}

impl SystemModel {
    /// Validated model; every qubit must belong to exactly one group.
    pub fn new(omegas: Vec<f64>, groups: Vec<BathGroup>) -> Result<Self> {
        let model = Self {
            n_qubits: omegas.len(),
            omegas,
            groups,
            backend: Backend::default(),
            frame: Frame::default(),
            parallelism: Parallelism::default(),
        };
        model.validate()?;
        Ok(model)
    }

    /// One independent bath per qubit, all with the same spec.
    pub fn local(n: usize, spec: BathSpec) -> Result<Self> {
        Self::blocks(n, 1, spec)
    }

    /// One bath shared by every qubit.
    pub fn collective(n: usize, spec: BathSpec) -> Result<Self> {
        Self::blocks(n, n, spec)
    }

    /// Consecutive blocks of `block` qubits, one shared bath per block.
    pub fn blocks(n: usize, block: usize, spec: BathSpec) -> Result<Self> {
        if block == 0 || !n.is_multiple_of(block) {
            return Err(Error::param(
                "topology",
                format!("{n} qubits cannot be split into blocks of {block}"),
            ));
        }
        let groups = (0..n / block)
            .map(|b| BathGroup {
                qubits: (b * block..(b + 1) * block).collect(),
                spec: spec.clone(),
            })
            .collect();
        Self::new(vec![1.0; n], groups)
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn with_frame(mut self, frame: Frame) -> Self {
        self.frame = frame;
        self
    }

    pub fn with_parallelism(mut self, parallelism: Parallelism) -> Self {
        self.parallelism = parallelism;
        self
    }

    pub fn with_omegas(mut self, omegas: Vec<f64>) -> Result<Self> {
        if omegas.len() != self.n_qubits {
            return Err(Error::DimensionMismatch(format!(
                "{} frequencies for {} qubits",
                omegas.len(),
                self.n_qubits
            )));
        }
        self.omegas = omegas;
        self.validate()?;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_qubits;
        if n == 0 || n > 12 {
            return Err(Error::param("n_qubits", format!("{n} is outside 1..=12")));
        }
        if self.omegas.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} frequencies for {n} qubits",
                self.omegas.len()
            )));
        }
        if let Some(w) = self.omegas.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(Error::param("omega", format!("qubit frequencies must be > 0, got {w}")));
        }
        let mut seen = vec![false; n];
        for g in &self.groups {
            if g.qubits.is_empty() {
                return Err(Error::param("groups", "empty bath group"));
            }
            g.spec.validate()?;
            for &q in &g.qubits {
                if q >= n {
                    return Err(Error::QubitOutOfRange { index: q, n });
                }
                if seen[q] {
                    return Err(Error::param("groups", format!("qubit {q} is bound to two baths")));
                }
                seen[q] = true;
            }
        }
        if let Some(q) = seen.iter().position(|s| !s) {
            return Err(Error::param("groups", format!("qubit {q} has no bath")));
        }
        Ok(())
    }

    /// Per-qubit resolved baths, grouped like `self.groups`.
    pub(crate) fn resolve(&self) -> Result<Vec<Vec<(usize, ResolvedBath)>>> {
        self.validate()?;
        self.groups
            .iter()
            .map(|g| {
                g.qubits
                    .iter()
                    .map(|&q| Ok((q, g.spec.resolve(self.omegas[q])?)))
                    .collect()
            })
            .collect()
    }

    /// Diagonal of H_S = Σ_j (ω_j/2) σ_z,j.
    pub fn energies(&self) -> Vec<f64> {
        let n = self.n_qubits;
        (0..1usize << n)
            .map(|idx| {
                (0..n)
                    .map(|j| {
                        let excited = idx & (1 << (n - 1 - j)) == 0;
                        if excited {
                            self.omegas[j] / 2.0
                        } else {
                            -self.omegas[j] / 2.0
                        }
                    })
                    .sum()
            })
            .collect()
    }
}

/// H_S = Σ_j (ω_j/2)·embed(σ_z, j, n).
pub fn system_hamiltonian(model: &SystemModel) -> ComplexMatrix {
    let e: Vec<C64> = model.energies().into_iter().map(|x| C64::new(x, 0.0)).collect();
    ComplexMatrix::from_diag(&e)
}

/// (S₁(t), S₂(t)) per bath group: S₁ = Σ_j e^{iω_j t} σ⁺_j, S₂ = S₁†.
pub fn interaction_ops(model: &SystemModel, t: f64) -> Result<Vec<(ComplexMatrix, ComplexMatrix)>> {
    model.validate()?;
    let n = model.n_qubits;
    let d = model.dim();
    model
        .groups
        .iter()
        .map(|g| {
            let mut s1 = ComplexMatrix::zeros(d, d);
            for &q in &g.qubits {
                let phase = C64::from_polar(1.0, model.omegas[q] * t);
                s1.axpy(phase, &embed(&ops::sigma_plus(), q, n)?);
            }
            let s2 = s1.adjoint();
            Ok((s1, s2))
        })
        .collect()
}
