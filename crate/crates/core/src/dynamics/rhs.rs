use crate::bath::ResolvedBath;
use crate::linalg::ComplexMatrix;
use crate::parallel::{self, Parallelism};
use crate::state::DensityMatrix;
use crate::{Error, Result, C64};

use super::memory::KernelHistory;
use super::{Backend, Frame, SystemModel};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ladder {
    Lower,
    Raise,
}

struct Member {
    mask: usize,
    omega: f64,
    bath: ResolvedBath,
}

/// Per-member operator weights of one bath group at a given time.
struct Weights {
    a: Vec<(usize, C64)>,
    a_conj: Vec<(usize, C64)>,
    b: Vec<(usize, C64)>,
    b_up: Vec<(usize, C64)>,
}

/// Pre-resolved right-hand side of the master equation.
///
/// Per group, with A = Σ a_j σ⁻_j, B = Σ c_down,j a_j σ⁻_j and
/// B' = Σ c_up,j a_j* σ⁺_j, the generator is
/// D + D† with D = BρA† − A†Bρ + B'ρA − AB'ρ, plus −i[H_S, ρ] in the lab
/// frame. In the rotating frame a_j = e^{−iω_j t}, in the lab frame a_j = 1.
pub(crate) struct RhsEngine {
    groups: Vec<Vec<Member>>,
    energies: Vec<f64>,
    backend: Backend,
    frame: Frame,
    par: Parallelism,
    dim: usize,
    history: Option<KernelHistory>,
}

impl RhsEngine {
    pub(crate) fn new(model: &SystemModel) -> Result<Self> {
        let n = model.n_qubits;
        let groups = model
            .resolve()?
            .into_iter()
            .map(|g| {
                g.into_iter()
                    .map(|(q, bath)| Member {
                        mask: 1 << (n - 1 - q),
                        omega: model.omegas[q],
                        bath,
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            groups,
            energies: model.energies(),
            backend: model.backend,
            frame: model.frame,
            par: model.parallelism,
            dim: model.dim(),
            history: None,
        })
    }

    pub(crate) fn set_history(&mut self, history: KernelHistory) {
        self.history = Some(history);
    }

    pub(crate) fn member_baths(&self) -> Vec<Vec<(f64, ResolvedBath)>> {
        self.groups
            .iter()
            .map(|g| g.iter().map(|m| (m.omega, m.bath.clone())).collect())
            .collect()
    }

    fn coefficients(&self, gi: usize, mi: usize, t: f64) -> Result<(C64, C64)> {
        let bath = &self.groups[gi][mi].bath;
        match self.backend {
            Backend::TimeLocal => Ok(bath.rate_coefficients(t)),
            Backend::LindbladOracle => {
                let (down, up) = bath.lindblad_rates();
                Ok((C64::new(down / 2.0, 0.0), C64::new(up / 2.0, 0.0)))
            }
            Backend::MemoryConvolution => match &self.history {
                Some(h) => h.coefficients(gi, mi, t),
                None if t == 0.0 => Ok((C64::new(0.0, 0.0), C64::new(0.0, 0.0))),
                None => Err(Error::InsufficientHistory {
                    requested: t,
                    covered: 0.0,
                }),
            },
        }
    }

    fn weights(&self, gi: usize, t: f64) -> Result<Weights> {
        let mut w = Weights {
            a: Vec::new(),
            a_conj: Vec::new(),
            b: Vec::new(),
            b_up: Vec::new(),
        };
        for (mi, m) in self.groups[gi].iter().enumerate() {
            let a = match self.frame {
                Frame::Lab => C64::new(1.0, 0.0),
                Frame::Rotating => C64::from_polar(1.0, -m.omega * t),
            };
            let (down, up) = self.coefficients(gi, mi, t)?;
            w.a.push((m.mask, a));
            w.a_conj.push((m.mask, a.conj()));
            w.b.push((m.mask, down * a));
            w.b_up.push((m.mask, up * a.conj()));
        }
        Ok(w)
    }

    pub(crate) fn eval(&self, rho: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
        if rho.rows() != self.dim || rho.cols() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} state for a {}-dimensional model",
                rho.rows(),
                rho.cols(),
                self.dim
            )));
        }
        let d = self.dim;
        let mut acc = ComplexMatrix::zeros(d, d);
        for gi in 0..self.groups.len() {
            let w = self.weights(gi, t)?;
            if w.b.iter().all(|x| x.1 == C64::new(0.0, 0.0))
                && w.b_up.iter().all(|x| x.1 == C64::new(0.0, 0.0))
            {
                continue;
            }
            let mut x = ComplexMatrix::zeros(d, d);
            ladder_acc(&mut x, 1.0, &w.b, Side::Left, Ladder::Lower, rho, self.par);
            let mut y = ComplexMatrix::zeros(d, d);
            ladder_acc(&mut y, 1.0, &w.b_up, Side::Left, Ladder::Raise, rho, self.par);
            ladder_acc(&mut acc, 1.0, &w.a_conj, Side::Right, Ladder::Raise, &x, self.par);
            ladder_acc(&mut acc, -1.0, &w.a_conj, Side::Left, Ladder::Raise, &x, self.par);
            ladder_acc(&mut acc, 1.0, &w.a, Side::Right, Ladder::Lower, &y, self.par);
            ladder_acc(&mut acc, -1.0, &w.a, Side::Left, Ladder::Lower, &y, self.par);
        }
        let lab = self.frame == Frame::Lab;
        let e = &self.energies;
        let acc_ref = &acc;
        let mut out = ComplexMatrix::zeros(d, d);
        parallel::for_each_row(out.as_mut_slice(), d, self.par, |r, row| {
            for (c, o) in row.iter_mut().enumerate() {
                let mut v = acc_ref[(r, c)] + acc_ref[(c, r)].conj();
                if lab {
                    v += C64::new(0.0, -(e[r] - e[c])) * rho[(r, c)];
                }
                *o = v;
            }
        });
        Ok(out)
    }
}

/// out += s · (ladder operator applied to `m` from `side`).
///
/// Left/Lower: Σ w σ⁻ M. Left/Raise: Σ w σ⁺ M.
/// Right/Raise: M Σ w σ⁺. Right/Lower: M Σ w σ⁻.
fn ladder_acc(
    out: &mut ComplexMatrix,
    s: f64,
    terms: &[(usize, C64)],
    side: Side,
    ladder: Ladder,
    m: &ComplexMatrix,
    par: Parallelism,
) {
    let needs_set = matches!(
        (side, ladder),
        (Side::Left, Ladder::Lower) | (Side::Right, Ladder::Raise)
    );
    let terms: Vec<(usize, C64)> = terms
        .iter()
        .filter(|t| t.1 != C64::new(0.0, 0.0))
        .map(|&(mask, w)| (mask, w * s))
        .collect();
    if terms.is_empty() {
        return;
    }
    let cols = m.cols();
    parallel::for_each_row(out.as_mut_slice(), cols, par, |r, row| match side {
        Side::Left => {
            for &(mask, w) in &terms {
                if (r & mask != 0) == needs_set {
                    let src = m.row(r ^ mask);
                    for (o, &v) in row.iter_mut().zip(src) {
                        *o += w * v;
                    }
                }
            }
        }
        Side::Right => {
            let src = m.row(r);
            for &(mask, w) in &terms {
                for (c, o) in row.iter_mut().enumerate() {
                    if (c & mask != 0) == needs_set {
                        *o += w * src[c ^ mask];
                    }
                }
            }
        }
    });
}

/// dρ/dt at time `t` for the model's backend and frame.
///
/// The memory-convolution backend needs a kernel history and is evaluated
/// through [`super::memory_rhs`]; here it only answers at t = 0.
pub fn me_rhs(rho: &DensityMatrix, t: f64, model: &SystemModel) -> Result<ComplexMatrix> {
    RhsEngine::new(model)?.eval(rho.matrix(), t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::BathSpec;
    use crate::linalg::ComplexMatrix;
    use crate::state::{embed, ops};

    fn random_state(n: usize, seed: u64) -> DensityMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let d = 1 << n;
        let a = ComplexMatrix::from_fn(d, d, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let p = a.matmul(&a.adjoint());
        let tr = p.trace().re;
        DensityMatrix::new(p.scale(C64::new(1.0 / tr, 0.0)).hermitian_part()).unwrap()
    }

    /// Dense reference: Σ_groups [c_down(SρS† … )] built from explicit matrices.
    fn dense_rhs(rho: &ComplexMatrix, t: f64, model: &SystemModel) -> ComplexMatrix {
        let n = model.n_qubits;
        let d = model.dim();
        let mut out = ComplexMatrix::zeros(d, d);
        for g in &model.groups {
            let mut a = ComplexMatrix::zeros(d, d);
            let mut b = ComplexMatrix::zeros(d, d);
            let mut bp = ComplexMatrix::zeros(d, d);
            for &q in &g.qubits {
                let w = model.omegas[q];
                let ph = match model.frame {
                    Frame::Lab => C64::new(1.0, 0.0),
                    Frame::Rotating => C64::from_polar(1.0, -w * t),
                };
                let bath = g.spec.resolve(w).unwrap();
                let (cd, cu) = match model.backend {
                    Backend::LindbladOracle => {
                        let (x, y) = bath.lindblad_rates();
                        (C64::new(x / 2.0, 0.0), C64::new(y / 2.0, 0.0))
                    }
                    _ => bath.rate_coefficients(t),
                };
                let sm = embed(&ops::sigma_minus(), q, n).unwrap();
                let sp = embed(&ops::sigma_plus(), q, n).unwrap();
                a.axpy(ph, &sm);
                b.axpy(cd * ph, &sm);
                bp.axpy(cu * ph.conj(), &sp);
            }
            let ad = a.adjoint();
            let mut dd = b.matmul(rho).matmul(&ad);
            dd.axpy(C64::new(-1.0, 0.0), &ad.matmul(&b).matmul(rho));
            dd += &bp.matmul(rho).matmul(&a);
            dd.axpy(C64::new(-1.0, 0.0), &a.matmul(&bp).matmul(rho));
            out += &dd;
            out += &dd.adjoint();
        }
        if model.frame == Frame::Lab {
            let h = super::super::system_hamiltonian(model);
            let comm = &h.matmul(rho) - &rho.matmul(&h);
            out.axpy(C64::new(0.0, -1.0), &comm);
        }
        out
    }

    #[test]
    fn matches_dense_reference() {
        let spec = BathSpec::new(0.7, 0.2)
            .unwrap()
            .with_window(0.4, 1.6, 3)
            .unwrap()
            .with_convention(crate::bath::ResonanceConvention::AsWritten);
        let rho = random_state(3, 5);
        for frame in [Frame::Lab, Frame::Rotating] {
            for (model, label) in [
                (SystemModel::local(3, spec.clone()).unwrap(), "local"),
                (SystemModel::collective(3, spec.clone()).unwrap(), "collective"),
            ] {
                let model = model.with_frame(frame).with_omegas(vec![1.0, 0.9, 1.2]).unwrap();
                for t in [0.0, 0.8, 3.1] {
                    let got = me_rhs(&rho, t, &model).unwrap();
                    let want = dense_rhs(rho.matrix(), t, &model);
                    assert!(got.max_abs_diff(&want) < 1e-13, "{label} {frame:?} t={t}");
                }
            }
        }
    }

    #[test]
    fn traceless_and_hermitian() {
        let spec = BathSpec::new(10.0, 0.1).unwrap();
        let model = SystemModel::collective(4, spec).unwrap();
        for seed in 0..4 {
            let rho = random_state(4, seed);
            let f = me_rhs(&rho, 2.5, &model).unwrap();
            assert!(f.trace().norm() < 1e-10);
            assert!(f.hermiticity_deviation() < 1e-14);
        }
    }

    #[test]
    fn free_evolution_leaves_diagonal_states() {
        let spec = BathSpec::new(0.2, 0.0).unwrap();
        let model = SystemModel::local(2, spec).unwrap();
        let rho = DensityMatrix::thermal_diagonal(&model.energies(), 0.5).unwrap();
        assert!(me_rhs(&rho, 1.0, &model).unwrap().max_abs() < 1e-16);
    }

    #[test]
    fn lindblad_excited_population_rate() {
        let spec = BathSpec::new(0.2, 0.01).unwrap();
        let model = SystemModel::local(1, spec.clone())
            .unwrap()
            .with_backend(Backend::LindbladOracle);
        let rho = DensityMatrix::basis(1, 0).unwrap();
        let f = me_rhs(&rho, 0.0, &model).unwrap();
        let (down, _) = crate::bath::lindblad_rates(&spec, 1.0).unwrap();
        assert!((f[(0, 0)].re + down).abs() < 1e-16);
    }

    #[test]
    fn memory_backend_without_history() {
        let model = SystemModel::local(1, BathSpec::default())
            .unwrap()
            .with_backend(Backend::MemoryConvolution);
        let rho = DensityMatrix::basis(1, 0).unwrap();
        assert!(me_rhs(&rho, 0.0, &model).is_ok());
        assert!(matches!(
            me_rhs(&rho, 1.0, &model),
            Err(Error::InsufficientHistory { .. })
        ));
    }

    #[test]
    fn dimension_mismatch() {
        let model = SystemModel::local(2, BathSpec::default()).unwrap();
        let rho = DensityMatrix::basis(1, 0).unwrap();
        assert!(matches!(me_rhs(&rho, 0.0, &model), Err(Error::DimensionMismatch(_))));
    }
}
