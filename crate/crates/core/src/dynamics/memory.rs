use crate::linalg::ComplexMatrix;
use crate::state::DensityMatrix;
use crate::{Error, Result, C64};

use super::rhs::RhsEngine;
use super::SystemModel;

/// Cumulative trapezoid tables of the memory-kernel integrals
/// F_down(t) = ∫₀ᵗ e^{iωs} Φ₁₂(σs) ds and F_up(t) = ∫₀ᵗ e^{−iωs} Φ₂₁(σs) ds
/// on a uniform grid, one table per coupled qubit.
#[derive(Clone, Debug)]
pub struct KernelHistory {
    spacing: f64,
    tables: Vec<Vec<Vec<(C64, C64)>>>,
}

impl KernelHistory {
    /// Tables covering [0, t_max] with grid `spacing`.
    pub fn build(model: &SystemModel, spacing: f64, t_max: f64) -> Result<Self> {
        if !(spacing > 0.0) {
            return Err(Error::param("spacing", "must be > 0"));
        }
        if !(t_max >= 0.0) {
            return Err(Error::param("t_max", "must be >= 0"));
        }
        let engine = RhsEngine::new(model)?;
        let points = (t_max / spacing - 1e-9).ceil().max(0.0) as usize + 1;
        let tables = engine
            .member_baths()
            .into_iter()
            .map(|group| {
                group
                    .into_iter()
                    .map(|(omega, bath)| {
                        let sign = bath.convention.kernel_sign();
                        let f = |s: f64| {
                            (
                                C64::from_polar(1.0, omega * s) * bath.phi12(sign * s),
                                C64::from_polar(1.0, -omega * s) * bath.phi21(sign * s),
                            )
                        };
                        let mut table = Vec::with_capacity(points);
                        let mut acc = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
                        let mut prev = f(0.0);
                        table.push(acc);
                        for k in 1..points {
                            let cur = f(k as f64 * spacing);
                            acc.0 += (prev.0 + cur.0) * (spacing / 2.0);
                            acc.1 += (prev.1 + cur.1) * (spacing / 2.0);
                            table.push(acc);
                            prev = cur;
                        }
                        table
                    })
                    .collect()
            })
            .collect();
        Ok(Self { spacing, tables })
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Last time covered by the tables.
    pub fn covered(&self) -> f64 {
        let len = self
            .tables
            .first()
            .and_then(|g| g.first())
            .map_or(1, |t| t.len());
        (len - 1) as f64 * self.spacing
    }

    pub(crate) fn coefficients(&self, group: usize, member: usize, t: f64) -> Result<(C64, C64)> {
        let table = &self.tables[group][member];
        let k = (t / self.spacing).round();
        let on_grid = (k * self.spacing - t).abs() <= 1e-9 * t.abs().max(1.0);
        if t < 0.0 || !on_grid || k as usize >= table.len() {
            return Err(Error::InsufficientHistory {
                requested: t,
                covered: self.covered(),
            });
        }
        Ok(table[k as usize])
    }
}

/// dρ/dt with the bath integrals taken from `history` instead of the closed
/// form. The kernel acts on ρ(t), so only the kernel history is required.
pub fn memory_rhs(
    rho: &DensityMatrix,
    t: f64,
    model: &SystemModel,
    history: &KernelHistory,
) -> Result<ComplexMatrix> {
    let mut engine = RhsEngine::new(&model.clone().with_backend(super::Backend::MemoryConvolution))?;
    engine.set_history(history.clone());
    engine.eval(rho.matrix(), t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{BathSpec, ResonanceConvention};
    use crate::dynamics::{me_rhs, Backend, Frame};

    fn model(conv: ResonanceConvention, frame: Frame) -> SystemModel {
        SystemModel::collective(2, BathSpec::new(0.5, 0.1).unwrap().with_convention(conv))
            .unwrap()
            .with_frame(frame)
    }

    #[test]
    fn zero_time_is_commutator_only() {
        let m = model(ResonanceConvention::AsWritten, Frame::Lab);
        let h = KernelHistory::build(&m, 0.01, 1.0).unwrap();
        let rho = DensityMatrix::pure(&crate::state::basis_vector(2, 1)).unwrap();
        let free = me_rhs(
            &rho,
            0.0,
            &SystemModel::collective(2, BathSpec::new(0.5, 0.0).unwrap()).unwrap(),
        )
        .unwrap();
        assert!(memory_rhs(&rho, 0.0, &m, &h).unwrap().max_abs_diff(&free) < 1e-16);
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, s), C64::new(0.0, 0.0)];
        let rho = DensityMatrix::pure(&psi).unwrap();
        for conv in [ResonanceConvention::Resonant, ResonanceConvention::AsWritten] {
            for frame in [Frame::Lab, Frame::Rotating] {
                let m = model(conv, frame);
                let h = KernelHistory::build(&m, 1e-3, 3.0).unwrap();
                let exact = me_rhs(&rho, 3.0, &m.clone().with_backend(Backend::TimeLocal)).unwrap();
                let quad = memory_rhs(&rho, 3.0, &m, &h).unwrap();
                assert!(quad.max_abs_diff(&exact) < 1e-8, "{conv:?} {frame:?}");
            }
        }
    }

    #[test]
    fn off_grid_or_uncovered_queries_fail() {
        let m = model(ResonanceConvention::Resonant, Frame::Rotating);
        let h = KernelHistory::build(&m, 0.1, 1.0).unwrap();
        assert!((h.covered() - 1.0).abs() < 1e-12);
        let rho = DensityMatrix::basis(2, 0).unwrap();
        assert!(memory_rhs(&rho, 0.5, &m, &h).is_ok());
        assert!(matches!(
            memory_rhs(&rho, 0.55, &m, &h),
            Err(Error::InsufficientHistory { .. })
        ));
        assert!(matches!(
            memory_rhs(&rho, 1.2, &m, &h),
            Err(Error::InsufficientHistory { .. })
        ));
    }
}
