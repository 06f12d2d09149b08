use crate::linalg::{herm_eig, ComplexMatrix, POSITIVITY_FAIL};
use crate::state::DensityMatrix;
use crate::{Error, Result, C64};

use super::memory::KernelHistory;
use super::rhs::RhsEngine;
use super::{Backend, SystemModel};

/// Trace drift beyond this aborts an integration.
pub const TRACE_DRIFT_LIMIT: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct IntegrateOptions {
    /// Upper bound on the step; the actual step is t_final / ⌈t_final/dt⌉.
    pub dt: f64,
    /// Store every k-th step (0: only the endpoints).
    pub store_every: usize,
    /// Clock value at which the bath coefficients start.
    pub t_start: f64,
    /// Diagonalize stored states to check for negative eigenvalues.
    pub check_positivity: bool,
}

impl IntegrateOptions {
    pub fn new(dt: f64) -> Self {
        Self {
            dt,
            store_every: 0,
            t_start: 0.0,
            check_positivity: true,
        }
    }

    pub fn store_every(mut self, k: usize) -> Self {
        self.store_every = k;
        self
    }

    pub fn starting_at(mut self, t_start: f64) -> Self {
        self.t_start = t_start;
        self
    }

    pub fn positivity_check(mut self, on: bool) -> Self {
        self.check_positivity = on;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepDiagnostics {
    pub t: f64,
    pub trace_deviation: f64,
    pub hermiticity_deviation: f64,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub diagnostics: Vec<StepDiagnostics>,
}

impl Trajectory {
    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory always stores its endpoints")
    }

    pub fn max_trace_deviation(&self) -> f64 {
        self.diagnostics.iter().map(|d| d.trace_deviation).fold(0.0, f64::max)
    }

    pub fn max_hermiticity_deviation(&self) -> f64 {
        self.diagnostics
            .iter()
            .map(|d| d.hermiticity_deviation)
            .fold(0.0, f64::max)
    }
}

fn step_count(t_final: f64, dt: f64) -> usize {
    if t_final == 0.0 {
        0
    } else {
        ((t_final / dt) - 1e-9).ceil().max(1.0) as usize
    }
}

fn finalize(m: &ComplexMatrix, t: f64, check_positivity: bool) -> Result<DensityMatrix> {
    let h = m.hermitian_part();
    let tr = h.trace().re;
    let drift = (tr - 1.0).abs();
    if !(drift <= TRACE_DRIFT_LIMIT) {
        return Err(Error::TraceDrift { drift, t });
    }
    let h = h.scale(C64::new(1.0 / tr, 0.0));
    if check_positivity {
        let (values, _) = herm_eig(&h)?;
        if values[0] < POSITIVITY_FAIL {
            return Err(Error::PositivityViolation(values[0]));
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(h))
}

/// Fixed-step classical RK4 integration of the model's master equation.
///
/// Stored states are re-Hermitized and renormalized; a trace drift above
/// 1e−6 or an eigenvalue below −1e−6 is reported as an error instead.
pub fn integrate(
    rho0: &DensityMatrix,
    model: &SystemModel,
    t_final: f64,
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    if !(opts.dt > 0.0) || !opts.dt.is_finite() {
        return Err(Error::param("dt", format!("must be > 0, got {}", opts.dt)));
    }
    if !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(Error::param("t_final", format!("must be >= 0, got {t_final}")));
    }
    if !(opts.t_start >= 0.0) {
        return Err(Error::param("t_start", "must be >= 0"));
    }
    if rho0.dim() != model.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}-dimensional state for a {}-qubit model",
            rho0.dim(),
            model.n_qubits
        )));
    }
    let steps = step_count(t_final, opts.dt);
    let h = if steps == 0 { 0.0 } else { t_final / steps as f64 };
    let mut engine = RhsEngine::new(model)?;
    if model.backend == Backend::MemoryConvolution && steps > 0 {
        engine.set_history(KernelHistory::build(model, h / 2.0, opts.t_start + t_final)?);
    }

    let t0 = opts.t_start;
    let mut rho = rho0.matrix().clone();
    let mut traj = Trajectory {
        times: vec![t0],
        states: vec![rho0.clone()],
        diagnostics: vec![StepDiagnostics {
            t: t0,
            trace_deviation: (rho.trace().re - 1.0).abs(),
            hermiticity_deviation: rho.hermiticity_deviation(),
        }],
    };
    for k in 0..steps {
        let t = t0 + k as f64 * h;
        let k1 = engine.eval(&rho, t)?;
        let mut tmp = rho.clone();
        tmp.axpy(C64::new(h / 2.0, 0.0), &k1);
        let k2 = engine.eval(&tmp, t + h / 2.0)?;
        let mut tmp = rho.clone();
        tmp.axpy(C64::new(h / 2.0, 0.0), &k2);
        let k3 = engine.eval(&tmp, t + h / 2.0)?;
        let mut tmp = rho.clone();
        tmp.axpy(C64::new(h, 0.0), &k3);
        let k4 = engine.eval(&tmp, t + h)?;
        rho.axpy(C64::new(h / 6.0, 0.0), &k1);
        rho.axpy(C64::new(h / 3.0, 0.0), &k2);
        rho.axpy(C64::new(h / 3.0, 0.0), &k3);
        rho.axpy(C64::new(h / 6.0, 0.0), &k4);

        let t_next = t0 + (k + 1) as f64 * h;
        let drift = (rho.trace().re - 1.0).abs();
        if !(drift <= TRACE_DRIFT_LIMIT) {
            return Err(Error::TraceDrift { drift, t: t_next });
        }
        traj.diagnostics.push(StepDiagnostics {
            t: t_next,
            trace_deviation: drift,
            hermiticity_deviation: rho.hermiticity_deviation(),
        });
        let last = k + 1 == steps;
        if last || (opts.store_every > 0 && (k + 1) % opts.store_every == 0) {
            traj.times.push(t_next);
            traj.states.push(finalize(&rho, t_next, opts.check_positivity)?);
        }
    }
    Ok(traj)
}
