//! Fidelity protocols: bare versus encoded evolution, multi-cycle correction,
//! Werner inputs, the critical-time search and parameter sweeps.
//!
//! A protocol evolves the encoded register in the qubits' rotating frame. The
//! total time t is split into `cycles` equal segments; each segment is an
//! integration of the encoded register followed by ideal recovery, and the
//! register is decoded once at the end. The bare branch integrates the
//! unencoded logical register for the same total time.

mod critical;
mod sweep;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bath::BathSpec;
use crate::codes::{CodeKind, QecCode, RecoveryMode};
use crate::dynamics::{integrate, Backend, BathGroup, Frame, IntegrateOptions, SystemModel};
use crate::linalg::{kron, ComplexMatrix};
use crate::parallel::{map_items, Parallelism};
use crate::state::{fidelity_matrices, DensityMatrix};
use crate::{Error, Result, C64};

pub use critical::{critical_time, CriticalTime, CrossoverSearch};
pub use sweep::{sweep, SweepGrid, SweepPoint, SweepRow};

/// Named preparations of the logical register.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum InitialState {
    Zero,
    One,
    Plus,
    Werner { p: f64 },
}

impl InitialState {
    pub fn n_logical(&self) -> usize {
        match self {
            InitialState::Werner { .. } => 2,
            _ => 1,
        }
    }

    pub fn density(&self) -> Result<DensityMatrix> {
        match *self {
            InitialState::Zero => DensityMatrix::basis(1, 0),
            InitialState::One => DensityMatrix::basis(1, 1),
            InitialState::Plus => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                DensityMatrix::pure(&[C64::new(s, 0.0), C64::new(s, 0.0)])
            }
            InitialState::Werner { p } => werner_state(p),
        }
    }

    pub fn label(&self) -> String {
        match self {
            InitialState::Zero => "zero".into(),
            InitialState::One => "one".into(),
            InitialState::Plus => "plus".into(),
            InitialState::Werner { p } => format!("werner(p={p})"),
        }
    }
}

/// p|ψ⁻⟩⟨ψ⁻| + (1−p)I/4 with |ψ⁻⟩ = (|01⟩ − |10⟩)/√2.
pub fn werner_state(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", format!("must lie in [0, 1], got {p}")));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi = [C64::new(0.0, 0.0), C64::new(s, 0.0), C64::new(-s, 0.0), C64::new(0.0, 0.0)];
    let mut m = ComplexMatrix::outer(&psi, &psi).scale(C64::new(p, 0.0));
    m.axpy(C64::new((1.0 - p) / 4.0, 0.0), &ComplexMatrix::identity(4));
    DensityMatrix::new(m)
}

/// Noise topology inside one register or code block.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    /// One independent bath per qubit.
    Local,
    /// One bath shared by the qubits of a block.
    #[default]
    Collective,
}

/// Whether two code blocks (or two bare logical qubits of different blocks)
/// see separate baths or one common bath.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockBath {
    #[default]
    PerBlock,
    Global,
}

/// Bath clock between correction cycles.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleMemory {
    /// Every segment starts with fresh bath coefficients.
    #[default]
    PerCycle,
    /// The coefficient clock keeps running across recoveries.
    Continuous,
}

/// Evaluation route for two single-logical-qubit blocks with separate baths.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Product channel from single-block tomography where the model allows it.
    #[default]
    Auto,
    /// Always integrate the full encoded register.
    Direct,
}

/// Physical setting shared by the bare and the encoded branch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub omega: f64,
    pub bath: BathSpec,
    pub topology: Topology,
    pub block_bath: BlockBath,
    pub backend: Backend,
    pub dt: f64,
    pub parallelism: Parallelism,
}

impl Default for Environment {
    fn default() -> Self {
        Self {
            omega: 1.0,
            bath: BathSpec::default(),
            topology: Topology::Collective,
            block_bath: BlockBath::PerBlock,
            backend: Backend::TimeLocal,
            dt: 1e-3,
            parallelism: Parallelism::default(),
        }
    }
}

impl Environment {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(Error::param("omega", format!("must be > 0, got {}", self.omega)));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::param("dt", format!("must be > 0, got {}", self.dt)));
        }
        self.bath.validate()
    }

    /// Register of `blocks` consecutive blocks of `block` qubits.
    pub fn model(&self, blocks: usize, block: usize) -> Result<SystemModel> {
        let n = blocks * block;
        let group_size = match (self.topology, self.block_bath) {
            (Topology::Local, _) => 1,
            (Topology::Collective, BlockBath::PerBlock) => block,
            (Topology::Collective, BlockBath::Global) => n,
        };
        let groups = (0..n / group_size)
            .map(|g| BathGroup {
                qubits: (g * group_size..(g + 1) * group_size).collect(),
                spec: self.bath.clone(),
            })
            .collect();
        Ok(SystemModel::new(vec![self.omega; n], groups)?
            .with_backend(self.backend)
            .with_frame(Frame::Rotating)
            .with_parallelism(self.parallelism))
    }

    fn options(&self) -> IntegrateOptions {
        IntegrateOptions::new(self.dt)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolSpec {
    pub initial_state: InitialState,
    /// `None` runs the bare branch only.
    pub code: Option<CodeKind>,
    /// Cycle-count variants evaluated on the same grid.
    pub cycles: Vec<usize>,
    pub t_grid: Vec<f64>,
    /// Co-compute the bare branch.
    pub comparison: bool,
    pub environment: Environment,
    pub recovery: RecoveryMode,
    pub memory: CycleMemory,
    pub route: Route,
    /// Seed of the stochastic recovery mode.
    pub seed: u64,
}

impl Default for ProtocolSpec {
    fn default() -> Self {
        Self {
            initial_state: InitialState::Zero,
            code: Some(CodeKind::FiveQubit),
            cycles: vec![1],
            t_grid: vec![0.0],
            comparison: true,
            environment: Environment::default(),
            recovery: RecoveryMode::Mixing,
            memory: CycleMemory::PerCycle,
            route: Route::Auto,
            seed: 0,
        }
    }
}

impl ProtocolSpec {
    pub fn validate(&self) -> Result<()> {
        self.environment.validate()?;
        if let InitialState::Werner { p } = self.initial_state {
            werner_state(p)?;
        }
        if self.cycles.is_empty() || self.cycles.contains(&0) {
            return Err(Error::param("cycles", "every cycle count must be >= 1"));
        }
        if self.t_grid.is_empty() {
            return Err(Error::param("t_grid", "must not be empty"));
        }
        if self.t_grid.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
            return Err(Error::param("t_grid", "times must be finite and >= 0"));
        }
        if self.t_grid.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::param("t_grid", "times must be ascending"));
        }
        if let Some(code) = self.code {
            self.layout(code)?;
        }
        Ok(())
    }

    /// Number of code blocks needed for the initial state.
    fn layout(&self, code: CodeKind) -> Result<usize> {
        let n_logical = self.initial_state.n_logical();
        let k = code.k_logical();
        match (n_logical, k, code) {
            (2, 1, CodeKind::Steane) => Err(Error::param(
                "code",
                "two-qubit inputs need five_qubit (blockwise) or toric_822",
            )),
            (1, 2, _) => Err(Error::param(
                "code",
                format!("{} encodes two logical qubits; use a two-qubit initial state", code.name()),
            )),
            _ => Ok(n_logical / k),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleSeries {
    pub cycles: usize,
    pub fidelity: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub t_grid: Vec<f64>,
    pub fidelity_no_qec: Option<Vec<f64>>,
    pub fidelity_qec: Vec<CycleSeries>,
    pub metadata: serde_json::Value,
}

impl ExperimentResult {
    pub fn qec(&self, cycles: usize) -> Option<&[f64]> {
        self.fidelity_qec
            .iter()
            .find(|s| s.cycles == cycles)
            .map(|s| s.fidelity.as_slice())
    }
}

/// Outputs of one single-block pipeline on the matrix units E₀₀, E₀₁, E₁₀, E₁₁.
type BlockChannel = Arc<[ComplexMatrix; 4]>;

/// Single-block channels keyed by (t, cycles), reusable across initial states
/// that share code, environment and recovery settings.
#[derive(Debug, Default)]
pub struct ChannelCache {
    owner: Mutex<Option<String>>,
    map: Mutex<HashMap<(u64, usize), BlockChannel>>,
}

impl ChannelCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn bind(&self, key: String) {
        let mut owner = self.owner.lock().expect("cache lock");
        if owner.as_deref() != Some(key.as_str()) {
            self.map.lock().expect("cache lock").clear();
            *owner = Some(key);
        }
    }
}

struct Engine<'a> {
    spec: &'a ProtocolSpec,
    code: Option<QecCode>,
    blocks: usize,
    encoded_model: Option<SystemModel>,
    bare_model: SystemModel,
}

impl<'a> Engine<'a> {
    fn new(spec: &'a ProtocolSpec) -> Result<Self> {
        spec.validate()?;
        let env = &spec.environment;
        let n_logical = spec.initial_state.n_logical();
        let (code, blocks, encoded_model) = match spec.code {
            Some(kind) => {
                let blocks = spec.layout(kind)?;
                let code = QecCode::build(kind).with_mode(spec.recovery);
                let model = env.model(blocks, kind.n_physical())?;
                (Some(code), blocks, Some(model))
            }
            None => (None, 1, None),
        };
        // bare logical qubits share a bath exactly when their blocks would
        let per_block = spec.code.map_or(1, |k| k.k_logical());
        let bare_model = env.model(n_logical / per_block, per_block)?;
        Ok(Self {
            spec,
            code,
            blocks,
            encoded_model,
            bare_model,
        })
    }

    fn factorizes(&self) -> bool {
        let env = &self.spec.environment;
        self.spec.route == Route::Auto
            && self.blocks == 2
            && self.spec.recovery != RecoveryMode::Stochastic
            && (env.topology == Topology::Local || env.block_bath == BlockBath::PerBlock)
    }

    fn bare(&self, rho0: &DensityMatrix, t: f64) -> Result<f64> {
        let out = integrate(rho0, &self.bare_model, t, &self.spec.environment.options())?;
        fidelity_matrices(rho0.matrix(), out.final_state().matrix())
    }

    /// Encode, `cycles` × (evolve, recover), decode on a `blocks`-block register.
    fn pipeline(
        &self,
        rho: &DensityMatrix,
        model: &SystemModel,
        blocks: usize,
        t: f64,
        cycles: usize,
    ) -> Result<DensityMatrix> {
        let code = self.code.as_ref().expect("pipeline needs a code");
        let mut rng = ChaCha8Rng::seed_from_u64(self.spec.seed ^ t.to_bits() ^ cycles as u64);
        let seg = t / cycles as f64;
        let mut phys = code.encode_blocks(rho, blocks)?;
        for c in 0..cycles {
            let mut opts = self.spec.environment.options();
            if self.spec.memory == CycleMemory::Continuous {
                opts = opts.starting_at(c as f64 * seg);
            }
            let traj = integrate(&phys, model, seg, &opts)?;
            phys = code.recover_blocks(traj.final_state(), blocks, Some(&mut rng))?;
        }
        code.decode_blocks(&phys, blocks)
    }

    fn block_channel(&self, t: f64, cycles: usize, cache: Option<&ChannelCache>) -> Result<BlockChannel> {
        let key = (t.to_bits(), cycles);
        if let Some(ch) = cache.and_then(|c| c.map.lock().expect("cache lock").get(&key).cloned()) {
            return Ok(ch);
        }
        let code = self.code.as_ref().expect("block channel needs a code");
        let model = self.spec.environment.model(1, code.n_physical())?;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = C64::new(0.0, 0.0);
        let inputs = [
            vec![C64::new(1.0, 0.0), z],
            vec![z, C64::new(1.0, 0.0)],
            vec![C64::new(s, 0.0), C64::new(s, 0.0)],
            vec![C64::new(s, 0.0), C64::new(0.0, s)],
        ];
        let outs = map_items(&inputs, self.spec.environment.parallelism, |psi| {
            self.pipeline(&DensityMatrix::pure(psi)?, &model, 1, t, cycles)
                .map(DensityMatrix::into_matrix)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let i = C64::new(0.0, 1.0);
        let half = C64::new(0.5, 0.0);
        let diag = &outs[0] + &outs[1];
        // E₀₁ = ρ₊ + iρ₊ᵢ − (1+i)/2 (ρ₀ + ρ₁)
        let mut e01 = outs[2].clone();
        e01.axpy(i, &outs[3]);
        e01.axpy(-(half + half * i), &diag);
        let mut e10 = outs[2].clone();
        e10.axpy(-i, &outs[3]);
        e10.axpy(-(half - half * i), &diag);
        let ch: BlockChannel = Arc::new([outs[0].clone(), e01, e10, outs[1].clone()]);
        if let Some(c) = cache {
            c.map.lock().expect("cache lock").insert(key, ch.clone());
        }
        Ok(ch)
    }

    fn encoded(&self, rho0: &DensityMatrix, t: f64, cycles: usize, cache: Option<&ChannelCache>) -> Result<f64> {
        let out = if self.factorizes() {
            let ch = self.block_channel(t, cycles, cache)?;
            let r = rho0.matrix();
            let mut acc = ComplexMatrix::zeros(4, 4);
            for i1 in 0..2 {
                for i2 in 0..2 {
                    for j1 in 0..2 {
                        for j2 in 0..2 {
                            let coeff = r[(2 * i1 + i2, 2 * j1 + j2)];
                            if coeff.norm() > 0.0 {
                                acc.axpy(coeff, &kron(&ch[2 * i1 + j1], &ch[2 * i2 + j2]));
                            }
                        }
                    }
                }
            }
            acc.hermitian_part()
        } else {
            let model = self.encoded_model.as_ref().expect("encoded model");
            self.pipeline(rho0, model, self.blocks, t, cycles)?.into_matrix()
        };
        fidelity_matrices(rho0.matrix(), &out)
    }
}

fn cache_key(spec: &ProtocolSpec) -> String {
    let mut s = spec.clone();
    s.initial_state = InitialState::Zero;
    s.t_grid.clear();
    s.cycles.clear();
    s.comparison = false;
    serde_json::to_string(&s).expect("protocol specs serialize")
}

/// Runs the bare and the encoded branch on every grid time and cycle count.
pub fn run_protocol(spec: &ProtocolSpec) -> Result<ExperimentResult> {
    run_protocol_cached(spec, None)
}

/// As [`run_protocol`], reusing single-block channels from `cache` when the
/// product route applies.
pub fn run_protocol_cached(spec: &ProtocolSpec, cache: Option<&ChannelCache>) -> Result<ExperimentResult> {
    let engine = Engine::new(spec)?;
    if let Some(c) = cache {
        c.bind(cache_key(spec));
    }
    let rho0 = spec.initial_state.density()?;
    let par = spec.environment.parallelism;

    let fidelity_no_qec = if spec.comparison || spec.code.is_none() {
        let f = map_items(&spec.t_grid, par, |&t| engine.bare(&rho0, t));
        Some(f.into_iter().collect::<Result<Vec<_>>>()?)
    } else {
        None
    };

    let mut fidelity_qec = Vec::new();
    if spec.code.is_some() {
        let jobs: Vec<(usize, f64)> = spec
            .cycles
            .iter()
            .flat_map(|&c| spec.t_grid.iter().map(move |&t| (c, t)))
            .collect();
        let values = map_items(&jobs, par, |&(c, t)| engine.encoded(&rho0, t, c, cache))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        for (i, &c) in spec.cycles.iter().enumerate() {
            let n = spec.t_grid.len();
            fidelity_qec.push(CycleSeries {
                cycles: c,
                fidelity: values[i * n..(i + 1) * n].to_vec(),
            });
        }
    }

    Ok(ExperimentResult {
        t_grid: spec.t_grid.clone(),
        fidelity_no_qec,
        fidelity_qec,
        metadata: serde_json::to_value(spec)?,
    })
}
