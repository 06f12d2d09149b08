use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::codes::CodeKind;
use crate::Result;

use super::{run_protocol, ExperimentResult, InitialState, ProtocolSpec, Topology};

/// Axes of a cartesian sweep. An empty axis keeps the base spec's value.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepGrid {
    pub kappa: Vec<f64>,
    pub temperature: Vec<f64>,
    pub p: Vec<f64>,
    pub code: Vec<CodeKind>,
    pub cycles: Vec<usize>,
    pub topology: Vec<Topology>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub index: usize,
    pub kappa: f64,
    pub temperature: f64,
    pub p: Option<f64>,
    pub code: Option<CodeKind>,
    pub cycles: usize,
    pub topology: Topology,
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub point: SweepPoint,
    /// Per-point failures are kept in the row instead of aborting the sweep.
    pub outcome: std::result::Result<ExperimentResult, String>,
}

fn axis<T: Clone>(values: &[T], fallback: T) -> Vec<T> {
    if values.is_empty() {
        vec![fallback]
    } else {
        values.to_vec()
    }
}

impl SweepGrid {
    /// Points in row-major order: κ, T, p, code, cycles, topology (last varies fastest).
    pub fn points(&self, base: &ProtocolSpec) -> Vec<SweepPoint> {
        let env = &base.environment;
        let base_p = match base.initial_state {
            InitialState::Werner { p } => Some(p),
            _ => None,
        };
        let ps: Vec<Option<f64>> = if self.p.is_empty() {
            vec![base_p]
        } else {
            self.p.iter().copied().map(Some).collect()
        };
        let codes: Vec<Option<CodeKind>> = if self.code.is_empty() {
            vec![base.code]
        } else {
            self.code.iter().copied().map(Some).collect()
        };
        let cycles = axis(&self.cycles, base.cycles.first().copied().unwrap_or(1));
        let topologies = axis(&self.topology, env.topology);
        let mut out = Vec::new();
        for &kappa in &axis(&self.kappa, env.bath.kappa) {
            for &temperature in &axis(&self.temperature, env.bath.temperature) {
                for &p in &ps {
                    for &code in &codes {
                        for &c in &cycles {
                            for &topology in &topologies {
                                out.push(SweepPoint {
                                    index: out.len(),
                                    kappa,
                                    temperature,
                                    p,
                                    code,
                                    cycles: c,
                                    topology,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

impl SweepPoint {
    pub fn spec(&self, base: &ProtocolSpec) -> ProtocolSpec {
        let mut s = base.clone();
        s.environment.bath.kappa = self.kappa;
        s.environment.bath.temperature = self.temperature;
        s.environment.topology = self.topology;
        if let Some(p) = self.p {
            s.initial_state = InitialState::Werner { p };
        }
        s.code = self.code;
        s.cycles = vec![self.cycles];
        s
    }

    fn run(&self, base: &ProtocolSpec) -> SweepRow {
        SweepRow {
            point: self.clone(),
            outcome: run_protocol(&self.spec(base)).map_err(|e| e.to_string()),
        }
    }
}

/// Runs every grid point not listed in `completed` and hands the rows to
/// `emit` in grid order. Points run on up to `workers` threads (0: rayon's
/// default); `emit` is only ever called from the calling thread.
pub fn sweep(
    base: &ProtocolSpec,
    grid: &SweepGrid,
    completed: &BTreeSet<usize>,
    workers: usize,
    mut emit: impl FnMut(SweepRow) -> Result<()>,
) -> Result<usize> {
    let pending: Vec<SweepPoint> = grid
        .points(base)
        .into_iter()
        .filter(|p| !completed.contains(&p.index))
        .collect();
    let count = pending.len();

    #[cfg(feature = "parallel")]
    {
        if workers != 1 && base.environment.parallelism.enabled() && pending.len() > 1 {
            use rayon::prelude::*;
            use std::sync::mpsc;

            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| crate::Error::Config(format!("worker pool: {e}")))?;
            let (tx, rx) = mpsc::channel::<(usize, SweepRow)>();
            return std::thread::scope(|scope| {
                let jobs = &pending;
                scope.spawn(move || {
                    pool.install(|| {
                        jobs.par_iter().enumerate().for_each_with(tx, |tx, (slot, point)| {
                            let _ = tx.send((slot, point.run(base)));
                        })
                    })
                });
                let mut buffer = std::collections::BTreeMap::new();
                let mut next = 0;
                for (slot, row) in rx {
                    buffer.insert(slot, row);
                    while let Some(row) = buffer.remove(&next) {
                        emit(row)?;
                        next += 1;
                    }
                }
                Ok(count)
            });
        }
    }
    let _ = workers;
    for point in &pending {
        emit(point.run(base))?;
    }
    Ok(count)
}
