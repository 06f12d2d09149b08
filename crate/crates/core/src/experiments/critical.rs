use serde::{Deserialize, Serialize};

use crate::{Error, Result};

use super::{run_protocol_cached, ChannelCache, ProtocolSpec};

/// Search window and tolerances of the crossover finder, in units of 1/κ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CrossoverSearch {
    /// Upper end of the κt window (the lower end is 0, excluded).
    pub window: f64,
    /// Equally spaced κt points of the bracketing scan.
    pub coarse_points: usize,
    /// Stop once |F_qec − F_no_qec| falls below this.
    pub fidelity_tol: f64,
    /// Stop once the bracket is narrower than this many units of 1/κ.
    pub kappa_t_tol: f64,
}

impl Default for CrossoverSearch {
    fn default() -> Self {
        Self {
            window: 5.0,
            coarse_points: 50,
            fidelity_tol: 1e-6,
            kappa_t_tol: 1e-4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum CriticalTime {
    Crossing { kappa_t: f64 },
    NoCrossover,
}

impl CriticalTime {
    pub fn kappa_t(&self) -> Option<f64> {
        match self {
            CriticalTime::Crossing { kappa_t } => Some(*kappa_t),
            CriticalTime::NoCrossover => None,
        }
    }
}

fn gaps(spec: &ProtocolSpec, cycles: usize, times: Vec<f64>, cache: Option<&ChannelCache>) -> Result<Vec<f64>> {
    let mut s = spec.clone();
    s.t_grid = times;
    s.cycles = vec![cycles];
    s.comparison = true;
    let r = run_protocol_cached(&s, cache)?;
    let bare = r.fidelity_no_qec.expect("comparison requested");
    Ok(r.fidelity_qec[0]
        .fidelity
        .iter()
        .zip(&bare)
        .map(|(q, b)| q - b)
        .collect())
}

/// First root of g(t) = F_qec(t) − F_no_qec(t) inside the κt window.
///
/// A coarse scan brackets the first sign change, then bisection narrows it
/// until |g| < `fidelity_tol` or the bracket is below `kappa_t_tol`/κ. The
/// spec's own `t_grid` and `cycles` are ignored.
pub fn critical_time(
    spec: &ProtocolSpec,
    cycles: usize,
    search: &CrossoverSearch,
    cache: Option<&ChannelCache>,
) -> Result<CriticalTime> {
    if spec.code.is_none() {
        return Err(Error::param("code", "the critical time needs an error-correcting code"));
    }
    if !(search.window > 0.0) || search.coarse_points < 2 {
        return Err(Error::param("crossover_window", "need a positive window and at least 2 scan points"));
    }
    let kappa = spec.environment.bath.kappa;
    if kappa == 0.0 {
        return Ok(CriticalTime::NoCrossover);
    }
    let times: Vec<f64> = (1..=search.coarse_points)
        .map(|i| search.window * i as f64 / search.coarse_points as f64 / kappa)
        .collect();
    let g = gaps(spec, cycles, times.clone(), cache)?;
    if let Some(i) = g.iter().position(|v| *v == 0.0) {
        return Ok(CriticalTime::Crossing { kappa_t: kappa * times[i] });
    }
    let Some(i) = (0..g.len() - 1).find(|&i| g[i].signum() != g[i + 1].signum()) else {
        return Ok(CriticalTime::NoCrossover);
    };
    let (mut lo, mut hi) = (times[i], times[i + 1]);
    let g_lo = g[i];
    let t_tol = search.kappa_t_tol / kappa;
    loop {
        let mid = 0.5 * (lo + hi);
        let gm = gaps(spec, cycles, vec![mid], cache)?[0];
        if gm.abs() < search.fidelity_tol || hi - lo < t_tol {
            return Ok(CriticalTime::Crossing { kappa_t: kappa * mid });
        }
        if gm.signum() == g_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}
