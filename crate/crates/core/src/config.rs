//! Flat JSON run configuration with defaults, `key=value` overrides and range
//! checks, plus its translation into a [`ProtocolSpec`].
//!
//! ```json
//! { "temperature": 10.0, "kappa": 0.01, "code": "steane", "cycles": [1, 5] }
//! ```
//!
//! Every key is optional; unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bath::{BathSpec, ResonanceConvention, SpectralWindow};
use crate::codes::{CodeKind, RecoveryMode};
use crate::dynamics::Backend;
use crate::experiments::{
    BlockBath, CrossoverSearch, CycleMemory, Environment, InitialState, ProtocolSpec, Route, SweepGrid, Topology,
};
use crate::parallel::Parallelism;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateName {
    #[default]
    Zero,
    One,
    Plus,
    Werner,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub omega: f64,
    pub temperature: f64,
    pub kappa: f64,
    pub n_modes: usize,
    /// Mode window [min, max]; absent means one mode at the qubit frequency.
    pub spectral_window: Option<[f64; 2]>,
    pub convention: ResonanceConvention,
    /// `null` runs only the unprotected register.
    pub code: Option<CodeKind>,
    pub initial_state: StateName,
    /// Werner mixing parameter.
    pub p: f64,
    pub cycles: Vec<usize>,
    /// Explicit times (1/ω). Overrides `kappa_t_max` / `t_points`.
    pub t_grid: Option<Vec<f64>>,
    pub kappa_t_max: f64,
    pub t_points: usize,
    pub comparison: bool,
    pub topology: Topology,
    pub block_bath: BlockBath,
    pub backend: Backend,
    pub memory: CycleMemory,
    pub recovery: RecoveryMode,
    pub route: Route,
    pub dt: f64,
    pub seed: u64,
    /// Sweep worker threads (0: one per core).
    pub workers: usize,
    pub sequential: bool,
    /// Output prefix: `<output>.csv` and `<output>.json`.
    pub output: PathBuf,
    pub sweep: SweepGrid,
    pub crossover: CrossoverSearch,
    /// Werner parameters scanned by `critical-time`.
    pub critical_p: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            omega: 1.0,
            temperature: 0.2,
            kappa: 0.01,
            n_modes: 1,
            spectral_window: None,
            convention: ResonanceConvention::Resonant,
            code: Some(CodeKind::FiveQubit),
            initial_state: StateName::Zero,
            p: 0.5,
            cycles: vec![1],
            t_grid: None,
            kappa_t_max: 1.0,
            t_points: 21,
            comparison: true,
            topology: Topology::Collective,
            block_bath: BlockBath::PerBlock,
            backend: Backend::TimeLocal,
            memory: CycleMemory::PerCycle,
            recovery: RecoveryMode::Mixing,
            route: Route::Auto,
            dt: 1e-3,
            seed: 0,
            workers: 0,
            sequential: false,
            output: PathBuf::from("openqec_out"),
            sweep: SweepGrid::default(),
            crossover: CrossoverSearch::default(),
            critical_p: vec![0.1, 0.3, 0.5, 0.7, 0.9],
        }
    }
}

fn range(field: &str, ok: bool, reason: impl Into<String>) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::param(field, reason))
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        range("omega", self.omega > 0.0 && self.omega.is_finite(), "must be > 0")?;
        range("temperature", self.temperature > 0.0 && self.temperature.is_finite(), "must be > 0")?;
        range("kappa", self.kappa >= 0.0 && self.kappa.is_finite(), "must be >= 0")?;
        range("n_modes", self.n_modes >= 1, "must be >= 1")?;
        range("p", (0.0..=1.0).contains(&self.p), format!("must lie in [0, 1], got {}", self.p))?;
        range("cycles", !self.cycles.is_empty() && !self.cycles.contains(&0), "cycle counts must be >= 1")?;
        range("dt", self.dt > 0.0 && self.dt.is_finite(), "must be > 0")?;
        range("kappa_t_max", self.kappa_t_max > 0.0 && self.kappa_t_max.is_finite(), "must be > 0")?;
        range("t_points", self.t_points >= 1, "must be >= 1")?;
        if let Some([lo, hi]) = self.spectral_window {
            range("spectral_window", 0.0 < lo && lo <= hi, "need 0 < min <= max")?;
        }
        for p in self.sweep.p.iter().chain(&self.critical_p) {
            range("p", (0.0..=1.0).contains(p), format!("must lie in [0, 1], got {p}"))?;
        }
        range("sweep.kappa", self.sweep.kappa.iter().all(|k| *k >= 0.0), "must be >= 0")?;
        range("sweep.temperature", self.sweep.temperature.iter().all(|t| *t > 0.0), "must be > 0")?;
        range("sweep.cycles", !self.sweep.cycles.contains(&0), "cycle counts must be >= 1")?;
        Ok(())
    }

    pub fn bath(&self) -> Result<BathSpec> {
        let mut b = BathSpec::new(self.temperature, self.kappa)?.with_convention(self.convention);
        b.n_modes = self.n_modes;
        if let Some([lo, hi]) = self.spectral_window {
            b = b.with_window(lo, hi, self.n_modes)?;
        } else {
            b.window = SpectralWindow::QubitResonant;
        }
        b.validate()?;
        Ok(b)
    }

    pub fn initial_state(&self) -> InitialState {
        match self.initial_state {
            StateName::Zero => InitialState::Zero,
            StateName::One => InitialState::One,
            StateName::Plus => InitialState::Plus,
            StateName::Werner => InitialState::Werner { p: self.p },
        }
    }

    /// Explicit grid, or `t_points` equally spaced values of κt in [0, κt_max].
    pub fn t_grid(&self) -> Result<Vec<f64>> {
        if let Some(grid) = &self.t_grid {
            return Ok(grid.clone());
        }
        if self.kappa == 0.0 {
            return Err(Error::param("t_grid", "kappa = 0 needs an explicit t_grid"));
        }
        let t_max = self.kappa_t_max / self.kappa;
        if self.t_points == 1 {
            return Ok(vec![t_max]);
        }
        Ok((0..self.t_points)
            .map(|i| t_max * i as f64 / (self.t_points - 1) as f64)
            .collect())
    }

    pub fn protocol(&self) -> Result<ProtocolSpec> {
        let spec = ProtocolSpec {
            initial_state: self.initial_state(),
            code: self.code,
            cycles: self.cycles.clone(),
            t_grid: self.t_grid()?,
            comparison: self.comparison,
            environment: Environment {
                omega: self.omega,
                bath: self.bath()?,
                topology: self.topology,
                block_bath: self.block_bath,
                backend: self.backend,
                dt: self.dt,
                parallelism: if self.sequential {
                    Parallelism::Sequential
                } else {
                    Parallelism::Parallel
                },
            },
            recovery: self.recovery,
            memory: self.memory,
            route: self.route,
            seed: self.seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn csv_path(&self) -> PathBuf {
        self.output.with_extension("csv")
    }

    pub fn json_path(&self) -> PathBuf {
        self.output.with_extension("json")
    }
}

/// Splits `a.b=value` and stores `value` (JSON, or a bare string) under the
/// dotted path.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override {assignment:?} is not key=value")))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(Error::Config(format!("override {assignment:?} has an empty key")));
    }
    let value = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.trim().to_string()));
    let mut node = doc;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| Error::Config(format!("override {key:?}: {part:?} is not inside an object")))?;
        if i + 1 == parts.len() {
            obj.insert(part.to_string(), value);
            return Ok(());
        }
        node = obj
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    unreachable!("split always yields at least one part")
}

/// Parses a document (or `{}`), applies overrides in order, resolves defaults
/// and validates ranges.
pub fn parse_config_str(text: &str, overrides: &[String]) -> Result<RunConfig> {
    let mut doc: Value = serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))?;
    if !doc.is_object() {
        return Err(Error::Config("config: top level must be a JSON object".into()));
    }
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    let cfg: RunConfig = serde_json::from_value(doc).map_err(|e| Error::Config(format!("config: {e}")))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: Option<&Path>, overrides: &[String]) -> Result<RunConfig> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?,
        None => "{}".to_string(),
    };
    parse_config_str(&text, overrides)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let c = parse_config_str("{}", &[]).unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!((c.omega, c.temperature, c.kappa, c.dt), (1.0, 0.2, 0.01, 1e-3));
        assert_eq!(c.code, Some(CodeKind::FiveQubit));
        assert_eq!(c.cycles, vec![1]);
    }

    #[test]
    fn overrides_apply_in_order() {
        let c = parse_config_str(
            r#"{"temperature": 1.0}"#,
            &["temperature=10".into(), "code=steane".into(), "sweep.kappa=[0.01,0.1]".into()],
        )
        .unwrap();
        assert_eq!(c.temperature, 10.0);
        assert_eq!(c.code, Some(CodeKind::Steane));
        assert_eq!(c.sweep.kappa, vec![0.01, 0.1]);
        let none = parse_config_str("{}", &["code=null".into()]).unwrap();
        assert_eq!(none.code, None);
    }

    #[test]
    fn range_errors_name_the_field() {
        match parse_config_str("{}", &["p=1.5".into()]) {
            Err(Error::InvalidParameter { field, .. }) => assert_eq!(field, "p"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_keys_and_bad_documents_fail() {
        assert!(matches!(parse_config_str(r#"{"kapa": 1}"#, &[]), Err(Error::Config(_))));
        assert!(matches!(parse_config_str("[1]", &[]), Err(Error::Config(_))));
        assert!(matches!(parse_config_str("{}", &["novalue".into()]), Err(Error::Config(_))));
        assert!(matches!(parse_config_str("{}", &["code=surface".into()]), Err(Error::Config(_))));
        assert!(parse_config(Some(Path::new("/nonexistent/cfg.json")), &[]).is_err());
    }

    #[test]
    fn round_trip_through_json() {
        let c = parse_config_str("{}", &["cycles=[1,2,5]".into(), "initial_state=werner".into()]).unwrap();
        let text = serde_json::to_string_pretty(&c).unwrap();
        assert_eq!(parse_config_str(&text, &[]).unwrap(), c);
    }

    #[test]
    fn default_grid_spans_one_over_kappa() {
        let c = RunConfig::default();
        let g = c.t_grid().unwrap();
        assert_eq!(g.len(), 21);
        assert!((g[20] - 100.0).abs() < 1e-12);
        let spec = c.protocol().unwrap();
        assert_eq!(spec.environment.bath.kappa, 0.01);
    }
}
