//! The four CLI commands as library functions. Each writes its artifacts
//! next to the configured output prefix and returns a short summary.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::codes::validate_codes;
use crate::config::RunConfig;
use crate::experiments::{critical_time, run_protocol, sweep, ChannelCache, CriticalTime, InitialState};
use crate::output::{
    completed_sweep_points, critical_csv, write_experiment_csv, write_json, SweepWriter, UNITS_LINE,
};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub command: String,
    pub version: String,
    pub units: String,
    pub config: RunConfig,
}

impl Metadata {
    fn new(command: &str, config: &RunConfig) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            units: UNITS_LINE.trim_start_matches("# units: ").to_string(),
            config: config.clone(),
        }
    }
}

pub fn read_metadata(path: &Path) -> Result<Metadata> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutcome {
    /// False when the command ran but found a domain failure.
    pub success: bool,
    pub summary: String,
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(())
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<CommandOutcome> {
    let spec = cfg.protocol()?;
    let csv = cfg.csv_path();
    ensure_parent(&csv)?;
    write_json(&cfg.json_path(), &Metadata::new("simulate", cfg))?;
    match run_protocol(&spec) {
        Ok(result) => {
            write_experiment_csv(&csv, &result)?;
            Ok(CommandOutcome {
                success: true,
                summary: format!("wrote {} rows to {}", result.t_grid.len(), csv.display()),
            })
        }
        Err(e) => {
            std::fs::write(&csv, format!("# openqec simulate\n{UNITS_LINE}\n# error: {e}\n"))?;
            Err(e)
        }
    }
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<CommandOutcome> {
    let base = cfg.protocol()?;
    let csv = cfg.csv_path();
    ensure_parent(&csv)?;
    write_json(&cfg.json_path(), &Metadata::new("sweep", cfg))?;
    let done = completed_sweep_points(&csv)?;
    let mut writer = SweepWriter::open(&csv)?;
    let mut failed = 0;
    let ran = sweep(&base, &cfg.sweep, &done, cfg.workers, |row| {
        if row.outcome.is_err() {
            failed += 1;
        }
        writer.write_row(&row)
    })?;
    Ok(CommandOutcome {
        success: failed == 0,
        summary: format!(
            "{ran} grid points run ({} already complete, {failed} failed) into {}",
            done.len(),
            csv.display()
        ),
    })
}

pub fn cmd_critical_time(cfg: &RunConfig) -> Result<CommandOutcome> {
    let mut spec = cfg.protocol()?;
    let csv = cfg.csv_path();
    ensure_parent(&csv)?;
    write_json(&cfg.json_path(), &Metadata::new("critical-time", cfg))?;
    let cache = ChannelCache::new();
    let mut rows = Vec::new();
    for &c in &cfg.cycles {
        for &p in &cfg.critical_p {
            spec.initial_state = InitialState::Werner { p };
            let r = critical_time(&spec, c, &cfg.crossover, Some(&cache))?;
            rows.push((p, c, r));
        }
    }
    std::fs::write(&csv, critical_csv(&rows)?)?;
    let found = rows
        .iter()
        .filter(|(_, _, r)| matches!(r, CriticalTime::Crossing { .. }))
        .count();
    Ok(CommandOutcome {
        success: true,
        summary: format!("{found} of {} searches found a crossover; table in {}", rows.len(), csv.display()),
    })
}

pub fn cmd_validate_codes(cfg: &RunConfig) -> Result<CommandOutcome> {
    let report = validate_codes(cfg.seed)?;
    Ok(CommandOutcome {
        success: report.passed(),
        summary: report.to_string(),
    })
}
