//! Deterministic CSV and JSON emission.
//!
//! Every CSV starts with `#` comment lines carrying the producing command and
//! the units, followed by a header row. Numbers use `{:.11e}`, i.e. twelve
//! significant digits, so identical runs produce byte-identical files.

use std::collections::BTreeSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::Serialize;

use crate::experiments::{CriticalTime, ExperimentResult, SweepRow};
use crate::{Error, Result};

pub const UNITS_LINE: &str = "# units: t in 1/omega; omega, temperature and kappa in omega; fidelities dimensionless";

pub fn fmt_num(x: f64) -> String {
    format!("{x:.11e}")
}

fn comment_header(command: &str) -> String {
    format!("# openqec {command}\n{UNITS_LINE}\n")
}

/// Column names of an experiment table: `t`, `F_no_qec` when present, then
/// `F_qec` for a single cycle variant or `F_qec_n{c}` per variant.
pub fn experiment_columns(result: &ExperimentResult) -> Vec<String> {
    let mut cols = vec!["t".to_string()];
    if result.fidelity_no_qec.is_some() {
        cols.push("F_no_qec".into());
    }
    match result.fidelity_qec.as_slice() {
        [] => {}
        [_] => cols.push("F_qec".into()),
        many => cols.extend(many.iter().map(|s| format!("F_qec_n{}", s.cycles))),
    }
    cols
}

pub fn experiment_csv(result: &ExperimentResult) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(experiment_columns(result))?;
    for (i, t) in result.t_grid.iter().enumerate() {
        let mut row = vec![fmt_num(*t)];
        if let Some(bare) = &result.fidelity_no_qec {
            row.push(fmt_num(bare[i]));
        }
        row.extend(result.fidelity_qec.iter().map(|s| fmt_num(s.fidelity[i])));
        w.write_record(&row)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| Error::Config(e.to_string()))?)
        .expect("csv output is utf-8");
    Ok(format!("{}{body}", comment_header("simulate")))
}

pub fn write_experiment_csv(path: &Path, result: &ExperimentResult) -> Result<()> {
    std::fs::write(path, experiment_csv(result)?)?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub const SWEEP_COLUMNS: [&str; 11] = [
    "index", "kappa", "temperature", "p", "code", "cycles", "topology", "t", "F_no_qec", "F_qec", "error",
];

fn topology_name(t: crate::experiments::Topology) -> &'static str {
    match t {
        crate::experiments::Topology::Local => "local",
        crate::experiments::Topology::Collective => "collective",
    }
}

/// Appends sweep rows to a CSV, flushing after each grid point.
pub struct SweepWriter {
    file: File,
}

impl SweepWriter {
    /// Opens `path` for appending; a fresh file gets the comment and header
    /// lines, an existing one must carry the same header.
    pub fn open(path: &Path) -> Result<Self> {
        let fresh = !path.exists() || std::fs::metadata(path)?.len() == 0;
        if !fresh {
            let header = read_header(path)?;
            if header.as_deref() != Some(SWEEP_COLUMNS.join(",").as_str()) {
                return Err(Error::Config(format!(
                    "{} exists with a different header; refusing to append",
                    path.display()
                )));
            }
        }
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        if fresh {
            writeln!(file, "{}{}", comment_header("sweep"), SWEEP_COLUMNS.join(","))?;
            file.flush()?;
        }
        Ok(Self { file })
    }

    pub fn write_row(&mut self, row: &SweepRow) -> Result<()> {
        let p = &row.point;
        let fixed = vec![
            p.index.to_string(),
            fmt_num(p.kappa),
            fmt_num(p.temperature),
            p.p.map(fmt_num).unwrap_or_default(),
            p.code.map(|c| c.name().to_string()).unwrap_or_else(|| "none".into()),
            p.cycles.to_string(),
            topology_name(p.topology).to_string(),
        ];
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        match &row.outcome {
            Ok(r) => {
                for (i, t) in r.t_grid.iter().enumerate() {
                    let mut rec = fixed.clone();
                    rec.push(fmt_num(*t));
                    rec.push(r.fidelity_no_qec.as_ref().map(|b| fmt_num(b[i])).unwrap_or_default());
                    rec.push(r.fidelity_qec.first().map(|s| fmt_num(s.fidelity[i])).unwrap_or_default());
                    rec.push(String::new());
                    w.write_record(&rec)?;
                }
            }
            Err(msg) => {
                let mut rec = fixed;
                rec.extend([String::new(), String::new(), String::new(), msg.clone()]);
                w.write_record(&rec)?;
            }
        }
        self.file
            .write_all(&w.into_inner().map_err(|e| Error::Config(e.to_string()))?)?;
        self.file.flush()?;
        Ok(())
    }
}

fn read_header(path: &Path) -> Result<Option<String>> {
    let reader = BufReader::new(File::open(path)?);
    for line in reader.lines() {
        let line = line?;
        if !line.starts_with('#') {
            return Ok(Some(line));
        }
    }
    Ok(None)
}

/// Grid indices that already have rows in an existing sweep CSV.
pub fn completed_sweep_points(path: &Path) -> Result<BTreeSet<usize>> {
    if !path.exists() {
        return Ok(BTreeSet::new());
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .from_path(path)?;
    let mut done = BTreeSet::new();
    for rec in reader.records() {
        let rec = rec?;
        if let Some(i) = rec.get(0).and_then(|s| s.parse().ok()) {
            done.insert(i);
        }
    }
    Ok(done)
}

/// One row per (p, cycles): `kappa_t_c`, empty when there is no crossover.
pub fn critical_csv(rows: &[(f64, usize, CriticalTime)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["p", "cycles", "kappa_t_c", "outcome"])?;
    for (p, c, r) in rows {
        let (value, outcome) = match r {
            CriticalTime::Crossing { kappa_t } => (fmt_num(*kappa_t), "crossing"),
            CriticalTime::NoCrossover => (String::new(), "no_crossover"),
        };
        w.write_record([fmt_num(*p), c.to_string(), value, outcome.to_string()])?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| Error::Config(e.to_string()))?)
        .expect("csv output is utf-8");
    Ok(format!("{}{body}", comment_header("critical-time")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{CycleSeries, SweepPoint, Topology};

    fn result(cycles: &[usize]) -> ExperimentResult {
        ExperimentResult {
            t_grid: vec![0.0, 50.0],
            fidelity_no_qec: Some(vec![1.0, 0.5]),
            fidelity_qec: cycles
                .iter()
                .map(|&c| CycleSeries {
                    cycles: c,
                    fidelity: vec![1.0, 0.75],
                })
                .collect(),
            metadata: serde_json::Value::Null,
        }
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(1.0), "1.00000000000e0");
        assert_eq!(fmt_num(0.123456789012345), "1.23456789012e-1");
    }

    #[test]
    fn experiment_header_follows_cycle_variants() {
        let one = experiment_csv(&result(&[1])).unwrap();
        assert!(one.starts_with("# openqec simulate\n# units"));
        assert!(one.contains("\nt,F_no_qec,F_qec\n"));
        let many = experiment_csv(&result(&[1, 5])).unwrap();
        assert!(many.contains("\nt,F_no_qec,F_qec_n1,F_qec_n5\n"));
        assert!(many.ends_with("5.00000000000e1,5.00000000000e-1,7.50000000000e-1,7.50000000000e-1\n"));
    }

    #[test]
    fn sweep_writer_appends_and_reports_completed_points() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let point = |index| SweepPoint {
            index,
            kappa: 0.01,
            temperature: 0.2,
            p: None,
            code: None,
            cycles: 1,
            topology: Topology::Collective,
        };
        {
            let mut w = SweepWriter::open(&path).unwrap();
            w.write_row(&SweepRow { point: point(0), outcome: Ok(result(&[1])) }).unwrap();
        }
        {
            let mut w = SweepWriter::open(&path).unwrap();
            w.write_row(&SweepRow { point: point(2), outcome: Err("boom".into()) }).unwrap();
        }
        let done = completed_sweep_points(&path).unwrap();
        assert_eq!(done.into_iter().collect::<Vec<_>>(), vec![0, 2]);
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.matches("index,kappa").count(), 1);
        assert!(text.contains("boom"));

        std::fs::write(&path, "a,b\n1,2\n").unwrap();
        assert!(SweepWriter::open(&path).is_err());
    }
}
