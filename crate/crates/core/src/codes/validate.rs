use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::pauli::{ps, PauliString};
use crate::state::{pure_overlap, DensityMatrix};
use crate::{Result, C64};

use super::syndrome::weight_one_errors;
use super::{derive_syndrome_table, syndrome_string, tables, CodeKind, QecCode, RecoveryMode};

/// Error-correction checks must return the input within this infidelity.
pub const CORRECTION_TOL: f64 = 1e-9;
pub const RANDOM_STATES: usize = 20;

#[derive(Clone, Debug, Serialize)]
pub struct CodeReport {
    pub code: CodeKind,
    /// Error/syndrome pairs confirmed against the brute-force table.
    pub verified_pairs: usize,
    /// Tabulated correction rows reproduced.
    pub table_rows: usize,
    /// Errors pushed through encode, recover and decode.
    pub corrected_errors: usize,
    pub min_fidelity: f64,
    pub failures: Vec<String>,
}

impl CodeReport {
    fn new(code: CodeKind) -> Self {
        Self {
            code,
            verified_pairs: 0,
            table_rows: 0,
            corrected_errors: 0,
            min_fidelity: 1.0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub codes: Vec<CodeReport>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.codes.iter().all(CodeReport::passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.codes {
            writeln!(
                f,
                "{:<10} {}  pairs={} rows={} corrected={} min_fidelity={:.12}",
                r.code.name(),
                if r.passed() { "ok  " } else { "FAIL" },
                r.verified_pairs,
                r.table_rows,
                r.corrected_errors,
                r.min_fidelity
            )?;
            for msg in &r.failures {
                writeln!(f, "    {msg}")?;
            }
        }
        Ok(())
    }
}

/// Uniformly random complex amplitudes, normalized.
pub fn random_logical_state(k: usize, rng: &mut impl Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..1usize << k)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
    v
}

/// Runs encode → E·E† → recover → decode and returns the physical state after
/// recovery together with the fidelity against |ψ⟩.
pub fn correction_round_trip(code: &QecCode, error: &PauliString, psi: &[C64]) -> Result<(DensityMatrix, f64)> {
    let rho = code.encode(&DensityMatrix::pure(psi)?)?;
    let hit = DensityMatrix::from_matrix_unchecked(error.conjugate(rho.matrix()));
    let fixed = code.recover(&hit)?;
    let out = code.decode(&fixed)?;
    Ok((fixed, pure_overlap(psi, out.matrix())))
}

fn check_corrections(
    code: &QecCode,
    errors: &[PauliString],
    states: &[Vec<C64>],
    report: &mut CodeReport,
) -> Result<()> {
    for e in errors {
        let mut worst: f64 = 1.0;
        for psi in states {
            let (_, f) = correction_round_trip(code, e, psi)?;
            worst = worst.min(f);
        }
        report.min_fidelity = report.min_fidelity.min(worst);
        if 1.0 - worst > CORRECTION_TOL {
            report.failures.push(format!("{e}: fidelity {worst:.12} after recovery"));
        }
        report.corrected_errors += 1;
    }
    Ok(())
}

fn verify_row(table: &super::SyndromeTable, syndrome: &str, candidate: &str, report: &mut CodeReport) {
    let p = ps(candidate);
    match table.errors_for(syndrome) {
        Some(errs) if errs.contains(&p) => report.verified_pairs += 1,
        _ => report
            .failures
            .push(format!("table row {syndrome} -> {candidate} disagrees with the brute-force syndrome")),
    }
}

fn validate_five_qubit(states: &[Vec<C64>]) -> Result<CodeReport> {
    let code = QecCode::build(CodeKind::FiveQubit);
    let mut report = CodeReport::new(CodeKind::FiveQubit);
    let table = derive_syndrome_table(&code)?;
    let m = code.stabilizer_generators().len();
    for s in 0..1usize << m {
        match table.errors_for(&syndrome_string(s, m)) {
            Some([_]) => report.verified_pairs += 1,
            _ => report
                .failures
                .push(format!("syndrome {} is not produced by exactly one error", syndrome_string(s, m))),
        }
    }
    report.table_rows = tables::FIVE_QUBIT_CORRECTIONS.len();
    let mut errors = vec![PauliString::identity(5)];
    errors.extend(weight_one_errors(5));
    check_corrections(&code, &errors, states, &mut report)?;
    Ok(report)
}

fn validate_steane(states: &[Vec<C64>]) -> Result<CodeReport> {
    let code = QecCode::build(CodeKind::Steane);
    let mut report = CodeReport::new(CodeKind::Steane);
    let table = derive_syndrome_table(&code)?;
    for (syn, cand) in tables::STEANE_TABLE {
        verify_row(&table, syn, cand, &mut report);
        report.table_rows += 1;
    }
    check_corrections(&code, &weight_one_errors(7), states, &mut report)?;
    Ok(report)
}

fn validate_toric(states: &[Vec<C64>]) -> Result<CodeReport> {
    let code = QecCode::build(CodeKind::Toric822).with_mode(RecoveryMode::First);
    let mut report = CodeReport::new(CodeKind::Toric822);
    let table = derive_syndrome_table(&code)?;
    let mut firsts = Vec::new();
    for (syn, cands) in tables::TORIC_TABLE {
        for c in cands {
            verify_row(&table, syn, c, &mut report);
        }
        report.table_rows += 1;
        firsts.push(ps(cands[0]));

        // the second candidate differs from the first by a logical operator:
        // recovery keeps the state in the code space
        let second = ps(cands[1]);
        for psi in states {
            let (fixed, _) = correction_round_trip(&code, &second, psi)?;
            let w = code.code_space_weight(&fixed);
            if (w - 1.0).abs() > CORRECTION_TOL {
                report
                    .failures
                    .push(format!("{second}: code-space weight {w:.12} after recovery"));
                break;
            }
        }
    }
    check_corrections(&code, &firsts, states, &mut report)?;
    Ok(report)
}

/// Brute-force check of all three codes against their tabulated data.
pub fn validate_codes(seed: u64) -> Result<ValidationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one: Vec<Vec<C64>> = (0..RANDOM_STATES).map(|_| random_logical_state(1, &mut rng)).collect();
    let two: Vec<Vec<C64>> = (0..RANDOM_STATES).map(|_| random_logical_state(2, &mut rng)).collect();
    Ok(ValidationReport {
        codes: vec![validate_five_qubit(&one)?, validate_steane(&one)?, validate_toric(&two)?],
    })
}
