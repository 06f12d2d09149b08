//! Ideal encode / recover / decode for the five-qubit, Steane and [[8,2,2]]
//! toric codes.
//!
//! Every code is described by an encoding unitary U on n physical qubits whose
//! decoded frame has the logical content on the main positions and a syndrome
//! label on the ancilla positions: U|s, m⟩ = E_s·L_s|m⟩_L, where E_s is an
//! error with syndrome s and L_s a logical correction. Encoding places the
//! ancillas in |0⟩; decoding conjugates by U† and traces the ancillas out.
//!
//! Recovery comes in two flavours. The five-qubit code uses its sixteen Kraus
//! operators R_k = |00⟩⟨s₁s₂| ⊗ P_k ⊗ |00⟩⟨s₄s₅| in the decoded frame, i.e.
//! ρ ↦ U(Σ R_k U†ρU R_k†)U†. The two CSS codes measure their stabilizer
//! generators (projector splitting) and apply the tabulated Pauli correction
//! for each syndrome; degenerate toric syndromes carry two weighted candidates.

mod syndrome;
pub mod tables;
mod validate;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::linalg::{conjugate_on, kron, qubit_mask, ComplexMatrix};
use crate::pauli::{ps, Pauli, PauliString};
use crate::state::{partial_trace_matrix, DensityMatrix};
use crate::{Error, Result, C64};

pub use syndrome::{derive_syndrome_table, syndrome_of, syndrome_string, SyndromeTable};
pub use validate::{
    correction_round_trip, random_logical_state, validate_codes, CodeReport, ValidationReport, CORRECTION_TOL,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CodeKind {
    #[serde(rename = "five_qubit")]
    FiveQubit,
    #[serde(rename = "steane")]
    Steane,
    #[serde(rename = "toric_822")]
    Toric822,
}

impl CodeKind {
    pub const ALL: [CodeKind; 3] = [CodeKind::FiveQubit, CodeKind::Steane, CodeKind::Toric822];

    pub fn name(self) -> &'static str {
        match self {
            CodeKind::FiveQubit => "five_qubit",
            CodeKind::Steane => "steane",
            CodeKind::Toric822 => "toric_822",
        }
    }

    pub fn n_physical(self) -> usize {
        match self {
            CodeKind::FiveQubit => 5,
            CodeKind::Steane => 7,
            CodeKind::Toric822 => 8,
        }
    }

    pub fn k_logical(self) -> usize {
        match self {
            CodeKind::Toric822 => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CodeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CodeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::param("code", format!("unknown code {s:?} (five_qubit | steane | toric_822)")))
    }
}

/// How syndromes with several tabulated corrections are handled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoveryMode {
    /// Weighted mixture of all candidates (a deterministic CPTP map).
    #[default]
    Mixing,
    /// Always the first listed candidate.
    First,
    /// One candidate per syndrome, drawn with the tabulated weights.
    Stochastic,
}

/// Weighted Pauli corrections indexed by syndrome value (G₁ most significant).
#[derive(Clone, Debug)]
pub struct CorrectionTable {
    n_generators: usize,
    entries: Vec<Vec<(f64, PauliString)>>,
}

impl CorrectionTable {
    pub fn n_generators(&self) -> usize {
        self.n_generators
    }

    pub fn get(&self, syndrome: usize) -> &[(f64, PauliString)] {
        &self.entries[syndrome]
    }
}

#[derive(Clone, Debug)]
enum Recovery {
    /// Decoded-frame Kraus operators.
    Kraus(Vec<ComplexMatrix>),
    /// Stabilizer measurement followed by a table lookup.
    Table(CorrectionTable),
}

#[derive(Clone, Debug)]
pub struct QecCode {
    kind: CodeKind,
    n_physical: usize,
    k_logical: usize,
    main_positions: Vec<usize>,
    ancilla_positions: Vec<usize>,
    encode_unitary: ComplexMatrix,
    codewords: Vec<Vec<C64>>,
    stabilizers: Vec<PauliString>,
    recovery: Recovery,
    mode: RecoveryMode,
}

/// Register index with `anc_value` spread over `anc` and `main_value` over `main`.
fn layout_index(n: usize, anc: &[usize], main: &[usize], anc_value: usize, main_value: usize) -> usize {
    let spread = |positions: &[usize], value: usize| -> usize {
        let k = positions.len();
        positions
            .iter()
            .enumerate()
            .filter(|(i, _)| value & (1 << (k - 1 - i)) != 0)
            .map(|(_, &q)| qubit_mask(q, n))
            .sum()
    };
    spread(anc, anc_value) + spread(main, main_value)
}

fn ket_from_bits(bits: &str) -> usize {
    usize::from_str_radix(bits, 2).expect("binary ket label")
}

fn amplitude() -> f64 {
    1.0 / (2.0 * 2f64.sqrt())
}

fn single_qubit_pauli(label: &str) -> ComplexMatrix {
    label
        .chars()
        .map(|c| ps(&c.to_string()).to_matrix())
        .fold(ComplexMatrix::identity(2), |acc, m| acc.matmul(&m))
}

/// Columns v_s,m of the encoder, written into a unitary.
fn assemble_unitary(
    n: usize,
    anc: &[usize],
    main: &[usize],
    column: impl Fn(usize, usize) -> Vec<C64>,
) -> ComplexMatrix {
    let d = 1 << n;
    let mut u = ComplexMatrix::zeros(d, d);
    for s in 0..1usize << anc.len() {
        for m in 0..1usize << main.len() {
            let col = layout_index(n, anc, main, s, m);
            for (r, v) in column(s, m).into_iter().enumerate() {
                u[(r, col)] = v;
            }
        }
    }
    u
}

fn apply_vec(p: &PauliString, v: &[C64]) -> Vec<C64> {
    p.apply_vec(v)
}

pub fn build_five_qubit() -> QecCode {
    let n = 5;
    let d = 1 << n;
    let a = amplitude();
    let word = |terms: &[(i8, &str)]| {
        let mut v = vec![C64::new(0.0, 0.0); d];
        for &(sign, bits) in terms {
            v[ket_from_bits(bits)] = C64::new(sign as f64 * a, 0.0);
        }
        v
    };
    let codewords = vec![word(&tables::FIVE_QUBIT_ZERO), word(&tables::FIVE_QUBIT_ONE)];
    let stabilizers: Vec<PauliString> = tables::FIVE_QUBIT_GENERATORS.iter().map(|s| ps(s)).collect();

    let mut by_syndrome: Vec<Option<PauliString>> = vec![None; 16];
    by_syndrome[0] = Some(PauliString::identity(n));
    for e in syndrome::weight_one_errors(n) {
        let s = syndrome_of(&e, &stabilizers);
        if by_syndrome[s].is_none() {
            by_syndrome[s] = Some(e);
        }
    }
    let errors: Vec<PauliString> = by_syndrome
        .into_iter()
        .map(|e| e.expect("perfect code: every syndrome has a weight <= 1 error"))
        .collect();
    let corrections: Vec<ComplexMatrix> = tables::FIVE_QUBIT_CORRECTIONS
        .iter()
        .map(|l| single_qubit_pauli(l))
        .collect();

    let anc = vec![0, 1, 3, 4];
    let main = vec![2];
    let encode_unitary = assemble_unitary(n, &anc, &main, |s, m_prime| {
        let p = &corrections[s];
        let mut logical = vec![C64::new(0.0, 0.0); d];
        for m in 0..2 {
            for (x, c) in logical.iter_mut().zip(&codewords[m]) {
                *x += p[(m, m_prime)] * c;
            }
        }
        apply_vec(&errors[s], &logical)
    });

    let kraus = (0..16)
        .map(|k| {
            let mut r = ComplexMatrix::zeros(d, d);
            for m in 0..2 {
                for mp in 0..2 {
                    r[(layout_index(n, &anc, &main, 0, m), layout_index(n, &anc, &main, k, mp))] =
                        corrections[k][(m, mp)];
                }
            }
            r
        })
        .collect();

    QecCode {
        kind: CodeKind::FiveQubit,
        n_physical: n,
        k_logical: 1,
        main_positions: main,
        ancilla_positions: anc,
        encode_unitary,
        codewords,
        stabilizers,
        recovery: Recovery::Kraus(kraus),
        mode: RecoveryMode::Mixing,
    }
}

/// Correction lists for one CSS half: index = 3-bit part of the syndrome.
fn css_part_lists(
    n: usize,
    detecting: &[PauliString],
    tabulated: &[(usize, Vec<PauliString>)],
    kind: Pauli,
) -> Vec<Vec<PauliString>> {
    let h = detecting.len();
    let mut lists: Vec<Vec<PauliString>> = vec![Vec::new(); 1 << h];
    lists[0] = vec![PauliString::identity(n)];
    for (part, cands) in tabulated {
        lists[*part] = cands.clone();
    }
    // parts no tabulated error produces: every minimum-weight representative
    let mut reps: Vec<Vec<PauliString>> = vec![Vec::new(); 1 << h];
    for mask in 1usize..1 << n {
        let paulis: Vec<Pauli> = (0..n)
            .map(|q| if mask & qubit_mask(q, n) != 0 { kind } else { Pauli::I })
            .collect();
        let p = PauliString::from_paulis(&paulis);
        let s = syndrome_of(&p, detecting);
        let best = reps[s].first().map_or(u32::MAX, |r| r.weight());
        if p.weight() < best {
            reps[s] = vec![p];
        } else if p.weight() == best {
            reps[s].push(p);
        }
    }
    for (part, list) in lists.iter_mut().enumerate() {
        if list.is_empty() {
            let mut r = reps[part].clone();
            r.sort_by_key(|p| std::cmp::Reverse(p.to_string()));
            *list = r;
        }
    }
    lists
}

fn build_css(
    kind: CodeKind,
    generators: &[&str],
    codewords: Vec<Vec<C64>>,
    table: &[(&str, Vec<&str>)],
    main: Vec<usize>,
) -> QecCode {
    let n = kind.n_physical();
    let gens: Vec<PauliString> = generators.iter().map(|s| ps(s)).collect();
    let h = gens.len() / 2;
    let mut x_rows = Vec::new();
    let mut z_rows = Vec::new();
    for (syn, cands) in table {
        let value = ket_from_bits(syn);
        let z_part = value >> h;
        let x_part = value & ((1 << h) - 1);
        let cands: Vec<PauliString> = cands.iter().map(|s| ps(s)).collect();
        if z_part == 0 {
            x_rows.push((x_part, cands));
        } else {
            z_rows.push((z_part, cands));
        }
    }
    let x_lists = css_part_lists(n, &gens[h..], &x_rows, Pauli::X);
    let z_lists = css_part_lists(n, &gens[..h], &z_rows, Pauli::Z);
    let entries: Vec<Vec<(f64, PauliString)>> = (0..1usize << gens.len())
        .map(|s| {
            let xl = &x_lists[s & ((1 << h) - 1)];
            let zl = &z_lists[s >> h];
            let w = 1.0 / (xl.len() * zl.len()) as f64;
            let mut out = Vec::new();
            for zc in zl {
                for xc in xl {
                    out.push((w, xc.mul_up_to_phase(zc)));
                }
            }
            // first candidate = first X candidate with first Z candidate
            out.sort_by_key(|(_, p)| {
                let xi = xl.iter().position(|c| c.x_mask() == p.x_mask()).unwrap_or(0);
                let zi = zl.iter().position(|c| c.z_mask() == p.z_mask()).unwrap_or(0);
                (xi + zi, xi)
            });
            out
        })
        .collect();

    let anc: Vec<usize> = (0..n).filter(|q| !main.contains(q)).collect();
    let encode_unitary = assemble_unitary(n, &anc, &main, |s, m| apply_vec(&entries[s][0].1, &codewords[m]));

    QecCode {
        kind,
        n_physical: n,
        k_logical: kind.k_logical(),
        main_positions: main,
        ancilla_positions: anc,
        encode_unitary,
        codewords,
        stabilizers: gens.clone(),
        recovery: Recovery::Table(CorrectionTable {
            n_generators: gens.len(),
            entries,
        }),
        mode: RecoveryMode::Mixing,
    }
}

pub fn build_steane() -> QecCode {
    let d = 1 << 7;
    let word = |kets: &[&str]| {
        let mut v = vec![C64::new(0.0, 0.0); d];
        for k in kets {
            v[ket_from_bits(k)] = C64::new(amplitude(), 0.0);
        }
        v
    };
    let table: Vec<(&str, Vec<&str>)> = tables::STEANE_TABLE.iter().map(|(s, c)| (*s, vec![*c])).collect();
    build_css(
        CodeKind::Steane,
        &tables::STEANE_GENERATORS,
        vec![word(&tables::STEANE_ZERO), word(&tables::STEANE_ONE)],
        &table,
        vec![0],
    )
}

pub fn build_toric_822() -> QecCode {
    let d = 1 << 8;
    let codewords = tables::TORIC_CODEWORDS
        .iter()
        .map(|kets| {
            let mut v = vec![C64::new(0.0, 0.0); d];
            for &k in kets {
                v[k] = C64::new(amplitude(), 0.0);
            }
            v
        })
        .collect();
    let table: Vec<(&str, Vec<&str>)> = tables::TORIC_TABLE.iter().map(|(s, c)| (*s, c.to_vec())).collect();
    build_css(
        CodeKind::Toric822,
        &tables::TORIC_GENERATORS,
        codewords,
        &table,
        vec![0, 1],
    )
}

impl QecCode {
    pub fn build(kind: CodeKind) -> Self {
        match kind {
            CodeKind::FiveQubit => build_five_qubit(),
            CodeKind::Steane => build_steane(),
            CodeKind::Toric822 => build_toric_822(),
        }
    }

    pub fn with_mode(mut self, mode: RecoveryMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn mode(&self) -> RecoveryMode {
        self.mode
    }

    pub fn n_physical(&self) -> usize {
        self.n_physical
    }

    pub fn k_logical(&self) -> usize {
        self.k_logical
    }

    pub fn main_positions(&self) -> &[usize] {
        &self.main_positions
    }

    pub fn ancilla_positions(&self) -> &[usize] {
        &self.ancilla_positions
    }

    pub fn encode_unitary(&self) -> &ComplexMatrix {
        &self.encode_unitary
    }

    /// Logical basis states |m_L⟩ in logical-register order.
    pub fn codewords(&self) -> &[Vec<C64>] {
        &self.codewords
    }

    pub fn stabilizer_generators(&self) -> &[PauliString] {
        &self.stabilizers
    }

    /// Decoded-frame Kraus operators (five-qubit code only).
    pub fn recovery_kraus(&self) -> Option<&[ComplexMatrix]> {
        match &self.recovery {
            Recovery::Kraus(k) => Some(k),
            Recovery::Table(_) => None,
        }
    }

    pub fn correction_table(&self) -> Option<&CorrectionTable> {
        match &self.recovery {
            Recovery::Table(t) => Some(t),
            Recovery::Kraus(_) => None,
        }
    }

    /// ‖U†U − I‖_max.
    pub fn unitarity_deviation(&self) -> f64 {
        let u = &self.encode_unitary;
        u.adjoint().matmul(u).max_abs_diff(&ComplexMatrix::identity(u.rows()))
    }

    /// ‖Σ K†K − I‖_max over the physical Kraus set of the recovery map
    /// (under the mixing interpretation of degenerate syndromes).
    pub fn kraus_completeness_deviation(&self) -> f64 {
        let d = 1 << self.n_physical;
        let mut acc = ComplexMatrix::zeros(d, d);
        match &self.recovery {
            Recovery::Kraus(ks) => {
                for k in ks {
                    acc += &k.adjoint().matmul(k);
                }
            }
            Recovery::Table(table) => {
                for (s, proj) in self.syndrome_projectors().into_iter().enumerate() {
                    for (w, c) in table.get(s) {
                        let k = c.left_mul(&proj);
                        acc.axpy(C64::new(*w, 0.0), &k.adjoint().matmul(&k));
                    }
                }
            }
        }
        acc.max_abs_diff(&ComplexMatrix::identity(d))
    }

    /// Π_s for every syndrome value of the stabilizer generators.
    pub fn syndrome_projectors(&self) -> Vec<ComplexMatrix> {
        let d = 1 << self.n_physical;
        let m = self.stabilizers.len();
        let mut out = vec![ComplexMatrix::zeros(d, d); 1 << m];
        let mut sink = |s: usize, block: ComplexMatrix| out[s] = block;
        split_by_generators(ComplexMatrix::identity(d), &self.stabilizers, 0, 0, &mut sink);
        out
    }

    fn block_qubits(&self, block: usize) -> Vec<usize> {
        (block * self.n_physical..(block + 1) * self.n_physical).collect()
    }

    fn check_blocks(&self, rho: &DensityMatrix, blocks: usize, logical: bool) -> Result<()> {
        let per = if logical { self.k_logical } else { self.n_physical };
        if blocks == 0 || rho.n_qubits() != per * blocks {
            return Err(Error::DimensionMismatch(format!(
                "{}-qubit state for {blocks} block(s) of {} ({} qubits each)",
                rho.n_qubits(),
                self.name(),
                per
            )));
        }
        Ok(())
    }

    /// Logical basis vector |a⟩_L for a register of `blocks` code blocks.
    pub fn logical_basis_vector(&self, blocks: usize, a: usize) -> Vec<C64> {
        let k = self.k_logical;
        let mut v = vec![C64::new(1.0, 0.0)];
        for b in 0..blocks {
            let digit = (a >> (k * (blocks - 1 - b))) & ((1 << k) - 1);
            let w = &self.codewords[digit];
            let mut next = Vec::with_capacity(v.len() * w.len());
            for x in &v {
                for y in w {
                    next.push(x * y);
                }
            }
            v = next;
        }
        v
    }

    pub fn encode(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.encode_blocks(rho, 1)
    }

    /// Independent encoding of each k-qubit slice of `rho` into its own block.
    pub fn encode_blocks(&self, rho: &DensityMatrix, blocks: usize) -> Result<DensityMatrix> {
        self.check_blocks(rho, blocks, true)?;
        let dl = rho.dim();
        let basis: Vec<Vec<C64>> = (0..dl).map(|a| self.logical_basis_vector(blocks, a)).collect();
        let dp = basis[0].len();
        let v = ComplexMatrix::from_fn(dp, dl, |r, c| basis[c][r]);
        let out = v.matmul(rho.matrix()).matmul(&v.adjoint());
        Ok(DensityMatrix::from_matrix_unchecked(out))
    }

    pub fn decode(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.decode_blocks(rho, 1)
    }

    /// Conjugates every block by U† and traces out the ancillas.
    pub fn decode_blocks(&self, rho: &DensityMatrix, blocks: usize) -> Result<DensityMatrix> {
        self.check_blocks(rho, blocks, false)?;
        let n = self.n_physical * blocks;
        let ud = self.encode_unitary.adjoint();
        let mut m = rho.matrix().clone();
        for b in 0..blocks {
            m = conjugate_on(&ud, &self.block_qubits(b), n, &m)?;
        }
        let keep: Vec<usize> = (0..blocks)
            .flat_map(|b| self.main_positions.iter().map(move |&q| b * self.n_physical + q))
            .collect();
        let reduced = partial_trace_matrix(&m, &keep, n).hermitian_part();
        Ok(DensityMatrix::from_matrix_unchecked(reduced))
    }

    pub fn recover(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.recover_blocks(rho, 1, None)
    }

    /// Recovery applied to each block in turn. `rng` is required in the
    /// stochastic mode and ignored otherwise.
    pub fn recover_blocks(
        &self,
        rho: &DensityMatrix,
        blocks: usize,
        mut rng: Option<&mut dyn RngCore>,
    ) -> Result<DensityMatrix> {
        self.check_blocks(rho, blocks, false)?;
        let n = self.n_physical * blocks;
        let mut m = rho.matrix().clone();
        for b in 0..blocks {
            let qubits = self.block_qubits(b);
            m = match &self.recovery {
                Recovery::Kraus(ks) => {
                    let ud = self.encode_unitary.adjoint();
                    let dec = conjugate_on(&ud, &qubits, n, &m)?;
                    let mut acc = ComplexMatrix::zeros(m.rows(), m.cols());
                    for k in ks {
                        acc += &conjugate_on(k, &qubits, n, &dec)?;
                    }
                    conjugate_on(&self.encode_unitary, &qubits, n, &acc)?
                }
                Recovery::Table(table) => {
                    let offset = b * self.n_physical;
                    let gens = self
                        .stabilizers
                        .iter()
                        .map(|g| g.embed(n, offset))
                        .collect::<Result<Vec<_>>>()?;
                    let mut acc = ComplexMatrix::zeros(m.rows(), m.cols());
                    let mut failure = None;
                    let mode = self.mode;
                    let mut sink = |s: usize, block: ComplexMatrix| {
                        let cands = table.get(s);
                        let chosen: Vec<(f64, PauliString)> = match mode {
                            RecoveryMode::Mixing => cands.to_vec(),
                            RecoveryMode::First => vec![(1.0, cands[0].1)],
                            RecoveryMode::Stochastic => match rng.as_deref_mut() {
                                Some(r) => vec![(1.0, sample(cands, r))],
                                None => {
                                    failure = Some(Error::Config(
                                        "stochastic recovery needs a random source".into(),
                                    ));
                                    return;
                                }
                            },
                        };
                        for (w, c) in chosen {
                            let c = c.embed(n, offset).expect("correction fits its block");
                            acc.axpy(C64::new(w, 0.0), &c.conjugate(&block));
                        }
                    };
                    split_by_generators(m, &gens, 0, 0, &mut sink);
                    if let Some(e) = failure {
                        return Err(e);
                    }
                    acc
                }
            };
        }
        Ok(DensityMatrix::from_matrix_unchecked(m.hermitian_part()))
    }

    /// tr(P_code ρ) for a single block.
    pub fn code_space_weight(&self, rho: &DensityMatrix) -> f64 {
        self.codewords
            .iter()
            .map(|w| crate::state::pure_overlap(w, rho.matrix()))
            .sum()
    }

    /// The physical state ρ_L of |ψ⟩⟨ψ| as a vector Σ ψ_m |m_L⟩.
    pub fn encode_vector(&self, psi: &[C64]) -> Vec<C64> {
        let d = 1 << self.n_physical;
        let mut v = vec![C64::new(0.0, 0.0); d];
        for (amp, w) in psi.iter().zip(&self.codewords) {
            for (x, y) in v.iter_mut().zip(w) {
                *x += amp * y;
            }
        }
        v
    }
}

fn sample(cands: &[(f64, PauliString)], rng: &mut dyn RngCore) -> PauliString {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (w, p) in cands {
        acc += w;
        if u < acc {
            return *p;
        }
    }
    cands.last().expect("non-empty candidate list").1
}

/// Depth-first split of `m` into Π_s m Π_s over all syndromes s; empty
/// branches are pruned.
fn split_by_generators(
    m: ComplexMatrix,
    gens: &[PauliString],
    level: usize,
    syndrome: usize,
    sink: &mut dyn FnMut(usize, ComplexMatrix),
) {
    if level == gens.len() {
        sink(syndrome, m);
        return;
    }
    let g = &gens[level];
    let gm = g.left_mul(&m);
    let mg = g.right_mul_adjoint(&m);
    let gmg = g.conjugate(&m);
    let quarter = C64::new(0.25, 0.0);
    let mut plus = m.clone();
    plus += &gm;
    plus += &mg;
    plus += &gmg;
    let plus = plus.scale(quarter);
    let mut minus = m;
    minus.axpy(C64::new(-1.0, 0.0), &gm);
    minus.axpy(C64::new(-1.0, 0.0), &mg);
    minus += &gmg;
    let minus = minus.scale(quarter);
    let bit = 1 << (gens.len() - 1 - level);
    drop((gm, mg, gmg));
    if plus.max_abs() > 1e-15 {
        split_by_generators(plus, gens, level + 1, syndrome, sink);
    }
    if minus.max_abs() > 1e-15 {
        split_by_generators(minus, gens, level + 1, syndrome | bit, sink);
    }
}

/// Two-block register helper: |ψ⟩_L ⊗ |φ⟩_L for product logical inputs.
pub fn kron_states(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::from_matrix_unchecked(kron(a.matrix(), b.matrix()))
}

#[cfg(test)]
mod tests;
