use std::collections::BTreeMap;

use crate::pauli::{Pauli, PauliString};
use crate::{Error, Result, C64};

use super::QecCode;

/// Syndrome bits of `p` against `gens`: bit m−1−i is set when p anticommutes
/// with generator i.
pub fn syndrome_of(p: &PauliString, gens: &[PauliString]) -> usize {
    let m = gens.len();
    gens.iter()
        .enumerate()
        .filter(|(_, g)| !p.commutes_with(g))
        .map(|(i, _)| 1 << (m - 1 - i))
        .sum()
}

pub fn syndrome_string(value: usize, m: usize) -> String {
    (0..m)
        .map(|i| if value & (1 << (m - 1 - i)) != 0 { '1' } else { '0' })
        .collect()
}

/// Every weight-1 Pauli, ordered by qubit and then X, Y, Z.
pub(crate) fn weight_one_errors(n: usize) -> Vec<PauliString> {
    (0..n)
        .flat_map(|q| {
            [Pauli::X, Pauli::Y, Pauli::Z]
                .into_iter()
                .map(move |p| PauliString::single(n, q, p).expect("qubit in range"))
        })
        .collect()
}

/// Measured syndrome → the errors that produce it.
#[derive(Clone, Debug)]
pub struct SyndromeTable {
    pub n_generators: usize,
    pub entries: BTreeMap<String, Vec<PauliString>>,
}

impl SyndromeTable {
    pub fn errors_for(&self, syndrome: &str) -> Option<&[PauliString]> {
        self.entries.get(syndrome).map(Vec::as_slice)
    }

    pub fn distinct_syndromes(&self) -> usize {
        self.entries.len()
    }
}

fn expectation(v: &[C64], g: &PauliString) -> C64 {
    let gv = g.apply_vec(v);
    v.iter().zip(&gv).map(|(a, b)| a.conj() * b).sum()
}

/// Builds the syndrome table by evaluating ⟨E c|G|E c⟩ for every generator G,
/// every codeword c and every error E in {I} ∪ weight-1 Paulis.
///
/// Each expectation must be ±1 and agree across codewords; anything else is an
/// `InconsistentSyndrome` error naming the offending Pauli.
pub fn derive_syndrome_table(code: &QecCode) -> Result<SyndromeTable> {
    let n = code.n_physical();
    let gens = code.stabilizer_generators();
    let m = gens.len();
    let mut entries: BTreeMap<String, Vec<PauliString>> = BTreeMap::new();
    let errors = std::iter::once(PauliString::identity(n)).chain(weight_one_errors(n));
    for e in errors {
        let mut value: Option<usize> = None;
        for c in code.codewords() {
            let v = e.apply_vec(c);
            let mut s = 0;
            for (i, g) in gens.iter().enumerate() {
                let ev = expectation(&v, g);
                if (ev - C64::new(1.0, 0.0)).norm() < 1e-9 {
                } else if (ev + C64::new(1.0, 0.0)).norm() < 1e-9 {
                    s |= 1 << (m - 1 - i);
                } else {
                    return Err(Error::InconsistentSyndrome {
                        error: e.to_string(),
                        reason: format!("generator {g} has expectation {ev} on a corrupted codeword"),
                    });
                }
            }
            match value {
                None => value = Some(s),
                Some(prev) if prev != s => {
                    return Err(Error::InconsistentSyndrome {
                        error: e.to_string(),
                        reason: format!(
                            "syndromes {} and {} on different codewords",
                            syndrome_string(prev, m),
                            syndrome_string(s, m)
                        ),
                    })
                }
                Some(_) => {}
            }
        }
        let s = value.expect("codes have at least one codeword");
        entries.entry(syndrome_string(s, m)).or_default().push(e);
    }
    Ok(SyndromeTable {
        n_generators: m,
        entries,
    })
}
