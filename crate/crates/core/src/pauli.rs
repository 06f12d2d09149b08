//! Pauli strings stored as X/Z bit masks.
//!
//! A string P acts on a computational basis ket as P|x⟩ = φ(x)|x ⊕ f⟩ where
//! f is the X mask and φ(x) = i^{#Y}·(−1)^{|x ∧ z|}. Conjugating a dense
//! matrix by P is therefore a permutation with phases, which keeps syndrome
//! projections cheap even on 256-dimensional registers.

use std::fmt;
use std::str::FromStr;

use crate::linalg::{qubit_mask, ComplexMatrix};
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: usize,
    z: usize,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self { n, x: 0, z: 0 }
    }

    /// `p` on qubit `q`, identity elsewhere.
    pub fn single(n: usize, q: usize, p: Pauli) -> Result<Self> {
        if q >= n {
            return Err(Error::QubitOutOfRange { index: q, n });
        }
        let (xb, zb) = p.bits();
        let m = qubit_mask(q, n);
        Ok(Self {
            n,
            x: if xb { m } else { 0 },
            z: if zb { m } else { 0 },
        })
    }

    pub fn from_paulis(ps: &[Pauli]) -> Self {
        let n = ps.len();
        let mut out = Self::identity(n);
        for (q, &p) in ps.iter().enumerate() {
            let (xb, zb) = p.bits();
            let m = qubit_mask(q, n);
            if xb {
                out.x |= m;
            }
            if zb {
                out.z |= m;
            }
        }
        out
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> usize {
        self.x
    }

    pub fn z_mask(&self) -> usize {
        self.z
    }

    pub fn get(&self, q: usize) -> Pauli {
        let m = qubit_mask(q, self.n);
        match (self.x & m != 0, self.z & m != 0) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones().is_multiple_of(2)
    }

    /// Product up to a global phase.
    pub fn mul_up_to_phase(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        }
    }

    /// This string placed on qubits offset..offset+n of an `n_total` register.
    pub fn embed(&self, n_total: usize, offset: usize) -> Result<Self> {
        if offset + self.n > n_total {
            return Err(Error::QubitOutOfRange {
                index: offset + self.n - 1,
                n: n_total,
            });
        }
        let shift = n_total - offset - self.n;
        Ok(Self {
            n: n_total,
            x: self.x << shift,
            z: self.z << shift,
        })
    }

    /// φ(x) in P|x⟩ = φ(x)|x ⊕ f⟩.
    #[inline]
    pub fn phase_on(&self, ket: usize) -> C64 {
        let ny = (self.x & self.z).count_ones();
        let sign = if (ket & self.z).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        let ipow = match ny % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
        ipow * sign
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let d = 1usize << self.n;
        let mut m = ComplexMatrix::zeros(d, d);
        for ket in 0..d {
            m[(ket ^ self.x, ket)] = self.phase_on(ket);
        }
        m
    }

    /// P·v for a state vector.
    pub fn apply_vec(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        for (ket, &a) in v.iter().enumerate() {
            out[ket ^ self.x] = self.phase_on(ket) * a;
        }
        out
    }

    /// P·M.
    pub fn left_mul(&self, m: &ComplexMatrix) -> ComplexMatrix {
        self.check_dim(m);
        let cols = m.cols();
        ComplexMatrix::from_fn(m.rows(), cols, |r, c| {
            let src = r ^ self.x;
            self.phase_on(src) * m[(src, c)]
        })
    }

    /// M·P†.
    pub fn right_mul_adjoint(&self, m: &ComplexMatrix) -> ComplexMatrix {
        self.check_dim(m);
        ComplexMatrix::from_fn(m.rows(), m.cols(), |r, c| {
            let src = c ^ self.x;
            self.phase_on(src).conj() * m[(r, src)]
        })
    }

    /// P·M·P†.
    pub fn conjugate(&self, m: &ComplexMatrix) -> ComplexMatrix {
        self.check_dim(m);
        if self.is_identity() {
            return m.clone();
        }
        ComplexMatrix::from_fn(m.rows(), m.cols(), |r, c| {
            let (sr, sc) = (r ^ self.x, c ^ self.x);
            let p = self.phase_on(sr) * self.phase_on(sc).conj();
            p * m[(sr, sc)]
        })
    }

    fn check_dim(&self, m: &ComplexMatrix) {
        assert_eq!(m.rows(), 1 << self.n, "Pauli string on {} qubits", self.n);
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            write!(f, "{}", self.get(q).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let ps = s
            .chars()
            .map(|c| {
                Pauli::from_char(c)
                    .ok_or_else(|| Error::param("pauli", format!("unexpected character {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if ps.is_empty() || ps.len() > 20 {
            return Err(Error::param("pauli", format!("length {} out of range", ps.len())));
        }
        Ok(Self::from_paulis(&ps))
    }
}

/// Parses a string that is known to be valid (used for built-in tables).
pub(crate) fn ps(s: &str) -> PauliString {
    s.parse().expect("built-in Pauli string")
}
