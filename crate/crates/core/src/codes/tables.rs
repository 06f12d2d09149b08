//! Reference data for the three codes: codewords, stabilizer generators and
//! tabulated corrections. Syndromes are written G₁G₂…G_m, G₁ first.

/// Signed basis kets of |0_L⟩ for the five-qubit code (amplitude ±1/(2√2)).
pub const FIVE_QUBIT_ZERO: [(i8, &str); 8] = [
    (-1, "00000"),
    (1, "00110"),
    (1, "01001"),
    (1, "01111"),
    (-1, "10011"),
    (1, "10101"),
    (1, "11010"),
    (1, "11100"),
];

/// Signed basis kets of |1_L⟩ for the five-qubit code.
pub const FIVE_QUBIT_ONE: [(i8, &str); 8] = [
    (-1, "11111"),
    (1, "11001"),
    (1, "10110"),
    (1, "10000"),
    (1, "01100"),
    (-1, "01010"),
    (-1, "00101"),
    (-1, "00011"),
];

/// Independent generators of the five-qubit stabilizer group fixing the
/// codewords above. Their syndrome bits, in this order, label the ancilla
/// register (qubits 1, 2, 4, 5) of the decoded frame.
pub const FIVE_QUBIT_GENERATORS: [&str; 4] = ["IXXYY", "IZZZZ", "XIYZY", "ZYZIY"];

/// Main-qubit correction of the recovery Kraus operator R_k, where k is the
/// 4-bit ancilla pattern s₁s₂s₄s₅.
pub const FIVE_QUBIT_CORRECTIONS: [&str; 16] = [
    "I", "Z", "I", "I", "I", "Z", "X", "X", "I", "X", "Z", "X", "Z", "XZ", "X", "Z",
];

pub const STEANE_GENERATORS: [&str; 6] = [
    "IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ",
];

pub const STEANE_ZERO: [&str; 8] = [
    "0000000", "1010101", "0110011", "1100110", "0001111", "1011010", "0111100", "1101001",
];

pub const STEANE_ONE: [&str; 8] = [
    "1111111", "0101010", "1001100", "0011001", "1110000", "0100101", "1000011", "0010110",
];

/// Syndrome → correction rows of the Steane decoding table.
pub const STEANE_TABLE: [(&str, &str); 14] = [
    ("000001", "XIIIIII"),
    ("000010", "IXIIIII"),
    ("000011", "IIXIIII"),
    ("000100", "IIIXIII"),
    ("000101", "IIIIXII"),
    ("000110", "IIIIIXI"),
    ("000111", "IIIIIIX"),
    ("001000", "ZIIIIII"),
    ("010000", "IZIIIII"),
    ("011000", "IIZIIII"),
    ("100000", "IIIZIII"),
    ("101000", "IIIIZII"),
    ("110000", "IIIIIZI"),
    ("111000", "IIIIIIZ"),
];

pub const TORIC_GENERATORS: [&str; 6] = [
    "XXXIIIXI", "XXIXIIIX", "IIXIXXXI", "ZIZZZIII", "IZZZIZII", "ZIIIZIZZ",
];

/// Integer-labelled basis kets of |00⟩_L, |01⟩_L, |10⟩_L, |11⟩_L
/// (qubit 0 is the most significant bit).
pub const TORIC_CODEWORDS: [[usize; 8]; 4] = [
    [0, 29, 46, 51, 204, 209, 226, 255],
    [68, 89, 106, 119, 136, 149, 166, 187],
    [3, 30, 45, 48, 207, 210, 225, 252],
    [71, 90, 105, 116, 139, 150, 165, 184],
];

/// Logical operators Z₁, X₁, Z₂, X₂ of the toric code.
pub const TORIC_LOGICALS: [&str; 4] = ["ZZIIIIII", "XIIIXIII", "IIZIIIZI", "IIXXIIII"];

/// Syndrome → two equally likely corrections of the toric decoding table.
pub const TORIC_TABLE: [(&str, [&str; 2]); 8] = [
    ("000001", ["IIIIIIXI", "IIIIIIIX"]),
    ("000010", ["IXIIIIII", "IIIIIXII"]),
    ("000101", ["XIIIIIII", "IIIIXIII"]),
    ("000110", ["IIXIIIII", "IIIXIIII"]),
    ("001000", ["IIIIZIII", "IIIIIZII"]),
    ("010000", ["IIIZIIII", "IIIIIIIZ"]),
    ("101000", ["IIZIIIII", "IIIIIIZI"]),
    ("110000", ["ZIIIIIII", "IZIIIIII"]),
];
