use openqec::bath::BathSpec;
use openqec::codes::{CodeKind, QecCode};
use openqec::dynamics::{me_rhs, Frame, SystemModel};
use openqec::experiments::werner_state;
use openqec::linalg::kron;
use openqec::pauli::PauliString;
use openqec::state::fidelity;
use openqec::{ComplexMatrix, DensityMatrix, C64};
use proptest::prelude::*;

fn matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n)
        .prop_map(move |v| ComplexMatrix::new(n, n, v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap())
}

/// G G† / tr(G G†) for a random square G.
fn density(n_qubits: usize) -> impl Strategy<Value = DensityMatrix> {
    matrix(1 << n_qubits).prop_map(|g| {
        let m = g.matmul(&g.adjoint());
        let tr = m.trace().re;
        DensityMatrix::new(m.scale(C64::new(1.0 / tr, 0.0)).hermitian_part()).unwrap()
    })
}

fn pauli(n: usize) -> impl Strategy<Value = PauliString> {
    proptest::collection::vec(prop_oneof!["I", "X", "Y", "Z"], n).prop_map(|v| v.concat().parse().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn kron_is_associative(a in matrix(2), b in matrix(2), c in matrix(2)) {
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
    }

    #[test]
    fn fidelity_is_symmetric_and_bounded(a in density(2), b in density(2)) {
        let ab = fidelity(&a, &b).unwrap();
        let ba = fidelity(&b, &a).unwrap();
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!((ab - ba).abs() < 1e-8);
        prop_assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rhs_is_traceless_and_hermitian(rho in density(3), t in 0.0..50.0f64, collective in any::<bool>()) {
        let bath = BathSpec::new(0.7, 0.1).unwrap();
        let model = if collective {
            SystemModel::collective(3, bath)
        } else {
            SystemModel::local(3, bath)
        }
        .unwrap()
        .with_frame(Frame::Rotating);
        let d = me_rhs(&rho, t, &model).unwrap();
        prop_assert!(d.trace().norm() < 1e-14);
        prop_assert!(d.hermiticity_deviation() < 1e-14);
    }

    #[test]
    fn recovery_is_trace_preserving(rho in density(5), e in pauli(5)) {
        let code = QecCode::build(CodeKind::FiveQubit);
        let hit = DensityMatrix::new(e.conjugate(rho.matrix()).hermitian_part()).unwrap();
        let out = code.recover(&hit).unwrap();
        prop_assert!((out.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(out.eigenvalues().unwrap()[0] > -1e-12);
    }

    #[test]
    fn steane_recovery_is_trace_preserving(e in pauli(7), seed in 0u64..1000) {
        let code = QecCode::build(CodeKind::Steane);
        let k = (seed % 2) as usize;
        let rho = code.encode(&DensityMatrix::basis(1, k).unwrap()).unwrap();
        let hit = DensityMatrix::new(e.conjugate(rho.matrix())).unwrap();
        let out = code.recover(&hit).unwrap();
        prop_assert!((out.trace().re - 1.0).abs() < 1e-12);
        prop_assert!((code.code_space_weight(&out) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn werner_states_are_valid(p in 0.0..=1.0f64) {
        let w = werner_state(p).unwrap();
        let ev = w.eigenvalues().unwrap();
        prop_assert!((ev[3] - (1.0 + 3.0 * p) / 4.0).abs() < 1e-12);
        prop_assert!((ev[0] - (1.0 - p) / 4.0).abs() < 1e-12);
    }
}
