use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::state::fidelity;

fn plus() -> Vec<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![C64::new(s, 0.0), C64::new(s, 0.0)]
}

#[test]
fn encoders_are_unitary_and_codewords_are_stabilized() {
    for kind in CodeKind::ALL {
        let code = QecCode::build(kind);
        assert!(code.unitarity_deviation() < 1e-12, "{kind}");
        for g in code.stabilizer_generators() {
            for w in code.codewords() {
                let gw = g.apply_vec(w);
                let diff: f64 = gw.iter().zip(w).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                assert!(diff < 1e-12, "{kind}: {g} does not fix a codeword");
            }
        }
    }
}

#[test]
fn recovery_maps_are_complete() {
    for kind in [CodeKind::FiveQubit, CodeKind::Steane] {
        let d = QecCode::build(kind).kraus_completeness_deviation();
        assert!(d < 1e-12, "{kind}: {d}");
    }
}

#[test]
fn encode_decode_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for kind in CodeKind::ALL {
        let code = QecCode::build(kind);
        let psi = random_logical_state(code.k_logical(), &mut rng);
        let rho = DensityMatrix::pure(&psi).unwrap();
        let back = code.decode(&code.encode(&rho).unwrap()).unwrap();
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-12, "{kind}");
        let enc = code.encode(&rho).unwrap();
        assert!((code.code_space_weight(&enc) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn steane_corrects_z_on_qubit_four() {
    let code = build_steane();
    let (_, f) = correction_round_trip(&code, &ps("IIIZIII"), &plus()).unwrap();
    assert!((f - 1.0).abs() < 1e-9, "{f}");
}

#[test]
fn steane_corrects_y_errors_by_composition() {
    let code = build_steane();
    for q in 0..7 {
        let e = PauliString::single(7, q, Pauli::Y).unwrap();
        let (_, f) = correction_round_trip(&code, &e, &plus()).unwrap();
        assert!((f - 1.0).abs() < 1e-9, "{e}: {f}");
    }
}

#[test]
fn five_qubit_round_trip_through_every_weight_one_error() {
    let code = build_five_qubit();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for e in syndrome::weight_one_errors(5) {
        let psi = random_logical_state(1, &mut rng);
        let (_, f) = correction_round_trip(&code, &e, &psi).unwrap();
        assert!((f - 1.0).abs() < 1e-9, "{e}: {f}");
    }
}

#[test]
fn toric_table_has_two_candidates_and_mixing_weights() {
    let code = build_toric_822();
    let table = code.correction_table().unwrap();
    for (syn, cands) in tables::TORIC_TABLE {
        let s = usize::from_str_radix(syn, 2).unwrap();
        let row = table.get(s);
        assert_eq!(row.len(), 2, "{syn}");
        assert_eq!(row[0].1, ps(cands[0]));
        assert_eq!(row[1].1, ps(cands[1]));
        assert!(row.iter().all(|(w, _)| (*w - 0.5).abs() < 1e-15));
    }
}

#[test]
fn toric_second_candidate_acts_logically_under_first_mode() {
    let code = build_toric_822().with_mode(RecoveryMode::First);
    let psi = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    let mut any_logical = false;
    for (_, cands) in tables::TORIC_TABLE {
        let (fixed, f) = correction_round_trip(&code, &ps(cands[1]), &psi).unwrap();
        assert!((code.code_space_weight(&fixed) - 1.0).abs() < 1e-9);
        any_logical |= f < 1.0 - 1e-6;
    }
    assert!(any_logical);
}

#[test]
fn stochastic_mode_needs_rng_and_is_seeded() {
    let code = build_toric_822().with_mode(RecoveryMode::Stochastic);
    let psi = vec![C64::new(0.5, 0.0); 4];
    let rho = code.encode(&DensityMatrix::pure(&psi).unwrap()).unwrap();
    let hit = DensityMatrix::from_matrix_unchecked(ps("IIIIIIXI").conjugate(rho.matrix()));
    assert!(code.recover(&hit).is_err());
    let run = |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        code.recover_blocks(&hit, 1, Some(&mut rng)).unwrap()
    };
    assert!(run(5).matrix().max_abs_diff(run(5).matrix()) < 1e-15);
}

#[test]
fn blockwise_matches_single_block_on_products() {
    let code = build_five_qubit();
    let a = DensityMatrix::pure(&plus()).unwrap();
    let b = DensityMatrix::basis(1, 1).unwrap();
    let ab = kron_states(&a, &b);
    let enc = code.encode_blocks(&ab, 2).unwrap();
    let want = kron_states(&code.encode(&a).unwrap(), &code.encode(&b).unwrap());
    assert!(enc.matrix().max_abs_diff(want.matrix()) < 1e-12);

    let e = ps("IIXIIIIIIZ");
    let hit = DensityMatrix::from_matrix_unchecked(e.conjugate(enc.matrix()));
    let fixed = code.recover_blocks(&hit, 2, None).unwrap();
    let out = code.decode_blocks(&fixed, 2).unwrap();
    assert!((fidelity(&ab, &out).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn wrong_dimensions_are_rejected() {
    let code = build_steane();
    let two = DensityMatrix::basis(2, 0).unwrap();
    assert!(matches!(code.encode(&two), Err(Error::DimensionMismatch(_))));
    assert!(matches!(code.decode(&two), Err(Error::DimensionMismatch(_))));
}

#[test]
fn syndrome_table_matches_tabulated_rows() {
    let report = validate_codes(7).unwrap();
    assert!(report.passed(), "{report}");
    let counts: Vec<_> = report.codes.iter().map(|r| (r.verified_pairs, r.table_rows, r.corrected_errors)).collect();
    assert_eq!(counts, vec![(16, 16, 16), (14, 14, 21), (16, 8, 8)]);
}

#[test]
fn code_names_parse() {
    for kind in CodeKind::ALL {
        assert_eq!(kind.name().parse::<CodeKind>().unwrap(), kind);
    }
    assert!("surface".parse::<CodeKind>().is_err());
}
