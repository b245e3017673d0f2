use ladderlab::models::{fixtures, get_model, ModelName, ModelSpec, Params};
use ladderlab::operator_engine::{expected_ladder_coefficient, interior_grid, Operator};
use ladderlab::shape_invariance::*;
use proptest::prelude::*;

fn discrete() -> Vec<ModelSpec> {
    fixtures::standard()
        .into_iter()
        .filter(|m| m.kind().is_discrete())
        .chain([
            get_model(ModelName::Wilson, &Params::a(&[0.6, 0.9, 1.2, 1.4])).unwrap(),
            get_model(ModelName::AskeyWilson, &Params::aq(&[0.3, 0.4, -0.2, 0.5], 0.9)).unwrap(),
            get_model(ModelName::AskeyWilson, &Params::aq(&[0.5; 4], 0.5)).unwrap(),
        ])
        .collect()
}

#[test]
fn shift_operators_all_discrete() {
    for m in discrete() {
        let g = interior_grid(&m, 16);
        for n in 0..=8 {
            if n > 0 {
                let r = forward_shift_check(&m, n, &g).unwrap();
                assert!(r <= 1e-10, "{} F n={n}: {r:e}", m.name());
            }
            let r = backward_shift_check(&m, n, &g).unwrap();
            assert!(r <= 1e-10, "{} B n={n}: {r:e}", m.name());
            let r = hamiltonian_factorization_check(&m, n, &g).unwrap();
            assert!(r <= 1e-9, "{} BF n={n}: {r:e}", m.name());
        }
    }
}

#[test]
fn energy_factorization_all_discrete() {
    for m in discrete() {
        assert!(energy_factorization_check(&m, 20).unwrap() <= 1e-12, "{}", m.name());
    }
}

#[test]
fn ground_shift_all_discrete() {
    for m in discrete() {
        let r = ground_shift_identity_check(&m, &interior_grid(&m, 16)).unwrap();
        assert!(r <= 1e-9, "{}: {r:e}", m.name());
    }
}

#[test]
fn ordinary_models_have_no_shape_data() {
    let m = get_model(ModelName::Harmonic, &Params::none()).unwrap();
    assert!(shape_data(&m).is_err());
    assert!(compensator_check(&get_model(ModelName::Wilson, &Params::a(&[1.0; 4])).unwrap(), 0, &[1.0]).is_err());
}

#[test]
fn prepotential_all_ordinary() {
    for m in fixtures::standard().into_iter().filter(|m| !m.kind().is_discrete()) {
        let r = prepotential_check(&m, &interior_grid(&m, 24)).unwrap();
        assert!(r <= 1e-10, "{}: {r:e}", m.name());
    }
}

fn compensated(m: &ModelSpec) {
    let g = interior_grid(m, 12);
    for n in 0..=6 {
        let (a, b) = compensator_check(m, n, &g).unwrap();
        assert!(a <= 1e-10 && b <= 1e-10, "{} n={n}: {a:e} {b:e}", m.name());
        let (down, up) = factorized_ladder_coefficients(m, n).unwrap();
        let d = expected_ladder_coefficient(m, Operator::Minus, n);
        let u = expected_ladder_coefficient(m, Operator::Plus, n);
        assert!((down - d).abs() <= 1e-10 * d.abs().max(1.0), "{} n={n}: {down} {d}", m.name());
        assert!((up - u).abs() <= 1e-10 * u.abs().max(1.0), "{} n={n}: {up} {u}", m.name());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn compensator_random_mp(a in 0.2f64..3.0) {
        compensated(&get_model(ModelName::MeixnerPollaczek, &Params::a(&[a])).unwrap());
    }

    #[test]
    fn compensator_random_dual_hahn(a in proptest::array::uniform3(0.2f64..2.5)) {
        compensated(&get_model(ModelName::ContinuousDualHahn, &Params::a(&a)).unwrap());
    }

    #[test]
    fn shifts_random_wilson(a in proptest::array::uniform4(0.2f64..2.5), n in 1usize..8) {
        let m = get_model(ModelName::Wilson, &Params::a(&a)).unwrap();
        let g = interior_grid(&m, 10);
        prop_assert!(forward_shift_check(&m, n, &g).unwrap() <= 1e-10);
        prop_assert!(backward_shift_check(&m, n, &g).unwrap() <= 1e-10);
        prop_assert!(energy_factorization_check(&m, 20).unwrap() <= 1e-12);
        prop_assert!(ground_shift_identity_check(&m, &g).unwrap() <= 1e-9);
    }

    #[test]
    fn shifts_random_askey_wilson(a in proptest::array::uniform4(-0.8f64..0.8), q in 0.2f64..0.95, n in 1usize..8) {
        prop_assume!(a.iter().product::<f64>() < q);
        let m = get_model(ModelName::AskeyWilson, &Params::aq(&a, q)).unwrap();
        let g = interior_grid(&m, 10);
        prop_assert!(forward_shift_check(&m, n, &g).unwrap() <= 1e-10);
        prop_assert!(backward_shift_check(&m, n, &g).unwrap() <= 1e-10);
        prop_assert!(energy_factorization_check(&m, 20).unwrap() <= 1e-12);
    }
}
