use ladderlab::matrix_heisenberg::*;
use ladderlab::models::{fixtures, get_model, ModelName, ModelSpec, Params};
use ladderlab::tolerances::{CLOSURE, NUMBER_OPERATOR, SPECTRUM_REL};
use proptest::prelude::*;

/// Fixtures with at least 41 levels.
fn deep_fixtures() -> Vec<ModelSpec> {
    fixtures::standard()
        .into_iter()
        .map(|m| match m.name() {
            ModelName::Soliton => get_model(ModelName::Soliton, &Params::g(40.3)).unwrap(),
            ModelName::Morse => get_model(ModelName::Morse, &Params::morse(40.3, 1.0)).unwrap(),
            _ => m,
        })
        .collect()
}

#[test]
fn closure_at_dim_40() {
    for m in deep_fixtures() {
        let r = check_closure(&m, 40).unwrap();
        assert!(r <= CLOSURE, "{}: {r:e}", m.name());
    }
    // the geometric spectrum at q = 1/2 reaches E ~ 1e11 by level 39
    let aw = get_model(ModelName::AskeyWilson, &Params::aq(&[0.5; 4], 0.5)).unwrap();
    assert!(check_closure(&aw, 40).unwrap() <= CLOSURE);
}

#[test]
fn closure_flat_in_dim() {
    for m in deep_fixtures() {
        let r: Vec<f64> = [10, 20, 30]
            .iter()
            .map(|&d| check_closure(&m, d).unwrap())
            .collect();
        assert!(r.iter().all(|&v| v <= CLOSURE), "{} {r:?}", m.name());
    }
}

#[test]
fn eta_matrices_symmetric() {
    for m in deep_fixtures() {
        let t = build_eta_matrix(&m, 30).unwrap();
        assert!(t.asymmetry() <= 1e-6, "{}", m.name());
    }
}

#[test]
fn iterated_spectrum_matches_closed_form() {
    for m in deep_fixtures() {
        for row in spectrum_comparison(&m, 30).unwrap() {
            assert!(
                row.abs_diff <= SPECTRUM_REL * row.closed.abs().max(1.0),
                "{} {row:?}",
                m.name()
            );
        }
    }
    // finite models stop at the last bound state
    let m = get_model(ModelName::Soliton, &Params::g(4.5)).unwrap();
    assert_eq!(heisenberg_pauli_spectrum(&m, 30).unwrap().energies.len(), 5);
}

#[test]
fn evolution_uniform_in_time() {
    for m in deep_fixtures() {
        for t in [0.1, 1.0, 10.0] {
            let r = heisenberg_evolution_check(&m, 40, t).unwrap();
            assert!(r <= CLOSURE, "{} t={t}: {r:e}", m.name());
        }
        assert!(heisenberg_evolution_check(&m, 20, 0.0).unwrap() <= 1e-12);
    }
}

#[test]
fn normalized_ladders_factorize_h() {
    for m in deep_fixtures() {
        let r = normalized_ladder_residual(&m, 30).unwrap();
        assert!(r <= 1e-10, "{}: {r:e}", m.name());
    }
}

#[test]
fn number_operators() {
    for m in [
        get_model(ModelName::Wilson, &Params::a(&[0.6, 0.9, 1.2, 1.4])).unwrap(),
        get_model(ModelName::ContinuousHahn, &Params::a(&[0.7, 1.2])).unwrap(),
        get_model(ModelName::PoschlTeller, &Params::gh(1.4, 2.1)).unwrap(),
        get_model(ModelName::Morse, &Params::morse(20.3, 1.0)).unwrap(),
        get_model(ModelName::RadialOscillator, &Params::g(1.7)).unwrap(),
    ] {
        assert!(
            number_operator_residual(&m, 30).unwrap() <= NUMBER_OPERATOR,
            "{}",
            m.name()
        );
    }
    let w = get_model(ModelName::Wilson, &Params::a(&[1.0; 4])).unwrap();
    assert!(matches!(
        NumberOperator::of(&w),
        NumberOperator::Quadratic { .. }
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn closure_random_wilson(a in proptest::array::uniform4(0.2f64..3.0)) {
        let m = get_model(ModelName::Wilson, &Params::a(&a)).unwrap();
        prop_assert!(check_closure(&m, 12).unwrap() <= CLOSURE);
    }

    #[test]
    fn spectrum_random_askey_wilson(a in proptest::array::uniform4(-0.9f64..0.9), q in 0.2f64..0.95) {
        prop_assume!(a.iter().product::<f64>() < q);
        let m = get_model(ModelName::AskeyWilson, &Params::aq(&a, q)).unwrap();
        for row in spectrum_comparison(&m, 15).unwrap() {
            prop_assert!(row.abs_diff <= SPECTRUM_REL * row.closed.abs().max(1.0), "{:?}", row);
        }
        prop_assert!(number_operator_residual(&m, 15).unwrap() <= NUMBER_OPERATOR);
    }

    #[test]
    fn spectrum_random_morse(g in 0.6f64..30.0, mu in 0.2f64..4.0) {
        let m = get_model(ModelName::Morse, &Params::morse(g, mu)).unwrap();
        let t = heisenberg_pauli_spectrum(&m, 40).unwrap();
        prop_assert_eq!(Some(t.energies.len()), m.level_count());
        prop_assert!(t.energies.windows(2).all(|w| w[1] > w[0]));
    }
}
