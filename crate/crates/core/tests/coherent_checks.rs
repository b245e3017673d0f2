use ladderlab::coherent::*;
use ladderlab::models::{get_model, ModelName, ModelSpec, Params};
use ladderlab::operator_engine::interior_grid;
use ladderlab::{Error, C64};
use proptest::prelude::*;

fn closed_form_cases() -> Vec<(ModelSpec, Variant)> {
    let sym = get_model(ModelName::SymPoschlTeller, &Params::g(1.0)).unwrap();
    let sym2 = get_model(ModelName::SymPoschlTeller, &Params::g(2.7)).unwrap();
    let mp = get_model(ModelName::MeixnerPollaczek, &Params::a(&[1.0])).unwrap();
    let mp2 = get_model(ModelName::MeixnerPollaczek, &Params::a(&[0.6])).unwrap();
    let rad = get_model(ModelName::RadialOscillator, &Params::g(1.0)).unwrap();
    let rad2 = get_model(ModelName::RadialOscillator, &Params::g(2.3)).unwrap();
    let mut out = Vec::new();
    for m in [sym, sym2, mp, mp2, rad, rad2] {
        out.push((m.clone(), Variant::A));
        out.push((m, Variant::APrime));
    }
    out
}

#[test]
fn aocs_residual_shrinks_with_truncation() {
    let models = [
        get_model(ModelName::MeixnerPollaczek, &Params::a(&[1.0])).unwrap(),
        get_model(ModelName::Wilson, &Params::a(&[1.0; 4])).unwrap(),
        get_model(ModelName::SymPoschlTeller, &Params::g(1.0)).unwrap(),
        get_model(ModelName::ContinuousDualHahn, &Params::a(&[0.6, 1.1, 1.5])).unwrap(),
        get_model(ModelName::AskeyWilson, &Params::aq(&[0.3, 0.4, -0.2, 0.5], 0.9)).unwrap(),
    ];
    for m in models {
        let grid = interior_grid(&m, 16);
        for variant in [Variant::A, Variant::APrime] {
            let r: Vec<f64> = (20..=60)
                .step_by(10)
                .map(|n| verify_aocs(&m, variant, C64::new(0.25, 0.05), &grid, n).unwrap())
                .collect();
            for w in r.windows(2) {
                assert!(w[1] <= w[0] || w[1] <= 1e-13, "{} {variant:?} {r:?}", m.name());
            }
            assert!(r[4] <= 1e-7, "{} {variant:?} {r:?}", m.name());
        }
    }
}

#[test]
fn finite_spectra_have_no_coherent_state() {
    for m in [
        get_model(ModelName::Soliton, &Params::g(3.0)).unwrap(),
        get_model(ModelName::Morse, &Params::morse(5.5, 1.0)).unwrap(),
    ] {
        let grid = interior_grid(&m, 4);
        assert!(matches!(
            coherent_series(&m, Variant::A, C64::new(0.1, 0.0), grid[0], 10),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            verify_aocs(&m, Variant::APrime, C64::new(0.1, 0.0), &grid, 10),
            Err(Error::Unsupported(_))
        ));
    }
}

#[test]
fn large_lambda_diverges() {
    // radius 1/(2|cos x|) from the (1 - 2λ cos x) singularity
    let m = get_model(ModelName::SymPoschlTeller, &Params::g(1.0)).unwrap();
    assert!(matches!(
        coherent_series(&m, Variant::A, C64::new(3.0, 0.0), 0.3, 40),
        Err(Error::Divergence(_))
    ));
}

#[test]
fn tail_estimate_small_on_acceptance_domain() {
    for (m, v) in closed_form_cases() {
        let x = interior_grid(&m, 3)[1];
        let e = coherent_series(&m, v, C64::new(0.3, 0.0), x, 60).unwrap();
        assert!(e.tail_estimate >= 0.0 && e.tail_estimate <= 1e-10 * e.value.norm(), "{} {e:?}", m.name());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn series_matches_closed_form(case in 0usize..12, r in 0.0f64..0.3, arg in 0.0f64..std::f64::consts::TAU, u in 0.05f64..0.95) {
        let (m, v) = &closed_form_cases()[case];
        let lambda = C64::from_polar(r, arg);
        let grid = interior_grid(m, 20);
        let x = grid[(u * grid.len() as f64) as usize];
        let s = coherent_series(m, *v, lambda, x, 80).unwrap();
        let c = coherent_closed_form(m, *v, lambda, x).unwrap();
        prop_assert!((s.value - c).norm() <= 1e-8 * c.norm().max(1e-300), "{} {:?} {:?} {}", m.name(), v, s, c);
    }

    #[test]
    fn temporal_stability_random(r in 0.0f64..0.3, arg in 0.0f64..std::f64::consts::TAU, t in -5.0f64..5.0) {
        let lambda = C64::from_polar(r, arg);
        for m in [
            get_model(ModelName::Harmonic, &Params::none()).unwrap(),
            get_model(ModelName::MeixnerPollaczek, &Params::a(&[0.8])).unwrap(),
            get_model(ModelName::RadialOscillator, &Params::g(1.6)).unwrap(),
        ] {
            let grid = interior_grid(&m, 12);
            prop_assert!(temporal_stability_check(&m, lambda, t, &grid, 50).unwrap() <= 1e-9);
        }
    }
}
