use ladderlab::models::{fixtures, get_model, ModelName, ModelSpec, Params};
use ladderlab::operator_engine::*;
use ladderlab::tolerances::{EIGEN_RESIDUAL, HERMITICITY, LADDER_REL};
use ladderlab::C64;
use proptest::prelude::*;

fn top_level(m: &ModelSpec, cap: usize) -> usize {
    m.level_count().map_or(cap, |l| l.min(cap + 1) - 1)
}

#[test]
fn eigen_residuals_all_fixtures() {
    for m in fixtures::standard() {
        let grid = interior_grid(&m, 50);
        for (n, r) in eigen_residuals(&m, top_level(&m, 15), &grid)
            .unwrap()
            .into_iter()
            .enumerate()
        {
            assert!(r <= EIGEN_RESIDUAL, "{} n={n}: {r:e}", m.name());
        }
    }
}

#[test]
fn discrete_hamiltonian_examples() {
    let w = get_model(ModelName::Wilson, &Params::a(&[1.0; 4])).unwrap();
    let grid = interior_grid(&w, 50);
    let h = apply_similarity_hamiltonian_discrete(&w, 1, &grid).unwrap();
    for (x, v) in grid.iter().zip(&h.values) {
        let p1 = w.poly(1, C64::new(x * x, 0.0));
        assert!(
            (v - p1 * 2.0).norm() <= 1e-9 * (p1 * 2.0).norm().max(1.0),
            "x={x}"
        );
    }
    let aw = get_model(ModelName::AskeyWilson, &Params::aq(&[0.5; 4], 0.5)).unwrap();
    let grid = interior_grid(&aw, 50);
    let h = apply_similarity_hamiltonian_discrete(&aw, 1, &grid).unwrap();
    let scale = grid
        .iter()
        .map(|x| aw.poly(1, C64::new(x.cos(), 0.0)).norm())
        .fold(0.0, f64::max);
    for (x, v) in grid.iter().zip(&h.values) {
        let p1 = aw.poly(1, C64::new(x.cos(), 0.0));
        assert!((v - p1 * 0.46875).norm() <= 1e-9 * scale, "x={x}");
    }
}

#[test]
fn ladder_fits_all_fixtures() {
    let ops = [
        Operator::Minus,
        Operator::Plus,
        Operator::MinusPrime,
        Operator::PlusPrime,
    ];
    for m in fixtures::standard() {
        let grid = interior_grid(&m, 50);
        for n in 0..=top_level(&m, 12) {
            for op in ops {
                if !op.is_lowering() && m.level_count().is_some_and(|l| n + 1 >= l) {
                    continue;
                }
                let r = ladder_report(&m, op, n, &grid).unwrap();
                assert!(
                    r.coefficient_error() <= LADDER_REL,
                    "{} {op:?} n={n}: {r:?}",
                    m.name()
                );
                assert!(
                    r.max_rel_residual <= 1e-10,
                    "{} {op:?} n={n}: {r:?}",
                    m.name()
                );
            }
        }
    }
}

#[test]
fn three_term_examples() {
    let mp = get_model(ModelName::MeixnerPollaczek, &Params::a(&[1.0])).unwrap();
    assert!(three_term_residual(&mp, 1, &interior_grid(&mp, 50)).unwrap() <= 1e-11);
    let s = get_model(ModelName::SymPoschlTeller, &Params::g(1.0)).unwrap();
    assert!(three_term_residual(&s, 3, &interior_grid(&s, 50)).unwrap() <= 1e-10);
    let aw = get_model(ModelName::AskeyWilson, &Params::aq(&[0.5; 4], 0.5)).unwrap();
    assert!(three_term_residual(&aw, 2, &interior_grid(&aw, 50)).unwrap() <= 1e-9);
}

#[test]
fn analytic_derivatives_match_richardson() {
    for m in fixtures::standard()
        .into_iter()
        .filter(|m| !m.kind().is_discrete())
    {
        for &x in interior_grid(&m, 7).iter() {
            let jets = ordinary_jets(&m, 6, x).unwrap();
            let f = |y: f64| ordinary_jets(&m, 6, y).unwrap();
            let d = |h: f64| {
                let (p, q) = (f(x + h), f(x - h));
                (0..=6)
                    .map(|k| {
                        (
                            (p[k][0] - q[k][0]) / (2.0 * h),
                            (p[k][0] - 2.0 * jets[k][0] + q[k][0]) / (h * h),
                        )
                    })
                    .collect::<Vec<_>>()
            };
            let (c, f2) = (d(1e-3), d(5e-4));
            for k in 0..=6 {
                // one Richardson step removes the h^2 term
                let d1 = (4.0 * f2[k].0 - c[k].0) / 3.0;
                let d2 = (4.0 * f2[k].1 - c[k].1) / 3.0;
                let s = jets[k].iter().fold(1e-300, |a: f64, v| a.max(v.abs()));
                assert!(
                    (d1 - jets[k][1]).abs() <= 1e-6 * s,
                    "{} k={k} x={x}",
                    m.name()
                );
                assert!(
                    (d2 - jets[k][2]).abs() <= 1e-4 * s,
                    "{} k={k} x={x}",
                    m.name()
                );
            }
        }
    }
}

#[test]
fn hermiticity_in_normalized_basis() {
    for m in fixtures::standard() {
        let top = top_level(&m, 20);
        for (n, r) in hermiticity_residuals(&m, top)
            .unwrap()
            .into_iter()
            .enumerate()
        {
            assert!(r <= HERMITICITY, "{} n={n}: {r:e}", m.name());
        }
    }
}

#[test]
fn rescaled_norms_match_direct_overlaps() {
    // Ñ_n² p̂-normalization against ∫ φ_n² with the bare recurrence
    let m = get_model(ModelName::PoschlTeller, &Params::gh(1.4, 2.1)).unwrap();
    let norms = rescaled_norms(&m, 5).unwrap();
    let mut scale = 1.0;
    for n in 0..5 {
        let direct = orthogonality(&m, n, n).unwrap();
        assert!(
            (direct * scale * scale - norms[n]).abs() <= 1e-9 * norms[n],
            "n={n}"
        );
        let l = m.ladder_coefficients(n).unwrap();
        let next = m.ladder_coefficients(n + 1).unwrap();
        scale *= l.a / (l.a * next.c).sqrt();
    }
}

#[test]
fn morse_norms() {
    let m = get_model(ModelName::Morse, &Params::morse(3.7, 1.0)).unwrap();
    let n33 = orthogonality(&m, 3, 3).unwrap();
    assert!(n33.is_finite() && n33 > 0.0);
    assert!(orthogonality(&m, 4, 4).is_err());
    let widths = [5.0, 10.0, 20.0, 40.0];
    let norms: Vec<f64> = widths
        .iter()
        .map(|&l| truncated_norm(&m, 4, -l, 6.0).unwrap())
        .collect();
    assert!(norms.windows(2).all(|w| w[1] > 1.5 * w[0]), "{norms:?}");
    // a genuine bound state saturates
    let bound: Vec<f64> = widths
        .iter()
        .map(|&l| truncated_norm(&m, 3, -l, 6.0).unwrap())
        .collect();
    assert!((bound[3] - bound[2]).abs() <= 1e-3 * bound[3], "{bound:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn eigen_residual_random_parameters(g in 0.6f64..6.0, h in 0.6f64..6.0, a in 0.2f64..3.0, n in 0usize..10) {
        let models = [
            get_model(ModelName::PoschlTeller, &Params::gh(g, h)).unwrap(),
            get_model(ModelName::RadialOscillator, &Params::g(g)).unwrap(),
            get_model(ModelName::MeixnerPollaczek, &Params::a(&[a])).unwrap(),
            get_model(ModelName::ContinuousDualHahn, &Params::a(&[a, g, h])).unwrap(),
        ];
        for m in &models {
            let r = eigen_residual(m, n, &interior_grid(m, 30)).unwrap();
            prop_assert!(r <= EIGEN_RESIDUAL, "{} n={} r={:e}", m.name(), n, r);
        }
    }

    #[test]
    fn ground_state_annihilated(g in 0.6f64..25.0, mu in 0.3f64..3.0) {
        for m in [
            get_model(ModelName::Soliton, &Params::g(g)).unwrap(),
            get_model(ModelName::Morse, &Params::morse(g, mu)).unwrap(),
            get_model(ModelName::SymPoschlTeller, &Params::g(g)).unwrap(),
        ] {
            let r = ladder_report(&m, Operator::MinusPrime, 0, &interior_grid(&m, 30)).unwrap();
            prop_assert!(r.max_rel_residual <= 1e-10, "{} {:?}", m.name(), r);
        }
    }

    #[test]
    fn ladder_coefficients_random_wilson(a in proptest::array::uniform4(0.2f64..2.5), n in 1usize..10) {
        let m = get_model(ModelName::Wilson, &Params::a(&a)).unwrap();
        let grid = interior_grid(&m, 30);
        for op in [Operator::Minus, Operator::PlusPrime] {
            let r = ladder_report(&m, op, n, &grid).unwrap();
            prop_assert!(r.coefficient_error() <= LADDER_REL, "{:?} {:?}", op, r);
        }
    }
}
