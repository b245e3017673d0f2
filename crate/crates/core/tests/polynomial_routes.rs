use ladderlab::models::fixtures;
use ladderlab::orthopoly::{eval_hypergeometric, eval_recurrence, PolynomialFamily};
use ladderlab::tolerances::POLYNOMIAL_ROUTES;
use ladderlab::C64;

fn grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    (0..k)
        .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / k as f64)
        .collect()
}

// max over the grid of |difference|, divided by max over the grid of |P_n|
#[test]
fn hypergeometric_and_recurrence_agree() {
    for m in fixtures::standard() {
        let (lo, hi) = m.sample_window();
        let top = m.level_count().map_or(20, |l| l.min(21) - 1);
        let mut diff = vec![0.0f64; top + 1];
        let mut size = vec![0.0f64; top + 1];
        for x in grid(lo, hi, 25) {
            let eta = m.eta(C64::new(x, 0.0));
            for (n, r) in m.poly_values(top, eta).iter().enumerate() {
                let h = m.poly_closed_form(n, eta).unwrap();
                diff[n] = diff[n].max((h - r).norm());
                size[n] = size[n].max(h.norm());
            }
        }
        for n in 0..=top {
            let rel = diff[n] / size[n];
            assert!(rel <= POLYNOMIAL_ROUTES, "{} n = {n}: {rel:e}", m.name());
        }
    }
}

#[test]
fn families_route_through_registered_models() {
    let fams = [
        PolynomialFamily::Hermite,
        PolynomialFamily::Laguerre { alpha: 0.4 },
        PolynomialFamily::Jacobi {
            alpha: 0.5,
            beta: 1.5,
        },
        PolynomialFamily::Gegenbauer { lambda: 0.75 },
        PolynomialFamily::MeixnerPollaczek {
            a: 1.0,
            phi: std::f64::consts::FRAC_PI_2,
        },
        PolynomialFamily::ContinuousHahnSpecial { a1: 0.5, a2: 0.9 },
        PolynomialFamily::ContinuousDualHahn { a: [0.5, 0.7, 1.3] },
        PolynomialFamily::Wilson {
            a: [1.0, 1.0, 1.0, 1.0],
        },
        PolynomialFamily::AskeyWilson {
            a: [0.5, 0.5, 0.5, 0.5],
            q: 0.5,
        },
    ];
    for fam in fams {
        for n in 0..=8 {
            for x in grid(-0.9, 0.9, 20) {
                let arg = C64::new(x, 0.0);
                let h = eval_hypergeometric(&fam, n, arg).unwrap();
                let r = eval_recurrence(&fam, n, arg).unwrap();
                assert!(
                    (h - r).norm() <= 1e-11 * h.norm().max(1.0),
                    "{fam:?} n={n} x={x}: {h} {r}"
                );
            }
        }
    }
}

#[test]
fn meixner_pollaczek_first_degree() {
    // P_1^{(a)}(x; π/2) = 2(a cos φ + x sin φ) = 2x at φ = π/2
    let fam = PolynomialFamily::MeixnerPollaczek {
        a: 1.0,
        phi: std::f64::consts::FRAC_PI_2,
    };
    for x in grid(-3.0, 3.0, 20) {
        let v = eval_recurrence(&fam, 1, C64::new(x, 0.0)).unwrap();
        assert!((v - C64::new(2.0 * x, 0.0)).norm() < 1e-14);
    }
}

#[test]
fn jacobi_parity() {
    let fam = PolynomialFamily::Jacobi {
        alpha: 0.8,
        beta: 0.8,
    };
    for n in 0..=12 {
        for x in grid(-1.0, 1.0, 15) {
            let p = eval_hypergeometric(&fam, n, C64::new(x, 0.0)).unwrap();
            let m = eval_hypergeometric(&fam, n, C64::new(-x, 0.0)).unwrap();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((m - p * sign).norm() <= 1e-13 * p.norm().max(1.0));
        }
    }
}

#[test]
fn degree_growth_of_rational_families() {
    let fams = [
        PolynomialFamily::MeixnerPollaczek { a: 0.8, phi: 1.1 },
        PolynomialFamily::ContinuousHahnSpecial { a1: 0.7, a2: 1.2 },
    ];
    for fam in fams {
        for n in 1..=6 {
            let (x1, x2) = (1e4, 2e4);
            let r = eval_hypergeometric(&fam, n, C64::new(x2, 0.0))
                .unwrap()
                .norm()
                / eval_hypergeometric(&fam, n, C64::new(x1, 0.0))
                    .unwrap()
                    .norm();
            let expect = 2f64.powi(n as i32);
            assert!((r / expect - 1.0).abs() < 0.05, "{fam:?} n={n}: {r}");
        }
    }
}
