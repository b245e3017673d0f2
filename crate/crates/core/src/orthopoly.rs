//! The orthogonal polynomial families behind the eigenfunctions, evaluated
//! either from their hypergeometric definitions or by the three-term
//! recurrence supplied by the matching model.

use crate::models::{get_model, Ladder, ModelName, ModelSpec, Params};
use crate::specfun::{
    basic_hypergeometric_extended, hypergeometric_pfq_extended, pochhammer_re, q_pochhammer, QLen,
    QParam,
};
use crate::{Error, Result, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolynomialFamily {
    Hermite,
    Laguerre {
        alpha: f64,
    },
    Jacobi {
        alpha: f64,
        beta: f64,
    },
    Gegenbauer {
        lambda: f64,
    },
    MeixnerPollaczek {
        a: f64,
        phi: f64,
    },
    /// `p_n(x; a1, a2, a1, a2)`
    ContinuousHahnSpecial {
        a1: f64,
        a2: f64,
    },
    ContinuousDualHahn {
        a: [f64; 3],
    },
    Wilson {
        a: [f64; 4],
    },
    AskeyWilson {
        a: [f64; 4],
        q: f64,
    },
}

impl PolynomialFamily {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Constraint(format!("{what} violated")));
        match *self {
            PolynomialFamily::Hermite => Ok(()),
            PolynomialFamily::Laguerre { alpha } if !(alpha > -1.0) => bad("alpha > -1"),
            PolynomialFamily::Jacobi { alpha, beta } if !(alpha > -1.0 && beta > -1.0) => {
                bad("alpha, beta > -1")
            }
            PolynomialFamily::Gegenbauer { lambda } if !(lambda > -0.5) => bad("lambda > -1/2"),
            PolynomialFamily::MeixnerPollaczek { a, phi }
                if !(a > 0.0 && phi > 0.0 && phi < std::f64::consts::PI) =>
            {
                bad("a > 0, 0 < phi < pi")
            }
            PolynomialFamily::ContinuousHahnSpecial { a1, a2 } if !(a1 > 0.0 && a2 > 0.0) => {
                bad("a_j > 0")
            }
            PolynomialFamily::ContinuousDualHahn { a } if a.iter().any(|&x| !(x > 0.0)) => {
                bad("a_j > 0")
            }
            PolynomialFamily::Wilson { a } if a.iter().any(|&x| !(x > 0.0)) => bad("a_j > 0"),
            PolynomialFamily::AskeyWilson { a, q } => {
                if !(q > 0.0 && q < 1.0) {
                    bad("0 < q < 1")
                } else if a.iter().any(|&x| !(x > -1.0 && x < 1.0)) {
                    bad("-1 < a_j < 1")
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |p, k| p * k as f64)
}

/// Value of `P_n` at `arg` from the defining hypergeometric formula.
///
/// `arg` is the sinusoidal coordinate: `x` for the classical families and
/// for Meixner-Pollaczek / continuous Hahn, `x^2` for continuous dual Hahn and
/// Wilson, `cos x` for Askey-Wilson.
pub fn eval_hypergeometric(fam: &PolynomialFamily, n: usize, arg: C64) -> Result<C64> {
    fam.validate()?;
    eval_hypergeometric_unchecked(fam, n, arg)
}

/// [`eval_hypergeometric`] without the parameter checks, for analytic
/// continuations such as the soliton's `β < -1`.
pub fn eval_hypergeometric_unchecked(fam: &PolynomialFamily, n: usize, arg: C64) -> Result<C64> {
    let nf = n as f64;
    let v = match *fam {
        PolynomialFamily::Hermite => hermite(n, arg),
        PolynomialFamily::Laguerre { alpha } => laguerre_unchecked(alpha, n, arg)?,
        PolynomialFamily::Jacobi { alpha, beta } => jacobi_unchecked(alpha, beta, n, arg)?,
        PolynomialFamily::Gegenbauer { lambda } => {
            let f = pochhammer_re(2.0 * lambda, n) / pochhammer_re(lambda + 0.5, n);
            jacobi_unchecked(lambda - 0.5, lambda - 0.5, n, arg)? * f
        }
        PolynomialFamily::MeixnerPollaczek { a, phi } => {
            let z = ONE - (-2.0 * I * phi).exp();
            let f = hypergeometric_pfq_extended(&[re(-nf), a + I * arg], &[re(2.0 * a)], z)?.value;
            f * (I * nf * phi).exp() * (pochhammer_re(2.0 * a, n) / factorial(n))
        }
        PolynomialFamily::ContinuousHahnSpecial { a1, a2 } => {
            let s = a1 + a2;
            let f = hypergeometric_pfq_extended(
                &[re(-nf), re(nf + 2.0 * s - 1.0), a1 + I * arg],
                &[re(2.0 * a1), re(s)],
                ONE,
            )?
            .value;
            f * I.powi(n as i32) * (pochhammer_re(2.0 * a1, n) * pochhammer_re(s, n) / factorial(n))
        }
        PolynomialFamily::ContinuousDualHahn { a } => {
            let x = arg.sqrt();
            let [a1, a2, a3] = a;
            let f = hypergeometric_pfq_extended(
                &[re(-nf), a1 + I * x, a1 - I * x],
                &[re(a1 + a2), re(a1 + a3)],
                ONE,
            )?
            .value;
            f * (pochhammer_re(a1 + a2, n) * pochhammer_re(a1 + a3, n))
        }
        PolynomialFamily::Wilson { a } => {
            let x = arg.sqrt();
            let [a1, a2, a3, a4] = a;
            let b1 = a1 + a2 + a3 + a4;
            let f = hypergeometric_pfq_extended(
                &[re(-nf), re(nf + b1 - 1.0), a1 + I * x, a1 - I * x],
                &[re(a1 + a2), re(a1 + a3), re(a1 + a4)],
                ONE,
            )?
            .value;
            f * (pochhammer_re(a1 + a2, n) * pochhammer_re(a1 + a3, n) * pochhammer_re(a1 + a4, n))
        }
        PolynomialFamily::AskeyWilson { a, q } => askey_wilson(a, q, n, arg)?,
    };
    Ok(v)
}

/// Terms of `(2x)^n 2F0(-n/2, -(n-1)/2; -; -1/x^2)` multiplied out, so that
/// `x = 0` is allowed.
fn hermite(n: usize, x: C64) -> C64 {
    let nf = n as f64;
    let mut coef = 2f64.powi(n as i32);
    let mut sum = ZERO;
    for k in 0..=n / 2 {
        sum += coef * x.powi((n - 2 * k) as i32);
        let kf = k as f64;
        coef *= -(-nf / 2.0 + kf) * (-(nf - 1.0) / 2.0 + kf) / (kf + 1.0);
    }
    sum
}

pub(crate) fn laguerre_unchecked(alpha: f64, n: usize, x: C64) -> Result<C64> {
    let f = hypergeometric_pfq_extended(&[re(-(n as f64))], &[re(alpha + 1.0)], x)?.value;
    Ok(f * (pochhammer_re(alpha + 1.0, n) / factorial(n)))
}

pub(crate) fn jacobi_unchecked(alpha: f64, beta: f64, n: usize, x: C64) -> Result<C64> {
    let nf = n as f64;
    let f = hypergeometric_pfq_extended(
        &[re(-nf), re(nf + alpha + beta + 1.0)],
        &[re(alpha + 1.0)],
        (ONE - x) / 2.0,
    )?
    .value;
    Ok(f * (pochhammer_re(alpha + 1.0, n) / factorial(n)))
}

fn askey_wilson(a: [f64; 4], q: f64, n: usize, eta: C64) -> Result<C64> {
    // the definition is permutation symmetric; put the largest |a_j| first so
    // that a_1^{-n} stays tame
    let mut a = a;
    let lead = (0..4)
        .max_by(|&i, &j| a[i].abs().total_cmp(&a[j].abs()))
        .unwrap_or(0);
    a.swap(0, lead);
    let [a1, a2, a3, a4] = a;
    if a1 == 0.0 {
        return Err(Error::Unsupported(
            "Askey-Wilson definition needs some a_j != 0".into(),
        ));
    }
    let z = eta + I * (ONE - eta * eta).sqrt();
    let zbar = 1.0 / z;
    let n_i = n as i32;
    let f = basic_hypergeometric_extended(
        &[
            QParam::new(&[], -n_i),
            QParam::new(&[re(a1), re(a2), re(a3), re(a4)], n_i - 1),
            QParam::new(&[re(a1), z], 0),
            QParam::new(&[re(a1), zbar], 0),
        ],
        &[
            QParam::new(&[re(a1), re(a2)], 0),
            QParam::new(&[re(a1), re(a3)], 0),
            QParam::new(&[re(a1), re(a4)], 0),
        ],
        q,
        re(q),
    )?
    .value;
    let mut pre = a1.powi(-(n as i32));
    for aj in [a2, a3, a4] {
        pre *= q_pochhammer(re(a1 * aj), q, QLen::Finite(n))?.value.re;
    }
    Ok(f * pre)
}

/// Model carrying the recurrence for a family, with a constant factor between
/// the family's normalization and the model's polynomials.
fn registered_model(fam: &PolynomialFamily) -> Result<(ModelSpec, Box<dyn Fn(usize) -> f64>)> {
    let missing = || Error::Unsupported(format!("no registered recurrence for {fam:?}"));
    let unit: Box<dyn Fn(usize) -> f64> = Box::new(|_| 1.0);
    let m = match *fam {
        PolynomialFamily::Hermite => (get_model(ModelName::Harmonic, &Params::none())?, unit),
        PolynomialFamily::Laguerre { alpha } => (
            get_model(ModelName::RadialOscillator, &Params::g(alpha + 0.5))
                .map_err(|_| missing())?,
            unit,
        ),
        PolynomialFamily::Jacobi { alpha, beta } => (
            get_model(
                ModelName::PoschlTeller,
                &Params::gh(alpha + 0.5, beta + 0.5),
            )
            .map_err(|_| missing())?,
            unit,
        ),
        PolynomialFamily::Gegenbauer { lambda } => (
            get_model(ModelName::SymPoschlTeller, &Params::g(lambda)).map_err(|_| missing())?,
            Box::new(move |n| pochhammer_re(2.0 * lambda, n) / pochhammer_re(lambda + 0.5, n))
                as Box<dyn Fn(usize) -> f64>,
        ),
        PolynomialFamily::MeixnerPollaczek { a, phi } if phi == std::f64::consts::FRAC_PI_2 => (
            get_model(ModelName::MeixnerPollaczek, &Params::a(&[a]))?,
            unit,
        ),
        PolynomialFamily::MeixnerPollaczek { .. } => return Err(missing()),
        PolynomialFamily::ContinuousHahnSpecial { a1, a2 } => (
            get_model(ModelName::ContinuousHahn, &Params::a(&[a1, a2]))?,
            unit,
        ),
        PolynomialFamily::ContinuousDualHahn { a } => (
            get_model(ModelName::ContinuousDualHahn, &Params::a(&a))?,
            unit,
        ),
        PolynomialFamily::Wilson { a } => (get_model(ModelName::Wilson, &Params::a(&a))?, unit),
        PolynomialFamily::AskeyWilson { a, q } => {
            (get_model(ModelName::AskeyWilson, &Params::aq(&a, q))?, unit)
        }
    };
    Ok(m)
}

/// Value of `P_n` at `arg` by upward recurrence with the model's coefficients.
pub fn eval_recurrence(fam: &PolynomialFamily, n: usize, arg: C64) -> Result<C64> {
    fam.validate()?;
    let (model, factor) = registered_model(fam)?;
    Ok(model.poly(n, arg) * factor(n))
}

/// Runs `η v_k = A_k (w_k/w_{k+1}) v_{k+1} + B_k v_k + C_k (w_k/w_{k-1}) v_{k-1}`
/// for `v_k = w_k P_k`, `w_0 = 1`, where `ratio(k) = w_{k+1}/w_k`.
/// Returns `[v_k, dv_k/dη, d²v_k/dη²]` for `k = 0..=n_max`.
///
/// With a suitable `ratio` the sequence stays O(1) where the bare `P_k` would
/// overflow (coherent-state terms, orthonormalized polynomials).
pub fn scaled_recurrence(
    coef: impl Fn(usize) -> Ladder,
    ratio: impl Fn(usize) -> C64,
    n_max: usize,
    eta: C64,
) -> Vec<[C64; 3]> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push([ONE, ZERO, ZERO]);
    let mut prev = [ZERO; 3];
    let mut prev_ratio = ZERO;
    for k in 0..n_max {
        let l = coef(k);
        let r = ratio(k);
        let cur = out[k];
        let back = if k == 0 { ZERO } else { l.c * prev_ratio };
        let d = eta - l.b;
        let next = [
            r * (d * cur[0] - back * prev[0]) / l.a,
            r * (d * cur[1] + cur[0] - back * prev[1]) / l.a,
            r * (d * cur[2] + 2.0 * cur[1] - back * prev[2]) / l.a,
        ];
        prev = cur;
        prev_ratio = r;
        out.push(next);
    }
    out
}

/// `|P_n^{(β,β)}/(β+1)_n - C_n^{(β+1/2)}/(2β+1)_n|` at `x`.
pub fn gegenbauer_jacobi_ratio_check(beta: f64, n: usize, x: f64) -> Result<f64> {
    let p = jacobi_unchecked(beta, beta, n, re(x))?.re / pochhammer_re(beta + 1.0, n);
    let c = eval_hypergeometric(
        &PolynomialFamily::Gegenbauer { lambda: beta + 0.5 },
        n,
        re(x),
    )?
    .re / pochhammer_re(2.0 * beta + 1.0, n);
    Ok((p - c).abs())
}

/// `dP_n/dx` for the classical families, differentiating the explicit series
/// term by term.
pub fn derivative(fam: &PolynomialFamily, n: usize, x: f64) -> Result<f64> {
    fam.validate()?;
    let nf = n as f64;
    match *fam {
        PolynomialFamily::Hermite => {
            let mut coef = 2f64.powi(n as i32);
            let mut sum = 0.0;
            for k in 0..=n / 2 {
                let p = n - 2 * k;
                if p > 0 {
                    sum += coef * p as f64 * x.powi(p as i32 - 1);
                }
                let kf = k as f64;
                coef *= -(-nf / 2.0 + kf) * (-(nf - 1.0) / 2.0 + kf) / (kf + 1.0);
            }
            Ok(sum)
        }
        PolynomialFamily::Laguerre { alpha } => {
            if n == 0 {
                return Ok(0.0);
            }
            // differentiating the 1F1 series term by term shifts its parameters
            let f = hypergeometric_pfq_extended(&[re(1.0 - nf)], &[re(alpha + 2.0)], re(x))?
                .value
                .re;
            Ok(f * -nf / (alpha + 1.0) * pochhammer_re(alpha + 1.0, n) / factorial(n))
        }
        PolynomialFamily::Jacobi { alpha, beta } => jacobi_derivative(alpha, beta, n, x),
        PolynomialFamily::Gegenbauer { lambda } => {
            let f = pochhammer_re(2.0 * lambda, n) / pochhammer_re(lambda + 0.5, n);
            Ok(f * jacobi_derivative(lambda - 0.5, lambda - 0.5, n, x)?)
        }
        _ => Err(Error::Unsupported(format!(
            "series derivative not provided for {fam:?}"
        ))),
    }
}

fn jacobi_derivative(alpha: f64, beta: f64, n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let b = nf + alpha + beta + 1.0;
    let f = hypergeometric_pfq_extended(
        &[re(1.0 - nf), re(b + 1.0)],
        &[re(alpha + 2.0)],
        re((1.0 - x) / 2.0),
    )?
    .value
    .re;
    // chain rule: d/dx of the argument (1 - x)/2 is -1/2
    Ok(f * (-nf * b / (alpha + 1.0)) * -0.5 * pochhammer_re(alpha + 1.0, n) / factorial(n))
}
