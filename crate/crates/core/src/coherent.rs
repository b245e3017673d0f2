//! Annihilation-operator coherent states `a^(-) ψ = λ ψ`,
//! `ψ = φ_0 Σ λ^n / (C_1 ⋯ C_n) P_n(η)`.

use crate::matrix_heisenberg::NumberOperator;
use crate::models::{ModelSpec, System};
use crate::operator_engine::{ladder_weights, scaled_states, Operator};
use crate::specfun::{bessel_j, gamma, hypergeometric_pfq};
use crate::{Error, Result, C64};

/// Which annihilation operator the state diagonalizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    A,
    APrime,
}

impl Variant {
    fn operator(self) -> Operator {
        match self {
            Variant::A => Operator::Minus,
            Variant::APrime => Operator::MinusPrime,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentStateEval {
    pub lambda: C64,
    pub x: f64,
    pub value: C64,
    pub n_truncation: usize,
    pub tail_estimate: f64,
}

fn check_supported(spec: &ModelSpec) -> Result<()> {
    // a lowering operator with a top level has no nonzero eigenvalue
    if spec.level_count().is_some() {
        return Err(Error::Unsupported(format!(
            "{} has finitely many levels: no eigenvector of the annihilation operator",
            spec.name()
        )));
    }
    Ok(())
}

/// `C_k` for the chosen normalization.
fn lowering_coefficient(spec: &ModelSpec, variant: Variant, k: usize) -> f64 {
    let c = spec.ladder_unchecked(k).c;
    match variant {
        Variant::A => c,
        Variant::APrime => c * spec.prime_factor(k),
    }
}

/// Terms `c_k φ_k(x)` with `[H,η]` applied, `k = 0..=n_max`; discrete models
/// include `φ_0(x)` so the values are wavefunctions.
fn terms(spec: &ModelSpec, variant: Variant, lambda: C64, x: f64, n_max: usize) -> Result<Vec<(C64, C64)>> {
    let ratio = |k: usize| lambda / lowering_coefficient(spec, variant, k + 1);
    let mut t = scaled_states(spec, n_max, x, &ratio)?;
    if spec.kind().is_discrete() {
        let g = spec.ground_log(x)?.exp();
        for v in &mut t {
            v.0 *= g;
            v.1 *= g;
        }
    }
    Ok(t)
}

pub fn coherent_series(
    spec: &ModelSpec,
    variant: Variant,
    lambda: C64,
    x: f64,
    n_max: usize,
) -> Result<CoherentStateEval> {
    check_supported(spec)?;
    let t = terms(spec, variant, lambda, x, n_max)?;
    let mags: Vec<f64> = t.iter().map(|v| v.0.norm()).collect();
    if n_max >= 5 && mags[n_max - 5..].windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::Divergence(format!(
            "coherent-state terms still growing at n = {n_max} (|λ| = {})",
            lambda.norm()
        )));
    }
    let value = t.iter().map(|v| v.0).sum();
    let last = mags[n_max];
    let tail_estimate = if n_max == 0 {
        last
    } else {
        let r = last / mags[n_max - 1];
        if r < 1.0 {
            last * r / (1.0 - r)
        } else {
            last
        }
    };
    Ok(CoherentStateEval { lambda, x, value, n_truncation: n_max, tail_estimate })
}

/// Closed forms from the Gegenbauer, Meixner-Pollaczek and Laguerre
/// generating functions. All include `φ_0(x)`.
pub fn coherent_closed_form(spec: &ModelSpec, variant: Variant, lambda: C64, x: f64) -> Result<C64> {
    spec.check_in_domain(x)?;
    let phi0 = spec.ground_log(x)?.exp();
    let one = C64::new(1.0, 0.0);
    let re = |v: f64| C64::new(v, 0.0);
    match (spec.system(), variant) {
        (System::SymPoschlTeller { g }, Variant::A) => {
            let (s, c) = x.sin_cos();
            let d = one - lambda * 2.0 * c;
            // the generating function needs t^2 = 4λ^2 in the argument
            let z = -lambda * lambda * 4.0 * s * s / (d * d);
            let f = hypergeometric_pfq(&[re((g + 1.0) / 2.0), re(g / 2.0 + 1.0)], &[re(g + 0.5)], z)?;
            Ok(d.powf(-g - 1.0) * f.value * phi0)
        }
        (System::SymPoschlTeller { g }, Variant::APrime) => {
            if lambda == C64::new(0.0, 0.0) {
                return Ok(re(phi0));
            }
            let (s, c) = x.sin_cos();
            let nu = g - 0.5;
            // Γ(g+1/2) e^{λ cos x} (λ/2)^{1/2-g} √(sin x) J_{g-1/2}(λ sin x)
            Ok(gamma(re(g + 0.5))?
                * (lambda * c).exp()
                * (lambda / 2.0).powf(-nu)
                * s.sqrt()
                * bessel_j(nu, lambda * s)?)
        }
        (System::MeixnerPollaczek { a }, _) => {
            // a' = 2a, so ψ'(λ) = ψ(λ/2)
            let l = if variant == Variant::A { lambda } else { lambda / 2.0 };
            let i = C64::new(0.0, 1.0);
            let f = hypergeometric_pfq(&[C64::new(*a, x)], &[re(2.0 * a)], -i * l * 4.0)?;
            Ok((i * l * 2.0).exp() * f.value * phi0)
        }
        (System::RadialOscillator { g }, _) => {
            // a' = 4a for the equispaced E_n = 2n
            let l = if variant == Variant::A { lambda } else { lambda / 4.0 };
            let beta = g - 0.5;
            if l == C64::new(0.0, 0.0) {
                return Ok(re(phi0));
            }
            // Γ(β+1) e^{-λ} (x √(-λ))^{-β} J_β(2 x √(-λ))
            let w = (-l).sqrt() * x;
            Ok(gamma(re(beta + 1.0))? * (-l).exp() * w.powf(-beta) * bessel_j(beta, w * 2.0)? * phi0)
        }
        _ => Err(Error::Unsupported(format!("no closed-form coherent state for {}", spec.name()))),
    }
}

/// `max |a^(-) ψ - λ ψ| / max |ψ|` over the grid, with `a^(-)` applied level
/// by level to the truncated series.
pub fn verify_aocs(spec: &ModelSpec, variant: Variant, lambda: C64, grid: &[f64], n_max: usize) -> Result<f64> {
    check_supported(spec)?;
    let op = variant.operator();
    let weights: Vec<_> = (0..=n_max).map(|k| ladder_weights(spec, op, k)).collect();
    let mut diff = 0.0f64;
    let mut size = 0.0f64;
    for &x in grid {
        let t = terms(spec, variant, lambda, x, n_max)?;
        let eta = spec.eta(C64::new(x, 0.0));
        let mut psi = C64::new(0.0, 0.0);
        let mut lowered = C64::new(0.0, 0.0);
        for ((s, comm), (kc, ke, k1)) in t.iter().zip(&weights) {
            psi += s;
            lowered += comm * kc + eta * s * ke + s * k1;
        }
        diff = diff.max((lowered - psi * lambda).norm());
        size = size.max(psi.norm());
    }
    Ok(diff / size)
}

/// `e^{itH} ψ(λ) = ψ(e^{iat} λ)` for `E_n = a n`: both sides from the
/// truncated series, compared on the grid relative to `max |ψ|`.
pub fn temporal_stability_check(spec: &ModelSpec, lambda: C64, t: f64, grid: &[f64], n_max: usize) -> Result<f64> {
    check_supported(spec)?;
    let a = match NumberOperator::of(spec) {
        NumberOperator::Linear { a } => a,
        _ => return Err(Error::Unsupported(format!("{} does not have an equispaced spectrum", spec.name()))),
    };
    let energies: Vec<f64> = (0..=n_max).map(|k| spec.energy_ext(k as i64)).collect();
    let rotated = lambda * C64::from_polar(1.0, a * t);
    let mut diff = 0.0f64;
    let mut size = 0.0f64;
    for &x in grid {
        let evolved: C64 = terms(spec, Variant::A, lambda, x, n_max)?
            .iter()
            .zip(&energies)
            .map(|(s, e)| s.0 * C64::from_polar(1.0, e * t))
            .sum();
        let reparam: C64 = terms(spec, Variant::A, rotated, x, n_max)?.iter().map(|s| s.0).sum();
        diff = diff.max((evolved - reparam).norm());
        size = size.max(reparam.norm());
    }
    Ok(diff / size)
}
