//! Pointwise action of the Hamiltonian and of the ladder operators on the
//! eigenfunctions, plus the quadrature norms that feed the matrix checks.
//!
//! Ordinary models act on `φ_n(x)` with analytic derivatives. Discrete models
//! act on `P_n(η(x))` after the similarity transformation by `φ_0`, which only
//! needs the polynomials at the shifted complex points `x ∓ i s`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use rayon::prelude::*;

use crate::models::{Kind, ModelName, ModelSpec};
use crate::orthopoly::scaled_recurrence;
use crate::quadrature::{integrate_many_tol, integrate_tol, Domain};
use crate::tolerances::{INTERIOR_FIRST, QUADRATURE_REL};
use crate::{Error, Result, C64};

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    Hamiltonian,
    Minus,
    Plus,
    MinusPrime,
    PlusPrime,
}

impl Operator {
    pub fn is_lowering(self) -> bool {
        matches!(self, Operator::Minus | Operator::MinusPrime)
    }
    pub fn is_primed(self) -> bool {
        matches!(self, Operator::MinusPrime | Operator::PlusPrime)
    }
}

/// Values of some operator applied to level `n` on a grid. For discrete
/// models the values are at polynomial level (divided by `φ_0`).
#[derive(Debug, Clone, PartialEq)]
pub struct GridEvaluation {
    pub points: Vec<f64>,
    pub values: Vec<C64>,
    pub model: ModelName,
    pub n: usize,
    pub operator: Operator,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderActionReport {
    pub n: usize,
    pub expected_coefficient: f64,
    pub fitted_coefficient: f64,
    /// `max |result - c target| / max |result|`; for `a^(-) φ_0` the size of
    /// the result relative to `max |φ_0|`.
    pub max_rel_residual: f64,
}

impl LadderActionReport {
    pub fn coefficient_error(&self) -> f64 {
        let e = self.expected_coefficient;
        if e == 0.0 {
            self.fitted_coefficient.abs()
        } else {
            (self.fitted_coefficient - e).abs() / e.abs()
        }
    }
}

/// `k` midpoints of equal cells spanning the model's sample window.
pub fn interior_grid(spec: &ModelSpec, k: usize) -> Vec<f64> {
    let (lo, hi) = spec.sample_window();
    (0..k)
        .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / k as f64)
        .collect()
}

/// `[φ_k, φ_k', φ_k'']` for `k = 0..=n_max` at `x` (ordinary models).
pub fn ordinary_jets(spec: &ModelSpec, n_max: usize, x: f64) -> Result<Vec<[f64; 3]>> {
    spec.check_in_domain(x)?;
    let w = spec.prepotential(x)?;
    let eta = spec.eta_jet(x);
    let polys = scaled_recurrence(
        |k| spec.ladder_unchecked(k),
        |_| ONE,
        n_max,
        C64::new(eta.v, 0.0),
    );
    let g = w.v.exp();
    Ok(polys
        .iter()
        .map(|p| {
            let (p0, p1, p2) = (p[0].re, p[1].re, p[2].re);
            // chain rule through η(x)
            let dp = p1 * eta.d1;
            let ddp = p2 * eta.d1 * eta.d1 + p1 * eta.d2;
            [
                g * p0,
                g * (w.d1 * p0 + dp),
                g * ((w.d2 + w.d1 * w.d1) * p0 + 2.0 * w.d1 * dp + ddp),
            ]
        })
        .collect())
}

/// Polynomials at `x`, `x - i s` and `x + i s` with `V(x)`, `V*(x)`.
struct ShiftedPolys {
    p: Vec<C64>,
    p_minus: Vec<C64>,
    p_plus: Vec<C64>,
    v: C64,
    v_conj: C64,
}

fn shifted_polys(spec: &ModelSpec, n_max: usize, x: f64) -> ShiftedPolys {
    let s = spec.shift_step();
    let xc = C64::new(x, 0.0);
    let (xm, xp) = (C64::new(x, -s), C64::new(x, s));
    ShiftedPolys {
        p: spec.poly_values(n_max, spec.eta(xc)),
        p_minus: spec.poly_values(n_max, spec.eta(xm)),
        p_plus: spec.poly_values(n_max, spec.eta(xp)),
        v: spec.potential(xc),
        v_conj: spec.potential_conj(xc),
    }
}

pub fn apply_hamiltonian_ordinary(
    spec: &ModelSpec,
    n: usize,
    grid: &[f64],
) -> Result<GridEvaluation> {
    if spec.kind() != Kind::Ordinary {
        return Err(Error::Unsupported(format!(
            "{} is not an ordinary model",
            spec.name()
        )));
    }
    spec.check_level(n)?;
    let values = grid
        .iter()
        .map(|&x| {
            let jets = ordinary_jets(spec, n, x)?;
            let v = spec.potential(C64::new(x, 0.0)).re;
            let [f, _, f2] = jets[n];
            Ok(C64::new(-0.5 * f2 + v * f, 0.0))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GridEvaluation {
        points: grid.to_vec(),
        values,
        model: spec.name(),
        n,
        operator: Operator::Hamiltonian,
    })
}

pub fn apply_similarity_hamiltonian_discrete(
    spec: &ModelSpec,
    n: usize,
    grid: &[f64],
) -> Result<GridEvaluation> {
    if !spec.kind().is_discrete() {
        return Err(Error::Unsupported(format!(
            "{} is not a discrete model",
            spec.name()
        )));
    }
    let values = grid
        .iter()
        .map(|&x| {
            let s = shifted_polys(spec, n, x);
            (s.v * s.p_minus[n] + s.v_conj * s.p_plus[n] - (s.v + s.v_conj) * s.p[n]) / 2.0
        })
        .collect();
    Ok(GridEvaluation {
        points: grid.to_vec(),
        values,
        model: spec.name(),
        n,
        operator: Operator::Hamiltonian,
    })
}

/// The eigenfunction (ordinary) or polynomial (discrete) the operators act on.
fn states(spec: &ModelSpec, n_max: usize, x: f64) -> Result<Vec<C64>> {
    if spec.kind() == Kind::Ordinary {
        Ok(ordinary_jets(spec, n_max, x)?
            .iter()
            .map(|j| C64::new(j[0], 0.0))
            .collect())
    } else {
        Ok(spec.poly_values(n_max, spec.eta(C64::new(x, 0.0))))
    }
}

/// `max |H φ_n - E_n φ_n| / max |E_n φ_n|` over the grid; relative to
/// `max |φ_n|` when `E_n = 0`.
pub fn eigen_residual(spec: &ModelSpec, n: usize, grid: &[f64]) -> Result<f64> {
    let e = spec.energy(n)?;
    let h = if spec.kind() == Kind::Ordinary {
        apply_hamiltonian_ordinary(spec, n, grid)?
    } else {
        apply_similarity_hamiltonian_discrete(spec, n, grid)?
    };
    let mut diff = 0.0f64;
    let mut size = 0.0f64;
    for (&x, hv) in grid.iter().zip(&h.values) {
        let f = states(spec, n, x)?[n];
        diff = diff.max((hv - f * e).norm());
        size = size.max(if e == 0.0 { f.norm() } else { (f * e).norm() });
    }
    Ok(diff / size)
}

/// Scaled states `s_k = w_k φ_k` (`w_0 = 1`, `w_{k+1}/w_k = ratio(k)`) at `x`
/// paired with `[H, η] s_k`, for `k = 0..=n_max`. Discrete models are
/// handled at polynomial level (everything divided by `φ_0`).
pub fn scaled_states(
    spec: &ModelSpec,
    n_max: usize,
    x: f64,
    ratio: &dyn Fn(usize) -> C64,
) -> Result<Vec<(C64, C64)>> {
    let coef = |k| spec.ladder_unchecked(k);
    if spec.kind() == Kind::Ordinary {
        spec.check_in_domain(x)?;
        let w = spec.prepotential(x)?;
        let eta = spec.eta_jet(x);
        let g = w.v.exp();
        let seq = scaled_recurrence(coef, ratio, n_max, C64::new(eta.v, 0.0));
        Ok(seq
            .iter()
            .map(|p| {
                let f = p[0] * g;
                let df = (p[0] * w.d1 + p[1] * eta.d1) * g;
                (f, -(df * eta.d1) - f * (0.5 * eta.d2))
            })
            .collect())
    } else {
        let sh = spec.shift_step();
        let (e0, em, ep) = (
            spec.eta(C64::new(x, 0.0)),
            spec.eta(C64::new(x, -sh)),
            spec.eta(C64::new(x, sh)),
        );
        let (v, vc) = (
            spec.potential(C64::new(x, 0.0)),
            spec.potential_conj(C64::new(x, 0.0)),
        );
        let p = scaled_recurrence(coef, ratio, n_max, e0);
        let pm = scaled_recurrence(coef, ratio, n_max, em);
        let pp = scaled_recurrence(coef, ratio, n_max, ep);
        Ok((0..=n_max)
            .map(|k| {
                (
                    p[k][0],
                    (v * (em - e0) * pm[k][0] + vc * (ep - e0) * pp[k][0]) / 2.0,
                )
            })
            .collect())
    }
}

/// Coefficients `(k_comm, k_eta, k_one)` with
/// `op φ_n = k_comm [H,η] φ_n + k_eta η φ_n + k_one φ_n`, from
/// `a^(±) φ_n = ±([H,η] + (E_n - E_{n∓1}) η + R_{-1}(E_n)/(E_{n±1} - E_n)) φ_n / (E_{n+1} - E_{n-1})`.
pub fn ladder_weights(spec: &ModelSpec, op: Operator, n: usize) -> (f64, f64, f64) {
    let ni = n as i64;
    let e = spec.energy_ext(ni);
    let (sign, other, toward) = if op.is_lowering() {
        (-1.0, spec.energy_ext(ni + 1), spec.energy_ext(ni - 1))
    } else {
        (1.0, spec.energy_ext(ni - 1), spec.energy_ext(ni + 1))
    };
    let rm1 = spec.closure().rm1.eval(e);
    let shift = if rm1 == 0.0 { 0.0 } else { rm1 / (toward - e) };
    let k = sign
        * if op.is_primed() {
            1.0
        } else {
            1.0 / spec.prime_factor(n)
        };
    (k, k * (e - other), k * shift)
}

/// `a^(±)` (or `a'^(±)`) applied to level `n` on the grid.
pub fn apply_ladder(
    spec: &ModelSpec,
    op: Operator,
    n: usize,
    grid: &[f64],
) -> Result<GridEvaluation> {
    if op == Operator::Hamiltonian {
        return if spec.kind() == Kind::Ordinary {
            apply_hamiltonian_ordinary(spec, n, grid)
        } else {
            apply_similarity_hamiltonian_discrete(spec, n, grid)
        };
    }
    spec.check_level(n)?;
    let (kc, ke, k1) = ladder_weights(spec, op, n);
    let values = grid
        .iter()
        .map(|&x| {
            let (f, comm) = scaled_states(spec, n, x, &|_| ONE)?[n];
            let eta = spec.eta(C64::new(x, 0.0));
            Ok(comm * kc + eta * f * ke + f * k1)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GridEvaluation {
        points: grid.to_vec(),
        values,
        model: spec.name(),
        n,
        operator: op,
    })
}

/// Expected coefficient of `φ_{n±1}` in `op φ_n`.
pub fn expected_ladder_coefficient(spec: &ModelSpec, op: Operator, n: usize) -> f64 {
    let l = spec.ladder_unchecked(n);
    let base = if op.is_lowering() { l.c } else { l.a };
    if op.is_primed() {
        base * spec.prime_factor(n)
    } else {
        base
    }
}

/// Least-squares fit of `op φ_n` against `φ_{n±1}`.
pub fn ladder_report(
    spec: &ModelSpec,
    op: Operator,
    n: usize,
    grid: &[f64],
) -> Result<LadderActionReport> {
    let result = apply_ladder(spec, op, n, grid)?;
    let expected = expected_ladder_coefficient(spec, op, n);
    let mut rmax = 0.0f64;
    if op.is_lowering() && n == 0 {
        let mut fmax = 0.0f64;
        for (&x, r) in grid.iter().zip(&result.values) {
            fmax = fmax.max(states(spec, 0, x)?[0].norm());
            rmax = rmax.max(r.norm());
        }
        return Ok(LadderActionReport {
            n,
            expected_coefficient: 0.0,
            fitted_coefficient: 0.0,
            max_rel_residual: rmax / fmax,
        });
    }
    let m = if op.is_lowering() { n - 1 } else { n + 1 };
    let targets = grid
        .iter()
        .map(|&x| Ok(states(spec, m, x)?[m]))
        .collect::<Result<Vec<_>>>()?;
    let (mut num, mut den) = (C64::new(0.0, 0.0), 0.0);
    for (t, r) in targets.iter().zip(&result.values) {
        num += t.conj() * r;
        den += t.norm_sqr();
    }
    let c = num / den;
    let mut dmax = 0.0f64;
    for (t, r) in targets.iter().zip(&result.values) {
        dmax = dmax.max((r - c * t).norm());
        rmax = rmax.max(r.norm());
    }
    Ok(LadderActionReport {
        n,
        expected_coefficient: expected,
        fitted_coefficient: c.re,
        max_rel_residual: dmax / rmax,
    })
}

/// `max |η φ_n - A φ_{n+1} - B φ_n - C φ_{n-1}| / max |η φ_n|`.
pub fn three_term_residual(spec: &ModelSpec, n: usize, grid: &[f64]) -> Result<f64> {
    spec.check_level(n + 1)?;
    let l = spec.ladder_unchecked(n);
    let mut diff = 0.0f64;
    let mut size = 0.0f64;
    for &x in grid {
        let f: Vec<C64> = if spec.kind() == Kind::Ordinary {
            states(spec, n + 1, x)?
        } else {
            let g = spec.ground_log(x)?.exp();
            states(spec, n + 1, x)?.into_iter().map(|p| p * g).collect()
        };
        let eta = spec.eta(C64::new(x, 0.0));
        let prev = if n == 0 { C64::new(0.0, 0.0) } else { f[n - 1] };
        diff = diff.max((eta * f[n] - l.a * f[n + 1] - l.b * f[n] - l.c * prev).norm());
        size = size.max((eta * f[n]).norm());
    }
    Ok(diff / size)
}

fn integration_domain(spec: &ModelSpec) -> Domain<f64> {
    let (lo, hi) = spec.domain();
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => Domain::Finite(lo, hi),
        (true, false) => Domain::HalfLine(lo),
        _ => Domain::RealLine,
    }
}

/// `log φ_0(x)^2`, or `None` where it is negligible.
fn log_weight_at(spec: &ModelSpec, x: f64) -> Option<f64> {
    let lw = 2.0 * spec.ground_log(x).ok()?;
    (lw > -700.0).then_some(lw)
}

/// `∫ φ_m φ_n dx` over the whole domain.
pub fn orthogonality(spec: &ModelSpec, m: usize, n: usize) -> Result<f64> {
    spec.check_level(m.max(n))?;
    let top = m.max(n);
    // the diagonal norms ride along so convergence has a scale when the overlap vanishes
    let (v, _, _) = integrate_many_tol(
        |x, out: &mut [f64]| match log_weight_at(spec, x) {
            Some(lw) => {
                let p = spec.poly_values(top, spec.eta(C64::new(x, 0.0)));
                let w = lw.exp();
                out[0] = w * (p[m] * p[n]).re;
                out[1] = w * p[m].norm_sqr();
                out[2] = w * p[n].norm_sqr();
            }
            None => out.fill(0.0),
        },
        3,
        integration_domain(spec),
        QUADRATURE_REL,
        0.0,
    )?;
    Ok(v[0])
}

/// `∫_lo^hi φ_n^2 dx` with the eigenfunction formula, also past the last
/// bound state of a finite model.
pub fn truncated_norm(spec: &ModelSpec, n: usize, lo: f64, hi: f64) -> Result<f64> {
    let r = integrate_tol(
        |x| {
            spec.eigenfunction_formal(n, x)
                .map(|f| f.norm_sqr())
                .unwrap_or(f64::NAN)
        },
        Domain::Finite(lo, hi),
        QUADRATURE_REL,
        0.0,
    )?;
    Ok(r.value)
}

/// `√(A_n C_{n+1})`, the symmetric off-diagonal of the normalized η matrix.
pub fn symmetric_offdiagonal(spec: &ModelSpec, n: usize) -> Result<f64> {
    let p = spec.ladder_unchecked(n).a * spec.ladder_unchecked(n + 1).c;
    if p > 0.0 {
        Ok(p.sqrt())
    } else {
        Err(Error::Inconsistency(format!(
            "A_{n} C_{} = {p} is not positive for {}",
            n + 1,
            spec.name()
        )))
    }
}

/// Squared norms `Ñ_n^2` of `φ_0 p̂_n` for `n = 0..=n_max`, where `p̂_n` are the
/// polynomials rescaled to a symmetric recurrence. Hermiticity of `η` is the
/// statement that all of them coincide.
pub fn rescaled_norms(spec: &ModelSpec, n_max: usize) -> Result<Arc<Vec<f64>>> {
    static CACHE: OnceLock<RwLock<HashMap<String, Arc<Vec<f64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    let key = format!("{:?}", spec.system());
    if let Some(v) = cache.read().unwrap_or_else(|e| e.into_inner()).get(&key) {
        if v.len() > n_max {
            return Ok(v.clone());
        }
    }
    if n_max > 0 {
        spec.check_level(n_max)?;
    }
    let ratios = (0..n_max)
        .map(|k| {
            Ok(C64::new(
                spec.ladder_unchecked(k).a / symmetric_offdiagonal(spec, k)?,
                0.0,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let (vals, _, _) = integrate_many_tol(
        |x, out: &mut [f64]| {
            let lw = match spec.ground_log(x) {
                Ok(l) if l.is_finite() => 2.0 * l,
                _ => {
                    out.fill(0.0);
                    return;
                }
            };
            let eta = spec.eta(C64::new(x, 0.0)).re;
            if !eta.is_finite() {
                out.fill(0.0);
                return;
            }
            for (o, (m, e)) in out
                .iter_mut()
                .zip(log_scaled_orthonormal(spec, &ratios, eta))
            {
                let l = lw + 2.0 * e + 2.0 * m.abs().ln();
                *o = if l < -745.0 { 0.0 } else { l.exp() };
            }
        },
        n_max + 1,
        integration_domain(spec),
        QUADRATURE_REL * 1e-2,
        0.0,
    )?;
    let v = Arc::new(vals);
    cache
        .write()
        .unwrap_or_else(|e| e.into_inner())
        .insert(key, v.clone());
    Ok(v)
}

/// `p̂_k(η)` as mantissa and natural-log exponent, `k = 0..=ratios.len()`.
/// The weight can be tiny where `p̂_k` overflows, so the product is only
/// formed in log space.
fn log_scaled_orthonormal(spec: &ModelSpec, ratios: &[C64], eta: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(ratios.len() + 1);
    let (mut cur, mut prev, mut prev_ratio, mut expo) = (1.0, 0.0, 0.0, 0.0);
    out.push((1.0, 0.0));
    for (k, r) in ratios.iter().enumerate() {
        let l = spec.ladder_unchecked(k);
        let back = if k == 0 { 0.0 } else { l.c * prev_ratio };
        // η itself may be near overflow (Morse far left)
        let d = (eta - l.b).abs().max(1.0);
        cur /= d;
        prev /= d;
        expo += d.ln();
        let next = r.re * ((eta - l.b) * cur - back * prev) / l.a;
        prev = cur;
        cur = next;
        prev_ratio = r.re;
        let m = cur.abs().max(prev.abs());
        if m > 1e100 || (m < 1e-100 && m > 0.0) {
            cur /= m;
            prev /= m;
            expo += m.ln();
        }
        out.push((cur, expo));
    }
    out
}

/// Relative mismatch `|Â_n / Ĉ_{n+1} - 1|` for `n < n_max`.
pub fn hermiticity_residuals(spec: &ModelSpec, n_max: usize) -> Result<Vec<f64>> {
    let norms = rescaled_norms(spec, n_max)?;
    Ok((0..n_max)
        .map(|n| (norms[n + 1] / norms[n] - 1.0).abs())
        .collect())
}

/// `[H, a'^(±)] ∓ c a'^(±)` and `[a'^(-), a'^(+)] - 2(H + const)` on the
/// first `levels` eigenvectors, interior rows only; `None` when the interior
/// is empty.
pub fn su11_commutator_check(spec: &ModelSpec, levels: usize) -> Result<Option<f64>> {
    let (c, konst, primed) = match spec.system() {
        crate::models::System::MeixnerPollaczek { a } => (1.0, *a, true),
        crate::models::System::RadialOscillator { g } => (2.0, g + 0.5, false),
        _ => {
            return Err(Error::Unsupported(format!(
                "{} has no su(1,1) ladder",
                spec.name()
            )))
        }
    };
    let rows = levels.saturating_sub(INTERIOR_FIRST);
    if rows == 0 {
        return Ok(None);
    }
    let coef = |n: usize, lowering: bool| {
        let op = match (lowering, primed) {
            (true, true) => Operator::MinusPrime,
            (true, false) => Operator::Minus,
            (false, true) => Operator::PlusPrime,
            (false, false) => Operator::Plus,
        };
        expected_ladder_coefficient(spec, op, n)
    };
    // the su(1,1) normalization of the a-type (radial) operators has no factor 2
    let target_scale = if primed { 2.0 } else { 1.0 };
    let mut worst = 0.0f64;
    for n in 0..rows {
        let e = spec.energy(n)?;
        let up = coef(n, false);
        let down_next = coef(n + 1, true);
        let gap_up = spec.energy(n + 1)? - e;
        worst = worst.max((gap_up * up - c * up).abs() / up.abs().max(1.0));
        if n > 0 {
            let down = coef(n, true);
            let gap_down = spec.energy(n - 1)? - e;
            worst = worst.max((gap_down * down + c * down).abs() / down.abs().max(1.0));
        }
        let lower_raise = down_next * up;
        let raise_lower = if n == 0 {
            0.0
        } else {
            coef(n - 1, false) * coef(n, true)
        };
        let target = target_scale * (e + konst);
        worst = worst.max((lower_raise - raise_lower - target).abs() / target.abs().max(1.0));
    }
    Ok(Some(worst))
}

/// `a'^(-) a'^(+) + a'^(+) a'^(-) - (4 H + 2 g)` on levels `0..levels`
/// (symmetric Pöschl-Teller and soliton).
pub fn anticommutator_check(spec: &ModelSpec, levels: usize) -> Result<f64> {
    let g = match spec.system() {
        crate::models::System::SymPoschlTeller { g } | crate::models::System::Soliton { g } => *g,
        _ => {
            return Err(Error::Unsupported(format!(
                "{} has no anticommutator identity",
                spec.name()
            )))
        }
    };
    let top = spec
        .level_count()
        .map_or(levels, |l| levels.min(l.saturating_sub(1)));
    let mut worst = 0.0f64;
    for n in 0..top {
        let e = spec.energy(n)?;
        let mut s = expected_ladder_coefficient(spec, Operator::PlusPrime, n)
            * expected_ladder_coefficient(spec, Operator::MinusPrime, n + 1);
        if n > 0 {
            s += expected_ladder_coefficient(spec, Operator::MinusPrime, n)
                * expected_ladder_coefficient(spec, Operator::PlusPrime, n - 1);
        }
        let target = 4.0 * e + 2.0 * g;
        worst = worst.max((s - target).abs() / target.abs().max(1.0));
    }
    Ok(worst)
}

/// Eigen residuals for levels `0..=n_max` in parallel.
pub fn eigen_residuals(spec: &ModelSpec, n_max: usize, grid: &[f64]) -> Result<Vec<f64>> {
    (0..=n_max)
        .into_par_iter()
        .map(|n| eigen_residual(spec, n, grid))
        .collect()
}
