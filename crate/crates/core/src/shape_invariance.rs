//! Shape invariance of the discrete models at the polynomial level: forward
//! and backward shift operators, the ground-state shift identity and the
//! compensating operator `X`, plus the ordinary-model prepotential.

use crate::models::{get_model, ModelName, ModelSpec, Params, System};
use crate::{Error, Result, C64};

const I: C64 = C64::new(0.0, 1.0);

/// Parameters of a discrete model together with the model at the shifted
/// parameters `λ + δ` (`λ * q^δ` for Askey-Wilson).
#[derive(Debug, Clone)]
pub struct ShapeData {
    pub lambda: Vec<f64>,
    pub delta: Vec<f64>,
    /// `δ'` of the Askey-Wilson shape relation.
    pub delta_prime: Option<f64>,
    base: ModelSpec,
    shifted: ModelSpec,
}

pub fn shape_data(spec: &ModelSpec) -> Result<ShapeData> {
    let half = |a: &[f64]| a.iter().map(|v| v + 0.5).collect::<Vec<_>>();
    let (lambda, shifted, delta_prime) = match spec.system() {
        System::MeixnerPollaczek { a } => (vec![*a], Params::a(&half(&[*a])), None),
        System::ContinuousHahn { a1, a2 } => (vec![*a1, *a2], Params::a(&half(&[*a1, *a2])), None),
        System::ContinuousDualHahn { a } => (a.to_vec(), Params::a(&half(a)), None),
        System::Wilson { a } => (a.to_vec(), Params::a(&half(a)), None),
        System::AskeyWilson { a, q } => {
            let s: Vec<f64> = a.iter().map(|v| v * q.sqrt()).collect();
            (a.to_vec(), Params::aq(&s, *q), Some(-0.5))
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "{} is not a difference-equation model",
                spec.name()
            )))
        }
    };
    Ok(ShapeData {
        delta: vec![0.5; lambda.len()],
        lambda,
        delta_prime,
        base: spec.clone(),
        shifted: get_model(spec.name(), &shifted)?,
    })
}

impl ShapeData {
    pub fn shifted(&self) -> &ModelSpec {
        &self.shifted
    }

    /// `φ(x) ∝ η'(x)` entering the ground-state shift identity.
    pub fn varphi(&self, x: C64) -> C64 {
        match self.base.system() {
            System::ContinuousDualHahn { .. } | System::Wilson { .. } => 2.0 * x,
            System::AskeyWilson { .. } => -2.0 * x.sin(),
            _ => C64::new(1.0, 0.0),
        }
    }

    /// `F P_n(λ) = f_n P_{n-1}(λ+δ)`.
    pub fn f(&self, n: usize) -> f64 {
        let nf = n as f64;
        match self.base.system() {
            System::MeixnerPollaczek { .. } => 2.0,
            System::ContinuousHahn { a1, a2 } => nf + 2.0 * a1 + 2.0 * a2 - 1.0,
            System::ContinuousDualHahn { .. } => -nf,
            System::Wilson { a } => -nf * (nf + a.iter().sum::<f64>() - 1.0),
            System::AskeyWilson { a, q } => {
                let b4: f64 = a.iter().product();
                -q.powf(nf / 2.0) * (q.powf(-nf) - 1.0) * (1.0 - b4 * q.powf(nf - 1.0))
            }
            _ => unreachable!("shape data only exists for discrete models"),
        }
    }

    /// `B P_n(λ+δ) = b_n P_{n+1}(λ)`.
    pub fn b(&self, n: usize) -> f64 {
        let nf = n as f64;
        match self.base.system() {
            System::MeixnerPollaczek { .. } | System::ContinuousHahn { .. } => nf + 1.0,
            System::ContinuousDualHahn { .. } | System::Wilson { .. } => -1.0,
            System::AskeyWilson { q, .. } => -q.powf(-(nf + 1.0) / 2.0),
            _ => unreachable!("shape data only exists for discrete models"),
        }
    }

    /// Half of the imaginary shift: `e^{±p/2} g(x) = g(x ∓ i h)`.
    fn h(&self) -> f64 {
        self.base.shift_step() / 2.0
    }

    /// `F(λ) = i φ(x)^{-1} (e^{p/2} - e^{-p/2})`.
    pub fn forward(&self, g: &dyn Fn(C64) -> C64, x: C64) -> C64 {
        let h = self.h();
        I * (g(x - I * h) - g(x + I * h)) / self.varphi(x)
    }

    /// `B(λ) = -i (V e^{p/2} - V* e^{-p/2}) φ(x)`.
    pub fn backward(&self, g: &dyn Fn(C64) -> C64, x: C64) -> C64 {
        let h = self.h();
        let (lo, hi) = (x - I * h, x + I * h);
        -I * (self.base.potential(x) * self.varphi(lo) * g(lo)
            - self.base.potential_conj(x) * self.varphi(hi) * g(hi))
    }

    fn p(&self, n: usize) -> impl Fn(C64) -> C64 + '_ {
        move |x| self.base.poly(n, self.base.eta(x))
    }

    fn p_shifted(&self, n: usize) -> impl Fn(C64) -> C64 + '_ {
        move |x| self.shifted.poly(n, self.shifted.eta(x))
    }
}

/// `max |lhs - rhs| / max |rhs|`, or `max |lhs|` when the right side vanishes.
fn relative(pairs: impl Iterator<Item = (C64, C64)>) -> f64 {
    let (mut d, mut s) = (0.0f64, 0.0f64);
    for (l, r) in pairs {
        d = d.max((l - r).norm());
        s = s.max(r.norm());
    }
    if s > 0.0 {
        d / s
    } else {
        d
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn forward_shift_check(spec: &ModelSpec, n: usize, grid: &[f64]) -> Result<f64> {
    if n == 0 {
        return Err(Error::Constraint("forward shift needs n >= 1".into()));
    }
    let sd = shape_data(spec)?;
    let (p, q) = (sd.p(n), sd.p_shifted(n - 1));
    Ok(relative(grid.iter().map(|&x| {
        let x = real(x);
        (sd.forward(&p, x), sd.f(n) * q(x))
    })))
}

pub fn backward_shift_check(spec: &ModelSpec, n: usize, grid: &[f64]) -> Result<f64> {
    let sd = shape_data(spec)?;
    let (q, p) = (sd.p_shifted(n), sd.p(n + 1));
    Ok(relative(grid.iter().map(|&x| {
        let x = real(x);
        (sd.backward(&q, x), sd.b(n) * p(x))
    })))
}

/// `max_n |f_n b_{n-1} / 2 - E_n| / max(1, E_n)` for `1 <= n <= n_max`.
pub fn energy_factorization_check(spec: &ModelSpec, n_max: usize) -> Result<f64> {
    let sd = shape_data(spec)?;
    Ok((1..=n_max)
        .map(|n| {
            let e = spec.energy_ext(n as i64);
            (sd.f(n) * sd.b(n - 1) / 2.0 - e).abs() / e.abs().max(1.0)
        })
        .fold(0.0, f64::max))
}

/// `B F P_n = 2 E_n P_n`, the similarity-transformed Hamiltonian.
pub fn hamiltonian_factorization_check(spec: &ModelSpec, n: usize, grid: &[f64]) -> Result<f64> {
    let sd = shape_data(spec)?;
    let p = sd.p(n);
    let fp = |x: C64| sd.forward(&p, x);
    let e2 = 2.0 * spec.energy_ext(n as i64);
    Ok(relative(grid.iter().map(|&x| {
        let x = real(x);
        (sd.backward(&fp, x), e2 * p(x))
    })))
}

/// `|φ_0(x - i h; λ+δ)|^2 = |V(x; λ)| |φ(x - i h)|^2 |φ_0(x; λ)|^2` on the
/// real grid, as `max |ratio - 1|`.
pub fn ground_shift_identity_check(spec: &ModelSpec, grid: &[f64]) -> Result<f64> {
    let sd = shape_data(spec)?;
    let h = sd.h();
    let mut worst = 0.0f64;
    for &x in grid {
        let z = real(x);
        let lo = z - I * h;
        let lhs = sd.shifted.log_weight(lo)?.re;
        let rhs = spec.potential(z).norm().ln()
            + 2.0 * sd.varphi(lo).norm().ln()
            + spec.log_weight(z)?.re;
        worst = worst.max(((lhs - rhs).exp() - 1.0).abs());
    }
    Ok(worst)
}

/// Constants `(κ, κ†)` with `X̃ P_n(λ) = κ P_n(λ+δ)` and
/// `X̃† P_n(λ+δ) = κ† P_n(λ)`.
pub fn compensator_constants(spec: &ModelSpec, n: usize) -> Result<(f64, f64)> {
    let nf = n as f64;
    match spec.system() {
        System::MeixnerPollaczek { a } => Ok((2.0, nf + 2.0 * a)),
        System::ContinuousDualHahn { a } => Ok((
            1.0,
            (nf + a[0] + a[1]) * (nf + a[0] + a[2]) * (nf + a[1] + a[2]),
        )),
        _ => Err(Error::Unsupported(format!(
            "no factorized ladder operators for {}",
            spec.name()
        ))),
    }
}

/// The coefficient functions `c_±` of `S_±` in `X` for the dual Hahn model.
fn dual_hahn_c(spec: &ModelSpec, a: &[f64; 3], x: C64) -> (C64, C64) {
    let kappa = a.iter().map(|v| 2.0 * v - 1.0).product::<f64>() / (8.0 * (1.0 + x * x));
    (
        x - I * spec.potential_conj(x + 0.5 * I) - I * kappa,
        x + I * spec.potential(x - 0.5 * I) + I * kappa,
    )
}

fn x_tilde(sd: &ShapeData, g: &dyn Fn(C64) -> C64, x: C64) -> C64 {
    let spec = &sd.base;
    match spec.system() {
        System::MeixnerPollaczek { .. } => g(x - 0.5 * I) + g(x + 0.5 * I),
        System::ContinuousDualHahn { a } => {
            let (cp, cm) = dual_hahn_c(spec, a, x);
            (-I * spec.potential(x - 0.5 * I) * g(x - 1.5 * I)
                + cp * g(x - 0.5 * I)
                + I * spec.potential_conj(x + 0.5 * I) * g(x + 1.5 * I)
                + cm * g(x + 0.5 * I))
                / sd.varphi(x)
        }
        _ => unreachable!("checked by compensator_constants"),
    }
}

fn x_dagger_tilde(sd: &ShapeData, g: &dyn Fn(C64) -> C64, x: C64) -> C64 {
    let spec = &sd.base;
    let v = spec.potential(x);
    let vc = spec.potential_conj(x);
    match spec.system() {
        System::MeixnerPollaczek { .. } => v * g(x - 0.5 * I) + vc * g(x + 0.5 * I),
        System::ContinuousDualHahn { a } => {
            let phi_g = |z: C64| sd.varphi(z) * g(z);
            let (lo, hi) = (x - 0.5 * I, x + 0.5 * I);
            // c_+^* = c_- as analytic functions
            let (_, cm_lo) = dual_hahn_c(spec, a, lo);
            let (cp_hi, _) = dual_hahn_c(spec, a, hi);
            I * v * spec.potential(x - I) * phi_g(x - 1.5 * I) + v * cm_lo * phi_g(lo)
                - I * vc * spec.potential_conj(x + I) * phi_g(x + 1.5 * I)
                + vc * cp_hi * phi_g(hi)
        }
        _ => unreachable!("checked by compensator_constants"),
    }
}

/// Residuals of `X̃ P_n(λ) = κ P_n(λ+δ)` and `X̃† P_n(λ+δ) = κ† P_n(λ)`.
pub fn compensator_check(spec: &ModelSpec, n: usize, grid: &[f64]) -> Result<(f64, f64)> {
    let (k, kd) = compensator_constants(spec, n)?;
    let sd = shape_data(spec)?;
    let (p, q) = (sd.p(n), sd.p_shifted(n));
    let rx = relative(grid.iter().map(|&x| {
        let x = real(x);
        (x_tilde(&sd, &p, x), k * q(x))
    }));
    let rxd = relative(grid.iter().map(|&x| {
        let x = real(x);
        (x_dagger_tilde(&sd, &q, x), kd * p(x))
    }));
    Ok((rx, rxd))
}

/// `a^(-) φ_n = c_- φ_{n-1}` and `a^(+) φ_n = c_+ φ_{n+1}` from the
/// factorizations `a^(-) ∝ X† A`, `a^(+) ∝ A† X`.
pub fn factorized_ladder_coefficients(spec: &ModelSpec, n: usize) -> Result<(f64, f64)> {
    let sd = shape_data(spec)?;
    let norm = match spec.name() {
        ModelName::MeixnerPollaczek => 4.0,
        _ => 1.0,
    };
    let (k, _) = compensator_constants(spec, n)?;
    let down = if n == 0 {
        0.0
    } else {
        sd.f(n) * compensator_constants(spec, n - 1)?.1 / norm
    };
    Ok((down, k * sd.b(n) / norm))
}

/// Closure coefficients `(r_1, r_0^(0), r_{-1}^(1), r_{-1}^(0))` of an
/// ordinary model; `R_0` and `R_{-1}` are at most linear in `H`.
pub fn ordinary_r_coefficients(spec: &ModelSpec) -> Result<(f64, f64, f64, f64)> {
    if spec.kind().is_discrete() {
        return Err(Error::Unsupported(format!("{} is a difference-equation model", spec.name())));
    }
    let c = spec.closure();
    let at = |p: &crate::models::Poly, k: usize| p.0.get(k).copied().unwrap_or(0.0);
    Ok((at(&c.r1, 0), at(&c.r0, 0), at(&c.rm1, 1), at(&c.rm1, 0)))
}

/// `W' = (a η + b)/η'` with `a = -sqrt(r_0^(0) + r_1^2/4)` and
/// `b = 2 r_{-1}^(0)/(2a + r_1) + r_{-1}^(1)/4`.
pub fn prepotential_ab(r1: f64, r00: f64, rm11: f64, rm10: f64) -> (f64, f64) {
    let a = -(r00 + r1 * r1 / 4.0).sqrt();
    (a, 2.0 * rm10 / (2.0 * a + r1) + rm11 / 4.0)
}

/// `max |V - (W'^2 + W'')/2| / max(1, |V|)` with `W'` from the closure data.
pub fn prepotential_check(spec: &ModelSpec, grid: &[f64]) -> Result<f64> {
    let (r1, r00, rm11, rm10) = ordinary_r_coefficients(spec)?;
    let (a, b) = prepotential_ab(r1, r00, rm11, rm10);
    let mut worst = 0.0f64;
    for &x in grid {
        let e = spec.eta_jet(x);
        let w1 = (a * e.v + b) / e.d1;
        let w2 = (a * e.d1 * e.d1 - (a * e.v + b) * e.d2) / (e.d1 * e.d1);
        let v = spec.potential(real(x)).re;
        worst = worst.max((v - (w1 * w1 + w2) / 2.0).abs() / v.abs().max(1.0));
    }
    Ok(worst)
}
