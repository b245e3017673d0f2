//! Ordinary potentials admitting a sinusoidal coordinate: construction from
//! the closure coefficients, the three defining conditions, recognition of the
//! registry models and least-squares evidence against other potentials.

use nalgebra::{DMatrix, DVector};

use crate::models::{get_model, ModelName, ModelSpec, Params};
use crate::shape_invariance::prepotential_ab;
use crate::{Error, Result};

/// Closure data `R_0 = 2 r_1 H + r_0^(0)`, `R_1 = r_1`,
/// `R_{-1} = r_{-1}^(1) H + r_{-1}^(0)` plus the integration constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinusoidalParams {
    pub r1: f64,
    pub r0_0: f64,
    pub rm1_1: f64,
    pub rm1_0: f64,
    pub c: f64,
    pub c1: f64,
    pub c2: f64,
}

impl SinusoidalParams {
    pub fn r0_1(&self) -> f64 {
        2.0 * self.r1
    }

    pub fn coefficients(&self) -> RCoefficients {
        RCoefficients {
            r1: self.r1,
            r0_1: self.r0_1(),
            rm1_1: self.rm1_1,
            r0_0: self.r0_0,
            rm1_0: self.rm1_0,
        }
    }

    /// The integration constant `c` for which the ground-state energy is zero,
    /// i.e. for which the prepotential formula holds without an additive
    /// constant. `None` when that formula has no real solution.
    pub fn zero_ground_energy_c(&self) -> Option<f64> {
        let d = self.r0_0 + self.r1 * self.r1 / 4.0;
        if d < 0.0 {
            return None;
        }
        let (a, b) = prepotential_ab(self.r1, self.r0_0, self.rm1_1, self.rm1_0);
        if !b.is_finite() {
            return None;
        }
        let eta = EtaForm::new(self).ok()?;
        let [e, e1, ..] = eta.derivs(0.0);
        // η'^2 = -r_1 η^2 - r_{-1}^(1) η + K
        let k = e1 * e1 + self.r1 * e * e + self.rm1_1 * e;
        let kappa = -(a + self.r1 / 4.0) / 2.0;
        Some((b * b + b * self.rm1_1 / 2.0) / 2.0 - kappa * k)
    }
}

/// The five closure coefficients entering the conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RCoefficients {
    pub r1: f64,
    pub r0_1: f64,
    pub rm1_1: f64,
    pub r0_0: f64,
    pub rm1_0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Rational,
    Trigonometric,
    Hyperbolic,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Rational => "rational",
            Family::Trigonometric => "trigonometric",
            Family::Hyperbolic => "hyperbolic",
        }
    }
}

/// `η = offset + quad x^2 + c1 f(kx) + c2 g(kx)` with `(f, g)` = `(x, 0)`,
/// `(cos, sin)` or `(cosh, sinh)` by family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaForm {
    pub family: Family,
    pub k: f64,
    pub offset: f64,
    pub quad: f64,
    pub c1: f64,
    pub c2: f64,
}

impl EtaForm {
    fn new(p: &SinusoidalParams) -> Result<Self> {
        let degenerate = || Error::Constraint("dη/dx vanishes identically".into());
        if p.r1 == 0.0 {
            let quad = -p.rm1_1 / 4.0;
            if quad == 0.0 && p.c1 == 0.0 {
                return Err(degenerate());
            }
            return Ok(EtaForm { family: Family::Rational, k: 0.0, offset: p.c2, quad, c1: p.c1, c2: 0.0 });
        }
        if p.c1 == 0.0 && p.c2 == 0.0 {
            return Err(degenerate());
        }
        let family = if p.r1 > 0.0 { Family::Trigonometric } else { Family::Hyperbolic };
        Ok(EtaForm {
            family,
            k: p.r1.abs().sqrt(),
            offset: -p.rm1_1 / (2.0 * p.r1),
            quad: 0.0,
            c1: p.c1,
            c2: p.c2,
        })
    }

    /// `[η, η', η'', η''', η'''']`.
    pub fn derivs(&self, x: f64) -> [f64; 5] {
        match self.family {
            Family::Rational => {
                let q = self.quad;
                [q * x * x + self.c1 * x + self.offset, 2.0 * q * x + self.c1, 2.0 * q, 0.0, 0.0]
            }
            Family::Trigonometric | Family::Hyperbolic => {
                let k = self.k;
                let (f, g, sign) = match self.family {
                    Family::Trigonometric => ((k * x).cos(), (k * x).sin(), -1.0),
                    _ => ((k * x).cosh(), (k * x).sinh(), 1.0),
                };
                let v = self.c1 * f + self.c2 * g;
                let d = k * (sign * self.c1 * g + self.c2 * f);
                let k2 = sign * k * k;
                [self.offset + v, d, k2 * v, k2 * d, k2 * k2 * v]
            }
        }
    }

    pub fn describe(&self) -> String {
        // adding 0.0 turns -0.0 into 0.0
        let z = |v: f64| v + 0.0;
        let (offset, quad, c1, c2) = (z(self.offset), z(self.quad), z(self.c1), z(self.c2));
        match self.family {
            Family::Rational => format!("{} x^2 + {} x + {}", quad, c1, offset),
            Family::Trigonometric => format!("{} + {} cos({} x) + {} sin({} x)", offset, c1, self.k, c2, self.k),
            Family::Hyperbolic => format!("{} + {} cosh({} x) + {} sinh({} x)", offset, c1, self.k, c2, self.k),
        }
    }
}

/// A potential built from closure data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constructed {
    pub params: SinusoidalParams,
    pub eta: EtaForm,
}

impl Constructed {
    pub fn family(&self) -> Family {
        self.eta.family
    }

    /// `N(η) = r_0^(0) η^2/2 + r_{-1}^(0) η + c` as `[n2, n1, n0]`.
    fn numerator(&self) -> [f64; 3] {
        [self.params.r0_0 / 2.0, self.params.rm1_0, self.params.c]
    }

    /// `N` re-expanded in `w = η - c0`.
    fn centered(&self, c0: f64) -> [f64; 3] {
        let [n2, n1, n0] = self.numerator();
        [n2, 2.0 * n2 * c0 + n1, n2 * c0 * c0 + n1 * c0 + n0]
    }

    /// `[V, V']` with `V = N(η)/η'^2 - r_1/8`.
    pub fn potential(&self, x: f64) -> [f64; 2] {
        let [e, e1, e2, ..] = self.eta.derivs(x);
        let [n2, n1, n0] = self.numerator();
        let n = n2 * e * e + n1 * e + n0;
        let dn = (2.0 * n2 * e + n1) * e1;
        [n / (e1 * e1) - self.params.r1 / 8.0, dn / (e1 * e1) - 2.0 * n * e2 / (e1 * e1 * e1)]
    }
}

pub fn construct(params: SinusoidalParams) -> Result<Constructed> {
    Ok(Constructed { params, eta: EtaForm::new(&params)? })
}

/// Pointwise residuals of the three conditions, each relative to the largest
/// term in it (floor 1), maximized over the grid.
pub fn condition_residuals(
    eta: &dyn Fn(f64) -> [f64; 5],
    v: &dyn Fn(f64) -> [f64; 2],
    r: &RCoefficients,
    grid: &[f64],
) -> [f64; 3] {
    let mut out = [0.0f64; 3];
    for &x in grid {
        let [e, e1, e2, e3, e4] = eta(x);
        let [vv, v1] = v(x);
        let rel = |terms: &[f64]| {
            let s: f64 = terms.iter().sum();
            s.abs() / terms.iter().fold(1.0f64, |m, t| m.max(t.abs()))
        };
        let c1 = rel(&[e2, r.r0_1 * e / 2.0, r.rm1_1 / 2.0]);
        let c2 = rel(&[e3, r.r1 * e1]);
        let c3 = rel(&[
            e4 / 4.0,
            e1 * v1,
            r.r1 * e2 / 2.0,
            -r.r0_1 * e * vv,
            -r.rm1_1 * vv,
            -r.r0_0 * e,
            -r.rm1_0,
        ]);
        for (o, c) in out.iter_mut().zip([c1, c2, c3]) {
            *o = o.max(c);
        }
    }
    out
}

pub fn verify_conditions(c: &Constructed, grid: &[f64]) -> [f64; 3] {
    condition_residuals(&|x| c.eta.derivs(x), &|x| c.potential(x), &c.params.coefficients(), grid)
}

/// `max |V - (W'^2 + W'')/2| / max(1, |V|)` with the prepotential from
/// `a = -sqrt(r_0^(0) + r_1^2/4)` and the matching `b`.
pub fn prepotential_residual(c: &Constructed, grid: &[f64]) -> f64 {
    let p = &c.params;
    let (a, b) = prepotential_ab(p.r1, p.r0_0, p.rm1_1, p.rm1_0);
    grid.iter()
        .map(|&x| {
            let [e, e1, e2, ..] = c.eta.derivs(x);
            let w1 = (a * e + b) / e1;
            let w2 = a - (a * e + b) * e2 / (e1 * e1);
            let v = c.potential(x)[0];
            (v - (w1 * w1 + w2) / 2.0).abs() / v.abs().max(1.0)
        })
        .fold(0.0, f64::max)
}

/// A registry model related to a constructed potential by
/// `x_new = orientation * scale * (x - origin)` and `H_new = H/scale^2 - offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct KnownMatch {
    pub model: ModelSpec,
    pub scale: f64,
    pub origin: f64,
    pub orientation: f64,
    pub energy_offset: f64,
}

/// Candidate before numerical confirmation.
struct Candidate {
    name: ModelName,
    params: Params,
    scale: f64,
    origin: f64,
    orientation: f64,
}

fn radial_g(coef: f64) -> Option<f64> {
    // g (g - 1)/2 = coef, larger root
    let d = 0.25 + 2.0 * coef;
    (d >= 0.0).then(|| 0.5 + d.sqrt())
}

fn candidate(c: &Constructed) -> Option<Candidate> {
    let e = &c.eta;
    let tiny = |v: f64, scale: f64| v.abs() <= 1e-12 * scale.abs().max(1.0);
    match e.family {
        Family::Rational if e.quad == 0.0 => {
            // V = A x^2 + B x + const
            let [n2, n1, _] = c.centered(e.offset);
            let (a, b) = (n2, n1 / e.c1);
            (a > 0.0).then(|| Candidate {
                name: ModelName::Harmonic,
                params: Params::none(),
                scale: (2.0 * a).powf(0.25),
                origin: -b / (2.0 * a),
                orientation: 1.0,
            })
        }
        Family::Rational => {
            let q = e.quad;
            let x0 = -e.c1 / (2.0 * q);
            let gamma = e.offset - e.c1 * e.c1 / (4.0 * q);
            let [b2, _, b0] = c.centered(gamma);
            let (a, cc) = (b2 / 4.0, b0 / (4.0 * q * q));
            if a <= 0.0 {
                return None;
            }
            Some(Candidate {
                name: ModelName::RadialOscillator,
                params: Params::g(radial_g(cc)?),
                scale: (2.0 * a).powf(0.25),
                origin: x0,
                orientation: 1.0,
            })
        }
        Family::Trigonometric => {
            let k = e.k;
            let r = e.c1.hypot(e.c2);
            let phi = e.c2.atan2(e.c1);
            let [b2, b1, b0] = c.centered(e.offset);
            let (a2, a1, a0) = (b2 * r * r, b1 * r, b0);
            let alpha = (a2 + a1 + a0) / 2.0;
            let beta = (a2 - a1 + a0) / 2.0;
            let norm = r * r * k.powi(4);
            if tiny(a1, a2.abs().max(a0.abs())) {
                // 2α / sin^2(kx - φ)
                Some(Candidate {
                    name: ModelName::SymPoschlTeller,
                    params: Params::g(radial_g(2.0 * alpha / norm)?),
                    scale: k,
                    origin: phi / k,
                    orientation: 1.0,
                })
            } else {
                // y = (kx - φ)/2
                Some(Candidate {
                    name: ModelName::PoschlTeller,
                    params: Params::gh(radial_g(2.0 * alpha / norm)?, radial_g(2.0 * beta / norm)?),
                    scale: k / 2.0,
                    origin: phi / k,
                    orientation: 1.0,
                })
            }
        }
        Family::Hyperbolic => {
            let k = e.k;
            let (c1, c2) = (e.c1, e.c2);
            let [b2, b1, b0] = c.centered(e.offset);
            if tiny(c1.abs() - c2.abs(), c1) {
                // η - offset = c1 e^{σ k x}
                let sigma = (c1 * c2).signum();
                if b0 <= 0.0 {
                    return None;
                }
                let eps = c1.signum();
                let rho = (2.0 * b0).sqrt() / (k * k * c1.abs());
                let g = (-2.0 * eps * b1 / (k.powi(4) * c1.abs() * rho) - 1.0) / 2.0;
                // x_new = -σ k x + ln ρ
                Some(Candidate {
                    name: ModelName::Morse,
                    params: Params::morse(g, 1.0),
                    scale: k,
                    origin: rho.ln() / (sigma * k),
                    orientation: -sigma,
                })
            } else if c2.abs() > c1.abs() {
                // c1 cosh + c2 sinh = R sinh(kx + ψ)
                let rr = c2.signum() * (c2 * c2 - c1 * c1).sqrt();
                let psi = (c1 / c2).atanh();
                let (a2, a1, a0) = (b2 * rr * rr, b1 * rr, b0);
                if !tiny(a1, a2.abs().max(a0.abs())) {
                    return None;
                }
                let d = (a0 - a2) / (rr * rr * k.powi(4));
                let disc = 0.25 - 2.0 * d;
                Some(Candidate {
                    name: ModelName::Soliton,
                    params: Params::g(-0.5 + disc.max(0.0).sqrt()),
                    scale: k,
                    origin: -psi / k,
                    orientation: 1.0,
                })
            } else {
                // hyperbolic Pöschl-Teller and symmetric tops are not in the registry
                None
            }
        }
    }
}

/// Registry model whose potential agrees with `c` up to an affine change of
/// coordinate and an additive constant, confirmed on the model's own window.
pub fn match_known_model(c: &Constructed) -> Option<KnownMatch> {
    let cand = candidate(c)?;
    let model = get_model(cand.name, &cand.params).ok()?;
    let (lo, hi) = model.sample_window();
    let mut diffs = Vec::new();
    let mut scale = 1.0f64;
    for i in 0..=32 {
        let xn = lo + (hi - lo) * (i as f64 + 0.5) / 33.0;
        let x = cand.origin + xn / (cand.orientation * cand.scale);
        let v = c.potential(x)[0] / (cand.scale * cand.scale);
        let vm = model.potential(crate::C64::new(xn, 0.0)).re;
        scale = scale.max(vm.abs());
        diffs.push(v - vm);
    }
    let offset = diffs.iter().sum::<f64>() / diffs.len() as f64;
    if diffs.iter().any(|d| (d - offset).abs() > 1e-8 * scale) {
        return None;
    }
    Some(KnownMatch {
        model,
        scale: cand.scale,
        origin: cand.origin,
        orientation: cand.orientation,
        energy_offset: offset,
    })
}

/// Shapes tried when fitting an arbitrary potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EtaAnsatz {
    Linear,
    Quadratic { x0: f64 },
    Cos { k: f64, x0: f64 },
    Cosh { k: f64, x0: f64 },
    Sinh { k: f64, x0: f64 },
    Exp { k: f64 },
}

impl EtaAnsatz {
    pub fn derivs(&self, x: f64) -> [f64; 5] {
        match *self {
            EtaAnsatz::Linear => [x, 1.0, 0.0, 0.0, 0.0],
            EtaAnsatz::Quadratic { x0 } => {
                let y = x - x0;
                [y * y, 2.0 * y, 2.0, 0.0, 0.0]
            }
            EtaAnsatz::Cos { k, x0 } => {
                let (s, c) = (k * (x - x0)).sin_cos();
                [c, -k * s, -k * k * c, k.powi(3) * s, k.powi(4) * c]
            }
            EtaAnsatz::Cosh { k, x0 } => {
                let (s, c) = ((k * (x - x0)).sinh(), (k * (x - x0)).cosh());
                [c, k * s, k * k * c, k.powi(3) * s, k.powi(4) * c]
            }
            EtaAnsatz::Sinh { k, x0 } => {
                let (s, c) = ((k * (x - x0)).sinh(), (k * (x - x0)).cosh());
                [s, k * c, k * k * s, k.powi(3) * c, k.powi(4) * s]
            }
            EtaAnsatz::Exp { k } => {
                let e = (k * x).exp();
                [e, k * e, k * k * e, k.powi(3) * e, k.powi(4) * e]
            }
        }
    }

    fn with(&self, p: &[f64]) -> Self {
        match *self {
            EtaAnsatz::Linear => EtaAnsatz::Linear,
            EtaAnsatz::Quadratic { .. } => EtaAnsatz::Quadratic { x0: p[0] },
            EtaAnsatz::Cos { .. } => EtaAnsatz::Cos { k: p[0], x0: p[1] },
            EtaAnsatz::Cosh { .. } => EtaAnsatz::Cosh { k: p[0], x0: p[1] },
            EtaAnsatz::Sinh { .. } => EtaAnsatz::Sinh { k: p[0], x0: p[1] },
            EtaAnsatz::Exp { .. } => EtaAnsatz::Exp { k: p[0] },
        }
    }
}

/// Least-squares fit of `V ≈ (A η^2 + B η + C)/η'^2 + D`, the integrated form
/// of the third condition. Returns `[A, B, C, D]` and the RMS misfit relative
/// to the RMS variation of `V` about its mean.
pub fn fit_potential(
    eta: &dyn Fn(f64) -> [f64; 5],
    v: &dyn Fn(f64) -> [f64; 2],
    grid: &[f64],
) -> ([f64; 4], f64) {
    let failed = ([f64::NAN; 4], f64::INFINITY);
    let n = grid.len();
    let mut a = DMatrix::<f64>::zeros(n, 4);
    let mut b = DVector::<f64>::zeros(n);
    for (i, &x) in grid.iter().enumerate() {
        let [e, e1, ..] = eta(x);
        let q = e1 * e1;
        for (j, val) in [e * e / q, e / q, 1.0 / q, 1.0].into_iter().enumerate() {
            a[(i, j)] = val;
        }
        b[i] = v(x)[0];
    }
    if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
        return failed;
    }
    let norms: Vec<f64> = (0..4).map(|j| a.column(j).norm()).collect();
    if norms.contains(&0.0) {
        return failed;
    }
    for (j, c) in norms.iter().enumerate() {
        a.column_mut(j).unscale_mut(*c);
    }
    let Ok(u) = a.clone().svd(true, true).solve(&b, 1e-14) else {
        return failed;
    };
    let mean = b.mean();
    let spread = b.iter().map(|v| (v - mean).powi(2)).sum::<f64>().sqrt();
    let res = (&a * &u - &b).norm() / spread;
    let coef = [u[0] / norms[0], u[1] / norms[1], u[2] / norms[2], u[3] / norms[3]];
    (coef, if res.is_finite() { res } else { f64::INFINITY })
}

/// Compass search over the ansatz parameters from a coarse grid, confined to
/// `bounds`.
fn best_fit(
    ansatz: EtaAnsatz,
    starts: &[Vec<f64>],
    bounds: &[(f64, f64)],
    v: &dyn Fn(f64) -> [f64; 2],
    grid: &[f64],
) -> (EtaAnsatz, f64) {
    let eval = |p: &[f64]| {
        if p.iter().zip(bounds).any(|(x, (lo, hi))| x < lo || x > hi) {
            return f64::INFINITY;
        }
        let a = ansatz.with(p);
        let r = fit_potential(&|x| a.derivs(x), v, grid).1;
        if r.is_finite() {
            r
        } else {
            f64::INFINITY
        }
    };
    let (mut p, mut best) = starts
        .iter()
        .map(|s| (s.clone(), eval(s)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one start");
    let mut step = 0.25;
    let mut evals = 0;
    while step > 1e-13 && !p.is_empty() && evals < 4000 {
        evals += 2 * p.len();
        let mut moved = false;
        for i in 0..p.len() {
            for d in [step, -step] {
                let mut t = p.clone();
                t[i] += d;
                let r = eval(&t);
                if r < best {
                    best = r;
                    p = t;
                    moved = true;
                }
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    (ansatz.with(&p), best)
}

/// Smallest condition residual over all sinusoidal-coordinate shapes.
pub fn best_sinusoidal_fit(v: &dyn Fn(f64) -> [f64; 2], grid: &[f64]) -> (EtaAnsatz, f64) {
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    let span = hi - lo;
    let ks: Vec<f64> = (1..=16).map(|i| 0.25 * i as f64).collect();
    let shifts = |n: usize, from: f64, to: f64| -> Vec<f64> {
        (0..=n).map(|i| from + (to - from) * i as f64 / n as f64).collect()
    };
    let pairs = |x0s: &dyn Fn(f64) -> Vec<f64>| -> Vec<Vec<f64>> {
        ks.iter().flat_map(|&k| x0s(k).into_iter().map(move |x0| vec![k, x0])).collect()
    };
    let k_range = (0.02, 4.5);
    let x0_range = (lo - 2.0 * span, hi + 2.0 * span);
    let mut fits = vec![
        best_fit(EtaAnsatz::Linear, &[vec![]], &[], v, grid),
        best_fit(
            EtaAnsatz::Quadratic { x0: 0.0 },
            &shifts(40, x0_range.0, x0_range.1).into_iter().map(|x| vec![x]).collect::<Vec<_>>(),
            &[x0_range],
            v,
            grid,
        ),
        best_fit(
            EtaAnsatz::Cos { k: 1.0, x0: 0.0 },
            &pairs(&|k| shifts(16, -std::f64::consts::PI / k, std::f64::consts::PI / k)),
            &[k_range, (-std::f64::consts::PI / k_range.0, std::f64::consts::PI / k_range.0)],
            v,
            grid,
        ),
        best_fit(
            EtaAnsatz::Cosh { k: 1.0, x0: 0.0 },
            &pairs(&|_| shifts(16, lo - span, hi + span)),
            &[k_range, x0_range],
            v,
            grid,
        ),
        best_fit(
            EtaAnsatz::Sinh { k: 1.0, x0: 0.0 },
            &pairs(&|_| shifts(16, lo - span, hi + span)),
            &[k_range, x0_range],
            v,
            grid,
        ),
    ];
    for sign in [1.0, -1.0] {
        let range = if sign > 0.0 { k_range } else { (-k_range.1, -k_range.0) };
        fits.push(best_fit(
            EtaAnsatz::Exp { k: sign },
            &ks.iter().map(|k| vec![sign * k]).collect::<Vec<_>>(),
            &[range],
            v,
            grid,
        ));
    }
    fits.into_iter().min_by(|a, b| a.1.total_cmp(&b.1)).expect("non-empty")
}

/// A named potential with `[V, V']` and the interval it is fitted on.
pub struct TestPotential {
    pub name: &'static str,
    pub v: Box<dyn Fn(f64) -> [f64; 2] + Send + Sync>,
    pub window: (f64, f64),
}

/// Names accepted by [`negative_example`].
pub const NEGATIVE_EXAMPLES: [&str; 4] = ["kepler-rational", "kepler-spherical", "kepler-hyperbolic", "rosen-morse"];

/// One of the potentials without a sinusoidal coordinate at coupling `g`
/// and strength `mu`.
pub fn negative_example(name: &str, g: f64, mu: f64) -> Option<TestPotential> {
    let p = match name {
        "kepler-rational" => TestPotential {
            name: "kepler-rational",
            v: Box::new(move |x| {
                [
                    0.5 * (-2.0 / x + g * (g - 1.0) / (x * x) + 1.0 / (g * g)),
                    0.5 * (2.0 / (x * x) - 2.0 * g * (g - 1.0) / x.powi(3)),
                ]
            }),
            window: (0.5, 8.0),
        },
        "kepler-spherical" => TestPotential {
            name: "kepler-spherical",
            v: Box::new(move |x| {
                let (s, c) = x.sin_cos();
                [
                    0.5 * (-2.0 * mu * c / s + g * (g - 1.0) / (s * s) + mu * mu / (g * g) - g * g),
                    0.5 * (2.0 * mu / (s * s) - 2.0 * g * (g - 1.0) * c / s.powi(3)),
                ]
            }),
            window: (0.2, std::f64::consts::PI - 0.2),
        },
        "kepler-hyperbolic" => TestPotential {
            name: "kepler-hyperbolic",
            v: Box::new(move |x| {
                let (s, c) = (x.sinh(), x.cosh());
                [
                    0.5 * (-2.0 * mu * c / s + g * (g - 1.0) / (s * s) + mu * mu / (g * g) + g * g),
                    0.5 * (2.0 * mu / (s * s) - 2.0 * g * (g - 1.0) * c / s.powi(3)),
                ]
            }),
            window: (0.3, 4.0),
        },
        "rosen-morse" => TestPotential {
            name: "rosen-morse",
            v: Box::new(move |x| {
                let (t, c) = (x.tanh(), x.cosh());
                [
                    0.5 * (2.0 * mu * t - g * (g + 1.0) / (c * c) + mu * mu / (g * g) + g * g),
                    0.5 * (2.0 * mu / (c * c) + 2.0 * g * (g + 1.0) * t / (c * c)),
                ]
            }),
            window: (-3.0, 3.0),
        },
        _ => return None,
    };
    Some(p)
}

/// Default couplings of the negative examples: Kepler forms at `g = 1.5`,
/// Rosen-Morse at `g = 2`, all with `mu = 1`.
pub fn default_coupling(name: &str) -> (f64, f64) {
    if name == "rosen-morse" {
        (2.0, 1.0)
    } else {
        (1.5, 1.0)
    }
}

/// The four negative examples at default couplings, and the symmetric
/// Pöschl-Teller potential as a positive control (last).
pub fn example_potentials() -> Vec<TestPotential> {
    let gr = 2.0;
    let mut out: Vec<TestPotential> = NEGATIVE_EXAMPLES
        .iter()
        .filter_map(|&n| {
            let (g, mu) = default_coupling(n);
            negative_example(n, g, mu)
        })
        .collect();
    out.push(TestPotential {
        name: "control-sym-poschl-teller",
        v: Box::new(move |x| {
            let (s, c) = x.sin_cos();
            [
                gr * (gr - 1.0) / (2.0 * s * s) - gr * gr / 2.0,
                -gr * (gr - 1.0) * c / s.powi(3),
            ]
        }),
        window: (0.2, std::f64::consts::PI - 0.2),
    });
    out
}

/// Best-fit residual of a potential on a 200-point grid of its window.
pub fn negative_fit(p: &TestPotential) -> (EtaAnsatz, f64) {
    best_sinusoidal_fit(&*p.v, &uniform_grid(p.window, 200))
}

pub fn uniform_grid((lo, hi): (f64, f64), n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Best-fit residual of each example potential on a 200-point grid.
pub fn negative_example_suite() -> Vec<(&'static str, f64)> {
    use rayon::prelude::*;
    example_potentials()
        .par_iter()
        .map(|p| (p.name, negative_fit(p).1))
        .collect()
}
