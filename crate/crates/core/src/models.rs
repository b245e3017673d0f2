//! Registry of the eleven exactly solvable systems: spectra, sinusoidal
//! coordinates, closure polynomials, ladder coefficients, potentials and
//! ground states.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::orthopoly::{self, PolynomialFamily};
use crate::specfun::{log_gamma, q_pochhammer, QLen};
use crate::{Error, Result, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelName {
    Harmonic,
    SymPoschlTeller,
    PoschlTeller,
    Soliton,
    Morse,
    RadialOscillator,
    MeixnerPollaczek,
    ContinuousHahn,
    ContinuousDualHahn,
    Wilson,
    AskeyWilson,
}

impl ModelName {
    pub const ALL: [ModelName; 11] = [
        ModelName::Harmonic,
        ModelName::SymPoschlTeller,
        ModelName::PoschlTeller,
        ModelName::Soliton,
        ModelName::Morse,
        ModelName::RadialOscillator,
        ModelName::MeixnerPollaczek,
        ModelName::ContinuousHahn,
        ModelName::ContinuousDualHahn,
        ModelName::Wilson,
        ModelName::AskeyWilson,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            ModelName::Harmonic => "harmonic",
            ModelName::SymPoschlTeller => "sym-poschl-teller",
            ModelName::PoschlTeller => "poschl-teller",
            ModelName::Soliton => "soliton",
            ModelName::Morse => "morse",
            ModelName::RadialOscillator => "radial-oscillator",
            ModelName::MeixnerPollaczek => "meixner-pollaczek",
            ModelName::ContinuousHahn => "continuous-hahn",
            ModelName::ContinuousDualHahn => "continuous-dual-hahn",
            ModelName::Wilson => "wilson",
            ModelName::AskeyWilson => "askey-wilson",
        }
    }

    pub fn from_slug(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.slug() == s)
    }

    pub fn kind(self) -> Kind {
        match self {
            ModelName::MeixnerPollaczek
            | ModelName::ContinuousHahn
            | ModelName::ContinuousDualHahn
            | ModelName::Wilson => Kind::DiscreteUnitShift,
            ModelName::AskeyWilson => Kind::DiscreteQShift,
            _ => Kind::Ordinary,
        }
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Ordinary,
    DiscreteUnitShift,
    DiscreteQShift,
}

impl Kind {
    pub fn is_discrete(self) -> bool {
        self != Kind::Ordinary
    }
}

/// Loose parameter bag used to build a model; each model reads the entries it needs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    pub g: Option<f64>,
    pub h: Option<f64>,
    pub mu: Option<f64>,
    pub a: Vec<f64>,
    pub q: Option<f64>,
}

impl Params {
    pub fn none() -> Self {
        Self::default()
    }
    pub fn g(g: f64) -> Self {
        Self {
            g: Some(g),
            ..Self::default()
        }
    }
    pub fn gh(g: f64, h: f64) -> Self {
        Self {
            g: Some(g),
            h: Some(h),
            ..Self::default()
        }
    }
    pub fn morse(g: f64, mu: f64) -> Self {
        Self {
            g: Some(g),
            mu: Some(mu),
            ..Self::default()
        }
    }
    pub fn a(a: &[f64]) -> Self {
        Self {
            a: a.to_vec(),
            ..Self::default()
        }
    }
    pub fn aq(a: &[f64], q: f64) -> Self {
        Self {
            a: a.to_vec(),
            q: Some(q),
            ..Self::default()
        }
    }
}

/// The solvable systems with their validated parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum System {
    Harmonic,
    SymPoschlTeller { g: f64 },
    PoschlTeller { g: f64, h: f64 },
    Soliton { g: f64 },
    Morse { g: f64, mu: f64 },
    RadialOscillator { g: f64 },
    MeixnerPollaczek { a: f64 },
    ContinuousHahn { a1: f64, a2: f64 },
    ContinuousDualHahn { a: [f64; 3] },
    Wilson { a: [f64; 4] },
    AskeyWilson { a: [f64; 4], q: f64 },
}

/// Polynomial in `H` with coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

/// `R_0`, `R_1`, `R_{-1}` of the double-commutator closure.
#[derive(Debug, Clone, PartialEq)]
pub struct Closure {
    pub r0: Poly,
    pub r1: Poly,
    pub rm1: Poly,
}

/// `η φ_n = A φ_{n+1} + B φ_n + C φ_{n-1}` in the a-normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ladder {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Normalization in which a model's ladder actions are customarily quoted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderNorm {
    /// `a^(±)` itself.
    A,
    /// `a'^(±) = a^(±) (E_{n+1} - E_{n-1})` on `φ_n`.
    APrime,
    /// `a'^(±)/2`.
    HalfAPrime,
}

/// Ladder actions as closed forms in their customary normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuotedLadder {
    pub norm: LadderNorm,
    pub down: f64,
    pub up: f64,
    /// Factor turning a-normalized coefficients into the quoted ones.
    pub scale: f64,
}

/// Value and first two derivatives of a real function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    system: System,
}

fn need(v: Option<f64>, what: &str) -> Result<f64> {
    v.ok_or_else(|| Error::Constraint(format!("parameter {what} is required")))
}

fn need_a<const N: usize>(a: &[f64]) -> Result<[f64; N]> {
    a.try_into().map_err(|_| {
        Error::Constraint(format!(
            "exactly {N} parameters a_j are required, got {}",
            a.len()
        ))
    })
}

fn positive(v: f64, what: &str) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Constraint(format!(
            "{what} > 0 violated ({what} = {v})"
        )))
    }
}

/// Elementary symmetric polynomials `[1, b1, b2, b3, b4, ...]`.
pub fn elementary_symmetric(a: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; a.len() + 1];
    e[0] = 1.0;
    for (k, &x) in a.iter().enumerate() {
        for j in (1..=k + 1).rev() {
            e[j] += x * e[j - 1];
        }
    }
    e
}

fn pair_products_sum(a: &[f64], f: impl Fn(f64, f64) -> f64) -> f64 {
    let mut p = 1.0;
    for j in 0..a.len() {
        for k in j + 1..a.len() {
            p *= f(a[j], a[k]);
        }
    }
    p
}

/// Build a model, checking the parameter constraints.
pub fn get_model(name: ModelName, p: &Params) -> Result<ModelSpec> {
    let system = match name {
        ModelName::Harmonic => System::Harmonic,
        ModelName::SymPoschlTeller => System::SymPoschlTeller {
            g: positive(need(p.g, "g")?, "g")?,
        },
        ModelName::PoschlTeller => System::PoschlTeller {
            g: positive(need(p.g, "g")?, "g")?,
            h: positive(need(p.h, "h")?, "h")?,
        },
        ModelName::Soliton => System::Soliton {
            g: positive(need(p.g, "g")?, "g")?,
        },
        ModelName::Morse => System::Morse {
            g: positive(need(p.g, "g")?, "g")?,
            mu: positive(p.mu.unwrap_or(1.0), "mu")?,
        },
        ModelName::RadialOscillator => System::RadialOscillator {
            g: positive(need(p.g, "g")?, "g")?,
        },
        ModelName::MeixnerPollaczek => {
            let [a] = need_a::<1>(&p.a)?;
            System::MeixnerPollaczek {
                a: positive(a, "a")?,
            }
        }
        ModelName::ContinuousHahn => {
            let [a1, a2] = need_a::<2>(&p.a)?;
            System::ContinuousHahn {
                a1: positive(a1, "a_j")?,
                a2: positive(a2, "a_j")?,
            }
        }
        ModelName::ContinuousDualHahn => {
            let a = need_a::<3>(&p.a)?;
            for &x in &a {
                positive(x, "a_j")?;
            }
            System::ContinuousDualHahn { a }
        }
        ModelName::Wilson => {
            let a = need_a::<4>(&p.a)?;
            for &x in &a {
                positive(x, "a_j")?;
            }
            System::Wilson { a }
        }
        ModelName::AskeyWilson => {
            let a = need_a::<4>(&p.a)?;
            let q = need(p.q, "q")?;
            if !(q > 0.0 && q < 1.0) {
                return Err(Error::Constraint(format!("0 < q < 1 violated (q = {q})")));
            }
            for &x in &a {
                if !(x > -1.0 && x < 1.0) {
                    return Err(Error::Constraint(format!(
                        "-1 < a_j < 1 violated (a_j = {x})"
                    )));
                }
            }
            let b4 = a.iter().product::<f64>();
            if b4 >= q {
                return Err(Error::Constraint(format!(
                    "a1 a2 a3 a4 < q violated ({b4} >= {q})"
                )));
            }
            System::AskeyWilson { a, q }
        }
    };
    Ok(ModelSpec { system })
}

impl ModelSpec {
    pub fn system(&self) -> &System {
        &self.system
    }

    pub fn name(&self) -> ModelName {
        match self.system {
            System::Harmonic => ModelName::Harmonic,
            System::SymPoschlTeller { .. } => ModelName::SymPoschlTeller,
            System::PoschlTeller { .. } => ModelName::PoschlTeller,
            System::Soliton { .. } => ModelName::Soliton,
            System::Morse { .. } => ModelName::Morse,
            System::RadialOscillator { .. } => ModelName::RadialOscillator,
            System::MeixnerPollaczek { .. } => ModelName::MeixnerPollaczek,
            System::ContinuousHahn { .. } => ModelName::ContinuousHahn,
            System::ContinuousDualHahn { .. } => ModelName::ContinuousDualHahn,
            System::Wilson { .. } => ModelName::Wilson,
            System::AskeyWilson { .. } => ModelName::AskeyWilson,
        }
    }

    pub fn kind(&self) -> Kind {
        self.name().kind()
    }

    /// Parameters as `(key, value)` pairs, in a fixed order.
    pub fn param_list(&self) -> Vec<(String, f64)> {
        let kv = |k: &str, v: f64| (k.to_string(), v);
        let list = |a: &[f64]| {
            a.iter()
                .enumerate()
                .map(|(j, &v)| (format!("a{}", j + 1), v))
                .collect::<Vec<_>>()
        };
        match &self.system {
            System::Harmonic => vec![],
            System::SymPoschlTeller { g }
            | System::Soliton { g }
            | System::RadialOscillator { g } => vec![kv("g", *g)],
            System::PoschlTeller { g, h } => vec![kv("g", *g), kv("h", *h)],
            System::Morse { g, mu } => vec![kv("g", *g), kv("mu", *mu)],
            System::MeixnerPollaczek { a } => vec![kv("a", *a)],
            System::ContinuousHahn { a1, a2 } => list(&[*a1, *a2]),
            System::ContinuousDualHahn { a } => list(a),
            System::Wilson { a } => list(a),
            System::AskeyWilson { a, q } => {
                let mut l = list(a);
                l.push(kv("q", *q));
                l
            }
        }
    }

    /// Open interval of the coordinate `x`.
    pub fn domain(&self) -> (f64, f64) {
        match self.system {
            System::SymPoschlTeller { .. } | System::AskeyWilson { .. } => (0.0, PI),
            System::PoschlTeller { .. } => (0.0, FRAC_PI_2),
            System::RadialOscillator { .. }
            | System::ContinuousDualHahn { .. }
            | System::Wilson { .. } => (0.0, f64::INFINITY),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Finite window where the low eigenfunctions live; finite endpoints keep
    /// a relative margin away from the boundary.
    pub fn sample_window(&self) -> (f64, f64) {
        let (lo, hi) = self.domain();
        let m = crate::tolerances::GRID_MARGIN;
        if lo.is_finite() && hi.is_finite() {
            let w = hi - lo;
            return (lo + m * w, hi - m * w);
        }
        match self.system {
            System::Harmonic => (-6.0, 6.0),
            System::Soliton { .. } => (-4.0, 4.0),
            System::Morse { g, mu } => {
                // centre on the potential minimum e^x = g/mu
                let c = (g / mu).ln();
                (c - 3.0, c + 1.5)
            }
            System::RadialOscillator { .. } => (0.1, 5.0),
            System::ContinuousDualHahn { .. } | System::Wilson { .. } => (0.05, 6.0),
            _ => (-6.0, 6.0),
        }
    }

    /// `None` for an infinite spectrum.
    pub fn level_count(&self) -> Option<usize> {
        match self.system {
            // 1 + [g]', [g]' the greatest integer strictly below g
            System::Soliton { g } | System::Morse { g, .. } => Some(g.ceil() as usize),
            _ => None,
        }
    }

    pub fn check_level(&self, n: usize) -> Result<()> {
        match self.level_count() {
            Some(levels) if n >= levels => Err(Error::OutOfRange { n, levels }),
            _ => Ok(()),
        }
    }

    pub fn energy(&self, n: usize) -> Result<f64> {
        self.check_level(n)?;
        Ok(self.energy_ext(n as i64))
    }

    /// Closed-form spectrum continued to any integer index (used at `n = -1`).
    pub fn energy_ext(&self, n: i64) -> f64 {
        let n = n as f64;
        match self.system {
            System::Harmonic | System::MeixnerPollaczek { .. } => n,
            System::SymPoschlTeller { g } => n * (n / 2.0 + g),
            System::PoschlTeller { g, h } => 2.0 * n * (n + g + h),
            System::Soliton { g } | System::Morse { g, .. } => n * (g - n / 2.0),
            System::RadialOscillator { .. } => 2.0 * n,
            System::ContinuousHahn { a1, a2 } => n * (n + 2.0 * (a1 + a2) - 1.0) / 2.0,
            System::ContinuousDualHahn { .. } => n / 2.0,
            System::Wilson { a } => n * (n + a.iter().sum::<f64>() - 1.0) / 2.0,
            System::AskeyWilson { a, q } => {
                let b4: f64 = a.iter().product();
                (q.powf(-n) - 1.0) * (1.0 - b4 * q.powf(n - 1.0)) / 2.0
            }
        }
    }

    /// `E_{n+1} - E_{n-1}`, the factor between `a'` and `a`.
    pub fn prime_factor(&self, n: usize) -> f64 {
        self.energy_ext(n as i64 + 1) - self.energy_ext(n as i64 - 1)
    }

    /// Quantum closure polynomials.
    pub fn closure(&self) -> Closure {
        let p = |v: &[f64]| Poly(v.to_vec());
        match self.system {
            System::Harmonic | System::MeixnerPollaczek { .. } => Closure {
                r0: p(&[1.0]),
                r1: p(&[0.0]),
                rm1: p(&[0.0]),
            },
            System::SymPoschlTeller { g } => Closure {
                r0: p(&[g * g - 0.25, 2.0]),
                r1: p(&[1.0]),
                rm1: p(&[0.0]),
            },
            System::PoschlTeller { g, h } => {
                let (al, be) = (g - 0.5, h - 0.5);
                Closure {
                    r0: p(&[4.0 * (g + h).powi(2) - 4.0, 8.0]),
                    r1: p(&[4.0]),
                    rm1: p(&[4.0 * (al * al - be * be)]),
                }
            }
            System::Soliton { g } => Closure {
                r0: p(&[g * g - 0.25, -2.0]),
                r1: p(&[-1.0]),
                rm1: p(&[0.0]),
            },
            System::Morse { g, mu } => Closure {
                r0: p(&[g * g - 0.25, -2.0]),
                r1: p(&[-1.0]),
                rm1: p(&[-mu * (g + 0.5)]),
            },
            System::RadialOscillator { g } => Closure {
                r0: p(&[4.0]),
                r1: p(&[0.0]),
                rm1: p(&[-4.0 * (g + 0.5), -4.0]),
            },
            System::ContinuousHahn { a1, a2 } => {
                let s = a1 + a2;
                Closure {
                    r0: p(&[(s - 0.5).powi(2) - 0.25, 2.0]),
                    r1: p(&[1.0]),
                    rm1: p(&[0.0]),
                }
            }
            System::ContinuousDualHahn { a } => {
                let b = elementary_symmetric(&a);
                Closure {
                    r0: p(&[0.25]),
                    r1: p(&[0.0]),
                    rm1: p(&[-b[2] / 4.0, -(b[1] - 0.5), -2.0]),
                }
            }
            System::Wilson { a } => {
                let b = elementary_symmetric(&a);
                Closure {
                    r0: p(&[b[1] * (b[1] - 2.0) / 4.0, 2.0]),
                    r1: p(&[1.0]),
                    rm1: p(&[-(b[1] - 2.0) * b[3] / 4.0, -(b[2] - b[1] / 2.0), -2.0]),
                }
            }
            System::AskeyWilson { a, q } => {
                let b = elementary_symmetric(&a);
                let k = (1.0 - q).powi(2) / q;
                let shift = (1.0 + b[4] / q) / 2.0;
                let r0c = shift * shift - (1.0 + 1.0 / q).powi(2) * b[4] / 4.0;
                Closure {
                    r0: p(&[k * r0c, 2.0 * k * shift, k]),
                    r1: p(&[k * shift, k]),
                    rm1: p(&[
                        -k * (1.0 - b[4] / (q * q)) * (b[1] - b[3]) / 8.0,
                        -k * (b[1] + b[3] / q) / 4.0,
                    ]),
                }
            }
        }
    }

    /// Classical counterparts `(R_0, R_{-1})` of the closure polynomials.
    pub fn classical_closure(&self) -> (Poly, Poly) {
        let p = |v: &[f64]| Poly(v.to_vec());
        match self.system {
            System::Harmonic | System::MeixnerPollaczek { .. } => (p(&[1.0]), p(&[0.0])),
            System::SymPoschlTeller { g } => (p(&[g * g, 2.0]), p(&[0.0])),
            System::PoschlTeller { g, h } => (
                p(&[4.0 * (g + h).powi(2), 8.0]),
                p(&[4.0 * (g * g - h * h)]),
            ),
            System::Soliton { g } => (p(&[g * g, -2.0]), p(&[0.0])),
            System::Morse { g, mu } => (p(&[g * g, -2.0]), p(&[-mu * g])),
            System::RadialOscillator { g } => (p(&[4.0]), p(&[-4.0 * g, -4.0])),
            System::ContinuousHahn { a1, a2 } => (p(&[(a1 + a2).powi(2), 2.0]), p(&[0.0])),
            System::ContinuousDualHahn { a } => {
                let b = elementary_symmetric(&a);
                (p(&[0.25]), p(&[-b[2] / 4.0, -b[1], -2.0]))
            }
            System::Wilson { a } => {
                let b = elementary_symmetric(&a);
                (
                    p(&[b[1] * b[1] / 4.0, 2.0]),
                    p(&[-b[1] * b[3] / 4.0, -b[2], -2.0]),
                )
            }
            System::AskeyWilson { a, q } => {
                let b = elementary_symmetric(&a);
                let g2 = q.ln().powi(2);
                let (c1, c2) = (1.0 + b[4], (1.0 - b[4]).powi(2) / 4.0);
                let (c3, c4) = ((b[1] + b[3]) / 4.0, (1.0 - b[4]) * (b[1] - b[3]) / 8.0);
                (p(&[g2 * c2, g2 * c1, g2]), p(&[-g2 * c4, -g2 * c3]))
            }
        }
    }

    /// The two Heisenberg frequencies `(α_+, α_-)` at energy `e`.
    pub fn heisenberg_frequencies(&self, e: f64) -> Result<(f64, f64)> {
        let cl = self.closure();
        let (r0, r1) = (cl.r0.eval(e), cl.r1.eval(e));
        let disc = r1 * r1 + 4.0 * r0;
        if disc < 0.0 {
            return Err(Error::Inconsistency(format!(
                "negative discriminant {disc} at E = {e}"
            )));
        }
        let s = disc.sqrt();
        Ok(((r1 + s) / 2.0, (r1 - s) / 2.0))
    }

    /// Ladder actions in the normalization the closed forms are usually quoted in.
    pub fn quoted_ladder(&self, n: usize) -> QuotedLadder {
        let nf = n as f64;
        let em = self.prime_factor(n);
        let (norm, down, up) = match self.system {
            System::Harmonic => (LadderNorm::A, nf, 0.5),
            System::SymPoschlTeller { g } => {
                let beta = g - 0.5;
                (
                    LadderNorm::APrime,
                    nf + beta,
                    2.0 * (nf + 1.0) * (nf + 2.0 * g) / (2.0 * nf + 2.0 * g + 1.0),
                )
            }
            System::PoschlTeller { g, h } => {
                let (al, be) = (g - 0.5, h - 0.5);
                let s = al + be;
                (
                    LadderNorm::HalfAPrime,
                    4.0 * (nf + al) * (nf + be) / (2.0 * nf + s),
                    4.0 * (nf + 1.0) * (nf + s + 1.0) / (2.0 * nf + s + 2.0),
                )
            }
            System::Soliton { g } => {
                let beta = -g - 0.5;
                (
                    LadderNorm::APrime,
                    nf + beta,
                    -(nf + 1.0) * (nf + 2.0 * beta + 1.0) / (nf + beta + 1.0),
                )
            }
            System::Morse { g, mu } => (
                LadderNorm::APrime,
                4.0 * mu * mu / (2.0 * (g - nf) + 1.0),
                (nf + 1.0) * (2.0 * g - nf) / (2.0 * (g - nf) - 1.0),
            ),
            System::RadialOscillator { g } => (LadderNorm::A, -(nf + g - 0.5), -(nf + 1.0)),
            System::MeixnerPollaczek { a } => (LadderNorm::APrime, nf + 2.0 * a - 1.0, nf + 1.0),
            System::ContinuousHahn { a1, a2 } => {
                let s = a1 + a2;
                (
                    LadderNorm::APrime,
                    0.5 * (nf + s - 1.0) * (nf + 2.0 * a1 - 1.0) * (nf + 2.0 * a2 - 1.0),
                    0.5 * (nf + 1.0) * (nf + 2.0 * s - 1.0) / (nf + s),
                )
            }
            System::ContinuousDualHahn { a } => (
                LadderNorm::A,
                -nf * pair_products_sum(&a, |x, y| nf + x + y - 1.0),
                -1.0,
            ),
            System::Wilson { a } => {
                // quoted as a' but these are the a-normalized coefficients
                let b1: f64 = a.iter().sum();
                (
                    LadderNorm::A,
                    -nf * pair_products_sum(&a, |x, y| nf + x + y - 1.0)
                        / ((2.0 * nf + b1 - 2.0) * (2.0 * nf + b1 - 1.0)),
                    -(nf + b1 - 1.0) / ((2.0 * nf + b1 - 1.0) * (2.0 * nf + b1)),
                )
            }
            System::AskeyWilson { a, q } => {
                let b4: f64 = a.iter().product();
                let qn = q.powi(n as i32);
                let qm1 = qn / q;
                (
                    LadderNorm::A,
                    (1.0 - qn) * pair_products_sum(&a, |x, y| 1.0 - x * y * qm1)
                        / (2.0 * (1.0 - b4 * qm1 * qm1) * (1.0 - b4 * qn * qm1)),
                    (1.0 - b4 * qm1) / (2.0 * (1.0 - b4 * qn * qm1) * (1.0 - b4 * qn * qn)),
                )
            }
        };
        let scale = match norm {
            LadderNorm::A => 1.0,
            LadderNorm::APrime => em,
            LadderNorm::HalfAPrime => em / 2.0,
        };
        QuotedLadder {
            norm,
            down,
            up,
            scale,
        }
    }

    /// Three-term recurrence coefficients `(A_n, B_n, C_n)`, a-normalization.
    pub fn ladder_coefficients(&self, n: usize) -> Result<Ladder> {
        self.check_level(n)?;
        Ok(self.ladder_unchecked(n))
    }

    pub(crate) fn ladder_unchecked(&self, n: usize) -> Ladder {
        let quoted = self.quoted_ladder(n);
        let e = self.energy_ext(n as i64);
        let cl = self.closure();
        let rm1 = cl.rm1.eval(e);
        let b = if rm1 == 0.0 {
            0.0
        } else {
            -rm1 / cl.r0.eval(e)
        };
        let c = if n == 0 {
            0.0
        } else {
            quoted.down / quoted.scale
        };
        Ladder {
            a: quoted.up / quoted.scale,
            b,
            c,
        }
    }

    /// `η(x)` at a complex point (discrete models shift into the complex plane).
    pub fn eta(&self, x: C64) -> C64 {
        match self.system {
            System::Harmonic | System::MeixnerPollaczek { .. } | System::ContinuousHahn { .. } => x,
            System::SymPoschlTeller { .. } | System::AskeyWilson { .. } => x.cos(),
            System::PoschlTeller { .. } => (2.0 * x).cos(),
            System::Soliton { .. } => x.sinh(),
            System::Morse { .. } => (-x).exp(),
            System::RadialOscillator { .. }
            | System::ContinuousDualHahn { .. }
            | System::Wilson { .. } => x * x,
        }
    }

    /// `η`, `η'`, `η''` at a real point.
    pub fn eta_jet(&self, x: f64) -> Jet {
        let (v, d1, d2) = match self.system {
            System::Harmonic | System::MeixnerPollaczek { .. } | System::ContinuousHahn { .. } => {
                (x, 1.0, 0.0)
            }
            System::SymPoschlTeller { .. } | System::AskeyWilson { .. } => {
                (x.cos(), -x.sin(), -x.cos())
            }
            System::PoschlTeller { .. } => (
                (2.0 * x).cos(),
                -2.0 * (2.0 * x).sin(),
                -4.0 * (2.0 * x).cos(),
            ),
            System::Soliton { .. } => (x.sinh(), x.cosh(), x.sinh()),
            System::Morse { .. } => {
                let e = (-x).exp();
                (e, -e, e)
            }
            System::RadialOscillator { .. }
            | System::ContinuousDualHahn { .. }
            | System::Wilson { .. } => (x * x, 2.0 * x, 2.0),
        };
        Jet { v, d1, d2 }
    }

    /// Prepotential `W = log φ_0` with `W'`, `W''` (ordinary models).
    pub fn prepotential(&self, x: f64) -> Result<Jet> {
        let jet = match self.system {
            System::Harmonic => Jet {
                v: -x * x / 2.0,
                d1: -x,
                d2: -1.0,
            },
            System::SymPoschlTeller { g } => {
                let (s, c) = x.sin_cos();
                Jet {
                    v: g * s.ln(),
                    d1: g * c / s,
                    d2: -g / (s * s),
                }
            }
            System::PoschlTeller { g, h } => {
                let (s, c) = x.sin_cos();
                Jet {
                    v: g * s.ln() + h * c.ln(),
                    d1: g * c / s - h * s / c,
                    d2: -g / (s * s) - h / (c * c),
                }
            }
            System::Soliton { g } => {
                let t = x.tanh();
                // log cosh without overflow
                let lc = x.abs() + (-2.0 * x.abs()).exp().ln_1p() - std::f64::consts::LN_2;
                Jet {
                    v: -g * lc,
                    d1: -g * t,
                    d2: -g * (1.0 - t * t),
                }
            }
            System::Morse { g, mu } => {
                let e = x.exp();
                Jet {
                    v: -mu * e + g * x,
                    d1: g - mu * e,
                    d2: -mu * e,
                }
            }
            System::RadialOscillator { g } => Jet {
                v: -x * x / 2.0 + g * x.ln(),
                d1: -x + g / x,
                d2: -1.0 - g / (x * x),
            },
            _ => {
                return Err(Error::Unsupported(format!(
                    "{} has no prepotential in x",
                    self.name()
                )))
            }
        };
        Ok(jet)
    }

    /// Potential `V`. Ordinary models: the Schrödinger potential; discrete
    /// models: the coefficient of the shift operator in the Hamiltonian.
    pub fn potential(&self, x: C64) -> C64 {
        match self.system {
            System::Harmonic => (x * x - 1.0) / 2.0,
            System::SymPoschlTeller { g } => g * (g - 1.0) / (2.0 * x.sin().powi(2)) - g * g / 2.0,
            System::PoschlTeller { g, h } => {
                (g * (g - 1.0) / x.sin().powi(2) + h * (h - 1.0) / x.cos().powi(2)) / 2.0
                    - (g + h).powi(2) / 2.0
            }
            System::Soliton { g } => (g * g - g * (g + 1.0) / x.cosh().powi(2)) / 2.0,
            System::Morse { g, mu } => {
                let e = x.exp();
                (mu * mu * e * e - mu * (2.0 * g + 1.0) * e + g * g) / 2.0
            }
            System::RadialOscillator { g } => (x * x + g * (g - 1.0) / (x * x)) / 2.0 - g - 0.5,
            System::MeixnerPollaczek { a } => a + I * x,
            System::ContinuousHahn { a1, a2 } => (a1 + I * x) * (a2 + I * x),
            System::ContinuousDualHahn { a } => {
                a.iter().fold(ONE, |p, &aj| p * (aj + I * x)) / (2.0 * I * x * (2.0 * I * x + 1.0))
            }
            System::Wilson { a } => {
                a.iter().fold(ONE, |p, &aj| p * (aj + I * x)) / (2.0 * I * x * (2.0 * I * x + 1.0))
            }
            System::AskeyWilson { a, q } => {
                let z = (I * x).exp();
                a.iter().fold(ONE, |p, &aj| p * (1.0 - aj * z))
                    / ((1.0 - z * z) * (1.0 - q * z * z))
            }
        }
    }

    /// `V*(x) = conj(V(conj x))`.
    pub fn potential_conj(&self, x: C64) -> C64 {
        self.potential(x.conj()).conj()
    }

    /// Classical potential and its derivative.
    ///
    /// Ordinary models: `W'^2/2`. Discrete models: the function entering
    /// `H_c = sqrt(V_c V_c*) cosh(γ p) - Re V_c`.
    pub fn classical_potential(&self, x: C64) -> (C64, C64) {
        let prod_lin = |a: &[f64]| {
            let mut v = ONE;
            let mut dlog = C64::new(0.0, 0.0);
            for &aj in a {
                v *= aj + I * x;
                dlog += I / (aj + I * x);
            }
            (v, dlog)
        };
        match self.system {
            System::MeixnerPollaczek { a } => (a + I * x, I),
            System::ContinuousHahn { a1, a2 } => {
                let (v, d) = prod_lin(&[a1, a2]);
                (v, v * d)
            }
            System::ContinuousDualHahn { a } => {
                let (p, d) = prod_lin(&a);
                let v = p / (2.0 * I * x).powi(2);
                (v, v * (d - 2.0 / x))
            }
            System::Wilson { a } => {
                let (p, d) = prod_lin(&a);
                let v = p / (2.0 * I * x).powi(2);
                (v, v * (d - 2.0 / x))
            }
            System::AskeyWilson { a, .. } => {
                let z = (I * x).exp();
                let mut v = ONE;
                let mut dlog_z = C64::new(0.0, 0.0);
                for &aj in &a {
                    v *= 1.0 - aj * z;
                    dlog_z -= aj / (1.0 - aj * z);
                }
                v /= (1.0 - z * z).powi(2);
                dlog_z += 4.0 * z / (1.0 - z * z);
                (v, v * dlog_z * I * z)
            }
            _ => {
                let (w1, w2) = self.prepotential_complex(x);
                (w1 * w1 / 2.0, w1 * w2)
            }
        }
    }

    fn prepotential_complex(&self, x: C64) -> (C64, C64) {
        match self.system {
            System::Harmonic => (-x, -ONE),
            System::SymPoschlTeller { g } => (g * x.cos() / x.sin(), -g / x.sin().powi(2)),
            System::PoschlTeller { g, h } => (
                g * x.cos() / x.sin() - h * x.sin() / x.cos(),
                -g / x.sin().powi(2) - h / x.cos().powi(2),
            ),
            System::Soliton { g } => (-g * x.tanh(), -g / x.cosh().powi(2)),
            System::Morse { g, mu } => (g - mu * x.exp(), -mu * x.exp()),
            System::RadialOscillator { g } => (-x + g / x, -1.0 - g / (x * x)),
            _ => (C64::new(f64::NAN, 0.0), C64::new(f64::NAN, 0.0)),
        }
    }

    /// Imaginary shift `s` with `e^{p} f(x) = f(x - i s)`; `ln q` for Askey-Wilson.
    pub fn shift_step(&self) -> f64 {
        match self.system {
            System::AskeyWilson { q, .. } => q.ln(),
            _ => 1.0,
        }
    }

    /// `log φ_0(x)^2` continued analytically (the orthogonality weight).
    pub fn log_weight(&self, x: C64) -> Result<C64> {
        let lg_pair = |c: f64| -> Result<C64> { Ok(log_gamma(c + I * x)? + log_gamma(c - I * x)?) };
        match self.system {
            System::MeixnerPollaczek { a } => lg_pair(a),
            System::ContinuousHahn { a1, a2 } => Ok(lg_pair(a1)? + lg_pair(a2)?),
            System::ContinuousDualHahn { a } => {
                let mut s = -(log_gamma(2.0 * I * x)? + log_gamma(-2.0 * I * x)?);
                for aj in a {
                    s += lg_pair(aj)?;
                }
                Ok(s)
            }
            System::Wilson { a } => {
                let mut s = -(log_gamma(2.0 * I * x)? + log_gamma(-2.0 * I * x)?);
                for aj in a {
                    s += lg_pair(aj)?;
                }
                Ok(s)
            }
            System::AskeyWilson { a, q } => {
                let z = (I * x).exp();
                let lq =
                    |w: C64| -> Result<C64> { Ok(q_pochhammer(w, q, QLen::Infinite)?.value.ln()) };
                let mut s = lq(z * z)? + lq(1.0 / (z * z))?;
                for aj in a {
                    s -= lq(aj * z)? + lq(aj / z)?;
                }
                Ok(s)
            }
            _ => {
                if x.im != 0.0 {
                    return Err(Error::Unsupported(
                        "complex argument for an ordinary ground state".into(),
                    ));
                }
                Ok(C64::new(2.0 * self.prepotential(x.re)?.v, 0.0))
            }
        }
    }

    /// `log φ_0(x)` on the real domain.
    pub fn ground_log(&self, x: f64) -> Result<f64> {
        self.check_in_domain(x)?;
        Ok(self.log_weight(C64::new(x, 0.0))?.re / 2.0)
    }

    pub fn check_in_domain(&self, x: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        if x > lo && x < hi {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "x = {x} outside ({lo}, {hi}) for {}",
                self.name()
            )))
        }
    }

    /// `P_0 .. P_{n_max}` at `η` by upward recurrence.
    pub fn poly_values(&self, n_max: usize, eta: C64) -> Vec<C64> {
        orthopoly::scaled_recurrence(|k| self.ladder_unchecked(k), |_| ONE, n_max, eta)
            .into_iter()
            .map(|j| j[0])
            .collect()
    }

    pub fn poly(&self, n: usize, eta: C64) -> C64 {
        self.poly_values(n, eta)[n]
    }

    /// Closed-form polynomial from the hypergeometric definitions, independent of the recurrence.
    /// `eta` is the value of the sinusoidal coordinate.
    pub fn poly_closed_form(&self, n: usize, eta: C64) -> Result<C64> {
        match self.system {
            System::Soliton { g } => {
                // i^{-n} P_n^{(β,β)}(iη), real for real η
                let beta = -g - 0.5;
                let v = orthopoly::jacobi_unchecked(beta, beta, n, I * eta)?;
                Ok(v * I.powi(-(n as i32)))
            }
            System::Morse { g, mu } => {
                let alpha = 2.0 * g - 2.0 * n as f64;
                let v = orthopoly::laguerre_unchecked(alpha, n, 2.0 * mu / eta)?;
                Ok(v * eta.powi(n as i32))
            }
            _ => {
                let fam = self
                    .poly_family()
                    .expect("family registered for this model");
                orthopoly::eval_hypergeometric_unchecked(&fam, n, eta)
            }
        }
    }

    /// Polynomial family of the eigenfunctions, when it is a named family.
    pub fn poly_family(&self) -> Option<PolynomialFamily> {
        Some(match self.system {
            System::Harmonic => PolynomialFamily::Hermite,
            System::SymPoschlTeller { g } => PolynomialFamily::Jacobi {
                alpha: g - 0.5,
                beta: g - 0.5,
            },
            System::PoschlTeller { g, h } => PolynomialFamily::Jacobi {
                alpha: g - 0.5,
                beta: h - 0.5,
            },
            System::RadialOscillator { g } => PolynomialFamily::Laguerre { alpha: g - 0.5 },
            System::MeixnerPollaczek { a } => {
                PolynomialFamily::MeixnerPollaczek { a, phi: FRAC_PI_2 }
            }
            System::ContinuousHahn { a1, a2 } => PolynomialFamily::ContinuousHahnSpecial { a1, a2 },
            System::ContinuousDualHahn { a } => PolynomialFamily::ContinuousDualHahn { a },
            System::Wilson { a } => PolynomialFamily::Wilson { a },
            System::AskeyWilson { a, q } => PolynomialFamily::AskeyWilson { a, q },
            System::Soliton { .. } | System::Morse { .. } => return None,
        })
    }

    /// `φ_n(x) = φ_0(x) P_n(η(x))`.
    pub fn eigenfunction(&self, n: usize, x: f64) -> Result<C64> {
        self.check_level(n)?;
        let g = self.ground_log(x)?;
        Ok(self.poly(n, self.eta(C64::new(x, 0.0))) * g.exp())
    }

    /// Eigenfunction formula applied beyond the last bound state (finite models).
    pub fn eigenfunction_formal(&self, n: usize, x: f64) -> Result<C64> {
        let g = self.ground_log(x)?;
        Ok(self.poly_closed_form(n, self.eta(C64::new(x, 0.0)))? * g.exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_models() -> Vec<ModelSpec> {
        crate::models::fixtures::standard()
    }

    #[test]
    fn spec_examples() {
        let m = get_model(ModelName::SymPoschlTeller, &Params::g(1.0)).unwrap();
        assert_eq!(m.energy(2).unwrap(), 4.0);
        let q = m.quoted_ladder(1);
        assert_eq!(q.down, 1.5);
        let aw = get_model(ModelName::AskeyWilson, &Params::aq(&[0.5; 4], 0.5)).unwrap();
        assert!((aw.energy(1).unwrap() - 0.46875).abs() < 1e-15);
        let w = get_model(ModelName::Wilson, &Params::a(&[1.0; 4])).unwrap();
        assert_eq!(w.energy(1).unwrap(), 2.0);
        let mp = get_model(ModelName::MeixnerPollaczek, &Params::a(&[1.0])).unwrap();
        assert_eq!(mp.quoted_ladder(1).down, 2.0);
        assert_eq!(mp.heisenberg_frequencies(3.3).unwrap(), (1.0, -1.0));
        let (ap, am) = m.heisenberg_frequencies(0.0).unwrap();
        assert!((ap - 1.5).abs() < 1e-15 && (am + 0.5).abs() < 1e-15);
    }

    #[test]
    fn constraint_errors_name_the_inequality() {
        let e = get_model(ModelName::Wilson, &Params::a(&[-1.0, 1.0, 1.0, 1.0])).unwrap_err();
        assert!(e.to_string().contains("a_j > 0 violated"), "{e}");
        let e = get_model(
            ModelName::AskeyWilson,
            &Params::aq(&[0.9, 0.9, 0.9, 0.9], 0.5),
        )
        .unwrap_err();
        assert!(e.to_string().contains("< q violated"), "{e}");
        assert!(get_model(ModelName::SymPoschlTeller, &Params::g(-0.5)).is_err());
    }

    #[test]
    fn finite_level_counts() {
        let m = get_model(ModelName::Morse, &Params::morse(3.7, 1.0)).unwrap();
        assert_eq!(m.level_count(), Some(4));
        assert!(matches!(m.energy(4), Err(Error::OutOfRange { .. })));
        let s = get_model(ModelName::Soliton, &Params::g(3.0)).unwrap();
        assert_eq!(s.level_count(), Some(3));
    }

    #[test]
    fn ground_energy_zero_and_increasing() {
        for m in all_models() {
            assert_eq!(m.energy(0).unwrap(), 0.0, "{}", m.name());
            let top = m.level_count().unwrap_or(25).min(25);
            for n in 1..top {
                assert!(
                    m.energy(n).unwrap() > m.energy(n - 1).unwrap(),
                    "{} n={n}",
                    m.name()
                );
            }
        }
    }

    #[test]
    fn spectrum_conditions_hold() {
        for m in all_models() {
            let top = m.level_count().map(|l| l.saturating_sub(1)).unwrap_or(25);
            let cl = m.closure();
            for n in 0..top {
                let (e0, e1) = (m.energy_ext(n as i64), m.energy_ext(n as i64 + 1));
                let (ap, _) = m.heisenberg_frequencies(e0).unwrap();
                let (_, am) = m.heisenberg_frequencies(e1).unwrap();
                let scale = e1.abs().max(1.0);
                assert!(
                    (ap - (e1 - e0)).abs() < 1e-12 * scale,
                    "{} n={n} α+",
                    m.name()
                );
                assert!(
                    (am - (e0 - e1)).abs() < 1e-12 * scale,
                    "{} n={n} α-",
                    m.name()
                );
                let (p, q) = m.heisenberg_frequencies(e0).unwrap();
                assert!((p + q - cl.r1.eval(e0)).abs() < 1e-12 * scale);
                assert!((p * q + cl.r0.eval(e0)).abs() < 1e-12 * scale * scale);
            }
        }
    }

    #[test]
    fn soliton_eigenfunctions_are_real() {
        let m = get_model(ModelName::Soliton, &Params::g(2.5)).unwrap();
        let v = m.eigenfunction_formal(2, 0.7).unwrap();
        assert!(v.im.abs() <= 1e-12);
        let r = m.eigenfunction(2, 0.7).unwrap();
        assert!((v - r).norm() < 1e-12);
    }

    #[test]
    fn potential_matches_prepotential() {
        for m in all_models()
            .into_iter()
            .filter(|m| m.kind() == Kind::Ordinary)
        {
            let (lo, hi) = m.sample_window();
            for k in 0..20 {
                let x = lo + (hi - lo) * (k as f64 + 0.5) / 20.0;
                let w = m.prepotential(x).unwrap();
                let v = m.potential(C64::new(x, 0.0)).re;
                let expect = (w.d1 * w.d1 + w.d2) / 2.0;
                assert!(
                    (v - expect).abs() < 1e-10 * expect.abs().max(1.0),
                    "{} x={x}",
                    m.name()
                );
            }
        }
    }

    #[test]
    fn permutation_invariance() {
        let a = [0.6, 1.3, 0.8, 2.1];
        let w1 = get_model(ModelName::Wilson, &Params::a(&a)).unwrap();
        let w2 = get_model(ModelName::Wilson, &Params::a(&[a[2], a[0], a[3], a[1]])).unwrap();
        let c = get_model(ModelName::ContinuousDualHahn, &Params::a(&a[..3])).unwrap();
        let c2 = get_model(
            ModelName::ContinuousDualHahn,
            &Params::a(&[a[1], a[2], a[0]]),
        )
        .unwrap();
        let aw = get_model(
            ModelName::AskeyWilson,
            &Params::aq(&[0.3, -0.2, 0.5, 0.1], 0.6),
        )
        .unwrap();
        let aw2 = get_model(
            ModelName::AskeyWilson,
            &Params::aq(&[0.5, 0.1, 0.3, -0.2], 0.6),
        )
        .unwrap();
        for n in 0..8 {
            for (m1, m2) in [(&w1, &w2), (&c, &c2), (&aw, &aw2)] {
                let (e1, e2) = (m1.energy(n).unwrap(), m2.energy(n).unwrap());
                assert!((e1 - e2).abs() <= 1e-12 * e1.abs().max(1.0));
                let x = 0.9;
                let (f1, f2) = (
                    m1.eigenfunction(n, x).unwrap(),
                    m2.eigenfunction(n, x).unwrap(),
                );
                assert!(
                    (f1 - f2).norm() <= 1e-12 * f1.norm().max(1.0),
                    "{} n={n}",
                    m1.name()
                );
            }
        }
    }
}

/// Parameter choices shared by the test suites.
pub mod fixtures {
    use super::*;

    /// One instance of every model, with parameters generic enough to avoid
    /// accidental symmetries. Finite models get enough levels for n <= 15.
    pub fn standard() -> Vec<ModelSpec> {
        vec![
            get_model(ModelName::Harmonic, &Params::none()).unwrap(),
            get_model(ModelName::SymPoschlTeller, &Params::g(1.3)).unwrap(),
            get_model(ModelName::PoschlTeller, &Params::gh(1.4, 2.1)).unwrap(),
            get_model(ModelName::Soliton, &Params::g(20.3)).unwrap(),
            get_model(ModelName::Morse, &Params::morse(20.3, 1.0)).unwrap(),
            get_model(ModelName::RadialOscillator, &Params::g(1.7)).unwrap(),
            get_model(ModelName::MeixnerPollaczek, &Params::a(&[0.8])).unwrap(),
            get_model(ModelName::ContinuousHahn, &Params::a(&[0.7, 1.2])).unwrap(),
            get_model(ModelName::ContinuousDualHahn, &Params::a(&[0.6, 1.1, 1.5])).unwrap(),
            get_model(ModelName::Wilson, &Params::a(&[0.6, 0.9, 1.2, 1.4])).unwrap(),
            get_model(
                ModelName::AskeyWilson,
                &Params::aq(&[0.3, 0.4, -0.2, 0.5], 0.9),
            )
            .unwrap(),
        ]
    }
}
