//! The operator algebra on the truncated eigenbasis. `H` is diagonal there,
//! so every function of `H` is applied entrywise on the spectrum.

use crate::models::{ModelSpec, System};
use crate::operator_engine::{rescaled_norms, symmetric_offdiagonal};
use crate::tolerances::{INTERIOR_DOUBLE, INTERIOR_FIRST};
use crate::{Error, Result, C64};

/// Normalized-basis `η`. `sup[k] = Â_k = ⟨k+1|η|k⟩`, `sub[k] = Ĉ_{k+1} = ⟨k|η|k+1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub dim: usize,
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
}

impl TridiagonalOperator {
    /// `⟨m|η|n⟩`
    pub fn entry(&self, m: usize, n: usize) -> f64 {
        if m == n {
            self.diag[n]
        } else if m == n + 1 {
            self.sup[n]
        } else if n == m + 1 {
            self.sub[m]
        } else {
            0.0
        }
    }

    pub fn asymmetry(&self) -> f64 {
        self.sub
            .iter()
            .zip(&self.sup)
            .map(|(a, b)| (a / b - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumSource {
    ClosedForm,
    HeisenbergPauliIteration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub energies: Vec<f64>,
    pub source: SpectrumSource,
}

/// One row of the closed-form vs iterated comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub n: usize,
    pub closed: f64,
    pub iterated: f64,
    pub abs_diff: f64,
}

fn check_dim(spec: &ModelSpec, dim: usize, min: usize) -> Result<()> {
    if dim < min {
        return Err(Error::Domain(format!(
            "dim = {dim} below the minimum {min}"
        )));
    }
    if let Some(l) = spec.level_count() {
        if dim > l {
            return Err(Error::OutOfRange {
                n: dim - 1,
                levels: l,
            });
        }
    }
    Ok(())
}

pub fn build_eta_matrix(spec: &ModelSpec, dim: usize) -> Result<TridiagonalOperator> {
    check_dim(spec, dim, 3)?;
    let norms = rescaled_norms(spec, dim - 1)?;
    let mut sub = Vec::with_capacity(dim - 1);
    let mut sup = Vec::with_capacity(dim - 1);
    for k in 0..dim - 1 {
        let a = symmetric_offdiagonal(spec, k)?;
        let r = (norms[k + 1] / norms[k]).sqrt();
        sup.push(a * r);
        sub.push(a / r);
    }
    let diag = (0..dim)
        .map(|k| spec.ladder_coefficients(k).map(|l| l.b))
        .collect::<Result<_>>()?;
    Ok(TridiagonalOperator {
        dim,
        sub,
        diag,
        sup,
    })
}

fn energies(spec: &ModelSpec, dim: usize) -> Result<Vec<f64>> {
    (0..dim).map(|n| spec.energy(n)).collect()
}

/// Largest entry of `[H,[H,η]] - η R_0(H) - [H,η] R_1(H) - R_{-1}(H)` on the
/// interior block, relative to the largest of the four terms there (the
/// terms grow like `E^2` on geometric spectra).
pub fn check_closure(spec: &ModelSpec, dim: usize) -> Result<f64> {
    check_dim(spec, dim, 5)?;
    let eta = build_eta_matrix(spec, dim)?;
    let e = energies(spec, dim)?;
    let c = spec.closure();
    let inner = dim - INTERIOR_DOUBLE + 2;
    let (mut worst, mut scale) = (0.0f64, 1.0f64);
    for m in 0..inner {
        for n in m.saturating_sub(1)..(m + 2).min(inner) {
            let x = eta.entry(m, n);
            let d = e[m] - e[n];
            let terms = [
                d * d * x,
                x * c.r0.eval(e[n]),
                d * x * c.r1.eval(e[n]),
                if m == n { c.rm1.eval(e[n]) } else { 0.0 },
            ];
            worst = worst.max((terms[0] - terms[1] - terms[2] - terms[3]).abs());
            scale = terms.iter().fold(scale, |s, t| s.max(t.abs()));
        }
    }
    Ok(worst / scale)
}

/// `E_0 = 0`, `E_{k+1} = E_k + α_+(E_k)`, each step checked against
/// `E_k - E_{k+1} = α_-(E_{k+1})`. Stops at the last bound state.
pub fn heisenberg_pauli_spectrum(spec: &ModelSpec, n_max: usize) -> Result<SpectrumTable> {
    let top = spec.level_count().map_or(n_max, |l| n_max.min(l - 1));
    let mut energies = vec![0.0];
    for _ in 0..top {
        let ek = *energies.last().unwrap_or(&0.0);
        let (plus, _) = spec.heisenberg_frequencies(ek)?;
        let next = ek + plus;
        let (_, minus) = spec.heisenberg_frequencies(next)?;
        let gap = (ek - next - minus).abs();
        if gap > 1e-9 * next.abs().max(1.0) {
            return Err(Error::Inconsistency(format!(
                "E_k - E_(k+1) - alpha_-(E_(k+1)) = {gap:e} at E_(k+1) = {next}"
            )));
        }
        energies.push(next);
    }
    Ok(SpectrumTable {
        energies,
        source: SpectrumSource::HeisenbergPauliIteration,
    })
}

pub fn closed_form_spectrum(spec: &ModelSpec, n_max: usize) -> Result<SpectrumTable> {
    let top = spec.level_count().map_or(n_max, |l| n_max.min(l - 1));
    Ok(SpectrumTable {
        energies: energies(spec, top + 1)?,
        source: SpectrumSource::ClosedForm,
    })
}

pub fn spectrum_comparison(spec: &ModelSpec, n_max: usize) -> Result<Vec<SpectrumRow>> {
    let closed = closed_form_spectrum(spec, n_max)?;
    let iterated = heisenberg_pauli_spectrum(spec, n_max)?;
    Ok(closed
        .energies
        .iter()
        .zip(&iterated.energies)
        .enumerate()
        .map(|(n, (&c, &i))| SpectrumRow {
            n,
            closed: c,
            iterated: i,
            abs_diff: (c - i).abs(),
        })
        .collect())
}

/// Interior residual of `e^{itH} η e^{-itH} = a^(+) e^{iα_+(H) t} + a^(-) e^{iα_-(H) t} - R_{-1}(H)/R_0(H)`,
/// relative to `max(1, max |η̂|)`.
pub fn heisenberg_evolution_check(spec: &ModelSpec, dim: usize, t: f64) -> Result<f64> {
    check_dim(spec, dim, 5)?;
    let eta = build_eta_matrix(spec, dim)?;
    let e = energies(spec, dim)?;
    let c = spec.closure();
    let freqs = e
        .iter()
        .map(|&en| spec.heisenberg_frequencies(en))
        .collect::<Result<Vec<_>>>()?;
    let inner = dim - INTERIOR_FIRST;
    let phase = |w: f64| C64::from_polar(1.0, w * t);
    let mut worst = 0.0f64;
    let mut scale = 1.0f64;
    for m in 0..inner {
        for n in m.saturating_sub(1)..(m + 2).min(inner) {
            let x = eta.entry(m, n);
            scale = scale.max(x.abs());
            let lhs = phase(e[m] - e[n]) * x;
            let rhs = if m == n + 1 {
                phase(freqs[n].0) * x
            } else if n == m + 1 {
                phase(freqs[n].1) * x
            } else {
                C64::new(-c.rm1.eval(e[n]) / c.r0.eval(e[n]), 0.0)
            };
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst / scale)
}

/// Dense real matrix, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub dim: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }
    pub fn mul(&self, other: &Matrix) -> Matrix {
        let d = self.dim;
        let mut out = Matrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a != 0.0 {
                    for j in 0..d {
                        out.data[i * d + j] += a * other.get(k, j);
                    }
                }
            }
        }
        out
    }
}

/// `(a''^(-), a''^(+))` in the normalized basis, with `f(E_n)^2 = E_n/(A_{n-1} C_n)`
/// so that `a''^(+) a''^(-) = H`.
pub fn build_normalized_ladders(spec: &ModelSpec, dim: usize) -> Result<(Matrix, Matrix)> {
    check_dim(spec, dim, 2)?;
    let mut lower = Matrix::zeros(dim);
    let mut raise = Matrix::zeros(dim);
    for n in 1..dim {
        let p = spec.ladder_unchecked(n - 1).a * spec.ladder_unchecked(n).c;
        if !(p > 0.0) {
            return Err(Error::Inconsistency(format!(
                "A_{} C_{n} = {p} is not positive",
                n - 1
            )));
        }
        let hat = symmetric_offdiagonal(spec, n - 1)?;
        let f = (spec.energy(n)? / p).sqrt();
        // ⟨n-1|a''^(-)|n⟩ = â_{n-1} f(E_n) = √E_n
        lower.set(n - 1, n, hat * f);
        raise.set(n, n - 1, f * hat);
    }
    Ok((lower, raise))
}

/// `max |H - a''^(+) a''^(-)|` over all rows except the last.
pub fn normalized_ladder_residual(spec: &ModelSpec, dim: usize) -> Result<f64> {
    let (lower, raise) = build_normalized_ladders(spec, dim)?;
    let prod = raise.mul(&lower);
    let e = energies(spec, dim)?;
    let mut worst = 0.0f64;
    for i in 0..dim - 1 {
        for j in 0..dim {
            let h = if i == j { e[i] } else { 0.0 };
            worst = worst.max((prod.get(i, j) - h).abs() / e[i].max(1.0));
        }
    }
    Ok(worst)
}

/// The number operator on the spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NumberOperator {
    /// `E_n = a n`
    Linear { a: f64 },
    /// `E_n = a n^2 + b n`
    Quadratic { a: f64, b: f64 },
    /// `E_n = a (q^{-n} - 1)(1 - b q^n)`
    Geometric { a: f64, b: f64, q: f64 },
}

impl NumberOperator {
    pub fn of(spec: &ModelSpec) -> Self {
        if let System::AskeyWilson { a, q } = spec.system() {
            let b4: f64 = a.iter().product();
            return NumberOperator::Geometric {
                a: 0.5,
                b: b4 / q,
                q: *q,
            };
        }
        let (e1, e2) = (spec.energy_ext(1), spec.energy_ext(2));
        let a = (e2 - 2.0 * e1) / 2.0;
        if a.abs() <= 1e-14 * e1.abs() {
            NumberOperator::Linear { a: e1 }
        } else {
            NumberOperator::Quadratic { a, b: e1 - a }
        }
    }

    /// `q^N` on an eigenvalue (geometric spectra only).
    pub fn q_power(&self, e: f64) -> Option<f64> {
        match *self {
            NumberOperator::Geometric { a, b, .. } => {
                // q^{-n} solves u^2 - S u + b = 0; the large root, inverted without cancellation
                let s = e / a + b + 1.0;
                Some(2.0 / (s + (s * s - 4.0 * b).sqrt()))
            }
            _ => None,
        }
    }

    /// `N` on an eigenvalue.
    pub fn level(&self, e: f64) -> f64 {
        match *self {
            NumberOperator::Linear { a } => e / a,
            NumberOperator::Quadratic { a, b } => {
                let root = (4.0 * a * e + b * b).sqrt();
                // (root - b)/(2a) rationalized
                2.0 * e / (root + b)
            }
            NumberOperator::Geometric { q, .. } => {
                self.q_power(e).map_or(f64::NAN, |v| v.ln() / q.ln())
            }
        }
    }
}

/// `max_n |N(E_n) - n|` (or `|q^N(E_n) - q^n|` for geometric spectra) over `n < dim`.
pub fn number_operator_residual(spec: &ModelSpec, dim: usize) -> Result<f64> {
    let op = NumberOperator::of(spec);
    let top = spec.level_count().map_or(dim, |l| dim.min(l));
    let mut worst = 0.0f64;
    for n in 0..top {
        let e = spec.energy(n)?;
        let r = match (op, op.q_power(e)) {
            (NumberOperator::Geometric { q, .. }, Some(qn)) => (qn - q.powi(n as i32)).abs(),
            _ => (op.level(e) - n as f64).abs() / (n as f64).max(1.0),
        };
        worst = worst.max(r);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{get_model, ModelName, Params};

    #[test]
    fn eta_matrix_examples() {
        let h = get_model(ModelName::Harmonic, &Params::none()).unwrap();
        let m = build_eta_matrix(&h, 5).unwrap();
        assert!(m.diag.iter().all(|&d| d == 0.0));
        // x in the oscillator basis: √((n+1)/2)
        for (k, v) in m.sup.iter().enumerate() {
            assert!((v - ((k as f64 + 1.0) / 2.0).sqrt()).abs() < 1e-12);
        }
        let mp = get_model(ModelName::MeixnerPollaczek, &Params::a(&[1.0])).unwrap();
        let m = build_eta_matrix(&mp, 5).unwrap();
        assert!(m.diag.iter().all(|&d| d.abs() < 1e-15));
        // A_n C_{n+1} = (n+1)(n+2)/4 at a = 1
        for (k, v) in m.sup.iter().enumerate() {
            let k = k as f64;
            assert!((v - ((k + 1.0) * (k + 2.0)).sqrt() / 2.0).abs() < 1e-9);
        }
        let s = get_model(ModelName::SymPoschlTeller, &Params::g(1.0)).unwrap();
        assert!(build_eta_matrix(&s, 6).unwrap().asymmetry() < 1e-6);
    }

    #[test]
    fn closure_examples() {
        let h = get_model(ModelName::Harmonic, &Params::none()).unwrap();
        assert!(check_closure(&h, 10).unwrap() < 1e-12);
        let w = get_model(ModelName::Wilson, &Params::a(&[1.0; 4])).unwrap();
        assert!(check_closure(&w, 20).unwrap() < 1e-8);
        let aw = get_model(ModelName::AskeyWilson, &Params::aq(&[0.5; 4], 0.5)).unwrap();
        assert!(check_closure(&aw, 20).unwrap() < 1e-8);
    }

    #[test]
    fn spectrum_examples() {
        let s = get_model(ModelName::SymPoschlTeller, &Params::g(1.0)).unwrap();
        assert_eq!(
            heisenberg_pauli_spectrum(&s, 3).unwrap().energies,
            vec![0.0, 1.5, 4.0, 7.5]
        );
        let mp = get_model(ModelName::MeixnerPollaczek, &Params::a(&[1.0])).unwrap();
        assert_eq!(
            heisenberg_pauli_spectrum(&mp, 4).unwrap().energies,
            vec![0.0, 1.0, 2.0, 3.0, 4.0]
        );
        let m = get_model(ModelName::Morse, &Params::morse(3.7, 1.0)).unwrap();
        let t = heisenberg_pauli_spectrum(&m, 10).unwrap();
        assert_eq!(t.energies.len(), 4);
        for (n, e) in t.energies.iter().enumerate() {
            let n = n as f64;
            assert!((e - n * (3.7 - n / 2.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn evolution_examples() {
        let h = get_model(ModelName::Harmonic, &Params::none()).unwrap();
        assert!(heisenberg_evolution_check(&h, 10, 0.0).unwrap() < 1e-12);
        assert!(heisenberg_evolution_check(&h, 10, 0.7).unwrap() < 1e-12);
        let w = get_model(ModelName::Wilson, &Params::a(&[1.0; 4])).unwrap();
        assert!(heisenberg_evolution_check(&w, 20, 1.3).unwrap() < 1e-8);
    }

    #[test]
    fn normalized_ladder_examples() {
        let h = get_model(ModelName::Harmonic, &Params::none()).unwrap();
        assert!(normalized_ladder_residual(&h, 10).unwrap() < 1e-12);
        let mp = get_model(ModelName::MeixnerPollaczek, &Params::a(&[1.0])).unwrap();
        assert!(normalized_ladder_residual(&mp, 12).unwrap() < 1e-10);
        assert_eq!(NumberOperator::of(&mp), NumberOperator::Linear { a: 1.0 });
        assert!(number_operator_residual(&mp, 12).unwrap() < 1e-12);
        let aw = get_model(ModelName::AskeyWilson, &Params::aq(&[0.5; 4], 0.5)).unwrap();
        assert!(number_operator_residual(&aw, 12).unwrap() < 1e-10);
    }
}
