//! Gamma function, Pochhammer symbols and (basic) hypergeometric series in the
//! complex plane.

use crate::tolerances::{QPRODUCT_TAIL, SERIES_MAX_TERMS, SERIES_QUIET_TERMS, SERIES_TERM};
use twofloat::TwoFloat;

use crate::{Complex, Error, Real, Result, C64};

/// Partial sum of a series together with bookkeeping about how it stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult<F> {
    pub value: Complex<F>,
    pub terms_used: usize,
    /// Rough bound on the discarded tail; zero for terminating series.
    pub truncation_estimate: F,
}

/// Length of a q-shifted factorial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QLen {
    Finite(usize),
    Infinite,
}

// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer<F: Real>(z: Complex<F>) -> Option<i64> {
    if z.im != F::zero() || z.re > F::zero() {
        return None;
    }
    let r = z.re.round();
    let tol = F::epsilon() * F::lit(8.0) * F::one().max(z.re.abs());
    if (z.re - r).abs() <= tol {
        r.to_i64()
    } else {
        None
    }
}

/// Principal branch of `log Γ(z)`.
///
/// Continuous off the negative real axis and satisfying
/// `log Γ(z + 1) = log Γ(z) + log z`.
pub fn log_gamma<F: Real>(z: Complex<F>) -> Result<Complex<F>> {
    if is_nonpositive_integer(z).is_some() {
        return Err(Error::Pole(format!("{z}")));
    }
    let half = F::lit(0.5);
    if z.re < half {
        let pi = F::PI();
        let rest = log_gamma(Complex::new(F::one(), F::zero()) - z)?;
        let mut out = Complex::new(pi.ln(), F::zero()) - log_sin_pi(z) - rest;
        // undo the wraps of the principal log of sin(pi z)
        let wraps = (z.re * half + F::lit(0.25)).floor();
        let sign = if z.im < F::zero() {
            -F::one()
        } else {
            F::one()
        };
        out.im += sign * F::TAU() * wraps;
        return Ok(out);
    }
    let x = z - F::one();
    let mut acc = Complex::new(F::lit(LANCZOS[0]), F::zero());
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += Complex::new(F::lit(c), F::zero()) / (x + F::lit(k as f64));
    }
    let t = x + F::lit(LANCZOS_G + 0.5);
    let half_log_tau = F::TAU().ln() * half;
    Ok((x + half) * t.ln() - t + acc.ln() + half_log_tau)
}

/// Principal `log sin(πz)`, without overflow far from the real axis.
fn log_sin_pi<F: Real>(z: Complex<F>) -> Complex<F> {
    let pi = F::PI();
    if (z.im * pi).abs() < F::lit(20.0) {
        return (z * pi).sin().ln();
    }
    let w = if z.im > F::zero() { z } else { z.conj() };
    // sin(πw) = (i/2) e^{-iπw} (1 - e^{2iπw})
    let i = Complex::new(F::zero(), F::one());
    let mut v = -i * w * pi
        + Complex::new(-F::lit(2.0).ln(), F::FRAC_PI_2())
        + (Complex::new(F::one(), F::zero()) - (i * w * pi * F::lit(2.0)).exp()).ln();
    v.im = v.im - F::TAU() * ((v.im + pi) / F::TAU()).floor();
    if z.im > F::zero() {
        v
    } else {
        v.conj()
    }
}

/// `Γ(z)` via [`log_gamma`].
pub fn gamma<F: Real>(z: Complex<F>) -> Result<Complex<F>> {
    Ok(log_gamma(z)?.exp())
}

/// Rising factorial `(a)_n`.
pub fn pochhammer<F: Real>(a: Complex<F>, n: usize) -> Complex<F> {
    let mut p = Complex::new(F::one(), F::zero());
    for k in 0..n {
        p *= a + F::lit(k as f64);
    }
    p
}

/// Real rising factorial `(a)_n`.
pub fn pochhammer_re<F: Real>(a: F, n: usize) -> F {
    (0..n).fold(F::one(), |p, k| p * (a + F::lit(k as f64)))
}

/// q-shifted factorial `(a; q)_n`, with `n` finite or infinite.
pub fn q_pochhammer<F: Real>(a: Complex<F>, q: F, n: QLen) -> Result<SeriesResult<F>> {
    if !(q.abs() < F::one()) && n == QLen::Infinite {
        return Err(Error::Domain(format!(
            "|q| < 1 required for an infinite product, got q = {q}"
        )));
    }
    let one = Complex::new(F::one(), F::zero());
    let mut p = one;
    let mut aqk = a;
    match n {
        QLen::Finite(n) => {
            for _ in 0..n {
                p *= one - aqk;
                aqk = aqk * q;
            }
            Ok(SeriesResult {
                value: p,
                terms_used: n,
                truncation_estimate: F::zero(),
            })
        }
        QLen::Infinite => {
            let tail = F::lit(QPRODUCT_TAIL);
            let mut k = 0;
            while aqk.norm() >= tail {
                p *= one - aqk;
                aqk = aqk * q;
                k += 1;
                if k > SERIES_MAX_TERMS {
                    return Err(Error::NonConvergence("infinite q-product".into()));
                }
            }
            let est = aqk.norm() / (F::one() - q.abs()) * p.norm();
            Ok(SeriesResult {
                value: p,
                terms_used: k,
                truncation_estimate: est,
            })
        }
    }
}

/// Sums a series given its term ratio `t_{k+1}/t_k`, stopping after the
/// fixed degree `terminate_at` or once the terms are negligible.
fn sum_series<F: Real>(
    mut ratio: impl FnMut(usize) -> Result<Complex<F>>,
    terminate_at: Option<usize>,
) -> Result<SeriesResult<F>> {
    let mut term = Complex::new(F::one(), F::zero());
    let mut sum = term;
    let thresh = F::lit(SERIES_TERM);
    let mut quiet = 0;
    let mut prev_norm = F::one();
    let mut k = 0;
    loop {
        if let Some(n) = terminate_at {
            if k == n {
                return Ok(SeriesResult {
                    value: sum,
                    terms_used: k + 1,
                    truncation_estimate: F::zero(),
                });
            }
        }
        term = term * ratio(k)?;
        k += 1;
        sum += term;
        let tn = term.norm();
        if terminate_at.is_none() {
            if tn <= thresh * sum.norm() {
                quiet += 1;
                if quiet >= SERIES_QUIET_TERMS {
                    let r = if prev_norm > F::zero() {
                        tn / prev_norm
                    } else {
                        F::zero()
                    };
                    let est = if r < F::one() {
                        tn * r / (F::one() - r)
                    } else {
                        tn
                    };
                    return Ok(SeriesResult {
                        value: sum,
                        terms_used: k + 1,
                        truncation_estimate: est,
                    });
                }
            } else {
                quiet = 0;
            }
            if k >= SERIES_MAX_TERMS {
                return Err(Error::NonConvergence(format!(
                    "no convergence after {k} terms"
                )));
            }
        }
        prev_norm = tn;
    }
}

fn terminating_degree<F: Real>(upper: &[Complex<F>]) -> Option<usize> {
    upper
        .iter()
        .filter_map(|&a| is_nonpositive_integer(a))
        .map(|m| (-m) as usize)
        .min()
}

/// Generalized hypergeometric series `rFs(upper; lower; z)`.
pub fn hypergeometric_pfq<F: Real>(
    upper: &[Complex<F>],
    lower: &[Complex<F>],
    z: Complex<F>,
) -> Result<SeriesResult<F>> {
    let degree = terminating_degree(upper);
    let (r, s) = (upper.len(), lower.len());
    if degree.is_none() {
        if r > s + 1 {
            return Err(Error::Domain(format!("{r}F{s} diverges for z != 0")));
        }
        if r == s + 1 && z.norm() >= F::one() {
            return Err(Error::Domain(format!(
                "{r}F{s} needs |z| < 1, got |z| = {}",
                z.norm()
            )));
        }
    }
    sum_series(
        |k| {
            let kf = F::lit(k as f64);
            let mut num = z / (kf + F::one());
            for &a in upper {
                num *= a + kf;
            }
            let mut den = Complex::new(F::one(), F::zero());
            for &b in lower {
                den *= b + kf;
            }
            if den == Complex::new(F::zero(), F::zero()) {
                return Err(Error::Pole(format!(
                    "lower parameter hits a non-positive integer at k = {k}"
                )));
            }
            Ok(num / den)
        },
        degree,
    )
}

fn q_terminating_degree<F: Real>(upper: &[Complex<F>], q: F) -> Option<usize> {
    let lq = q.ln();
    upper
        .iter()
        .filter(|a| a.im == F::zero() && a.re > F::zero())
        .filter_map(|a| {
            let m = a.re.ln() / lq;
            let r = m.round();
            let ok = r <= F::zero() && (m - r).abs() <= F::lit(1e-9) * F::one().max(r.abs());
            ok.then(|| (-r).to_usize()).flatten()
        })
        .min()
}

/// Basic hypergeometric series `rφs(upper; lower; q, z)`.
pub fn basic_hypergeometric<F: Real>(
    upper: &[Complex<F>],
    lower: &[Complex<F>],
    q: F,
    z: Complex<F>,
) -> Result<SeriesResult<F>> {
    if !(q > F::zero() && q < F::one()) {
        return Err(Error::Domain(format!("0 < q < 1 required, got {q}")));
    }
    let degree = q_terminating_degree(upper, q);
    let (r, s) = (upper.len(), lower.len());
    let excess = 1 + s as i64 - r as i64;
    if degree.is_none() {
        if excess < 0 {
            return Err(Error::Domain(format!("{r}phi{s} diverges for z != 0")));
        }
        if excess == 0 && z.norm() >= F::one() {
            return Err(Error::Domain(format!(
                "{r}phi{s} needs |z| < 1, got |z| = {}",
                z.norm()
            )));
        }
    }
    let one = Complex::new(F::one(), F::zero());
    let mut qk = F::one();
    sum_series(
        |k| {
            if degree == Some(k) {
                return Ok(Complex::new(F::zero(), F::zero()));
            }
            let mut num = z / (F::one() - qk * q);
            for &a in upper {
                num *= one - a * qk;
            }
            let mut den = one;
            for &b in lower {
                den *= one - b * qk;
            }
            if den.norm() == F::zero() {
                return Err(Error::Pole(format!(
                    "lower q-parameter vanishes at k = {k}"
                )));
            }
            let sign = if excess % 2 != 0 { -F::one() } else { F::one() };
            let extra = sign * qk.powi(excess as i32);
            qk = qk * q;
            Ok(num / den * extra)
        },
        degree,
    )
}

/// Complex number with double-double parts, only what the extended sums need.
#[derive(Clone, Copy)]
struct Cdd {
    re: TwoFloat,
    im: TwoFloat,
}

impl Cdd {
    fn new(z: C64) -> Self {
        Self {
            re: TwoFloat::from(z.re),
            im: TwoFloat::from(z.im),
        }
    }
    fn add(self, o: Self) -> Self {
        Self {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
    fn mul(self, o: Self) -> Self {
        Self {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
    fn div(self, o: Self) -> Self {
        let d = o.re * o.re + o.im * o.im;
        // twofloat 0.8 drops the low word when dividing by an exact f64;
        // one Newton step on the reciprocal restores it
        let r0 = TwoFloat::from(1.0 / d.hi());
        let r = r0 + r0 * (TwoFloat::from(1.0) - d * r0);
        Self {
            re: (self.re * o.re + self.im * o.im) * r,
            im: (self.im * o.re - self.re * o.im) * r,
        }
    }
    fn to_c64(self) -> C64 {
        C64::new(f64::from(self.re), f64::from(self.im))
    }
    fn is_zero(self) -> bool {
        self.re == TwoFloat::from(0.0) && self.im == TwoFloat::from(0.0)
    }
}

/// Sum of `degree + 1` terms whose ratios come from `ratio`, carried in
/// double-double so that cancellation between large terms costs nothing
/// at the degrees used here.
fn sum_terminating_dd(
    degree: usize,
    mut ratio: impl FnMut(usize) -> Result<(Cdd, Cdd)>,
) -> Result<SeriesResult<f64>> {
    let mut term = Cdd::new(C64::new(1.0, 0.0));
    let mut sum = term;
    for k in 0..degree {
        let (num, den) = ratio(k)?;
        if den.is_zero() {
            return Err(Error::Pole(format!("lower parameter vanishes at k = {k}")));
        }
        term = term.mul(num).div(den);
        sum = sum.add(term);
    }
    Ok(SeriesResult {
        value: sum.to_c64(),
        terms_used: degree + 1,
        truncation_estimate: 0.0,
    })
}

/// Terminating `rFs(upper; lower; z)` summed in double-double precision.
pub fn hypergeometric_pfq_extended(
    upper: &[C64],
    lower: &[C64],
    z: C64,
) -> Result<SeriesResult<f64>> {
    let degree = terminating_degree(upper).ok_or_else(|| {
        Error::Unsupported("extended summation needs a terminating series".into())
    })?;
    let (up, lo, zz) = (
        upper.iter().map(|&a| Cdd::new(a)).collect::<Vec<_>>(),
        lower.iter().map(|&b| Cdd::new(b)).collect::<Vec<_>>(),
        Cdd::new(z),
    );
    sum_terminating_dd(degree, |k| {
        let kk = Cdd::new(C64::new(k as f64, 0.0));
        let mut num = zz;
        for &a in &up {
            num = num.mul(a.add(kk));
        }
        let mut den = Cdd::new(C64::new(k as f64 + 1.0, 0.0));
        for &b in &lo {
            den = den.mul(b.add(kk));
        }
        Ok((num, den))
    })
}

/// Parameter `c_1 c_2 ... c_m q^p` of a basic hypergeometric series. The
/// product is formed in double-double, which matters when the series cancels
/// heavily: rounding `q^{-n}` or `a_1 a_2` first can cost ten digits.
#[derive(Debug, Clone, PartialEq)]
pub struct QParam {
    pub factors: Vec<C64>,
    pub q_power: i32,
}

impl QParam {
    pub fn new(factors: &[C64], q_power: i32) -> Self {
        Self {
            factors: factors.to_vec(),
            q_power,
        }
    }

    fn value_dd(&self, q: f64) -> Cdd {
        let one = Cdd::new(C64::new(1.0, 0.0));
        let qd = Cdd::new(C64::new(q, 0.0));
        let mut qp = one;
        for _ in 0..self.q_power.unsigned_abs() {
            qp = qp.mul(qd);
        }
        if self.q_power < 0 {
            qp = one.div(qp);
        }
        self.factors.iter().fold(qp, |acc, &f| acc.mul(Cdd::new(f)))
    }
}

/// Terminating `rφs(upper; lower; q, z)` summed in double-double precision.
/// The series must contain an upper parameter that is a bare `q^{-n}`.
pub fn basic_hypergeometric_extended(
    upper: &[QParam],
    lower: &[QParam],
    q: f64,
    z: C64,
) -> Result<SeriesResult<f64>> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain(format!("0 < q < 1 required, got {q}")));
    }
    let degree = upper
        .iter()
        .filter(|p| p.factors.is_empty() && p.q_power <= 0)
        .map(|p| p.q_power.unsigned_abs() as usize)
        .min()
        .ok_or_else(|| {
            Error::Unsupported("extended summation needs a terminating series".into())
        })?;
    let excess = 1 + lower.len() as i64 - upper.len() as i64;
    let one = Cdd::new(C64::new(1.0, 0.0));
    let neg = |c: Cdd| Cdd {
        re: -c.re,
        im: -c.im,
    };
    let up: Vec<Cdd> = upper.iter().map(|p| p.value_dd(q)).collect();
    let lo: Vec<Cdd> = lower.iter().map(|p| p.value_dd(q)).collect();
    let zz = Cdd::new(z);
    let qd = Cdd::new(C64::new(q, 0.0));
    let mut qk = one;
    sum_terminating_dd(degree, |_| {
        let mut num = zz;
        for &a in &up {
            num = num.mul(one.add(neg(a.mul(qk))));
        }
        let mut den = one.add(neg(qk.mul(qd)));
        for &b in &lo {
            den = den.mul(one.add(neg(b.mul(qk))));
        }
        for _ in 0..excess.abs() {
            num = if excess > 0 {
                neg(num.mul(qk))
            } else {
                neg(num.div(qk))
            };
        }
        qk = qk.mul(qd);
        Ok((num, den))
    })
}

/// Bessel function `J_a(z)` of real order `a > -1`, principal branch.
pub fn bessel_j<F: Real>(a: F, z: Complex<F>) -> Result<Complex<F>> {
    if !(a > -F::one()) {
        return Err(Error::Domain(format!(
            "Bessel order must exceed -1, got {a}"
        )));
    }
    let zero = Complex::new(F::zero(), F::zero());
    if z == zero {
        return if a == F::zero() {
            Ok(Complex::new(F::one(), F::zero()))
        } else if a > F::zero() {
            Ok(zero)
        } else {
            Err(Error::Domain("J_a(0) is infinite for a < 0".into()))
        };
    }
    let half = z * F::lit(0.5);
    let a1 = Complex::new(a + F::one(), F::zero());
    let series = hypergeometric_pfq(&[], &[a1], -(half * half))?;
    let prefactor = (half.ln() * a - log_gamma(a1)?).exp();
    Ok(prefactor * series.value)
}
