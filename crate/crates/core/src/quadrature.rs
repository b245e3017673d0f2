//! Double-exponential (tanh-sinh family) quadrature with step halving.

use crate::tolerances::{QUADRATURE_MAX_NODES, QUADRATURE_REL};
use crate::{Error, Real, Result};

/// Integration range. Endpoints are never evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain<F> {
    Finite(F, F),
    /// `(a, ∞)`
    HalfLine(F),
    RealLine,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<F> {
    pub value: F,
    /// Difference between the last two refinement levels.
    pub error_estimate: F,
    pub nodes: usize,
}

impl<F: Real> Domain<F> {
    fn t_max(&self) -> F {
        match self {
            Domain::Finite(..) => F::lit(3.5),
            Domain::HalfLine(_) | Domain::RealLine => F::lit(4.0),
        }
    }

    /// Abscissa and weight for the transformed variable `t`.
    fn node(&self, t: F) -> Option<(F, F)> {
        let half_pi = F::FRAC_PI_2();
        let u = half_pi * t.sinh();
        let du = half_pi * t.cosh();
        match *self {
            Domain::Finite(a, b) => {
                let d = (b - a) * F::lit(0.5);
                // distance to the nearer endpoint, computed without cancellation
                let gap = d * F::lit(2.0) / ((u.abs() * F::lit(2.0)).exp() + F::one());
                let x = if t >= F::zero() { b - gap } else { a + gap };
                let w = d * du / (u.cosh() * u.cosh());
                (x > a && x < b && w > F::zero()).then_some((x, w))
            }
            Domain::HalfLine(a) => {
                let e = u.exp();
                let x = a + e;
                (x > a && e.is_finite()).then_some((x, e * du))
            }
            Domain::RealLine => {
                let x = u.sinh();
                let w = u.cosh() * du;
                (x.is_finite() && w.is_finite()).then_some((x, w))
            }
        }
    }
}

/// Integrates `f` over `domain`, halving the step until two successive
/// estimates agree to `rel` relative (or `abs` absolute) precision.
pub fn integrate_tol<F: Real>(
    f: impl Fn(F) -> F,
    domain: Domain<F>,
    rel: F,
    abs: F,
) -> Result<QuadratureResult<F>> {
    let (v, err, nodes) =
        integrate_many_tol(|x, out: &mut [F]| out[0] = f(x), 1, domain, rel, abs)?;
    Ok(QuadratureResult {
        value: v[0],
        error_estimate: err,
        nodes,
    })
}

/// [`integrate_tol`] with the default relative tolerance.
pub fn integrate<F: Real>(f: impl Fn(F) -> F, domain: Domain<F>) -> Result<QuadratureResult<F>> {
    integrate_tol(f, domain, F::lit(QUADRATURE_REL), F::zero())
}

/// Integrates a vector-valued function; `f(x, out)` fills `out` (length `dim`).
/// Convergence is judged against the largest component.
/// Returns the integrals, the last refinement difference and the node count.
pub fn integrate_many_tol<F: Real>(
    f: impl Fn(F, &mut [F]),
    dim: usize,
    domain: Domain<F>,
    rel: F,
    abs: F,
) -> Result<(Vec<F>, F, usize)> {
    let t_max = domain.t_max();
    let mut h = F::lit(0.5);
    let mut sums = vec![F::zero(); dim];
    let mut buf = vec![F::zero(); dim];
    let mut nodes = 0usize;
    let mut add = |t: F, sums: &mut [F], nodes: &mut usize| -> Result<()> {
        if let Some((x, w)) = domain.node(t) {
            f(x, &mut buf);
            for (s, v) in sums.iter_mut().zip(&buf) {
                if !v.is_finite() {
                    return Err(Error::NonConvergence(format!(
                        "integrand not finite at x = {x}"
                    )));
                }
                *s += w * *v;
            }
            *nodes += 1;
        }
        Ok(())
    };
    // level 0: all multiples of h
    let steps = (t_max / h).to_i64().unwrap_or(0);
    for k in -steps..=steps {
        add(F::lit(k as f64) * h, &mut sums, &mut nodes)?;
    }
    let mut prev: Vec<F> = sums.iter().map(|&s| s * h).collect();
    let mut level = 0;
    loop {
        level += 1;
        h *= F::lit(0.5);
        let steps = (t_max / h).to_i64().unwrap_or(0);
        let mut k = -steps + if steps % 2 == 0 { 1 } else { 0 };
        while k <= steps {
            add(F::lit(k as f64) * h, &mut sums, &mut nodes)?;
            k += 2;
        }
        let cur: Vec<F> = sums.iter().map(|&s| s * h).collect();
        let scale = cur.iter().fold(F::zero(), |m, v| m.max(v.abs()));
        let diff = cur
            .iter()
            .zip(&prev)
            .fold(F::zero(), |m, (a, b)| m.max((*a - *b).abs()));
        if level >= 3 && (diff <= rel * scale || diff <= abs) {
            return Ok((cur, diff, nodes));
        }
        if 2 * steps as usize + 1 > QUADRATURE_MAX_NODES {
            return Err(Error::NonConvergence(format!(
                "quadrature stalled at {nodes} nodes (difference {diff}, scale {scale})"
            )));
        }
        prev = cur;
    }
}
