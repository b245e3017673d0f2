//! Classical Hamiltonian flow for every model and the closed-form
//! sinusoidal motion of `η(x(t))`.

use crate::models::{ModelSpec, System};
use crate::{Error, Real, Result, C64};

/// One classical RK4 step for `y' = f(t, y)` in two dimensions.
pub fn rk4_step<F: Real>(f: impl Fn(F, [F; 2]) -> [F; 2], t: F, y: [F; 2], h: F) -> [F; 2] {
    let half = F::lit(0.5);
    let add = |y: [F; 2], k: [F; 2], s: F| [y[0] + k[0] * s, y[1] + k[1] * s];
    let k1 = f(t, y);
    let k2 = f(t + h * half, add(y, k1, h * half));
    let k3 = f(t + h * half, add(y, k2, h * half));
    let k4 = f(t + h, add(y, k3, h));
    let sixth = h / F::lit(6.0);
    [
        y[0] + sixth * (k1[0] + F::lit(2.0) * (k2[0] + k3[0]) + k4[0]),
        y[1] + sixth * (k1[1] + F::lit(2.0) * (k2[1] + k3[1]) + k4[1]),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub x_values: Vec<f64>,
    pub p_values: Vec<f64>,
    /// `H(x_0, p_0)`
    pub energy: f64,
    /// `max |H(t) - H(0)|`
    pub energy_drift: f64,
    /// Soliton/Morse above the threshold: the motion is not periodic.
    pub unbound: bool,
}

/// Momentum scale in the `cosh(γ p)` of discrete models.
fn gamma(spec: &ModelSpec) -> f64 {
    match spec.system() {
        System::AskeyWilson { q, .. } => q.ln(),
        _ => 1.0,
    }
}

/// Classical Hamiltonian at a phase-space point.
pub fn hamiltonian(spec: &ModelSpec, x: f64, p: f64) -> f64 {
    let (v, _) = spec.classical_potential(C64::new(x, 0.0));
    if spec.kind().is_discrete() {
        v.norm() * (gamma(spec) * p).cosh() - v.re
    } else {
        p * p / 2.0 + v.re
    }
}

/// `(∂H/∂p, -∂H/∂x)`
fn flow(spec: &ModelSpec, x: f64, p: f64) -> [f64; 2] {
    let (v, dv) = spec.classical_potential(C64::new(x, 0.0));
    if spec.kind().is_discrete() {
        let g = gamma(spec);
        let m = v.norm();
        let dm = m * (dv / v).re;
        [g * m * (g * p).sinh(), -(dm * (g * p).cosh() - dv.re)]
    } else {
        [p, -dv.re]
    }
}

/// `R_0(H)` and `R_{-1}(H)` of the classical closure.
pub fn classical_r(spec: &ModelSpec, h: f64) -> (f64, f64) {
    let (r0, rm1) = spec.classical_closure();
    (r0.eval(h), rm1.eval(h))
}

fn is_threshold_model(spec: &ModelSpec) -> bool {
    matches!(spec.system(), System::Soliton { .. } | System::Morse { .. })
}

/// Period `2π/√R_0(H_0)` of bound motion.
pub fn period(spec: &ModelSpec, x0: f64, p0: f64) -> Result<f64> {
    let (r0, _) = classical_r(spec, hamiltonian(spec, x0, p0));
    if r0 > 0.0 {
        Ok(std::f64::consts::TAU / r0.sqrt())
    } else {
        Err(Error::Domain(format!(
            "R_0(H_0) = {r0} <= 0: no periodic motion"
        )))
    }
}

/// RK4 trajectory with `steps` equal steps up to `t_end`.
pub fn integrate(
    spec: &ModelSpec,
    x0: f64,
    p0: f64,
    t_end: f64,
    steps: usize,
) -> Result<Trajectory> {
    spec.check_in_domain(x0)?;
    if steps == 0 {
        return Err(Error::Domain("steps must be positive".into()));
    }
    let energy = hamiltonian(spec, x0, p0);
    let unbound = is_threshold_model(spec) && classical_r(spec, energy).0 <= 0.0;
    let h = t_end / steps as f64;
    let (lo, hi) = spec.domain();
    let mut times = Vec::with_capacity(steps + 1);
    let mut xs = Vec::with_capacity(steps + 1);
    let mut ps = Vec::with_capacity(steps + 1);
    let mut y = [x0, p0];
    let mut drift = 0.0f64;
    times.push(0.0);
    xs.push(x0);
    ps.push(p0);
    for k in 1..=steps {
        let t = (k - 1) as f64 * h;
        y = rk4_step(|_, y| flow(spec, y[0], y[1]), t, y, h);
        let t = k as f64 * h;
        if !(y[0] > lo && y[0] < hi) || !y[1].is_finite() {
            return Err(Error::DomainExit(t));
        }
        drift = drift.max((hamiltonian(spec, y[0], y[1]) - energy).abs());
        times.push(t);
        xs.push(y[0]);
        ps.push(y[1]);
    }
    Ok(Trajectory {
        times,
        x_values: xs,
        p_values: ps,
        energy,
        energy_drift: drift,
        unbound,
    })
}

/// `η(t) = -{H,η}_0 sin(ωt)/ω + (η_0 + R_{-1}/R_0) cos(ωt) - R_{-1}/R_0`, `ω = √R_0(H_0)`;
/// the hyperbolic continuation for unbound soliton/Morse motion.
pub fn closed_form_eta(spec: &ModelSpec, x0: f64, p0: f64, t: f64) -> Result<f64> {
    spec.check_in_domain(x0)?;
    let h0 = hamiltonian(spec, x0, p0);
    let (r0, rm1) = classical_r(spec, h0);
    let eta = spec.eta_jet(x0);
    // {H, η} = -η' ∂H/∂p
    let poisson = -eta.d1 * flow(spec, x0, p0)[0];
    if r0 > 0.0 {
        let w = r0.sqrt();
        let shift = rm1 / r0;
        Ok(-poisson * (w * t).sin() / w + (eta.v + shift) * (w * t).cos() - shift)
    } else if is_threshold_model(spec) && r0 < 0.0 {
        let w = (-r0).sqrt();
        let shift = rm1 / r0;
        Ok(-poisson * (w * t).sinh() / w + (eta.v + shift) * (w * t).cosh() - shift)
    } else if is_threshold_model(spec) {
        // R_0 = 0 exactly: η'' = -R_{-1}
        Ok(eta.v - poisson * t - rm1 * t * t / 2.0)
    } else {
        Err(Error::Domain(format!(
            "R_0(H_0) = {r0} <= 0: initial data is not oscillatory"
        )))
    }
}

/// Default step count: `10^5`, or `10^4` per period when that is more.
pub fn default_steps(spec: &ModelSpec, x0: f64, p0: f64, t_end: f64) -> usize {
    let per_period = period(spec, x0, p0).map_or(1e4, |p| 1e4 * t_end / p);
    per_period.max(1e5).ceil() as usize
}

/// `max_t |η(x_RK4(t)) - η_closed(t)|` together with the trajectory.
pub fn compare_with(
    spec: &ModelSpec,
    x0: f64,
    p0: f64,
    t_end: f64,
    steps: usize,
) -> Result<(f64, Trajectory)> {
    let traj = integrate(spec, x0, p0, t_end, steps)?;
    let mut worst = 0.0f64;
    for (t, x) in traj.times.iter().zip(&traj.x_values) {
        let e = spec.eta_jet(*x).v;
        worst = worst.max((e - closed_form_eta(spec, x0, p0, *t)?).abs());
    }
    Ok((worst, traj))
}

pub fn compare(spec: &ModelSpec, x0: f64, p0: f64, t_end: f64) -> Result<f64> {
    Ok(compare_with(spec, x0, p0, t_end, default_steps(spec, x0, p0, t_end))?.0)
}

/// Mean spacing of successive upward crossings of `η(x(t))` through the
/// centre `-R_{-1}/R_0`.
pub fn measured_period(spec: &ModelSpec, traj: &Trajectory) -> Option<f64> {
    let (r0, rm1) = classical_r(spec, traj.energy);
    let centre = -rm1 / r0;
    let vals: Vec<f64> = traj
        .x_values
        .iter()
        .map(|&x| spec.eta_jet(x).v - centre)
        .collect();
    let mut crossings = Vec::new();
    for k in 1..vals.len() {
        if vals[k - 1] < 0.0 && vals[k] >= 0.0 {
            let f = vals[k - 1] / (vals[k - 1] - vals[k]);
            crossings.push(traj.times[k - 1] + f * (traj.times[k] - traj.times[k - 1]));
        }
    }
    (crossings.len() >= 2)
        .then(|| (crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64)
}

/// One row of the trajectory export.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    pub x: f64,
    pub p: f64,
    pub eta: f64,
    pub eta_closed_form: f64,
    pub abs_diff: f64,
}

pub fn trajectory_rows(
    spec: &ModelSpec,
    traj: &Trajectory,
    every: usize,
) -> Result<Vec<TrajectoryRow>> {
    let (x0, p0) = (traj.x_values[0], traj.p_values[0]);
    (0..traj.times.len())
        .step_by(every.max(1))
        .map(|k| {
            let eta = spec.eta_jet(traj.x_values[k]).v;
            let closed = closed_form_eta(spec, x0, p0, traj.times[k])?;
            Ok(TrajectoryRow {
                t: traj.times[k],
                x: traj.x_values[k],
                p: traj.p_values[k],
                eta,
                eta_closed_form: closed,
                abs_diff: (eta - closed).abs(),
            })
        })
        .collect()
}
