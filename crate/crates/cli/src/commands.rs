//! The subcommands. Each returns a table and whether every check passed.

use clap::{Args, ValueEnum};
use ladderlab::classical::{compare_with, default_steps, period, trajectory_rows};
use ladderlab::classifier::{
    self, construct, match_known_model, negative_example, prepotential_residual, verify_conditions,
    SinusoidalParams,
};
use ladderlab::coherent::{coherent_closed_form, coherent_series, verify_aocs, Variant};
use ladderlab::matrix_heisenberg::{check_closure, spectrum_comparison};
use ladderlab::models::{get_model, ModelName, ModelSpec, Params};
use ladderlab::operator_engine::{
    eigen_residual, hermiticity_residuals, interior_grid, ladder_report, orthogonality,
    three_term_residual, Operator,
};
use ladderlab::shape_invariance as shape;
use ladderlab::tolerances as tol;
use ladderlab::{Error, C64};
use serde::Serialize;
use serde_json::json;

use crate::table::{Cell, Table};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Numeric(e.to_string())
        }
    }
}

pub struct Outcome {
    pub table: Table,
    pub passed: bool,
    pub notes: Vec<String>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ModelArgs {
    /// Model name: harmonic, sym-poschl-teller, poschl-teller, soliton, morse,
    /// radial-oscillator, meixner-pollaczek, continuous-hahn,
    /// continuous-dual-hahn, wilson, askey-wilson
    #[arg(long)]
    pub model: String,
    /// Coupling g
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<f64>,
    /// Second coupling h (poschl-teller)
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<f64>,
    /// Morse strength (default 1)
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Comma-separated parameters a_j of the discrete models
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a: Vec<f64>,
    /// Askey-Wilson base q
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
}

impl ModelArgs {
    pub fn build(&self) -> Result<ModelSpec, CliError> {
        let name = ModelName::from_slug(&self.model)
            .ok_or_else(|| CliError::Usage(format!("unknown model {:?}", self.model)))?;
        let p = Params {
            g: self.g,
            h: self.h,
            mu: self.mu,
            a: self.a.clone(),
            q: self.q,
        };
        Ok(get_model(name, &p)?)
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Highest level n (finite models stop at their last bound state)
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    /// Relative tolerance on |E_closed - E_iterated| / max(1, |E|)
    #[arg(long, default_value_t = tol::SPECTRUM_REL)]
    pub tol: f64,
}

pub fn spectrum(a: &SpectrumArgs) -> Result<Outcome, CliError> {
    let m = a.model.build()?;
    let rows = spectrum_comparison(&m, a.n_max)?;
    let mut notes = Vec::new();
    if let Some(l) = m.level_count() {
        if a.n_max + 1 > l {
            notes.push(format!(
                "{} has {l} bound states; the table stops at n = {}",
                m.name(),
                l - 1
            ));
        }
    }
    let mut t = Table::new(&["n", "E_closed", "E_iterated", "diff"]);
    let mut passed = true;
    for r in rows {
        passed &= r.abs_diff <= a.tol * r.closed.abs().max(1.0);
        t.push(vec![r.n.into(), r.closed.into(), r.iterated.into(), r.abs_diff.into()]);
    }
    Ok(Outcome { table: t, passed, notes })
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Highest level checked
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
    /// Interior grid points
    #[arg(long, default_value_t = 50)]
    pub grid: usize,
    /// Truncation dimension for the closure check
    #[arg(long, default_value_t = 40)]
    pub dim: usize,
}

struct Report {
    table: Table,
    passed: bool,
}

impl Report {
    fn new() -> Self {
        Self {
            table: Table::new(&["check", "n", "residual", "tolerance", "pass", "note"]),
            passed: true,
        }
    }

    fn add(&mut self, check: &str, n: Option<usize>, r: ladderlab::Result<f64>, tol: f64) {
        let (value, note, ok) = match r {
            Ok(v) => (v, String::new(), v <= tol),
            Err(e) => (f64::NAN, e.to_string(), false),
        };
        self.passed &= ok;
        self.table
            .push(vec![check.into(), n.into(), value.into(), tol.into(), ok.into(), note.into()]);
    }

    /// Like `add`, but a model the check does not apply to gives no row.
    fn add_if_applicable(&mut self, check: &str, n: Option<usize>, r: ladderlab::Result<f64>, tol: f64) {
        if !matches!(r, Err(Error::Unsupported(_))) {
            self.add(check, n, r, tol);
        }
    }
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let m = a.model.build()?;
    if a.grid < 4 {
        return Err(CliError::Usage("--grid must be at least 4".into()));
    }
    let top = m.level_count().map_or(a.n_max, |l| a.n_max.min(l - 1));
    let grid = interior_grid(&m, a.grid);
    let mut rep = Report::new();

    for n in 0..=top {
        rep.add("eigen_residual", Some(n), eigen_residual(&m, n, &grid), tol::EIGEN_RESIDUAL);
    }
    let ops = [
        ("ladder_minus", Operator::Minus),
        ("ladder_plus", Operator::Plus),
        ("ladder_minus_prime", Operator::MinusPrime),
        ("ladder_plus_prime", Operator::PlusPrime),
    ];
    for n in 0..=top {
        for (label, op) in ops {
            if !op.is_lowering() && m.level_count().is_some_and(|l| n + 1 >= l) {
                continue;
            }
            let r = ladder_report(&m, op, n, &grid);
            let coeff = r.map(|r| {
                if op.is_lowering() && n == 0 {
                    r.max_rel_residual
                } else {
                    r.coefficient_error()
                }
            });
            let t = if op.is_lowering() && n == 0 { tol::GROUND_ANNIHILATION } else { tol::LADDER_REL };
            rep.add(label, Some(n), coeff, t);
        }
    }
    for n in 0..=top {
        if m.level_count().is_some_and(|l| n + 1 >= l) {
            break;
        }
        rep.add("three_term", Some(n), three_term_residual(&m, n, &grid), 1e-9);
    }
    let dim = m.level_count().map_or(a.dim, |l| a.dim.min(l));
    if dim > 2 * tol::INTERIOR_DOUBLE {
        rep.add("closure", Some(dim), check_closure(&m, dim), tol::CLOSURE);
    }
    let small = top.min(5);
    for n in 1..=small {
        for k in 0..n {
            let r = (|| {
                let mn = orthogonality(&m, k, n)?;
                let d = (orthogonality(&m, k, k)? * orthogonality(&m, n, n)?).sqrt();
                Ok(mn.abs() / d)
            })();
            rep.add(&format!("orthogonality_{k}"), Some(n), r, 1e-8);
        }
    }
    let herm_top = top.min(10);
    if herm_top > 0 {
        match hermiticity_residuals(&m, herm_top) {
            Ok(v) => {
                for (n, r) in v.into_iter().enumerate() {
                    rep.add("hermiticity", Some(n), Ok(r), tol::HERMITICITY);
                }
            }
            Err(Error::Unsupported(_)) => {}
            Err(e) => rep.add("hermiticity", None, Err(e), tol::HERMITICITY),
        }
    }

    if m.kind().is_discrete() {
        let sg = interior_grid(&m, 16);
        rep.add(
            "energy_factorization",
            Some(20),
            shape::energy_factorization_check(&m, 20),
            tol::ENERGY_FACTORIZATION,
        );
        for n in 0..=top {
            if n > 0 {
                rep.add("forward_shift", Some(n), shape::forward_shift_check(&m, n, &sg), tol::SHIFT_RELATION);
            }
            rep.add("backward_shift", Some(n), shape::backward_shift_check(&m, n, &sg), tol::SHIFT_RELATION);
        }
        rep.add("ground_shift", None, shape::ground_shift_identity_check(&m, &sg), tol::SHIFT_RELATION);
        for n in 0..=top {
            let r = shape::compensator_check(&m, n, &sg).map(|(x, xd)| x.max(xd));
            rep.add_if_applicable("compensator", Some(n), r, tol::COMPENSATOR);
        }
    } else {
        rep.add("prepotential", None, shape::prepotential_check(&m, &grid), 1e-10);
    }
    Ok(Outcome {
        table: rep.table,
        passed: rep.passed,
        notes: Vec::new(),
    })
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ClassicalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub p0: f64,
    /// Duration in periods of the closed-form motion
    #[arg(long, default_value_t = 3.0)]
    pub periods: f64,
    /// Duration in time units; required for unbound motion
    #[arg(long)]
    pub t_end: Option<f64>,
    /// RK4 steps (default: 10^5, or 10^4 per period when that is more)
    #[arg(long)]
    pub steps: Option<usize>,
    /// Approximate number of exported rows
    #[arg(long, default_value_t = 1000)]
    pub rows: usize,
    /// Tolerance on max |η_RK4 - η_closed|
    #[arg(long, default_value_t = tol::CLASSICAL_TRAJECTORY)]
    pub tol: f64,
}

pub fn classical(a: &ClassicalArgs) -> Result<Outcome, CliError> {
    let m = a.model.build()?;
    let per = period(&m, a.x0, a.p0);
    let t_end = match (a.t_end, &per) {
        (Some(t), _) => t,
        (None, Ok(p)) => a.periods * p,
        (None, Err(e)) => {
            return Err(CliError::Usage(format!("{e}; pass --t-end for unbound motion")));
        }
    };
    if !(t_end > 0.0) {
        return Err(CliError::Usage("duration must be positive".into()));
    }
    let steps = a.steps.unwrap_or_else(|| default_steps(&m, a.x0, a.p0, t_end));
    let (diff, traj) = compare_with(&m, a.x0, a.p0, t_end, steps)?;
    let every = (steps / a.rows.max(1)).max(1);
    let mut t = Table::new(&["model", "t", "x", "p", "eta", "eta_closed_form", "diff"]);
    for r in trajectory_rows(&m, &traj, every)? {
        t.push(vec![
            m.name().slug().into(),
            r.t.into(),
            r.x.into(),
            r.p.into(),
            r.eta.into(),
            r.eta_closed_form.into(),
            r.abs_diff.into(),
        ]);
    }
    let mut notes = vec![format!("max |eta diff| = {diff:e} over {steps} steps")];
    let mut passed = diff <= a.tol;
    if let Ok(p) = per {
        let drift = traj.energy_drift / (t_end / p);
        notes.push(format!("energy drift per period = {drift:e}"));
        passed &= drift <= tol::ENERGY_DRIFT_PER_PERIOD || a.steps.is_some();
    } else {
        notes.push("unbound motion".into());
    }
    Ok(Outcome { table: t, passed, notes })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantArg {
    A,
    APrime,
}

impl VariantArg {
    fn variant(self) -> Variant {
        match self {
            VariantArg::A => Variant::A,
            VariantArg::APrime => Variant::APrime,
        }
    }
    fn label(self) -> &'static str {
        match self {
            VariantArg::A => "a",
            VariantArg::APrime => "a-prime",
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CoherentArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Real part of the eigenvalue λ
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    /// Imaginary part of λ
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub lambda_im: f64,
    #[arg(long, value_enum, default_value_t = VariantArg::A)]
    pub variant: VariantArg,
    /// Series truncation
    #[arg(long, default_value_t = 60)]
    pub n_max: usize,
    /// Interior grid points
    #[arg(long, default_value_t = 21)]
    pub grid: usize,
}

pub fn coherent(a: &CoherentArgs) -> Result<Outcome, CliError> {
    let m = a.model.build()?;
    let lambda = C64::new(a.lambda, a.lambda_im);
    let v = a.variant.variant();
    let mut t = Table::new(&[
        "model",
        "variant",
        "lambda_re",
        "lambda_im",
        "x",
        "psi_re",
        "psi_im",
        "aocs_residual",
        "closed_re",
        "closed_im",
        "closed_diff",
    ]);
    let mut passed = true;
    let mut worst_closed = None::<f64>;
    for x in interior_grid(&m, a.grid) {
        let s = coherent_series(&m, v, lambda, x, a.n_max)?;
        let aocs = verify_aocs(&m, v, lambda, &[x], a.n_max)?;
        passed &= aocs <= tol::AOCS;
        let closed = match coherent_closed_form(&m, v, lambda, x) {
            Ok(c) => Some(c),
            Err(Error::Unsupported(_)) => None,
            Err(e) => return Err(e.into()),
        };
        let diff = closed.map(|c| (c - s.value).norm());
        if let Some(d) = diff {
            passed &= d <= tol::COHERENT_CLOSED_FORM;
            worst_closed = Some(worst_closed.map_or(d, |w| w.max(d)));
        }
        t.push(vec![
            m.name().slug().into(),
            a.variant.label().into(),
            lambda.re.into(),
            lambda.im.into(),
            x.into(),
            s.value.re.into(),
            s.value.im.into(),
            aocs.into(),
            closed.map(|c| c.re).into(),
            closed.map(|c| c.im).into(),
            diff.into(),
        ]);
    }
    let notes = match worst_closed {
        Some(w) => vec![format!("max |series - closed form| = {w:e}")],
        None => vec![format!("no closed form for {} variant {}", m.name(), a.variant.label())],
    };
    Ok(Outcome { table: t, passed, notes })
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ClassifyArgs {
    /// Fit one of the potentials without a sinusoidal coordinate:
    /// kepler-rational, kepler-spherical, kepler-hyperbolic, rosen-morse
    #[arg(long)]
    pub negative: Option<String>,
    /// Coupling of the negative example (default 1.5 for Kepler, 2 for Rosen-Morse)
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<f64>,
    /// Strength of the negative example (default 1)
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Closure coefficient r_1
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub r1: f64,
    /// Closure coefficient r_0^(0)
    #[arg(long = "r0-0", default_value_t = 1.0, allow_hyphen_values = true)]
    pub r0_0: f64,
    /// Closure coefficient r_{-1}^(1)
    #[arg(long = "rm1-1", default_value_t = 0.0, allow_hyphen_values = true)]
    pub rm1_1: f64,
    /// Closure coefficient r_{-1}^(0)
    #[arg(long = "rm1-0", default_value_t = 0.0, allow_hyphen_values = true)]
    pub rm1_0: f64,
    /// Integration constant c in the potential numerator
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub c: f64,
    /// Integration constant c1 of η
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub c1: f64,
    /// Integration constant c2 of η
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub c2: f64,
    /// Grid window for the condition residuals, as lo,hi
    #[arg(long, value_delimiter = ',', num_args = 2, allow_hyphen_values = true)]
    pub window: Option<Vec<f64>>,
}

pub fn classify(a: &ClassifyArgs) -> Result<Outcome, CliError> {
    match &a.negative {
        Some(name) => classify_negative(a, name),
        None => classify_constructed(a),
    }
}

fn classify_negative(a: &ClassifyArgs, name: &str) -> Result<Outcome, CliError> {
    let (g0, mu0) = classifier::default_coupling(name);
    let (g, mu) = (a.g.unwrap_or(g0), a.mu.unwrap_or(mu0));
    let p = negative_example(name, g, mu).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown negative example {name:?}; expected one of {}",
            classifier::NEGATIVE_EXAMPLES.join(", ")
        ))
    })?;
    if !(g > 0.0 && mu > 0.0) {
        return Err(CliError::Usage("g > 0 and mu > 0 required".into()));
    }
    let (ansatz, r) = classifier::negative_fit(&p);
    let mut t = Table::new(&[
        "potential",
        "g",
        "mu",
        "best_eta_ansatz",
        "best_fit_residual",
        "threshold",
        "no_sinusoidal_coordinate",
    ]);
    let clear = r > tol::CLASSIFIER_NEGATIVE;
    t.push(vec![
        name.into(),
        g.into(),
        mu.into(),
        format!("{ansatz:?}").into(),
        r.into(),
        tol::CLASSIFIER_NEGATIVE.into(),
        clear.into(),
    ]);
    Ok(Outcome {
        table: t,
        passed: clear,
        notes: vec![format!("best-fit residual {r:e} with {ansatz:?}")],
    })
}

fn classify_constructed(a: &ClassifyArgs) -> Result<Outcome, CliError> {
    let params = SinusoidalParams {
        r1: a.r1,
        r0_0: a.r0_0,
        rm1_1: a.rm1_1,
        rm1_0: a.rm1_0,
        c: a.c,
        c1: a.c1,
        c2: a.c2,
    };
    let c = construct(params)?;
    let window = match &a.window {
        Some(w) if w[0] < w[1] => (w[0], w[1]),
        Some(_) => return Err(CliError::Usage("--window needs lo < hi".into())),
        None => (0.3, 1.2),
    };
    let grid = classifier::uniform_grid(window, 50);
    let res = verify_conditions(&c, &grid);
    if res.iter().any(|r| !r.is_finite()) {
        return Err(CliError::Usage("η' vanishes inside the window; pick another --window".into()));
    }
    let prepot = params
        .zero_ground_energy_c()
        .filter(|z| (z - params.c).abs() <= 1e-12 * z.abs().max(1.0))
        .map(|_| prepotential_residual(&c, &grid));
    let matched = match_known_model(&c).map(|k| {
        let ps: serde_json::Map<String, serde_json::Value> =
            k.model.param_list().into_iter().map(|(n, v)| (n, json!(v))).collect();
        json!({
            "model": k.model.name().slug(),
            "params": ps,
            "scale": k.scale,
            "origin": k.origin,
            "orientation": k.orientation,
            "energy_offset": k.energy_offset,
        })
    });
    let coeffs = json!({
        "r1": params.r1, "r0_0": params.r0_0, "r0_1": params.r0_1(),
        "rm1_1": params.rm1_1, "rm1_0": params.rm1_0,
        "c": params.c, "c1": params.c1, "c2": params.c2,
    });
    let mut t = Table::new(&[
        "family",
        "eta_form",
        "potential_coefficients",
        "matched_model",
        "residuals",
        "prepotential_residual",
    ]);
    t.push(vec![
        c.family().as_str().into(),
        c.eta.describe().into(),
        Cell::Json(coeffs),
        matched.map_or(Cell::Null, Cell::Json),
        Cell::Json(json!(res)),
        prepot.into(),
    ]);
    let passed = res.iter().all(|&r| r <= tol::CLASSIFIER_CONDITIONS);
    Ok(Outcome {
        table: t,
        passed,
        notes: vec![format!("condition residuals {res:?}")],
    })
}
