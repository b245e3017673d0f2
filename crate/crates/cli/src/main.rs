//! `ladderlab` command line: spectra, per-model verification suites,
//! classical trajectories, coherent states and potential classification.
//!
//! Exit codes: 0 all checks pass, 1 numerical failure, 2 usage or
//! parameter-constraint error.

mod commands;
mod config;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use commands::{CliError, Outcome};
use table::Format;

#[derive(Parser, Debug)]
#[command(name = "ladderlab", version, about, args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Write data here instead of stdout; metadata goes to <output>.meta.json
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// key=value file with defaults for any flag of the subcommand
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Heisenberg-Pauli spectrum against the closed form
    Spectrum {
        #[command(flatten)]
        args: commands::SpectrumArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Run the per-model check suite
    Verify {
        #[command(flatten)]
        args: commands::VerifyArgs,
        #[command(flatten)]
        out: Output,
    },
    /// RK4 trajectory against the closed-form sinusoidal motion
    Classical {
        #[command(flatten)]
        args: commands::ClassicalArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Coherent-state series, AOCS residual and closed form on a grid
    Coherent {
        #[command(flatten)]
        args: commands::CoherentArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Build a potential from closure data, or fit a named potential
    Classify {
        #[command(flatten)]
        args: commands::ClassifyArgs,
        #[command(flatten)]
        out: Output,
    },
}

/// Sorted `key=value` view of the parsed arguments, for hashing. Nested
/// groups (the model flags) become `group.key`.
fn canonical<T: serde::Serialize>(name: &str, args: &T) -> Vec<(String, String)> {
    use serde_json::Value;
    let mut out = vec![("command".to_string(), name.to_string())];
    if let Value::Object(m) = serde_json::to_value(args).expect("arguments serialize") {
        for (k, v) in m {
            match v {
                Value::Object(inner) => {
                    out.extend(inner.into_iter().map(|(ik, iv)| (format!("{k}.{ik}"), iv.to_string())))
                }
                v => out.push((k, v.to_string())),
            }
        }
    }
    out.sort();
    out
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let (name, config, out, outcome): (&str, _, Output, Outcome) = match cli.command {
        Command::Spectrum { args, out } => ("spectrum", canonical("spectrum", &args), out, commands::spectrum(&args)?),
        Command::Verify { args, out } => ("verify", canonical("verify", &args), out, commands::verify(&args)?),
        Command::Classical { args, out } => ("classical", canonical("classical", &args), out, commands::classical(&args)?),
        Command::Coherent { args, out } => ("coherent", canonical("coherent", &args), out, commands::coherent(&args)?),
        Command::Classify { args, out } => ("classify", canonical("classify", &args), out, commands::classify(&args)?),
    };
    for n in &outcome.notes {
        eprintln!("note: {n}");
    }
    let data = outcome.table.render(out.format);
    let rows = outcome.table.rows.len();
    let passed = outcome.passed;
    let unix_time = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    table::emit(&data, out.output.as_deref(), || {
        json!({
            "command": name,
            "version": env!("CARGO_PKG_VERSION"),
            "config": config.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>(),
            "params_hash": table::params_hash(&config),
            "rows": rows,
            "passed": passed,
            "notes": outcome.notes,
            "unix_time": unix_time,
        })
    })
    .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))?;
    Ok(passed)
}

fn main() -> ExitCode {
    let args = match config::expand_args(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match config::thread_cap(std::env::var(config::THREADS_VAR).ok().as_deref()) {
        Ok(Some(n)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: numerical check failed (see the pass column)");
            ExitCode::from(1)
        }
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
