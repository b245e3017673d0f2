//! `key=value` config files and the thread-count environment variable.

use std::ffi::OsString;
use std::fs;

pub const THREADS_VAR: &str = "LADDERLAB_THREADS";

/// Parses `key=value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
        let k = k.trim().trim_start_matches("--").replace('_', "-");
        if k.is_empty() || k == "config" {
            return Err(format!("config line {}: invalid key", i + 1));
        }
        out.push((k, v.trim().to_string()));
    }
    Ok(out)
}

/// Splices config entries in as flags right after the subcommand, so flags
/// given on the command line override them.
pub fn expand_args(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let path = args.windows(2).find_map(|w| (w[0] == "--config").then(|| w[1].clone())).or_else(|| {
        args.iter().find_map(|a| {
            a.to_str()
                .and_then(|s| s.strip_prefix("--config="))
                .map(OsString::from)
        })
    });
    let Some(path) = path else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config {}: {e}", path.to_string_lossy()))?;
    let mut flags = Vec::new();
    for (k, v) in parse_config(&text)? {
        match v.as_str() {
            "true" => flags.push(OsString::from(format!("--{k}"))),
            "false" => {}
            _ => flags.push(OsString::from(format!("--{k}={v}"))),
        }
    }
    let mut out = args;
    let at = out.len().min(2);
    out.splice(at..at, flags);
    Ok(out)
}

/// Reads the thread cap; `None` when the variable is unset.
pub fn thread_cap(value: Option<&str>) -> Result<Option<usize>, String> {
    match value {
        None => Ok(None),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("{THREADS_VAR} must be a positive integer, got {s:?}")),
        },
    }
}
