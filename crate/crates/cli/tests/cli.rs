use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ladderlab"))
        .args(args)
        .env_remove("LADDERLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Column `name` of a CSV document, parsed as floats.
fn column(csv_text: &str, name: &str) -> Vec<f64> {
    let mut r = csv::Reader::from_reader(csv_text.as_bytes());
    let idx = r.headers().unwrap().iter().position(|h| h == name).expect("column");
    r.records()
        .map(|rec| rec.unwrap()[idx].parse().unwrap())
        .collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ladderlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn spectrum_examples() {
    let o = run(&["spectrum", "--model", "sym-poschl-teller", "--g", "1", "--n-max", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(column(&stdout(&o), "E_iterated"), [0.0, 1.5, 4.0, 7.5, 12.0, 17.5]);

    let o = run(&["spectrum", "--model", "harmonic", "--n-max", "3"]);
    assert_eq!(column(&stdout(&o), "E_closed"), [0.0, 1.0, 2.0, 3.0]);

    let o = run(&["spectrum", "--model", "morse", "--g", "3.7", "--n-max", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(column(&stdout(&o), "n").len(), 4);
    assert!(stderr(&o).contains("4 bound states"));
}

#[test]
fn verify_suites() {
    for args in [
        &["verify", "--model", "wilson", "--a", "1,1,1,1"][..],
        &["verify", "--model", "askey-wilson", "--a", "0.5,0.5,0.5,0.5", "--q", "0.5"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(!stdout(&o).contains(",false,"));
    }
    let o = run(&["verify", "--model", "wilson", "--a", "-1,1,1,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("a_j > 0 violated"));
}

#[test]
fn classical_meixner_pollaczek() {
    let o = run(&[
        "classical", "--model", "meixner-pollaczek", "--a", "1", "--x0", "0.5", "--p0", "0.2", "--periods", "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let d = column(&stdout(&o), "diff");
    assert!(d.len() > 100);
    assert!(d.iter().all(|&v| v <= 1e-6));
}

#[test]
fn tolerance_failure_exits_one() {
    let o = run(&[
        "classical", "--model", "harmonic", "--x0", "1", "--p0", "0", "--steps", "50", "--tol", "1e-14",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn coherent_against_closed_form() {
    let o = run(&[
        "coherent", "--model", "sym-poschl-teller", "--g", "1", "--lambda", "0.3", "--variant", "a-prime",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with(
        "model,variant,lambda_re,lambda_im,x,psi_re,psi_im,aocs_residual,closed_re,closed_im,closed_diff\n"
    ));
    assert!(column(&text, "closed_diff").iter().all(|&d| d <= 1e-8));
    assert!(column(&text, "aocs_residual").iter().all(|&d| d <= 1e-7));

    let o = run(&["coherent", "--model", "soliton", "--g", "3", "--lambda", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_negative_and_constructed() {
    let o = run(&["classify", "--negative", "rosen-morse", "--g", "2", "--mu", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(column(&stdout(&o), "best_fit_residual")[0] > 1e-3);

    let o = run(&["classify", "--r1", "1", "--r0-0", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let row = &v[0];
    assert_eq!(row["family"], "trigonometric");
    assert_eq!(row["matched_model"]["model"], "sym-poschl-teller");
    assert!(row["residuals"].as_array().unwrap().iter().all(|r| r.as_f64().unwrap() <= 1e-10));
    for key in ["eta_form", "potential_coefficients"] {
        assert!(!row[key].is_null());
    }

    let o = run(&["classify", "--negative", "coulomb"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic_with_sidecar() {
    let (a, b) = (scratch("a.csv"), scratch("b.csv"));
    for p in [&a, &b] {
        let o = run(&["spectrum", "--model", "wilson", "--a", "1,1,1,1", "--output", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let meta = |p: &PathBuf| -> serde_json::Value {
        let mut s = p.as_os_str().to_owned();
        s.push(".meta.json");
        serde_json::from_str(&std::fs::read_to_string(PathBuf::from(s)).unwrap()).unwrap()
    };
    let (ma, mb) = (meta(&a), meta(&b));
    assert_eq!(ma["params_hash"], mb["params_hash"]);
    assert_eq!(ma["params_hash"].as_str().unwrap().len(), 64);
    assert_eq!(ma["rows"], 11);

    let c = scratch("c.csv");
    run(&["spectrum", "--model", "wilson", "--a", "1,1,1,2", "--output", c.to_str().unwrap()]);
    assert_ne!(meta(&c)["params_hash"], ma["params_hash"]);
}

#[test]
fn json_mirrors_csv() {
    let csv_out = stdout(&run(&["spectrum", "--model", "harmonic", "--n-max", "2"]));
    let json_out = stdout(&run(&["spectrum", "--model", "harmonic", "--n-max", "2", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&json_out).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(
        rows.iter().map(|r| r["E_closed"].as_f64().unwrap()).collect::<Vec<_>>(),
        column(&csv_out, "E_closed")
    );
    // 17 significant digits
    assert!(json_out.contains("1.0000000000000000e0"));
}

#[test]
fn config_file_defaults_and_overrides() {
    let cfg = scratch("run.cfg");
    std::fs::write(&cfg, "# defaults\nmodel = sym-poschl-teller\ng = 1\nn_max = 2\n").unwrap();
    let o = run(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(column(&stdout(&o), "E_closed"), [0.0, 1.5, 4.0]);
    let o = run(&["spectrum", "--config", cfg.to_str().unwrap(), "--n-max", "3"]);
    assert_eq!(column(&stdout(&o), "E_closed").len(), 4);

    std::fs::write(&cfg, "model wilson\n").unwrap();
    assert_eq!(run(&["spectrum", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["spectrum", "--model", "nonexistent"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_ladderlab"))
        .args(["spectrum", "--model", "harmonic"])
        .env("LADDERLAB_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_ladderlab"))
        .args(["spectrum", "--model", "harmonic"])
        .env("LADDERLAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn help_lists_defaults() {
    let o = run(&["verify", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[default: 8]"));
}
