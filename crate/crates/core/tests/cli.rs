use std::path::Path;
use std::process::{Command, Output};

fn vrd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vrd"))
        .args(args)
        .env("VRD_LOG", "error")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Numeric CSV cells compared to within solver accuracy; other cells verbatim.
fn assert_row(row: &str, expected: &[&str]) {
    let cells: Vec<&str> = row.split(',').collect();
    assert_eq!(cells.len(), expected.len(), "{row}");
    for (got, want) in cells.iter().zip(expected) {
        match (got.parse::<f64>(), want.parse::<f64>()) {
            (Ok(g), Ok(w)) => assert!((g - w).abs() <= 1e-6 * w.abs().max(1.0), "{row}: {got} vs {want}"),
            _ => assert_eq!(got, want, "{row}"),
        }
    }
}

const SMALL_SWEEP: &[&str] = &["figure2", "--theory", "entanglement", "--p-grid", "0:1:0.25", "--eps", "0,0.04", "--stdout"];

#[test]
fn figure2_csv_schema() {
    let o = vrd(SMALL_SWEEP);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "theory,p,eps,m,C_lower,C_upper,C_exact,V,D");
    assert_eq!(lines.len(), 1 + 5 * 2);
    assert!(lines.iter().all(|l| l.split(',').count() == 9));
    // eps ascending, then p ascending
    assert!(lines[1].starts_with("entanglement,0,0,1,"));
    assert!(lines[5].starts_with("entanglement,1,0,1,1,1,1,1,1"), "{}", lines[5]);
    assert!(lines[6].starts_with("entanglement,0,0.04,1,"));
    // p = 0.25 sits on the saturated branch: C = 3, V = 1/9, no conventional distillation.
    assert_row(lines[2], &["entanglement", "0.25", "0", "1", "3", "3", "3", "0.111111111111", "0"]);
}

#[test]
fn figure2_is_deterministic_across_runs_and_workers() {
    let a = vrd(SMALL_SWEEP);
    let mut args = SMALL_SWEEP.to_vec();
    args.extend(["--workers", "1"]);
    let b = vrd(&args);
    args.pop();
    args.pop();
    args.extend(["--workers", "3"]);
    let c = vrd(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn figure2_json_and_file_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let o = vrd(&["figure2", "--theory", "magic", "--p-grid", "0.5,1", "--eps", "0", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["V"], 1.0);
    assert_eq!(rows[1]["D"], 1);
    assert!(rows[0]["V"].as_f64().unwrap() > 0.0);
    assert_eq!(rows[0]["D"], 0);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"theory": "entanglement", "p": [0.2, 0.5], "eps_list": [0.0], "format": "json"}"#).unwrap();
    let o = vrd(&["--config", cfg.to_str().unwrap(), "rate", "--p", "0.2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2, "{text}");
    assert_row(text.lines().nth(1).unwrap(), &["entanglement", "0.2", "0", "1", "3", "3", "3", "0.111111111111", "0"]);

    std::fs::write(&cfg, r#"{"theroy": "magic"}"#).unwrap();
    assert_eq!(vrd(&["--config", cfg.to_str().unwrap(), "rate", "--p", "0.2"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["figure2", "--p-grid", "0.5,0.2", "--stdout"][..],
        &["figure2", "--theory", "athermality", "--stdout"],
        &["figure2", "--eps", "0,0", "--stdout"],
        &["figure2", "--theory", "entanglement", "--m-max", "3", "--stdout"],
        &["figure2", "--stdout", "--out", "x.csv"],
        &["overhead", "--theory", "magic"],
        &["teleport", "--p", "0.2"],
        &["selftest", "--criteria", "9"],
        &["no-such-command"],
    ] {
        let o = vrd(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = vrd(&["teleport", "--p", "0.2"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("1/3 <= p <= 1"));
}

#[test]
fn teleport_report() {
    let o = vrd(&["teleport", "--p", "0.7", "--samples", "20000", "--seed", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["C"], 1.58064516129);
    assert_eq!(doc["exact"], 1.0);
    assert_eq!(doc["within_bound"], true);
    assert_eq!(doc, serde_json::from_str::<serde_json::Value>(&stdout(&vrd(&["teleport", "--p", "0.7", "--samples", "20000", "--seed", "3", "--format", "json"]))).unwrap());

    let o = vrd(&["teleport", "--p", "1", "--samples", "100"]);
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(row.starts_with("1,1,0,1,1,1,0,100,0,"), "{row}");
}

#[test]
fn overhead_reports_method() {
    let o = vrd(&["overhead", "--theory", "entanglement", "--p", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "theory,p,eps,m,C_lower,C_upper,C_exact,closed_form,method,relaxation");
    let row = text.lines().nth(1).unwrap();
    assert_row(row, &["entanglement", "0.5", "0", "1", "2.2", "2.2", "2.2", "2.2", "both", "false"]);
}

#[test]
fn selftest_exit_status_and_tamper_hook() {
    let ok = vrd(&["selftest", "--criteria", "1,8"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert_eq!(stdout(&ok).lines().filter(|l| l.starts_with("criterion")).count(), 2);

    let tampered = vrd(&["selftest", "--criteria", "1", "--tolerance-scale", "0"]);
    assert_eq!(tampered.status.code(), Some(1), "{}", stdout(&tampered));
    assert!(stdout(&tampered).contains("criterion 1 FAIL"));

    // Known defects pass by default and fail under --strict.
    assert_eq!(vrd(&["selftest", "--criteria", "5"]).status.code(), Some(0));
    assert_eq!(vrd(&["selftest", "--criteria", "5", "--strict"]).status.code(), Some(1));
}

#[test]
fn default_output_file_name() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_vrd"))
        .args(["figure2", "--theory", "magic", "--p-grid", "1", "--eps", "0"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(Path::new(&dir.path().join("figure2-magic.csv")).exists());
}
