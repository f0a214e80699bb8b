use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn rindler(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rindler"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, json: &str) -> String {
    let path = dir.join("config.json");
    fs::write(&path, json).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn default_spectrum_runs_without_arguments() {
    let dir = tempfile::tempdir().unwrap();
    let out = rindler(&["spectrum"], dir.path());
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,sigma,energy,spacing"));
    let first: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((first[2] - 0.5 * 2f64.sqrt()).abs() < 1e-15);
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn numeric_columns_within_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    assert!(rindler(&["spectrum", "--numeric"], dir.path()).status.success());
    let csv = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "abs_error").unwrap();
    assert!(header.contains(&"sigma_numeric"));
    for line in csv.lines().skip(1) {
        let err: f64 = line.split(',').nth(col).unwrap().parse().unwrap();
        assert!(err < 1e-4);
    }
    let conv = fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    assert_eq!(conv.lines().next(), Some("h,zeta_max,n,sigma_numeric,sigma_analytic,abs_error"));
    assert_eq!(conv.lines().count(), 1 + 4 * 5);
}

#[test]
fn unwritable_output_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = rindler(&["spectrum"], &blocker.join("sub"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn negative_theta_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"theta": -0.01, "p_y": 0.2}"#);
    let out = rindler(&["nc", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_config_key_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"mass": 2.0}"#);
    assert_eq!(rindler(&["spectrum", "--config", &cfg], dir.path()).status.code(), Some(2));
}

#[test]
fn compare_needs_three_levels() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(rindler(&["compare", "--levels", "1"], dir.path()).status.code(), Some(2));
}

#[test]
fn compare_json_holds_both_reports() {
    let dir = tempfile::tempdir().unwrap();
    assert!(rindler(&["compare", "--format", "json"], dir.path()).status.success());
    let text = fs::read_to_string(dir.path().join("compare.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["quantum"]["rindler_stats"]["stddev"], 0.0);
    assert_eq!(doc["quantum"]["bouncer_spacing_decreasing"], true);
    assert_eq!(doc["classical"]["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn compare_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    assert!(rindler(&["compare"], dir.path()).status.success());
    let q = fs::read_to_string(dir.path().join("eqp_quantum.csv")).unwrap();
    assert_eq!(q.lines().next(), Some("system,n,energy,spacing"));
    assert!(dir.path().join("eqp_classical.csv").exists());
}

#[test]
fn nc_report_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"theta": 0.01, "p_y": 0.2, "format": "json"}"#);
    assert!(rindler(&["nc", "--config", &cfg], dir.path()).status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("nc_shift.json")).unwrap()).unwrap();
    assert!((doc["analytic"].as_f64().unwrap() - 0.00102).abs() < 1e-15);
    assert_eq!(doc["discrepancy_flag"], true);
}

#[test]
fn nc_zero_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"theta": 0.01, "format": "json"}"#);
    assert!(rindler(&["nc", "--config", &cfg], dir.path()).status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("nc_shift.json")).unwrap()).unwrap();
    for key in ["analytic", "constant_part", "derivative_part", "total_numeric"] {
        assert_eq!(doc[key], 0.0, "{key}");
    }
    assert!(doc["ratio"].is_null());
}

#[test]
fn verify_algebra_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert!(rindler(&["verify-algebra"], dir.path()).status.success());
    let csv = fs::read_to_string(dir.path().join("algebra.csv")).unwrap();
    for line in csv.lines().filter(|l| l.starts_with("bopp_x_y")) {
        assert!(line.contains(",0.00000000000000000e0,"), "{line}");
    }
    let strict = rindler(&["verify-algebra", "--tolerance", "1e-15"], dir.path());
    assert_eq!(strict.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&strict.stdout).contains("FAIL"));
    assert!(fs::read_to_string(dir.path().join("algebra.csv")).unwrap().contains("false"));
}

#[test]
fn shipped_configs_parse() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for entry in fs::read_dir(root).unwrap() {
        let text = fs::read_to_string(entry.unwrap().path()).unwrap();
        let cfg = rindler_eqp::cli::RunConfig::from_json(&text).unwrap();
        cfg.validate().unwrap();
    }
}
