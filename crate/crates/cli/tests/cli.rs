use std::path::Path;
use std::process::{Command, Output};

use isospec_cli::table::{ingest_table, write_table};
use isospec_core::catalog::CatalogPotential;
use serde_json::Value;
use tempfile::TempDir;

fn isospec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isospec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn solve_harmonic_ladder() {
    let out = isospec(&["solve", "--potential", "harmonic", "--xmin", "-10", "--xmax", "10", "--n", "2001", "--k", "6", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json_of(&out);
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["config", "spectra", "potentials", "modes", "invariants", "warnings"]);
    let e = floats(&r["spectra"]["v_minus"]);
    for (n, level) in e.iter().enumerate() {
        assert!((level - 2.0 * n as f64).abs() < 5e-3, "{e:?}");
    }
    assert_eq!(r["potentials"]["x"].as_array().unwrap().len(), 2001);
}

#[test]
fn solve_box_ladder() {
    let out = isospec(&["solve", "--potential", "box", "--k", "3", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let e = floats(&json_of(&out)["spectra"]["v_minus"]);
    for (level, expected) in e.iter().zip([0.0, 3.0, 8.0]) {
        assert!((level - expected).abs() < 5e-3, "{e:?}");
    }
}

#[test]
fn missing_table_is_an_input_error() {
    let out = isospec(&["solve", "--potential", "no/such/table.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no/such/table.csv"));
}

#[test]
fn deform_is_isospectral() {
    let out = isospec(&["deform", "--potential", "harmonic", "--lambda", "1.5", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json_of(&out);
    assert!(r["spectra"]["max_spectral_deviation"].as_f64().unwrap() < 5e-3);
    assert_eq!(r["invariants"]["recovered_original"], Value::Bool(false));
}

#[test]
fn deform_inside_gap_exits_three() {
    let out = isospec(&["deform", "--potential", "harmonic", "--lambda", "-0.5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("[-1, 0]"), "{}", stderr(&out));
}

#[test]
fn deform_large_lambda_recovers_original() {
    let out = isospec(&["deform", "--potential", "harmonic", "--lambda", "1e6", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["invariants"]["recovered_original"], Value::Bool(true));
}

#[test]
fn deform_needs_exactly_one_lambda() {
    assert_eq!(isospec(&["deform", "--potential", "harmonic"]).status.code(), Some(2));
    let out = isospec(&["deform", "--potential", "harmonic", "--lambdas", "1.5,2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn chain_two_steps() {
    let out = isospec(&["chain", "--potential", "harmonic", "--lambdas", "1.5,2.0", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json_of(&out);
    let n = floats(&r["invariants"]["normalizations"]);
    assert!((n[0] - 3.75f64.sqrt()).abs() < 1e-9 && (n[1] - 6f64.sqrt()).abs() < 1e-9);
    assert!(r["spectra"]["max_spectral_deviation"].as_f64().unwrap() < 8e-3);
    assert!(r["potentials"]["v_step_1"].is_array());
}

#[test]
fn chain_argument_errors() {
    assert_eq!(isospec(&["chain", "--potential", "harmonic", "--lambdas", ""]).status.code(), Some(2));
    assert_eq!(isospec(&["chain", "--potential", "harmonic"]).status.code(), Some(2));
    let out = isospec(&["chain", "--potential", "harmonic", "--lambdas", "1.5,-0.2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("step 1"), "{}", stderr(&out));
}

#[test]
fn verify_harmonic_defaults_pass() {
    let out = isospec(&["verify", "--potential", "harmonic", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json_of(&out);
    assert!(r["invariants"]["failures"].as_array().unwrap().is_empty());
    assert!(r["invariants"]["pass"].as_array().unwrap().iter().all(|p| p == &Value::Bool(true)));
}

#[test]
fn verify_poschl_teller_norm_value() {
    let out = isospec(&["verify", "--potential", "poschl_teller", "--a", "1", "--lambda", "2", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json_of(&out)["invariants"]["raw_norm_squared"].as_f64().unwrap();
    assert!((v - 1.0 / 6.0).abs() < 1e-4, "{v}");
}

#[test]
fn verify_failures_are_listed_and_exit_one() {
    // The box walls leave the quadrature of 1/u² too coarse at the default grid.
    let out = isospec(&["verify", "--potential", "box", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json_of(&out);
    let failures = r["invariants"]["failures"].as_array().unwrap();
    assert!(!failures.is_empty());
    assert!(stderr(&out).contains("failed invariants"));
}

#[test]
fn verify_singular_lambda_exits_three() {
    assert_eq!(isospec(&["verify", "--potential", "harmonic", "--lambda", "-0.3"]).status.code(), Some(3));
}

fn write_harmonic_table(dir: &Path, jitter_row: Option<usize>) -> String {
    let p = CatalogPotential::from_name("harmonic", None, None).unwrap();
    let v = p.sample(isospec_core::Grid1D::new(-8.0, 8.0, 801).unwrap());
    let path = dir.join("v.csv");
    let mut buf = Vec::new();
    write_table(&mut buf, &v).unwrap();
    let mut text = String::from_utf8(buf).unwrap();
    if let Some(row) = jitter_row {
        let lines: Vec<String> = text
            .lines()
            .enumerate()
            .map(|(i, l)| {
                if i == row {
                    let (x, rest) = l.split_once(',').unwrap();
                    format!("{},{rest}", x.parse::<f64>().unwrap() + 1e-3)
                } else {
                    l.to_string()
                }
            })
            .collect();
        text = lines.join("\n") + "\n";
    }
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn tabulated_potential_matches_catalog() {
    let dir = TempDir::new().unwrap();
    let table = write_harmonic_table(dir.path(), None);
    let from_file = isospec(&["solve", "--potential", &table, "--no-timestamp"]);
    let catalog = isospec(&["solve", "--potential", "harmonic", "--xmin", "-8", "--xmax", "8", "--n", "801", "--no-timestamp"]);
    assert_eq!(from_file.status.code(), Some(0), "{}", stderr(&from_file));
    assert_eq!(
        json_of(&from_file)["spectra"]["v_minus"],
        json_of(&catalog)["spectra"]["v_minus"]
    );
    assert_eq!(json_of(&from_file)["config"]["potential"]["kind"], "tabulated");
}

#[test]
fn corrupted_table_is_rejected_at_ingestion() {
    let dir = TempDir::new().unwrap();
    let table = write_harmonic_table(dir.path(), Some(10));
    let out = isospec(&["verify", "--potential", &table]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 11"), "{}", stderr(&out));
}

#[test]
fn grid_options_conflict_with_tables() {
    let dir = TempDir::new().unwrap();
    let table = write_harmonic_table(dir.path(), None);
    assert_eq!(isospec(&["solve", "--potential", &table, "--n", "101"]).status.code(), Some(2));
}

#[test]
fn invalid_configuration_is_an_input_error() {
    for args in [
        &["solve", "--potential", "harmonic", "--n", "2000"][..],
        &["solve", "--potential", "harmonic", "--k", "0"],
        &["solve", "--potential", "harmonic", "--xmin", "3", "--xmax", "-3"],
        &["solve", "--potential", "square"],
        &["deform", "--potential", "harmonic", "--lambda", "1", "--lambdas", "2"],
        &["chain", "--potential", "harmonic", "--lambdas", "1.5,abc"],
        &["chain", "--potential", "harmonic", "--lambdas", "1.5", "--integral-origin", "mid"],
    ] {
        assert_eq!(isospec(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn reports_are_deterministic_without_timestamp() {
    let args = ["deform", "--potential", "poschl_teller", "--lambda", "0.7", "--no-timestamp"];
    assert_eq!(isospec(&args).stdout, isospec(&args).stdout);
    let stamped = json_of(&isospec(&["deform", "--potential", "harmonic", "--lambda", "0.7"]));
    assert!(stamped["config"]["generated_unix_seconds"].is_u64());
}

#[test]
fn exported_deformation_round_trips_through_csv() {
    let dir = TempDir::new().unwrap();
    let csv_path = dir.path().join("v_lambda.csv");
    let json_path = dir.path().join("report.json");
    let base = ["deform", "--potential", "harmonic", "--lambda", "2", "--no-timestamp"];
    let csv_run = isospec(&[&base[..], &["--format", "csv", "--out", csv_path.to_str().unwrap()]].concat());
    let json_run = isospec(&[&base[..], &["--out", json_path.to_str().unwrap()]].concat());
    assert_eq!(csv_run.status.code(), Some(0));
    assert_eq!(json_run.status.code(), Some(0));

    let back = ingest_table(&csv_path).unwrap();
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    let expected = floats(&report["potentials"]["v_lambda"]);
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(back.values()), bits(&expected));
    assert_eq!(back.grid().points(), floats(&report["potentials"]["x"]));

    // Writing the ingested table again reproduces the file byte for byte.
    let mut again = Vec::new();
    write_table(&mut again, &back).unwrap();
    assert_eq!(again, std::fs::read(&csv_path).unwrap());
}
