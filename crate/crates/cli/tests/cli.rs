use std::process::{Command, Output};

use isoext::dbt::{extend, ExtendedPotential, Series};
use isoext::{Params, Rat};
use serde_json::Value;

fn isoext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isoext")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn extend_round_trips_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v2.json");
    let out = isoext(&["extend", "--series", "L1", "--n", "2", "--omega", "2", "--a", "5/2", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let loaded: ExtendedPotential = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let p = Params::new(Rat::from_int(2), Rat::new(5, 2)).unwrap();
    assert_eq!(loaded, extend(Series::L1, 2, &p).unwrap());
}

#[test]
fn extend_warns_about_singular_potentials() {
    let out = isoext(&["extend", "--series", "L3", "--n", "3", "--a", "4"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("singular"));
}

#[test]
fn missing_n_is_a_usage_error() {
    assert_eq!(code(&isoext(&["extend", "--series", "L1"])), 2);
}

#[test]
fn decimals_are_rejected() {
    assert_eq!(code(&isoext(&["extend", "--series", "L1", "--n", "1", "--a", "2.5"])), 2);
}

#[test]
fn shape_check_passes() {
    let out = isoext(&["check", "shape", "--series", "L1", "--n", "5", "--omega", "1", "--a", "3"]);
    assert_eq!(code(&out), 0);
    let rep = stdout_json(&out);
    assert_eq!(rep["holds"], true);
    assert_eq!(rep["shape"]["delta_is_minus_omega_x"], true);
}

#[test]
fn riccati_check_passes() {
    let out = isoext(&["check", "riccati", "--series", "L2", "--n", "4", "--a", "9/2"]);
    assert_eq!(code(&out), 0);
    let rep = stdout_json(&out);
    for e in rep["entries"].as_array().unwrap() {
        assert!(e["skipped"].is_string() || e["residual"]["num"].as_array().unwrap().is_empty(), "{e}");
    }
}

#[test]
fn klh_check_reports_counts() {
    let out = isoext(&["check", "klh", "--n", "3", "--alpha", "-3/2"]);
    assert_eq!(code(&out), 0);
    let rep = stdout_json(&out);
    assert_eq!(rep["klh"]["observed"]["pos_zeros"], 2);
    assert_eq!(rep["klh"]["observed"]["neg_zeros"], 1);
}

#[test]
fn regularity_check_fails_on_singular_member() {
    let out = isoext(&["check", "regularity", "--series", "L0", "--n", "3", "--a", "2"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["regularity"]["pole_count_positive_axis"], 3);
}

#[test]
fn spectrum_of_l1_has_six_rows() {
    let out = isoext(&["spectrum", "--series", "L1", "--n", "2"]);
    assert_eq!(code(&out), 0);
    let mut rd = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    for r in &rows {
        assert!(r[3].parse::<f64>().unwrap() < 4e-3);
    }
}

#[test]
fn spectrum_of_l3_includes_the_extra_level() {
    let out = isoext(&["spectrum", "--series", "L3", "--n", "2", "--a", "7/2", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let rep = stdout_json(&out);
    assert_eq!(rep["energies"].as_array().unwrap().len(), 7);
    assert_eq!(rep["predicted"][0], "-12");
}

#[test]
fn spectrum_of_singular_member_fails() {
    assert_eq!(code(&isoext(&["spectrum", "--series", "L0", "--n", "2"])), 1);
}

#[test]
fn tight_tolerance_fails() {
    assert_eq!(code(&isoext(&["spectrum", "--series", "base", "--grid-points", "200", "--tol", "1e-9"])), 1);
}

#[test]
fn plot_data_has_one_row_per_sample() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v1.csv");
    let out = isoext(&[
        "plot-data", "--series", "L1", "--n", "1", "--x-min", "0.05", "--x-max", "8", "--samples", "500", "--k", "1",
        "-o", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let mut rd = csv::Reader::from_path(&path).unwrap();
    assert_eq!(rd.headers().unwrap(), vec!["x", "V", "psi_1"]);
    assert_eq!(rd.records().count(), 500);
}

#[test]
fn plot_data_rejects_unknown_levels() {
    assert_eq!(code(&isoext(&["plot-data", "--series", "L1", "--n", "1", "--k", "6"])), 2);
}

#[test]
fn extra_state_column_for_l3() {
    let out = isoext(&["plot-data", "--series", "L3", "--n", "2", "--a", "7/2", "--extra-state", "--samples", "10"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().next().unwrap().ends_with("psi_minus"));
    assert_eq!(code(&isoext(&["plot-data", "--series", "L1", "--n", "1", "--extra-state"])), 2);
}
