use std::path::PathBuf;
use std::process::{Command, Output};

use covproc::channel::{catalog_channel, CatalogChannel, ChannelMap};
use serde_json::Value;

fn covproc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covproc"))
        .args(args)
        .env_remove("COVPROC_TOL")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn decompose_a4() {
    let out = covproc(&["decompose", "--group", "a4", "--u", "theta", "--v", "theta"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["K"], 4);
    let blocks: Vec<(u64, u64)> = r["blocks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| (b["b"].as_u64().unwrap(), b["n"].as_u64().unwrap()))
        .collect();
    assert_eq!(blocks, vec![(1, 1), (1, 1), (1, 1), (3, 2)]);
    assert_eq!((r["d_c"].as_u64(), r["d_n"].as_u64()), (Some(5), Some(7)));
    assert!(r["block_diagonal_residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn decompose_small_groups() {
    let r = json(&covproc(&["decompose", "--group", "pauli2", "--u", "w", "--v", "w"]));
    let blocks = r["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 4);
    assert!(blocks.iter().all(|b| b["b"] == 1 && b["n"] == 1));

    let r = json(&covproc(&["decompose", "--group", "z3", "--u", "chi1", "--v", "chi1"]));
    assert_eq!(r["K"], 1);
    assert_eq!(r["d_c"], 1);
}

#[test]
fn default_labels_pick_largest_irrep() {
    let r = json(&covproc(&["decompose", "--group", "a4"]));
    assert_eq!((r["u"].as_str(), r["v"].as_str()), (Some("theta"), Some("theta")));
}

#[test]
fn build_reports_program_dimension() {
    let r = json(&covproc(&["build", "--group", "a4", "--kind", "compressed"]));
    assert_eq!(r["d_P"], 5);
    assert!(r["covariance_residual"].as_f64().unwrap() <= 1e-9);

    let r = json(&covproc(&["build", "--group", "pauli2", "--kind", "mp"]));
    assert_eq!(r["d_P"], 4);

    let r = json(&covproc(&["build", "--group", "a4", "--kind", "teleport"]));
    assert_eq!(r["d_P"], 9);
    assert!(r["povm_completeness_residual"].as_f64().unwrap() <= 1e-9);

    let r = json(&covproc(&["build", "--group", "a4", "--kind", "compressed", "--purify"]));
    assert_eq!(r["d_P"], 25);
    assert_eq!(r["refined_purification_bound"], 25);
}

#[test]
fn build_mp_on_non_abelian_commutant_fails() {
    let out = covproc(&["build", "--group", "a4", "--kind", "mp"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("non-abelian"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
}

#[test]
fn dump_choi_has_expected_shape() {
    let r = json(&covproc(&["build", "--group", "pauli2", "--kind", "compressed", "--dump-choi"]));
    let dump = &r["process_choi"];
    // d1 * d_P * d2 = 2 * 4 * 2
    assert_eq!(dump["rows"], 16);
    assert_eq!(dump["entries"].as_array().unwrap().len(), 16 * 16);
}

fn write_extremes(name: &str, channels: &[ChannelMap]) -> PathBuf {
    let docs: Vec<_> = channels.iter().map(|c| c.to_document()).collect();
    let path = tmp(name);
    std::fs::write(&path, serde_json::to_string(&docs).unwrap()).unwrap();
    path
}

#[test]
fn build_mp_from_extremes_file() {
    let dep = |alpha| catalog_channel(CatalogChannel::Depolarizing { d: 2, alpha }, 1e-9).unwrap();
    let path = write_extremes("depolarizing_extremes.json", &[dep(0.0), dep(4.0 / 3.0)]);
    let out = covproc(&["build", "--group", "pauli2", "--kind", "mp", "--extremes", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(json(&out)["d_P"], 2);
}

#[test]
fn verify_passes_for_exact_processors() {
    let out = covproc(&["verify", "--group", "a4", "--kind", "compressed", "--channels", "20", "--states", "20"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert!(r["max_error"].as_f64().unwrap() <= 1e-8);
    assert_eq!(r["targets"].as_array().unwrap().len(), 20);
    assert_eq!(r["seeds"]["channels"].as_array().unwrap().len(), 20);
    assert_eq!(r["targets"][0]["epsilon_bounds"].as_array().unwrap().len(), 2);

    let out = covproc(&["verify", "--group", "pauli2", "--kind", "teleport"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["max_error"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn verify_with_no_channels_is_empty() {
    let out = covproc(&["verify", "--group", "a4", "--channels", "0"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert!(r["targets"].as_array().unwrap().is_empty());
    assert_eq!(r["passed"], true);
}

#[test]
fn verify_failure_exits_three() {
    let path = write_extremes("identity_only.json", &[ChannelMap::identity(2)]);
    let out = covproc(&["verify", "--group", "pauli2", "--kind", "mp", "--extremes", path.to_str().unwrap(), "--channels", "3"]);
    assert_eq!(code(&out), 3);
    let r = json(&out);
    assert_eq!(r["passed"], false);
}

#[test]
fn bounds_csv_and_json() {
    let out = covproc(&["bounds", "--group", "a4", "--eps", "0,0.5", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, vec!["epsilon,d_c,d_n,lower,upper,exact", "0,5,7,5,n/a,5", "0.5,5,7,0.25,78125,5"]);

    let r = json(&covproc(&["bounds", "--group", "a4", "--eps", "0,0.25", "--chain"]));
    let rows = r["rows"].as_array().unwrap();
    assert_eq!(rows[0]["upper_bound_net"], "n/a");
    assert_eq!(rows[0]["lower_bound"], 5.0);
    assert!((rows[1]["lower_bound"].as_f64().unwrap() - 0.726184).abs() < 1e-6);
    let chain = &rows[0]["holevo_chain"];
    assert!((chain["chi_program"].as_f64().unwrap() - 5f64.log2()).abs() < 1e-8);
}

#[test]
fn bounds_reject_out_of_range_eps() {
    let out = covproc(&["bounds", "--group", "a4", "--eps", "1.5"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("eps"));
}

#[test]
fn demos_pass() {
    for (name, checks) in [("a4", 12), ("pauli", 7), ("depolarizing", 6)] {
        let out = covproc(&["demo", name]);
        assert_eq!(code(&out), 0, "{name}");
        let r = json(&out);
        assert_eq!(r["passed"], true);
        let list = r["checks"].as_array().unwrap();
        assert_eq!(list.len(), checks, "{name}");
        assert!(list.iter().all(|c| c["passed"] == true), "{name}");
    }
}

#[test]
fn exported_group_round_trips() {
    let out = covproc(&["export-group", "--group", "a4"]);
    assert_eq!(code(&out), 0);
    let path = tmp("a4_group.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let from_file = json(&covproc(&["decompose", "--group-file", path.to_str().unwrap(), "--u", "theta", "--v", "theta"]));
    let from_catalog = json(&covproc(&["decompose", "--group", "a4", "--u", "theta", "--v", "theta"]));
    assert_eq!(from_file["blocks"], from_catalog["blocks"]);
}

#[test]
fn malformed_group_file_names_the_file() {
    let path = tmp("broken_group.json");
    std::fs::write(&path, r#"{"order": 2, "mul": [0, 1, 1], "irreps": []}"#).unwrap();
    let out = covproc(&["decompose", "--group-file", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("broken_group.json"), "{}", stderr(&out));

    std::fs::write(&path, "{ not json").unwrap();
    let out = covproc(&["decompose", "--group-file", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 1"), "{}", stderr(&out));
}

#[test]
fn validation_errors_exit_two() {
    for args in [
        vec!["decompose"],
        vec!["decompose", "--group", "nope"],
        vec!["decompose", "--group", "a4", "--u", "missing"],
        vec!["decompose", "--group", "a4", "--format", "csv"],
        vec!["verify", "--group", "a4", "--tol", "-1"],
        vec!["frobnicate"],
    ] {
        assert_eq!(code(&covproc(&args)), 2, "{args:?}");
    }
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "--group", "a4", "--kind", "compressed", "--seed", "7", "--channels", "5", "--states", "5"];
    let a = covproc(&args);
    let b = covproc(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = covproc(&["verify", "--group", "a4", "--kind", "compressed", "--seed", "8", "--channels", "5", "--states", "5"]);
    assert_ne!(a.stdout, c.stdout);

    let path = tmp("verify_report.json");
    let mut with_output: Vec<&str> = args.to_vec();
    with_output.extend(["--output", path.to_str().unwrap()]);
    let out = covproc(&with_output);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
}

#[test]
fn tolerance_comes_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_covproc"))
        .args(["verify", "--group", "pauli2", "--channels", "1", "--states", "1"])
        .env("COVPROC_TOL", "1e-7")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["tolerance"], 1e-7);
}
