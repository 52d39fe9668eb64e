//! End-to-end tests of the `cubics` binary: every subcommand, the exit
//! code contract (0 success, 2 verification failure, 3 invalid input,
//! 4 numeric failure), and byte-identical reruns.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubics"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is one JSON document")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn invariants_at_the_clebsch_point() {
    let out = run(&["invariants", "1,1,1,1,1"]);
    assert_eq!(exit_code(&out), 0);
    let doc = json_of(&out);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["seed"], 0);
    assert_eq!(doc["invariants"]["I8"], "-15");
    assert_eq!(doc["invariants"]["I16"], "5");
    assert_eq!(doc["invariants"]["I24"], "5");
    assert_eq!(doc["invariants"]["I32"], "10");
    assert_eq!(doc["invariants"]["I40"], "1");
    assert_eq!(doc["i100"], "0");
    assert_eq!(doc["on_eckardt_hypersurface"], true);
    assert_eq!(doc["family"], "clebsch");
}

#[test]
fn invariants_of_a_degenerate_form_land_at_q() {
    let out = run(&["invariants", "1,2,3,4,0"]);
    assert_eq!(exit_code(&out), 0);
    let doc = json_of(&out);
    assert_eq!(doc["degenerate"], true);
    assert_eq!(doc["weighted_equal_q"], true);
    assert_eq!(doc["i100"], "0");
}

#[test]
fn invariants_off_the_hypersurface() {
    let out = run(&["invariants", "1,2,3,4,5"]);
    assert_eq!(exit_code(&out), 0);
    let doc = json_of(&out);
    assert_ne!(doc["i100"], "0");
    assert_eq!(doc["on_eckardt_hypersurface"], false);
    let notes = doc["notes"].as_array().unwrap();
    assert!(notes[0].as_str().unwrap().contains("weight-40"));
}

#[test]
fn invariants_rejects_malformed_coefficients() {
    let out = run(&["invariants", "1,2,x"]);
    assert_eq!(exit_code(&out), 3);
    let doc = json_of(&out);
    assert_eq!(doc["error"]["exit_code"], 3);
}

#[test]
fn invariants_rejects_wrong_arity() {
    let out = run(&["invariants", "1,2,3"]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn unknown_flag_exits_invalid_input() {
    let out = run(&["invariants", "1,1,1,1,1", "--bogus"]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn sing_verify_passes_and_names_the_verdict() {
    let out = run(&["sing", "verify", "--seed", "5"]);
    assert_eq!(exit_code(&out), 0);
    let doc = json_of(&out);
    assert_eq!(
        doc["verdict"],
        "30/30 components verified; oracle set equal"
    );
    assert_eq!(doc["oracle_set_equal"], true);
    assert_eq!(doc["components"].as_array().unwrap().len(), 30);
    assert_eq!(doc["smoothness_sampling"]["all_passed"], true);
}

#[test]
fn sing_verify_samples_multiplicities() {
    let out = run(&["sing", "verify", "--sample-multiplicities"]);
    assert_eq!(exit_code(&out), 0);
    let doc = json_of(&out);
    let samples = doc["multiplicity_samples"].as_array().unwrap();
    assert_eq!(samples.len(), 5);
    let by_label = |label: &str| {
        samples
            .iter()
            .find(|s| s["label"] == label)
            .unwrap_or_else(|| panic!("sample {label} present"))
    };
    assert_eq!(by_label("S1 generic")["multiplicity"], 2);
    assert_eq!(by_label("S2 generic")["multiplicity"], 3);
    assert_eq!(by_label("C1 curve")["multiplicity"], 4);
    assert_eq!(by_label("C2 curve")["multiplicity"], 6);
    assert_eq!(by_label("Clebsch point")["multiplicity"], 10);
    for sample in samples {
        assert_eq!(sample["oracle_agrees"], true);
    }
    let notes = doc["notes"].as_array().unwrap();
    assert!(notes[0].as_str().unwrap().contains("open question"));
}

#[test]
fn eckardt_exact_off_the_hypersurface_is_empty() {
    let out = run(&["eckardt", "1,2,3,4,5", "--mode", "exact"]);
    assert_eq!(exit_code(&out), 0);
    let doc = json_of(&out);
    assert_eq!(doc["exact"]["count"], 0);
    assert_eq!(doc["family"], "generic");
    assert_eq!(doc["ok"], true);
}

#[test]
fn eckardt_exact_two_point_family() {
    let out = run(&["eckardt", "1,2,2,3,3", "--mode", "exact"]);
    assert_eq!(exit_code(&out), 0);
    let doc = json_of(&out);
    assert_eq!(doc["exact"]["count"], 2);
    assert_eq!(doc["exact"]["stabilizer"]["order"], 4);
    let facts = doc["exact"]["geometry_facts"].as_array().unwrap();
    assert!(!facts.is_empty());
    for fact in facts {
        assert_eq!(fact["as_expected"], true);
    }
}

#[test]
fn eckardt_numeric_on_the_four_cube_surface() {
    let out = run(&["eckardt", "1,1,1,1,0", "--mode", "numeric", "--seed", "3"]);
    assert_eq!(exit_code(&out), 0);
    let doc = json_of(&out);
    assert_eq!(doc["numeric"]["line_count"], 27);
    assert_eq!(doc["numeric"]["cluster_count"], 18);
}

#[test]
fn eckardt_exact_rejects_degenerate_forms() {
    let out = run(&["eckardt", "1,1,1,1,0", "--mode", "exact"]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn eckardt_cross_validates_the_two_point_family() {
    let out = run(&["eckardt", "1,2,2,3,3", "--mode", "cross", "--seed", "3"]);
    assert_eq!(exit_code(&out), 0);
    let doc = json_of(&out);
    assert_eq!(doc["cross"]["exact_count"], 2);
    assert_eq!(doc["cross"]["numeric_count"], 2);
    assert_eq!(doc["cross"]["counts_match"], true);
    assert_eq!(doc["cross"]["ok"], true);
    assert_eq!(doc["ok"], true);
    let facts = doc["exact"]["geometry_facts"].as_array().unwrap();
    let join = facts
        .iter()
        .find(|f| f["fact"].as_str().unwrap().contains("join"))
        .expect("join fact present");
    assert!(join["fact"].as_str().unwrap().contains("in surface: true"));
}

#[test]
fn eckardt_rejects_wrong_path_count() {
    let out = run(&["eckardt", "1,2,3,4,5", "--mode", "numeric", "--paths", "27"]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn moduli_roundtrip_is_weighted_equal() {
    let out = run(&["moduli", "1,2,3,4,5", "--roundtrip"]);
    assert_eq!(exit_code(&out), 0);
    let doc = json_of(&out);
    assert_eq!(doc["weighted_equal"], true);
    let sigma = doc["sigma_point"]["moduli"].as_array().unwrap();
    assert_eq!(sigma[0], "15");
    assert_eq!(sigma[4], "120");
}

#[test]
fn moduli_inverse_fails_at_the_base_point() {
    let out = run(&["moduli", "1,0,0,0,0", "--inverse"]);
    assert_eq!(exit_code(&out), 3);
    let doc = json_of(&out);
    let message = doc["error"]["message"].as_str().unwrap();
    assert!(message.contains("inverse undefined at Q"));
}

#[test]
fn moduli_inverse_recovers_the_sigma_representative() {
    // Forward image of (1,2,3,4,5) is (I8..I40); the inverse must return
    // a weighted representative of sigma = (15,85,225,274,120).
    let forward = run(&["moduli", "1,2,3,4,5"]);
    let doc = json_of(&forward);
    let coords: Vec<String> = doc["forward"]["moduli"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    let out = run(&["moduli", &coords.join(","), "--inverse"]);
    assert_eq!(exit_code(&out), 0);
    let doc = json_of(&out);
    assert!(doc["sigma_representative"]["moduli"].is_array());
    let notes = doc["notes"].as_array().unwrap();
    assert!(notes[0].as_str().unwrap().contains("swapped"));
}

#[test]
fn moduli_reports_base_locus_diagnostics() {
    // sigma5 = 0 but sigma4 = 1: not in the base locus, forward image
    // is exactly Q.
    let out = run(&["moduli", "1,-1,1,-1,0"]);
    assert_eq!(exit_code(&out), 0);
    let doc = json_of(&out);
    assert_eq!(doc["diagnostics"]["sigma4"], "1");
    assert_eq!(doc["diagnostics"]["sigma5"], "0");
    assert_eq!(doc["diagnostics"]["base_locus"], false);
    assert_eq!(doc["forward_is_q"], true);
}

#[test]
fn moduli_forward_rejects_base_locus_points() {
    // Two zero coefficients force sigma4 = sigma5 = 0: all five
    // invariants vanish and no moduli point exists.
    let out = run(&["moduli", "0,0,1,2,3"]);
    assert_eq!(exit_code(&out), 3);
    let doc = json_of(&out);
    assert!(doc["error"]["message"]
        .as_str()
        .unwrap()
        .contains("base-locus"));
}

#[test]
fn output_is_byte_identical_for_identical_runs() {
    let args = ["eckardt", "1,2,2,3,3", "--mode", "cross", "--seed", "9"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(exit_code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn json_file_input_and_out_flag() {
    let dir = std::env::temp_dir().join(format!("cubics-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input: PathBuf = dir.join("surface.json");
    let output: PathBuf = dir.join("report.json");
    std::fs::write(&input, r#"{"coefficients": ["1", "2", "2", "3", "3"]}"#).unwrap();

    let out = run(&[
        "eckardt",
        input.to_str().unwrap(),
        "--mode",
        "exact",
        "--out",
        output.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(out.stdout.is_empty());
    let doc: Value =
        serde_json::from_slice(&std::fs::read(&output).unwrap()).expect("file holds JSON");
    assert_eq!(doc["exact"]["count"], 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bare_array_file_input_parses() {
    let dir = std::env::temp_dir().join(format!("cubics-cli-arr-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("coeffs.json");
    std::fs::write(&input, r#"[1, 2, 3, 4, 5]"#).unwrap();
    let out = run(&["invariants", input.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let doc = json_of(&out);
    assert_eq!(doc["family"], "generic");
    std::fs::remove_dir_all(&dir).unwrap();
}
