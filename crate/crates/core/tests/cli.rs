mod common;

use std::process::Command;

use coalloc::io::{load_allocation, load_game, parse_allocation, save_allocation, save_game};
use coalloc::{special_allocation, SetChain};
use common::*;
use serde_json::Value;

#[test]
fn golden_transcripts_are_stable() {
    let failures: Vec<String> =
        GOLDEN.iter().filter_map(|(name, args, code)| check_golden(name, args, *code).err()).collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

fn stdout_json(args: &[&str]) -> (i32, Value) {
    let out = Command::new(BIN).args(args).current_dir(crate_root()).output().unwrap();
    let code = out.status.code().unwrap();
    (code, serde_json::from_slice(&out.stdout).unwrap_or(Value::Null))
}

#[test]
fn shapley_of_maj3_is_symmetric() {
    let (code, v) = stdout_json(&["shapley", "--game", "tests/fixtures/maj3.json"]);
    assert_eq!(code, 0);
    for x in v["result"]["payoffs"].as_array().unwrap() {
        assert!((x.as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }
}

#[test]
fn zero_matrix_fails_efficiency_at_both_ends() {
    let (code, v) = stdout_json(&["verify", "--allocation", "tests/fixtures/zero3.json"]);
    assert_eq!(code, 1);
    let efficiency = &v["result"]["reports"][0];
    assert_eq!(efficiency["name"], "efficiency");
    let cols: Vec<&str> = efficiency["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["coalition"].as_str().unwrap())
        .collect();
    assert_eq!(cols, ["{}", "{1,2,3}"]);
    assert_eq!(v["result"]["reasonable_efficient"], false);
}

#[test]
fn shapley3_is_reasonable_efficient_but_fails_column_abs_sums() {
    let (code, v) = stdout_json(&["verify", "--allocation", "tests/fixtures/shapley3.json"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["reasonable_efficient"], true);
    let reports = v["result"]["reports"].as_array().unwrap();
    let failing: Vec<&str> =
        reports.iter().filter(|r| r["pass"] == false).map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(failing, ["abs_sums"]);
}

#[test]
fn decompose_output_is_a_valid_certificate() {
    let dir = std::env::temp_dir().join(format!("coalloc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for fixture_name in ["shapley3.json", "random4.json", "special123.json"] {
        let out = Command::new(BIN)
            .args(["decompose", "--allocation"])
            .arg(fixture(fixture_name))
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{fixture_name}");
        let cert = dir.join(format!("cert-{fixture_name}"));
        std::fs::write(&cert, &out.stdout).unwrap();
        let check = Command::new(BIN)
            .args(["verify-cert", "--allocation"])
            .arg(fixture(fixture_name))
            .arg("--cert")
            .arg(&cert)
            .output()
            .unwrap();
        assert_eq!(check.status.code(), Some(0), "{}", String::from_utf8_lossy(&check.stdout));
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn generated_output_feeds_other_commands() {
    let dir = std::env::temp_dir().join(format!("coalloc-gen-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out =
        Command::new(BIN).args(["generate", "--n", "3", "--support", "4", "--seed", "9"]).output().unwrap();
    let doc = dir.join("gen.json");
    std::fs::write(&doc, &out.stdout).unwrap();
    let check = Command::new(BIN)
        .arg("verify-cert")
        .arg("--allocation")
        .arg(&doc)
        .arg("--cert")
        .arg(&doc)
        .output()
        .unwrap();
    assert_eq!(check.status.code(), Some(0));
    let fals = Command::new(BIN)
        .args(["falsify", "--sampler", "binary_exhaustive", "--allocation"])
        .arg(&doc)
        .output()
        .unwrap();
    assert_eq!(fals.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn malformed_input_reports_a_position() {
    let out =
        Command::new(BIN).args(["check-game", "--game"]).arg(fixture("malformed.json")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3, column"), "{err}");
}

#[test]
fn fixtures_round_trip_byte_identically() {
    let dir = std::env::temp_dir().join(format!("coalloc-rt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for name in ["shapley3.json", "special123.json", "random4.json"] {
        let original = std::fs::read_to_string(fixture(name)).unwrap();
        let out = dir.join(name);
        save_allocation(&load_allocation(fixture(name)).unwrap(), &out).unwrap();
        assert_eq!(std::fs::read_to_string(&out).unwrap(), original, "{name}");
    }
    let g = load_game(fixture("glove.json")).unwrap();
    let out = dir.join("glove.json");
    save_game(&g, &out).unwrap();
    let first = std::fs::read_to_string(&out).unwrap();
    save_game(&load_game(&out).unwrap(), &out).unwrap();
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn special_fixture_is_the_identity_chain() {
    let a = load_allocation(fixture("special123.json")).unwrap();
    assert_eq!(a, special_allocation(&SetChain::identity(3).unwrap()));
    // the same matrix written with columns in cardinality order
    let cardinality = r#"{"n": 3,
        "labels": ["{}", "{1}", "{2}", "{3}", "{1,2}", "{1,3}", "{2,3}", "{1,2,3}"],
        "rows": [[-1, 1, 0, 0, 0, 0, 0, 0], [0, -1, 0, 0, 1, 0, 0, 0], [0, 0, 0, 0, -1, 0, 0, 1]]}"#;
    assert_eq!(parse_allocation(cardinality).unwrap(), a);
}
