use std::fs;

use bfree::cli::{exit_code, run};
use bfree::Error;

fn out(args: &[&str]) -> Result<String, Error> {
    let mut buf = Vec::new();
    let mut argv = vec!["bfree"];
    argv.extend_from_slice(args);
    run(argv, &mut buf)?;
    Ok(String::from_utf8(buf).unwrap())
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut a = vec!["--format", "json"];
    a.extend_from_slice(args);
    serde_json::from_str(&out(&a).unwrap()).unwrap()
}

#[test]
fn density_of_two_three() {
    let text = out(&["density", "--bset", "explicit:2,3"]).unwrap();
    assert!(text.contains("1/3"), "{text}");
    let v = json(&["density", "--bset", "explicit:4,9", "--method", "sieve"]);
    assert!(v.to_string().contains("2/3"), "{v}");
}

#[test]
fn eta_window_text() {
    let text = out(&["eta", "--bset", "explicit:2,3", "--range", "0:6"]).unwrap();
    assert!(text.contains("0100010"), "{text}");
}

#[test]
fn frequencies() {
    let text = out(&["freq", "--bset", "explicit:2,3", "--block", "101"]).unwrap();
    assert!(text.contains("1/6"), "{text}");
}

#[test]
fn witness_of_and_code() {
    let text = out(&["ca", "witness", "--code", "and_mask:0,1"]).unwrap();
    assert!(text.contains("{0,1}"), "{text}");
}

#[test]
fn code_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("and.code");
    fs::write(&path, "# and of two neighbours\nname=and\nradius=1\nones=011,111\n").unwrap();
    let text = out(&["ca", "apply", "--code", path.to_str().unwrap(), "--word", "0111010"]).unwrap();
    assert!(text.contains("11000"), "{text}");
}

#[test]
fn construct_wu_worked_example() {
    let v = json(&["ca", "construct-wu", "--u", "1", "--b0", "4", "--bset", "prime_powers:k=2"]);
    let supp: Vec<String> = v["support"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect();
    assert_eq!(supp.join(","), "1,10,19");
}

#[test]
fn audit_json_is_deterministic() {
    let args = ["ca", "audit", "--code", "and_mask:0,1", "--bset", "prime_powers:k=2", "--n", "4", "--N", "4"];
    let a = json(&args);
    let b = json(&args);
    assert_eq!(a, b);
    let defects = a["surjectivity_defects"].to_string();
    assert!(defects.contains("1110"), "{defects}");
}

#[test]
fn language_bitset_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lang.bin");
    out(&["lang", "--bset", "explicit:2,3", "--n", "4", "--bitset", path.to_str().unwrap()]).unwrap();
    assert!(!fs::read(&path).unwrap().is_empty());
}

#[test]
fn exit_codes() {
    let e = out(&["density", "--bset", "explicit:1,2"]).unwrap_err();
    assert_eq!(exit_code(&e), 2);
    let e = out(&["ca", "counterexample", "--code", "and_mask:0,1", "--bset", "prime_powers:k=2"]).unwrap_err();
    assert_eq!(exit_code(&e), 2);

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("caps.cfg");
    fs::write(&cfg, "period_cap=100\n").unwrap();
    let e = out(&[
        "--config",
        cfg.to_str().unwrap(),
        "density",
        "--bset",
        "explicit:6,10,14",
        "--method",
        "sieve",
    ])
    .unwrap_err();
    assert_eq!(exit_code(&e), 3);
}

#[test]
fn selftest_passes() {
    let v = json(&["selftest", "--seed", "7", "--cases", "20"]);
    assert_eq!(v["all_passed"], serde_json::Value::Bool(true));
}
