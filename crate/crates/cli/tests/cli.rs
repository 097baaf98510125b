use std::process::{Command, Output};

use serde_json::Value;

const CONTACTS: &str = "[[3,0],[3,0],[0,3],[0,3],[-3,-3],[-3,-3]]";

fn campana(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_campana"))
        .args(args)
        .env_remove("CAMPANA_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn exit_code_contract() {
    let cases: &[(&[&str], i32)] = &[
        (&["fan-check", "--fan", "P3"], 0),
        (
            &[
                "gen-contacts",
                "--fan",
                "P2",
                "--mult",
                "[2,2,2]",
                "--degree",
                "6",
            ],
            0,
        ),
        (
            &[
                "gen-contacts",
                "--fan",
                "P2",
                "--mult",
                "[2,2,2]",
                "--degree",
                "5",
            ],
            1,
        ),
        (
            &[
                "gen-contacts",
                "--fan",
                "P2",
                "--mult",
                "[2,2,2]",
                "--degree",
                "7",
                "--char",
                "2",
            ],
            1,
        ),
        (
            &[
                "campana-check",
                "--fan",
                "P2",
                "--contacts",
                CONTACTS,
                "--mult",
                "[3,3,3]",
            ],
            0,
        ),
        (
            &[
                "campana-check",
                "--fan",
                "P2",
                "--contacts",
                CONTACTS,
                "--mult",
                "[4,4,4]",
            ],
            1,
        ),
        (
            &[
                "campana-check",
                "--fan",
                "P2",
                "--contacts",
                CONTACTS,
                "--mult",
                "[3,3,3]",
                "--char",
                "3",
            ],
            1,
        ),
        (
            &[
                "separability",
                "--dim",
                "2",
                "--contacts",
                "[[3,0],[0,3],[-3,-3]]",
                "--char",
                "3",
            ],
            1,
        ),
        (
            &[
                "separability",
                "--dim",
                "2",
                "--contacts",
                "[[3,0],[0,3],[-3,-3]]",
            ],
            0,
        ),
        (
            &[
                "two-point",
                "--dim",
                "1",
                "--contacts",
                "[[2],[3],[-5]]",
                "--x",
                "[1,1]",
                "--y",
                "[1,128]",
                "--exact",
            ],
            0,
        ),
        (
            &[
                "two-point",
                "--dim",
                "1",
                "--contacts",
                "[[2],[4],[-6]]",
                "--x",
                "[1,1]",
                "--y",
                "[1,2]",
                "--exact",
            ],
            3,
        ),
        (
            &[
                "two-point",
                "--dim",
                "1",
                "--contacts",
                "[[2],[4],[-6]]",
                "--x",
                "[1,1]",
                "--y",
                "[1,2]",
                "--numeric",
            ],
            0,
        ),
        (
            &[
                "two-point",
                "--dim",
                "1",
                "--contacts",
                "[[2],[4],[-6]]",
                "--x",
                "[1,1]",
                "--y",
                "[1,-2]",
            ],
            1,
        ),
        (
            &[
                "jet-check",
                "--jet",
                r#"{"n":4,"valuations":[0,2,3]}"#,
                "--mult",
                "[2,2,2]",
            ],
            0,
        ),
        (
            &[
                "jet-check",
                "--jet",
                r#"{"n":4,"valuations":[0,1,3]}"#,
                "--mult",
                "[2,2,2]",
            ],
            1,
        ),
        (&["p1-classify", "--mult", "[2,3,5]"], 0),
        (&["p1-classify", "--mult", "[2,3,7]"], 1),
        (&["p1-classify", "--mult", "[2,\"inf\"]"], 1),
        (&["p1-cover", "--case", "dihedral", "--m", "5"], 0),
        (
            &["p1-cover", "--case", "cyclic", "--m", "2", "--char", "2"],
            2,
        ),
        (&["p1-cover", "--case", "dihedral"], 2),
        (
            &[
                "rh-check",
                "--degree",
                "10",
                "--branch",
                "[[2,2,2,2,2],[2,2,2,2,2],[5,5]]",
            ],
            0,
        ),
        (&["rh-check", "--degree", "2", "--branch", "[]"], 1),
        (&["rh-check", "--degree", "4", "--branch", "[[3]]"], 1),
        (&["expected-dim", "--markings", "6", "--toric-dim", "2"], 0),
        (
            &[
                "expected-dim",
                "--genus",
                "1",
                "--markings",
                "0",
                "--chi",
                "4",
            ],
            0,
        ),
        (&["fan-check", "--fan", "{\"dim\": 2"], 2),
        (&["fan-check", "--fan", "/nonexistent/fan.json"], 2),
        (&["fan-check", "--fan", "P2", "--bogus"], 2),
        (&["fan-check", "--fan", "P2", "--char", "4"], 2),
    ];
    for (args, expected) in cases {
        let out = campana(args);
        assert_eq!(
            code(&out),
            *expected,
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn malformed_json_names_location() {
    let out = campana(&["fan-check", "--fan", "{\"dim\": 2,\n \"rays\": [[1,0],}"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn verdicts_name_operation_and_anchor() {
    let out = campana(&["p1-cover", "--case", "icosahedral", "--compose", "4"]);
    let r = report(&out);
    for v in r["verdicts"].as_array().unwrap() {
        assert!(!v["operation"].as_str().unwrap().is_empty());
        assert!(!v["anchor"].as_str().unwrap().is_empty());
        assert_eq!(v["passed"], Value::Bool(true), "{v}");
    }
    assert_eq!(r["witnesses"]["cover"]["degree"], 60);
    assert_eq!(r["seed"], Value::Null);
}

#[test]
fn seed_recorded_and_env_fallback() {
    let with_flag = campana(&[
        "build-curve",
        "--dim",
        "2",
        "--contacts",
        CONTACTS,
        "--seed",
        "11",
    ]);
    assert_eq!(report(&with_flag)["seed"], 11);
    let with_env = Command::new(env!("CARGO_BIN_EXE_campana"))
        .args(["build-curve", "--dim", "2", "--contacts", CONTACTS])
        .env("CAMPANA_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(with_env.stdout, with_flag.stdout);
    let other = campana(&[
        "build-curve",
        "--dim",
        "2",
        "--contacts",
        CONTACTS,
        "--seed",
        "12",
    ]);
    assert_ne!(report(&other)["witnesses"], report(&with_flag)["witnesses"]);
}

#[test]
fn out_file_round_trip_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("build.json");
    let out = campana(&[
        "build-curve",
        "--dim",
        "2",
        "--contacts",
        CONTACTS,
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    let curve_path = dir.path().join("curve.json");
    std::fs::write(&curve_path, r["witnesses"]["curve"].to_string()).unwrap();
    let verified = campana(&[
        "verify-curve",
        "--curve",
        curve_path.to_str().unwrap(),
        "--mult",
        "[3,3,3]",
    ]);
    assert_eq!(code(&verified), 0);
    let failing = campana(&[
        "verify-curve",
        "--curve",
        curve_path.to_str().unwrap(),
        "--mult",
        "[4,4,4]",
    ]);
    assert_eq!(code(&failing), 1);
}

#[test]
fn cover_json_is_verifiable() {
    let dir = tempfile::tempdir().unwrap();
    let r = report(&campana(&["p1-cover", "--case", "dihedral", "--m", "3"]));
    let path = dir.path().join("cover.json");
    let mut cover = r["witnesses"]["cover"].clone();
    std::fs::write(&path, cover.to_string()).unwrap();
    assert_eq!(
        code(&campana(&["p1-cover", "--cover", path.to_str().unwrap()])),
        0
    );
    cover["branch"][0]["partition"] = serde_json::json!([4, 2]);
    std::fs::write(&path, cover.to_string()).unwrap();
    assert_eq!(
        code(&campana(&["p1-cover", "--cover", path.to_str().unwrap()])),
        1
    );
}

#[test]
fn timing_is_opt_in() {
    let plain = report(&campana(&["fan-check", "--fan", "P2"]));
    assert_eq!(plain["wall_time_ms"], Value::Null);
    let timed = report(&campana(&["fan-check", "--fan", "P2", "--timing"]));
    assert!(timed["wall_time_ms"].is_number());
    assert_eq!(plain["input_digest"], timed["input_digest"]);
}

#[test]
fn open_question_is_reported() {
    let r = report(&campana(&[
        "p1-classify",
        "--mult",
        "[2,3,4]",
        "--char",
        "2",
    ]));
    assert_eq!(
        r["witnesses"]["cover_availability"]["status"],
        "open_per_source"
    );
    assert_eq!(
        r["witnesses"]["reduction"]["assigned"],
        serde_json::json!([2, 3, 5])
    );
}
