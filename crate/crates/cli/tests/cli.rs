use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn qlift(args: &[&str]) -> (Value, i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qlift"))
        .args(args)
        .output()
        .unwrap();
    let code = out.status.code().unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (doc, code, stderr)
}

#[test]
fn check_reports_involutivity() {
    let (doc, code, _) = qlift(&["check", &fixture("example2.sys")]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "involutive");
    assert_eq!(doc["schema"], "qlift-report/1");

    let (doc, code, _) = qlift(&["check", &fixture("non_involutive.sys")]);
    assert_eq!(code, 2);
    assert_eq!(doc["status"], "non-involutive");
    assert_eq!(doc["payload"]["witness"]["bracket"], "1");
}

#[test]
fn quantize_keeps_commuting_systems() {
    let (doc, code, _) = qlift(&["quantize", "--order", "4", &fixture("example2.sys")]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "quantised");
    let cert = &doc["payload"]["certificate"];
    assert_eq!(cert["corrections"].as_array().unwrap().len(), 0);
    assert_eq!(cert["series"][0][0], "q1*p1");
    assert!(cert["series"][1].as_array().unwrap()[1..]
        .iter()
        .all(|c| c == "0"));
    assert_eq!(doc["payload"]["verification"]["ok"], true);
}

#[test]
fn quantize_corrects_and_obstructs_under_small_bounds() {
    let (doc, code, _) = qlift(&["quantize", "--order", "3", &fixture("corrected.sys")]);
    assert_eq!(code, 0);
    assert_eq!(
        doc["payload"]["certificate"]["corrections"]
            .as_array()
            .unwrap()
            .len(),
        1
    );

    let (doc, code, _) = qlift(&[
        "quantize",
        "--order",
        "3",
        "--degree-bound",
        "0",
        &fixture("corrected.sys"),
    ]);
    assert_eq!(code, 2);
    assert_eq!(doc["status"], "obstructed");
    let o = &doc["payload"]["obstruction"];
    assert_eq!(o["classification"], "no solution within degree bound");
    assert_eq!(o["level"], 0);
}

#[test]
fn anomaly_of_the_perturbed_lift() {
    let (doc, code, _) = qlift(&["anomaly", &fixture("perturbed.sys")]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "anomaly-exact");
    assert_eq!(doc["payload"]["anomaly"]["entries"][0]["entry"], "-p1");
    assert_eq!(doc["payload"]["correction"][1], "p1");
    assert_eq!(doc["payload"]["lifting"][1][1], "0");

    // The graded solver searches whole slices, so only the bounded one honours the bound.
    let (doc, code, _) = qlift(&["anomaly", "--degree-bound", "0", &fixture("perturbed.sys")]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "anomaly-exact");
    let (doc, code, _) = qlift(&[
        "--solver",
        "bounded",
        "anomaly",
        "--degree-bound",
        "0",
        &fixture("perturbed.sys"),
    ]);
    assert_eq!(code, 2);
    assert_eq!(doc["status"], "anomaly-unresolved");

    let (doc, code, _) = qlift(&["anomaly", "--level", "1", &fixture("perturbed.sys")]);
    assert_eq!(code, 2);
    assert_eq!(doc["status"], "not-a-lift");
    assert_eq!(doc["payload"]["order"], 2);
}

#[test]
fn cohomology_and_comparison_map() {
    let (doc, code, _) = qlift(&[
        "cohomology",
        "--p",
        "1",
        "--max-degree",
        "2",
        &fixture("example1.sys"),
    ]);
    assert_eq!(code, 0);
    let dims: Vec<u64> = doc["payload"]["dimensions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["dim"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, [1, 0, 1]);

    let (doc, code, _) = qlift(&["compare-form", &fixture("form.sys")]);
    assert_eq!(code, 0);
    assert_eq!(doc["payload"]["image"]["entries"][0]["entry"], "q1*p1");
    assert_eq!(
        doc["payload"]["image"]["entries"].as_array().unwrap().len(),
        1
    );
    assert_eq!(doc["payload"]["cocycle"], true);
}

#[test]
fn generate_writes_a_loadable_system() {
    let (doc, code, _) = qlift(&["generate", &fixture("shears.sys")]);
    assert_eq!(code, 0);
    assert_eq!(
        doc["payload"]["system"][0],
        "12*p1^2 + 12*q1*p1 + 3*q1^2 + p1"
    );

    let (doc, _, _) = qlift(&["generate", "--n", "3", "--seed", "11"]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.sys");
    std::fs::write(&path, doc["payload"]["system_file"].as_str().unwrap()).unwrap();
    let (doc, code, _) = qlift(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "involutive");
}

#[test]
fn certificates_round_trip_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let cert_s = cert.to_str().unwrap();
    let (_, code, _) = qlift(&[
        "quantize",
        "--order",
        "3",
        "--out",
        cert_s,
        &fixture("corrected.sys"),
    ]);
    assert_eq!(code, 0);
    let (doc, code, _) = qlift(&["verify", cert_s]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "verified");
    assert_eq!(doc["payload"]["max_order_checked"], 4);

    let mut report: Value = serde_json::from_slice(&std::fs::read(&cert).unwrap()).unwrap();
    report["payload"]["certificate"]["series"][0][1] = Value::String("q1".into());
    std::fs::write(&cert, serde_json::to_string(&report).unwrap()).unwrap();
    let (doc, code, _) = qlift(&["verify", cert_s]);
    assert_eq!(code, 2);
    assert_eq!(doc["status"], "rejected");
}

#[test]
fn usage_errors_exit_with_one() {
    let (_, code, err) = qlift(&["frobnicate"]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());

    let (_, code, err) = qlift(&["--solver", "magic", "check", &fixture("example2.sys")]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown solver"), "{err}");

    let (_, code, _) = qlift(&["quantize", &fixture("example2.sys")]);
    assert_eq!(code, 1);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.sys");
    std::fs::write(&bad, "n = 2\nf1 = p1 + 3/0*q2\n").unwrap();
    let (_, code, err) = qlift(&["check", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("line 2, column"), "{err}");
}

#[test]
fn solvers_are_selectable_by_name() {
    for solver in ["auto", "bounded"] {
        let (doc, code, _) = qlift(&[
            "--solver",
            solver,
            "quantize",
            "--order",
            "2",
            &fixture("corrected.sys"),
        ]);
        assert_eq!(code, 0, "{solver}");
        assert_eq!(doc["payload"]["solver"], solver);
    }
    let (_, code, err) = qlift(&[
        "--solver",
        "graded",
        "quantize",
        "--order",
        "2",
        &fixture("corrected.sys"),
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("homogeneous"), "{err}");
}
