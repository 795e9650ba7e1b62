use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-mirror"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path_str(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_f2_and_p2() {
    let f2 = json(&run(&["analyze", path_str(&data("f2.json"))]));
    assert_eq!(f2["positivity"], "semi_fano_not_fano");
    let mut degrees: Vec<i64> = f2["primitive_relations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["degree"].as_i64().unwrap())
        .collect();
    degrees.sort();
    assert_eq!(degrees, vec![0, 2]);

    let p2 = json(&run(&["analyze", path_str(&data("p2.json"))]));
    assert_eq!(p2["positivity"], "fano");
    assert_eq!(p2["primitive_relations"][0]["degree"], 3);
}

#[test]
fn schema_and_validation_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run(&["analyze", path_str(&bad)]).status.code(), Some(2));

    let extra = dir.path().join("extra.json");
    std::fs::write(
        &extra,
        r#"{"dimension": 1, "rays": [[1], [-1]], "colour": 1}"#,
    )
    .unwrap();
    assert_eq!(run(&["analyze", path_str(&extra)]).status.code(), Some(2));

    let incomplete = dir.path().join("incomplete.json");
    std::fs::write(&incomplete, r#"{"dimension": 2, "rays": [[1, 0], [0, 1]]}"#).unwrap();
    assert_eq!(
        run(&["analyze", path_str(&incomplete)]).status.code(),
        Some(3)
    );

    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["analyze", path_str(&missing)]).status.code(), Some(2));
}

#[test]
fn bundle_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    let status = run(&["bundle", path_str(&data("p1.json")), "-o", path_str(&out)]);
    assert!(status.status.success());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(
        doc["rays"],
        serde_json::json!([[0, 1], [1, 1], [-1, 1], [0, -1]])
    );
    assert_eq!(
        doc["q_basis"],
        serde_json::json!([[-2, 1, 1, 0], [1, 0, 0, 1]])
    );
    // the written document is itself a valid fan
    let again = json(&run(&["analyze", path_str(&out)]));
    assert_eq!(again["positivity"], "semi_fano_not_fano");

    let p2 = json(&run(&["bundle", path_str(&data("p2.json"))]));
    assert_eq!(p2["rays"].as_array().unwrap().len(), 5);
    assert_eq!(p2["dimension"], 3);

    assert_eq!(
        run(&["bundle", path_str(&data("f2.json"))]).status.code(),
        Some(4)
    );
}

#[test]
fn potential_documents() {
    let f2 = json(&run(&[
        "potential",
        path_str(&data("f2.json")),
        "--cutoff",
        "2",
    ]));
    assert_eq!(f2["branch"], "corrected");
    assert_eq!(f2["correction_text"], "1 + q1");
    assert_eq!(f2["cutoff"], 2);
    assert_eq!(
        f2["text"],
        "q1*q2^2*z1^-1*z2^-2 + (q2 + q1*q2)*z2^-1 + z2 + z1"
    );
    for g in f2["gw_values"].as_array().unwrap() {
        assert_eq!(g["provenance"], "builtin");
    }

    let p2 = json(&run(&["potential", path_str(&data("p2.json"))]));
    assert_eq!(p2["branch"], "hori_vafa");
    assert_eq!(p2["text"], "q1*z1^-1*z2^-1 + z2 + z1");

    assert_eq!(
        run(&["potential", path_str(&data("f3.json"))])
            .status
            .code(),
        Some(4)
    );

    let dir = tempfile::tempdir().unwrap();
    let x = dir.path().join("x.json");
    assert!(
        run(&["bundle", path_str(&data("p2.json")), "-o", path_str(&x)])
            .status
            .success()
    );
    let out = run(&["potential", path_str(&x), "--cutoff", "1"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stderr).contains("[-3, 1, 1, 1, 0]"));
    let zeroed = json(&run(&[
        "potential",
        path_str(&x),
        "--cutoff",
        "1",
        "--assume-zero-above-cutoff",
    ]));
    assert_eq!(zeroed["gw_values"][0]["provenance"], "assumed_zero");
}

#[test]
fn gw_table_is_used_and_checked() {
    let dir = tempfile::tempdir().unwrap();
    let x = dir.path().join("x.json");
    assert!(
        run(&["bundle", path_str(&data("p2.json")), "-o", path_str(&x)])
            .status
            .success()
    );
    let fingerprint = json(&run(&["analyze", path_str(&x)]))["fingerprint"]
        .as_str()
        .unwrap()
        .to_string();
    let table = dir.path().join("table.json");
    let doc = serde_json::json!({
        "fan_fingerprint": fingerprint,
        "basis": [[-3, 1, 1, 1, 0]],
        "entries": [{"class": [1], "value": "-2"}, {"class": [2], "value": "5"}]
    });
    std::fs::write(&table, doc.to_string()).unwrap();
    let pot = json(&run(&[
        "potential",
        path_str(&x),
        "--cutoff",
        "2",
        "--gw-table",
        path_str(&table),
    ]));
    assert_eq!(pot["correction_text"], "1 - 2*q1 + 5*q1^2");
    assert_eq!(pot["gw_values"][0]["provenance"], "table");

    let wrong = dir.path().join("wrong.json");
    let doc = serde_json::json!({"fan_fingerprint": "00", "basis": [], "entries": []});
    std::fs::write(&wrong, doc.to_string()).unwrap();
    let out = run(&["potential", path_str(&x), "--gw-table", path_str(&wrong)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn crit_reports() {
    let dir = tempfile::tempdir().unwrap();
    let t = format!("{}", -(0.01f64).ln());
    let t2 = format!("{t},{t}");

    let p1 = dir.path().join("p1_pot.json");
    assert!(
        run(&["potential", path_str(&data("p1.json")), "-o", path_str(&p1)])
            .status
            .success()
    );
    let r = json(&run(&["crit", path_str(&p1), "--t", &t]));
    assert_eq!(r["points"].as_array().unwrap().len(), 2);

    let f2 = dir.path().join("f2_pot.json");
    assert!(
        run(&["potential", path_str(&data("f2.json")), "-o", path_str(&f2)])
            .status
            .success()
    );
    let first = run(&["crit", path_str(&f2), "--t", &t2]);
    let r = json(&first);
    assert_eq!(r["points"].as_array().unwrap().len(), 4);
    assert!(r["residuals"]
        .as_array()
        .unwrap()
        .iter()
        .all(|x| x.as_f64().unwrap() < 1e-9));
    let second = run(&["crit", path_str(&f2), "--t", &t2, "--sequential"]);
    assert_eq!(first.stdout, second.stdout);

    assert_eq!(
        run(&["crit", path_str(&f2), "--t", &t]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["crit", path_str(&f2)]).status.code(), Some(2));
}

#[test]
fn crit_without_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let pot = dir.path().join("linear.json");
    // W = z has no critical point
    let doc = serde_json::json!({
        "dimension": 1,
        "fan_fingerprint": "",
        "branch": "hori_vafa",
        "q_variables": [],
        "q_basis": [],
        "q_areas": [],
        "cutoff": null,
        "correction_factor": null,
        "correction_text": null,
        "gw_values": [],
        "open_invariants": [],
        "terms": [{"z": [1], "coefficient": [{"q": [], "value": "1"}]}],
        "text": "z1"
    });
    std::fs::write(&pot, doc.to_string()).unwrap();
    assert_eq!(run(&["crit", path_str(&pot)]).status.code(), Some(6));
}
