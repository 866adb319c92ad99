use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flowknot")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let code = out.status.code().unwrap();
    (serde_json::from_slice(&out.stdout).unwrap_or(Value::Null), code)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn dyadic_trefoil_fixture() {
    let (v, code) = json(&["fixture", "dyadic_trefoil"]);
    assert_eq!(code, 0);
    assert_eq!(v["homsS3"]["count"], "12");
    assert_eq!(v["abelianization"], "Z");
    assert_eq!(v["verdict"]["verdict"], "not-free-at-stage");
    assert_eq!(v["verdict"]["stage"], 2);
    assert_eq!(v["verdict"]["witness"]["count"], 12);
    let rel: Vec<&str> = v["relationsWedgeIdentified"].as_array().unwrap().iter().map(|r| r.as_str().unwrap()).collect();
    for eq in ["ab = bc", "bc = ca", "ca = ab"] {
        assert!(rel.contains(&eq), "{rel:?}");
    }
    let text = String::from_utf8(run(&["fixture", "dyadic_trefoil"]).stdout).unwrap();
    assert!(text.contains("homs into S3: 12"));
}

#[test]
fn fibonacci_unknotted_fixture() {
    let (v, code) = json(&["fixture", "fibonacci_unknotted"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"]["verdict"], "certified-free");
    assert_eq!(v["automorphism"], true);
    assert_eq!(v["inclusion"]["simplifiedText"], serde_json::json!(["a2a2b2", "a2b2"]));
    assert_eq!(v["duality"], true);
}

#[test]
fn thue_morse_fixture() {
    let (v, code) = json(&["fixture", "thue_morse_simplified"]);
    assert_eq!(code, 0);
    assert_eq!(v["imageRank"]["rank"], 1);
    let imgs = v["inclusion"]["simplifiedText"].as_array().unwrap();
    assert_eq!(imgs[0], imgs[1]);
}

#[test]
fn every_fixture_passes_duality() {
    for name in ["dyadic_unknotted", "dyadic_trefoil", "fibonacci_unknotted", "fibonacci_trefoil", "thue_morse_simplified"] {
        let (v, code) = json(&["fixture", name]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(v["duality"], true, "{name}");
        assert!(v["conventions"]["crossing"].is_string());
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["fixture", "granny_knot"]).status.code(), Some(2));
    assert_eq!(run(&["expansion", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(run(&["certificate", "--cf", "1", "-m", "0"]).status.code(), Some(2));
    assert_eq!(run(&["sigma-w", "012"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{ not json");
    assert_eq!(run(&["expansion", &bad]).status.code(), Some(2));
    // Fibonacci trefoil stage over the wrong bonding: duality fails
    let wrong = write(dir.path(), "wrong.json", r#"{"ranks":[2,2],"bondings":[{"images":["01","0"]}],"stages":["fibonacci_trefoil"]}"#);
    assert_eq!(run(&["expansion", &wrong]).status.code(), Some(3));
    let p = write(dir.path(), "p.json", r#"{"rank":1,"relators":[]}"#);
    assert_eq!(run(&["homs", &p, "--target", "q8"]).status.code(), Some(2));
}

#[test]
fn dyadic_expansion_is_dyadic_solenoid() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "dyadic.json",
        r#"{"ranks":[1,1,1,1],"bondings":[{"images":["00"]},{"images":["00"]},{"images":["00"]}],"stages":["dyadic_unknotted","dyadic_unknotted","dyadic_unknotted"]}"#,
    );
    let (v, code) = json(&["expansion", &f, "--depth", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["cechH1Text"], "Z[1/2]");
    assert_eq!(v["verdict"]["verdict"], "certified-free");
    let (v, _) = json(&["expansion", &f, "--depth", "0"]);
    assert_eq!(v["stages"].as_array().unwrap().len(), 1);
    assert_eq!(v["stages"][0]["presentation"]["relators"], serde_json::json!([]));
}

#[test]
fn sturmian_expansion_has_free_stable_group() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "st.json", r#"{"ranks":[2,2,2],"bondings":[{"images":[[0,0,1],[0,1]]},{"images":["0001","001"]}]}"#);
    let (v, code) = json(&["expansion", &f, "--depth", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["stableKnotGroup"]["presentation"]["rank"], 2);
    assert_eq!(v["stableKnotGroup"]["presentation"]["relators"], serde_json::json!([]));
    let (v, code) = json(&["sturmian", "1", "1", "1", "--compare", "2", "1", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["compare"]["tailsEquivalent"], true);
    assert_eq!(v["stableKnotGroup"]["presentation"]["rank"], 2);
}

#[test]
fn certificates() {
    let dir = tempfile::tempdir().unwrap();
    let sub = write(dir.path(), "fib.json", r#"{"alphabet":2,"images":["010","01"]}"#);
    let (v, code) = json(&["certificate", "--sub", &sub, "-m", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["complete"], true);
    let g: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r["genusLB"].as_u64().unwrap()).collect();
    assert_eq!(g.len(), 3);
    assert!(g.windows(2).all(|p| p[0] < p[1]));
    let (v, _) = json(&["certificate", "--sub", &sub, "-m", "1"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    let (v, code) = json(&["certificate", "--cf", "1,1,1", "-m", "5", "--budget", "40"]);
    assert_eq!(code, 0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
    let (v, code) = json(&["certificate", "--sub", &sub, "-m", "50", "--budget", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["complete"], false);
    for key in ["w", "mu", "loopWord", "strands", "crossings", "genusLB"] {
        assert!(v["rows"][0].get(key).is_some(), "{key}");
    }
}

#[test]
fn homs_and_prediction() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "t.json", r#"{"rank":2,"names":["a","b"],"relators":[[[0,1],[1,1],[0,1],[1,-1],[0,-1],[1,-1]]]}"#);
    let (v, code) = json(&["homs", &p, "--target", "s3"]);
    assert_eq!((v["count"].as_str(), code), (Some("12"), 0));
    let (v, _) = json(&["homs", &p, "--target", "z/4"]);
    assert_eq!(v["count"], v["predicted"]);
}

#[test]
fn sigma_w_report() {
    let (v, code) = json(&["sigma-w", "01"]);
    assert_eq!(code, 0);
    assert_eq!(v["mu"], 2);
    assert_eq!(v["images"], serde_json::json!(["000100", "001000"]));
    assert_eq!(v["uniformInjective"], true);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let sub = write(dir.path(), "fib.json", r#"{"alphabet":2,"images":["010","01"]}"#);
    let cases: Vec<Vec<&str>> = vec![
        vec!["--json", "fixture", "fibonacci_trefoil"],
        vec!["--json", "certificate", "--sub", &sub, "-m", "4"],
        vec!["--json", "sturmian", "1", "2", "3"],
    ];
    for args in cases {
        let a = run(&args).stdout;
        let b = run(&args).stdout;
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
}
