use std::path::Path;
use std::process::{Command, Output};

fn hamrecon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamrecon"))
        .args(args)
        .env_remove("HAMRECON_MAX_STATES")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_reports_pass() {
    let out = hamrecon(&["check", "--q", "3", "--n", "4", "--h", "2", "--d", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["origin_value"], "-3");
    assert_eq!(v["failures"], serde_json::json!([]));
}

#[test]
fn check_reports_failure_with_exit_two() {
    let out = hamrecon(&["check", "--q", "3", "--n", "4", "--h", "3", "--d", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["pass"], false);
    assert_eq!(v["failures"][0]["k"], 1);
    assert_eq!(v["failures"][0]["sum"], "0");
}

#[test]
fn invalid_parameters_exit_64() {
    for args in [
        vec!["check", "--q", "3", "--n", "4", "--h", "2", "--d", "3"],
        vec!["check", "--q", "2", "--n", "4", "--h", "2", "--d", "2"],
        vec!["check", "--q", "3", "--n", "4", "--h", "5", "--d", "2"],
        vec!["verify", "--mode", "full", "--q", "3", "--n", "4", "--h", "2", "--d", "1", "--seed", "1"],
        vec!["verify", "--mode", "ball", "--q", "3", "--n", "4", "--h", "2", "--seed", "1", "--tolerance", "0"],
        vec!["check", "--q", "three"],
        vec!["frobnicate"],
    ] {
        let out = hamrecon(&args);
        assert_eq!(out.status.code(), Some(64), "{args:?}");
    }
    assert_eq!(hamrecon(&["--help"]).status.code(), Some(0));
}

#[test]
fn state_cap_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_hamrecon"))
        .args(["verify", "--mode", "full", "--q", "3", "--n", "4", "--h", "2", "--seed", "1"])
        .env("HAMRECON_MAX_STATES", "80")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn sweep_rows_and_order() {
    let out = hamrecon(&["sweep", "--q", "3", "--n", "4,3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "q,n,h,d,status,first_k,first_l,origin_value");
    // sum over n in {3, 4} of sum_h (h + 1)
    assert_eq!(lines.len() - 1, 10 + 15);
    assert_eq!(lines[1], "3,3,0,0,pass,,,1");
    assert!(lines.contains(&"3,3,2,1,fail-origin,,,0"));
    assert!(lines.contains(&"3,4,3,2,fail-layer,1,1,-3"));
    let keys: Vec<Vec<usize>> = lines[1..]
        .iter()
        .map(|l| l.split(',').take(4).map(|x| x.parse().unwrap()).collect())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--mode", "full", "--q", "3", "--n", "4", "--h", "2", "--seed", "7"];
    let a = hamrecon(&args);
    let b = hamrecon(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert!(v["max_rel_error"].as_f64().unwrap() <= 1e-8);
    assert_eq!(v["compared"], 81);
}

#[test]
fn verify_ball_compares_the_ball_only() {
    let out = hamrecon(&["verify", "--mode", "ball", "--q", "3", "--n", "4", "--h", "2", "--d", "1", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    // |B_1| = 1 + 4 * 2
    assert_eq!(json(&out)["compared"], 9);
}

#[test]
fn verify_condition_failure_exits_two() {
    let out = hamrecon(&["verify", "--mode", "ball", "--q", "3", "--n", "3", "--h", "2", "--d", "1", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let report: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(report["origin_pass"], false);
}

#[test]
fn generate_and_reconstruct_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("f.json");
    let sphere = dir.path().join("s.json");
    let back = dir.path().join("g.json");
    let gen = |extra: &[&str], target: &Path| {
        let mut args = vec!["generate", "--q", "4", "--n", "3", "--h", "2", "--seed", "11", "--output", path(target)];
        args.extend_from_slice(extra);
        assert_eq!(hamrecon(&args).status.code(), Some(0));
    };
    gen(&[], &full);
    gen(&["--d", "2"], &sphere);
    for extra in [&[][..], &["--oracle-eta"][..]] {
        let mut args = vec!["reconstruct", "--mode", "full", "--input", path(&sphere), "--output", path(&back)];
        args.extend_from_slice(extra);
        assert_eq!(hamrecon(&args).status.code(), Some(0));
        let f: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&full).unwrap()).unwrap();
        let g: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&back).unwrap()).unwrap();
        let (fv, gv) = (f["values"].as_array().unwrap(), g["values"].as_array().unwrap());
        assert_eq!(fv.len(), 64);
        for (a, b) in fv.iter().zip(gv) {
            assert_eq!(a["w"], b["w"]);
            let d = (a["re"].as_f64().unwrap() - b["re"].as_f64().unwrap()).abs()
                + (a["im"].as_f64().unwrap() - b["im"].as_f64().unwrap()).abs();
            assert!(d < 1e-9);
        }
    }
    let ball = dir.path().join("b.json");
    let out = hamrecon(&["reconstruct", "--mode", "ball", "--input", path(&sphere), "--output", path(&ball)]);
    assert_eq!(out.status.code(), Some(0));
    let b: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&ball).unwrap()).unwrap();
    // |B_2| = 1 + 3 * 3 + 3 * 9
    assert_eq!(b["values"].as_array().unwrap().len(), 37);
}

#[test]
fn inconsistent_input_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let sphere = dir.path().join("s.json");
    let args = ["generate", "--q", "3", "--n", "4", "--h", "4", "--seed", "5", "--d", "2", "--output", path(&sphere)];
    assert_eq!(hamrecon(&args).status.code(), Some(0));
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&sphere).unwrap()).unwrap();
    doc["values"][3]["re"] = serde_json::json!(2.5);
    std::fs::write(&sphere, doc.to_string()).unwrap();
    let out = hamrecon(&["reconstruct", "--mode", "ball", "--input", path(&sphere)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn ball_mode_needs_the_eigenvalue_index() {
    let dir = tempfile::tempdir().unwrap();
    let sphere = dir.path().join("s.json");
    std::fs::write(&sphere, r#"{"q":3,"n":3,"d":1,"values":[]}"#).unwrap();
    let out = hamrecon(&["reconstruct", "--mode", "ball", "--input", path(&sphere)]);
    assert_eq!(out.status.code(), Some(64));
    let out = hamrecon(&["reconstruct", "--mode", "ball", "--input", path(&sphere), "--h", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["values"].as_array().unwrap().iter().all(|e| e["re"] == 0.0 && e["im"] == 0.0));
}

#[test]
fn krawtchouk_dump_csv() {
    let out = hamrecon(&["krawtchouk-dump", "--q", "3", "--n", "2"]);
    assert_eq!(stdout(&out), "i,t0,t1,t2\n0,1,1,1\n1,4,1,-2\n2,4,-2,1\n");
}

#[test]
fn local_dist_prints_both_faces() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    let args = ["generate", "--q", "3", "--n", "3", "--h", "1", "--seed", "2", "--output", path(&f)];
    assert_eq!(hamrecon(&args).status.code(), Some(0));
    let out = hamrecon(&["local-dist", "--input", path(&f), "--face", "2", "--anchor", "102"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["face"], serde_json::json!([2]));
    assert_eq!(v["components"].as_array().unwrap().len(), 2);
    assert_eq!(v["orthogonal"]["face"], serde_json::json!([1, 3]));
    assert_eq!(v["orthogonal"]["components"].as_array().unwrap().len(), 3);
}
