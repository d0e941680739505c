use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn algostat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algostat")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

fn baseline_in(dir: &Path) -> String {
    dir.join("slack.json").to_str().unwrap().to_string()
}

#[test]
fn reports_carry_their_provenance() {
    let o = algostat(&["game", "run", "--seed", "7"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["seeds"], serde_json::json!([0, 7]));
    assert_eq!(v["codebook_version"], 1);
    assert!(v["build_id"].as_str().is_some_and(|s| !s.is_empty()));
    assert_eq!(v["config"]["command"]["name"], "game");
}

#[test]
fn runs_are_deterministic() {
    for args in [&["game", "run", "--seed", "3", "--transcript"][..], &["profile", "--pair", "prefix", "--n", "2", "--seed", "4"]] {
        assert_eq!(stdout(&algostat(args)), stdout(&algostat(args)));
    }
}

#[test]
fn csv_outputs_have_documented_headers() {
    let o = algostat(&["predict", "--data", "0110", "--family", "cylinders", "--d", "8", "--format", "csv"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let mut lines = s.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some("y,witness"));
    assert!(lines.next().is_some());

    let s = stdout(&algostat(&["profile", "--data", "0110", "--format", "csv"]));
    assert_eq!(s.lines().filter(|l| *l == "a_bits,b_millibits,witness").count(), 2);
    assert!(s.contains("# distance_millibits="));

    let dir = tempfile::tempdir().unwrap();
    let b = baseline_in(dir.path());
    let o = algostat(&["verify", "theorem-1", "--n", "3", "--family", "cylinders", "--d", "0..2", "--format", "csv", "--baseline", &b]);
    assert!(o.status.success());
    let s = stdout(&o);
    let rows: Vec<&str> = s.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "d_bits,direction,slack_millibits");
    assert_eq!(rows.len(), 1 + 3 * 2);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["verify", "theorem-7"][..],
        &["frobnicate"],
        &["complexity", "01x"],
        &["verify", "lemma-1", "--n", "3"],
        &["families", "--format", "csv"],
        &[],
    ] {
        let o = algostat(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn baseline_regressions_exit_with_one_until_refrozen() {
    let dir = tempfile::tempdir().unwrap();
    let b = baseline_in(dir.path());
    let args = ["verify", "theorem-1", "--n", "3", "--family", "hamming-balls", "--baseline", &b];
    let o = algostat(&args);
    assert!(o.status.success());
    assert_eq!(json(&o)["result"]["baseline_outcome"], "created");

    let mut frozen: Value = serde_json::from_str(&std::fs::read_to_string(&b).unwrap()).unwrap();
    frozen["entries"][0]["max_millibits"] = Value::from(-1);
    std::fs::write(&b, serde_json::to_string(&frozen).unwrap()).unwrap();

    let o = algostat(&args);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["result"]["baseline_outcome"], "refused");

    let mut refreeze = args.to_vec();
    refreeze.push("--refreeze");
    assert!(algostat(&refreeze).status.success());
    let o = algostat(&args);
    assert!(o.status.success());
    assert_eq!(json(&o)["result"]["baseline_outcome"], "unchanged");
}

#[test]
fn config_files_replay_the_same_run() {
    let dir = tempfile::tempdir().unwrap();
    let direct = json(&algostat(&["construct", "plane-pair", "--k", "3", "--seed", "2"]));
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, serde_json::json!({"command": direct["config"]["command"].clone()}).to_string()).unwrap();
    let out = dir.path().join("report.json");
    let o = algostat(&["--config", cfg.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let replay: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(replay["result"], direct["result"]);
    assert_eq!(replay["result"]["incident"], true);

    std::fs::write(&cfg, r#"{"command": {"name": "families", "bogus": 1}}"#).unwrap();
    assert_eq!(algostat(&["--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}
