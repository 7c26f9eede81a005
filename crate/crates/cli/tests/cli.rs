use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use semwave_core::wave::snapshot::read_snapshot;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semwave"))
}

fn repo(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn fixture() -> PathBuf {
    repo("crates/core/fixtures/embeddings.jsonl")
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out").arg(out).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

/// Vectors straight from the fixture file, without going through the loader.
fn fixture_vector(token: &str) -> Vec<f64> {
    let text = fs::read_to_string(fixture()).unwrap();
    for line in text.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        if v["token"] == token {
            return v["vector"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        }
    }
    panic!("{token} not in fixture");
}

#[test]
fn similarity_prints_the_cosine_of_the_fixture_vectors() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture();
    let o = run(&["similarity", "--embeddings", f.to_str().unwrap(), "--a", "dog", "--b", "cat"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));

    let (a, b) = (fixture_vector("dog"), fixture_vector("cat"));
    let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let want = dot / (na * nb);

    let printed: f64 = stdout(&o).trim().parse().unwrap();
    assert_eq!(printed, want);
    let json = read_json(&dir.path().join("similarity.json"));
    assert_eq!(json["similarity"].as_f64().unwrap(), want);
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn similarity_matches_frozen_prompt_values() {
    let expected = read_json(&repo("crates/core/fixtures/expected.json"));
    let want = expected["prompt_similarities"]["I like cats."]["cats"].as_f64().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let f = fixture();
    let o = run(
        &["similarity", "--embeddings", f.to_str().unwrap(), "--a", "I like cats.", "--b", "cats"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim().parse::<f64>().unwrap(), want);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let o = bin().args(["evolve", "--no-such-flag"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"), "{}", stderr(&o));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let o = bin().arg("teleport").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_errors_name_the_parameter() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = repo("configs/soliton.toml");
    let o = run(&["evolve", "--config", cfg.to_str().unwrap(), "--set", "grid.n=\"many\""], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("grid.n"), "{}", stderr(&o));

    let o = run(&["greens", "--set", "dim=3", "--set", "radius=2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("radius"), "{}", stderr(&o));

    let o = run(&["tunnel", "--c", "1", "--v=-1", "--spectral-only"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`v`"), "{}", stderr(&o));
}

#[test]
fn runtime_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture();
    let o = run(
        &["similarity", "--embeddings", f.to_str().unwrap(), "--a", "dog", "--b", "not-a-token"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not-a-token"));
}

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

#[test]
fn soliton_run_writes_series_and_final_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = repo("configs/soliton.toml");
    let o = run(&["evolve", "--config", cfg.to_str().unwrap()], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));

    let csv = fs::read_to_string(dir.path().join("observables.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("time,norm,energy,mean_x"));
    assert_eq!(lines.count(), 101);

    // |ψ| stays on the sech profile; the phase rotates.
    let (field, t) = read_snapshot(&dir.path().join("final.bin")).unwrap();
    assert!((t - 10.0).abs() < 1e-12);
    let err = field
        .samples()
        .iter()
        .enumerate()
        .map(|(i, z)| (z.norm() - sech(field.grid().point(i)[0])).abs())
        .fold(0.0, f64::max);
    assert!(err < 1e-3, "L∞ {err}");

    let m = read_json(&dir.path().join("manifest.json"));
    assert_eq!(m["command"], "evolve");
    assert_eq!(m["config"]["params"]["gamma"], -1.0);
    assert_eq!(m["config"]["params"]["charge_tolerance"], 1e-8);
    let outputs: Vec<&str> = m["outputs"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(outputs, ["observables.csv", "final.bin", "final.json", "charge.json"]);
    assert_eq!(read_json(&dir.path().join("charge.json"))["verdict"], "conserved");
}

fn digest(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = walk(dir)
        .into_iter()
        .filter(|p| p.file_name().unwrap() != "manifest.json")
        .map(|p| (p.strip_prefix(dir).unwrap().display().to_string(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn walk(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for e in fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

fn strip_time(mut m: Value) -> Value {
    m.as_object_mut().unwrap().remove("created_unix");
    m
}

#[test]
fn identical_reruns_are_byte_identical() {
    let cfg = repo("configs/free_packet.toml");
    let args = [
        "evolve",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "11",
        "--set",
        "noise.amplitude=0.001",
        "--set",
        "steps=200",
        "--set",
        "snapshot_every=100",
    ];
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert!(run(&args, d1.path()).status.success());
    assert!(run(&args, d2.path()).status.success());
    let (a, b) = (digest(d1.path()), digest(d2.path()));
    assert_eq!(a.len(), 10);
    assert!(a == b, "data files differ between reruns");
    assert_eq!(
        strip_time(read_json(&d1.path().join("manifest.json"))),
        strip_time(read_json(&d2.path().join("manifest.json")))
    );

    // a different seed changes the noisy initial state
    let d3 = tempfile::tempdir().unwrap();
    let mut other = args;
    other[4] = "12";
    assert!(run(&other, d3.path()).status.success());
    assert!(digest(d3.path()) != a);
}

#[test]
fn toml_and_json_configs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let json_cfg = dir.path().join("greens.json");
    fs::write(&json_cfg, r#"{"command": "greens", "dim": 3, "r_min": 0.25, "r_max": 4.0, "samples": 16}"#).unwrap();
    let (d1, d2) = (dir.path().join("a"), dir.path().join("b"));
    let toml_cfg = repo("configs/greens3.toml");
    assert!(run(&["greens", "--config", toml_cfg.to_str().unwrap()], &d1).status.success());
    assert!(run(&["greens", "--config", json_cfg.to_str().unwrap()], &d2).status.success());
    assert_eq!(fs::read(d1.join("greens.csv")).unwrap(), fs::read(d2.join("greens.csv")).unwrap());

    let csv = fs::read_to_string(d1.join("greens.csv")).unwrap();
    let row: Vec<f64> = csv.lines().nth(4).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row[0], 1.0);
    assert!((row[1] - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
}

#[test]
fn flags_override_config_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = repo("configs/soliton.toml");
    let o = run(&["evolve", "--config", cfg.to_str().unwrap(), "--steps", "50", "--set", "record_every=10"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("observables.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 6);
    let m = read_json(&dir.path().join("manifest.json"));
    assert_eq!(m["config"]["params"]["steps"], 50);
}

#[test]
fn config_for_another_subcommand_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = repo("configs/tunnel.toml");
    let o = run(&["evolve", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn action_writes_terms_and_total() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("traj");
    let cfg = repo("configs/free_packet.toml");
    let o = run(
        &["evolve", "--config", cfg.to_str().unwrap(), "--steps", "20", "--set", "snapshot_every=10"],
        &traj,
    );
    assert!(o.status.success(), "{}", stderr(&o));

    let s = |name: &str| traj.join("snapshots").join(name).display().to_string();
    let snaps = format!(r#"snapshots=["{}","{}","{}"]"#, s("step_00.bin"), s("step_10.bin"), s("step_20.bin"));
    let out = dir.path().join("action");
    let o = run(&["action", "--set", &snaps, "--set", r#"nonlinearity={"kind":"cubic","gamma":0.5}"#], &out);
    assert!(o.status.success(), "{}", stderr(&o));

    let a = read_json(&out.join("action.json"));
    let terms = a["terms"].as_object().unwrap();
    let mut keys: Vec<&str> = terms.keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["gradient", "nonlinear", "time_kinetic"]);
    // the file itself lists terms in Lagrangian order
    let raw = fs::read_to_string(out.join("action.json")).unwrap();
    let at = |k: &str| raw.find(&format!("\"{k}\"")).unwrap();
    assert!(at("time_kinetic") < at("gradient") && at("gradient") < at("nonlinear"));
    let sum: f64 = terms.values().map(|v| v.as_f64().unwrap()).sum();
    assert!((sum - a["total"].as_f64().unwrap()).abs() < 1e-10);
    assert_eq!(read_json(&out.join("lagrangians.json")).as_array().unwrap().len(), 3);

    // asking for a gauge term without A is a configuration error
    let o = run(&["action", "--snapshot", &s("step_10.bin"), "--terms", "field_strength"], &out);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("terms"));
}

#[test]
fn batch_runs_each_config_in_its_own_directory() {
    let dir = tempfile::tempdir().unwrap();
    let cfgs = ["configs/greens3.toml", "configs/mexican_hat.toml", "configs/plane_interference.json"].map(repo);
    let o = bin()
        .arg("batch")
        .args(&cfgs)
        .args(["--jobs", "3", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    for (i, name, file) in [
        (0, "greens3", "greens.csv"),
        (1, "mexican_hat", "vacuum.json"),
        (2, "plane_interference", "interference.csv"),
    ] {
        let sub = dir.path().join(format!("{i}_{name}"));
        assert!(sub.join(file).exists(), "{}", sub.display());
        assert!(sub.join("manifest.json").exists());
    }
    let vac = read_json(&dir.path().join("1_mexican_hat/vacuum.json"));
    assert!((vac["magnitude"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
}

#[test]
fn batch_reports_failed_runs() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"command": "similarity", "a": "x", "b": "y", "embeddings": "/nonexistent.jsonl"}"#).unwrap();
    let good = repo("configs/greens3.toml");
    let o = bin().arg("batch").arg(&good).arg(&bad).arg("--out").arg(dir.path().join("o")).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(dir.path().join("o/0_greens3/greens.csv").exists());
}

#[test]
fn complexify_then_complex_similarity() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture();
    for (target, sub) in [("dog", "s1"), ("cat", "s2")] {
        let o = run(
            &["complexify", "--embeddings", f.to_str().unwrap(), "--target", target, "--basis", "dogs,cats"],
            &dir.path().join(sub),
        );
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let sa = dir.path().join("s1/state.json");
    let sb = dir.path().join("s2/state.json");
    let o = run(
        &["similarity", "--state-a", sa.to_str().unwrap(), "--state-b", sb.to_str().unwrap()],
        &dir.path().join("sim"),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let j = read_json(&dir.path().join("sim/similarity.json"));
    let m = j["magnitude"].as_f64().unwrap();
    assert!((m - j["re"].as_f64().unwrap().hypot(j["im"].as_f64().unwrap())).abs() < 1e-15);
    assert!(m > 0.0 && m <= 1.0 + 1e-12);
}
