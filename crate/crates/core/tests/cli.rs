use std::path::Path;
use std::process::{Command, Output};

fn lab(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_choquard-lab"))
        .args(args)
        .current_dir(cwd)
        .env_remove("CHOQUARD_LAB_CACHE")
        .output()
        .unwrap()
}

fn solve_newtonian(dir: &Path) {
    let out = lab(&["solve", "--d", "3", "--alpha", "1", "--p", "2", "--n", "121", "--out-dir", "q"], dir);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn solve_writes_state_files() {
    let tmp = tempfile::tempdir().unwrap();
    solve_newtonian(tmp.path());
    for f in ["Q.json", "Q.csv", "Q.config.json"] {
        assert!(tmp.path().join("q").join(f).exists(), "{f}");
    }
    let doc: serde_json::Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join("q/Q.json")).unwrap()).unwrap();
    assert_eq!(doc["equation"], "choquard");
    assert!(doc["residual"].as_f64().unwrap() <= 1e-10);
    // Nothing leaks outside the output directory.
    let entries: Vec<_> = std::fs::read_dir(tmp.path()).unwrap().collect();
    assert_eq!(entries.len(), 1);
}

#[test]
fn solve_rejects_alpha_outside_range() {
    let tmp = tempfile::tempdir().unwrap();
    let out = lab(&["solve", "--d", "3", "--alpha", "5", "--p", "2"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha outside (0,d)"));
}

#[test]
fn solve_reports_non_convergence() {
    let tmp = tempfile::tempdir().unwrap();
    let out = lab(
        &["solve", "--d", "3", "--alpha", "1", "--p", "2", "--n", "81", "--max-iter", "3", "--out-dir", "x"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!tmp.path().join("x/Q.json").exists());
}

#[test]
fn model_soliton_from_the_command_line() {
    let tmp = tempfile::tempdir().unwrap();
    let out = lab(
        &["solve", "--model", "--d", "1", "--p", "3", "--r-max", "40", "--n", "2000", "--stretch", "1", "--out-dir", "m"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_path(tmp.path().join("m/Q.csv")).unwrap();
    let mut worst: f64 = 0.0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let r: f64 = rec[0].parse().unwrap();
        let u: f64 = rec[1].parse().unwrap();
        worst = worst.max((u - 2f64.sqrt() / r.cosh()).abs());
    }
    assert!(worst <= 1e-6, "{worst}");
}

#[test]
fn verify_passes_fails_and_rejects() {
    let tmp = tempfile::tempdir().unwrap();
    solve_newtonian(tmp.path());
    let ok = lab(&["verify", "q/Q.json", "--out-dir", "v"], tmp.path());
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("PASS"));
    assert!(tmp.path().join("v/verify.json").exists());

    // Scale the profile by 1.1: no longer a solution.
    let csv_path = tmp.path().join("q/Q.csv");
    let mut rdr = csv::Reader::from_path(&csv_path).unwrap();
    let rows: Vec<(String, f64)> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].to_string(), r[1].parse::<f64>().unwrap())
        })
        .collect();
    let mut w = csv::Writer::from_path(&csv_path).unwrap();
    w.write_record(["r", "value"]).unwrap();
    for (r, v) in rows {
        w.write_record([r, format!("{:.17e}", 1.1 * v)]).unwrap();
    }
    w.flush().unwrap();
    let bad = lab(&["verify", "q/Q.json"], tmp.path());
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("FAIL"));

    let missing = lab(&["verify", "nope.json"], tmp.path());
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn spectrum_verdict_free_operator_and_bad_sector() {
    let tmp = tempfile::tempdir().unwrap();
    solve_newtonian(tmp.path());
    let out = lab(&["spectrum", "q/Q.json", "--k", "3", "--dump-eigenfields", "--out-dir", "s"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rep: serde_json::Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join("s/spectrum.json")).unwrap()).unwrap();
    assert_eq!(rep["verdict"]["radial_kernel_trivial"], true);
    assert_eq!(rep["verdict"]["translation_mode_found"], true);
    assert!(tmp.path().join("s/spectrum_ell1.csv").exists());

    let free = lab(&["spectrum", "--zero-field", "--d", "3", "--n", "81", "--k", "2", "--out-dir", "z"], tmp.path());
    assert_eq!(free.status.code(), Some(0));
    let rep: serde_json::Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join("z/spectrum.json")).unwrap()).unwrap();
    for s in rep["sectors"].as_array().unwrap() {
        assert!(s["eigenvalues"][0].as_f64().unwrap() >= 1.0 - 1e-9);
    }
    assert!(rep["verdict"].is_null());

    let bad = lab(&["spectrum", "q/Q.json", "--ell", "2", "--out-dir", "s"], tmp.path());
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn sweep_is_deterministic_and_resumable() {
    let tmp = tempfile::tempdir().unwrap();
    let args = |dir: &'static str| {
        vec!["sweep", "--d", "3", "--n", "81", "--geometric", "3", "--out-dir", dir]
    };
    assert_eq!(lab(&args("a"), tmp.path()).status.code(), Some(0));
    assert_eq!(lab(&args("b"), tmp.path()).status.code(), Some(0));
    let a = std::fs::read(tmp.path().join("a/sweep.csv")).unwrap();
    let b = std::fs::read(tmp.path().join("b/sweep.csv")).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a.clone()).unwrap();
    assert_eq!(text.lines().count(), 4);
    let h1: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(8).unwrap().parse().unwrap())
        .collect();
    assert!(h1.windows(2).all(|w| w[1] < w[0]));

    let mut resumed = args("a");
    resumed.push("--resume");
    assert_eq!(lab(&resumed, tmp.path()).status.code(), Some(0));
    assert_eq!(std::fs::read(tmp.path().join("a/sweep.csv")).unwrap(), a);

    let empty = lab(&["sweep", "--d", "3", "--out-dir", "e"], tmp.path());
    assert_eq!(empty.status.code(), Some(1));
}

#[test]
fn sweep_from_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = serde_json::json!({
        "problem": {"d": 3},
        "grid": {"n": 81, "r_max": 25.0},
        "sweep": {"alphas": [0.99, 1.01], "ps": [2.0], "mode": {"mode": "continued", "steps": 2}},
        "output": {"dir": "cfg"}
    });
    std::fs::write(tmp.path().join("run.json"), cfg.to_string()).unwrap();
    let out = lab(&["sweep", "--config", "run.json"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(tmp.path().join("cfg/sweep.csv")).unwrap();
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn riesz_of_a_csv_profile() {
    let tmp = tempfile::tempdir().unwrap();
    let mut w = csv::Writer::from_path(tmp.path().join("f.csv")).unwrap();
    w.write_record(["r", "value"]).unwrap();
    for i in 0..=4000 {
        let r = i as f64 * 0.01;
        w.write_record([r.to_string(), (-r).exp().to_string()]).unwrap();
    }
    w.flush().unwrap();
    let out = lab(
        &["riesz", "--profile", "f.csv", "--d", "3", "--alpha", "1", "--r-max", "40", "--n", "321", "--out-dir", "r"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut rdr = csv::Reader::from_path(tmp.path().join("r/riesz.csv")).unwrap();
    let first = rdr.records().next().unwrap().unwrap();
    let r: f64 = first[0].parse().unwrap();
    let pot: f64 = first[2].parse().unwrap();
    // (|x|^{-1} * e^{-|x|})(r) = 4π (2 - (2 + r) e^{-r}) / r; linear interpolation costs ~1e-5.
    let exact = 4.0 * std::f64::consts::PI * (2.0 - (2.0 + r) * (-r).exp()) / r;
    assert!((pot - exact).abs() < 1e-3 * exact, "{pot} vs {exact}");

    let bad = lab(&["riesz", "--profile", "missing.csv", "--d", "3", "--alpha", "1"], tmp.path());
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn kernel_cache_directory_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let cache = tmp.path().join("cache");
    let run = |out: &str| {
        Command::new(env!("CARGO_BIN_EXE_choquard-lab"))
            .args(["solve", "--d", "3", "--alpha", "1.5", "--p", "2", "--n", "81", "--out-dir", out])
            .current_dir(tmp.path())
            .env("CHOQUARD_LAB_CACHE", &cache)
            .output()
            .unwrap()
    };
    assert_eq!(run("a").status.code(), Some(0));
    let files: Vec<String> = std::fs::read_dir(&cache)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert!(files.iter().any(|f| f.ends_with(".bin")));
    assert!(files.iter().any(|f| f.ends_with(".json")));
    assert_eq!(run("b").status.code(), Some(0));
    let a = std::fs::read(tmp.path().join("a/Q.csv")).unwrap();
    let b = std::fs::read(tmp.path().join("b/Q.csv")).unwrap();
    assert_eq!(a, b);
}
