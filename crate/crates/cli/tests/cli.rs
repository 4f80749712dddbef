use std::path::Path;
use std::process::{Command, Output};

fn prsbox(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prsbox")).args(args).output().expect("binary runs")
}

fn config_path() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/small.conf").to_string_lossy().into_owned()
}

#[test]
fn preset_sweep_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = prsbox(&["sweep", "--preset", "kloosterman", "--primes", "3:100", "--out", out, "--format", "both"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("kloosterman.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("# seed=0"));
    assert_eq!(lines.next(), Some("family,p,m,d_spec,case,max_abs,witness_a,witness_b,bound,ratio,informative"));
    let row = csv.lines().find(|l| l.starts_with("kloosterman,7,2,-,mixed,")).unwrap();
    assert!(row.starts_with("kloosterman,7,2,-,mixed,2.737509672574,1,"), "{row}");
    assert!(row.ends_with(",5.291502622129,0.517340700376,true"), "{row}");
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("kloosterman.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["violations"], 0);
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("does not divide p - 1"), "skips are reported: {stderr}");
}

#[test]
fn csv_is_identical_across_worker_counts() {
    let cfg = config_path();
    let runs: Vec<Vec<u8>> = ["1", "2", "4"]
        .iter()
        .map(|w| {
            let o = prsbox(&["sweep", "--config", &cfg, "--workers", w]);
            assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
            o.stdout
        })
        .collect();
    assert!(runs[0].starts_with(b"# seed=7\n"));
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
}

#[test]
fn seed_override_changes_random_tables() {
    let cfg = config_path();
    let a = prsbox(&["sweep", "--config", &cfg, "--primes", "3:60", "--mode", "reduced"]);
    let b = prsbox(&["sweep", "--config", &cfg, "--primes", "3:60", "--mode", "reduced", "--seed", "8"]);
    assert!(a.status.success() && b.status.success());
    let rand_rows = |o: &Output| -> Vec<String> {
        String::from_utf8_lossy(&o.stdout).lines().filter(|l| l.starts_with("inverse:rand")).map(String::from).collect()
    };
    assert_ne!(rand_rows(&a), rand_rows(&b));
    assert!(String::from_utf8_lossy(&b.stdout).starts_with("# seed=8\n"));
}

#[test]
fn check_prints_certified_report() {
    let o = prsbox(&["check", "--family", "inverse:m=2", "--p", "13"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let verdicts = v["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 4);
    assert!(verdicts.iter().all(|c| c["violated"] == false));

    let o = prsbox(&["check", "--family", "kloosterman:m=2", "--p", "7"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["spectrum"]["mixed"]["max_abs"].as_f64().unwrap() - 2.737509672573767).abs() < 1e-12);
}

#[test]
fn errors_exit_with_code_two() {
    let o = prsbox(&["check", "--family", "inverse:m=2", "--p", "15"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));

    let o = prsbox(&["sweep", "--preset", "figure9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("small_d"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "primes = 3:50\nfamilies = x\nx.kind = kloosterman\nx.m 2\n").unwrap();
    let o = prsbox(&["sweep", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
}

#[test]
fn selftest_exits_zero() {
    let o = prsbox(&["selftest"]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("0 failed"));
    assert!(!text.contains("FAIL"));
}
