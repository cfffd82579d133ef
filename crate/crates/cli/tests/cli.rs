use std::process::{Command, Output};

fn qcong(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcong"))
        .args(args)
        .env_remove("QCONG_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    qcong(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    let out = qcong(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["verify", "anew3", "--n", "3..=3"]), 0);
    assert_eq!(code(&["verify", "a1", "--n", "4..=4"]), 2);
    assert_eq!(code(&["verify", "a1", "--n", "0..=3"]), 2);
    assert_eq!(code(&["verify", "no-such-check", "--n", "3"]), 2);
    assert_eq!(code(&["verify", "a1", "--n", "3", "--power", "3"]), 2);
    assert_eq!(code(&["verify", "anew5", "--n", "7", "--power", "2"]), 1);
    assert_eq!(code(&["proof-chain", "--n", "2"]), 2);
    assert_eq!(code(&["proof-chain", "--n", "3", "--section", "both"]), 0);
    assert_eq!(
        code(&[
            "carlitz",
            "--n",
            "5",
            "--a",
            "q",
            "--b",
            "-1",
            "--base-power",
            "2"
        ]),
        0
    );
    assert_eq!(code(&["carlitz", "--n", "5", "--a", "1", "--b", "-1"]), 2);
    assert_eq!(code(&["carlitz", "--n", "5", "--a", "x^2", "--b", "-1"]), 2);
    assert_eq!(code(&["verify", "sun", "--n", "3", "--p", "9"]), 2);
    assert_eq!(code(&["verify", "a1", "--n", "3", "--k", "1"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
}

#[test]
fn cyclotomic_rendering() {
    assert_eq!(stdout(&["cyclotomic", "--n", "12"]).trim(), "1 - q^2 + q^4");
    assert_eq!(stdout(&["cyclotomic", "--n", "1"]).trim(), "-1 + q");
}

#[test]
fn json_records_follow_the_schema() {
    let out = stdout(&[
        "verify",
        "a1",
        "wang-yu",
        "--n",
        "1..=5",
        "--format",
        "json",
        "--no-timing",
    ]);
    let lines: Vec<serde_json::Value> = out
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    // a1 at 1, 3, 5, then wang-yu with |d| ≤ 5 and n > 2|d| - 1
    assert_eq!(lines.len(), 3 + 1 + 3 + 5);
    for rec in &lines {
        let keys: Vec<&str> = rec
            .as_object()
            .unwrap()
            .keys()
            .map(String::as_str)
            .collect();
        assert_eq!(keys.len(), 7);
        for k in ["check", "n", "power", "params", "holds", "valuation", "ms"] {
            assert!(rec.get(k).is_some(), "missing {k} in {rec}");
        }
        assert_eq!(rec["ms"], 0.0);
        assert_eq!(rec["holds"], true);
    }
    assert_eq!(lines[0]["valuation"], "inf");
    assert_eq!(lines[3]["check"], "wang-yu");
    assert_eq!(lines[3]["params"]["d"], 0);
}

#[test]
fn csv_and_text_formats() {
    let csv = stdout(&[
        "verify",
        "b3",
        "--n",
        "5..=7",
        "--k",
        "1",
        "--format",
        "csv",
        "--no-timing",
    ]);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("check,n,power,params,holds,valuation,ms")
    );
    // at k = 0 both sides coincide, so k = 1 is the first proper congruence
    assert_eq!(lines.next(), Some("b3,5,2,k=1,true,2,0.000"));
    let text = stdout(&["verify", "a1", "--n", "3", "--no-timing"]);
    assert!(text.starts_with('✓'));
}

#[test]
fn reports_are_deterministic_without_timing() {
    let args = [
        "verify",
        "a1",
        "a2",
        "carlitz",
        "--n",
        "1..=11",
        "--format",
        "json",
        "--no-timing",
    ];
    assert_eq!(stdout(&args), stdout(&args));
    let chain = ["proof-chain", "--n", "13", "--format", "csv", "--no-timing"];
    assert_eq!(stdout(&chain), stdout(&chain));
}

#[test]
fn serial_and_parallel_reports_match() {
    let base = [
        "verify",
        "a1",
        "a2",
        "b1",
        "c1",
        "--n",
        "1..=31",
        "--format",
        "json",
        "--no-timing",
    ];
    let serial = stdout(&[&base[..], &["--parallelism", "1"]].concat());
    let parallel = stdout(&[&base[..], &["--parallelism", "4"]].concat());
    assert_eq!(serial, parallel);
}

#[test]
fn fail_fast_stops_after_first_failure() {
    let args = [
        "verify",
        "anew5",
        "--n",
        "3..=15",
        "--power",
        "2",
        "--format",
        "csv",
        "--no-timing",
    ];
    let full = qcong(&args);
    let fast = qcong(&[&args[..], &["--fail-fast", "--parallelism", "3"]].concat());
    assert_eq!(full.status.code(), Some(1));
    assert_eq!(fast.status.code(), Some(1));
    let full = String::from_utf8(full.stdout).unwrap();
    let fast = String::from_utf8(fast.stdout).unwrap();
    let first_failure = full.lines().position(|l| l.contains(",false,")).unwrap();
    assert_eq!(fast.lines().count(), first_failure + 1);
    assert!(full.starts_with(&fast));
}

#[test]
fn out_path_and_cache_dir() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let cache = dir.path().join("cache");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_qcong"))
            .args([
                "verify",
                "a1",
                "--n",
                "1..=15",
                "--format",
                "json",
                "--no-timing",
                "--out",
            ])
            .arg(&report)
            .env("QCONG_CACHE_DIR", &cache)
            .status()
            .unwrap()
    };
    assert!(run().success());
    let first = std::fs::read_to_string(&report).unwrap();
    assert_eq!(first.lines().count(), 8);
    let tsv = std::fs::read_to_string(cache.join("cyclotomic.tsv")).unwrap();
    assert!(tsv
        .lines()
        .any(|l| l == "15\t1 - q + q^3 - q^4 + q^5 - q^7 + q^8"));
    assert!(run().success());
    assert_eq!(std::fs::read_to_string(&report).unwrap(), first);
    // a corrupt cache file is ignored
    std::fs::write(cache.join("cyclotomic.tsv"), "garbage").unwrap();
    assert!(run().success());
}
