//! End-to-end checks of the command-line surface: output schemas,
//! determinism, exit codes, and the file formats shared with the library.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cyclecodes"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn bound_emits_csv_schema() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "bound",
            "--q",
            "5",
            "--curve",
            "upper-main",
            "--steps",
            "201",
        ],
        tmp.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("delta,rate,curve"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 201);
    for row in &rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 3);
        fields[0].parse::<f64>().unwrap();
        fields[1].parse::<f64>().unwrap();
        assert_eq!(fields[2], "upper-main");
    }
    // rate column is constant at the theta rate past the corner point
    let flat = 0.5 * 5.0_f64.ln();
    for row in &rows {
        let fields: Vec<&str> = row.split(',').collect();
        let delta: f64 = fields[0].parse().unwrap();
        let rate: f64 = fields[1].parse().unwrap();
        if delta >= 0.5528 {
            assert!((rate - flat).abs() <= 1e-9, "delta {delta} rate {rate}");
        }
    }
}

#[test]
fn bound_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let a = run(
        &["bound", "--q", "9", "--curve", "lower-9cycle"],
        tmp.path(),
    );
    let b = run(
        &["bound", "--q", "9", "--curve", "lower-9cycle"],
        tmp.path(),
    );
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bound_units_rescale() {
    let tmp = tempfile::tempdir().unwrap();
    let nats = run(
        &["bound", "--q", "5", "--curve", "upper-main", "--steps", "2"],
        tmp.path(),
    );
    let bits = run(
        &[
            "bound",
            "--q",
            "5",
            "--curve",
            "upper-main",
            "--steps",
            "2",
            "--units",
            "bits",
        ],
        tmp.path(),
    );
    let first = |o: &Output| -> f64 {
        stdout(o)
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .nth(1)
            .unwrap()
            .parse()
            .unwrap()
    };
    let (vn, vb) = (first(&nats), first(&bits));
    assert!((vn - 5.0_f64.ln()).abs() <= 1e-9);
    assert!((vb - 5.0_f64.log2()).abs() <= 1e-9);
}

#[test]
fn bound_rejects_unknown_curve_as_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["bound", "--q", "5", "--curve", "nope"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bound_incompatible_curve_is_computation_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        &["bound", "--q", "7", "--curve", "lower-9cycle"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("requires q = 9"));
}

#[test]
fn search_prints_size_and_writes_witness() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "search",
            "--q",
            "5",
            "--n",
            "2",
            "--d",
            "inf",
            "--out",
            "witness.txt",
        ],
        tmp.path(),
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("M = 5"));
    let verify = run(&["verify", "code", "witness.txt", "--d", "inf"], tmp.path());
    assert!(verify.status.success());
    let text = stdout(&verify);
    assert!(text.contains("dmin = inf"));
    assert!(text.contains("CHECK dmin PASS"));
}

#[test]
fn search_budget_exhaustion_is_reported() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        &["search", "--q", "5", "--n", "6", "--d", "inf"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("budget"));
    assert!(stderr(&out).contains("greedy lower bound"));
}

#[test]
fn constructions_round_trip_through_verify() {
    let tmp = tempfile::tempdir().unwrap();
    for (args, expect_d) in [
        (
            vec![
                "construct",
                "pentagon",
                "--k",
                "2",
                "--d",
                "2",
                "--out",
                "p.txt",
            ],
            "2",
        ),
        (
            vec![
                "construct",
                "two-r-one",
                "--r",
                "3",
                "--k",
                "1",
                "--d",
                "1",
                "--out",
                "t.txt",
            ],
            "1",
        ),
        (
            vec![
                "construct",
                "even",
                "--q",
                "4",
                "--n",
                "3",
                "--d",
                "2",
                "--out",
                "e.txt",
            ],
            "2",
        ),
    ] {
        let path = args.last().unwrap().to_string();
        let out = run(&args.iter().map(|s| &**s).collect::<Vec<_>>(), tmp.path());
        assert!(out.status.success(), "{args:?}: {}", stderr(&out));
        let verify = run(&["verify", "code", &path, "--d", expect_d], tmp.path());
        assert!(verify.status.success(), "verify {path}");
        assert!(stdout(&verify).contains("CHECK dmin PASS"));
    }
}

#[test]
fn pentagon_construction_has_expected_size() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "construct",
            "pentagon",
            "--k",
            "2",
            "--d",
            "2",
            "--out",
            "p.txt",
        ],
        tmp.path(),
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("words = 125"));
    assert!(stdout(&out).contains("dmin = 2"));
}

#[test]
fn verify_rejects_malformed_code_file() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("bad.txt"), "5 2\n0 0\n9 1\n").unwrap();
    let out = run(&["verify", "code", "bad.txt"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 3"));
}

#[test]
fn verify_shannon_pentagon_code() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(
        tmp.path().join("shannon.txt"),
        "5 2\n0 0\n1 2\n2 4\n3 1\n4 3\n",
    )
    .unwrap();
    let out = run(&["verify", "code", "shannon.txt"], tmp.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("dmin = inf"));
}

#[test]
fn lp_writes_certificate_that_verifies() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "lp", "--q", "5", "--n", "6", "--d", "4", "--out", "cert.txt",
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("CHECK coeff-nonneg PASS"));
    assert!(text.contains("rate = "));
    let verify = run(&["verify", "cert", "cert.txt", "--q", "5"], tmp.path());
    assert!(verify.status.success());
    assert!(stdout(&verify).contains("certified rate"));
}

#[test]
fn verify_rejects_tampered_certificate() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "lp", "--q", "5", "--n", "6", "--d", "4", "--out", "cert.txt",
        ],
        tmp.path(),
    );
    assert!(out.status.success());
    let path = tmp.path().join("cert.txt");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(|l| l.to_string()).collect();
    let mut coeffs: Vec<String> = lines[1].split_whitespace().map(|t| t.to_string()).collect();
    coeffs[1] = "-1".to_string();
    lines[1] = coeffs.join(" ");
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    let verify = run(&["verify", "cert", "cert.txt"], tmp.path());
    assert_eq!(verify.status.code(), Some(1));
    assert!(stdout(&verify).contains("CHECK coeff-nonneg FAIL"));
}

#[test]
fn lp_with_infinite_distance_gives_flat_rate() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["lp", "--q", "5", "--n", "4", "--d", "inf"], tmp.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("value = 1"));
}

#[test]
fn cert_battery_passes_for_pentagon() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["cert", "--q", "5", "--n", "2"], tmp.path());
    assert!(out.status.success(), "{}\n{}", stdout(&out), stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("CHECK circulant-spectrum PASS"));
    assert!(text.contains("CHECK fhat-nonneg PASS"));
    assert!(text.contains("CHECK d-minus-j-psd PASS"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn usage_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(
        run(&["unknown-subcommand"], tmp.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["search", "--q", "5"], tmp.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        run(
            &["search", "--q", "5", "--n", "1", "--d", "soon"],
            tmp.path()
        )
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&["figure", "hexagon"], tmp.path()).status.code(),
        Some(2)
    );
}

#[test]
fn figure_writes_family_and_envelopes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["figure", "pentagon", "--out", "fig"], tmp.path());
    assert!(out.status.success());
    for name in [
        "upper-main.csv",
        "upper-prop2-lp2.csv",
        "lower-gv-pentagon.csv",
        "envelope-upper.csv",
        "envelope-lower.csv",
    ] {
        assert!(tmp.path().join("fig").join(name).exists(), "{name}");
    }
}
