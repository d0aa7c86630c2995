use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_betaineq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_prints_every_applicable_bound() {
    let o = run(&["eval", "--a", "4", "--b", "8", "--x", "0.2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in [
        "segura-lower",
        "q5",
        "gamma-bar-2",
        "kl-left",
        "beta-aa-exp",
    ] {
        assert!(text.contains(name), "{name} missing:\n{text}");
    }
    assert!(!text.contains("VIOLATED"));
}

#[test]
fn eval_single_gamma_bound_needs_no_b() {
    let o = run(&["eval", "--a", "2", "--x", "1.5", "--bound", "gamma-bar-2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("equality"));
}

#[test]
fn usage_errors_exit_with_3() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(
        run(&["eval", "--a", "-1", "--b", "2", "--x", "0.5"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&["eval", "--a", "2", "--x", "0.5", "--bound", "q1"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&["eval", "--a", "2", "--b", "2", "--x", "0.5", "--bound", "nope"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&["figure", "--id", "fig9", "--out", "x.csv"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn help_exits_cleanly() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verify"));
}

#[test]
fn verify_small_grid_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.txt");
    let report = dir.path().join("report.json");
    fs::write(&grid, "a = 0.5, 2, 8\nb = 1, 2.5\nresolution = 32\n").unwrap();
    let o = run(&[
        "verify",
        "--grid-file",
        grid.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));
    let json = fs::read_to_string(&report).unwrap();
    assert!(json.contains("\"outcome\": \"Pass\""));
    assert!(json.contains("\"bound\": \"KlLeft\""));
}

#[test]
fn verify_rejects_negative_slack_as_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.txt");
    fs::write(&grid, "a = 2\nb = 2\nresolution = 8\nslack = -1\n").unwrap();
    let o = run(&["verify", "--grid-file", grid.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn serial_and_threaded_verify_agree() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.txt");
    fs::write(&grid, "a = 0.5 3\nb = 0.5 3\nresolution = 16\n").unwrap();
    let mut reports = Vec::new();
    for threads in ["0", "4"] {
        let path = dir.path().join(format!("r{threads}.json"));
        let o = run(&[
            "verify",
            "--grid-file",
            grid.to_str().unwrap(),
            "--threads",
            threads,
            "--report",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        reports.push(fs::read(&path).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn compare_writes_csv_and_r_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gauss.csv");
    let o = run(&[
        "compare",
        "--family",
        "gauss",
        "--a",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let notes = String::from_utf8_lossy(&o.stderr);
    assert!(notes.contains("R(sigma1) = 1.1660"), "{notes}");
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("x,target,bound,source,direction,value,ln_value,oracle,ln_oracle"));
}

#[test]
fn compare_to_stdout_is_deterministic() {
    let a = run(&["compare", "--family", "q", "--a", "4", "--b", "8"]);
    let b = run(&["compare", "--family", "q", "--a", "4", "--b", "8"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).lines().count() > 101);
}

#[test]
fn figure_csv_has_1001_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig2a.csv");
    let o = run(&["figure", "--id", "fig2a", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "x,oracle,s1,s2,q1,q2,q3,q4,q5");
    assert_eq!(lines.count(), 1001);
}

#[test]
fn unwritable_output_is_an_infrastructure_error() {
    let o = run(&[
        "figure",
        "--id",
        "fig4",
        "--out",
        "/nonexistent-dir/fig4.csv",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent-dir/fig4.csv"));
}

#[test]
fn oracle_freeze_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("golden.csv");
    let o = run(&["oracle", "--freeze", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("a,b,x,quantity_name,value,abs_err_bound"));
}
