use std::process::{Command, Output};

fn helicity(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_helicity"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn spinor_subcommand_passes() {
    let o = helicity(&["spinor", "--samples", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("✓ algebra.clifford"));
}

#[test]
fn fock_subcommand_passes() {
    let o = helicity(&["fock", "--no-smoke"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("opposite"));
}

#[test]
fn verify_all_reports_the_closed_form_mismatch() {
    let o = helicity(&["verify-all", "--samples", "10", "--no-smoke"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("✗ transform.coeff_closed_vs_numeric"));
    assert!(out.contains("1 failed"));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["verify-all", "--tol", "-1"][..],
        &["verify-all", "--tol", "0"],
        &["fock", "--grid", "1,0"],
        &["spinor", "--mass", "abc"],
        &["no-such-command"],
    ] {
        assert_eq!(helicity(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn grid_is_completed_with_negatives() {
    let o = helicity(&[
        "fock",
        "--grid",
        "1.0,0,0",
        "--no-smoke",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"fock.anticommutators\""));
    let o = helicity(&["fock", "--grid", "0,0,0", "--no-smoke"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("zero momentum"));
}

#[test]
fn json_output_is_stable() {
    let args = [
        "spinor",
        "--samples",
        "15",
        "--seed",
        "3",
        "--format",
        "json",
    ];
    let a = stdout(&helicity(&args));
    let b = stdout(&helicity(&args));
    assert_eq!(a, b);
    assert!(a.trim_start().starts_with("{\n  \"version\""));
    assert!(!a.contains("elapsed_ms"));
}

#[test]
fn saved_report_round_trips() {
    let dir = std::env::temp_dir().join(format!("helicity-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let p = path.to_str().unwrap();
    let o = helicity(&[
        "transform",
        "--samples",
        "5",
        "--format",
        "json",
        "--out",
        p,
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    let o = helicity(&["report", p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("✓ transform.kronecker"));
    let o = helicity(&["report", dir.join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn hidden_gamma_control_breaks_kronecker_form() {
    let o = helicity(&["transform", "--samples", "5", "--negative-control", "gamma"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("✗ transform.kronecker"));
}

#[test]
fn hidden_fock_controls_fail() {
    let o = helicity(&[
        "fock",
        "--no-smoke",
        "--negative-control",
        "unpaired-energy",
    ]);
    assert!(stdout(&o).contains("✗ fock.parity_hamiltonian"));
    let o = helicity(&["fock", "--no-smoke", "--negative-control", "dressing"]);
    assert!(stdout(&o).contains("✗ fock.field_parity[alpha=1.570796]"));
    assert!(stdout(&o).contains("✓ fock.field_parity[alpha=0.000000]"));
}

#[test]
fn alpha_accepts_pi_fractions() {
    let o = helicity(&["fock", "--no-smoke", "--alpha", "pi/4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("fock.phase_study[alpha=0.785398]"));
}
