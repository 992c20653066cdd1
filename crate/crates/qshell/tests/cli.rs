use std::io::Write;
use std::process::{Command, Output, Stdio};

fn qshell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qshell"))
        .args(args)
        .env_remove("QSHELL_FORMAT")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_with_hamiltonian_and_numeric_q() {
    let o = qshell(&["eval", "grad_x(x^2)", "--H", "x*p"]);
    assert_eq!(
        stdout(&o),
        "# mixed_term_exponent=2 format=text q=symbolic\n(1 + q) * x\n"
    );
    let o = qshell(&["eval", "p*x", "--q", "1/2"]);
    assert_eq!(
        stdout(&o),
        "# mixed_term_exponent=2 format=text q=1/2\n(1/2) * x * p\n"
    );
}

#[test]
fn format_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_qshell"))
        .args(["eval", "q*x*p"])
        .env("QSHELL_FORMAT", "latex")
        .output()
        .unwrap();
    assert_eq!(
        stdout(&o),
        "% mixed_term_exponent=2 format=latex q=symbolic\nq\\,x\\,p\n"
    );
}

#[test]
fn mixed_exponent_changes_dx() {
    assert!(stdout(&qshell(&["eval", "dx(x*p)"])).ends_with("\nq^2 * p\n"));
    let o = qshell(&["eval", "dx(x*p)", "--mixed-exponent", "0"]);
    assert!(stdout(&o).ends_with("\np\n"));
}

#[test]
fn curvature_reports_to_files() {
    let dir = std::env::temp_dir().join(format!("qshell-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("r.csv");
    let json = dir.join("r.json");
    for path in [&csv, &json] {
        let o = qshell(&[
            "curvature",
            "--f",
            "x*p",
            "--H",
            "x",
            "--samples",
            "1/2,9/10",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        assert!(stdout(&o).contains("connection_part: PoleAtOne"));
    }
    assert_eq!(
        std::fs::read_to_string(&csv).unwrap(),
        "q0,commutator_norm,connection_norm,total_norm\n0.5,1,2,1\n0.9,0.1111111111111111,10,9.88888888888889\n"
    );
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["rows"][1]["commutator_norm"], "1/9");
    let bad = qshell(&["curvature", "--f", "x", "--H", "x*p", "--samples", "1"]);
    assert_eq!(bad.status.code(), Some(2));
    let bad = qshell(&["curvature", "--f", "x", "--H", "x*p", "--out", "r.txt"]);
    assert_eq!(bad.status.code(), Some(1));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn repl_keeps_bindings() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qshell"))
        .arg("repl")
        .env_remove("QSHELL_FORMAT")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"f = x^2*p\nH = x*p\nddt(f)\nnope(\n:quit\nx\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("(q - q^2) * x^3 * p^2\n"), "{out}");
    assert!(!out.ends_with("x\n"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
}

#[test]
fn batch_files() {
    let dir = std::env::temp_dir().join(format!("qshell-run-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let ok = dir.join("ok.qs");
    let bad = dir.join("bad.qs");
    std::fs::write(&ok, "# comment\nH = x*p\ngrad_p(p^2)\n").unwrap();
    std::fs::write(&bad, "inv(x + p)\n").unwrap();
    let o = qshell(&["run", ok.to_str().unwrap()]);
    assert!(o.status.success());
    let o = qshell(&["run", ok.to_str().unwrap(), bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(qshell(&["eval", "foo(x)"]).status.code(), Some(1));
    assert_eq!(qshell(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        qshell(&["eval", "x", "--format", "yaml"]).status.code(),
        Some(1)
    );
    assert_eq!(qshell(&["--help"]).status.code(), Some(0));
}
