use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn cyclogon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclogon"))
        .args(args)
        .env_remove("CYCLOGON_EPS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn classify(name: &str) -> Output {
    cyclogon(&["classify", fixture(name).to_str().unwrap()])
}

#[test]
fn square_is_convex() {
    let o = classify("square.json");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("convex (I), w=1\n"));
}

#[test]
fn square_csv_matches_json() {
    let o = classify("square.csv");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), stdout(&classify("square.json")));
}

#[test]
fn crossed_square_is_not_convex() {
    let o = classify("square_crossed.json");
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("non-convex (A3), w=1\n"));
}

#[test]
fn triangle_profiles_report_the_distinguished_angle() {
    let o = classify("triangle_iii.json");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("convex (III), w=0, negative index 2\n"));
    let o = classify("triangle_iv.json");
    assert!(stdout(&o).starts_with("convex (IV), w=0, positive index 2\n"));
}

#[test]
fn bad_inputs_exit_2_and_name_the_definition() {
    let o = classify("not_cyclic.json");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not cyclic"));
    let o = classify("duplicate.json");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not ordinary"));
    let o = cyclogon(&["classify", "/nonexistent/polygon.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = cyclogon(&["classify", "--format", "json", fixture("square.csv").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn explain_prints_a_sign_table_or_a_certificate() {
    let o = cyclogon(&["classify", "--explain", fixture("square.json").to_str().unwrap()]);
    let out = stdout(&o);
    assert!(out.contains("0 -> 1  ..++"));
    assert!(out.contains("every edge uniform: true"));
    let o = cyclogon(&[
        "classify",
        "--explain",
        fixture("square_crossed.json").to_str().unwrap(),
    ]);
    assert!(stdout(&o).contains("product = -"));
}

#[test]
fn witness_prints_a_negative_product() {
    let o = cyclogon(&["witness", fixture("square_crossed.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    for key in ["reduction:", "pattern:", "witness (", "D(", "(negative)"] {
        assert!(out.contains(key), "missing {key} in {out}");
    }
    let o = cyclogon(&["witness", fixture("square.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn eps_flag_beats_environment() {
    let sq = fixture("square.json");
    let env = Command::new(env!("CARGO_BIN_EXE_cyclogon"))
        .args(["classify", sq.to_str().unwrap()])
        .env("CYCLOGON_EPS", "0.5")
        .output()
        .unwrap();
    assert_eq!(
        env.status.code(),
        Some(2),
        "a huge tolerance from the environment applies"
    );
    let flag = Command::new(env!("CARGO_BIN_EXE_cyclogon"))
        .args(["classify", "--eps", "1e-9", sq.to_str().unwrap()])
        .env("CYCLOGON_EPS", "0.5")
        .output()
        .unwrap();
    assert_eq!(flag.status.code(), Some(0));
    assert_eq!(
        cyclogon(&["classify", "--eps", "-1", sq.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn svg_is_written() {
    let path = std::env::temp_dir().join(format!("cyclogon-cli-{}.svg", std::process::id()));
    let o = cyclogon(&[
        "classify",
        "--svg",
        path.to_str().unwrap(),
        fixture("square_crossed.json").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("non-convex (A3)"));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn stdin_input() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_cyclogon"))
        .args(["classify", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"thetas": [2.0, 2.0, 2.0, 0.2831853071795865]}"#)
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("convex (I)"));
}

#[test]
fn fuzz_run_is_clean() {
    let dir = std::env::temp_dir().join(format!("cyclogon-fuzz-{}", std::process::id()));
    let o = cyclogon(&[
        "fuzz",
        "--count",
        "450",
        "--seed",
        "9",
        "--threads",
        "2",
        "--repro-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("instances        450"));
    assert!(out.contains("disagreements    0"));
    assert!(!dir.exists());
    let o = cyclogon(&["fuzz", "--count", "90", "--format", "csv"]);
    let csv = stdout(&o);
    assert!(csv.starts_with("instances,"));
    assert_eq!(csv.lines().nth(1).unwrap().split(',').next(), Some("90"));
    let o = cyclogon(&["fuzz", "--count", "10", "--n-min", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_emits_a_table() {
    let o = cyclogon(&["bench", "--sizes", "20,40", "--reps", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("n,angles_us,determinants_us,hull_us"));
    assert_eq!(out.lines().count(), 3);
    let o = cyclogon(&["bench", "--sizes", "20", "--reps", "1", "--format", "json"]);
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows[0]["n"], 20);
}
