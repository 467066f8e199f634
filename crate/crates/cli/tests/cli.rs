use std::io::Write;
use std::process::{Command, Output, Stdio};

fn lumpkit(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lumpkit"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn gen(args: &[&str]) -> String {
    let out = lumpkit(&[&["gen"], args].concat(), "");
    assert!(
        out.status.success(),
        "gen {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

const FAMILIES: &[&[&str]] = &[
    &["negbin", "--n", "4", "--p", "3/10"],
    &["consecutive", "--n", "4", "--p", "1/2"],
    &["gamblers", "--n1", "3", "--n2", "2", "--p", "2/5"],
    &["gamblers", "--n1", "2", "--n2", "2", "--merged"],
    &["hypercube", "--d", "3"],
    &["hypercube", "--d", "4", "--merged"],
    &["coupon", "--probs", "1/2,1/4,1/4"],
    &["coupon", "--n", "4"],
    &[
        "pairs",
        "--n",
        "2",
        "--probs",
        "1/2,1/2,1/2,1/2",
        "--collapse",
    ],
    &["negbin", "--n", "3", "--p", "0.25"],
];

#[test]
fn hypercube_compresses_to_four() {
    let out = lumpkit(&["compress"], &gen(&["hypercube", "--d", "3"]));
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("complexity: 4\niterations: 1\n"), "{text}");
    assert!(text.contains("(1,0,0) (0,1,0) (0,0,1)"));
}

#[test]
fn coupon_complexity_is_product_formula() {
    let out = lumpkit(&["complexity"], &gen(&["coupon", "--probs", "1/2,1/4,1/4"]));
    assert_eq!(stdout(&out), "5\n");
}

#[test]
fn verify_passes_on_every_family() {
    for family in FAMILIES {
        let out = lumpkit(&["verify", "--oracle"], &gen(family));
        assert!(
            out.status.success(),
            "{family:?}:\n{}{}",
            stdout(&out),
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn output_is_deterministic() {
    let doc = gen(&["hypercube", "--d", "3"]);
    for args in [
        &["compress"][..],
        &["analyze", "--tau", "6"],
        &[
            "simulate", "--tau", "10", "--trials", "5000", "--seed", "7", "--init", "(1,0,0)",
        ],
        &["verify", "--oracle"],
    ] {
        assert_eq!(
            stdout(&lumpkit(args, &doc)),
            stdout(&lumpkit(args, &doc)),
            "{args:?}"
        );
    }
    assert_eq!(gen(&["coupon", "--n", "5"]), gen(&["coupon", "--n", "5"]));
}

#[test]
fn compress_is_idempotent_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("cube.json");
    let first = dir.path().join("q1.json");
    let second = dir.path().join("q2.json");
    let dot = dir.path().join("cube.dot");
    let input_s = input.to_str().unwrap();
    assert!(
        lumpkit(&["gen", "hypercube", "--d", "4", "-o", input_s], "")
            .status
            .success()
    );

    let out = lumpkit(
        &[
            "compress",
            "-i",
            input_s,
            "-o",
            first.to_str().unwrap(),
            "--dot",
            dot.to_str().unwrap(),
        ],
        "",
    );
    assert!(stdout(&out).starts_with("complexity: 5\n"));
    let out = lumpkit(
        &[
            "compress",
            "-i",
            first.to_str().unwrap(),
            "-o",
            second.to_str().unwrap(),
        ],
        "",
    );
    assert!(stdout(&out).starts_with("complexity: 5\n"));
    assert_eq!(
        std::fs::read(&first).unwrap(),
        std::fs::read(&second).unwrap()
    );
    assert!(std::fs::read_to_string(&dot)
        .unwrap()
        .starts_with("digraph"));
}

#[test]
fn analyze_table() {
    let out = lumpkit(
        &["analyze", "--tau", "2", "--init", "(1,0,0)"],
        &gen(&["hypercube", "--d", "3"]),
    );
    assert_eq!(
        stdout(&out),
        "m  T1   T2\n0  0    0\n1  1/3  0\n2  1/3  2/9\n"
    );
}

#[test]
fn exit_statuses() {
    // Usage and parse errors.
    assert_eq!(lumpkit(&["compress"], "{ not json").status.code(), Some(2));
    assert_eq!(lumpkit(&["gen", "negbin"], "").status.code(), Some(2));
    assert_eq!(lumpkit(&["frobnicate"], "").status.code(), Some(2));
    let doc = gen(&["hypercube", "--d", "3"]);
    assert_eq!(
        lumpkit(&["analyze", "--tau", "2", "--init", "nope"], &doc)
            .status
            .code(),
        Some(2)
    );

    // Validation failure: a row that does not sum to one.
    let bad = r#"{"states": ["a", "t"], "targets": {"T": ["t"]},
        "transitions": [["a", "t", "9/10"], ["t", "t", "1/1"]]}"#;
    let out = lumpkit(&["compress"], bad);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.contains("row 0 sums to 9/10"));
}
