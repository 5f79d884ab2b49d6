//! The command line, driven in-process.

use multitape::cli::run_cli;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("multitape").chain(args.iter().copied());
    let code = run_cli(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn run_exit_codes() {
    assert_eq!(cli(&["run", "leq", "aabb"]).0, 0);
    assert_eq!(cli(&["run", "leq", "aab"]).0, 1);
    assert_eq!(cli(&["run", "leq", "aabb", "--max-steps", "3"]).0, 2);
    assert_eq!(cli(&["run", "leq", "abc"]).0, 3);
    assert_eq!(cli(&["run", "nope", "ab"]).0, 3);
    assert_eq!(cli(&["run", "leq", "ab", "--mode", "exact"]).0, 3);
    assert_eq!(cli(&["run", "leq", "ab", "--bogus"]).0, 3);
    assert_eq!(cli(&["--help"]).0, 0);
}

#[test]
fn run_formats() {
    let (_, json, _) = cli(&["run", "lpal", "abba", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["verdict"], "accept");
    assert_eq!(v["steps"], 16);
    assert_eq!(v["mode"], "deterministic");
    let (_, csv, _) = cli(&["run", "lpal", "abba", "--format", "csv"]);
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("machine,input,mode,verdict"));
    assert!(lines.next().unwrap().starts_with("lpal,abba,deterministic,accept"));
}

#[test]
fn quantum_run_is_reproducible() {
    let args = ["run", "lsquare-2tqcfa", "ab", "--trials", "50", "--seed", "9", "--format", "json"];
    let strip = |s: String| {
        let mut v: serde_json::Value = serde_json::from_str(&s).unwrap();
        v["wall_ms"] = 0.into();
        v
    };
    let (code, a, _) = cli(&args);
    assert_eq!(code, 0);
    assert_eq!(strip(a), strip(cli(&args).1));
    let (code, out, _) = cli(&["run", "lsquare-2tqcfa", "aabb", "--mode", "exact", "--format", "csv"]);
    assert_eq!(code, 1);
    assert!(out.contains(",exact,reject,"));
}

#[test]
fn verify_library_and_wrong_oracle() {
    let (code, out, _) = cli(&["verify", "leq", "--max-len", "6"]);
    assert_eq!(code, 0);
    assert!(out.trim_end().ends_with("PASS 127 strings"), "{out}");
    let (code, out, _) = cli(&["verify", "leq", "--max-len", "6", "--oracle", "lpal"]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL"), "{out}");
}

#[test]
fn export_parse_verify_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("leq.tfa");
    let p = path.to_str().unwrap();
    assert_eq!(cli(&["export", "leq", p]).0, 0);
    let (code, out, _) = cli(&["verify", p, "--max-len", "8"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(cli(&["run", p, "ab"]).0, 0);

    // redirect the critical accept to reject
    let text = std::fs::read_to_string(&path).unwrap();
    let broken = text.replace("delta scrt b -> acc S S", "delta scrt b -> rej S S");
    assert_ne!(broken, text, "pattern not found in:\n{text}");
    std::fs::write(&path, broken).unwrap();
    let (code, out, _) = cli(&["verify", p, "--max-len", "8"]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL on \"ab\""), "{out}");
}

#[test]
fn move_rule_violation_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.tfa");
    let text = cli(&["export", "leq"]).1.replace("delta s0 a -> s1 R S", "delta s0 a -> s1 R R");
    std::fs::write(&path, &text).unwrap();
    let (code, _, err) = cli(&["run", path.to_str().unwrap(), "ab"]);
    assert_eq!(code, 3);
    assert!(err.contains("move-rule violation"), "{err}");
    let line = text.lines().position(|l| l == "delta s0 a -> s1 R R").unwrap() + 1;
    assert!(err.contains(&format!("line {line}:")), "{err}");
}

#[test]
fn bench_csv() {
    let (code, out, _) = cli(&["bench", "lpal", "--sizes", "4,8,...,40"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("length,steps,input"));
    assert!(out.contains("# slope 3\n"), "{out}");
    assert!(out.contains("# intercept 4\n"), "{out}");
    assert_eq!(cli(&["bench", "lsquare-2tqcfa"]).0, 3);
}

#[test]
fn export_errors() {
    assert_eq!(cli(&["export", "nope"]).0, 3);
    let (code, out, _) = cli(&["export", "lsquare-2tqcfa"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "theta s02 a Ua"));
}
