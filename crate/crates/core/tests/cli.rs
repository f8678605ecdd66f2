use std::process::Command;

use sl3_core::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["sl3"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch_file(name: &str, body: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("sl3-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn count_prints_n_first() {
    let (code, out, _) = call(&["count", "--r", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("9"));
    assert_eq!(out.lines().count(), 20);
    assert_eq!(call(&["count", "--r", "6"]).1.lines().next(), Some("1629"));
}

#[test]
fn rank_prints_rank() {
    assert_eq!(call(&["rank", "--family", "six6"]), (0, "105\n".into(), String::new()));
    assert_eq!(call(&["rank", "--family", "five5"]).1, "12\n");
    assert_eq!(call(&["rank", "--family", "six5"]).1, "5\n");
}

#[test]
fn rank_dump() {
    let p = scratch_file("five5.csv", "");
    let (code, _, _) = call(&["rank", "--family", "five5", "--dump-matrix", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&p).unwrap().lines().count(), 13);
}

#[test]
fn generators_json() {
    let (code, out, _) = call(&["generators", "--r", "2", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["count"], 9);
    assert_eq!(v["generators"].as_array().unwrap().len(), 9);
    let (_, text, _) = call(&["generators", "--r", "3"]);
    assert_eq!(text.lines().count(), 45);
}

#[test]
fn reduce_and_check() {
    let (code, out, _) = call(&["reduce", "--word", "x2 x1 x2^-1 x1^-1", "--r", "2", "--check", "trials=3", "seed=4"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().last().unwrap().ends_with("pass"));
    let (code, out, _) = call(&["reduce", "--word", "x1^7", "--r", "1", "--basis", "--check"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(call(&["reduce", "--word", "x1", "--r", "2"]).1, "t(1)\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(call(&["reduce", "--word", "x3", "--r", "2"]).0, 2);
    assert_eq!(call(&["reduce", "--word", "x1 y", "--r", "2"]).0, 2);
    assert_eq!(call(&["reduce", "--word", "x1", "--r", "1", "--check", "trials=0"]).0, 2);
    assert_eq!(call(&["count", "--r", "0"]).0, 2);
    assert_eq!(call(&["rank", "--family", "seven"]).0, 2);
    assert_eq!(call(&["bogus"]).0, 2);
    assert_eq!(call(&["verify", "--trials", "0"]).0, 2);
    assert_eq!(call(&["embed", "--rep", "/nonexistent/rep.json"]).0, 2);
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn embed_file_and_directory() {
    let p = scratch_file(
        "a.json",
        r#"{"r":2,"field":"rational","matrices":[[[1,0,0],[0,2,0],[0,0,"1/2"]],[[1,1,0],[0,1,0],[0,0,1]]]}"#,
    );
    let (code, out, _) = call(&["embed", "--rep", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("t(1) = 7/2"));
    let (_, csv, _) = call(&["embed", "--rep", p.to_str().unwrap(), "--csv"]);
    assert_eq!(csv.lines().count(), 10);
    let (code, out, _) = call(&["embed", "--rep", p.parent().unwrap().to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    assert_eq!(v["count"], 9);
}

#[test]
fn verify_small_suites() {
    let (code, out, _) = call(&["verify", "--suite", "counts"]);
    assert_eq!(code, 0);
    assert!(out.lines().all(|l| !l.starts_with("FAIL")));
    let (code, out, _) = call(&["verify", "--suite", "identities", "--mode", "numeric", "--trials", "3", "--seed", "2"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn output_is_reproducible() {
    let args = ["verify", "--suite", "reduction", "--trials", "5", "--seed", "11"];
    assert_eq!(call(&args), call(&args));
    let args = ["generators", "--r", "4"];
    assert_eq!(call(&args), call(&args));
}

#[test]
fn seed_from_environment() {
    let bin = env!("CARGO_BIN_EXE_sl3");
    let go = |seed: Option<&str>| {
        let mut c = Command::new(bin);
        c.args(["verify", "--suite", "reduction", "--trials", "3"]);
        c.env_remove("SL3_SEED");
        if let Some(s) = seed {
            c.env("SL3_SEED", s);
        }
        let o = c.output().unwrap();
        assert!(o.status.success());
        String::from_utf8(o.stdout).unwrap()
    };
    assert!(go(None).contains("seed=7)"));
    let a = go(Some("123"));
    assert!(a.contains("seed=123)"));
    assert_eq!(a, go(Some("123")));
    assert_ne!(a, go(Some("124")));
}
