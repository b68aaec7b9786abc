use std::process::{Command, Output};

fn gvc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gvc"))
        .args(args)
        .env_remove("GVC_JET_ORDER")
        .output()
        .expect("run gvc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn bf_passes_all_default_and_stage_checks() {
    let o = gvc(&["verify", "--builtin", "bf", "--check", "ni,stages,kt,gauge,brst"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("overall pass\n"));
}

#[test]
fn json_report_goes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = gvc(&["verify", "--builtin", "bf", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["theory"], "bf");
    assert_eq!(v["status"], "pass");
    assert_eq!(v["checks"], serde_json::json!(["brst", "gauge", "kt", "ni"]));
    assert!(v["entries"].as_array().unwrap().iter().all(|e| e["wall_ms"].is_number()));
}

#[test]
fn sign_mutation_breaks_ym_brst_in_degree_two() {
    let o = gvc(&["verify", "--builtin", "ym4", "--check", "brst", "--mutate", "sign"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("mutation flipped sign"));
    let failing: Vec<_> = out.lines().filter(|l| l.ends_with(": fail")).collect();
    assert_eq!(failing.len(), 1, "{out}");
    assert!(failing[0].contains("degree 2"));
}

#[test]
fn jet_order_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let with_cap = dir.path().join("capped.gvc");
    let without = dir.path().join("plain.gvc");
    let body = "field s even; L = 1/2*s[;0]^2;";
    std::fs::write(&with_cap, format!("dim 1; jet_order 2; {body}")).unwrap();
    std::fs::write(&without, format!("dim 1; {body}")).unwrap();
    let run = |path: &std::path::Path, flag: Option<&str>, env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_gvc"));
        c.args(["verify", "--theory", path.to_str().unwrap(), "--check", "ni,kt"]);
        if let Some(f) = flag {
            c.args(["--jet-order", f]);
        }
        match env {
            Some(e) => c.env("GVC_JET_ORDER", e),
            None => c.env_remove("GVC_JET_ORDER"),
        };
        c.output().unwrap().status.code()
    };
    assert_eq!(run(&with_cap, None, None), Some(0));
    assert_eq!(run(&without, None, None), Some(0));
    // the file's cap beats the environment, the flag beats both
    assert_eq!(run(&with_cap, None, Some("1")), Some(0));
    assert_eq!(run(&without, None, Some("1")), Some(2));
    assert_eq!(run(&with_cap, Some("1"), None), Some(2));
}

#[test]
fn bad_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.gvc");
    std::fs::write(&path, "dim 3; field a[n] even; L = a[0] +;").unwrap();
    let o = gvc(&["verify", "--theory", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    assert_eq!(gvc(&["verify", "--builtin", "nope"]).status.code(), Some(2));
    assert_eq!(gvc(&["verify", "--builtin", "bf", "--check", "nope"]).status.code(), Some(2));
    assert_eq!(gvc(&["verify"]).status.code(), Some(2));
}

#[test]
fn text_report_is_deterministic() {
    let args = ["verify", "--builtin", "cs3", "--check", "all"];
    let a = gvc(&args);
    let b = gvc(&args);
    assert_eq!(a.status.code(), b.status.code());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("theory cs3\nchecks antibracket,brst,extended,gauge,kt,ni,stages,triviality\n"));
}

#[test]
fn list_names_every_builtin() {
    let out = stdout(&gvc(&["list"]));
    for name in ["ym4", "cs3", "grav4", "bf"] {
        assert!(out.lines().any(|l| l.split_whitespace().next() == Some(name)));
    }
}
