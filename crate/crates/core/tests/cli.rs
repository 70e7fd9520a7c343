use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cstar-clone"));
    c.env_remove("CSTAR_CLONE_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

fn assert_valid(command: &str, instance: &Value) {
    let text = std::fs::read_to_string(schema_dir().join(format!("{command}.schema.json"))).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{command} report violates its schema: {errors:#?}");
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const ZERO: &str = r#"{"spec":{"blocks":[2]},"weights":[1],"densities":[[[1,0],[0,0],[0,0],[0,0]]]}"#;
const PLUS: &str = r#"{"spec":{"blocks":[2]},"weights":[1],"densities":[[[0.5,0],[0.5,0],[0.5,0],[0.5,0]]]}"#;
const MIXED: &str = r#"{"spec":{"blocks":[2]},"weights":[1],"densities":[[[0.7,0],[0,0],[0,0],[0.3,0]]]}"#;
const CLASSICAL: &str = r#"{"spec":{"blocks":[1,1]},"weights":[1,0],"densities":[[[1,0]],null]}"#;

#[test]
fn verify_default_seed_passes() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_valid("verify", &r);
    assert_eq!(r["result"]["passed"], true);
    assert_eq!(r["result"]["suites"].as_array().unwrap().len(), 9);
}

#[test]
fn verify_only_and_echo() {
    let out = run(&["verify", "--only", "eq1", "--trials", "10", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["config"]["seed"], 7);
    assert_eq!(r["config"]["trials"], 10);
    let suites = r["result"]["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 1);
    assert_eq!(suites[0]["suite"], "bures-identity");
    assert_eq!(suites[0]["trials"], 10);
}

#[test]
fn seed_falls_back_to_environment() {
    let out = bin().args(["verify", "--only", "triangle", "--trials", "3"]).env("CSTAR_CLONE_SEED", "42").output().unwrap();
    assert_eq!(report(&out)["config"]["seed"], 42);
    let out = bin()
        .args(["verify", "--only", "triangle", "--trials", "3", "--seed", "5"])
        .env("CSTAR_CLONE_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(report(&out)["config"]["seed"], 5);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "--only", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["clone-audit"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn fidelity_identical_files() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", ZERO);
    let r = report(&run(&["fidelity", &a, &a]));
    assert_valid("fidelity", &r);
    assert!((r["result"]["fidelity"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    assert!(r["result"]["bures_distance"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn fidelity_zero_plus() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (write(&dir, "z.json", ZERO), write(&dir, "p.json", PLUS));
    let out = run(&["fidelity", &a, &b]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!((r["result"]["fidelity"].as_f64().unwrap() - 0.5f64.sqrt()).abs() <= 1e-9);
    assert!((r["result"]["transition_probability"].as_f64().unwrap() - 0.5).abs() <= 1e-9);
    assert_eq!(r["result"]["bures_identity"]["holds"], true);
}

#[test]
fn fidelity_mixed_pair_has_no_transition_probability() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (write(&dir, "m.json", MIXED), write(&dir, "p.json", PLUS));
    let r = report(&run(&["fidelity", &a, &b]));
    assert_valid("fidelity", &r);
    assert!(r["result"].get("transition_probability").is_none());
    for k in ["fidelity", "bures_distance", "trace_distance"] {
        assert!(r["result"][k].is_number(), "{k}");
    }
}

#[test]
fn malformed_json_reports_byte_offset() {
    let dir = TempDir::new().unwrap();
    let text = "{\"spec\":{\"blocks\":[2]},\"weights\":[1],\n \"densities\": [[oops]]}";
    let a = write(&dir, "bad.json", text);
    let out = run(&["fidelity", &a, &a]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["code"], "E_PARSE");
    let msg = err["error"]["message"].as_str().unwrap();
    let offset = text.find("oops").unwrap();
    assert!(msg.contains(&format!("byte {offset}")), "{msg}");
}

#[test]
fn spec_mismatch_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (write(&dir, "z.json", ZERO), write(&dir, "c.json", CLASSICAL));
    let out = run(&["fidelity", &a, &b]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["code"], "E_DOMAIN");
}

#[test]
fn missing_file_is_an_input_error() {
    assert_eq!(run(&["fidelity", "/nonexistent/a.json", "/nonexistent/b.json"]).status.code(), Some(3));
}

fn identity_channel_json(n2: usize) -> String {
    // Choi matrix of the identity on C^n2: sum |i><j| ⊗ |i><j| at index (i·n2 + o).
    let d = n2 * n2;
    let mut entries = vec!["[0,0]"; d * d];
    for i in 0..n2 {
        for j in 0..n2 {
            entries[(i * n2 + i) * d + (j * n2 + j)] = "[1,0]";
        }
    }
    format!(r#"{{"in_dim":{n2},"out_dim":{n2},"choi":[{}]}}"#, entries.join(","))
}

#[test]
fn identity_channel_fails_the_audit_with_per_sample_fidelities() {
    let dir = TempDir::new().unwrap();
    let id = write(&dir, "id.json", &identity_channel_json(4));
    let out = run(&["clone-audit", "--channel", &id, "--epsilon", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_valid("clone-audit", &r);
    assert_eq!(r["result"]["verdict_perfect"], false);
    assert_eq!(r["result"]["verdict_epsilon"], false);
    let records = r["result"]["records"].as_array().unwrap();
    assert!(records.len() > 16);
    assert!(records.iter().all(|x| x["clone_fidelity"].is_number()));
}

#[test]
fn classical_copier_audit_and_csv() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("audit.json");
    let out = run(&["clone-audit", "--builtin", "classical", "--dim", "3", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("perfect cloner          pass"));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_valid("clone-audit", &r);
    assert_eq!(r["result"]["verdict_perfect"], true);

    let out = run(&["clone-audit", "--builtin", "classical", "--dim", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("id,product_residual,"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn bh_demo_reports_the_universal_fidelity() {
    let out = run(&["bh-demo", "--samples", "10"]);
    let r = report(&out);
    assert_valid("bh-demo", &r);
    let res = &r["result"];
    assert!((res["min_clone_fidelity"].as_f64().unwrap() - (5.0f64 / 6.0).sqrt()).abs() <= 1e-9);
    assert!(res["min_product_residual"].as_f64().unwrap() > 0.05);
}

#[test]
fn trace_theorem_reports_validate() {
    for args in [
        vec!["trace-theorem", "--count", "4"],
        vec!["trace-theorem", "--candidate", "classical", "--dim", "3"],
        vec!["trace-theorem", "--candidate", "buzek-hillery"],
        vec!["trace-theorem", "--candidate", "swap", "--alpha", "0.5"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert_valid("trace-theorem", &report(&out));
    }
    let r = report(&run(&["trace-theorem", "--count", "4"]));
    assert_eq!(r["result"]["contradiction"], 4);
    let r = report(&run(&["trace-theorem", "--candidate", "classical"]));
    assert_eq!(r["result"]["contradiction"], 0);
}

#[test]
fn optimize_small_run_validates() {
    let out = run(&["optimize", "--restarts", "2", "--iters", "300", "--samples", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_valid("optimize", &r);
    assert_eq!(r["result"]["restarts"].as_array().unwrap().len(), 2);
}

fn strip_header(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("header");
    v
}

#[test]
fn identical_runs_are_byte_identical_outside_the_header() {
    for args in [
        vec!["verify", "--trials", "5"],
        vec!["clone-audit", "--builtin", "buzek-hillery", "--samples", "4"],
        vec!["trace-theorem", "--count", "3"],
        vec!["optimize", "--restarts", "2", "--iters", "100", "--samples", "1"],
    ] {
        let a = run(&args).stdout;
        let b = run(&args).stdout;
        let (ta, tb) = (String::from_utf8(a).unwrap(), String::from_utf8(b).unwrap());
        let body = |t: &str| t.lines().filter(|l| !l.contains("\"timestamp\"")).collect::<Vec<_>>().join("\n");
        assert_eq!(body(&ta), body(&tb), "{args:?}");
        let (va, vb): (Value, Value) = (serde_json::from_str(&ta).unwrap(), serde_json::from_str(&tb).unwrap());
        assert_eq!(strip_header(va), strip_header(vb));
    }
}

#[test]
fn schemas_reject_malformed_reports() {
    let mut r = report(&run(&["verify", "--trials", "2", "--only", "triangle"]));
    r["result"]["suites"][0].as_object_mut().unwrap().remove("passed");
    let text = std::fs::read_to_string(schema_dir().join("verify.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap();
    assert!(!validator.is_valid(&r));
    r["result"]["suites"][0]["passed"] = Value::from("yes");
    assert!(!validator.is_valid(&r));
}
