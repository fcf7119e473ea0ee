use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn graphwave(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphwave"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    fs::write(dir.path().join(name), body).unwrap();
    name.to_string()
}

#[test]
fn gen_then_validate() {
    let dir = TempDir::new().unwrap();
    let out = graphwave(dir.path(), &["gen", "--lattice", "2", "--half-width", "10", "-o", "g.txt"]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(dir.path().join("g.txt")).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 441);

    let out = graphwave(dir.path(), &["validate", "g.txt"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["valid"], true);
    assert_eq!(json(&out)["vertices"], 441);
}

#[test]
fn validate_rejects_loop() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "loop.txt", "v 0 1\nv 1 1\ne 0 1 1\ne 1 1 1\n");
    let out = graphwave(dir.path(), &["validate", &f]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["valid"], false);
    assert!(json(&out)["summary"].as_str().unwrap().contains("loop"));
}

#[test]
fn gen_without_generator_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let out = graphwave(dir.path(), &["gen"]);
    assert_eq!(code(&out), 2);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "usage");
}

#[test]
fn assumptions_exit_codes() {
    let dir = TempDir::new().unwrap();
    let base = ["assumptions", "--lattice", "2", "--half-width", "40", "--alpha", "1", "--r0", "2"];

    let out = graphwave(dir.path(), &[&base[..], &["--metric", "lattice-l2"]].concat());
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["C1"], 4.0);
    assert_eq!(report["j"], 1.0);
    assert!(report["violations"].as_array().unwrap().is_empty());

    let out = graphwave(dir.path(), &[&base[..], &["--metric", "lattice-l1"]].concat());
    assert_eq!(code(&out), 1);
    assert!(!json(&out)["violations"].as_array().unwrap().is_empty());

    let out = graphwave(dir.path(), &base);
    assert_eq!(code(&out), 2);
}

#[test]
fn criterion_on_line_is_satisfied() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.json",
        r#"{"graph":{"kind":"lattice","dim":1,"half_width":400},"metric":{"kind":"lattice_l2"},"params":{"p":2,"q":2}}"#,
    );
    let out = graphwave(dir.path(), &["criterion", "--config", &cfg]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["satisfied"], true);
    assert_eq!(v["mode"], "theorem1");
    assert_eq!(v["critical_exponent"], 4.0);
    assert!(v["R_grid"].as_array().unwrap().len() >= 3);
}

#[test]
fn sweep_flips_at_cubic_threshold() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "s.json",
        r#"{"graph":{"kind":"lattice","dim":3,"half_width":48},"metric":{"kind":"lattice_l2"},
            "params":{"p":2,"q":2},"R_grid":[8,16,32],"sweep":{"p":[1.5,2,3,5]}}"#,
    );
    let out = graphwave(dir.path(), &["sweep", "--config", &cfg, "-o", "phase.csv"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("phase.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,q,crit_exponent,fitted_exponent,verdict,blowup_time"));
    let verdicts: Vec<&str> = lines.map(|l| l.split(',').nth(4).unwrap()).collect();
    assert_eq!(verdicts, ["satisfied", "satisfied", "not_satisfied", "not_satisfied"]);

    let again = graphwave(dir.path(), &["sweep", "--config", &cfg, "--threads", "1"]);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), text);
}

const LINE: &str = r#""graph":{"kind":"lattice","dim":1,"half_width":500},"metric":{"kind":"lattice_l2"},"params":{"p":2,"q":2,"R0":4}"#;

#[test]
fn simulate_summary_and_blowup_event() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "b.json",
        &format!(r#"{{{LINE},"simulation":{{"data":{{"kind":"bump","amplitude":1,"radius":4}},"T":200}}}}"#),
    );
    let out = graphwave(
        dir.path(),
        &["simulate", "--config", &cfg, "--summary", "-o", "t.csv", "--events", "ev.json"],
    );
    assert_eq!(code(&out), 0);
    let csv = fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert!(csv.starts_with("t,sup_u,sup_v\n0,1,1\n"));
    let ev: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("ev.json")).unwrap()).unwrap();
    assert!(ev["t_b"].as_f64().unwrap() > 0.0);
    assert_eq!(ev["vertex"], 500);
    assert_eq!(ev["threshold"], 1e8);
    assert_eq!(json(&out)["status"]["status"], "blowup");
}

#[test]
fn simulate_full_trajectory_rows() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "p.json",
        r#"{"graph":{"kind":"path","n":5},"params":{"p":2,"q":2},
            "simulation":{"data":{"kind":"random","amplitude":0.01,"radius":10},"T":1}}"#,
    );
    let run = |seed: &str| graphwave(dir.path(), &["simulate", "--config", &cfg, "--seed", seed]).stdout;
    let a = String::from_utf8(run("3")).unwrap();
    assert!(a.starts_with("t,vertex,u,v\n"));
    assert_eq!(a.lines().count(), 1 + 5 * 4);
    assert_eq!(run("3"), a.as_bytes());
    assert_ne!(run("4"), a.as_bytes());
}

#[test]
fn weakcheck_reports_and_rejects_long_support() {
    let dir = TempDir::new().unwrap();
    let sim = r#""simulation":{"data":{"kind":"gaussian","amplitude":0.005,"width":2,"velocity":0.005},"T":26}"#;
    let ok = write(&dir, "w.json", &format!(r#"{{{LINE},{sim},"weak":{{"R":16}}}}"#));
    let out = graphwave(dir.path(), &["weakcheck", "--config", &ok]);
    assert_eq!(code(&out), 0);
    let rep = json(&out);
    assert_eq!(rep["field"], "u");
    let (lhs, rhs) = (rep["lhs"].as_f64().unwrap(), rep["rhs"].as_f64().unwrap());
    assert!((lhs - rhs).abs() < 1e-3 * rhs);

    let long = write(&dir, "x.json", &format!(r#"{{{LINE},{sim},"weak":{{"R":40}}}}"#));
    let out = graphwave(dir.path(), &["weakcheck", "--config", &long]);
    assert_eq!(code(&out), 1);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["message"].as_str().unwrap().contains("support"));
}

#[test]
fn lemma_constants() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "l.json",
        r#"{"graph":{"kind":"lattice","dim":2,"half_width":100},"metric":{"kind":"lattice_l2"},
            "params":{"p":2,"q":2},"lemma":{"family":"separable","R":[8,16],"s":6}}"#,
    );
    let out = graphwave(dir.path(), &["lemma", "--config", &cfg]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["support_checks_pass"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 2);
    assert!(v["spreads"]["C_lap"].as_f64().unwrap() <= 4.0);
}

#[test]
fn config_errors_are_usage_errors() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"graph":{"kind":"path"}}"#);
    let out = graphwave(dir.path(), &["criterion", "--config", &bad]);
    assert_eq!(code(&out), 2);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "config");

    let missing = write(
        &dir,
        "m.json",
        r#"{"graph":{"kind":"file","path":"nowhere.txt"},"params":{"p":2,"q":2}}"#,
    );
    assert_eq!(code(&graphwave(dir.path(), &["criterion", "--config", &missing])), 2);

    let out = graphwave(dir.path(), &["criterion"]);
    assert_eq!(code(&out), 2);
}
