use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_symcone");
const ALPHA0: &str = "w0 - 8*C1 - 21*D123 - 12*C2 - 14*D249";

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn trailer(o: &Output) -> serde_json::Value {
    let text = stdout(o);
    let (_, json) = text.split_once("---JSON---\n").expect("report has a JSON trailer");
    serde_json::from_str(json).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn classify_omega0_in_full_model_is_a_21_curve_corner() {
    let o = run(&["classify", "--model", "kk-extended", "--class", "w0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("corner; G = 21 curves"));
    let j = trailer(&o);
    assert_eq!(j["tag"], "corner");
    assert_eq!(j["admissible"], false);
}

#[test]
fn classify_base_class_in_gamma0_model_is_interior() {
    let o = run(&["classify", "-m", "kk-gamma0", "-c", ALPHA0]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("interior-Kähler"));
    let pairings: Vec<String> = trailer(&o)["pairings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["pairing"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(pairings, ["3", "1", "1", "2"]);
}

#[test]
fn classify_square_zero_is_rejected() {
    let o = run(&["classify", "-m", "ruled", "-c", "1", "-c", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("not in positive cone"));
}

#[test]
fn reports_are_deterministic() {
    let a = run(&["classify", "-m", "kk-extended", "-c", "w0 + 3K"]);
    let b = run(&["classify", "-m", "kk-extended", "-c", "w0 + 3K"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("interior-Kähler"));
}

#[test]
fn verify_emitted_certificate_and_tampered_copies() {
    let dir = tempfile::tempdir().unwrap();
    let cert = run(&["example", "kk-gamma0-certificate", "--t-scale", "1"]);
    assert_eq!(code(&cert), 0);
    let text = stdout(&cert);
    let good = write(dir.path(), "good.json", &text);
    let o = run(&["verify", &good]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("result: PASS"));
    assert_eq!(trailer(&o)["ledger"].as_array().unwrap().len(), 7);

    // raise the inflation along S to its bound
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["moves"][2]["t"] = "16".into();
    let bad = write(dir.path(), "bad.json", &serde_json::to_string_pretty(&doc).unwrap());
    let o = run(&["verify", &bad]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("bound 2A/h violated at move 3"));

    let cut = write(dir.path(), "cut.json", &text[..text.len() / 2]);
    let o = run(&["verify", &cut]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line"));

    let float = write(dir.path(), "float.json", &text.replacen("\"t\": \"8\"", "\"t\": 8.0", 1));
    assert_eq!(code(&run(&["verify", &float])), 2);
}

#[test]
fn emitted_certificate_round_trips_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&run(&["example", "kk-gamma0-certificate", "--t-scale", "1/2"]));
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let mut again = serde_json::to_string_pretty(&doc).unwrap();
    again.push('\n');
    assert_eq!(again, text);
    let p = write(dir.path(), "half.json", &text);
    assert_eq!(code(&run(&["verify", &p])), 0);
}

#[test]
fn plan_outputs_a_verifiable_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["plan", "-m", "kk-gamma0", "-c", "w0"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let p = write(dir.path(), "plan.json", &stdout(&o));
    let v = run(&["verify", &p]);
    assert_eq!(code(&v), 0, "{}", stdout(&v));
}

#[test]
fn plan_unsupported_and_malformed_exit_codes() {
    let o = run(&["plan", "-m", "e6", "-c", "h"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("E6 excluded"));
    let o = run(&["plan", "-m", "kk-extended", "-c", "w0"]);
    assert_eq!(code(&o), 3);
    assert!(trailer(&o)["witness"].is_array());
    let o = run(&["plan", "-m", "kk-gamma0", "-c", "C1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn model_documents_load_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let doc = stdout(&run(&["example", "ruled", "0", "3", "nontrivial"]));
    let p = write(dir.path(), "ruled.json", &doc);
    let o = run(&["classify", "-m", &p, "-c", "2,-1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = run(&["plan", "-m", &p, "-c", "3,1"]);
    assert_eq!(code(&o), 3);
    let broken = write(dir.path(), "broken.json", "{\"rank\": 2,\n \"gram\": [[1, 0], [0]]\n");
    let o = run(&["classify", "-m", &broken, "-c", "1,0"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line"));
}

#[test]
fn pair_reflect_corner_dynkin() {
    let o = run(&["pair", "-m", "kk", "-c", "C1", "--with", "D123"]);
    assert_eq!(trailer(&o)["pairing"], "1");
    let o = run(&["reflect", "-m", "kk", "-c", "D123", "--curve", "C1"]);
    assert_eq!(trailer(&o)["integral"], false);
    let o = run(&["corner", "-m", "kk-extended", "-c", "w0+3K", "--set", "C1,D123", "--epsilon", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(trailer(&o)["t"], serde_json::json!(["18", "27"]));
    let o = run(&["dynkin", "-m", "e6"]);
    assert_eq!(trailer(&o)["components"][0]["type"], "E6");
    let o = run(&["reflect", "-m", "ruled", "-c", "2,-1", "--curve", "s-3", "--certificate"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn perturb_reports_table_and_slopes() {
    let o = run(&["perturb", "--eps", "1e-2,1e-3,1e-4,1e-5", "--model-spec", "2:1,1", "--model-spec", "1:1,1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let fits = trailer(&o)["fits"].clone();
    let slope = |i: usize| fits[i]["slope"].as_f64().unwrap();
    assert!((slope(0) - 2.0).abs() < 0.2);
    assert!((slope(1) - 4.0).abs() < 0.3);
    let o = run(&["perturb", "--eps", "10", "--model-spec", "1:1,0.01"]);
    assert_eq!(code(&o), 2);
}
