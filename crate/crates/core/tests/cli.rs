use std::process::Command;

use ambiguity::agreement::{AumannReport, SignalReport};
use ambiguity::cli::{run_with, EvalReport, PriorsOutput, TransformOutput};
use ambiguity::model::{CpaReport, ValidationReport};
use ambiguity::sweep::SweepReport;
use ambiguity::Structure;
use serde::de::DeserializeOwned;
use serde::Serialize;

fn fixture(name: &str) -> String {
    format!("{}/examples/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(std::iter::once("ambiguity").chain(args.iter().copied()), &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

/// Parses `--json` output as `T` and checks that serializing it again gives
/// the same document.
fn round_trip<T: Serialize + DeserializeOwned>(text: &str) -> T {
    let value: serde_json::Value = serde_json::from_str(text).unwrap();
    let parsed: T = serde_json::from_str(text).unwrap();
    assert_eq!(serde_json::to_value(&parsed).unwrap(), value);
    parsed
}

#[test]
fn validate_exit_codes() {
    let ok = run(&["validate", &fixture("atd")]);
    assert_eq!(ok.code, 0, "{}", ok.err);
    assert!(ok.out.trim_end().ends_with("valid"));

    let bad = run(&["validate", &fixture("critical"), "--ai-mode", "out-ai"]);
    assert_eq!(bad.code, 1);
    assert!(bad.out.contains("A6 ") && bad.out.contains("fail"), "{}", bad.out);
    assert!(bad.out.contains("w12"), "witness state printed");

    let dir = tempfile::tempdir().unwrap();
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    let err = run(&["validate", garbage.to_str().unwrap()]);
    assert_eq!(err.code, 2);
    assert!(err.err.contains("malformed"));

    assert_eq!(run(&["validate", "/nonexistent/model.json"]).code, 2);
}

#[test]
fn validate_json_round_trips() {
    let r = run(&["--json", "validate", &fixture("critical"), "--ai-mode", "in-ai"]);
    assert_eq!(r.code, 0);
    let report: ValidationReport = round_trip(&r.out);
    assert!(report.get("A6'").unwrap().passed());
}

#[test]
fn eval_tables() {
    let r = run(&["eval", &fixture("atd"), "CB_{1,2}(B_1(p) & B_2(!p))", "--mode", "in"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.out.matches("true").count(), 2);

    let r = run(&["eval", &fixture("atd"), "CB_{1,2}(p)", "--mode", "out", "--viewpoint", "2"]);
    assert_eq!(r.code, 1);
    assert!(r.out.contains("false") && !r.out.contains("true"));

    let r = run(&["--json", "eval", &fixture("example2"), "true"]);
    assert_eq!(r.code, 0);
    let report: EvalReport = round_trip(&r.out);
    assert!(report.all_true);
    assert_eq!(report.rows.len(), 3 * 2);

    let r = run(&["eval", &fixture("example2"), "p", "--state", "w2", "--viewpoint", "1"]);
    assert_eq!(r.out.lines().count(), 2);
}

#[test]
fn eval_errors() {
    assert_eq!(run(&["eval", &fixture("atd"), "B_1(p"]).code, 2);
    assert_eq!(run(&["eval", &fixture("atd"), "unknown_prop"]).code, 2);
    assert_eq!(run(&["eval", &fixture("atd"), "EB^9_{1}(p)"]).code, 2);
    assert_eq!(run(&["eval", &fixture("atd"), "p", "--viewpoint", "3"]).code, 2);
    assert_eq!(run(&["eval", &fixture("atd"), "p", "--state", "nowhere"]).code, 2);
    assert_eq!(run(&["eval", &fixture("atd"), "p", "--mode", "sideways"]).code, 2);
    // The ai modes need cell labels.
    assert_eq!(run(&["eval", &fixture("no_equiv"), "p", "--mode", "in-ai"]).code, 2);
}

#[test]
fn analyze_signals() {
    let r = run(&["analyze", &fixture("example2"), "signals", "--state", "w1", "--mode", "in"]);
    assert_eq!(r.code, 0);
    assert!(r.out.starts_with("common: yes, public: no, shared: no"), "{}", r.out);
    let r = run(&["--json", "analyze", &fixture("example2"), "signals", "--state", "w1", "--signal", "s"]);
    let report: SignalReport = round_trip(&r.out);
    assert!(report.common && !report.public);
    assert_eq!(run(&["analyze", &fixture("example2"), "signals", "--state", "w1", "--signal", "zz"]).code, 2);
}

#[test]
fn analyze_cpa() {
    let r = run(&["analyze", &fixture("example2"), "cpa"]);
    assert_eq!((r.code, r.out.trim()), (0, "pass"));
    let r = run(&["analyze", &fixture("no_equiv"), "cpa"]);
    assert_eq!(r.code, 1);
    assert!(r.out.starts_with("fail: priors differ"), "{}", r.out);
    let r = run(&["--json", "analyze", &fixture("no_equiv"), "cpa"]);
    let report: CpaReport = round_trip(&r.out);
    assert!(!report.passed);
}

#[test]
fn analyze_priors_ambiguity_agreement() {
    let r = run(&["--json", "analyze", &fixture("example2"), "priors", "--generate"]);
    assert_eq!(r.code, 0);
    let report: PriorsOutput = round_trip(&r.out);
    assert!(report.generated && report.check.passed);
    assert!(report.common_prior.is_some());
    let r = run(&["analyze", &fixture("no_equiv"), "priors"]);
    assert!(r.out.contains("common prior: none"));

    let r = run(&["analyze", &fixture("atd"), "ambiguity", "--formula", "p"]);
    assert_eq!(r.code, 0);
    assert!(r.out.starts_with("epsilon: 1\n"));
    assert_eq!(run(&["analyze", &fixture("atd"), "ambiguity", "--formula", "B_1(p)"]).code, 2);

    let args =
        ["analyze", &fixture("zero_mass_bound"), "agreement", "--formula", "p", "--lower", "1/4", "--upper", "1/2"];
    let r = run(&args);
    assert_eq!(r.code, 1);
    assert!(r.out.contains("violation"));
    let r = run(&["analyze", &fixture("atd"), "agreement", "--formula", "p", "--lower", "1/4", "--upper", "1/2"]);
    assert_eq!(r.code, 0, "vacuous when ε is large");
}

#[test]
fn analyze_posteriors_and_aumann() {
    let r = run(&["analyze", &fixture("example2"), "posteriors", "--state", "w1", "--i", "1", "--j", "2"]);
    assert_eq!(r.code, 1);
    assert!(r.out.starts_with("differ"));
    let r = run(&["analyze", &fixture("atd"), "posteriors", "--state", "w", "--i", "1", "--j", "2", "--formulas"]);
    assert_eq!(r.code, 1);

    let r = run(&["--json", "analyze", &fixture("atd"), "aumann"]);
    assert_eq!(r.code, 1);
    let report: AumannReport = round_trip(&r.out);
    assert!(!report.findings.is_empty());
    let r = run(&["analyze", &fixture("example2"), "aumann", "--group", "1,2"]);
    assert_eq!(r.code, 0, "{}", r.out);
}

#[test]
fn transform_copies_verified() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("copies.json");
    let pairing = dir.path().join("pairing.json");
    let r = run(&[
        "transform",
        &fixture("atd"),
        "copies",
        "--verify",
        "--depth",
        "2",
        "--out",
        out.to_str().unwrap(),
        "--pairing",
        pairing.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}{}", r.out, r.err);
    assert!(r.out.contains("equivalent (family size "), "{}", r.out);
    let copies = Structure::load(&out).unwrap();
    assert_eq!(copies.n_states(), 2);
    let names: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&pairing).unwrap()).unwrap();
    assert_eq!(names["w"]["2"]["state"], "w_c2");
}

#[test]
fn transform_to_stdout() {
    let r = run(&["transform", &fixture("atd"), "project", "--player", "1", "--verify"]);
    assert_eq!(r.code, 0);
    let m = Structure::from_json_str(&r.out).unwrap();
    assert!(m.is_common_interpretation());
    assert!(r.err.contains("equivalent (family size"));

    let r = run(&["--json", "transform", &fixture("example2"), "labels", "--state", "w1", "--verify"]);
    assert_eq!(r.code, 0, "{}", r.out);
    let report: TransformOutput = round_trip(&r.out);
    let v = report.verification.unwrap();
    assert!(v.equivalent && v.validation.unwrap().passed());
    let model = report.model.unwrap().to_string();
    assert_eq!(Structure::from_json_str(&model).unwrap().n_states(), 3);

    assert_eq!(run(&["transform", &fixture("atd"), "project", "--player", "3"]).code, 2);
}

#[test]
fn sweep_reports() {
    let r = run(&["sweep", "--suite", "aumann", "--seeds", "1..20"]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("0 violations"));
    let r = run(&["--json", "sweep", "--suite", "collapse", "--suite", "labels", "--seeds", "1..5", "--depth", "1"]);
    let reports: Vec<SweepReport> = round_trip(&r.out);
    assert_eq!(reports.len(), 2);
    assert!(reports.iter().all(|x| x.depth == 1 && x.structures == 5));
    assert_eq!(run(&["sweep", "--suite", "nope"]).code, 2);
    assert_eq!(run(&["sweep", "--suite", "aumann", "--seeds", "9..1"]).code, 2);
}

#[test]
fn gen_is_deterministic() {
    let a = run(&["gen", "--seed", "7", "--states", "3", "--signals"]);
    let b = run(&["gen", "--seed", "7", "--states", "3", "--signals"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.out, b.out);
    let m = Structure::from_json_str(&a.out).unwrap();
    assert_eq!(m.n_states(), 3);
    assert!(m.signals().is_some());
    let c = run(&["gen", "--seed", "8", "--states", "3", "--signals"]);
    assert_ne!(a.out, c.out);
    assert_eq!(run(&["gen", "--suite", "knowledge-any", "--seed", "1"]).code, 0);
    assert_eq!(run(&["gen", "--players", "0"]).code, 2);
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(run(&[]).code, 2);
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["--depth", "4", "sweep", "--suite", "aumann"]).code, 2);
    let help = run(&["--help"]);
    assert_eq!(help.code, 0);
    for cmd in ["validate", "eval", "analyze", "transform", "sweep", "gen"] {
        assert!(help.out.contains(cmd), "{cmd} missing from help");
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ambiguity");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["eval", &fixture("atd"), "true"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("true"));
    assert_eq!(status(&["analyze", &fixture("no_equiv"), "cpa"]).status.code(), Some(1));
    assert_eq!(status(&["validate"]).status.code(), Some(2));
}
