//! Runs each cargo example, which `cargo test` builds next to the test
//! binaries, and checks a line of its output.

use std::path::PathBuf;
use std::process::Command;

fn example(name: &str) -> String {
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let path: PathBuf = deps.parent().unwrap().join("examples").join(name);
    assert!(path.exists(), "{} is not built; run `cargo test` without a target filter", path.display());
    let out = Command::new(&path).output().unwrap();
    assert!(out.status.success(), "{name} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn agree_to_disagree() {
    let out = example("agree_to_disagree");
    assert!(out.contains("aumann: AmbiguityEscape"));
}

#[test]
fn common_signal() {
    let out = example("common_signal");
    assert!(out.contains("player 1 gives q probability 1/2"));
    assert!(out.contains("in: signal s at w1: common true, public false"));
}

#[test]
fn ambiguous_information() {
    let out = example("ambiguous_information");
    assert!(out.contains("out-ai: A6 Fail") && out.contains("in-ai: A6' Pass"));
}

#[test]
fn no_equivalent_cpa() {
    assert!(example("no_equivalent_cpa").contains("0 equivalent, exhausted: true"));
}

#[test]
fn prior_generation() {
    let out = example("prior_generation");
    assert!(out.contains("no common prior") && out.contains("cpa holds: true"));
}

#[test]
fn transforms() {
    let out = example("transforms");
    assert!(out.contains("copies agree on 776 belief formulas: true"));
    assert!(out.contains("old formulas keep their meaning: true"));
}

#[test]
fn agreement_bound() {
    assert!(example("agreement_bound").contains("Violation"));
}

#[test]
fn sweep() {
    assert!(!example("sweep").contains("seed "));
}

#[test]
fn model_checking() {
    assert!(example("model_checking").contains("in-ai  [[Pr_2(p) >= 3/4]]"));
}
