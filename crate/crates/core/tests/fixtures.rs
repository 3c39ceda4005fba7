//! The shipped model files load, validate, and show what they are there for.

use ambiguity::agreement::{check_agreement_bound, AgreementStatus};
use ambiguity::model::{check_cpa, validate};
use ambiguity::{parse, Rational, Structure};

fn load(name: &str) -> Structure {
    Structure::load(format!("{}/examples/{name}.json", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn all_fixtures_validate() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("examples");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let m = Structure::load(&path).unwrap();
            assert!(validate(&m).passed(), "{}", path.display());
            count += 1;
        }
    }
    assert!(count >= 7);
}

/// A common prior with a zero-mass state in the ambiguity region lets the
/// players commonly believe a disagreement wider than `ε`.
#[test]
fn zero_mass_state_escapes_the_bound() {
    let m = load("zero_mass_bound");
    assert!(check_cpa(&m).unwrap().passed);
    let p = parse("p").unwrap();
    let report = check_agreement_bound(&m, &m.all_players(), &p, &Rational::new(1, 4), &Rational::new(1, 2)).unwrap();
    assert_eq!(report.epsilon, Some(Rational::new(1, 10)));
    assert_eq!(report.status, AgreementStatus::Violation);
    assert_eq!(report.witness.unwrap().state, "a");
}
