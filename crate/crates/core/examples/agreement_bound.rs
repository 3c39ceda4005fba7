//! How far common belief of disagreement can go when players share a prior
//! but read a formula differently: `ε` is the prior mass where readings
//! differ, and disagreement by more than `ε` should not be common belief.

use ambiguity::agreement::{ambiguity_measure, check_agreement_bound};
use ambiguity::{parse, Rational, Structure};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples");
    let m = Structure::load(format!("{dir}/atd.json"))?;
    let p = parse("p")?;
    let nu = m.prior(m.player_ids().next().unwrap()).unwrap();
    println!("atd: ε(p) = {}", ambiguity_measure(&m, nu, &p)?.epsilon);

    let m = Structure::load(format!("{dir}/zero_mass_bound.json"))?;
    let nu = m.prior(m.player_ids().next().unwrap()).unwrap();
    let eps = ambiguity_measure(&m, nu, &p)?;
    println!("zero mass: ε(p) = {} on {:?}", eps.epsilon, eps.disagreement_event);
    // A zero-mass state can carry the disagreement past the bound.
    let report = check_agreement_bound(&m, &m.all_players(), &p, &Rational::new(1, 4), &Rational::new(1, 2))?;
    println!("b = 1/4, b' = 1/2: {:?} {:?}", report.status, report.witness);
    Ok(())
}
