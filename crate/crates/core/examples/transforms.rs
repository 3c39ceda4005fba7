//! The three constructions that move between semantics: projecting on one
//! player's interpretation, taking one disjoint copy of the states per
//! player, and labelling cells so the ambiguous-information semantics apply.

use ambiguity::model::validate_ai;
use ambiguity::transforms::{
    add_cell_labels, check_equivalent, check_equivalent_on, disjoint_copies, formula_family, mentions_knowledge,
    project_outermost, Pairing,
};
use ambiguity::{Mode, Structure};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples");
    let m = Structure::load(format!("{dir}/atd.json"))?;
    let family = formula_family(m.props(), m.n_players(), 2);
    println!("family of {} formulas", family.len());

    for i in m.player_ids() {
        let p = project_outermost(&m, i)?;
        let v = check_equivalent(&m, &p, &Pairing::identity_for(&m, [i]), Mode::Out, Mode::In, &family)?;
        println!("projection on {i}: outermost for {i} = innermost after: {}", v.equivalent);
    }

    let (c, pairing) = disjoint_copies(&m)?;
    println!("copies: {:?}", c.states());
    let beliefs: Vec<_> = family.iter().filter(|f| !mentions_knowledge(f)).cloned().collect();
    let v = check_equivalent(&m, &c, &pairing, Mode::In, Mode::In, &beliefs)?;
    println!("copies agree on {} belief formulas: {}", beliefs.len(), v.equivalent);
    // Knowledge is not preserved: a cell of the copies spans every copy.
    let v = check_equivalent(&m, &c, &pairing, Mode::In, Mode::In, &family)?;
    if let Some(w) = v.witness {
        println!("but `{}` is {} before and {} after", w.formula, w.left_value, w.right_value);
    }

    let m = Structure::load(format!("{dir}/example2.json"))?;
    let (l, pairing) = add_cell_labels(&m, m.state("w1")?)?;
    println!("labelled: {} states, props {:?}", l.n_states(), l.props().iter().map(|p| p.as_str()).collect::<Vec<_>>());
    for mode in [Mode::OutAi, Mode::InAi] {
        println!("  {mode} assumptions hold: {}", validate_ai(&l, mode)?.passed());
    }
    let family = formula_family(m.props(), m.n_players(), 1);
    let v = check_equivalent_on(&m, &l, &pairing, Mode::In, Mode::In, &family)?;
    println!("  old formulas keep their meaning: {}", v.equivalent);
    Ok(())
}
