//! Building a structure in code and evaluating formulas under all four
//! semantics.

use ambiguity::model::{Distribution, Partition, StructureParts};
use ambiguity::semantics::prob_value;
use ambiguity::{parse, Evaluator, Event, Mode, PlayerId, PropId, Rational, Structure};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Two states; player 1 tells them apart, player 2 does not. Player 1
    // calls `p` true at `a` only, player 2 at both.
    let n = 2;
    let both = Event::full(n);
    let half = Distribution::new(vec![Rational::new(1, 2), Rational::new(1, 2)]);
    let m = Structure::from_parts(StructureParts {
        states: vec!["a".into(), "b".into()],
        players: 2,
        props: vec![PropId::new("p").unwrap()],
        partitions: vec![Partition::discrete(n), Partition::trivial(n)],
        posteriors: vec![vec![Distribution::point(n, 0), Distribution::point(n, 1)], vec![half.clone()]],
        interpretations: vec![vec![Event::singleton(0)], vec![both]],
        cell_labels: Some(vec![vec![parse("p")?, parse("!p")?], vec![parse("true")?]]),
        priors: Some(vec![half.clone(), half]),
        signals: None,
    })?;
    println!("{} states, common interpretation: {}", m.n_states(), m.is_common_interpretation());

    let one = PlayerId::new(1).unwrap();
    let two = PlayerId::new(2).unwrap();
    let f = parse("Pr_2(p) >= 3/4")?;
    for mode in Mode::ALL {
        let mut ev = match Evaluator::new(&m, mode) {
            Ok(ev) => ev,
            Err(e) => {
                println!("{mode}: {e}");
                continue;
            }
        };
        let ext: Vec<Vec<String>> =
            [one, two].iter().map(|&v| ev.extension(&f, v).map(|e| m.event_names(e))).collect::<Result<_, _>>()?;
        let pr = prob_value(&m, 0, one, two, &parse("p")?, mode)?;
        println!("{mode:<6} [[{f}]] by viewpoint: {ext:?}; Pr_2(p) for viewpoint 1 = {pr}");
    }
    Ok(())
}
