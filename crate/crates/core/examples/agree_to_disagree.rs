//! Two players who read `p` differently, with a common prior on a single
//! state. Each believes their own reading, so they agree to disagree.
//!
//! Run with `cargo run --example agree_to_disagree`.

use ambiguity::agreement::aumann_check;
use ambiguity::{parse, Evaluator, Mode, PlayerId, PropId, Structure};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = Structure::load(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/atd.json"))?;
    let w = m.state("w")?;

    let formulas = ["CB_{1,2}(B_1(p) & B_2(!p))", "CB_{1,2}(p)", "CB_{1,2}(!p)"];
    for mode in [Mode::Out, Mode::In] {
        let mut ev = Evaluator::new(&m, mode)?;
        for text in formulas {
            let f = parse(text)?;
            let values: Vec<String> = m
                .player_ids()
                .map(|v| Ok(format!("{v}: {}", ev.eval(&f, w, v)?)))
                .collect::<Result<_, ambiguity::EvalError>>()?;
            println!("{mode:<3} {text:<28} {}", values.join("  "));
        }
    }

    // Under innermost scope each player reads `p` themselves, so the
    // posteriors on `p` differ and that difference is common belief.
    let report = aumann_check(&m, &m.all_players())?;
    println!("\naumann: {:?}", report.status);
    for f in &report.findings {
        println!("  CB of Pr_{}({}) = {} and Pr_{}({}) = {}", f.i, f.formula, f.a, f.j, f.formula, f.c);
    }
    let one = PlayerId::new(1).unwrap();
    println!(
        "player 1's reading of p: {:?}",
        m.event_names(m.prop_extension(one, &PropId::new("p").unwrap()).unwrap())
    );
    Ok(())
}
