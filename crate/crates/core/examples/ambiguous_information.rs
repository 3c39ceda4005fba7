//! Cell labels that players read differently. The structure satisfies the
//! innermost-scope assumption on labels but not the outermost one, and
//! under innermost scope the players commonly believe they received the
//! same signal without commonly believing that either received it.

use ambiguity::model::validate_ai;
use ambiguity::{parse, Evaluator, Mode, Structure};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = Structure::load(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/critical.json"))?;

    for mode in [Mode::OutAi, Mode::InAi] {
        let report = validate_ai(&m, mode)?;
        for c in report.checks.iter().filter(|c| c.name.starts_with("A6")) {
            println!("{mode}: {} {:?}", c.name, c.status);
            for w in &c.witnesses {
                println!("    {}", w.detail);
            }
        }
    }

    let f = parse("CB_{1,2}(recv_1_s <-> recv_2_s) & !CB_{1,2}(recv_1_s)")?;
    let mut ev = Evaluator::new(&m, Mode::InAi)?;
    for s in 0..m.n_states() {
        let row: Vec<String> =
            m.player_ids().map(|v| ev.eval(&f, s, v).map(|b| b.to_string())).collect::<Result<_, _>>()?;
        println!("{:<4} {}", m.state_name(s), row.join(" "));
    }
    Ok(())
}
