//! A signal both players receive can still fail to be public when they
//! read the receipt propositions differently.

use ambiguity::agreement::{classify_signal, compare_posteriors_events};
use ambiguity::semantics::prob_value;
use ambiguity::{parse, Mode, PlayerId, Structure};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = Structure::load(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/example2.json"))?;
    let w1 = m.state("w1")?;

    for i in m.player_ids() {
        for text in ["p", "q"] {
            let v = prob_value(&m, w1, i, i, &parse(text)?, Mode::In)?;
            println!("player {i} gives {text} probability {v}");
        }
    }

    let signal = m.signal(PlayerId::new(1).unwrap(), w1).expect("example2 has signals").to_string();
    for mode in [Mode::Out, Mode::In] {
        let r = classify_signal(&m, &signal, w1, mode)?;
        println!("{mode}: signal {signal} at w1: common {}, public {}, shared {}", r.common, r.public, r.shared);
    }

    let cmp = compare_posteriors_events(&m, w1, PlayerId::new(1).unwrap(), PlayerId::new(2).unwrap())?;
    match cmp.witness {
        Some(w) => println!("posteriors differ on {{{}}}: {} vs {}", w.event.join(", "), w.left, w.right),
        None => println!("posteriors agree"),
    }
    Ok(())
}
