//! Priors that generate given posteriors, and the search for one prior
//! that all players share.

use ambiguity::model::{check_cpa, check_prior_generated, find_common_prior, generate_priors};
use ambiguity::transforms::{random_structure, GeneratorConfig};
use ambiguity::Structure;

fn show(m: &Structure) -> Result<(), Box<dyn std::error::Error>> {
    let priors = generate_priors(m);
    for (i, nu) in m.player_ids().zip(&priors) {
        let parts: Vec<String> = (0..m.n_states()).map(|s| format!("{}={}", m.state_name(s), nu.get(s))).collect();
        println!("  prior of {i}: {}", parts.join(" "));
    }
    let report = check_prior_generated(m, &priors);
    println!("  generates the posteriors: {} ({} unconstrained cells)", report.passed, report.unconstrained);
    match find_common_prior(m) {
        Some(nu) => {
            let with = m.with_priors(Some(vec![nu; m.n_players()]))?;
            println!("  common prior found; cpa holds: {}", check_cpa(&with)?.passed);
        }
        None => println!("  no common prior"),
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["example2", "no_equiv"] {
        println!("{name}");
        show(&Structure::load(format!("{}/examples/{name}.json", env!("CARGO_MANIFEST_DIR")))?)?;
    }
    let cfg = GeneratorConfig { common_prior: false, states: (3, 4), ..GeneratorConfig::default() };
    for seed in 1..=3 {
        println!("random seed {seed}");
        show(&random_structure(&cfg.with_seed(seed))?)?;
    }
    Ok(())
}
