//! Runs every invariant suite over a few seeds. Pass a seed range such as
//! `1..50` to sweep more.

use ambiguity::sweep::{run_sweep, SeedRange, Suite};

fn main() -> Result<(), String> {
    let seeds: SeedRange = std::env::args().nth(1).as_deref().unwrap_or("1..20").parse()?;
    let mut failed = false;
    for suite in Suite::ALL {
        let r = run_sweep(suite, seeds, 1);
        println!(
            "{:<26} {:>4} instances {:>4} positive {} violations",
            suite.name(),
            r.instances,
            r.positive,
            r.violations
        );
        if let Some(w) = r.witness {
            println!("  seed {}: {}", w.seed, w.detail);
            failed = true;
        }
    }
    if failed {
        Err("violations found".into())
    } else {
        Ok(())
    }
}
