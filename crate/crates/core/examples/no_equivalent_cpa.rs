//! A structure without a common prior whose innermost-scope theory no small
//! common-prior structure reproduces. The search enumerates partitions,
//! interpretations and priors up to three states and denominators of 12,
//! pruning as soon as a probe formula fails.

use std::ops::ControlFlow;
use std::time::Instant;

use ambiguity::model::check_cpa;
use ambiguity::transforms::{search_cpa_equivalent, SearchBounds};
use ambiguity::{parse, Evaluator, Mode, Structure};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = Structure::load(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/no_equiv.json"))?;
    for c in check_cpa(&m)?.clauses {
        println!("{:<24} {}", c.name, c.failure.as_deref().unwrap_or("ok"));
    }

    let probes = ["Pr_2(p) = 2/3", "Pr_3(p) = 3/4", "B_2(p <-> B_1(p))", "B_3(p <-> B_1(p))", "p <-> Pr_1(p) = 1"]
        .into_iter()
        .map(parse)
        .collect::<Result<Vec<_>, _>>()?;
    let mut ev = Evaluator::new(&m, Mode::In)?;
    for f in &probes {
        println!("valid: {:<5} {f}", ev.valid(f)?);
    }

    let start = Instant::now();
    let report = search_cpa_equivalent(&m, &probes, SearchBounds::default(), &mut |c| {
        println!("found an equivalent structure with {} states", c.n_states());
        ControlFlow::Break(())
    })?;
    println!(
        "{} priors, {} nodes, {} equivalent, exhausted: {} ({:.1?})",
        report.priors,
        report.nodes,
        report.equivalent,
        report.exhausted,
        start.elapsed()
    );
    for (probe, count) in &report.rejected_by {
        println!("  rejected by {probe}: {count}");
    }
    Ok(())
}
