//! End-to-end acceptance checks. Prints one line per criterion and exits
//! non-zero if any fails.

use std::ops::ControlFlow;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ambiguity::agreement::{
    aumann_check, classify_signal, compare_posteriors_events, compare_posteriors_formulas, AumannStatus,
};
use ambiguity::model::{check_prior_generated, generate_priors, validate_ai, CheckStatus};
use ambiguity::semantics::prob_value;
use ambiguity::sweep::{run_sweep, SeedRange, Suite, SweepReport};
use ambiguity::transforms::{random_structure, search_cpa_equivalent, SearchBounds};
use ambiguity::{parse, Evaluator, Formula, Mode, PlayerId, Rational, Structure};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

const SEEDS: SeedRange = SeedRange { first: 1, last: 200 };
const DEPTH: usize = 2;

fn fixture(name: &str) -> Structure {
    Structure::load(format!("{}/examples/{name}.json", env!("CARGO_MANIFEST_DIR"))).expect("fixture loads")
}

fn pl(n: u16) -> PlayerId {
    PlayerId::new(n).unwrap()
}

fn f(text: &str) -> Formula {
    parse(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn r(text: &str) -> Rational {
    text.parse().unwrap()
}

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

/// Runs a suite over the standard seeds and requires zero violations and
/// at least one instance whose premises held.
fn sweep(suite: Suite) -> Result<SweepReport, String> {
    let report = run_sweep(suite, SEEDS, DEPTH);
    ensure(report.structures == SEEDS.len(), format!("{suite}: only {} structures", report.structures))?;
    if let Some(w) = &report.witness {
        return Err(format!("{suite}: {} violations, seed {}: {}", report.violations, w.seed, w.detail));
    }
    ensure(report.instances > 0, format!("{suite}: no instance met its premises"))?;
    Ok(report)
}

fn sweeps(suites: &[Suite]) -> Verdict {
    let mut parts = Vec::new();
    for &s in suites {
        let report = sweep(s)?;
        parts.push(format!("{s} {} instances", report.instances));
    }
    Ok(parts.join(", "))
}

fn agree_to_disagree() -> Verdict {
    let m = fixture("atd");
    let w = m.state("w").unwrap();
    let mut inner = Evaluator::new(&m, Mode::In).unwrap();
    let g = f("CB_{1,2}(B_1(p) & B_2(!p))");
    for v in [pl(1), pl(2)] {
        ensure(inner.eval(&g, w, v).unwrap(), format!("in: `{g}` false for viewpoint {v}"))?;
    }
    let mut outer = Evaluator::new(&m, Mode::Out).unwrap();
    ensure(outer.eval(&f("CB_{1,2}(p)"), w, pl(1)).unwrap(), "out: CB(p) false for viewpoint 1")?;
    ensure(outer.eval(&f("CB_{1,2}(!p)"), w, pl(2)).unwrap(), "out: CB(!p) false for viewpoint 2")?;
    Ok("in: CB(B_1 p & B_2 !p) for both; out: CB(p) for 1, CB(!p) for 2".into())
}

fn common_signal() -> Verdict {
    let m = fixture("example2");
    let w1 = m.state("w1").unwrap();
    let expected = [(1, "p", "1"), (1, "q", "1/2"), (2, "p", "1/2"), (2, "q", "1")];
    for (i, prop, value) in expected {
        let got = prob_value(&m, w1, pl(i), pl(i), &f(prop), Mode::In).unwrap();
        ensure(got == r(value), format!("player {i}: Pr({prop}) = {got}, expected {value}"))?;
    }
    let signal = m.signal(pl(1), w1).unwrap().to_string();
    for mode in [Mode::Out, Mode::In] {
        let report = classify_signal(&m, &signal, w1, mode).unwrap();
        ensure(report.common && !report.public, format!("{mode}: common {}, public {}", report.common, report.public))?;
    }
    Ok("posteriors exact; signal common but not public".into())
}

fn ambiguous_labels() -> Verdict {
    let m = fixture("critical");
    let w11 = m.state("w11").unwrap();
    let g = f("CB_{1,2}(recv_1_s <-> recv_2_s) & !CB_{1,2}(recv_1_s)");
    let mut ev = Evaluator::new(&m, Mode::InAi).unwrap();
    for v in [pl(1), pl(2)] {
        ensure(ev.eval(&g, w11, v).unwrap(), format!("in-ai: `{g}` false at w11 for viewpoint {v}"))?;
    }
    let status = |mode, name: &str| validate_ai(&m, mode).unwrap().get(name).map(|c| c.status);
    ensure(status(Mode::InAi, "A6'") == Some(CheckStatus::Pass), "A6' does not pass")?;
    ensure(status(Mode::OutAi, "A6") == Some(CheckStatus::Fail), "A6 does not fail")?;
    Ok("formula true at w11; A6' pass, A6 fail".into())
}

fn no_cpa_equivalent() -> Verdict {
    let m = fixture("no_equiv");
    let probes: Vec<Formula> =
        ["Pr_2(p) = 2/3", "Pr_3(p) = 3/4", "B_2(p <-> B_1(p)) & B_3(p <-> B_1(p))", "p <-> Pr_1(p) = 1"]
            .map(f)
            .to_vec();
    let mut ev = Evaluator::new(&m, Mode::In).unwrap();
    for g in &probes {
        ensure(ev.valid(g).unwrap(), format!("`{g}` is not valid"))?;
    }
    // Both players would have to give one event, B_1(p), different prior
    // masses.
    ensure(ev.valid(&f("Pr_2(B_1(p)) = 2/3 & Pr_3(B_1(p)) = 3/4")).unwrap(), "Pr_j(B_1 p) differs from the bounds")?;
    let e = ev.extension(&f("B_1(p)"), pl(1)).unwrap();
    ensure(m.player_ids().all(|v| ev.extension(&f("B_1(p)"), v).unwrap() == e), "B_1(p) depends on the viewpoint")?;
    let bounds = SearchBounds { max_states: 3, max_denominator: 12 };
    let start = Instant::now();
    let mut found = 0;
    let report = search_cpa_equivalent(&m, &probes, bounds, &mut |_| {
        found += 1;
        ControlFlow::Break(())
    })
    .unwrap();
    let took = start.elapsed();
    ensure(found == 0 && report.equivalent == 0, "search found an equivalent structure")?;
    ensure(report.exhausted, "search stopped early")?;
    ensure(took < Duration::from_secs(30), format!("search took {took:.1?}"))?;
    Ok(format!("{} nodes, {} priors, none equivalent, {took:.1?}", report.nodes, report.priors))
}

fn prior_roundtrip() -> Verdict {
    let cfg = Suite::PriorRoundtrip.config();
    let mut cells = 0;
    for seed in SEEDS.iter() {
        let m = random_structure(&cfg.with_seed(seed)).unwrap();
        let priors = generate_priors(&m);
        let report = check_prior_generated(&m, &priors);
        ensure(report.passed && report.unconstrained == 0, format!("seed {seed}: {report:?}"))?;
        for (i, nu) in m.player_ids().zip(&priors) {
            let share = Rational::new(1, m.partition(i).len() as i64);
            for cell in m.partition(i).cells() {
                ensure(nu.mass(*cell) == share, format!("seed {seed}: player {i} cell mass {}", nu.mass(*cell)))?;
                cells += 1;
            }
        }
    }
    let report = sweep(Suite::PriorRoundtrip)?;
    Ok(format!("{cells} cells of mass 1/N_i; suite {} instances", report.instances))
}

fn transformation_contracts() -> Verdict {
    sweeps(&[Suite::ProjectionEquivalence, Suite::CopiesEquivalence, Suite::CopiesCpa])
}

fn aumann() -> Verdict {
    let swept = sweeps(&[Suite::Aumann])?;
    let m = fixture("atd");
    let report = aumann_check(&m, &m.all_players()).unwrap();
    ensure(report.status == AumannStatus::AmbiguityEscape, format!("atd: {:?}", report.status))?;
    let found = report.findings.iter().any(|x| x.formula == f("p") && x.a != x.c);
    ensure(found, "atd: no common belief of differing point beliefs on p")?;
    Ok(format!("{swept}; atd escapes"))
}

fn agreement_bound() -> Verdict {
    sweeps(&[Suite::AgreementBound])
}

fn semantics_invariants() -> Verdict {
    sweeps(&[Suite::InViewpointIndependence, Suite::OutCellUnion, Suite::Collapse, Suite::CbUnrolling])
}

fn signals() -> Verdict {
    let mut parts = Vec::new();
    for suite in [Suite::SignalsCommon, Suite::SignalsOutAi, Suite::SignalsInAi] {
        let report = sweep(suite)?;
        ensure(report.positive > 0, format!("{suite}: no public instance"))?;
        parts.push(format!("{suite} {}/{}", report.positive, report.instances));
    }

    // Outermost ai: public for a viewpoint, equal on formulas, yet the
    // posteriors differ as measures.
    let m = fixture("outai_events_differ");
    let a = m.state("a").unwrap();
    let report = classify_signal(&m, "s", a, Mode::OutAi).unwrap();
    let public_for: Vec<PlayerId> = report.viewpoints.iter().filter(|v| v.public).map(|v| v.viewpoint).collect();
    ensure(!public_for.is_empty(), "out-ai fixture: signal not public for any viewpoint")?;
    let events = compare_posteriors_events(&m, a, pl(1), pl(2)).unwrap();
    ensure(!events.equal, "out-ai fixture: posteriors agree on events")?;

    // Innermost ai: public, equal as measures, yet different on a formula.
    let m = fixture("inai_formulas_differ");
    let w = m.state("w").unwrap();
    let report = classify_signal(&m, "s", w, Mode::InAi).unwrap();
    ensure(report.public, "in-ai fixture: signal not public")?;
    ensure(compare_posteriors_events(&m, w, pl(1), pl(2)).unwrap().equal, "in-ai fixture: events differ")?;
    let formulas = compare_posteriors_formulas(&m, w, pl(1), pl(2), Mode::InAi, DEPTH).unwrap();
    ensure(!formulas.equal, "in-ai fixture: posteriors agree on formulas")?;

    Ok(format!("{}; may-differ fixtures hold", parts.join(", ")))
}

fn knowledge() -> Verdict {
    sweeps(&[Suite::Knowledge, Suite::KnowledgeAny])
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("agree-to-disagree fixture under both scopes", agree_to_disagree),
        ("common signal fixture: posteriors and classification", common_signal),
        ("ambiguous labels fixture: formula and label assumptions", ambiguous_labels),
        ("no common-prior equivalent within bounds", no_cpa_equivalent),
        ("generated priors round-trip", prior_roundtrip),
        ("transformation contracts", transformation_contracts),
        ("no agreeing to disagree without ambiguity", aumann),
        ("disagreement bounded by ambiguity", agreement_bound),
        ("semantics invariants", semantics_invariants),
        ("signal propositions", signals),
        ("knowledge axioms", knowledge),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        match verdict {
            Ok(detail) => println!("criterion {:>2}: PASS  {name} ({detail}) [{took:.1?}]", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {detail} [{took:.1?}]", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
