//! Property sweeps: invariants checked over seeded random structures.
//!
//! Each [`Suite`] fixes a generator configuration and a check. A sweep runs
//! the check on the structure generated from every seed in a range and
//! reports the violations, with the smallest failing structure as witness.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::agreement::{
    aumann_check, classify_signal_with, compare_posteriors_events, compare_posteriors_formulas_with,
    propositional_formulas, scan_agreement, AumannStatus,
};
use crate::model::{check_cpa, check_prior_generated, generate_priors, validate, validate_ai, Event, Structure};
use crate::rational::Rational;
use crate::semantics::{Evaluator, Mode};
use crate::syntax::{Formula, PlayerId};
use crate::transforms::{
    add_cell_labels, check_equivalent, check_equivalent_on, disjoint_copies, formula_family, mentions_knowledge,
    project_outermost, random_structure, reads_viewpoint, GeneratorConfig, LabelAmbiguity, Pairing, THRESHOLDS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// No common belief of differing posteriors under a common prior and a
    /// common interpretation.
    Aumann,
    /// Innermost-scope extensions of formulas without a bare proposition do
    /// not depend on the viewpoint.
    InViewpointIndependence,
    /// Outermost-scope extensions of a player's probability atoms are unions
    /// of that player's cells.
    OutCellUnion,
    /// With a common interpretation the outermost and innermost readings agree.
    Collapse,
    /// Common belief is the intersection of the `EB^k` for `k ≤ |Ω|+2`.
    CbUnrolling,
    /// Disjoint copies agree with innermost scope on belief formulas.
    CopiesEquivalence,
    /// Projection on a player agrees with outermost scope for that player.
    ProjectionEquivalence,
    /// Disjoint copies of a common-prior structure lose the common prior.
    CopiesCpa,
    /// Priors generated from posteriors generate them back.
    PriorRoundtrip,
    /// No common belief of disagreement beyond the ambiguity of the formula.
    AgreementBound,
    /// `K_i f -> f` under a common interpretation.
    Knowledge,
    /// Some player's `K_i f -> f` holds under innermost scope.
    KnowledgeAny,
    /// A common signal is public iff shared; public gives equal posteriors.
    SignalsCommon,
    /// Outermost ai scope: public iff shared, per viewpoint; public gives
    /// equal probabilities of formulas.
    SignalsOutAi,
    /// Innermost ai scope: public iff strongly shared; public gives equal
    /// posteriors.
    SignalsInAi,
    /// Cell labelling validates and keeps the meaning of old formulas.
    Labels,
}

impl Suite {
    pub const ALL: [Suite; 16] = [
        Suite::Aumann,
        Suite::InViewpointIndependence,
        Suite::OutCellUnion,
        Suite::Collapse,
        Suite::CbUnrolling,
        Suite::CopiesEquivalence,
        Suite::ProjectionEquivalence,
        Suite::CopiesCpa,
        Suite::PriorRoundtrip,
        Suite::AgreementBound,
        Suite::Knowledge,
        Suite::KnowledgeAny,
        Suite::SignalsCommon,
        Suite::SignalsOutAi,
        Suite::SignalsInAi,
        Suite::Labels,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Aumann => "aumann",
            Suite::InViewpointIndependence => "in-viewpoint-independence",
            Suite::OutCellUnion => "out-cell-union",
            Suite::Collapse => "collapse",
            Suite::CbUnrolling => "cb-unrolling",
            Suite::CopiesEquivalence => "copies-equivalence",
            Suite::ProjectionEquivalence => "projection-equivalence",
            Suite::CopiesCpa => "copies-cpa",
            Suite::PriorRoundtrip => "prior-roundtrip",
            Suite::AgreementBound => "agreement-bound",
            Suite::Knowledge => "knowledge",
            Suite::KnowledgeAny => "knowledge-any",
            Suite::SignalsCommon => "signals-common",
            Suite::SignalsOutAi => "signals-out-ai",
            Suite::SignalsInAi => "signals-in-ai",
            Suite::Labels => "labels",
        }
    }

    /// The structures this suite runs on.
    pub fn config(self) -> GeneratorConfig {
        let base = GeneratorConfig::default();
        let ambiguous = GeneratorConfig { ambiguity: Rational::new(1, 3), ..base.clone() };
        let signals = GeneratorConfig { with_signals: true, states: (1, 3), props: (0, 1), ..base.clone() };
        match self {
            Suite::Aumann | Suite::Collapse | Suite::Knowledge | Suite::Labels => base,
            Suite::InViewpointIndependence
            | Suite::OutCellUnion
            | Suite::CbUnrolling
            | Suite::CopiesEquivalence
            | Suite::ProjectionEquivalence
            | Suite::CopiesCpa => ambiguous,
            Suite::KnowledgeAny => GeneratorConfig { ambiguity: Rational::new(1, 2), common_prior: false, ..base },
            Suite::AgreementBound => GeneratorConfig { ambiguity: Rational::new(1, 4), ..base },
            Suite::PriorRoundtrip => GeneratorConfig { common_prior: false, degenerate: true, states: (1, 6), ..base },
            Suite::SignalsCommon => signals,
            Suite::SignalsOutAi => GeneratorConfig {
                label_ambiguity: LabelAmbiguity::Coarsening,
                ambiguity: Rational::new(1, 3),
                ..signals
            },
            Suite::SignalsInAi => GeneratorConfig {
                label_ambiguity: LabelAmbiguity::Arbitrary,
                ambiguity: Rational::new(1, 3),
                ..signals
            },
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            format!("unknown suite `{s}`; expected one of {}", names.join(", "))
        })
    }
}

/// An inclusive range of seeds, written `a..b`, `a..=b` or `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRange {
    pub first: u64,
    pub last: u64,
}

impl SeedRange {
    pub fn new(first: u64, last: u64) -> Self {
        SeedRange { first, last }
    }

    pub fn iter(self) -> impl Iterator<Item = u64> {
        self.first..=self.last
    }

    pub fn len(self) -> u64 {
        self.last.saturating_sub(self.first) + u64::from(self.last >= self.first)
    }

    pub fn is_empty(self) -> bool {
        self.last < self.first
    }
}

impl FromStr for SeedRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("bad seed `{t}`: {e}"));
        let (first, last) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => (num(s)?, num(s)?),
        };
        if last < first {
            return Err(format!("empty seed range `{s}`"));
        }
        Ok(SeedRange { first, last })
    }
}

impl fmt::Display for SeedRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.first, self.last)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepWitness {
    pub seed: u64,
    pub detail: String,
    pub model: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub suite: Suite,
    pub seeds: SeedRange,
    pub depth: usize,
    pub structures: u64,
    /// Individual checks whose premises held.
    pub instances: u64,
    /// Instances where the interesting side of the property was exercised
    /// (for example a signal that is actually public).
    pub positive: u64,
    pub violations: u64,
    /// The failing structure with fewest states, earliest seed first.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<SweepWitness>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// The outcome of one suite check on one structure.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub instances: u64,
    pub positive: u64,
    pub violation: Option<String>,
}

impl Outcome {
    fn fail(&mut self, detail: String) {
        if self.violation.is_none() {
            self.violation = Some(detail);
        }
    }
}

/// Runs `suite` on the structure of every seed in `seeds`.
pub fn run_sweep(suite: Suite, seeds: SeedRange, depth: usize) -> SweepReport {
    let cfg = suite.config();
    let mut report =
        SweepReport { suite, seeds, depth, structures: 0, instances: 0, positive: 0, violations: 0, witness: None };
    let mut best: Option<(usize, SweepWitness)> = None;
    for seed in seeds.iter() {
        let m = random_structure(&cfg.with_seed(seed)).expect("suite configurations are valid");
        report.structures += 1;
        let outcome = check(suite, &m, depth);
        report.instances += outcome.instances;
        report.positive += outcome.positive;
        if let Some(detail) = outcome.violation {
            report.violations += 1;
            if best.as_ref().is_none_or(|(n, _)| m.n_states() < *n) {
                let model = serde_json::from_str(&m.to_json_string()).expect("model files are JSON");
                best = Some((m.n_states(), SweepWitness { seed, detail, model }));
            }
        }
    }
    report.witness = best.map(|(_, w)| w);
    report
}

/// Runs one suite's check on one structure.
pub fn check(suite: Suite, m: &Structure, depth: usize) -> Outcome {
    let mut out = Outcome::default();
    let result = match suite {
        Suite::Aumann => aumann(m, &mut out),
        Suite::InViewpointIndependence => viewpoint_independence(m, depth, &mut out),
        Suite::OutCellUnion => out_cell_union(m, depth, &mut out),
        Suite::Collapse => collapse(m, depth, &mut out),
        Suite::CbUnrolling => cb_unrolling(m, &mut out),
        Suite::CopiesEquivalence => copies_equivalence(m, depth, &mut out),
        Suite::ProjectionEquivalence => projection_equivalence(m, depth, &mut out),
        Suite::CopiesCpa => copies_cpa(m, &mut out),
        Suite::PriorRoundtrip => prior_roundtrip(m, &mut out),
        Suite::AgreementBound => agreement_bound(m, depth, &mut out),
        Suite::Knowledge => knowledge(m, depth, &mut out),
        Suite::KnowledgeAny => knowledge_any(m, depth, &mut out),
        Suite::SignalsCommon => signals(m, Mode::In, depth, &mut out),
        Suite::SignalsOutAi => signals(m, Mode::OutAi, depth, &mut out),
        Suite::SignalsInAi => signals(m, Mode::InAi, depth, &mut out),
        Suite::Labels => labels(m, depth, &mut out),
    };
    if let Err(e) = result {
        out.fail(format!("error: {e}"));
    }
    out
}

type Check = Result<(), Box<dyn std::error::Error>>;

fn family(m: &Structure, depth: usize) -> Vec<Formula> {
    formula_family(m.props(), m.n_players(), depth)
}

fn aumann(m: &Structure, out: &mut Outcome) -> Check {
    let report = aumann_check(m, &m.all_players())?;
    out.instances += report.formulas_checked as u64;
    if report.status != AumannStatus::Consistent {
        out.fail(format!("{:?}: {:?} {:?}", report.status, report.failures, report.findings.first()));
    }
    Ok(())
}

fn viewpoint_independence(m: &Structure, depth: usize, out: &mut Outcome) -> Check {
    let mut ev = Evaluator::new(m, Mode::In)?;
    for f in family(m, depth).iter().filter(|f| !reads_viewpoint(f)) {
        out.instances += 1;
        let first = ev.extension(f, PlayerId::from_index(0))?;
        for v in m.player_ids().skip(1) {
            if ev.extension(f, v)? != first {
                out.fail(format!("`{f}` differs between viewpoints 1 and {v}"));
                return Ok(());
            }
        }
    }
    Ok(())
}

/// The player of a formula whose outermost operator is a one-player
/// probability atom or belief.
fn atom_player(f: &Formula) -> Option<PlayerId> {
    match f {
        Formula::ProbGe { terms, .. } | Formula::ProbCmp { terms, .. } => {
            let p = terms.first()?.player;
            terms.iter().all(|t| t.player == p).then_some(p)
        }
        Formula::Believes(p, _) => Some(*p),
        _ => None,
    }
}

fn out_cell_union(m: &Structure, depth: usize, out: &mut Outcome) -> Check {
    let mut ev = Evaluator::new(m, Mode::Out)?;
    for f in family(m, depth) {
        let Some(j) = atom_player(&f) else { continue };
        for v in m.player_ids() {
            out.instances += 1;
            let e = ev.extension(&f, v)?;
            if m.partition(j).saturate(e) != e {
                out.fail(format!("[[{f}]] for viewpoint {v} splits a cell of player {j}"));
                return Ok(());
            }
        }
    }
    Ok(())
}

fn collapse(m: &Structure, depth: usize, out: &mut Outcome) -> Check {
    if !m.is_common_interpretation() {
        return Ok(());
    }
    let mut outer = Evaluator::new(m, Mode::Out)?;
    let mut inner = Evaluator::new(m, Mode::In)?;
    for f in family(m, depth) {
        for v in m.player_ids() {
            out.instances += 1;
            if outer.extension(&f, v)? != inner.extension(&f, v)? {
                out.fail(format!("`{f}` differs between out and in for viewpoint {v}"));
                return Ok(());
            }
        }
    }
    Ok(())
}

fn cb_unrolling(m: &Structure, out: &mut Outcome) -> Check {
    let group = m.all_players();
    let rounds = m.n_states() as u32 + 2;
    for mode in [Mode::Out, Mode::In] {
        let mut ev = Evaluator::new(m, mode)?;
        for (f, _) in propositional_formulas(m, 1) {
            let cb = Formula::common_belief(group.clone(), f.clone());
            for v in m.player_ids() {
                out.instances += 1;
                let fixpoint = ev.extension(&cb, v)?;
                let mut meet = m.omega();
                for k in 1..=rounds {
                    let eb = ev.extension(&Formula::everyone_believes(k, group.clone(), f.clone()), v)?;
                    if !fixpoint.is_subset(eb) {
                        out.fail(format!("{mode}: [[{cb}]] is not inside EB^{k} for viewpoint {v}"));
                        return Ok(());
                    }
                    meet = meet.intersect(eb);
                }
                if meet != fixpoint {
                    out.fail(format!("{mode}: [[{cb}]] differs from the meet of EB^1..EB^{rounds} for viewpoint {v}"));
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

fn copies_equivalence(m: &Structure, depth: usize, out: &mut Outcome) -> Check {
    let beliefs: Vec<Formula> = family(m, depth).into_iter().filter(|f| !mentions_knowledge(f)).collect();
    let (c, pairing) = disjoint_copies(m)?;
    let verdict = check_equivalent(m, &c, &pairing, Mode::In, Mode::In, &beliefs)?;
    out.instances += verdict.formulas_checked as u64;
    if let Some(w) = verdict.witness {
        out.fail(format!(
            "`{}` at {} for {}: {} in M, {} at {}",
            w.formula, w.left_state, w.left_viewpoint, w.left_value, w.right_value, w.right_state
        ));
    }
    Ok(())
}

fn projection_equivalence(m: &Structure, depth: usize, out: &mut Outcome) -> Check {
    let fam = family(m, depth);
    for i in m.player_ids() {
        let p = project_outermost(m, i)?;
        let verdict = check_equivalent(m, &p, &Pairing::identity_for(m, [i]), Mode::Out, Mode::In, &fam)?;
        out.instances += verdict.formulas_checked as u64;
        if let Some(w) = verdict.witness {
            out.fail(format!(
                "projection on {i}: `{}` at {}: {} out, {} projected",
                w.formula, w.left_state, w.left_value, w.right_value
            ));
            return Ok(());
        }
    }
    Ok(())
}

fn copies_cpa(m: &Structure, out: &mut Outcome) -> Check {
    let nondegenerate = m.player_ids().any(|i| m.posteriors(i).iter().any(|d| d.support().len() > 1));
    if m.n_players() < 2 || !nondegenerate || !check_cpa(m)?.passed {
        return Ok(());
    }
    out.instances += 1;
    let (c, _) = disjoint_copies(m)?;
    if check_cpa(&c)?.passed {
        out.fail("disjoint copies still satisfy the common prior assumption".into());
    }
    Ok(())
}

fn prior_roundtrip(m: &Structure, out: &mut Outcome) -> Check {
    let priors = generate_priors(m);
    let report = check_prior_generated(m, &priors);
    out.instances += report.players.iter().map(|p| p.cells.len() as u64).sum::<u64>();
    if !report.passed || report.unconstrained != 0 {
        out.fail(format!("generated priors do not generate the posteriors: {report:?}"));
        return Ok(());
    }
    for (i, nu) in m.player_ids().zip(&priors) {
        let share = Rational::new(1, m.partition(i).len() as i64);
        if nu.total() != Rational::one() {
            out.fail(format!("prior of player {i} sums to {}", nu.total()));
            return Ok(());
        }
        for cell in m.partition(i).cells() {
            if nu.mass(*cell) != share {
                out.fail(format!(
                    "cell {:?} of player {i} has mass {}, expected {share}",
                    m.event_names(*cell),
                    nu.mass(*cell)
                ));
                return Ok(());
            }
        }
    }
    Ok(())
}

fn grid() -> Vec<Rational> {
    THRESHOLDS.iter().map(|&(n, d)| Rational::new(n, d)).collect()
}

fn agreement_bound(m: &Structure, depth: usize, out: &mut Outcome) -> Check {
    if !check_cpa(m)?.passed {
        return Ok(());
    }
    let nu = m.prior(PlayerId::from_index(0)).expect("checked").clone();
    let group = m.all_players();
    let mut ev = Evaluator::new(m, Mode::In)?;
    let mut scanned = 0;
    for (f, exts) in propositional_formulas(m, depth) {
        let disagree = exts
            .iter()
            .fold(Event::EMPTY, |acc, e| acc.union(*e))
            .minus(exts.iter().fold(m.omega(), |acc, e| acc.intersect(*e)));
        let eps = nu.mass(disagree);
        for lower in grid() {
            for upper in grid().into_iter().filter(|u| *u > &lower + &eps) {
                out.instances += 1;
                if let Some(w) = scan_agreement(&mut ev, &group, &f, &lower, &upper, &mut scanned)? {
                    out.fail(format!(
                        "`{f}` (ε = {eps}): CB(Pr_{}(f) < {lower} & Pr_{}(f) > {upper}) at {}",
                        w.i, w.j, w.state
                    ));
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

fn knowledge(m: &Structure, depth: usize, out: &mut Outcome) -> Check {
    if !m.is_common_interpretation() {
        return Ok(());
    }
    for mode in [Mode::Out, Mode::In] {
        let mut ev = Evaluator::new(m, mode)?;
        for f in family(m, depth) {
            for i in m.player_ids() {
                out.instances += 1;
                let axiom = Formula::implies(Formula::knows(i, f.clone()), f.clone());
                if !ev.valid(&axiom)? {
                    out.fail(format!("{mode}: `{axiom}` is not valid"));
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

fn knowledge_any(m: &Structure, depth: usize, out: &mut Outcome) -> Check {
    let mut ev = Evaluator::new(m, Mode::In)?;
    for f in family(m, depth) {
        out.instances += 1;
        let axiom = m
            .player_ids()
            .map(|i| Formula::implies(Formula::knows(i, f.clone()), f.clone()))
            .reduce(Formula::or)
            .expect("at least one player");
        if !ev.valid(&axiom)? {
            out.fail(format!("`{axiom}` is not valid"));
            return Ok(());
        }
        let single = m.player_ids().any(|i| {
            let k = Formula::implies(Formula::knows(i, f.clone()), f.clone());
            !ev.valid(&k).unwrap_or(true)
        });
        out.positive += u64::from(single);
    }
    Ok(())
}

/// The signal propositions, in the mode each one is stated for.
fn signals(m: &Structure, mode: Mode, depth: usize, out: &mut Outcome) -> Check {
    if m.signals().is_none() || !check_cpa(m)?.passed {
        return Ok(());
    }
    let required = match mode {
        Mode::In => m.is_common_interpretation(),
        _ => validate_ai(m, mode)?.passed(),
    };
    if !required {
        return Ok(());
    }
    let mut ev = Evaluator::new(m, mode)?;
    for name in m.signal_names() {
        for s in 0..m.n_states() {
            if !m.player_ids().all(|i| m.signal(i, s) == Some(name.as_str())) {
                continue;
            }
            out.instances += 1;
            let report = classify_signal_with(&mut ev, &name, s)?;
            let at = format!("signal {name} at {}", m.state_name(s));
            match mode {
                Mode::OutAi => {
                    for flags in &report.viewpoints {
                        if flags.public != flags.shared {
                            out.fail(format!(
                                "{at}, viewpoint {}: public {} but shared {}",
                                flags.viewpoint, flags.public, flags.shared
                            ));
                            return Ok(());
                        }
                        if !flags.public {
                            continue;
                        }
                        out.positive += 1;
                        for i in m.player_ids() {
                            for j in m.player_ids().filter(|&j| j > i) {
                                let cmp = compare_posteriors_formulas_with(
                                    &mut ev,
                                    s,
                                    i,
                                    j,
                                    depth.min(2),
                                    Some(flags.viewpoint),
                                )?;
                                if let Some(w) = cmp.witness {
                                    out.fail(format!(
                                        "{at}, viewpoint {}: Pr_{i}({}) = {} but Pr_{j} = {}",
                                        flags.viewpoint, w.formula, w.left, w.right
                                    ));
                                    return Ok(());
                                }
                            }
                        }
                    }
                }
                _ => {
                    let other = if mode == Mode::In { report.shared } else { report.strongly_shared };
                    if report.public != other {
                        out.fail(format!(
                            "{at} ({mode}): public {} but {} {other}",
                            report.public,
                            if mode == Mode::In { "shared" } else { "strongly shared" }
                        ));
                        return Ok(());
                    }
                    if !report.public {
                        continue;
                    }
                    out.positive += 1;
                    for i in m.player_ids() {
                        for j in m.player_ids().filter(|&j| j > i) {
                            let cmp = compare_posteriors_events(m, s, i, j)?;
                            if let Some(w) = cmp.witness {
                                out.fail(format!(
                                    "{at}: posteriors of {i} and {j} differ on {:?}: {} vs {}",
                                    w.event, w.left, w.right
                                ));
                                return Ok(());
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn labels(m: &Structure, depth: usize, out: &mut Outcome) -> Check {
    let (labelled, pairing) = add_cell_labels(m, 0)?;
    out.instances += 1;
    if !validate(&labelled).passed() {
        out.fail("labelled structure fails validation".into());
        return Ok(());
    }
    let ai = validate_ai(&labelled, Mode::OutAi)?;
    if !ai.passed() {
        out.fail(format!("labelled structure fails A5/A6: {ai:?}"));
        return Ok(());
    }
    let fam = family(m, depth);
    for mode in [Mode::Out, Mode::In] {
        let verdict = check_equivalent_on(m, &labelled, &pairing, mode, mode, &fam)?;
        out.instances += verdict.formulas_checked as u64;
        if let Some(w) = verdict.witness {
            out.fail(format!("{mode}: `{}` changed at {}", w.formula, w.left_state));
            return Ok(());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{}\"", s.name()));
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn seed_ranges() {
        assert_eq!("1..200".parse::<SeedRange>().unwrap(), SeedRange::new(1, 200));
        assert_eq!("3..=4".parse::<SeedRange>().unwrap().len(), 2);
        assert_eq!("7".parse::<SeedRange>().unwrap().len(), 1);
        assert!("5..2".parse::<SeedRange>().is_err());
        assert!("x..2".parse::<SeedRange>().is_err());
    }

    #[test]
    fn every_suite_passes_a_few_seeds() {
        for s in Suite::ALL {
            let report = run_sweep(s, SeedRange::new(1, 5), 1);
            assert!(report.passed(), "{s}: {:?}", report.witness);
            assert_eq!(report.structures, 5);
        }
    }
}
