//! Agreement analyses: how ambiguous a formula is, whether players can
//! commonly believe they disagree, when signals make beliefs coincide.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{check_cpa, reachable, recv_prop, Distribution, Event, ModelError, Structure};
use crate::rational::Rational;
use crate::semantics::{EvalError, Evaluator, Mode};
use crate::syntax::{CmpOp, Formula, Group, PlayerId};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("formula `{0}` is not propositional")]
    NotPropositional(String),
    #[error("the structure has no signals")]
    MissingSignals,
    #[error("signal `{0}` is never received")]
    UnknownSignal(String),
    #[error("player {0} is not in this structure")]
    UnknownPlayer(PlayerId),
    #[error("a group needs at least one player")]
    EmptyGroup,
}

fn check_group(m: &Structure, group: &Group) -> Result<(), AnalysisError> {
    if group.is_empty() {
        return Err(AnalysisError::EmptyGroup);
    }
    check_players(m, group.iter().copied())
}

fn check_players(m: &Structure, players: impl IntoIterator<Item = PlayerId>) -> Result<(), AnalysisError> {
    for p in players {
        if p.index() >= m.n_players() {
            return Err(AnalysisError::UnknownPlayer(p));
        }
    }
    Ok(())
}

/// Propositional formulas over the vocabulary, built from `true` and the
/// primitive propositions by up to `depth` rounds of negation and
/// conjunction. Formulas whose extensions (for every player) repeat an
/// earlier formula's are dropped, so each entry is a distinct vector of
/// per-player extensions.
pub fn propositional_formulas(m: &Structure, depth: usize) -> Vec<(Formula, Vec<Event>)> {
    let mut seen: HashSet<Vec<Event>> = HashSet::new();
    let mut out: Vec<(Formula, Vec<Event>)> = Vec::new();
    let key = |f: &Formula| -> Vec<Event> {
        m.player_ids().map(|i| m.propositional_extension(i, f).expect("formulas use the vocabulary")).collect()
    };
    let mut push = |f: Formula, out: &mut Vec<(Formula, Vec<Event>)>| {
        let k = key(&f);
        if seen.insert(k.clone()) {
            out.push((f, k));
        }
    };
    push(Formula::True, &mut out);
    for p in m.props() {
        push(Formula::Prim(p.clone()), &mut out);
    }
    for _ in 0..depth {
        let previous: Vec<Formula> = out.iter().map(|(f, _)| f.clone()).collect();
        for f in &previous {
            push(Formula::not(f.clone()), &mut out);
        }
        for (a, f) in previous.iter().enumerate() {
            for g in &previous[a + 1..] {
                push(Formula::and(f.clone(), g.clone()), &mut out);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguityReport {
    pub formula: Formula,
    pub epsilon: Rational,
    pub disagreement_event: Vec<String>,
}

/// States where some two players disagree on a propositional formula.
pub fn disagreement_event(m: &Structure, f: &Formula) -> Result<Event, AnalysisError> {
    if !f.is_propositional() {
        return Err(AnalysisError::NotPropositional(f.to_string()));
    }
    let mut some = Event::EMPTY;
    let mut all = m.omega();
    for i in m.player_ids() {
        let e = m.propositional_extension(i, f)?;
        some = some.union(e);
        all = all.intersect(e);
    }
    Ok(some.minus(all))
}

/// The prior mass `ε` of the states where players disagree on `f`.
pub fn ambiguity_measure(m: &Structure, prior: &Distribution, f: &Formula) -> Result<AmbiguityReport, AnalysisError> {
    let d = disagreement_event(m, f)?;
    Ok(AmbiguityReport { formula: f.clone(), epsilon: prior.mass(d), disagreement_event: m.event_names(d) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AgreementStatus {
    /// No state has common belief of the disagreement.
    Consistent,
    /// `b' ≤ b + ε`, so the bound says nothing.
    Vacuous,
    /// The common prior assumption fails or `f` is not propositional.
    Precondition,
    /// Common belief of the disagreement at a state reaching every state.
    Violation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementWitness {
    pub i: PlayerId,
    pub j: PlayerId,
    pub state: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub status: AgreementStatus,
    pub formula: Formula,
    pub lower: Rational,
    pub upper: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Rational>,
    pub failures: Vec<String>,
    /// States `ω` with `R_G(ω) = Ω` that were scanned.
    pub states_scanned: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<AgreementWitness>,
}

/// `CB_G(Pr_i(f) < lower & Pr_j(f) > upper)`.
pub fn disagreement_formula(
    group: &Group,
    i: PlayerId,
    j: PlayerId,
    f: &Formula,
    lower: &Rational,
    upper: &Rational,
) -> Formula {
    Formula::common_belief(
        group.clone(),
        Formula::and(
            Formula::prob(i, f.clone(), Some(CmpOp::Lt), lower.clone()),
            Formula::prob(j, f.clone(), Some(CmpOp::Gt), upper.clone()),
        ),
    )
}

/// Scans for common belief, under innermost scope, that player `i` gives
/// `f` probability below `lower` while player `j` gives it more than
/// `upper`, at states from which all of `Ω` is `G`-reachable. Under the
/// common prior assumption with `upper > lower + ε` no such state should
/// exist.
pub fn check_agreement_bound(
    m: &Structure,
    group: &Group,
    f: &Formula,
    lower: &Rational,
    upper: &Rational,
) -> Result<AgreementReport, AnalysisError> {
    check_group(m, group)?;
    let mut report = AgreementReport {
        status: AgreementStatus::Precondition,
        formula: f.clone(),
        lower: lower.clone(),
        upper: upper.clone(),
        epsilon: None,
        failures: vec![],
        states_scanned: 0,
        witness: None,
    };
    if !f.is_propositional() {
        report.failures.push(format!("`{f}` is not propositional"));
    }
    match check_cpa(m) {
        Err(e) => report.failures.push(e.to_string()),
        Ok(cpa) => report.failures.extend(cpa.clauses.into_iter().filter_map(|c| c.failure)),
    }
    if !report.failures.is_empty() {
        return Ok(report);
    }
    let nu = m.prior(PlayerId::from_index(0)).expect("checked by the common prior test").clone();
    let eps = ambiguity_measure(m, &nu, f)?.epsilon;
    report.epsilon = Some(eps.clone());
    if *upper <= lower + &eps {
        report.status = AgreementStatus::Vacuous;
        return Ok(report);
    }
    let mut ev = Evaluator::new(m, Mode::In)?;
    report.status = AgreementStatus::Consistent;
    report.witness = scan_agreement(&mut ev, group, f, lower, upper, &mut report.states_scanned)?;
    if report.witness.is_some() {
        report.status = AgreementStatus::Violation;
    }
    Ok(report)
}

/// The scan behind [`check_agreement_bound`], with preconditions assumed.
pub fn scan_agreement(
    ev: &mut Evaluator<'_>,
    group: &Group,
    f: &Formula,
    lower: &Rational,
    upper: &Rational,
    states_scanned: &mut usize,
) -> Result<Option<AgreementWitness>, AnalysisError> {
    let m = ev.structure();
    let roots: Vec<usize> = (0..m.n_states()).filter(|&s| reachable(m, group, s) == m.omega()).collect();
    *states_scanned += roots.len();
    if roots.is_empty() {
        return Ok(None);
    }
    for &i in group {
        for &j in group {
            let g = disagreement_formula(group, i, j, f, lower, upper);
            let e = ev.extension(&g, i)?;
            if let Some(&s) = roots.iter().find(|&&s| e.contains(s)) {
                return Ok(Some(AgreementWitness { i, j, state: m.state_name(s).to_string() }));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewpointFlags {
    pub viewpoint: PlayerId,
    pub public: bool,
    pub shared: bool,
    pub strongly_shared: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignalReport {
    pub signal: String,
    pub state: String,
    pub mode: Mode,
    /// Every player receives the signal at the state.
    pub common: bool,
    pub public: bool,
    pub shared: bool,
    pub strongly_shared: bool,
    /// The flags as each player evaluates them; the flags above hold when
    /// they hold for every viewpoint.
    pub viewpoints: Vec<ViewpointFlags>,
}

/// The formulas defining public, shared and the extra strongly shared clause.
pub fn signal_formulas(m: &Structure, signal: &str) -> (Formula, Formula, Formula) {
    let all = m.all_players();
    let recv = |i: PlayerId| Formula::Prim(recv_prop(i, signal));
    let public = Formula::common_belief(all.clone(), Formula::conjunction(m.player_ids().map(recv)));
    let mut shared = Vec::new();
    let mut strong = Vec::new();
    for i in m.player_ids() {
        for j in m.player_ids() {
            shared.push(Formula::common_belief(all.clone(), Formula::iff(recv(i), recv(j))));
            strong.push(Formula::common_belief(
                all.clone(),
                Formula::iff(Formula::believes(i, recv(i)), Formula::believes(j, recv(j))),
            ));
        }
    }
    (public, Formula::conjunction(shared), Formula::conjunction(strong))
}

/// Whether `signal` is common, public, shared and strongly shared at `state`.
pub fn classify_signal(m: &Structure, signal: &str, state: usize, mode: Mode) -> Result<SignalReport, AnalysisError> {
    let mut ev = Evaluator::new(m, mode)?;
    classify_signal_with(&mut ev, signal, state)
}

pub fn classify_signal_with(ev: &mut Evaluator<'_>, signal: &str, state: usize) -> Result<SignalReport, AnalysisError> {
    let m = ev.structure();
    if m.signals().is_none() {
        return Err(AnalysisError::MissingSignals);
    }
    if !m.signal_names().iter().any(|s| s == signal) {
        return Err(AnalysisError::UnknownSignal(signal.to_string()));
    }
    let common = m.player_ids().all(|i| m.signal(i, state) == Some(signal));
    let (public, shared, strong) = signal_formulas(m, signal);
    let mut viewpoints = Vec::new();
    for v in m.player_ids() {
        let public = ev.eval(&public, state, v)?;
        let shared = ev.eval(&shared, state, v)?;
        let strongly_shared = shared && ev.eval(&strong, state, v)?;
        viewpoints.push(ViewpointFlags { viewpoint: v, public, shared, strongly_shared });
    }
    Ok(SignalReport {
        signal: signal.to_string(),
        state: m.state_name(state).to_string(),
        mode: ev.mode(),
        common,
        public: viewpoints.iter().all(|f| f.public),
        shared: viewpoints.iter().all(|f| f.shared),
        strongly_shared: viewpoints.iter().all(|f| f.strongly_shared),
        viewpoints,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventWitness {
    pub event: Vec<String>,
    pub left: Rational,
    pub right: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventComparison {
    pub state: String,
    pub i: PlayerId,
    pub j: PlayerId,
    pub equal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<EventWitness>,
}

/// Compares the posteriors `μ_{i,ω}` and `μ_{j,ω}` as measures on `Ω`. A
/// difference always shows on a singleton; the first one is reported.
pub fn compare_posteriors_events(
    m: &Structure,
    state: usize,
    i: PlayerId,
    j: PlayerId,
) -> Result<EventComparison, AnalysisError> {
    check_players(m, [i, j])?;
    let (a, b) = (m.posterior(i, state), m.posterior(j, state));
    let witness = (0..m.n_states()).find(|&s| a.get(s) != b.get(s)).map(|s| EventWitness {
        event: vec![m.state_name(s).to_string()],
        left: a.get(s).clone(),
        right: b.get(s).clone(),
    });
    Ok(EventComparison { state: m.state_name(state).to_string(), i, j, equal: witness.is_none(), witness })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaWitness {
    pub formula: Formula,
    /// The evaluating player, for modes where nested formulas are read by
    /// the evaluator rather than the believer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub viewpoint: Option<PlayerId>,
    pub left: Rational,
    pub right: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaComparison {
    pub state: String,
    pub i: PlayerId,
    pub j: PlayerId,
    pub mode: Mode,
    pub depth: usize,
    pub formulas_checked: usize,
    pub equal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<FormulaWitness>,
}

/// Compares the probabilities players `i` and `j` give propositional
/// formulas at `state`.
///
/// Under innermost scope each player reads the formula themselves:
/// `Pr_i(ψ)` as read by `i` against `Pr_j(ψ)` as read by `j`. Under
/// outermost scope both probabilities are computed for one evaluating
/// player `k`, who reads `ψ` for both; every `k` is compared and
/// [`FormulaComparison::equal`] means equal for all of them.
pub fn compare_posteriors_formulas(
    m: &Structure,
    state: usize,
    i: PlayerId,
    j: PlayerId,
    mode: Mode,
    depth: usize,
) -> Result<FormulaComparison, AnalysisError> {
    let mut ev = Evaluator::new(m, mode)?;
    compare_posteriors_formulas_with(&mut ev, state, i, j, depth, None)
}

/// As [`compare_posteriors_formulas`], restricted to one evaluating player
/// under outermost scope when `only` is given.
pub fn compare_posteriors_formulas_with(
    ev: &mut Evaluator<'_>,
    state: usize,
    i: PlayerId,
    j: PlayerId,
    depth: usize,
    only: Option<PlayerId>,
) -> Result<FormulaComparison, AnalysisError> {
    let m = ev.structure();
    check_players(m, [i, j])?;
    let mode = ev.mode();
    let formulas = propositional_formulas(m, depth);
    let viewpoints: Vec<Option<PlayerId>> = if mode.is_inner() {
        vec![None]
    } else {
        match only {
            Some(k) => vec![Some(k)],
            None => m.player_ids().map(Some).collect(),
        }
    };
    let mut witness = None;
    'search: for (f, _) in &formulas {
        for &k in &viewpoints {
            let left = ev.prob_value(state, k.unwrap_or(i), i, f)?;
            let right = ev.prob_value(state, k.unwrap_or(j), j, f)?;
            if left != right {
                witness = Some(FormulaWitness { formula: f.clone(), viewpoint: k, left, right });
                break 'search;
            }
        }
    }
    Ok(FormulaComparison {
        state: m.state_name(state).to_string(),
        i,
        j,
        mode,
        depth,
        formulas_checked: formulas.len(),
        equal: witness.is_none(),
        witness,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AumannStatus {
    /// Preconditions hold and no disagreement is commonly believed.
    Consistent,
    /// Preconditions hold yet a disagreement is commonly believed.
    Violation,
    /// Preconditions fail and a disagreement is commonly believed.
    AmbiguityEscape,
    /// Preconditions fail and no disagreement is commonly believed.
    PreconditionFailed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AumannFinding {
    pub state: String,
    pub i: PlayerId,
    pub j: PlayerId,
    pub formula: Formula,
    pub a: Rational,
    pub c: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AumannReport {
    pub status: AumannStatus,
    pub failures: Vec<String>,
    pub formulas_checked: usize,
    pub findings: Vec<AumannFinding>,
}

/// Scans for common belief of differing posteriors: at each state, for
/// each propositional formula `f` up to depth 2 and players `i`, `j` in the
/// group, with `a` and `c` their innermost-scope probabilities of `f`,
/// whether `CB_G(Pr_i(f) = a & Pr_j(f) = c)` holds while `a ≠ c`.
///
/// The scan runs even when the structure lacks a common interpretation or
/// common prior; findings are then labelled as escapes rather than
/// violations.
pub fn aumann_check(m: &Structure, group: &Group) -> Result<AumannReport, AnalysisError> {
    check_group(m, group)?;
    let mut failures = Vec::new();
    if !m.is_common_interpretation() {
        failures.push("players interpret propositions differently".to_string());
    }
    match check_cpa(m) {
        Err(e) => failures.push(e.to_string()),
        Ok(cpa) => failures.extend(cpa.clauses.into_iter().filter_map(|c| c.failure)),
    }
    let mut ev = Evaluator::new(m, Mode::In)?;
    let (findings, formulas_checked) = aumann_scan(&mut ev, group, 2, false)?;
    let status = match (failures.is_empty(), findings.is_empty()) {
        (true, true) => AumannStatus::Consistent,
        (true, false) => AumannStatus::Violation,
        (false, false) => AumannStatus::AmbiguityEscape,
        (false, true) => AumannStatus::PreconditionFailed,
    };
    Ok(AumannReport { status, failures, formulas_checked, findings })
}

/// The scan behind [`aumann_check`]. Stops at the first finding when
/// `first_only` is set.
pub fn aumann_scan(
    ev: &mut Evaluator<'_>,
    group: &Group,
    depth: usize,
    first_only: bool,
) -> Result<(Vec<AumannFinding>, usize), AnalysisError> {
    let m = ev.structure();
    let formulas = propositional_formulas(m, depth);
    let mut findings = Vec::new();
    for s in 0..m.n_states() {
        for (f, _) in &formulas {
            for &i in group {
                for &j in group.iter().filter(|&&j| j > i) {
                    let a = ev.prob_value(s, i, i, f)?;
                    let c = ev.prob_value(s, j, j, f)?;
                    if a == c {
                        continue;
                    }
                    let g = Formula::common_belief(
                        group.clone(),
                        Formula::and(
                            Formula::prob(i, f.clone(), Some(CmpOp::Eq), a.clone()),
                            Formula::prob(j, f.clone(), Some(CmpOp::Eq), c.clone()),
                        ),
                    );
                    if ev.eval(&g, s, i)? {
                        findings.push(AumannFinding {
                            state: m.state_name(s).to_string(),
                            i,
                            j,
                            formula: f.clone(),
                            a,
                            c,
                        });
                        if first_only {
                            return Ok((findings, formulas.len()));
                        }
                    }
                }
            }
        }
    }
    Ok((findings, formulas.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::syntax::{group, parse};

    fn f(text: &str) -> Formula {
        parse(text).unwrap()
    }

    #[test]
    fn ambiguity_of_atd() {
        let m = load("atd");
        let nu = m.prior(pl(1)).unwrap();
        assert_eq!(ambiguity_measure(&m, nu, &f("p")).unwrap().epsilon, r("1"));
        assert_eq!(ambiguity_measure(&m, nu, &Formula::True).unwrap().epsilon, r("0"));
        assert!(matches!(ambiguity_measure(&m, nu, &f("B_1(p)")), Err(AnalysisError::NotPropositional(_))));
        let m = load("example2");
        assert_eq!(ambiguity_measure(&m, m.prior(pl(1)).unwrap(), &f("p & !q")).unwrap().epsilon, r("0"));
    }

    #[test]
    fn agreement_bound_statuses() {
        let m = load("atd");
        let g = group(&[1, 2]);
        let report = check_agreement_bound(&m, &g, &f("p"), &r("1/2"), &r("3/2")).unwrap();
        assert_eq!(report.status, AgreementStatus::Vacuous);
        assert_eq!(report.epsilon, Some(r("1")));
        let report = check_agreement_bound(&load("no_equiv"), &group(&[2, 3]), &f("p"), &r("0"), &r("1")).unwrap();
        assert_eq!(report.status, AgreementStatus::Precondition);
        assert!(report.failures[0].starts_with("priors differ"));
        let m = load("example2");
        let report = check_agreement_bound(&m, &g, &f("p"), &r("1/4"), &r("3/4")).unwrap();
        assert_eq!(report.status, AgreementStatus::Consistent);
        assert_eq!(report.states_scanned, 3);
    }

    #[test]
    fn example2_signal() {
        let m = load("example2");
        let w1 = m.state("w1").unwrap();
        for mode in Mode::ALL {
            let report = classify_signal(&m, "s", w1, mode).unwrap();
            assert!(report.common, "{mode}");
            assert!(!report.public, "{mode}");
            assert!(!report.shared, "{mode}");
        }
        assert!(matches!(classify_signal(&m, "t", w1, Mode::In), Err(AnalysisError::UnknownSignal(_))));
        assert!(matches!(classify_signal(&load("atd"), "s", 0, Mode::In), Err(AnalysisError::MissingSignals)));
    }

    #[test]
    fn critical_signal_is_shared_not_public() {
        let m = load("critical");
        let report = classify_signal(&m, "s", m.state("w11").unwrap(), Mode::InAi).unwrap();
        assert!(report.common && report.shared && !report.public && !report.strongly_shared);
    }

    #[test]
    fn example2_posteriors() {
        let m = load("example2");
        let w1 = m.state("w1").unwrap();
        let report = compare_posteriors_events(&m, w1, pl(1), pl(2)).unwrap();
        assert!(!report.equal);
        let w = report.witness.unwrap();
        assert_eq!((w.event, w.left, w.right), (vec!["w2".to_string()], r("1/2"), r("0")));
        assert!(compare_posteriors_events(&m, w1, pl(2), pl(2)).unwrap().equal);
        for mode in Mode::ALL {
            assert!(compare_posteriors_formulas(&m, w1, pl(1), pl(1), mode, 2).unwrap().equal);
        }
    }

    #[test]
    fn critical_formula_posteriors_differ() {
        let m = load("critical");
        let report = compare_posteriors_formulas(&m, m.state("w11").unwrap(), pl(1), pl(2), Mode::InAi, 1).unwrap();
        assert!(!report.equal);
        let w = report.witness.unwrap();
        assert_eq!(w.formula, f("p"));
        assert_eq!((w.left, w.right), (r("1"), r("1/2")));
    }

    #[test]
    fn aumann_on_fixtures() {
        let g = group(&[1, 2]);
        let report = aumann_check(&load("example2"), &g).unwrap();
        assert_eq!(report.status, AumannStatus::Consistent);
        let report = aumann_check(&load("atd"), &g).unwrap();
        assert_eq!(report.status, AumannStatus::AmbiguityEscape);
        let finding = &report.findings[0];
        assert_eq!((finding.formula.clone(), finding.a.clone(), finding.c.clone()), (f("p"), r("1"), r("0")));
    }

    #[test]
    fn propositional_family_is_deduplicated() {
        let m = load("atd");
        let fs = propositional_formulas(&m, 2);
        // Over one state and two readings of p there are four extension vectors.
        assert_eq!(fs.len(), 4);
        assert_eq!(fs[0].0, Formula::True);
    }
}
