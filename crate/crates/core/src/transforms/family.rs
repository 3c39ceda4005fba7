use indexmap::IndexSet;

use crate::rational::Rational;
use crate::syntax::{Formula, Group, PlayerId, PropId};

/// Probability thresholds used by [`formula_family`].
pub const THRESHOLDS: [(i64, i64); 5] = [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)];

/// A finite probe set of formulas, in a fixed order without repeats.
///
/// Level 0 is `true` followed by `p, !p` for each proposition. Each further
/// level wraps every formula `f` built so far as `!f` (unless `f` is a
/// negation), `B_i(f)`, `K_i(f)` and `Pr_i(f) >= t` for each player and
/// threshold, `CB_N(f)`, and `f & g` for each level-0 formula `g` placed
/// before `f`.
pub fn formula_family(props: &[PropId], players: usize, depth: usize) -> Vec<Formula> {
    let mut base = vec![Formula::True];
    for p in props {
        base.push(Formula::Prim(p.clone()));
        base.push(Formula::not(Formula::Prim(p.clone())));
    }
    let mut out: IndexSet<Formula> = base.iter().cloned().collect();
    let everyone: Group = (0..players).map(PlayerId::from_index).collect();
    for _ in 0..depth {
        let current: Vec<Formula> = out.iter().cloned().collect();
        for (k, f) in current.iter().enumerate() {
            if !matches!(f, Formula::Not(_)) {
                out.insert(Formula::not(f.clone()));
            }
            for i in (0..players).map(PlayerId::from_index) {
                out.insert(Formula::believes(i, f.clone()));
                out.insert(Formula::knows(i, f.clone()));
                for (n, d) in THRESHOLDS {
                    out.insert(Formula::prob(i, f.clone(), None, Rational::new(n, d)));
                }
            }
            if players > 0 {
                out.insert(Formula::common_belief(everyone.clone(), f.clone()));
            }
            for g in base.iter().take(k.min(base.len())) {
                out.insert(Formula::and(f.clone(), g.clone()));
            }
        }
    }
    out.into_iter().collect()
}

/// Whether the formula has a proposition outside every belief, knowledge
/// and probability operator. Only such formulas can have innermost-scope
/// extensions that depend on the viewpoint.
pub fn reads_viewpoint(f: &Formula) -> bool {
    match f {
        Formula::Prim(_) => true,
        Formula::True => false,
        Formula::Not(a) => reads_viewpoint(a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            reads_viewpoint(a) || reads_viewpoint(b)
        }
        Formula::ProbGe { .. }
        | Formula::ProbCmp { .. }
        | Formula::Believes(..)
        | Formula::Knows(..)
        | Formula::CommonBelief { .. }
        | Formula::EveryoneBelieves { .. } => false,
    }
}

/// Whether `K_i` occurs anywhere in the formula.
pub fn mentions_knowledge(f: &Formula) -> bool {
    matches!(f, Formula::Knows(..)) || f.children().into_iter().any(mentions_knowledge)
}
