//! Truth relations.
//!
//! Four semantics share one evaluator and differ only in how a probability
//! term `Pr_j(φ)` is read at state `ω` by the evaluating player `i`:
//!
//! | mode    | measure                                   | `φ` read by |
//! |---------|-------------------------------------------|-------------|
//! | `Out`   | `μ_{j,ω}([[φ]]_i ∩ Π_j(ω))`               | `i`         |
//! | `In`    | `μ_{j,ω}([[φ]]_j ∩ Π_j(ω))`               | `j`         |
//! | `OutAi` | `ν_j([[φ]]_i \| [[φ_{j,ω}]]_i)`           | `i`         |
//! | `InAi`  | `ν_j([[φ]]_j \| [[φ_{j,ω}]]_j)`           | `j`         |
//!
//! where `φ_{j,ω}` is the label of `j`'s cell. `K_j φ` holds where `j`'s
//! whole cell lies inside the extension of `φ`, read by the same player as
//! the probability terms.

pub mod arena;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Distribution, Event, Structure};
use crate::rational::Rational;
use crate::syntax::{Formula, Group, PlayerId};
use arena::{Arena, Node, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Out,
    In,
    OutAi,
    InAi,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Out, Mode::In, Mode::OutAi, Mode::InAi];

    /// Nested arguments are read by the believing player.
    pub fn is_inner(self) -> bool {
        matches!(self, Mode::In | Mode::InAi)
    }

    /// Beliefs come from priors conditioned on cell labels.
    pub fn is_ai(self) -> bool {
        matches!(self, Mode::OutAi | Mode::InAi)
    }

    /// The player whose interpretation reads the argument of `Pr_j` or
    /// `K_j` when `viewpoint` evaluates.
    pub fn reader(self, viewpoint: PlayerId, j: PlayerId) -> PlayerId {
        if self.is_inner() {
            j
        } else {
            viewpoint
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Mode::Out => "out",
            Mode::In => "in",
            Mode::OutAi => "out-ai",
            Mode::InAi => "in-ai",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "out" => Ok(Mode::Out),
            "in" => Ok(Mode::In),
            "out-ai" => Ok(Mode::OutAi),
            "in-ai" => Ok(Mode::InAi),
            _ => Err(format!("unknown mode `{s}` (expected out, in, out-ai or in-ai)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(
        "conditioning undefined: ν_{player} gives zero mass to player {viewpoint}'s reading of the label of player {player}'s cell at `{state}`"
    )]
    ConditioningUndefined { player: PlayerId, state: String, viewpoint: PlayerId },
    #[error("unknown proposition `{0}`")]
    UnknownProposition(String),
    #[error("player {0} is not in this structure")]
    UnknownPlayer(PlayerId),
    #[error("mode {0} needs priors in the model")]
    MissingPriors(Mode),
    #[error("mode {0} needs cell labels in the model")]
    MissingLabels(Mode),
}

/// An evaluation session over one structure and mode.
///
/// Extensions are memoized per (core node, viewpoint), so a session can be
/// reused across many formulas that share subformulas.
pub struct Evaluator<'m> {
    m: &'m Structure,
    mode: Mode,
    arena: Arena,
    /// `memo[node * players + viewpoint]`.
    memo: Vec<Option<Event>>,
    /// For ai modes, `ν_j(· | [[label]]_v)` indexed by `[j][cell][v]`.
    conditioned: Vec<Vec<Vec<Option<Distribution>>>>,
}

impl<'m> Evaluator<'m> {
    pub fn new(m: &'m Structure, mode: Mode) -> Result<Self, EvalError> {
        let mut conditioned = Vec::new();
        if mode.is_ai() {
            let priors = m.priors().ok_or(EvalError::MissingPriors(mode))?;
            let labels = m.cell_labels().ok_or(EvalError::MissingLabels(mode))?;
            for j in m.player_ids() {
                let nu = &priors[j.index()];
                let per_cell = labels[j.index()]
                    .iter()
                    .map(|label| {
                        m.player_ids()
                            .map(|v| {
                                let given = m.propositional_extension(v, label).expect("labels are checked on load");
                                nu.condition(given)
                            })
                            .collect()
                    })
                    .collect();
                conditioned.push(per_cell);
            }
        }
        Ok(Evaluator { m, mode, arena: Arena::new(), memo: Vec::new(), conditioned })
    }

    pub fn structure(&self) -> &'m Structure {
        self.m
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    fn check(&self, f: &Formula) -> Result<(), EvalError> {
        let player = |p: PlayerId| self.check_player(p);
        match f {
            Formula::Prim(p) if self.m.prop_index(p).is_none() => {
                return Err(EvalError::UnknownProposition(p.to_string()))
            }
            Formula::ProbGe { terms, .. } | Formula::ProbCmp { terms, .. } => {
                for t in terms {
                    player(t.player)?;
                }
            }
            Formula::Believes(i, _) | Formula::Knows(i, _) => player(*i)?,
            Formula::CommonBelief { group, .. } | Formula::EveryoneBelieves { group, .. } => {
                for &i in group {
                    player(i)?;
                }
            }
            _ => {}
        }
        for c in f.children() {
            self.check(c)?;
        }
        Ok(())
    }

    fn check_player(&self, p: PlayerId) -> Result<(), EvalError> {
        if p.index() < self.m.n_players() {
            Ok(())
        } else {
            Err(EvalError::UnknownPlayer(p))
        }
    }

    /// `[[f]]_viewpoint`.
    pub fn extension(&mut self, f: &Formula, viewpoint: PlayerId) -> Result<Event, EvalError> {
        self.check(f)?;
        self.check_player(viewpoint)?;
        let id = self.arena.lower(f);
        self.ext(id, viewpoint)
    }

    pub fn eval(&mut self, f: &Formula, state: usize, viewpoint: PlayerId) -> Result<bool, EvalError> {
        Ok(self.extension(f, viewpoint)?.contains(state))
    }

    /// True at every state for every viewpoint.
    pub fn valid(&mut self, f: &Formula) -> Result<bool, EvalError> {
        self.check(f)?;
        let id = self.arena.lower(f);
        let omega = self.m.omega();
        for v in self.m.player_ids() {
            if self.ext(id, v)? != omega {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The value this mode gives `Pr_j(f)` at `state` when `viewpoint` evaluates.
    pub fn prob_value(
        &mut self,
        state: usize,
        viewpoint: PlayerId,
        j: PlayerId,
        f: &Formula,
    ) -> Result<Rational, EvalError> {
        self.check_player(j)?;
        let reader = self.mode.reader(viewpoint, j);
        let e = self.extension(f, reader)?;
        self.measure(j, state, e, viewpoint)
    }

    /// The states where player `j` gives `event` probability 1.
    pub fn belief_event(&mut self, j: PlayerId, event: Event, viewpoint: PlayerId) -> Result<Event, EvalError> {
        self.check_player(j)?;
        self.check_player(viewpoint)?;
        self.believes(j, event, viewpoint)
    }

    /// Common belief of `target` among `group`, as seen by `viewpoint`.
    pub fn common_belief(&mut self, group: &Group, target: Event, viewpoint: PlayerId) -> Result<Event, EvalError> {
        for &j in group {
            self.check_player(j)?;
        }
        self.check_player(viewpoint)?;
        self.common_belief_with(group, &|_| target, viewpoint)
    }

    /// `Pr_j(event)` at `state`: `μ_{j,ω}(E ∩ Π_j(ω))`, or in ai modes
    /// `ν_j(E | [[φ_{j,ω}]]_v)` with `v` the reader.
    fn measure(&self, j: PlayerId, state: usize, event: Event, viewpoint: PlayerId) -> Result<Rational, EvalError> {
        let m = self.m;
        if !self.mode.is_ai() {
            return Ok(m.posterior(j, state).mass(event.intersect(m.cell(j, state))));
        }
        let reader = self.mode.reader(viewpoint, j);
        let cell = m.partition(j).cell_index(state);
        match &self.conditioned[j.index()][cell][reader.index()] {
            Some(d) => Ok(d.mass(event)),
            None => Err(EvalError::ConditioningUndefined {
                player: j,
                state: m.state_name(state).to_string(),
                viewpoint: reader,
            }),
        }
    }

    /// `Pr_j(event)` on every state. The value only depends on `j`'s cell.
    fn measure_all(&self, j: PlayerId, event: Event, viewpoint: PlayerId) -> Result<Vec<Rational>, EvalError> {
        let part = self.m.partition(j);
        let mut out = vec![Rational::zero(); self.m.n_states()];
        for cell in part.cells() {
            let first = cell.first().expect("cells are nonempty");
            let v = self.measure(j, first, event, viewpoint)?;
            for s in cell.iter() {
                out[s] = v.clone();
            }
        }
        Ok(out)
    }

    fn believes(&self, j: PlayerId, event: Event, viewpoint: PlayerId) -> Result<Event, EvalError> {
        let values = self.measure_all(j, event, viewpoint)?;
        Ok(values.iter().enumerate().filter(|(_, v)| v.is_one()).map(|(s, _)| s).collect())
    }

    /// Greatest fixpoint of `E ↦ EB(Y) ∩ EB(E)` from `Ω`, where
    /// `EB(X) = ∩_{j∈G} B_j(X_j)` and `Y_j` is the target as read by `j`'s
    /// reader.
    ///
    /// Writing `X_1 = EB(Y)` and `X_{k+1} = EB(X_k)`, the iterate after `t`
    /// steps is `∩_{k≤t} X_k`: belief with probability 1 commutes with
    /// finite intersections, since `μ(A ∩ B) = 1` iff `μ(A) = 1` and
    /// `μ(B) = 1`. On a finite space the sequence stabilizes within `|Ω|+1`
    /// steps, at `∩_k X_k`, which is the extension of the infinite
    /// conjunction of all `EB^k`.
    fn common_belief_with(
        &self,
        group: &Group,
        target: &dyn Fn(PlayerId) -> Event,
        viewpoint: PlayerId,
    ) -> Result<Event, EvalError> {
        let mut base = self.m.omega();
        for &j in group {
            base = base.intersect(self.believes(j, target(j), viewpoint)?);
        }
        let mut current = self.m.omega();
        for _ in 0..=self.m.n_states() + 1 {
            let mut next = base.intersect(current);
            for &j in group {
                next = next.intersect(self.believes(j, current, viewpoint)?);
            }
            if next == current {
                break;
            }
            current = next;
        }
        Ok(current)
    }

    fn ext(&mut self, id: NodeId, viewpoint: PlayerId) -> Result<Event, EvalError> {
        let slot = id * self.m.n_players() + viewpoint.index();
        if let Some(Some(e)) = self.memo.get(slot) {
            return Ok(*e);
        }
        let m = self.m;
        let n = m.n_states();
        let e = match self.arena.node(id).clone() {
            Node::Prim(p) => {
                m.prop_extension(viewpoint, &p).ok_or_else(|| EvalError::UnknownProposition(p.to_string()))?
            }
            Node::True => m.omega(),
            Node::Not(a) => self.ext(a, viewpoint)?.complement(n),
            Node::And(a, b) => {
                let x = self.ext(a, viewpoint)?;
                if x.is_empty() {
                    x
                } else {
                    x.intersect(self.ext(b, viewpoint)?)
                }
            }
            Node::ProbGe { terms, bound } => {
                let mut total = vec![Rational::zero(); n];
                for (coeff, j, arg) in &terms {
                    let arg_ext = self.ext(*arg, self.mode.reader(viewpoint, *j))?;
                    let values = self.measure_all(*j, arg_ext, viewpoint)?;
                    for (t, v) in total.iter_mut().zip(values) {
                        *t = &*t + &(coeff * &v);
                    }
                }
                total.iter().enumerate().filter(|(_, t)| **t >= bound).map(|(s, _)| s).collect()
            }
            Node::Knows(j, a) => {
                let inner = self.ext(a, self.mode.reader(viewpoint, j))?;
                m.partition(j).cells().iter().filter(|c| c.is_subset(inner)).fold(Event::EMPTY, |acc, c| acc.union(*c))
            }
            Node::CommonBelief { group, arg } => {
                let mut targets = HashMap::new();
                for &j in &group {
                    let reader = self.mode.reader(viewpoint, j);
                    targets.insert(j, self.ext(arg, reader)?);
                }
                self.common_belief_with(&group, &|j| targets[&j], viewpoint)?
            }
        };
        if self.memo.len() <= slot {
            self.memo.resize(self.arena.len() * self.m.n_players(), None);
        }
        self.memo[slot] = Some(e);
        Ok(e)
    }
}

/// `[[f]]_i` under `mode`.
pub fn extension(m: &Structure, f: &Formula, viewpoint: PlayerId, mode: Mode) -> Result<Event, EvalError> {
    Evaluator::new(m, mode)?.extension(f, viewpoint)
}

/// `(M, ω, i) ⊨ f` under `mode`.
pub fn eval(m: &Structure, state: usize, viewpoint: PlayerId, f: &Formula, mode: Mode) -> Result<bool, EvalError> {
    Evaluator::new(m, mode)?.eval(f, state, viewpoint)
}

pub fn prob_value(
    m: &Structure,
    state: usize,
    viewpoint: PlayerId,
    j: PlayerId,
    f: &Formula,
    mode: Mode,
) -> Result<Rational, EvalError> {
    Evaluator::new(m, mode)?.prob_value(state, viewpoint, j, f)
}

pub fn belief_event(
    m: &Structure,
    j: PlayerId,
    event: Event,
    viewpoint: PlayerId,
    mode: Mode,
) -> Result<Event, EvalError> {
    Evaluator::new(m, mode)?.belief_event(j, event, viewpoint)
}

pub fn common_belief(
    m: &Structure,
    group: &Group,
    target: Event,
    viewpoint: PlayerId,
    mode: Mode,
) -> Result<Event, EvalError> {
    Evaluator::new(m, mode)?.common_belief(group, target, viewpoint)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::syntax::{group, normalize, parse};

    fn f(text: &str) -> Formula {
        parse(text).unwrap()
    }

    #[test]
    fn agreeing_to_disagree() {
        let m = load("atd");
        for v in [pl(1), pl(2)] {
            assert!(eval(&m, 0, v, &f("CB_{1,2}(B_1(p) & B_2(!p))"), Mode::In).unwrap());
        }
        assert!(eval(&m, 0, pl(1), &f("CB_{1,2}(p)"), Mode::Out).unwrap());
        assert!(!eval(&m, 0, pl(2), &f("CB_{1,2}(p)"), Mode::Out).unwrap());
        assert!(eval(&m, 0, pl(2), &f("CB_{1,2}(!p)"), Mode::Out).unwrap());
        assert_eq!(extension(&m, &f("p"), pl(1), Mode::Out).unwrap(), Event::singleton(0));
        assert_eq!(extension(&m, &f("p"), pl(2), Mode::In).unwrap(), Event::EMPTY);
    }

    #[test]
    fn example2_probabilities() {
        let m = load("example2");
        let w1 = m.state("w1").unwrap();
        let (p, q) = (f("p"), f("q"));
        assert_eq!(prob_value(&m, w1, pl(1), pl(1), &p, Mode::Out).unwrap(), r("1"));
        assert_eq!(prob_value(&m, w1, pl(1), pl(1), &q, Mode::Out).unwrap(), r("1/2"));
        assert_eq!(prob_value(&m, w1, pl(2), pl(2), &p, Mode::Out).unwrap(), r("1/2"));
        assert_eq!(prob_value(&m, w1, pl(2), pl(2), &q, Mode::Out).unwrap(), r("1"));
        for mode in Mode::ALL {
            assert_eq!(prob_value(&m, w1, pl(1), pl(2), &Formula::True, mode).unwrap(), r("1"));
        }
    }

    #[test]
    fn belief_and_common_belief_events() {
        let m = load("example2");
        let e12 = Event::from_bits(0b011);
        assert_eq!(belief_event(&m, pl(1), e12, pl(1), Mode::Out).unwrap(), e12);
        assert_eq!(belief_event(&m, pl(1), m.omega(), pl(1), Mode::In).unwrap(), m.omega());
        assert_eq!(belief_event(&m, pl(1), Event::EMPTY, pl(1), Mode::In).unwrap(), Event::EMPTY);
        let g = group(&[1, 2]);
        assert_eq!(common_belief(&m, &g, m.omega(), pl(1), Mode::Out).unwrap(), m.omega());
        assert_eq!(common_belief(&m, &g, Event::singleton(0), pl(1), Mode::In).unwrap(), Event::EMPTY);
        let atd = load("atd");
        let y = extension(&atd, &f("B_1(p) & B_2(!p)"), pl(1), Mode::In).unwrap();
        assert_eq!(common_belief(&atd, &g, y, pl(1), Mode::In).unwrap(), Event::singleton(0));
    }

    #[test]
    fn no_equiv_probabilities() {
        let m = load("no_equiv");
        let mut ev = Evaluator::new(&m, Mode::In).unwrap();
        for text in ["Pr_2(p) = 2/3", "Pr_3(p) = 3/4", "B_2(p <-> B_1(p)) & B_3(p <-> B_1(p))", "p <-> Pr_1(p) = 1"] {
            assert!(ev.valid(&f(text)).unwrap(), "{text}");
        }
    }

    #[test]
    fn critical_shared_but_not_public() {
        let m = load("critical");
        let w11 = m.state("w11").unwrap();
        let text = "CB_{1,2}(recv_1_s <-> recv_2_s) & !CB_{1,2}(recv_1_s)";
        for v in [pl(1), pl(2)] {
            assert!(eval(&m, w11, v, &f(text), Mode::InAi).unwrap());
        }
    }

    #[test]
    fn ai_modes_need_priors_and_labels() {
        let m = load("no_equiv");
        assert!(matches!(Evaluator::new(&m, Mode::OutAi), Err(EvalError::MissingLabels(_))));
        let m = load("example2").with_priors(None).unwrap();
        assert!(matches!(Evaluator::new(&m, Mode::InAi), Err(EvalError::MissingPriors(_))));
    }

    #[test]
    fn zero_mass_label_is_an_error() {
        // Under player 2's reading the label of player 1's only cell is
        // empty, so conditioning on it is undefined.
        let m = load("atd");
        let labels = vec![vec![f("p")], vec![f("!p")]];
        let m = m.with_cell_labels(Some(labels)).unwrap();
        let err = eval(&m, 0, pl(2), &f("Pr_1(true) >= 1"), Mode::OutAi).unwrap_err();
        assert_eq!(err, EvalError::ConditioningUndefined { player: pl(1), state: "w".into(), viewpoint: pl(2) });
        assert!(eval(&m, 0, pl(1), &f("Pr_1(true) >= 1"), Mode::OutAi).unwrap());
    }

    #[test]
    fn unknown_names() {
        let m = load("atd");
        assert_eq!(eval(&m, 0, pl(1), &f("zz"), Mode::Out), Err(EvalError::UnknownProposition("zz".into())));
        assert_eq!(eval(&m, 0, pl(1), &f("B_3(p)"), Mode::Out), Err(EvalError::UnknownPlayer(pl(3))));
    }

    #[test]
    fn sugar_and_core_agree() {
        let m = load("example2");
        for mode in Mode::ALL {
            let mut ev = Evaluator::new(&m, mode).unwrap();
            for text in ["EB^2_{1,2}(p | q)", "Pr_1(p) + Pr_2(q) > 3/2", "K_1(p) <-> B_1(p)", "CB_{1,2}(recv_1_s -> p)"]
            {
                for v in [pl(1), pl(2)] {
                    let g = f(text);
                    assert_eq!(ev.extension(&g, v).unwrap(), ev.extension(&normalize(&g), v).unwrap(), "{text} {mode}");
                }
            }
        }
    }
}
