//! Formulas of the multi-agent probability language.
//!
//! The core constructors are primitive propositions, `true`, negation,
//! conjunction, linear probability inequalities, common belief and
//! knowledge. Everything else (`|`, `->`, `<->`, `B_i`, `EB^m_G`, and the
//! `<=`, `<`, `>`, `=` comparisons) is sugar that [`normalize`] rewrites away.

mod normalize;
mod parse;
mod print;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::Rational;

pub use normalize::{is_core, normalize};
pub use parse::{parse, ParseError, ParseErrorKind};

/// A primitive proposition name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PropId(String);

impl PropId {
    /// Accepts names matching `[A-Za-z][A-Za-z0-9_]*`.
    pub fn new(name: impl Into<String>) -> Option<Self> {
        let name = name.into();
        let mut chars = name.chars();
        let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        ok.then_some(PropId(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True for the reserved `recv_` signal propositions.
    pub fn is_signal(&self) -> bool {
        self.0.starts_with("recv_")
    }
}

impl fmt::Display for PropId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A player, numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlayerId(u16);

impl PlayerId {
    /// Returns `None` for 0.
    pub fn new(number: u16) -> Option<Self> {
        (number >= 1).then_some(PlayerId(number))
    }

    /// Player from a zero-based index.
    pub fn from_index(index: usize) -> Self {
        PlayerId(index as u16 + 1)
    }

    pub fn number(self) -> u16 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for PlayerId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u16(self.0)
    }
}

impl<'de> Deserialize<'de> for PlayerId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let n = u16::deserialize(deserializer)?;
        PlayerId::new(n).ok_or_else(|| serde::de::Error::custom("players are numbered from 1"))
    }
}

/// A nonempty set of players, iterated in increasing order.
pub type Group = BTreeSet<PlayerId>;

/// Builds a group from player numbers.
pub fn group(numbers: &[u16]) -> Group {
    numbers.iter().map(|&n| PlayerId::new(n).expect("player numbers start at 1")).collect()
}

/// Comparison operators other than `>=`, which is the core form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Le,
    Lt,
    Gt,
    Eq,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Le => "<=",
            CmpOp::Lt => "<",
            CmpOp::Gt => ">",
            CmpOp::Eq => "=",
        }
    }
}

/// One summand `coeff * Pr_player(arg)` of a probability formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: Rational,
    pub player: PlayerId,
    pub arg: Formula,
}

impl Term {
    pub fn new(coeff: Rational, player: PlayerId, arg: Formula) -> Self {
        Term { coeff, player, arg }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Prim(PropId),
    True,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// `sum(coeff * Pr_player(arg)) >= bound`
    ProbGe {
        terms: Vec<Term>,
        bound: Rational,
    },
    CommonBelief {
        group: Group,
        arg: Box<Formula>,
    },
    Knows(PlayerId, Box<Formula>),
    // Sugar below.
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Believes(PlayerId, Box<Formula>),
    EveryoneBelieves {
        depth: u32,
        group: Group,
        arg: Box<Formula>,
    },
    ProbCmp {
        op: CmpOp,
        terms: Vec<Term>,
        bound: Rational,
    },
}

impl Formula {
    /// Panics on an invalid proposition name; meant for literals in code.
    pub fn prim(name: &str) -> Formula {
        Formula::Prim(PropId::new(name).unwrap_or_else(|| panic!("invalid proposition name `{name}`")))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn believes(player: PlayerId, f: Formula) -> Formula {
        Formula::Believes(player, Box::new(f))
    }

    pub fn knows(player: PlayerId, f: Formula) -> Formula {
        Formula::Knows(player, Box::new(f))
    }

    pub fn common_belief(group: Group, f: Formula) -> Formula {
        assert!(!group.is_empty(), "common belief needs a nonempty group");
        Formula::CommonBelief { group, arg: Box::new(f) }
    }

    pub fn everyone_believes(depth: u32, group: Group, f: Formula) -> Formula {
        assert!(depth >= 1 && !group.is_empty());
        Formula::EveryoneBelieves { depth, group, arg: Box::new(f) }
    }

    /// `Pr_player(f) op bound` with coefficient 1.
    pub fn prob(player: PlayerId, f: Formula, op: Option<CmpOp>, bound: Rational) -> Formula {
        let terms = vec![Term::new(Rational::one(), player, f)];
        match op {
            None => Formula::ProbGe { terms, bound },
            Some(op) => Formula::ProbCmp { op, terms, bound },
        }
    }

    /// Conjunction of all formulas, `true` when empty.
    pub fn conjunction(fs: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = fs.into_iter();
        match it.next() {
            None => Formula::True,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Uses only `Prim`, `True`, `Not`, `And`, `Or`, `Implies` and `Iff`.
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Prim(_) | Formula::True => true,
            Formula::Not(a) => a.is_propositional(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.is_propositional() && b.is_propositional()
            }
            _ => false,
        }
    }

    /// Immediate subformulas, in order.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Prim(_) | Formula::True => vec![],
            Formula::Not(a)
            | Formula::Knows(_, a)
            | Formula::Believes(_, a)
            | Formula::CommonBelief { arg: a, .. }
            | Formula::EveryoneBelieves { arg: a, .. } => vec![a],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                vec![a, b]
            }
            Formula::ProbGe { terms, .. } | Formula::ProbCmp { terms, .. } => terms.iter().map(|t| &t.arg).collect(),
        }
    }

    /// Primitive propositions occurring in the formula, sorted.
    pub fn props(&self) -> BTreeSet<PropId> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if let Formula::Prim(p) = f {
                out.insert(p.clone());
            }
            stack.extend(f.children());
        }
        out
    }

    /// Players named anywhere in the formula.
    pub fn players(&self) -> BTreeSet<PlayerId> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match f {
                Formula::Knows(i, _) | Formula::Believes(i, _) => {
                    out.insert(*i);
                }
                Formula::CommonBelief { group, .. } | Formula::EveryoneBelieves { group, .. } => {
                    out.extend(group.iter().copied());
                }
                Formula::ProbGe { terms, .. } | Formula::ProbCmp { terms, .. } => {
                    out.extend(terms.iter().map(|t| t.player));
                }
                _ => {}
            }
            stack.extend(f.children());
        }
        out
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_formula(f, self)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prop_names() {
        assert!(PropId::new("p").is_some());
        assert!(PropId::new("recv_1_s").unwrap().is_signal());
        assert!(PropId::new("1p").is_none());
        assert!(PropId::new("").is_none());
        assert!(PropId::new("p-q").is_none());
    }

    #[test]
    fn propositional_fragment() {
        assert!(parse("p & !q").unwrap().is_propositional());
        assert!(parse("p -> (q <-> true)").unwrap().is_propositional());
        assert!(!parse("B_1(p)").unwrap().is_propositional());
        assert!(!parse("CB_{1}(p)").unwrap().is_propositional());
        assert!(!parse("K_1(p)").unwrap().is_propositional());
        assert!(!parse("p & Pr_1(q) >= 1/2").unwrap().is_propositional());
    }

    #[test]
    fn collects_players_and_props() {
        let f = parse("CB_{1,3}(B_2(p) & Pr_4(q) > 0)").unwrap();
        assert_eq!(f.players(), group(&[1, 2, 3, 4]));
        let names: Vec<_> = f.props().into_iter().map(|p| p.to_string()).collect();
        assert_eq!(names, ["p", "q"]);
    }
}
