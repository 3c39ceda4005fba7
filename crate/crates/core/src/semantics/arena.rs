//! Hash-consed core formulas.
//!
//! Lowering follows the same rewrite rules as [`normalize`](crate::syntax::normalize)
//! but shares equal subterms, so `EB^m` costs `O(m·|G|)` nodes instead of
//! `|G|^m`.

use std::collections::HashMap;

use crate::rational::Rational;
use crate::syntax::{CmpOp, Formula, Group, PlayerId, PropId, Term};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Prim(PropId),
    True,
    Not(NodeId),
    And(NodeId, NodeId),
    ProbGe { terms: Vec<(Rational, PlayerId, NodeId)>, bound: Rational },
    CommonBelief { group: Group, arg: NodeId },
    Knows(PlayerId, NodeId),
}

#[derive(Debug, Default, Clone)]
pub struct Arena {
    nodes: Vec<Node>,
    index: HashMap<Node, NodeId>,
}

impl Arena {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    fn intern(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    fn not(&mut self, a: NodeId) -> NodeId {
        self.intern(Node::Not(a))
    }

    fn and(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.intern(Node::And(a, b))
    }

    fn ge(&mut self, terms: Vec<(Rational, PlayerId, NodeId)>, bound: Rational) -> NodeId {
        self.intern(Node::ProbGe { terms, bound })
    }

    fn le(&mut self, terms: &[(Rational, PlayerId, NodeId)], bound: &Rational) -> NodeId {
        let neg = terms.iter().map(|(c, p, a)| (-c, *p, *a)).collect();
        self.ge(neg, -bound)
    }

    fn believes(&mut self, player: PlayerId, a: NodeId) -> NodeId {
        let one = Rational::one();
        let upper = self.ge(vec![(one.clone(), player, a)], one.clone());
        let lower = self.ge(vec![(-&one, player, a)], -&one);
        self.and(upper, lower)
    }

    fn terms(&mut self, terms: &[Term]) -> Vec<(Rational, PlayerId, NodeId)> {
        terms.iter().map(|t| (t.coeff.clone(), t.player, self.lower(&t.arg))).collect()
    }

    /// Interns the core form of `f`.
    pub fn lower(&mut self, f: &Formula) -> NodeId {
        match f {
            Formula::Prim(p) => self.intern(Node::Prim(p.clone())),
            Formula::True => self.intern(Node::True),
            Formula::Not(a) => {
                let a = self.lower(a);
                self.not(a)
            }
            Formula::And(a, b) => {
                let (a, b) = (self.lower(a), self.lower(b));
                self.and(a, b)
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.lower(a), self.lower(b));
                let (na, nb) = (self.not(a), self.not(b));
                let both = self.and(na, nb);
                self.not(both)
            }
            Formula::Implies(a, b) => {
                let (a, b) = (self.lower(a), self.lower(b));
                let nb = self.not(b);
                let both = self.and(a, nb);
                self.not(both)
            }
            Formula::Iff(a, b) => {
                let (a, b) = (self.lower(a), self.lower(b));
                let nb = self.not(b);
                let ab = self.and(a, nb);
                let left = self.not(ab);
                let na = self.not(a);
                let ba = self.and(b, na);
                let right = self.not(ba);
                self.and(left, right)
            }
            Formula::ProbGe { terms, bound } => {
                let terms = self.terms(terms);
                self.ge(terms, bound.clone())
            }
            Formula::ProbCmp { op, terms, bound } => {
                let terms = self.terms(terms);
                match op {
                    CmpOp::Le => self.le(&terms, bound),
                    CmpOp::Lt => {
                        let ge = self.ge(terms, bound.clone());
                        self.not(ge)
                    }
                    CmpOp::Gt => {
                        let le = self.le(&terms, bound);
                        self.not(le)
                    }
                    CmpOp::Eq => {
                        let ge = self.ge(terms.clone(), bound.clone());
                        let le = self.le(&terms, bound);
                        self.and(ge, le)
                    }
                }
            }
            Formula::CommonBelief { group, arg } => {
                let arg = self.lower(arg);
                self.intern(Node::CommonBelief { group: group.clone(), arg })
            }
            Formula::Knows(i, a) => {
                let a = self.lower(a);
                self.intern(Node::Knows(*i, a))
            }
            Formula::Believes(i, a) => {
                let a = self.lower(a);
                self.believes(*i, a)
            }
            Formula::EveryoneBelieves { depth, group, arg } => {
                let mut out = self.lower(arg);
                for _ in 0..*depth {
                    let mut parts = group.iter().map(|&i| self.believes(i, out)).collect::<Vec<_>>().into_iter();
                    let first = parts.next().expect("groups are nonempty");
                    out = parts.fold(first, |acc, b| self.and(acc, b));
                }
                out
            }
        }
    }

    /// Expands a node back into a tree.
    pub fn to_formula(&self, id: NodeId) -> Formula {
        match &self.nodes[id] {
            Node::Prim(p) => Formula::Prim(p.clone()),
            Node::True => Formula::True,
            Node::Not(a) => Formula::not(self.to_formula(*a)),
            Node::And(a, b) => Formula::and(self.to_formula(*a), self.to_formula(*b)),
            Node::ProbGe { terms, bound } => Formula::ProbGe {
                terms: terms.iter().map(|(c, p, a)| Term::new(c.clone(), *p, self.to_formula(*a))).collect(),
                bound: bound.clone(),
            },
            Node::CommonBelief { group, arg } => {
                Formula::CommonBelief { group: group.clone(), arg: Box::new(self.to_formula(*arg)) }
            }
            Node::Knows(i, a) => Formula::knows(*i, self.to_formula(*a)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{normalize, parse};

    #[test]
    fn lowering_matches_normalize() {
        for text in [
            "p <-> (q | !r)",
            "Pr_1(p) + 1/2*Pr_2(q) = 1/4",
            "Pr_1(p) < 1/3 -> Pr_2(p) > 2/3",
            "CB_{1,2}(B_1(p) & K_2(q))",
            "EB^3_{1,2}(p) -> 1/2*Pr_1(true) <= 1/2",
        ] {
            let f = parse(text).unwrap_or_else(|e| panic!("{text}: {e}"));
            let mut arena = Arena::new();
            let id = arena.lower(&f);
            assert_eq!(arena.to_formula(id), normalize(&f), "{text}");
        }
    }

    #[test]
    fn deep_everyone_belief_stays_small() {
        let f = parse("EB^8_{1,2,3}(p)").unwrap();
        let mut arena = Arena::new();
        arena.lower(&f);
        assert!(arena.len() < 100, "{}", arena.len());
    }
}
