use super::{CmpOp, Formula, Group, PlayerId, Term};
use crate::rational::Rational;

fn negate_terms(terms: &[Term]) -> Vec<Term> {
    terms.iter().map(|t| Term::new(-&t.coeff, t.player, t.arg.clone())).collect()
}

fn normalize_terms(terms: &[Term]) -> Vec<Term> {
    terms.iter().map(|t| Term::new(t.coeff.clone(), t.player, normalize(&t.arg))).collect()
}

/// `Pr_i(f) = 1` as two core inequalities.
pub(crate) fn belief_core(player: PlayerId, f: Formula) -> Formula {
    let one = Rational::one();
    Formula::and(
        Formula::ProbGe { terms: vec![Term::new(one.clone(), player, f.clone())], bound: one.clone() },
        Formula::ProbGe { terms: vec![Term::new(-&one, player, f)], bound: -&one },
    )
}

fn everyone_once(group: &Group, f: Formula) -> Formula {
    Formula::conjunction(group.iter().map(|&i| belief_core(i, f.clone())))
}

/// Rewrites all sugar into the core constructors
/// `Prim`, `True`, `Not`, `And`, `ProbGe`, `CommonBelief` and `Knows`.
///
/// `EB^m` is unrolled syntactically, so the output can be exponential in `m`.
/// Common belief is kept as a node.
pub fn normalize(f: &Formula) -> Formula {
    match f {
        Formula::Prim(_) | Formula::True => f.clone(),
        Formula::Not(a) => Formula::not(normalize(a)),
        Formula::And(a, b) => Formula::and(normalize(a), normalize(b)),
        Formula::Or(a, b) => Formula::not(Formula::and(Formula::not(normalize(a)), Formula::not(normalize(b)))),
        Formula::Implies(a, b) => Formula::not(Formula::and(normalize(a), Formula::not(normalize(b)))),
        Formula::Iff(a, b) => {
            let (a, b) = (normalize(a), normalize(b));
            Formula::and(
                Formula::not(Formula::and(a.clone(), Formula::not(b.clone()))),
                Formula::not(Formula::and(b, Formula::not(a))),
            )
        }
        Formula::ProbGe { terms, bound } => Formula::ProbGe { terms: normalize_terms(terms), bound: bound.clone() },
        Formula::ProbCmp { op, terms, bound } => {
            let terms = normalize_terms(terms);
            let ge = |terms: Vec<Term>, bound: Rational| Formula::ProbGe { terms, bound };
            let le = |terms: &[Term]| ge(negate_terms(terms), -bound);
            match op {
                CmpOp::Le => le(&terms),
                CmpOp::Lt => Formula::not(ge(terms, bound.clone())),
                CmpOp::Gt => Formula::not(le(&terms)),
                CmpOp::Eq => {
                    let upper = le(&terms);
                    Formula::and(ge(terms, bound.clone()), upper)
                }
            }
        }
        Formula::CommonBelief { group, arg } => {
            Formula::CommonBelief { group: group.clone(), arg: Box::new(normalize(arg)) }
        }
        Formula::Knows(i, a) => Formula::knows(*i, normalize(a)),
        Formula::Believes(i, a) => belief_core(*i, normalize(a)),
        Formula::EveryoneBelieves { depth, group, arg } => {
            let mut out = normalize(arg);
            for _ in 0..*depth {
                out = everyone_once(group, out);
            }
            out
        }
    }
}

/// True when `f` contains no sugar nodes.
pub fn is_core(f: &Formula) -> bool {
    let here = matches!(
        f,
        Formula::Prim(_)
            | Formula::True
            | Formula::Not(_)
            | Formula::And(..)
            | Formula::ProbGe { .. }
            | Formula::CommonBelief { .. }
            | Formula::Knows(..)
    );
    here && f.children().into_iter().all(is_core)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{group, parse};

    fn pl(n: u16) -> PlayerId {
        PlayerId::new(n).unwrap()
    }

    #[test]
    fn everyone_believes_unrolls() {
        let p = Formula::prim("p");
        let g = group(&[1, 2]);
        let once = Formula::and(belief_core(pl(1), p.clone()), belief_core(pl(2), p.clone()));
        let twice = Formula::and(belief_core(pl(1), once.clone()), belief_core(pl(2), once));
        assert_eq!(normalize(&Formula::everyone_believes(2, g, p)), twice);
    }

    #[test]
    fn equality_is_two_inequalities() {
        let f = parse("Pr_2(p) = 2/3").unwrap();
        let two_thirds: Rational = "2/3".parse().unwrap();
        let expected = Formula::and(
            Formula::ProbGe {
                terms: vec![Term::new(Rational::one(), pl(2), Formula::prim("p"))],
                bound: two_thirds.clone(),
            },
            Formula::ProbGe { terms: vec![Term::new(-Rational::one(), pl(2), Formula::prim("p"))], bound: -two_thirds },
        );
        assert_eq!(normalize(&f), expected);
    }

    #[test]
    fn strict_comparisons_negate() {
        let lt = normalize(&parse("Pr_1(p) < 1/2").unwrap());
        assert_eq!(lt, Formula::not(normalize(&parse("Pr_1(p) >= 1/2").unwrap())));
        let gt = normalize(&parse("Pr_1(p) > 1/2").unwrap());
        assert_eq!(gt, Formula::not(normalize(&parse("-1*Pr_1(p) >= -1/2").unwrap())));
    }

    #[test]
    fn believes_is_probability_one() {
        let b = normalize(&parse("B_1(p)").unwrap());
        assert_eq!(b, normalize(&parse("Pr_1(p) = 1").unwrap()));
        assert!(is_core(&b));
    }

    #[test]
    fn idempotent_and_core() {
        let f = parse("CB_{1,2}(p -> EB^2_{1,2}(q | !K_1(p))) <-> Pr_1(p) + 1/2*Pr_2(q) > 1/4").unwrap();
        let n = normalize(&f);
        assert!(is_core(&n));
        assert!(!is_core(&f));
        assert_eq!(normalize(&n), n);
    }
}
