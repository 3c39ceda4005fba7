use std::fmt::{self, Write};

use super::{Formula, Group, Term};

/// Binary connectives and probability atoms are parenthesized whenever they
/// appear as an operand, so printing never depends on precedence rules.
fn needs_parens(f: &Formula) -> bool {
    matches!(
        f,
        Formula::And(..)
            | Formula::Or(..)
            | Formula::Implies(..)
            | Formula::Iff(..)
            | Formula::ProbGe { .. }
            | Formula::ProbCmp { .. }
    )
}

fn operand(out: &mut fmt::Formatter<'_>, f: &Formula) -> fmt::Result {
    if needs_parens(f) {
        out.write_char('(')?;
        write_formula(out, f)?;
        out.write_char(')')
    } else {
        write_formula(out, f)
    }
}

fn write_group(out: &mut fmt::Formatter<'_>, group: &Group) -> fmt::Result {
    out.write_char('{')?;
    for (k, p) in group.iter().enumerate() {
        if k > 0 {
            out.write_char(',')?;
        }
        write!(out, "{p}")?;
    }
    out.write_char('}')
}

fn write_terms(out: &mut fmt::Formatter<'_>, terms: &[Term]) -> fmt::Result {
    for (k, t) in terms.iter().enumerate() {
        if k > 0 {
            out.write_str(" + ")?;
        }
        if !t.coeff.is_one() {
            write!(out, "{}*", t.coeff)?;
        }
        write!(out, "Pr_{}(", t.player)?;
        write_formula(out, &t.arg)?;
        out.write_char(')')?;
    }
    Ok(())
}

pub(super) fn write_formula(out: &mut fmt::Formatter<'_>, f: &Formula) -> fmt::Result {
    let binary = |out: &mut fmt::Formatter<'_>, a: &Formula, op: &str, b: &Formula| {
        operand(out, a)?;
        write!(out, " {op} ")?;
        operand(out, b)
    };
    match f {
        Formula::Prim(p) => write!(out, "{p}"),
        Formula::True => out.write_str("true"),
        Formula::Not(a) => {
            out.write_char('!')?;
            operand(out, a)
        }
        Formula::And(a, b) => binary(out, a, "&", b),
        Formula::Or(a, b) => binary(out, a, "|", b),
        Formula::Implies(a, b) => binary(out, a, "->", b),
        Formula::Iff(a, b) => binary(out, a, "<->", b),
        Formula::ProbGe { terms, bound } => {
            write_terms(out, terms)?;
            write!(out, " >= {bound}")
        }
        Formula::ProbCmp { op, terms, bound } => {
            write_terms(out, terms)?;
            write!(out, " {} {bound}", op.symbol())
        }
        Formula::CommonBelief { group, arg } => {
            out.write_str("CB_")?;
            write_group(out, group)?;
            write!(out, "({arg})")
        }
        Formula::EveryoneBelieves { depth, group, arg } => {
            write!(out, "EB^{depth}_")?;
            write_group(out, group)?;
            write!(out, "({arg})")
        }
        Formula::Believes(i, a) => write!(out, "B_{i}({a})"),
        Formula::Knows(i, a) => write!(out, "K_{i}({a})"),
    }
}

#[cfg(test)]
mod tests {
    use crate::rational::Rational;
    use crate::syntax::{parse, Formula, PlayerId, Term};

    fn p(n: u16) -> PlayerId {
        PlayerId::new(n).unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(Formula::believes(p(1), Formula::prim("p")).to_string(), "B_1(p)");
        assert_eq!(Formula::True.to_string(), "true");
        let atom = Formula::ProbGe {
            terms: vec![Term::new(Rational::one(), p(1), Formula::prim("p"))],
            bound: Rational::one(),
        };
        assert_eq!(atom.to_string(), "Pr_1(p) >= 1");
    }

    #[test]
    fn operands_are_parenthesized() {
        let f = parse("!(a & b) | Pr_1(c) < 1/2 -> d").unwrap();
        assert_eq!(f.to_string(), "(!(a & b) | (Pr_1(c) < 1/2)) -> d");
        assert_eq!(parse(&f.to_string()).unwrap(), f);
    }
}
