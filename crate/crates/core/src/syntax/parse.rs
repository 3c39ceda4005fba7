//! Recursive-descent parser for the concrete formula grammar.
//!
//! ```text
//! phi     ::= "true" | ident | "!" phi | phi "&" phi | phi "|" phi
//!           | phi "->" phi | phi "<->" phi | "(" phi ")" | probsum cmp rat
//!           | "B_" int "(" phi ")" | "EB^" int "_{" intlist "}" "(" phi ")"
//!           | "CB_{" intlist "}" "(" phi ")" | "K_" int "(" phi ")"
//! probsum ::= term ("+" term)*
//! term    ::= [rat "*"] "Pr_" int "(" phi ")"
//! cmp     ::= ">=" | "<=" | ">" | "<" | "="
//! rat     ::= ["-"] int ["/" int]
//! ```
//!
//! Precedence from tightest to loosest: `!`, `&`, `|`, `->`, `<->`.
//! `->` associates to the right, the other binary operators to the left.

use std::fmt;

use thiserror::Error;

use super::{CmpOp, Formula, Group, PlayerId, PropId, Term};
use crate::rational::{Rational, RationalError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Unexpected token; `expected` lists what would have been accepted.
    Syntax {
        found: String,
        expected: Vec<String>,
    },
    UnknownComparison(String),
    ZeroDenominator,
    InvalidPlayer(String),
    InvalidDepth(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax { found, expected } => {
                write!(f, "unexpected {found}, expected one of: {}", expected.join(", "))
            }
            ParseErrorKind::UnknownComparison(op) => write!(f, "unknown comparison operator `{op}`"),
            ParseErrorKind::ZeroDenominator => write!(f, "zero denominator in rational literal"),
            ParseErrorKind::InvalidPlayer(s) => write!(f, "invalid player index `{s}`"),
            ParseErrorKind::InvalidDepth(s) => write!(f, "invalid belief depth `{s}`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Bang,
    Amp,
    Pipe,
    Arrow,
    DoubleArrow,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Underscore,
    Ge,
    Le,
    Gt,
    Lt,
    Eq,
    /// Operator-like character run that is not part of the grammar.
    BadOp(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(s) => format!("integer `{s}`"),
            Tok::BadOp(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &str {
        match self {
            Tok::Ident(s) | Tok::Int(s) | Tok::BadOp(s) => s,
            Tok::Bang => "!",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Arrow => "->",
            Tok::DoubleArrow => "<->",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::Underscore => "_",
            Tok::Ge => ">=",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Lt => "<",
            Tok::Eq => "=",
            Tok::Eof => "",
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = (line, col);
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let (tok, len) = if c.is_ascii_alphabetic() {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            (Tok::Ident(chars[i..j].iter().collect()), j - i)
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            (Tok::Int(chars[i..j].iter().collect()), j - i)
        } else if rest.starts_with("<->") {
            (Tok::DoubleArrow, 3)
        } else if rest.starts_with("->") {
            (Tok::Arrow, 2)
        } else if rest.starts_with(">=") {
            (Tok::Ge, 2)
        } else if rest.starts_with("<=") {
            (Tok::Le, 2)
        } else if ["==", "!=", "=>", "=<", "<>", ">>", "<<", "=="].iter().any(|op| rest.starts_with(op)) {
            (Tok::BadOp(rest[..2].to_string()), 2)
        } else {
            let tok = match c {
                '!' => Tok::Bang,
                '&' => Tok::Amp,
                '|' => Tok::Pipe,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ',' => Tok::Comma,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '_' => Tok::Underscore,
                '>' => Tok::Gt,
                '<' => Tok::Lt,
                '=' => Tok::Eq,
                other => {
                    return Err(ParseError {
                        line,
                        column: col,
                        kind: ParseErrorKind::Syntax {
                            found: format!("character `{other}`"),
                            expected: vec!["a formula token".to_string()],
                        },
                    })
                }
            };
            (tok, 1)
        };
        out.push(Spanned { tok, line: start.0, column: start.1 });
        i += len;
        col += len;
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}

/// Operator keyword carried by an identifier token.
enum Keyword {
    True,
    Believes(String),
    Knows(String),
    Prob(String),
    CommonBelief,
    EveryoneBelieves,
}

fn keyword(ident: &str, next: &Tok) -> Option<Keyword> {
    let indexed = |prefix: &str| {
        ident
            .strip_prefix(prefix)
            .filter(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
            .map(str::to_string)
    };
    if ident == "true" {
        Some(Keyword::True)
    } else if ident == "CB_" && *next == Tok::LBrace {
        Some(Keyword::CommonBelief)
    } else if ident == "EB" && *next == Tok::Caret {
        Some(Keyword::EveryoneBelieves)
    } else if let Some(n) = indexed("B_") {
        Some(Keyword::Believes(n))
    } else if let Some(n) = indexed("K_") {
        Some(Keyword::Knows(n))
    } else {
        indexed("Pr_").map(Keyword::Prob)
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, kind: ParseErrorKind) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError { line: t.line, column: t.column, kind }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        self.error_here(ParseErrorKind::Syntax {
            found: self.peek().describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            let want = format!("`{}`", tok.text());
            Err(self.unexpected(&[&want]))
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        self.iff()
    }

    fn iff(&mut self) -> PResult<Formula> {
        let mut lhs = self.implies()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.implies()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> PResult<Formula> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> PResult<Formula> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> PResult<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        if *self.peek() == Tok::Bang {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Formula> {
        const ATOM: &[&str] =
            &["`true`", "proposition", "`!`", "`(`", "`B_i`", "`K_i`", "`CB_{`", "`EB^`", "`Pr_i`", "rational"];
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Int(_) | Tok::Minus => self.prob_formula(),
            Tok::Ident(name) => match keyword(&name, self.peek_at(1)) {
                Some(Keyword::True) => {
                    self.bump();
                    Ok(Formula::True)
                }
                Some(Keyword::Believes(n)) => {
                    self.bump();
                    let i = self.player(&n)?;
                    Ok(Formula::believes(i, self.paren_arg()?))
                }
                Some(Keyword::Knows(n)) => {
                    self.bump();
                    let i = self.player(&n)?;
                    Ok(Formula::knows(i, self.paren_arg()?))
                }
                Some(Keyword::CommonBelief) => {
                    self.bump();
                    let group = self.group()?;
                    Ok(Formula::CommonBelief { group, arg: Box::new(self.paren_arg()?) })
                }
                Some(Keyword::EveryoneBelieves) => {
                    self.bump();
                    self.expect(Tok::Caret)?;
                    let depth = match self.peek().clone() {
                        Tok::Int(s) => {
                            let d = s.parse::<u32>().ok().filter(|&d| d >= 1);
                            let d = d.ok_or_else(|| self.error_here(ParseErrorKind::InvalidDepth(s.clone())))?;
                            self.bump();
                            d
                        }
                        _ => return Err(self.unexpected(&["integer"])),
                    };
                    self.expect(Tok::Underscore)?;
                    let group = self.group()?;
                    Ok(Formula::EveryoneBelieves { depth, group, arg: Box::new(self.paren_arg()?) })
                }
                Some(Keyword::Prob(_)) => self.prob_formula(),
                None => {
                    self.bump();
                    Ok(Formula::Prim(PropId::new(name).expect("lexer yields valid identifiers")))
                }
            },
            _ => Err(self.unexpected(ATOM)),
        }
    }

    fn paren_arg(&mut self) -> PResult<Formula> {
        self.expect(Tok::LParen)?;
        let f = self.formula()?;
        self.expect(Tok::RParen)?;
        Ok(f)
    }

    fn player(&self, digits: &str) -> PResult<PlayerId> {
        digits
            .parse::<u16>()
            .ok()
            .and_then(PlayerId::new)
            .ok_or_else(|| self.error_here(ParseErrorKind::InvalidPlayer(digits.to_string())))
    }

    /// `{ int ("," int)* }`
    fn group(&mut self) -> PResult<Group> {
        self.expect(Tok::LBrace)?;
        let mut group = Group::new();
        loop {
            match self.peek().clone() {
                Tok::Int(s) => {
                    let p = self.player(&s)?;
                    self.bump();
                    group.insert(p);
                }
                _ => return Err(self.unexpected(&["player index"])),
            }
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RBrace => {
                    self.bump();
                    return Ok(group);
                }
                _ => return Err(self.unexpected(&["`,`", "`}`"])),
            }
        }
    }

    fn rational(&mut self) -> PResult<Rational> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let num = match self.peek().clone() {
            Tok::Int(s) => {
                self.bump();
                s
            }
            _ => return Err(self.unexpected(&["integer"])),
        };
        let mut text = if neg { format!("-{num}") } else { num };
        if *self.peek() == Tok::Slash {
            self.bump();
            match self.peek().clone() {
                Tok::Int(d) => {
                    text.push('/');
                    text.push_str(&d);
                }
                _ => return Err(self.unexpected(&["integer"])),
            }
            let value = text.parse::<Rational>();
            if let Err(RationalError::ZeroDenominator(_)) = value {
                return Err(self.error_here(ParseErrorKind::ZeroDenominator));
            }
            self.bump();
            return Ok(value.expect("digits-only literal"));
        }
        Ok(text.parse().expect("digits-only literal"))
    }

    fn term(&mut self) -> PResult<Term> {
        let coeff = match self.peek() {
            Tok::Int(_) | Tok::Minus => {
                let c = self.rational()?;
                self.expect(Tok::Star)?;
                c
            }
            _ => Rational::one(),
        };
        match self.peek().clone() {
            Tok::Ident(name) => match keyword(&name, self.peek_at(1)) {
                Some(Keyword::Prob(n)) => {
                    self.bump();
                    let player = self.player(&n)?;
                    let arg = self.paren_arg()?;
                    Ok(Term { coeff, player, arg })
                }
                _ => Err(self.unexpected(&["`Pr_i`"])),
            },
            _ => Err(self.unexpected(&["`Pr_i`"])),
        }
    }

    fn prob_formula(&mut self) -> PResult<Formula> {
        let mut terms = vec![self.term()?];
        while *self.peek() == Tok::Plus {
            self.bump();
            terms.push(self.term()?);
        }
        let op = match self.peek().clone() {
            Tok::Ge => None,
            Tok::Le => Some(CmpOp::Le),
            Tok::Lt => Some(CmpOp::Lt),
            Tok::Gt => Some(CmpOp::Gt),
            Tok::Eq => Some(CmpOp::Eq),
            Tok::BadOp(s) => return Err(self.error_here(ParseErrorKind::UnknownComparison(s))),
            Tok::Bang if *self.peek_at(1) == Tok::Eq => {
                return Err(self.error_here(ParseErrorKind::UnknownComparison("!=".to_string())))
            }
            _ => return Err(self.unexpected(&["`+`", "`>=`", "`<=`", "`>`", "`<`", "`=`"])),
        };
        self.bump();
        let bound = self.rational()?;
        Ok(match op {
            None => Formula::ProbGe { terms, bound },
            Some(op) => Formula::ProbCmp { op, terms, bound },
        })
    }
}

/// Parses a complete formula.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected(&["`&`", "`|`", "`->`", "`<->`", "end of input"]));
    }
    Ok(f)
}
