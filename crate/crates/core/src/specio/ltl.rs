//! LTL syntax trees, the concrete grammar, and negation normal form.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! implies  := or ( "->" implies )?
//! or       := and ( "||" and )*
//! and      := temporal ( "&&" temporal )*
//! temporal := unary ( ("U" | "R" | "W") temporal )?
//! unary    := ("!" | "G" | "F" | "X") unary | primary
//! primary  := ident | "true" | "false" | "(" implies ")"
//! ```

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ltl {
    True,
    False,
    Atom(String),
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Implies(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    Release(Box<Ltl>, Box<Ltl>),
    WeakUntil(Box<Ltl>, Box<Ltl>),
    Finally(Box<Ltl>),
    Globally(Box<Ltl>),
}

impl Ltl {
    pub fn atom(name: impl Into<String>) -> Self {
        Ltl::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Ltl) -> Self {
        Ltl::Not(Box::new(f))
    }

    pub fn and(a: Ltl, b: Ltl) -> Self {
        Ltl::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Ltl, b: Ltl) -> Self {
        Ltl::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Ltl, b: Ltl) -> Self {
        Ltl::Implies(Box::new(a), Box::new(b))
    }

    pub fn next(f: Ltl) -> Self {
        Ltl::Next(Box::new(f))
    }

    pub fn until(a: Ltl, b: Ltl) -> Self {
        Ltl::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Ltl, b: Ltl) -> Self {
        Ltl::Release(Box::new(a), Box::new(b))
    }

    pub fn weak_until(a: Ltl, b: Ltl) -> Self {
        Ltl::WeakUntil(Box::new(a), Box::new(b))
    }

    pub fn finally(f: Ltl) -> Self {
        Ltl::Finally(Box::new(f))
    }

    pub fn globally(f: Ltl) -> Self {
        Ltl::Globally(Box::new(f))
    }

    /// Right-nested conjunction; `true` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Ltl>) -> Self {
        let mut parts: Vec<Ltl> = parts.into_iter().collect();
        let Some(mut acc) = parts.pop() else {
            return Ltl::True;
        };
        while let Some(p) = parts.pop() {
            acc = Ltl::and(p, acc);
        }
        acc
    }

    pub fn children(&self) -> Vec<&Ltl> {
        match self {
            Ltl::True | Ltl::False | Ltl::Atom(_) => vec![],
            Ltl::Not(a) | Ltl::Next(a) | Ltl::Finally(a) | Ltl::Globally(a) => vec![a],
            Ltl::And(a, b)
            | Ltl::Or(a, b)
            | Ltl::Implies(a, b)
            | Ltl::Until(a, b)
            | Ltl::Release(a, b)
            | Ltl::WeakUntil(a, b) => vec![a, b],
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if let Ltl::Atom(a) = f {
                out.insert(a.clone());
            }
            stack.extend(f.children());
        }
        out
    }

    /// Number of syntax-tree nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn is_nnf(&self) -> bool {
        match self {
            Ltl::Not(inner) => matches!(**inner, Ltl::Atom(_)),
            Ltl::Implies(..) | Ltl::WeakUntil(..) => false,
            other => other.children().iter().all(|c| c.is_nnf()),
        }
    }
}

/// Negation normal form of `f` (of `¬f` when `negate` is set).
///
/// Negations end up on atoms only, implications are eliminated and weak
/// until is rewritten as `a W b ≡ b R (a ∨ b)`.
pub fn nnf(f: &Ltl, negate: bool) -> Ltl {
    use Ltl::*;
    let pos = |g: &Ltl| nnf(g, false);
    let neg = |g: &Ltl| nnf(g, true);
    if !negate {
        match f {
            True => True,
            False => False,
            Atom(a) => Atom(a.clone()),
            Not(g) => neg(g),
            And(a, b) => Ltl::and(pos(a), pos(b)),
            Or(a, b) => Ltl::or(pos(a), pos(b)),
            Implies(a, b) => Ltl::or(neg(a), pos(b)),
            Next(g) => Ltl::next(pos(g)),
            Until(a, b) => Ltl::until(pos(a), pos(b)),
            Release(a, b) => Ltl::release(pos(a), pos(b)),
            WeakUntil(a, b) => Ltl::release(pos(b), Ltl::or(pos(a), pos(b))),
            Finally(g) => Ltl::finally(pos(g)),
            Globally(g) => Ltl::globally(pos(g)),
        }
    } else {
        match f {
            True => False,
            False => True,
            Atom(a) => Ltl::not(Atom(a.clone())),
            Not(g) => pos(g),
            And(a, b) => Ltl::or(neg(a), neg(b)),
            Or(a, b) => Ltl::and(neg(a), neg(b)),
            Implies(a, b) => Ltl::and(pos(a), neg(b)),
            Next(g) => Ltl::next(neg(g)),
            Until(a, b) => Ltl::release(neg(a), neg(b)),
            Release(a, b) => Ltl::until(neg(a), neg(b)),
            WeakUntil(a, b) => Ltl::until(neg(b), Ltl::and(neg(a), neg(b))),
            Finally(g) => Ltl::globally(neg(g)),
            Globally(g) => Ltl::finally(neg(g)),
        }
    }
}

/// Fully parenthesised rendering accepted by [`parse_ltl`] and by common
/// external LTL translators.
impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ltl::True => write!(f, "true"),
            Ltl::False => write!(f, "false"),
            Ltl::Atom(a) => write!(f, "{a}"),
            Ltl::Not(a) => write!(f, "!{a}"),
            Ltl::Next(a) => write!(f, "X {a}"),
            Ltl::Finally(a) => write!(f, "F {a}"),
            Ltl::Globally(a) => write!(f, "G {a}"),
            Ltl::And(a, b) => write!(f, "({a} && {b})"),
            Ltl::Or(a, b) => write!(f, "({a} || {b})"),
            Ltl::Implies(a, b) => write!(f, "({a} -> {b})"),
            Ltl::Until(a, b) => write!(f, "({a} U {b})"),
            Ltl::Release(a, b) => write!(f, "({a} R {b})"),
            Ltl::WeakUntil(a, b) => write!(f, "({a} W {b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Globally,
    Finally,
    Next,
    Until,
    Release,
    WeakUntil,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'!' => {
                i += 1;
                Tok::Not
            }
            b'&' => {
                i += if bytes.get(i + 1) == Some(&b'&') { 2 } else { 1 };
                Tok::And
            }
            b'|' => {
                i += if bytes.get(i + 1) == Some(&b'|') { 2 } else { 1 };
                Tok::Or
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Implies
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                match &text[start..i] {
                    "G" => Tok::Globally,
                    "F" => Tok::Finally,
                    "X" => Tok::Next,
                    "U" => Tok::Until,
                    "R" => Tok::Release,
                    "W" => Tok::WeakUntil,
                    "true" | "TRUE" => Tok::True,
                    "false" | "FALSE" => Tok::False,
                    word => Tok::Ident(word.to_string()),
                }
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(Error::LtlParse { pos: i, msg: format!("unexpected character `{ch}`") });
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::LtlParse { pos: self.offset(), msg: msg.into() })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn implies(&mut self) -> Result<Ltl> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implies()?;
            return Ok(Ltl::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Ltl> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            lhs = Ltl::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Ltl> {
        let mut lhs = self.temporal()?;
        while self.eat(&Tok::And) {
            lhs = Ltl::and(lhs, self.temporal()?);
        }
        Ok(lhs)
    }

    fn temporal(&mut self) -> Result<Ltl> {
        let lhs = self.unary()?;
        let ctor: fn(Ltl, Ltl) -> Ltl = match self.peek() {
            Some(Tok::Until) => Ltl::until,
            Some(Tok::Release) => Ltl::release,
            Some(Tok::WeakUntil) => Ltl::weak_until,
            _ => return Ok(lhs),
        };
        self.pos += 1;
        let rhs = self.temporal()?;
        Ok(ctor(lhs, rhs))
    }

    fn unary(&mut self) -> Result<Ltl> {
        let ctor: fn(Ltl) -> Ltl = match self.peek() {
            Some(Tok::Not) => Ltl::not,
            Some(Tok::Globally) => Ltl::globally,
            Some(Tok::Finally) => Ltl::finally,
            Some(Tok::Next) => Ltl::next,
            _ => return self.primary(),
        };
        self.pos += 1;
        Ok(ctor(self.unary()?))
    }

    fn primary(&mut self) -> Result<Ltl> {
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of formula");
        };
        self.pos += 1;
        match tok {
            Tok::Ident(name) => Ok(Ltl::Atom(name)),
            Tok::True => Ok(Ltl::True),
            Tok::False => Ok(Ltl::False),
            Tok::LParen => {
                let inner = self.implies()?;
                if !self.eat(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                Ok(inner)
            }
            other => {
                self.pos -= 1;
                self.err(format!("unexpected token {other:?}"))
            }
        }
    }
}

/// Parses an LTL formula. No rewriting is performed.
pub fn parse_ltl(text: &str) -> Result<Ltl> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let f = p.implies()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}

impl std::str::FromStr for Ltl {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_ltl(s)
    }
}
