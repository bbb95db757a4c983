//! HOA v1 import for state-based Büchi automata with explicit labels.
//!
//! The automaton is expected to describe ¬φ; its Büchi set becomes the
//! rejecting set of the universal co-Büchi automaton for φ. Alternation,
//! several initial states, transition-based or generalized acceptance,
//! aliases and implicit labels are rejected.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{resolve_atom, Edge, EdgeLabel, UniversalCoBuchi};
use crate::error::{Error, Result};
use crate::prop::{Prop, HOA_SYNTAX};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Header(String),
    Ident(String),
    Int(usize),
    Str(String),
    Punct(char),
    Body,
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut line = 1;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c == '/' && chars.get(i + 1) == Some(&'*') {
            i += 2;
            while i < chars.len() && !(chars[i] == '*' && chars.get(i + 1) == Some(&'/')) {
                if chars[i] == '\n' {
                    line += 1;
                }
                i += 1;
            }
            i += 2;
        } else if c == '"' {
            let mut s = String::new();
            i += 1;
            while i < chars.len() && chars[i] != '"' {
                if chars[i] == '\\' && i + 1 < chars.len() {
                    i += 1;
                }
                s.push(chars[i]);
                i += 1;
            }
            if i >= chars.len() {
                return Err(Error::Hoa { line, msg: "unterminated string".into() });
            }
            i += 1;
            out.push((line, Tok::Str(s)));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse().map_err(|_| Error::Hoa { line, msg: format!("bad integer `{s}`") })?;
            out.push((line, Tok::Int(n)));
        } else if c == '-' && chars[i..].starts_with(&['-', '-']) {
            let start = i;
            i += 2;
            while i < chars.len() && chars[i] != '-' {
                i += 1;
            }
            i += 2;
            let word: String = chars[start..i.min(chars.len())].iter().collect();
            match word.as_str() {
                "--BODY--" => out.push((line, Tok::Body)),
                "--END--" => out.push((line, Tok::End)),
                "--ABORT--" => return Err(Error::Hoa { line, msg: "producer aborted".into() }),
                _ => return Err(Error::Hoa { line, msg: format!("unknown marker `{word}`") }),
            }
        } else if c.is_ascii_alphabetic() || c == '_' || c == '@' {
            let start = i;
            i += 1;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '-') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            if chars.get(i) == Some(&':') {
                i += 1;
                out.push((line, Tok::Header(word)));
            } else {
                out.push((line, Tok::Ident(word)));
            }
        } else if "[]{}()!&|".contains(c) {
            out.push((line, Tok::Punct(c)));
            i += 1;
        } else {
            return Err(Error::Hoa { line, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn line(&self) -> usize {
        self.toks.get(self.pos).or(self.toks.last()).map_or(1, |(l, _)| *l)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Hoa { line: self.line(), msg: msg.into() })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn int(&mut self) -> Result<usize> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(n),
            other => {
                self.pos -= 1;
                self.err(format!("expected integer, found {other:?}"))
            }
        }
    }

    fn punct(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.punct(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    /// Tokens up to the next header or body marker.
    fn header_values(&mut self) -> Vec<Tok> {
        let mut vals = Vec::new();
        while let Some(t) = self.peek() {
            if matches!(t, Tok::Header(_) | Tok::Body) {
                break;
            }
            vals.push(self.next().unwrap());
        }
        vals
    }

    fn label_or(&mut self) -> Result<EdgeLabel> {
        let mut parts = vec![self.label_and()?];
        while self.punct('|') {
            parts.push(self.label_and()?);
        }
        Ok(Prop::or_all(parts))
    }

    fn label_and(&mut self) -> Result<EdgeLabel> {
        let mut parts = vec![self.label_not()?];
        while self.punct('&') {
            parts.push(self.label_not()?);
        }
        Ok(Prop::and_all(parts))
    }

    fn label_not(&mut self) -> Result<EdgeLabel> {
        if self.punct('!') {
            return Ok(self.label_not()?.negate());
        }
        if self.punct('(') {
            let inner = self.label_or()?;
            self.expect(')')?;
            return Ok(inner);
        }
        match self.next() {
            Some(Tok::Int(n)) => Ok(Prop::Atom(n)),
            Some(Tok::Ident(w)) if w == "t" => Ok(Prop::True),
            Some(Tok::Ident(w)) if w == "f" => Ok(Prop::False),
            Some(Tok::Ident(w)) if w.starts_with('@') => self.err("aliases are not supported"),
            other => {
                self.pos -= 1;
                self.err(format!("unexpected {other:?} in label"))
            }
        }
    }

    /// `{...}` acceptance signature, if present.
    fn acc_sig(&mut self) -> Result<Option<Vec<usize>>> {
        if !self.punct('{') {
            return Ok(None);
        }
        let mut sets = Vec::new();
        while !self.punct('}') {
            sets.push(self.int()?);
        }
        Ok(Some(sets))
    }
}

/// Parses a HOA document, mapping its atomic propositions onto `signals`.
pub fn parse_hoa(text: &str, signals: &[String]) -> Result<UniversalCoBuchi> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let mut num_states = None;
    let mut start = None;
    let mut ap_map: Option<Vec<usize>> = None;
    let mut acc_sets = None;
    let mut seen_version = false;

    loop {
        let line = p.line();
        match p.next() {
            Some(Tok::Body) => break,
            Some(Tok::Header(name)) => match name.as_str() {
                "HOA" => {
                    match p.next() {
                        Some(Tok::Ident(v)) if v == "v1" => seen_version = true,
                        other => return Err(Error::Hoa { line, msg: format!("unsupported version {other:?}") }),
                    }
                }
                "States" => num_states = Some(p.int()?),
                "Start" => {
                    if start.is_some() {
                        return p.err("multiple initial states are not supported");
                    }
                    start = Some(p.int()?);
                    if p.punct('&') {
                        return p.err("alternating initial state (conjunctive start) is not supported");
                    }
                }
                "AP" => {
                    let count = p.int()?;
                    let mut map = Vec::with_capacity(count);
                    for _ in 0..count {
                        match p.next() {
                            Some(Tok::Str(name)) => map.push(
                                resolve_atom(signals, &name)
                                    .map_err(|_| Error::Hoa { line, msg: format!("unknown AP \"{name}\"") })?,
                            ),
                            other => return Err(Error::Hoa { line, msg: format!("expected AP name, found {other:?}") }),
                        }
                    }
                    ap_map = Some(map);
                }
                "Acceptance" => {
                    let vals = p.header_values();
                    let sets = match vals.as_slice() {
                        [Tok::Int(0), Tok::Ident(t)] if t == "t" => 0,
                        [Tok::Int(1), Tok::Ident(inf), Tok::Punct('('), Tok::Int(0), Tok::Punct(')')]
                            if inf == "Inf" =>
                        {
                            1
                        }
                        _ => return Err(Error::Hoa { line, msg: "unsupported acceptance condition".into() }),
                    };
                    acc_sets = Some(sets);
                }
                "Alias" => return Err(Error::Hoa { line, msg: "aliases are not supported".into() }),
                "properties" => {
                    let vals = p.header_values();
                    if vals.iter().any(|t| matches!(t, Tok::Ident(w) if w == "univ-branch")) {
                        return Err(Error::Hoa { line, msg: "alternating automata are not supported".into() });
                    }
                }
                _ => {
                    p.header_values();
                }
            },
            other => return Err(Error::Hoa { line, msg: format!("expected header item, found {other:?}") }),
        }
    }

    if !seen_version {
        return p.err("missing `HOA: v1` header");
    }
    let Some(initial) = start else {
        return p.err("missing `Start:` header");
    };
    let Some(acc_sets) = acc_sets else {
        return p.err("missing `Acceptance:` header");
    };
    let ap_map = ap_map.unwrap_or_default();

    let mut edges: BTreeMap<usize, Vec<Edge>> = BTreeMap::new();
    let mut rejecting: BTreeMap<usize, bool> = BTreeMap::new();
    let mut max_state = initial;
    loop {
        match p.next() {
            Some(Tok::End) => break,
            Some(Tok::Header(h)) if h == "State" => {
                if p.peek() == Some(&Tok::Punct('[')) {
                    return p.err("state labels are not supported");
                }
                let q = p.int()?;
                if let Some(Tok::Str(_)) = p.peek() {
                    p.next();
                }
                let acc = p.acc_sig()?.unwrap_or_default();
                if acc.iter().any(|&s| s >= acc_sets) {
                    return p.err(format!("acceptance set outside declared range in state {q}"));
                }
                rejecting.insert(q, !acc.is_empty());
                max_state = max_state.max(q);
                let out = edges.entry(q).or_default();
                loop {
                    match p.peek() {
                        Some(Tok::Punct('[')) => {
                            p.next();
                            let label = p.label_or()?;
                            p.expect(']')?;
                            let target = p.int()?;
                            if p.punct('&') {
                                return p.err("alternating transitions are not supported");
                            }
                            if p.acc_sig()?.is_some() {
                                return p.err("transition-based acceptance is not supported");
                            }
                            max_state = max_state.max(target);
                            if let Some(a) = label.atoms().into_iter().find(|&a| a >= ap_map.len()) {
                                return p.err(format!("AP index {a} out of range"));
                            }
                            let label = label.map_atoms(&|&a| ap_map[a]);
                            out.push(Edge { label, target });
                        }
                        Some(Tok::Int(_)) => return p.err("implicit edge labels are not supported"),
                        _ => break,
                    }
                }
            }
            other => return p.err(format!("expected `State:` or `--END--`, found {other:?}")),
        }
    }

    let n = num_states.unwrap_or(max_state + 1).max(max_state + 1);
    let mut out_edges = vec![Vec::new(); n];
    for (q, es) in edges {
        out_edges[q] = merge_parallel(es);
    }
    let mut rej = vec![false; n];
    for (q, r) in rejecting {
        rej[q] = r;
    }
    let total = rej.iter().filter(|&&r| r).count();
    Ok(UniversalCoBuchi {
        aps: signals.to_vec(),
        initial,
        edges: out_edges,
        rejecting: rej,
        safety: vec![false; n],
        scc: vec![0; n],
        rejecting_in_scc: vec![total; n],
    })
}

fn merge_parallel(edges: Vec<Edge>) -> Vec<Edge> {
    let mut by_target: BTreeMap<usize, Vec<EdgeLabel>> = BTreeMap::new();
    for e in edges {
        by_target.entry(e.target).or_default().push(e.label);
    }
    by_target
        .into_iter()
        .map(|(target, labels)| Edge { label: Prop::or_all(labels), target })
        .collect()
}

/// Prints the automaton as state-based Büchi HOA (rejecting states carry
/// set 0). Demoted safety states are printed as rejecting sinks.
pub fn write_hoa(a: &UniversalCoBuchi) -> String {
    let mut s = String::new();
    writeln!(s, "HOA: v1").unwrap();
    writeln!(s, "States: {}", a.num_states()).unwrap();
    writeln!(s, "Start: {}", a.initial).unwrap();
    write!(s, "AP: {}", a.aps.len()).unwrap();
    for ap in &a.aps {
        write!(s, " \"{ap}\"").unwrap();
    }
    writeln!(s).unwrap();
    writeln!(s, "acc-name: Buchi").unwrap();
    writeln!(s, "Acceptance: 1 Inf(0)").unwrap();
    writeln!(s, "properties: explicit-labels state-acc").unwrap();
    writeln!(s, "--BODY--").unwrap();
    for q in 0..a.num_states() {
        let marked = a.rejecting[q] || a.safety[q];
        writeln!(s, "State: {q}{}", if marked { " {0}" } else { "" }).unwrap();
        if a.safety[q] {
            writeln!(s, "[t] {q}").unwrap();
            continue;
        }
        for e in &a.edges[q] {
            writeln!(s, "[{}] {}", e.label.render(&HOA_SYNTAX, &|i| i.to_string()), e.target).unwrap();
        }
    }
    writeln!(s, "--END--").unwrap();
    s
}
