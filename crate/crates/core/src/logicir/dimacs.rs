use std::fmt::Write;

use super::{check_prefix, normalize_prefix, Cnf, Lit, Quant, QuantBlock, QuantifiedCnf, Var};
use crate::error::{Error, Result};

pub fn emit_dimacs(cnf: &Cnf) -> String {
    let mut s = String::new();
    writeln!(s, "p cnf {} {}", cnf.num_vars, cnf.clauses.len()).unwrap();
    write_clauses(&mut s, cnf);
    s
}

fn write_clauses(s: &mut String, cnf: &Cnf) {
    for c in &cnf.clauses {
        for l in c {
            write!(s, "{l} ").unwrap();
        }
        s.push_str("0\n");
    }
}

pub fn emit_qdimacs(q: &QuantifiedCnf) -> Result<String> {
    check_prefix(&q.prefix, q.cnf.num_vars)?;
    let mut s = String::new();
    writeln!(s, "p cnf {} {}", q.cnf.num_vars, q.cnf.clauses.len()).unwrap();
    for b in normalize_prefix(&q.prefix) {
        s.push(match b.quant {
            Quant::Exists => 'e',
            Quant::Forall => 'a',
        });
        for v in &b.vars {
            write!(s, " {}", v.0).unwrap();
        }
        s.push_str(" 0\n");
    }
    write_clauses(&mut s, &q.cnf);
    Ok(s)
}

/// Reads DIMACS or QDIMACS. Plain DIMACS yields an empty prefix.
pub fn parse_qdimacs(text: &str) -> Result<QuantifiedCnf> {
    let bad = |line: usize, msg: &str| Error::Solver(format!("DIMACS line {}: {msg}", line + 1));
    let mut header: Option<(u32, usize)> = None;
    let mut prefix = Vec::new();
    let mut cnf = Cnf::default();
    let mut pending: Vec<Lit> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        let mut words = line.split_whitespace();
        if line.starts_with('p') {
            let parts: Vec<&str> = words.collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(bad(n, "malformed header"));
            }
            let vars = parts[2].parse().map_err(|_| bad(n, "bad variable count"))?;
            let clauses = parts[3].parse().map_err(|_| bad(n, "bad clause count"))?;
            header = Some((vars, clauses));
            cnf.num_vars = vars;
            continue;
        }
        if header.is_none() {
            return Err(bad(n, "missing header"));
        }
        if line.starts_with('e') || line.starts_with('a') {
            let quant = if words.next() == Some("e") { Quant::Exists } else { Quant::Forall };
            let mut vars = Vec::new();
            for w in words {
                let v: u32 = w.parse().map_err(|_| bad(n, "bad variable"))?;
                if v == 0 {
                    break;
                }
                vars.push(Var(v));
            }
            prefix.push(QuantBlock { quant, vars });
            continue;
        }
        for w in words {
            let x: i32 = w.parse().map_err(|_| bad(n, "bad literal"))?;
            if x == 0 {
                cnf.add_clause(std::mem::take(&mut pending));
            } else {
                pending.push(Lit::from_dimacs(x));
            }
        }
    }
    if !pending.is_empty() {
        cnf.add_clause(pending);
    }
    let Some((_, declared)) = header else {
        return Err(Error::Solver("DIMACS: missing header".into()));
    };
    if declared != cnf.clauses.len() {
        log::warn!("DIMACS header declares {declared} clauses, found {}", cnf.clauses.len());
    }
    check_prefix(&prefix, cnf.num_vars)?;
    Ok(QuantifiedCnf { prefix, cnf })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_format() {
        let mut cnf = Cnf::new(2);
        cnf.add_clause(vec![Lit::from_dimacs(1), Lit::from_dimacs(-2)]);
        assert_eq!(emit_dimacs(&cnf), "p cnf 2 1\n1 -2 0\n");
        assert_eq!(emit_dimacs(&Cnf::default()), "p cnf 0 0\n");
    }

    #[test]
    fn qdimacs_format() {
        let mut cnf = Cnf::new(2);
        cnf.add_clause(vec![Lit::from_dimacs(1), Lit::from_dimacs(2)]);
        let q = QuantifiedCnf {
            prefix: vec![
                QuantBlock { quant: Quant::Exists, vars: vec![Var(1)] },
                QuantBlock { quant: Quant::Forall, vars: vec![Var(2)] },
            ],
            cnf: cnf.clone(),
        };
        assert_eq!(emit_qdimacs(&q).unwrap(), "p cnf 2 1\ne 1 0\na 2 0\n1 2 0\n");
        let plain = QuantifiedCnf { prefix: vec![], cnf: cnf.clone() };
        assert_eq!(emit_qdimacs(&plain).unwrap(), emit_dimacs(&cnf));
        assert_eq!(parse_qdimacs(&emit_qdimacs(&q).unwrap()).unwrap(), q);
    }

    #[test]
    fn prefix_outside_registry() {
        let q = QuantifiedCnf {
            prefix: vec![QuantBlock { quant: Quant::Forall, vars: vec![Var(7)] }],
            cnf: Cnf::new(2),
        };
        assert!(matches!(emit_qdimacs(&q), Err(Error::Qbf(_))));
    }
}
