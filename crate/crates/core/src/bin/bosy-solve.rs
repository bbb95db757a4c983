//! Stand-alone DIMACS / QDIMACS solver speaking the usual competition
//! protocol: exit 10 when satisfiable, 20 when not, model on `v` lines
//! (SAT) or the outer block on `V` lines (QBF).

use std::fmt::Write;
use std::process::ExitCode;

use bosy::logicir::{parse_qdimacs, normalize_prefix, Quant};
use bosy::solve::{expand_universals, solve_cnf, SolveResult};

fn run(path: &str) -> bosy::Result<(String, u8)> {
    let q = parse_qdimacs(&std::fs::read_to_string(path)?)?;
    let (vars, clauses) = (q.cnf.num_vars, q.cnf.clauses.len());
    let prefix = normalize_prefix(&q.prefix);
    let mut out = String::new();
    if prefix.is_empty() {
        match solve_cnf(&q.cnf) {
            SolveResult::Unsat => return Ok(("s UNSATISFIABLE\n".into(), 20)),
            SolveResult::Sat(model) => {
                out.push_str("s SATISFIABLE\nv");
                for (v, b) in model.assigned() {
                    write!(out, " {}", if b { v.0 as i64 } else { -(v.0 as i64) }).unwrap();
                }
                out.push_str(" 0\n");
            }
        }
        return Ok((out, 10));
    }
    match expand_universals(&q)? {
        SolveResult::Unsat => Ok((format!("s cnf 0 {vars} {clauses}\n"), 20)),
        SolveResult::Sat(model) => {
            writeln!(out, "s cnf 1 {vars} {clauses}").unwrap();
            if prefix[0].quant == Quant::Exists {
                for &v in &prefix[0].vars {
                    let b = model.outer.get(v).unwrap_or(false);
                    writeln!(out, "V {} 0", if b { v.0 as i64 } else { -(v.0 as i64) }).unwrap();
                }
            }
            Ok((out, 10))
        }
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let [_, path] = args.as_slice() else {
        eprintln!("usage: bosy-solve FILE");
        return ExitCode::from(1);
    };
    match run(path) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
