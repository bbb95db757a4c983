//! Specification input: the JSON format, LTL formulas, and the two players'
//! synthesis problems.

mod ltl;
mod problem;

pub use ltl::{nnf, parse_ltl, Ltl};
pub use problem::{parse_spec, Player, Semantics, SynthesisProblem};
