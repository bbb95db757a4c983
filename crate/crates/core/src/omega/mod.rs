//! Specification automata.
//!
//! The combined formula φ is negated, translated into a nondeterministic
//! Büchi automaton, and the result is read universally: a machine satisfies φ
//! iff no branch of its run tree visits a rejecting state infinitely often.

mod hoa;
mod optimize;
mod reduce;
mod tableau;

use std::io::Write;
use std::process::{Command, Stdio};

use crate::error::{Error, Result};
use crate::prop::Prop;
use crate::specio::{nnf, SynthesisProblem};

pub use hoa::{parse_hoa, write_hoa};
pub use tableau::ltl_to_nba;

/// Propositional label over proposition indices.
pub type EdgeLabel = Prop<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub label: EdgeLabel,
    pub target: usize,
}

/// Nondeterministic Büchi automaton with state-based acceptance.
#[derive(Debug, Clone)]
pub struct Nba {
    pub aps: Vec<String>,
    pub initial: usize,
    pub edges: Vec<Vec<Edge>>,
    pub accepting: Vec<bool>,
}

impl Nba {
    pub fn num_states(&self) -> usize {
        self.edges.len()
    }
}

/// Universal co-Büchi automaton together with the results of the
/// safety-demotion and SCC passes.
#[derive(Debug, Clone, PartialEq)]
pub struct UniversalCoBuchi {
    pub aps: Vec<String>,
    pub initial: usize,
    pub edges: Vec<Vec<Edge>>,
    pub rejecting: Vec<bool>,
    /// Demoted rejecting sinks. Entering one of them is a violation.
    pub safety: Vec<bool>,
    pub scc: Vec<usize>,
    /// `r(q)`: number of rejecting states in the SCC of `q`.
    pub rejecting_in_scc: Vec<usize>,
}

impl UniversalCoBuchi {
    /// Reads the NBA of ¬φ universally. Without SCC analysis all states
    /// share one component whose rejecting count is `|Rej|`.
    pub fn from_nba(nba: Nba) -> Self {
        let n = nba.num_states();
        let total = nba.accepting.iter().filter(|&&b| b).count();
        UniversalCoBuchi {
            aps: nba.aps,
            initial: nba.initial,
            edges: nba.edges,
            rejecting: nba.accepting,
            safety: vec![false; n],
            scc: vec![0; n],
            rejecting_in_scc: vec![total; n],
        }
    }

    pub fn num_states(&self) -> usize {
        self.edges.len()
    }

    pub fn same_scc(&self, q: usize, q2: usize) -> bool {
        self.scc[q] == self.scc[q2]
    }

    /// Largest annotation value needed at `q` for a machine with `bound` states.
    pub fn counter_capacity(&self, q: usize, bound: usize) -> usize {
        bound * self.rejecting_in_scc[q]
    }

    /// Both optimizations: safety demotion followed by SCC analysis.
    pub fn optimized(self) -> Self {
        optimize::analyze_sccs(optimize::demote_safety_states(self))
    }

    pub fn demote_safety_states(self) -> Self {
        optimize::demote_safety_states(self)
    }

    pub fn analyze_sccs(self) -> Self {
        optimize::analyze_sccs(self)
    }
}

/// Translates the problem's formula with the built-in tableau translator.
pub fn build_ucw(problem: &SynthesisProblem) -> Result<UniversalCoBuchi> {
    let negated = nnf(&problem.combine(), true);
    let nba = ltl_to_nba(&negated, &problem.signals())?;
    Ok(UniversalCoBuchi::from_nba(nba))
}

/// Translates `¬φ` with an external tool producing state-based Büchi HOA on
/// standard output. `{formula}` in the template is replaced by the quoted
/// formula; without a placeholder the formula is appended as last argument.
pub fn build_ucw_external(problem: &SynthesisProblem, template: &str) -> Result<UniversalCoBuchi> {
    let negated = nnf(&problem.combine(), true);
    let quoted = shell_quote(&negated.to_string());
    let cmd = if template.contains("{formula}") {
        template.replace("{formula}", &quoted)
    } else {
        format!("{template} {quoted}")
    };
    log::debug!("running translator: {cmd}");
    let mut child = Command::new("sh")
        .arg("-c")
        .arg(&cmd)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| Error::Translator(format!("cannot spawn `{cmd}`: {e}")))?;
    if let Some(mut stdin) = child.stdin.take() {
        // some tools read the formula from stdin; ignore a closed pipe
        let _ = writeln!(stdin, "{negated}");
    }
    let out = child.wait_with_output()?;
    if !out.status.success() {
        return Err(Error::Translator(format!(
            "`{cmd}` exited with {}: {}",
            out.status,
            String::from_utf8_lossy(&out.stderr).trim()
        )));
    }
    let text = String::from_utf8_lossy(&out.stdout);
    parse_hoa(&text, &problem.signals())
}

pub(crate) fn shell_quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', r"'\''"))
}

/// Atom names of an NNF formula resolved against the proposition list.
pub(crate) fn resolve_atom(aps: &[String], name: &str) -> Result<usize> {
    aps.iter()
        .position(|a| a == name)
        .ok_or_else(|| Error::UndeclaredAtom(name.to_string()))
}
