use std::collections::BTreeSet;
use std::fmt;

use serde::Deserialize;

use super::ltl::{parse_ltl, Ltl};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Semantics {
    /// Outputs depend on the current state and the current input.
    Mealy,
    /// Outputs depend on the current state only.
    Moore,
}

impl Semantics {
    pub fn dual(self) -> Self {
        match self {
            Semantics::Mealy => Semantics::Moore,
            Semantics::Moore => Semantics::Mealy,
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::Mealy => "mealy",
            Semantics::Moore => "moore",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    System,
    Environment,
}

/// A synthesis instance from the point of view of one player.
///
/// `inputs` are the signals the player's machine observes and `outputs` the
/// signals it controls. For the environment player these are the system's
/// outputs and inputs respectively, and the winning condition is the negation
/// of the combined formula.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisProblem {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub semantics: Semantics,
    pub assumptions: Vec<Ltl>,
    pub guarantees: Vec<Ltl>,
    pub player: Player,
}

#[derive(Deserialize)]
struct RawSpec {
    semantics: String,
    inputs: Vec<String>,
    outputs: Vec<String>,
    #[serde(default)]
    assumptions: Vec<String>,
    guarantees: Vec<String>,
}

/// Parses the JSON input format into a system-player problem.
pub fn parse_spec(text: &str) -> Result<SynthesisProblem> {
    let raw: RawSpec = serde_json::from_str(text)?;
    let semantics = match raw.semantics.as_str() {
        "mealy" => Semantics::Mealy,
        "moore" => Semantics::Moore,
        other => return Err(Error::Spec(format!("unknown semantics `{other}`"))),
    };
    let parse_all = |list: &[String]| list.iter().map(|s| parse_ltl(s)).collect::<Result<Vec<_>>>();
    let problem = SynthesisProblem {
        inputs: raw.inputs,
        outputs: raw.outputs,
        semantics,
        assumptions: parse_all(&raw.assumptions)?,
        guarantees: parse_all(&raw.guarantees)?,
        player: Player::System,
    };
    problem.validate()?;
    Ok(problem)
}

impl SynthesisProblem {
    pub fn new(
        inputs: &[&str],
        outputs: &[&str],
        semantics: Semantics,
        assumptions: Vec<Ltl>,
        guarantees: Vec<Ltl>,
    ) -> Result<Self> {
        let problem = SynthesisProblem {
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            outputs: outputs.iter().map(|s| s.to_string()).collect(),
            semantics,
            assumptions,
            guarantees,
            player: Player::System,
        };
        problem.validate()?;
        Ok(problem)
    }

    /// Checks the signal partition: no duplicates, no undeclared atoms.
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for s in self.inputs.iter().chain(&self.outputs) {
            if s.is_empty() {
                return Err(Error::Spec("empty signal name".into()));
            }
            if !seen.insert(s.as_str()) {
                return Err(Error::DuplicateSignal(s.clone()));
            }
        }
        for f in self.assumptions.iter().chain(&self.guarantees) {
            if let Some(undeclared) = f.atoms().into_iter().find(|a| !seen.contains(a.as_str())) {
                return Err(Error::UndeclaredAtom(undeclared));
            }
        }
        Ok(())
    }

    /// Signals in proposition order: observed signals first, then controlled.
    pub fn signals(&self) -> Vec<String> {
        self.inputs.iter().chain(&self.outputs).cloned().collect()
    }

    pub fn controls(&self) -> &[String] {
        &self.outputs
    }

    pub fn observes(&self) -> &[String] {
        &self.inputs
    }

    /// The formula this player must enforce.
    pub fn combine(&self) -> Ltl {
        let guarantees = Ltl::conjunction(self.guarantees.iter().cloned());
        let spec = if self.assumptions.is_empty() {
            guarantees
        } else {
            Ltl::implies(Ltl::conjunction(self.assumptions.iter().cloned()), guarantees)
        };
        match self.player {
            Player::System => spec,
            Player::Environment => Ltl::not(spec),
        }
    }

    /// The environment's counter-strategy problem: roles swapped, semantics
    /// flipped, formula negated.
    pub fn dualize(&self) -> Result<SynthesisProblem> {
        if self.player != Player::System {
            return Err(Error::NotSystemPlayer);
        }
        Ok(SynthesisProblem {
            inputs: self.outputs.clone(),
            outputs: self.inputs.clone(),
            semantics: self.semantics.dual(),
            assumptions: self.assumptions.clone(),
            guarantees: self.guarantees.clone(),
            player: Player::Environment,
        })
    }
}
