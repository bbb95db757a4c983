//! The bound-increment loop and the race between the system and the
//! environment.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;
use std::time::Duration;

use crate::encode::{encode_input_symbolic, encode_propositional, EncodingContext, EncodingModel};
use crate::error::{Error, Result};
use crate::logicir::{emit_dimacs, emit_qdimacs};
use crate::machine::{model_check, Machine};
use crate::omega::{build_ucw, build_ucw_external, UniversalCoBuchi};
use crate::solve::{
    expand_universals_with_cancel, fix_outer, solve_cnf_with_cancel, solve_external, ExternalSolver,
    InstanceFormat, SolveResult,
};
use crate::specio::SynthesisProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    Linear,
    Exponential,
}

/// Which bounds to try, in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchStrategy {
    pub kind: StrategyKind,
    pub initial: usize,
    pub cap: Option<usize>,
}

impl SearchStrategy {
    pub fn linear() -> Self {
        SearchStrategy { kind: StrategyKind::Linear, initial: 1, cap: None }
    }

    pub fn exponential() -> Self {
        SearchStrategy { kind: StrategyKind::Exponential, initial: 1, cap: None }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = Some(cap);
        self
    }

    /// The bound after `b`. Exponential steps are clamped to the cap so the
    /// cap itself is always tried.
    pub fn next(&self, b: usize) -> usize {
        let raw = match self.kind {
            StrategyKind::Linear => b + 1,
            StrategyKind::Exponential => 2 * b,
        };
        match self.cap {
            Some(cap) if b < cap => raw.min(cap),
            _ => raw,
        }
    }

    pub fn bounds(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::successors(Some(self.initial.max(1)), |&b| Some(self.next(b)))
            .take_while(|&b| self.cap.is_none_or(|cap| b <= cap))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Sat,
    Qbf,
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub strategy: SearchStrategy,
    pub backend: Backend,
    /// Apply safety demotion and SCC analysis to the automaton.
    pub optimize: bool,
    pub external_sat: Option<String>,
    pub external_qbf: Option<String>,
    pub translator: Option<String>,
    pub solver_timeout: Option<Duration>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            strategy: SearchStrategy::exponential(),
            backend: Backend::Qbf,
            optimize: true,
            external_sat: None,
            external_qbf: None,
            translator: None,
            solver_timeout: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Realizable,
    Unrealizable,
    Unknown,
}

/// Result of a search. `machine` is the winner's implementation: the
/// system's for realizable, the environment's counter-strategy for
/// unrealizable (in dual mode).
#[derive(Debug, Clone)]
pub struct Verdict {
    pub outcome: Outcome,
    pub machine: Option<Machine>,
    pub bound: Option<usize>,
}

impl Verdict {
    fn unknown() -> Self {
        Verdict { outcome: Outcome::Unknown, machine: None, bound: None }
    }
}

/// A constraint-solving backend answering one bound at a time.
pub trait BoundedSolver {
    /// Some implementation with `bound` states, or `None` if there is none.
    fn solve(&mut self, bound: usize) -> Result<Option<Machine>>;
}

/// The full pipeline for one player: automaton built once, one encoding
/// and solver call per bound, decoded machines verified before returning.
pub struct Pipeline<'a> {
    pub problem: SynthesisProblem,
    pub automaton: UniversalCoBuchi,
    options: &'a SearchOptions,
    cancel: &'a AtomicBool,
}

impl<'a> Pipeline<'a> {
    pub fn new(problem: &SynthesisProblem, options: &'a SearchOptions, cancel: &'a AtomicBool) -> Result<Self> {
        problem.validate()?;
        let ucw = match &options.translator {
            Some(cmd) => build_ucw_external(problem, cmd)?,
            None => build_ucw(problem)?,
        };
        let automaton = if options.optimize { ucw.optimized() } else { ucw };
        log::info!(
            "{:?} automaton: {} states, {} rejecting, {} safety",
            problem.player,
            automaton.num_states(),
            automaton.rejecting.iter().filter(|&&r| r).count(),
            automaton.safety.iter().filter(|&&r| r).count()
        );
        Ok(Pipeline { problem: problem.clone(), automaton, options, cancel })
    }

    fn check_cancel(&self) -> Result<()> {
        if self.cancel.load(Ordering::Relaxed) {
            Err(Error::Cancelled)
        } else {
            Ok(())
        }
    }

    fn external(&self, cmd: &str) -> ExternalSolver {
        ExternalSolver { command: cmd.to_string(), timeout: self.options.solver_timeout }
    }
}

impl BoundedSolver for Pipeline<'_> {
    fn solve(&mut self, bound: usize) -> Result<Option<Machine>> {
        self.check_cancel()?;
        let ctx = EncodingContext::new(&self.problem, self.automaton.clone(), bound);
        let machine = match self.options.backend {
            Backend::Sat => {
                let enc = encode_propositional(&ctx)?;
                let cnf = enc.system.to_qcnf().cnf;
                log::debug!("bound {bound}: SAT instance with {} vars, {} clauses", cnf.num_vars, cnf.clauses.len());
                let result = match &self.options.external_sat {
                    Some(cmd) => solve_external(
                        &self.external(cmd),
                        &emit_dimacs(&cnf),
                        InstanceFormat::Dimacs,
                        Some(self.cancel),
                    )?,
                    None => solve_cnf_with_cancel(&cnf, self.cancel)?,
                };
                match result {
                    SolveResult::Unsat => None,
                    SolveResult::Sat(model) => Some(enc.decode(&ctx, EncodingModel::Total(&model))?),
                }
            }
            Backend::Qbf => {
                let enc = encode_input_symbolic(&ctx)?;
                let mut qcnf = enc.system.to_qcnf();
                log::debug!(
                    "bound {bound}: QBF instance with {} vars, {} clauses",
                    qcnf.cnf.num_vars,
                    qcnf.cnf.clauses.len()
                );
                if let Some(cmd) = &self.options.external_qbf {
                    // first step: the external solver decides and reports the
                    // outer block; the residual ∀∃ problem is expanded here
                    let text = emit_qdimacs(&qcnf)?;
                    match solve_external(&self.external(cmd), &text, InstanceFormat::Qdimacs, Some(self.cancel))? {
                        SolveResult::Unsat => return Ok(None),
                        SolveResult::Sat(outer) => qcnf = fix_outer(&qcnf, &outer),
                    }
                }
                match expand_universals_with_cancel(&qcnf, Some(self.cancel))? {
                    SolveResult::Unsat if self.options.external_qbf.is_some() => {
                        return Err(Error::Solver("external top-level assignment has no extension".into()))
                    }
                    SolveResult::Unsat => None,
                    SolveResult::Sat(model) => Some(enc.decode(&ctx, EncodingModel::Skolem(&model))?),
                }
            }
        };
        if let Some(m) = &machine {
            if !m.check_total_deterministic() || !model_check(m, &self.automaton)? {
                return Err(Error::Encoding(format!("decoded machine at bound {bound} fails verification")));
            }
        }
        Ok(machine)
    }
}

fn search(pipeline: &mut Pipeline<'_>, strategy: &SearchStrategy) -> Result<Verdict> {
    for bound in strategy.bounds() {
        log::info!("{:?}: trying bound {bound}", pipeline.problem.player);
        if let Some(machine) = pipeline.solve(bound)? {
            return Ok(Verdict { outcome: Outcome::Realizable, machine: Some(machine), bound: Some(bound) });
        }
    }
    Ok(Verdict::unknown())
}

/// Searches for an implementation for `problem`'s player. `Realizable`
/// refers to that player.
pub fn run_single(problem: &SynthesisProblem, options: &SearchOptions) -> Result<Verdict> {
    let cancel = AtomicBool::new(false);
    run_single_with_cancel(problem, options, &cancel)
}

pub fn run_single_with_cancel(
    problem: &SynthesisProblem,
    options: &SearchOptions,
    cancel: &AtomicBool,
) -> Result<Verdict> {
    let mut pipeline = Pipeline::new(problem, options, cancel)?;
    search(&mut pipeline, &options.strategy)
}

/// Races the system against the environment's dual problem. The first
/// definitive answer wins and the other side is cancelled.
pub fn run_dual(problem: &SynthesisProblem, options: &SearchOptions) -> Result<Verdict> {
    let dual = problem.dualize()?;
    let cancel = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel();
    std::thread::scope(|scope| {
        for (is_system, p) in [(true, problem), (false, &dual)] {
            let tx = tx.clone();
            let cancel = &cancel;
            scope.spawn(move || {
                let _ = tx.send((is_system, run_single_with_cancel(p, options, cancel)));
            });
        }
        drop(tx);

        let mut first_error = None;
        for (is_system, result) in rx.iter() {
            match result {
                Ok(v) if v.outcome == Outcome::Realizable => {
                    cancel.store(true, Ordering::Relaxed);
                    let outcome = if is_system { Outcome::Realizable } else { Outcome::Unrealizable };
                    log::info!("{} side won at bound {:?}", if is_system { "system" } else { "environment" }, v.bound);
                    return Ok(Verdict { outcome, ..v });
                }
                Ok(_) => {}
                Err(Error::Cancelled) => {}
                Err(e) => {
                    log::warn!("{} side failed: {e}", if is_system { "system" } else { "environment" });
                    first_error.get_or_insert(e);
                }
            }
        }
        match first_error {
            Some(e) => Err(e),
            None => Ok(Verdict::unknown()),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specio::Semantics;

    fn problem(inputs: &[&str], outputs: &[&str], sem: Semantics, guarantees: &[&str]) -> SynthesisProblem {
        let gs = guarantees.iter().map(|g| g.parse().unwrap()).collect();
        SynthesisProblem::new(inputs, outputs, sem, vec![], gs).unwrap()
    }

    fn arbiter() -> SynthesisProblem {
        problem(
            &["r_0", "r_1"],
            &["g_0", "g_1"],
            Semantics::Mealy,
            &["G !(g_0 && g_1)", "G (r_0 -> F g_0)", "G (r_1 -> F g_1)"],
        )
    }

    #[test]
    fn strategies() {
        let lin: Vec<usize> = SearchStrategy::linear().with_cap(4).bounds().collect();
        assert_eq!(lin, vec![1, 2, 3, 4]);
        let exp: Vec<usize> = SearchStrategy::exponential().with_cap(6).bounds().collect();
        assert_eq!(exp, vec![1, 2, 4, 6]);
        let exp: Vec<usize> = SearchStrategy::exponential().bounds().take(5).collect();
        assert_eq!(exp, vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn arbiter_linear() {
        for backend in [Backend::Sat, Backend::Qbf] {
            let opts = SearchOptions { strategy: SearchStrategy::linear(), backend, ..Default::default() };
            let v = run_single(&arbiter(), &opts).unwrap();
            assert_eq!(v.outcome, Outcome::Realizable);
            assert_eq!(v.bound, Some(2));
        }
    }

    #[test]
    fn cap_gives_unknown() {
        let opts = SearchOptions { strategy: SearchStrategy::linear().with_cap(1), ..Default::default() };
        let v = run_single(&arbiter(), &opts).unwrap();
        assert_eq!(v.outcome, Outcome::Unknown);
        assert!(v.machine.is_none());
    }

    #[test]
    fn dual_race() {
        let opts = SearchOptions::default();
        assert_eq!(run_dual(&arbiter(), &opts).unwrap().outcome, Outcome::Realizable);

        let v = run_dual(&problem(&["r"], &[], Semantics::Mealy, &["F r"]), &opts).unwrap();
        assert_eq!(v.outcome, Outcome::Unrealizable);
        let m = v.machine.unwrap();
        assert_eq!(m.semantics, Semantics::Moore);
        assert_eq!(m.outputs, vec!["r".to_string()]);
        assert_eq!(m.run(&[0, 0, 0]), vec![vec![false]; 3]);

        let v = run_dual(&problem(&[], &["g"], Semantics::Mealy, &["false"]), &opts).unwrap();
        assert_eq!((v.outcome, v.bound), (Outcome::Unrealizable, Some(1)));
    }
}
