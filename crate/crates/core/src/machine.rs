//! Finite-state implementations and their verification against a universal
//! co-Büchi automaton.

use std::collections::HashMap;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::error::{Error, Result};
use crate::omega::UniversalCoBuchi;
use crate::prop::Prop;
use crate::specio::Semantics;

/// Input valuations are bitmasks: input `j` is bit `j`.
pub type Valuation = u64;

/// A Mealy or Moore machine with states `0..n`, initial state 0.
///
/// `guards[s][t]` is a formula over input indices under which `s` moves to
/// `t`. `output_fns[s][o]` gives output `o` in state `s`, over input
/// indices for Mealy machines and constant for Moore machines.
#[derive(Debug, Clone, PartialEq)]
pub struct Machine {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub semantics: Semantics,
    pub guards: Vec<Vec<Prop<usize>>>,
    pub output_fns: Vec<Vec<Prop<usize>>>,
}

fn bit(v: Valuation, j: usize) -> bool {
    v >> j & 1 == 1
}

impl Machine {
    /// Builds a machine from explicit tables indexed by input valuation:
    /// `next[s][k]` is the successor and `out[s][k][o]` the output values.
    pub fn from_tables(
        inputs: Vec<String>,
        outputs: Vec<String>,
        semantics: Semantics,
        next: &[Vec<usize>],
        out: &[Vec<Vec<bool>>],
    ) -> Machine {
        let n = next.len();
        let ni = inputs.len();
        let guards = (0..n)
            .map(|s| {
                (0..n)
                    .map(|t| {
                        let table: Vec<bool> = next[s].iter().map(|&x| x == t).collect();
                        Prop::from_truth_table(ni, &table)
                    })
                    .collect()
            })
            .collect();
        let output_fns = (0..n)
            .map(|s| {
                (0..outputs.len())
                    .map(|o| {
                        let table: Vec<bool> = out[s].iter().map(|row| row[o]).collect();
                        Prop::from_truth_table(ni, &table)
                    })
                    .collect()
            })
            .collect();
        Machine { inputs, outputs, semantics, guards, output_fns }
    }

    pub fn num_states(&self) -> usize {
        self.guards.len()
    }

    pub fn num_valuations(&self) -> usize {
        1 << self.inputs.len()
    }

    /// The first successor of `s` enabled under `v`.
    pub fn successor(&self, s: usize, v: Valuation) -> Option<usize> {
        self.guards[s].iter().position(|g| g.eval(&|&j| bit(v, j)))
    }

    pub fn output_values(&self, s: usize, v: Valuation) -> Vec<bool> {
        self.output_fns[s].iter().map(|f| f.eval(&|&j| bit(v, j))).collect()
    }

    /// Every state has exactly one enabled successor for every input
    /// valuation, and Moore outputs do not read inputs.
    pub fn check_total_deterministic(&self) -> bool {
        if self.inputs.len() > 16 {
            return false;
        }
        let n = self.num_states();
        if n == 0 || self.guards.iter().any(|row| row.len() != n) {
            return false;
        }
        if self.output_fns.iter().any(|row| row.len() != self.outputs.len()) {
            return false;
        }
        if self.semantics == Semantics::Moore && self.output_fns.iter().flatten().any(|f| !f.atoms().is_empty()) {
            return false;
        }
        (0..n).all(|s| {
            (0..self.num_valuations() as Valuation)
                .all(|v| self.guards[s].iter().filter(|g| g.eval(&|&j| bit(v, j))).count() == 1)
        })
    }

    /// Runs the machine on an input sequence, returning the outputs per step.
    pub fn run(&self, inputs: &[Valuation]) -> Vec<Vec<bool>> {
        let mut s = 0;
        let mut trace = Vec::with_capacity(inputs.len());
        for &v in inputs {
            trace.push(self.output_values(s, v));
            s = self.successor(s, v).unwrap_or(0);
        }
        trace
    }
}

/// Checks that every run of `a` on every trace of `m` is accepted: no
/// forbidden (safety) state is reached and no reachable cycle of the
/// product visits a rejecting state.
pub fn model_check(m: &Machine, a: &UniversalCoBuchi) -> Result<bool> {
    let signals: Vec<String> = m.inputs.iter().chain(&m.outputs).cloned().collect();
    if signals != a.aps {
        return Err(Error::SignalMismatch(format!(
            "machine signals {:?} differ from automaton propositions {:?}",
            signals, a.aps
        )));
    }
    let ni = m.inputs.len();
    let mut graph = DiGraph::<(usize, usize), ()>::new();
    let mut index: HashMap<(usize, usize), NodeIndex> = HashMap::new();
    let start = (0, a.initial);
    if a.safety[a.initial] {
        return Ok(false);
    }
    index.insert(start, graph.add_node(start));
    let mut work = vec![start];
    while let Some((s, q)) = work.pop() {
        let from = index[&(s, q)];
        for v in 0..m.num_valuations() as Valuation {
            let Some(t) = m.successor(s, v) else {
                return Err(Error::Encoding(format!("machine is partial in state {s}")));
            };
            let outs = m.output_values(s, v);
            let letter = |&p: &usize| if p < ni { bit(v, p) } else { outs[p - ni] };
            for e in &a.edges[q] {
                if !e.label.eval(&letter) {
                    continue;
                }
                if a.safety[e.target] {
                    return Ok(false);
                }
                let node = (t, e.target);
                let to = *index.entry(node).or_insert_with(|| {
                    work.push(node);
                    graph.add_node(node)
                });
                graph.update_edge(from, to, ());
            }
        }
    }
    for comp in tarjan_scc(&graph) {
        let cyclic = comp.len() > 1 || graph.contains_edge(comp[0], comp[0]);
        if cyclic && comp.iter().any(|&n| a.rejecting[graph[n].1]) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::omega::build_ucw;
    use crate::specio::SynthesisProblem;

    /// The two-state machine alternating the grant between the clients.
    pub(crate) fn alternating_grant() -> Machine {
        Machine {
            inputs: vec!["r_0".into(), "r_1".into()],
            outputs: vec!["g_0".into(), "g_1".into()],
            semantics: Semantics::Mealy,
            guards: vec![vec![Prop::False, Prop::True], vec![Prop::True, Prop::False]],
            output_fns: vec![vec![Prop::False, Prop::True], vec![Prop::True, Prop::False]],
        }
    }

    fn arbiter() -> SynthesisProblem {
        SynthesisProblem::new(
            &["r_0", "r_1"],
            &["g_0", "g_1"],
            Semantics::Mealy,
            vec![],
            vec![
                "G (r_0 -> F g_0)".parse().unwrap(),
                "G (r_1 -> F g_1)".parse().unwrap(),
                "G !(g_0 && g_1)".parse().unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn totality() {
        assert!(alternating_grant().check_total_deterministic());
        let mut nondet = alternating_grant();
        nondet.guards[0][0] = Prop::True;
        assert!(!nondet.check_total_deterministic());
        let mut partial = alternating_grant();
        partial.guards[0][1] = Prop::atom(0);
        assert!(!partial.check_total_deterministic());
    }

    #[test]
    fn alternating_grant_realizes_arbiter() {
        let ucw = build_ucw(&arbiter()).unwrap();
        assert!(model_check(&alternating_grant(), &ucw).unwrap());
        assert!(model_check(&alternating_grant(), &ucw.clone().optimized()).unwrap());
    }

    #[test]
    fn constant_grants_violate_mutex() {
        let ucw = build_ucw(&arbiter()).unwrap();
        let mut m = alternating_grant();
        m.output_fns = vec![vec![Prop::True, Prop::True]; 2];
        assert!(!model_check(&m, &ucw).unwrap());
    }

    #[test]
    fn empty_acceptance_accepts_everything() {
        let mut ucw = build_ucw(&arbiter()).unwrap();
        ucw.rejecting.iter_mut().for_each(|r| *r = false);
        let mut m = alternating_grant();
        m.output_fns = vec![vec![Prop::True, Prop::True]; 2];
        assert!(model_check(&m, &ucw).unwrap());
    }

    #[test]
    fn signal_mismatch() {
        let ucw = build_ucw(&arbiter()).unwrap();
        let mut m = alternating_grant();
        m.outputs.reverse();
        assert!(matches!(model_check(&m, &ucw), Err(Error::SignalMismatch(_))));
    }

    #[test]
    fn tables_roundtrip() {
        let m = Machine::from_tables(
            vec!["r".into()],
            vec!["g".into()],
            Semantics::Mealy,
            &[vec![0, 1], vec![1, 0]],
            &[vec![vec![false], vec![true]], vec![vec![true], vec![false]]],
        );
        assert!(m.check_total_deterministic());
        assert_eq!(m.successor(0, 1), Some(1));
        assert_eq!(m.run(&[1, 1, 0]), vec![vec![true], vec![false], vec![false]]);
    }
}
