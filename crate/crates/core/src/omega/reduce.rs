//! Language-preserving clean-up of translated Büchi automata: states that
//! cannot reach an accepting cycle are removed, and states that are
//! bisimilar letter by letter are merged.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::{Edge, Nba};
use crate::prop::Prop;

/// Above this many propositions the letter-wise bisimulation is skipped.
const MAX_BISIM_APS: usize = 12;

pub(super) fn reduce(nba: Nba) -> Nba {
    let nba = prune_empty(nba);
    if nba.aps.len() <= MAX_BISIM_APS {
        quotient(nba)
    } else {
        nba
    }
}

/// Keeps the initial state and every state from which an accepting cycle
/// is reachable.
fn prune_empty(nba: Nba) -> Nba {
    let n = nba.num_states();
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for (q, out) in nba.edges.iter().enumerate() {
        for e in out {
            g.add_edge(nodes[q], nodes[e.target], ());
        }
    }
    let mut live = vec![false; n];
    for comp in tarjan_scc(&g) {
        let cyclic = comp.len() > 1 || nba.edges[comp[0].index()].iter().any(|e| e.target == comp[0].index());
        if cyclic && comp.iter().any(|c| nba.accepting[c.index()]) {
            comp.iter().for_each(|c| live[c.index()] = true);
        }
    }
    // backward closure
    let mut changed = true;
    while changed {
        changed = false;
        for q in 0..n {
            if !live[q] && nba.edges[q].iter().any(|e| live[e.target]) {
                live[q] = true;
                changed = true;
            }
        }
    }
    let keep: Vec<bool> = (0..n).map(|q| live[q] || q == nba.initial).collect();
    let classes: Vec<Option<usize>> = {
        let mut next = 0;
        keep.iter()
            .map(|&k| {
                k.then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    };
    rebuild(&nba, &classes)
}

/// Merges states with equal acceptance whose successor classes agree on
/// every letter.
fn quotient(nba: Nba) -> Nba {
    let n = nba.num_states();
    let letters = 1u64 << nba.aps.len();
    let succ: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|q| {
            (0..letters)
                .map(|l| {
                    nba.edges[q]
                        .iter()
                        .filter(|e| e.label.eval(&|&p| l >> p & 1 == 1))
                        .map(|e| e.target)
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut class: Vec<usize> = nba.accepting.iter().map(|&a| usize::from(a)).collect();
    loop {
        let mut ids: HashMap<(usize, Vec<BTreeSet<usize>>), usize> = HashMap::new();
        let refined: Vec<usize> = (0..n)
            .map(|q| {
                let sig: Vec<BTreeSet<usize>> =
                    succ[q].iter().map(|ts| ts.iter().map(|&t| class[t]).collect()).collect();
                let len = ids.len();
                *ids.entry((class[q], sig)).or_insert(len)
            })
            .collect();
        let stable = ids.len() == class.iter().collect::<BTreeSet<_>>().len();
        class = refined;
        if stable {
            break;
        }
    }
    rebuild(&nba, &class.into_iter().map(Some).collect::<Vec<_>>())
}

/// Builds the automaton over the given state classes (`None` drops the
/// state). Each class takes the edges of its first member.
fn rebuild(nba: &Nba, classes: &[Option<usize>]) -> Nba {
    let count = classes.iter().flatten().max().map_or(0, |m| m + 1);
    let mut rep = vec![usize::MAX; count];
    for (q, c) in classes.iter().enumerate() {
        if let Some(c) = *c {
            if rep[c] == usize::MAX {
                rep[c] = q;
            }
        }
    }
    let edges = rep
        .iter()
        .map(|&q| {
            let mut by_target: BTreeMap<usize, Vec<Prop<usize>>> = BTreeMap::new();
            for e in &nba.edges[q] {
                if let Some(t) = classes[e.target] {
                    by_target.entry(t).or_default().push(e.label.clone());
                }
            }
            by_target
                .into_iter()
                .map(|(target, labels)| Edge { label: Prop::or_all(labels), target })
                .collect()
        })
        .collect();
    Nba {
        aps: nba.aps.clone(),
        initial: classes[nba.initial].expect("initial state is kept"),
        edges,
        accepting: rep.iter().map(|&q| nba.accepting[q]).collect(),
    }
}
