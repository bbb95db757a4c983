use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::UniversalCoBuchi;

/// Moves rejecting sinks (only a tautological self-loop leaves them) from the
/// rejecting set to the safety set. Edges into them stay and act as
/// forbidden-entry conditions; their own edges are dropped.
pub(super) fn demote_safety_states(mut a: UniversalCoBuchi) -> UniversalCoBuchi {
    for q in 0..a.num_states() {
        if !a.rejecting[q] {
            continue;
        }
        let out = &a.edges[q];
        let is_sink = !out.is_empty()
            && out.iter().all(|e| e.target == q)
            && out.iter().any(|e| e.label.is_tautology());
        if is_sink {
            a.rejecting[q] = false;
            a.safety[q] = true;
            a.edges[q].clear();
        }
    }
    recount(&mut a);
    a
}

/// SCC partition of the edge graph and per-SCC rejecting counts.
pub(super) fn analyze_sccs(mut a: UniversalCoBuchi) -> UniversalCoBuchi {
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..a.num_states()).map(|_| g.add_node(())).collect();
    for (q, out) in a.edges.iter().enumerate() {
        for e in out {
            g.add_edge(nodes[q], nodes[e.target], ());
        }
    }
    for (id, comp) in tarjan_scc(&g).into_iter().enumerate() {
        for n in comp {
            a.scc[n.index()] = id;
        }
    }
    recount(&mut a);
    a
}

fn recount(a: &mut UniversalCoBuchi) {
    let num_sccs = a.scc.iter().copied().max().map_or(0, |m| m + 1);
    let mut counts = vec![0; num_sccs];
    for q in 0..a.num_states() {
        if a.rejecting[q] {
            counts[a.scc[q]] += 1;
        }
    }
    a.rejecting_in_scc = a.scc.iter().map(|&c| counts[c]).collect();
}
