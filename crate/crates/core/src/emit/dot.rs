use std::collections::BTreeMap;
use std::fmt::Write;

use crate::machine::{Machine, Valuation};
use crate::prop::{Prop, SMV_SYNTAX};
use crate::specio::Semantics;

fn outputs_label(m: &Machine, values: &[bool]) -> String {
    m.outputs
        .iter()
        .zip(values)
        .map(|(name, &b)| if b { name.clone() } else { format!("!{name}") })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Graphviz digraph. Mealy edges are labelled `guard / outputs`, one line
/// per distinct output valuation; Moore states carry their outputs.
pub fn emit_dot(m: &Machine) -> String {
    let n = m.num_states();
    let ni = m.inputs.len();
    let name = |j: &usize| m.inputs[*j].clone();
    let mut s = String::from("digraph machine {\n  rankdir=LR;\n  node [shape=circle];\n");
    s.push_str("  init [shape=point];\n  init -> s0;\n");
    for k in 0..n {
        let label = match m.semantics {
            Semantics::Moore => format!("s{k}\\n{}", outputs_label(m, &m.output_values(k, 0))),
            Semantics::Mealy => format!("s{k}"),
        };
        writeln!(s, "  s{k} [label=\"{label}\"];").unwrap();
    }
    for from in 0..n {
        for to in 0..n {
            if m.guards[from][to].is_false() {
                continue;
            }
            let label = match m.semantics {
                Semantics::Moore => m.guards[from][to].render(&SMV_SYNTAX, &name),
                Semantics::Mealy => {
                    // group the valuations taking this edge by output valuation
                    let mut groups: BTreeMap<Vec<bool>, Vec<bool>> = BTreeMap::new();
                    for v in 0..m.num_valuations() as Valuation {
                        if m.successor(from, v) == Some(to) {
                            let table = groups
                                .entry(m.output_values(from, v))
                                .or_insert_with(|| vec![false; m.num_valuations()]);
                            table[v as usize] = true;
                        }
                    }
                    groups
                        .iter()
                        .map(|(outs, table)| {
                            let guard = Prop::from_truth_table(ni, table).render(&SMV_SYNTAX, &name);
                            format!("{guard} / {}", outputs_label(m, outs))
                        })
                        .collect::<Vec<_>>()
                        .join("\\n")
                }
            };
            writeln!(s, "  s{from} -> s{to} [label=\"{label}\"];").unwrap();
        }
    }
    s.push_str("}\n");
    s
}
