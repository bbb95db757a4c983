use std::fmt::Write;

use crate::machine::Machine;
use crate::prop::{Prop, SMV_SYNTAX};

fn render(m: &Machine, p: &Prop<usize>) -> String {
    match p {
        Prop::Or(_) => format!("({})", p.render(&SMV_SYNTAX, &|&j| m.inputs[j].clone())),
        _ => p.render(&SMV_SYNTAX, &|&j| m.inputs[j].clone()),
    }
}

/// NuSMV model: a `state` variable, one boolean per input, a case over
/// `(state, guard)` for the successor, and one DEFINE per output.
pub fn emit_smv(m: &Machine) -> String {
    let n = m.num_states();
    let mut s = String::new();
    s.push_str("MODULE main\n  VAR\n");
    let states: Vec<String> = (0..n).map(|k| format!("s{k}")).collect();
    writeln!(s, "    state: {{{}}};", states.join(", ")).unwrap();
    for i in &m.inputs {
        writeln!(s, "    {i} : boolean;").unwrap();
    }
    s.push_str("  ASSIGN\n    init(state) := s0;\n    next(state) := case\n");
    for from in 0..n {
        for to in 0..n {
            let g = &m.guards[from][to];
            if !g.is_false() {
                writeln!(s, "      state = s{from} & {} : s{to};", render(m, g)).unwrap();
            }
        }
    }
    s.push_str("    esac;\n");
    if !m.outputs.is_empty() {
        s.push_str("  DEFINE\n");
    }
    for (o, name) in m.outputs.iter().enumerate() {
        let terms: Vec<String> = (0..n)
            .filter(|&k| !m.output_fns[k][o].is_false())
            .map(|k| format!("(state = s{k} & {})", render(m, &m.output_fns[k][o])))
            .collect();
        let rhs = if terms.is_empty() { "FALSE".to_string() } else { terms.join(" | ") };
        writeln!(s, "    {name} := {rhs};").unwrap();
    }
    s
}
