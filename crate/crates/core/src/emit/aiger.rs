use std::collections::HashMap;
use std::fmt::Write;

use crate::machine::Machine;
use crate::prop::Prop;

const FALSE: u32 = 0;
const TRUE: u32 = 1;

/// And-inverter graph under construction. Literals follow AIGER numbering:
/// `2 * var + negated`, with inputs first, then latches, then AND gates.
#[derive(Debug, Clone)]
pub struct Aig {
    num_inputs: u32,
    num_latches: u32,
    ands: Vec<(u32, u32)>,
    hash: HashMap<(u32, u32), u32>,
}

impl Aig {
    pub fn new(num_inputs: u32, num_latches: u32) -> Self {
        Aig { num_inputs, num_latches, ands: Vec::new(), hash: HashMap::new() }
    }

    pub fn input(&self, j: u32) -> u32 {
        2 * (j + 1)
    }

    pub fn latch(&self, k: u32) -> u32 {
        2 * (self.num_inputs + k + 1)
    }

    fn first_and_var(&self) -> u32 {
        self.num_inputs + self.num_latches + 1
    }

    pub fn and(&mut self, a: u32, b: u32) -> u32 {
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        if lo == FALSE || hi == lo ^ 1 {
            return FALSE;
        }
        if lo == TRUE || hi == lo {
            return hi;
        }
        if let Some(&l) = self.hash.get(&(hi, lo)) {
            return l;
        }
        let l = 2 * (self.first_and_var() + self.ands.len() as u32);
        self.ands.push((hi, lo));
        self.hash.insert((hi, lo), l);
        l
    }

    pub fn or(&mut self, a: u32, b: u32) -> u32 {
        self.and(a ^ 1, b ^ 1) ^ 1
    }

    pub fn and_all(&mut self, lits: impl IntoIterator<Item = u32>) -> u32 {
        lits.into_iter().fold(TRUE, |acc, l| self.and(acc, l))
    }

    pub fn or_all(&mut self, lits: impl IntoIterator<Item = u32>) -> u32 {
        lits.into_iter().fold(FALSE, |acc, l| self.or(acc, l))
    }

    /// Literal for a formula over input indices.
    pub fn formula(&mut self, p: &Prop<usize>) -> u32 {
        match p {
            Prop::True => TRUE,
            Prop::False => FALSE,
            Prop::Atom(j) => self.input(*j as u32),
            Prop::Not(q) => self.formula(q) ^ 1,
            Prop::And(ps) => {
                let lits: Vec<u32> = ps.iter().map(|q| self.formula(q)).collect();
                self.and_all(lits)
            }
            Prop::Or(ps) => {
                let lits: Vec<u32> = ps.iter().map(|q| self.formula(q)).collect();
                self.or_all(lits)
            }
        }
    }

    /// Keeps only the gates reachable from `roots`, renumbered in creation
    /// order, and returns the roots translated to the new numbering.
    fn compact(&mut self, roots: &[u32]) -> Vec<u32> {
        let base = self.first_and_var();
        let mut live = vec![false; self.ands.len()];
        let mut stack: Vec<u32> = roots.to_vec();
        while let Some(l) = stack.pop() {
            let v = l / 2;
            if v >= base && !live[(v - base) as usize] {
                live[(v - base) as usize] = true;
                let (a, b) = self.ands[(v - base) as usize];
                stack.extend([a, b]);
            }
        }
        let mut renumber = vec![0u32; self.ands.len()];
        let mut next = base;
        for (i, &alive) in live.iter().enumerate() {
            if alive {
                renumber[i] = next;
                next += 1;
            }
        }
        let map = |l: u32| -> u32 {
            let v = l / 2;
            if v >= base {
                (2 * renumber[(v - base) as usize]) | (l & 1)
            } else {
                l
            }
        };
        let mut ands = Vec::new();
        for (i, &(a, b)) in self.ands.iter().enumerate() {
            if live[i] {
                let (a, b) = (map(a), map(b));
                ands.push(if a >= b { (a, b) } else { (b, a) });
            }
        }
        self.ands = ands;
        self.hash.clear();
        roots.iter().map(|&l| map(l)).collect()
    }
}

fn num_latches(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// ASCII AIGER with the state in binary over `⌈log2 n⌉` latches. Codes at
/// or above `n` behave like state 0.
pub fn emit_aiger(m: &Machine) -> String {
    let n = m.num_states();
    let nl = num_latches(n);
    let ni = m.inputs.len() as u32;
    let mut aig = Aig::new(ni, nl);

    // code(s): conjunction of latch literals matching the binary code
    let mut select = vec![FALSE; n];
    for (s, sel) in select.iter_mut().enumerate().skip(1) {
        let bits: Vec<u32> = (0..nl).map(|k| aig.latch(k) ^ u32::from(s >> k & 1 == 0)).collect();
        *sel = aig.and_all(bits);
    }
    if n > 0 {
        let others = select[1..].to_vec();
        select[0] = aig.or_all(others) ^ 1;
    }

    let mut next = Vec::new();
    for k in 0..nl {
        let mut terms = Vec::new();
        for (s, &sel) in select.iter().enumerate() {
            let targets: Vec<u32> = (0..n)
                .filter(|t| t >> k & 1 == 1)
                .map(|t| aig.formula(&m.guards[s][t]))
                .collect();
            let moves = aig.or_all(targets);
            terms.push(aig.and(sel, moves));
        }
        next.push(aig.or_all(terms));
    }
    let mut outs = Vec::new();
    for o in 0..m.outputs.len() {
        let mut terms = Vec::new();
        for (s, &sel) in select.iter().enumerate() {
            let f = aig.formula(&m.output_fns[s][o]);
            terms.push(aig.and(sel, f));
        }
        outs.push(aig.or_all(terms));
    }

    let roots: Vec<u32> = next.iter().chain(&outs).copied().collect();
    let roots = aig.compact(&roots);
    let (next, outs) = roots.split_at(nl as usize);

    let mut s = String::new();
    let a = aig.ands.len() as u32;
    writeln!(s, "aag {} {} {} {} {}", ni + nl + a, ni, nl, outs.len(), a).unwrap();
    for j in 0..ni {
        writeln!(s, "{}", aig.input(j)).unwrap();
    }
    for k in 0..nl {
        writeln!(s, "{} {}", aig.latch(k), next[k as usize]).unwrap();
    }
    for o in outs {
        writeln!(s, "{o}").unwrap();
    }
    for (i, &(x, y)) in aig.ands.iter().enumerate() {
        writeln!(s, "{} {} {}", 2 * (aig.first_and_var() + i as u32), x, y).unwrap();
    }
    for (j, name) in m.inputs.iter().enumerate() {
        writeln!(s, "i{j} {name}").unwrap();
    }
    for k in 0..nl {
        writeln!(s, "l{k} s{k}").unwrap();
    }
    for (o, name) in m.outputs.iter().enumerate() {
        writeln!(s, "o{o} {name}").unwrap();
    }
    s
}
