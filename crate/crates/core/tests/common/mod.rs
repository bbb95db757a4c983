//! Independent reference implementations used to check the pipeline: a
//! direct LTL evaluator on lasso words, NBA acceptance of lassos, a
//! brute-force QBF game evaluator, exhaustive machine enumeration, and
//! interpreters for the emitted AIGER and SMV documents.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

use bosy::logicir::{normalize_prefix, Cnf, Lit, Quant, QuantifiedCnf, Var};
use bosy::machine::Machine;
use bosy::omega::Nba;
use bosy::specio::{parse_spec, Semantics, SynthesisProblem};
use bosy::{Ltl, Prop};
use rand::Rng;

// ---------------------------------------------------------------- lassos

/// Ultimately periodic word `prefix · period^ω`; letters are bitmasks over
/// the proposition list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub prefix: Vec<u64>,
    pub period: Vec<u64>,
}

impl Lasso {
    pub fn len(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn letter(&self, i: usize) -> u64 {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[i - self.prefix.len()]
        }
    }

    pub fn succ(&self, i: usize) -> usize {
        if i + 1 < self.len() {
            i + 1
        } else {
            self.prefix.len()
        }
    }
}

/// Every lasso over `num_atoms` propositions with `1 <= |prefix|+|period| <= max_len`.
pub fn all_lassos(num_atoms: usize, max_len: usize) -> Vec<Lasso> {
    let letters = 1u64 << num_atoms;
    let mut out = Vec::new();
    for len in 1..=max_len {
        let total = letters.pow(len as u32);
        for code in 0..total {
            let word: Vec<u64> = (0..len).map(|k| code / letters.pow(k as u32) % letters).collect();
            for split in 0..len {
                out.push(Lasso { prefix: word[..split].to_vec(), period: word[split..].to_vec() });
            }
        }
    }
    out
}

// ------------------------------------------------------------ LTL oracle

/// Truth of `f` at every position of the lasso as a bitmask (bit `i` is
/// position `i`), computed by fixpoint iteration: least for U and F,
/// greatest for R, W and G.
pub fn eval_mask(f: &Ltl, aps: &[String], w: &Lasso) -> u64 {
    let n = w.len();
    assert!(n <= 63, "lasso too long for the mask evaluator");
    let all = (1u64 << n) - 1;
    // bit i of next(x) is bit succ(i) of x
    let next = |x: u64| (x >> 1) | ((x >> w.prefix.len() & 1) << (n - 1));
    // least or greatest solution of z = b | (a & next(z))
    let fix = |init: u64, a: u64, b: u64| {
        let mut z = init;
        loop {
            let z2 = b | (a & next(z));
            if z2 == z {
                return z;
            }
            z = z2;
        }
    };
    let rec = |g: &Ltl| eval_mask(g, aps, w);
    match f {
        Ltl::True => all,
        Ltl::False => 0,
        Ltl::Atom(a) => {
            let j = aps.iter().position(|x| x == a).expect("atom in proposition list");
            (0..n).filter(|&i| w.letter(i) >> j & 1 == 1).fold(0, |m, i| m | 1 << i)
        }
        Ltl::Not(x) => !rec(x) & all,
        Ltl::And(x, y) => rec(x) & rec(y),
        Ltl::Or(x, y) => rec(x) | rec(y),
        Ltl::Implies(x, y) => (!rec(x) | rec(y)) & all,
        Ltl::Next(x) => next(rec(x)),
        Ltl::Until(x, y) => fix(0, rec(x), rec(y)),
        Ltl::WeakUntil(x, y) => fix(all, rec(x), rec(y)),
        // a R b = b & (a | X(a R b)) = (a & b) | (b & X(a R b))
        Ltl::Release(x, y) => {
            let (a, b) = (rec(x), rec(y));
            fix(all, b, a & b)
        }
        Ltl::Finally(x) => fix(0, all, rec(x)),
        Ltl::Globally(x) => fix(all, rec(x), 0),
    }
}

pub fn eval_ltl(f: &Ltl, aps: &[String], w: &Lasso) -> bool {
    eval_mask(f, aps, w) & 1 == 1
}

// ------------------------------------------------------------ NBA oracle

/// An NBA with successor sets precomputed per letter as state bitmasks.
pub struct LetterNba {
    succ: Vec<Vec<u128>>,
    initial: usize,
    accepting: u128,
}

impl LetterNba {
    pub fn new(nba: &Nba) -> LetterNba {
        let nq = nba.num_states();
        assert!(nq <= 128, "automaton too large for the bitmask oracle");
        let letters = 1u64 << nba.aps.len();
        let succ = (0..letters)
            .map(|l| {
                (0..nq)
                    .map(|q| {
                        nba.edges[q]
                            .iter()
                            .filter(|e| e.label.eval(&|&p| l >> p & 1 == 1))
                            .fold(0u128, |m, e| m | 1 << e.target)
                    })
                    .collect()
            })
            .collect();
        let accepting = (0..nq).filter(|&q| nba.accepting[q]).fold(0u128, |m, q| m | 1 << q);
        LetterNba { succ, initial: nba.initial, accepting }
    }

    fn post(&self, letter: u64, set: u128) -> u128 {
        let row = &self.succ[letter as usize];
        let mut out = 0;
        let mut rest = set;
        while rest != 0 {
            let q = rest.trailing_zeros() as usize;
            out |= row[q];
            rest &= rest - 1;
        }
        out
    }

    fn pre(&self, letter: u64, target: u128) -> u128 {
        self.succ[letter as usize]
            .iter()
            .enumerate()
            .filter(|(_, &s)| s & target != 0)
            .fold(0, |m, (q, _)| m | 1 << q)
    }

    /// Does some run on `w` visit an accepting state infinitely often?
    ///
    /// The states reached after the prefix are intersected with the Büchi
    /// fixpoint `νZ. μY. (Acc ∩ pre(Z)) ∪ pre(Y)` over the period positions.
    pub fn accepts(&self, w: &Lasso) -> bool {
        let mut current: u128 = 1 << self.initial;
        for &l in &w.prefix {
            current = self.post(l, current);
        }
        let p = w.period.len();
        let pre_all = |x: &[u128]| -> Vec<u128> { (0..p).map(|j| self.pre(w.period[j], x[(j + 1) % p])).collect() };
        let mut z = vec![u128::MAX; p];
        loop {
            let pz = pre_all(&z);
            let mut y = vec![0u128; p];
            loop {
                let py = pre_all(&y);
                let y2: Vec<u128> = (0..p).map(|j| (self.accepting & pz[j]) | py[j]).collect();
                if y2 == y {
                    break;
                }
                y = y2;
            }
            if y == z {
                break;
            }
            z = y;
        }
        current & z[0] != 0
    }
}

/// Convenience wrapper building the letter tables on every call.
pub fn nba_accepts(nba: &Nba, w: &Lasso) -> bool {
    LetterNba::new(nba).accepts(w)
}

// ------------------------------------------------------- machine oracles

/// The trace produced by driving `m` with the input lasso, as a lasso over
/// inputs followed by outputs.
pub fn machine_trace(m: &Machine, input: &Lasso) -> Lasso {
    let ni = m.inputs.len();
    let combine = |s: usize, v: u64| {
        let outs = m.output_values(s, v);
        outs.iter().enumerate().fold(v, |acc, (o, &b)| acc | (u64::from(b) << (ni + o)))
    };
    let mut trace = Vec::new();
    let mut s = 0;
    for &v in &input.prefix {
        trace.push(combine(s, v));
        s = m.successor(s, v).expect("total machine");
    }
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    let mut j = 0;
    loop {
        if let Some(&start) = seen.get(&(j, s)) {
            return Lasso { prefix: trace[..start].to_vec(), period: trace[start..].to_vec() };
        }
        seen.insert((j, s), trace.len());
        let v = input.period[j];
        trace.push(combine(s, v));
        s = m.successor(s, v).expect("total machine");
        j = (j + 1) % input.period.len();
    }
}

/// Does `m` satisfy `f` on every input lasso of length at most `max_len`?
pub fn machine_satisfies(m: &Machine, f: &Ltl, max_len: usize) -> bool {
    let aps: Vec<String> = m.inputs.iter().chain(&m.outputs).cloned().collect();
    all_lassos(m.inputs.len(), max_len)
        .iter()
        .all(|w| eval_ltl(f, &aps, &machine_trace(m, w)))
}

/// All machines with exactly `n` states over the given signals.
pub fn all_machines(inputs: &[String], outputs: &[String], semantics: Semantics, n: usize) -> Vec<Machine> {
    let vals = 1usize << inputs.len();
    let no = outputs.len();
    let trans_slots = n * vals;
    let out_slots = match semantics {
        Semantics::Mealy => n * vals * no,
        Semantics::Moore => n * no,
    };
    let mut out = Vec::new();
    for tcode in 0..n.pow(trans_slots as u32) {
        let next: Vec<Vec<usize>> = (0..n)
            .map(|s| (0..vals).map(|k| tcode / n.pow((s * vals + k) as u32) % n).collect())
            .collect();
        for ocode in 0..1usize << out_slots {
            let table: Vec<Vec<Vec<bool>>> = (0..n)
                .map(|s| {
                    (0..vals)
                        .map(|k| {
                            (0..no)
                                .map(|o| {
                                    let slot = match semantics {
                                        Semantics::Mealy => (s * vals + k) * no + o,
                                        Semantics::Moore => s * no + o,
                                    };
                                    ocode >> slot & 1 == 1
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect();
            out.push(Machine::from_tables(inputs.to_vec(), outputs.to_vec(), semantics, &next, &table));
        }
    }
    out
}

// ------------------------------------------------------------ QBF oracle

/// Game evaluation of a prenex QBF; unbound variables are outermost
/// existentials.
pub fn qbf_eval(q: &QuantifiedCnf) -> bool {
    let n = q.cnf.num_vars as usize;
    let mut order: Vec<(Quant, Var)> = Vec::new();
    let blocks = normalize_prefix(&q.prefix);
    let bound: Vec<Var> = blocks.iter().flat_map(|b| b.vars.clone()).collect();
    for v in 1..=n as u32 {
        if !bound.contains(&Var(v)) {
            order.push((Quant::Exists, Var(v)));
        }
    }
    for b in &blocks {
        order.extend(b.vars.iter().map(|&v| (b.quant, v)));
    }
    let mut model = vec![false; n + 1];
    game(&q.cnf, &order, &mut model)
}

fn game(cnf: &Cnf, order: &[(Quant, Var)], model: &mut Vec<bool>) -> bool {
    let Some((&(quant, v), rest)) = order.split_first() else {
        return cnf.is_satisfied_by(model);
    };
    let mut results = [false, true].into_iter().map(|b| {
        model[v.index()] = b;
        game(cnf, rest, model)
    });
    match quant {
        Quant::Exists => results.any(|r| r),
        Quant::Forall => results.all(|r| r),
    }
}

pub fn brute_force_sat(cnf: &Cnf) -> bool {
    let n = cnf.num_vars as usize;
    (0..1u64 << n).any(|code| {
        let model: Vec<bool> = (0..=n).map(|v| v > 0 && code >> (v - 1) & 1 == 1).collect();
        cnf.is_satisfied_by(&model)
    })
}

pub fn random_cnf(rng: &mut impl Rng, max_vars: u32, max_clauses: usize) -> Cnf {
    let n = rng.gen_range(1..=max_vars);
    let mut cnf = Cnf::new(n);
    for _ in 0..rng.gen_range(0..=max_clauses) {
        let len = rng.gen_range(1..=3);
        let clause = (0..len)
            .map(|_| Lit::new(Var(rng.gen_range(1..=n)), rng.gen_bool(0.5)))
            .collect();
        cnf.add_clause(clause);
    }
    cnf
}

/// Random ∃∀∃ instance with at most `per_block` variables in each block.
pub fn random_qbf(rng: &mut impl Rng, per_block: u32, max_clauses: usize) -> QuantifiedCnf {
    use bosy::logicir::QuantBlock;
    let sizes: Vec<u32> = (0..3).map(|_| rng.gen_range(0..=per_block)).collect();
    let n: u32 = sizes.iter().sum::<u32>().max(1);
    let mut next = 1;
    let mut prefix = Vec::new();
    for (k, &size) in sizes.iter().enumerate() {
        let quant = if k == 1 { Quant::Forall } else { Quant::Exists };
        prefix.push(QuantBlock { quant, vars: (next..next + size).map(Var).collect() });
        next += size;
    }
    let mut cnf = random_cnf(rng, n, max_clauses);
    cnf.num_vars = n;
    for c in &mut cnf.clauses {
        for l in c.iter_mut() {
            if l.var().0 > n {
                *l = Lit::new(Var(n), l.is_positive());
            }
        }
    }
    QuantifiedCnf { prefix, cnf }
}

// ------------------------------------------------------------ AIGER

/// Parsed ASCII AIGER circuit.
#[derive(Debug)]
pub struct Aag {
    pub max_var: u32,
    pub inputs: Vec<u32>,
    pub latches: Vec<(u32, u32)>,
    pub outputs: Vec<u32>,
    pub ands: Vec<(u32, u32, u32)>,
    pub symbols: Vec<String>,
}

impl Aag {
    pub fn parse(text: &str) -> Aag {
        let mut lines = text.lines();
        let header: Vec<u32> = lines
            .next()
            .expect("header")
            .strip_prefix("aag ")
            .expect("aag header")
            .split_whitespace()
            .map(|x| x.parse().unwrap())
            .collect();
        let [m, i, l, o, a] = header[..] else { panic!("bad header") };
        let mut nums = |k: usize| -> Vec<Vec<u32>> {
            (0..k)
                .map(|_| lines.next().unwrap().split_whitespace().map(|x| x.parse().unwrap()).collect())
                .collect()
        };
        let inputs = nums(i as usize).into_iter().map(|v| v[0]).collect();
        let latches = nums(l as usize).into_iter().map(|v| (v[0], v[1])).collect();
        let outputs = nums(o as usize).into_iter().map(|v| v[0]).collect();
        let ands = nums(a as usize).into_iter().map(|v| (v[0], v[1], v[2])).collect();
        let symbols = lines.map(str::to_string).collect();
        Aag { max_var: m, inputs, latches, outputs, ands, symbols }
    }

    /// Output values per step, latches starting at 0.
    pub fn simulate(&self, inputs: &[u64]) -> Vec<Vec<bool>> {
        let mut value = vec![false; self.max_var as usize + 1];
        let mut latch_state = vec![false; self.latches.len()];
        let lit = |value: &[bool], l: u32| value[(l / 2) as usize] ^ (l & 1 == 1);
        let mut trace = Vec::new();
        for &v in inputs {
            for (j, &x) in self.inputs.iter().enumerate() {
                value[(x / 2) as usize] = v >> j & 1 == 1;
            }
            for (k, &(x, _)) in self.latches.iter().enumerate() {
                value[(x / 2) as usize] = latch_state[k];
            }
            for &(x, y, z) in &self.ands {
                value[(x / 2) as usize] = lit(&value, y) && lit(&value, z);
            }
            trace.push(self.outputs.iter().map(|&o| lit(&value, o)).collect());
            latch_state = self.latches.iter().map(|&(_, nx)| lit(&value, nx)).collect();
        }
        trace
    }
}

// ------------------------------------------------------------ SMV

/// The subset of SMV produced by the emitter: a case-defined `state` and
/// output DEFINEs over `state = sK & guard` terms.
#[derive(Debug)]
pub struct Smv {
    pub states: Vec<String>,
    pub inputs: Vec<String>,
    pub cases: Vec<(usize, String, usize)>,
    pub defines: BTreeMap<String, String>,
}

impl Smv {
    pub fn parse(text: &str) -> Smv {
        let mut smv = Smv { states: vec![], inputs: vec![], cases: vec![], defines: BTreeMap::new() };
        let state_index = |name: &str| name.trim().strip_prefix('s').unwrap().parse::<usize>().unwrap();
        for line in text.lines().map(str::trim) {
            if let Some(rest) = line.strip_prefix("state: {") {
                smv.states = rest.trim_end_matches("};").split(", ").map(str::to_string).collect();
            } else if let Some(name) = line.strip_suffix(" : boolean;") {
                smv.inputs.push(name.to_string());
            } else if line.starts_with("state = ") && line.ends_with(';') {
                let body = line.strip_prefix("state = ").unwrap().trim_end_matches(';');
                let (cond, target) = body.rsplit_once(" : ").unwrap();
                let (src, guard) = cond.split_once(" & ").unwrap();
                smv.cases.push((state_index(src), guard.to_string(), state_index(target)));
            } else if let Some((name, rhs)) = line.split_once(" := ") {
                if !name.contains('(') {
                    smv.defines.insert(name.to_string(), rhs.trim_end_matches(';').to_string());
                }
            }
        }
        smv
    }

    fn env(&self, state: usize, v: u64) -> HashMap<String, bool> {
        let mut env: HashMap<String, bool> =
            self.inputs.iter().enumerate().map(|(j, x)| (x.clone(), v >> j & 1 == 1)).collect();
        for (k, s) in self.states.iter().enumerate() {
            env.insert(format!("state = {s}"), k == state);
        }
        env
    }

    /// Output values per step for the given outputs, starting in `s0`.
    pub fn simulate(&self, outputs: &[String], inputs: &[u64]) -> Vec<Vec<bool>> {
        let mut state = 0;
        let mut trace = Vec::new();
        for &v in inputs {
            let env = self.env(state, v);
            trace.push(outputs.iter().map(|o| eval_smv(&self.defines[o], &env)).collect());
            state = self
                .cases
                .iter()
                .find(|(src, g, _)| *src == state && eval_smv(g, &env))
                .map(|c| c.2)
                .expect("case covers every input");
        }
        trace
    }
}

/// Evaluates an SMV boolean expression with `&`, `|`, `!`, parentheses,
/// TRUE/FALSE, identifiers and `state = sK` atoms.
pub fn eval_smv(expr: &str, env: &HashMap<String, bool>) -> bool {
    let tokens = smv_tokens(expr);
    let mut pos = 0;
    let v = smv_or(&tokens, &mut pos, env);
    assert_eq!(pos, tokens.len(), "trailing tokens in {expr}");
    v
}

fn smv_tokens(expr: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let chars: Vec<char> = expr.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if "()&|!".contains(c) {
            out.push(c.to_string());
            i += 1;
        } else if c == '=' {
            // fold `state = sK` into one atom
            let prev = out.pop().unwrap();
            i += 1;
            while chars[i].is_whitespace() {
                i += 1;
            }
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let rhs: String = chars[start..i].iter().collect();
            out.push(format!("{prev} = {rhs}"));
        } else {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(chars[start..i].iter().collect());
        }
    }
    out
}

fn smv_or(t: &[String], pos: &mut usize, env: &HashMap<String, bool>) -> bool {
    let mut v = smv_and(t, pos, env);
    while t.get(*pos).map(String::as_str) == Some("|") {
        *pos += 1;
        v |= smv_and(t, pos, env);
    }
    v
}

fn smv_and(t: &[String], pos: &mut usize, env: &HashMap<String, bool>) -> bool {
    let mut v = smv_unary(t, pos, env);
    while t.get(*pos).map(String::as_str) == Some("&") {
        *pos += 1;
        v &= smv_unary(t, pos, env);
    }
    v
}

fn smv_unary(t: &[String], pos: &mut usize, env: &HashMap<String, bool>) -> bool {
    let tok = t[*pos].clone();
    *pos += 1;
    match tok.as_str() {
        "!" => !smv_unary(t, pos, env),
        "(" => {
            let v = smv_or(t, pos, env);
            assert_eq!(t[*pos], ")");
            *pos += 1;
            v
        }
        "TRUE" => true,
        "FALSE" => false,
        name => *env.get(name).unwrap_or_else(|| panic!("unknown identifier {name}")),
    }
}

// ------------------------------------------------------------ DOT

/// Checks the DOT subset grammar: `digraph ID { stmt* }` where statements
/// are node, edge, attribute or `ID = ID` assignments, each ending in `;`.
pub fn is_valid_dot(text: &str) -> bool {
    let toks = dot_tokens(text);
    let mut p = 0;
    let expect = |p: &mut usize, s: &str| -> bool {
        if toks.get(*p).map(String::as_str) == Some(s) {
            *p += 1;
            true
        } else {
            false
        }
    };
    let is_id = |s: &str| s.starts_with('"') || s.chars().all(|c| c.is_alphanumeric() || c == '_');
    if !expect(&mut p, "digraph") || !toks.get(p).is_some_and(|t| is_id(t)) {
        return false;
    }
    p += 1;
    if !expect(&mut p, "{") {
        return false;
    }
    while p < toks.len() && toks[p] != "}" {
        if !is_id(&toks[p]) {
            return false;
        }
        p += 1;
        if expect(&mut p, "=") {
            if !toks.get(p).is_some_and(|t| is_id(t)) {
                return false;
            }
            p += 1;
        } else {
            while expect(&mut p, "->") {
                if !toks.get(p).is_some_and(|t| is_id(t)) {
                    return false;
                }
                p += 1;
            }
            if expect(&mut p, "[") {
                loop {
                    if expect(&mut p, "]") {
                        break;
                    }
                    let ok = toks.get(p).is_some_and(|t| is_id(t))
                        && toks.get(p + 1).map(String::as_str) == Some("=")
                        && toks.get(p + 2).is_some_and(|t| is_id(t));
                    if !ok {
                        return false;
                    }
                    p += 3;
                    let _ = expect(&mut p, ",") || expect(&mut p, ";");
                }
            }
        }
        if !expect(&mut p, ";") {
            return false;
        }
    }
    expect(&mut p, "}") && p == toks.len()
}

fn dot_tokens(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '"' {
            let start = i;
            i += 1;
            while chars[i] != '"' {
                if chars[i] == '\\' {
                    i += 1;
                }
                i += 1;
            }
            i += 1;
            out.push(chars[start..i].iter().collect());
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push("->".into());
            i += 2;
        } else if "{}[]=;,".contains(c) {
            out.push(c.to_string());
            i += 1;
        } else {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            if start == i {
                return vec!["<invalid>".into()];
            }
            out.push(chars[start..i].iter().collect());
        }
    }
    out
}

// ------------------------------------------------------------ suite

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expected {
    Realizable(usize),
    Unrealizable(usize),
}

pub struct SuiteSpec {
    pub name: String,
    pub problem: SynthesisProblem,
    pub expected: Expected,
}

pub fn suite_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("suite")
}

pub fn load_suite() -> Vec<SuiteSpec> {
    let dir = suite_dir();
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("expected.json")).unwrap()).unwrap();
    let mut specs: Vec<SuiteSpec> = manifest
        .as_object()
        .unwrap()
        .iter()
        .map(|(name, e)| {
            let text = std::fs::read_to_string(dir.join(format!("{name}.json"))).unwrap();
            let bound = e["bound"].as_u64().unwrap() as usize;
            let expected = match e["outcome"].as_str().unwrap() {
                "realizable" => Expected::Realizable(bound),
                "unrealizable" => Expected::Unrealizable(bound),
                other => panic!("unknown outcome {other}"),
            };
            SuiteSpec { name: name.clone(), problem: parse_spec(&text).unwrap(), expected }
        })
        .collect();
    specs.sort_by(|a, b| a.name.cmp(&b.name));
    specs
}

pub fn arbiter() -> SynthesisProblem {
    parse_spec(&std::fs::read_to_string(suite_dir().join("arbiter.json")).unwrap()).unwrap()
}

/// The two-state machine granting the clients in turn regardless of
/// requests.
pub fn alternating_grant() -> Machine {
    Machine {
        inputs: vec!["r_0".into(), "r_1".into()],
        outputs: vec!["g_0".into(), "g_1".into()],
        semantics: Semantics::Mealy,
        guards: vec![vec![Prop::False, Prop::True], vec![Prop::True, Prop::False]],
        output_fns: vec![vec![Prop::False, Prop::True], vec![Prop::True, Prop::False]],
    }
}

// ------------------------------------------------------------ formulas

/// Every formula with exactly `size` nodes over the given atoms, built from
/// constants, atoms, `! X F G` and `&& || -> U R W`.
pub fn formulas_of_size(atoms: &[&str], size: usize, memo: &mut HashMap<usize, Vec<Ltl>>) -> Vec<Ltl> {
    if let Some(v) = memo.get(&size) {
        return v.clone();
    }
    let mut out = Vec::new();
    if size == 1 {
        out.push(Ltl::True);
        out.push(Ltl::False);
        out.extend(atoms.iter().map(|a| Ltl::atom(*a)));
    } else {
        for f in formulas_of_size(atoms, size - 1, memo) {
            out.push(Ltl::not(f.clone()));
            out.push(Ltl::next(f.clone()));
            out.push(Ltl::finally(f.clone()));
            out.push(Ltl::globally(f));
        }
        for left in 1..size - 1 {
            let ls = formulas_of_size(atoms, left, memo);
            let rs = formulas_of_size(atoms, size - 1 - left, memo);
            for l in &ls {
                for r in &rs {
                    out.push(Ltl::and(l.clone(), r.clone()));
                    out.push(Ltl::or(l.clone(), r.clone()));
                    out.push(Ltl::implies(l.clone(), r.clone()));
                    out.push(Ltl::until(l.clone(), r.clone()));
                    out.push(Ltl::release(l.clone(), r.clone()));
                    out.push(Ltl::weak_until(l.clone(), r.clone()));
                }
            }
        }
    }
    memo.insert(size, out.clone());
    out
}
