//! Bounded-synthesis constraint systems.
//!
//! For a bound `n` the encoders assert the existence of a machine with `n`
//! states together with an annotation of the product of machine and
//! automaton: `λB(s,q)` marks reachable pairs and the counter `λ#(s,q)`
//! bounds the number of rejecting visits. Both encodings share the
//! constraint builder and differ only in how inputs are treated: the
//! propositional encoding unrolls every input valuation, the input-symbolic
//! one quantifies the inputs universally.

use std::borrow::Cow;

use crate::error::{Error, Result};
use crate::logicir::{Assignment, BoundedNat, CmpOp, ConstraintSystem, Quant, Term, Var};
use crate::machine::Machine;
use crate::omega::UniversalCoBuchi;
use crate::prop::Prop;
use crate::solve::SkolemModel;
use crate::specio::{Semantics, SynthesisProblem};

/// Input width up to which the propositional encoding unrolls valuations.
pub const MAX_UNROLLED_INPUTS: usize = 16;

/// Everything an encoder needs besides the encoding style.
#[derive(Debug, Clone)]
pub struct EncodingContext {
    pub automaton: UniversalCoBuchi,
    pub bound: usize,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub semantics: Semantics,
}

impl EncodingContext {
    /// Context for the player controlling `problem`'s outputs.
    pub fn new(problem: &SynthesisProblem, automaton: UniversalCoBuchi, bound: usize) -> Self {
        EncodingContext {
            automaton,
            bound,
            inputs: problem.observes().to_vec(),
            outputs: problem.controls().to_vec(),
            semantics: problem.semantics,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncodingKind {
    Propositional,
    InputSymbolic,
}

/// A constraint system plus the handles needed to read a machine back from
/// a model.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub kind: EncodingKind,
    pub system: ConstraintSystem,
    /// `λB(s,q)`.
    pub reach: Vec<Vec<Var>>,
    /// `λ#(s,q)`, absent where `r(q) = 0`.
    pub counters: Vec<Vec<Option<BoundedNat>>>,
    /// `δ(s,i)` indexed by valuation (propositional) or a single symbolic
    /// entry per state.
    pub delta: Vec<Vec<BoundedNat>>,
    /// Output variables `[s][i][o]`, laid out like `delta`. Moore machines
    /// share one variable across valuations.
    pub outputs: Vec<Vec<Vec<Var>>>,
    /// Universally quantified input variables (input-symbolic only).
    pub input_vars: Vec<Var>,
}

/// A satisfying assignment in the shape the encoding produces.
#[derive(Debug, Clone, Copy)]
pub enum EncodingModel<'a> {
    Total(&'a Assignment),
    Skolem(&'a SkolemModel),
}

pub fn encode_propositional(ctx: &EncodingContext) -> Result<Encoding> {
    if ctx.inputs.len() > MAX_UNROLLED_INPUTS {
        return Err(Error::Encoding(format!(
            "{} inputs exceed the unrolling limit of {MAX_UNROLLED_INPUTS}",
            ctx.inputs.len()
        )));
    }
    build(ctx, EncodingKind::Propositional)
}

pub fn encode_input_symbolic(ctx: &EncodingContext) -> Result<Encoding> {
    build(ctx, EncodingKind::InputSymbolic)
}

fn instantiate(label: &Prop<usize>, inputs: &[Term], outputs: &[Var]) -> Term {
    match label {
        Prop::True => Term::Const(true),
        Prop::False => Term::Const(false),
        Prop::Atom(p) if *p < inputs.len() => inputs[*p].clone(),
        Prop::Atom(p) => Term::Var(outputs[p - inputs.len()]),
        Prop::Not(x) => Term::not(instantiate(x, inputs, outputs)),
        Prop::And(xs) => Term::and(xs.iter().map(|x| instantiate(x, inputs, outputs))),
        Prop::Or(xs) => Term::or(xs.iter().map(|x| instantiate(x, inputs, outputs))),
    }
}

fn build(ctx: &EncodingContext, kind: EncodingKind) -> Result<Encoding> {
    let n = ctx.bound;
    if n < 1 {
        return Err(Error::Encoding("bound must be at least 1".into()));
    }
    let a = &ctx.automaton;
    let expected: Vec<String> = ctx.inputs.iter().chain(&ctx.outputs).cloned().collect();
    if a.aps != expected {
        return Err(Error::SignalMismatch(format!(
            "automaton propositions {:?} differ from signals {:?}",
            a.aps, expected
        )));
    }
    let nq = a.num_states();
    let ni = ctx.inputs.len();
    let mut cs = ConstraintSystem::default();

    let reach: Vec<Vec<Var>> =
        (0..n).map(|s| (0..nq).map(|q| cs.fresh_var(format!("reach({s},{q})"))).collect()).collect();
    let counters: Vec<Vec<Option<BoundedNat>>> = (0..n)
        .map(|s| {
            (0..nq)
                .map(|q| {
                    let cap = a.counter_capacity(q, n) as u64;
                    (cap > 0).then(|| cs.fresh_nat(&format!("count({s},{q})"), cap))
                })
                .collect()
        })
        .collect();
    let mut outer: Vec<Var> = reach.iter().flatten().copied().collect();
    outer.extend(counters.iter().flatten().flatten().flat_map(|c| c.vars()));

    let (instances, input_vars): (Vec<Vec<Term>>, Vec<Var>) = match kind {
        EncodingKind::Propositional => {
            let all = (0..1usize << ni)
                .map(|k| (0..ni).map(|j| Term::Const(k >> j & 1 == 1)).collect())
                .collect();
            (all, Vec::new())
        }
        EncodingKind::InputSymbolic => {
            let vars: Vec<Var> = ctx.inputs.iter().map(|i| cs.fresh_var(format!("in({i})"))).collect();
            (vec![vars.iter().map(|&v| Term::Var(v)).collect()], vars)
        }
    };

    let mut inner: Vec<Var> = Vec::new();
    let mut delta = Vec::with_capacity(n);
    let mut outputs = Vec::with_capacity(n);
    for s in 0..n {
        let moore_outs: Vec<Var> = match ctx.semantics {
            Semantics::Moore => ctx.outputs.iter().map(|o| cs.fresh_var(format!("out({s},{o})"))).collect(),
            Semantics::Mealy => Vec::new(),
        };
        outer.extend(&moore_outs);
        let mut ds = Vec::new();
        let mut os = Vec::new();
        for k in 0..instances.len() {
            let d = cs.fresh_nat(&format!("next({s},{k})"), (n - 1) as u64);
            inner.extend(d.vars());
            ds.push(d);
            os.push(match ctx.semantics {
                Semantics::Moore => moore_outs.clone(),
                Semantics::Mealy => {
                    let vs: Vec<Var> =
                        ctx.outputs.iter().map(|o| cs.fresh_var(format!("out({s},{k},{o})"))).collect();
                    inner.extend(&vs);
                    vs
                }
            });
        }
        delta.push(ds);
        outputs.push(os);
    }

    if kind == EncodingKind::InputSymbolic {
        cs.quantify(Quant::Exists, outer);
        cs.quantify(Quant::Forall, input_vars.clone());
        cs.quantify(Quant::Exists, inner);
    }

    // (1) the initial pair is reachable
    if a.safety[a.initial] {
        cs.assert(Term::Const(false));
    }
    cs.assert(Term::Var(reach[0][a.initial]));

    let targets: Vec<BoundedNat> = (0..n).map(|t| BoundedNat::constant(t as u64)).collect();
    for s in 0..n {
        for q in 0..nq {
            if a.safety[q] {
                continue;
            }
            for (k, inputs) in instances.iter().enumerate() {
                for e in &a.edges[q] {
                    let beta = instantiate(&e.label, inputs, &outputs[s][k]);
                    if beta == Term::Const(false) {
                        continue;
                    }
                    let premise = Term::and([Term::Var(reach[s][q]), beta]);
                    let q2 = e.target;
                    // (2) entering a safety state is forbidden
                    if a.safety[q2] {
                        cs.assert(Term::not(premise));
                        continue;
                    }
                    // (3) successors are reachable and counters grow
                    for t in 0..n {
                        let moves = Term::cmp(delta[s][k].clone(), CmpOp::Eq, targets[t].clone());
                        let rank = match (&counters[s][q], &counters[t][q2]) {
                            (Some(from), Some(to)) if a.same_scc(q, q2) => {
                                let op = if a.rejecting[q2] { CmpOp::Gt } else { CmpOp::Ge };
                                Term::cmp(to.clone(), op, from.clone())
                            }
                            _ => Term::Const(true),
                        };
                        cs.assert(Term::implies(
                            Term::and([premise.clone(), moves]),
                            Term::and([Term::Var(reach[t][q2]), rank]),
                        ));
                    }
                }
            }
        }
    }

    Ok(Encoding { kind, system: cs, reach, counters, delta, outputs, input_vars })
}

impl Encoding {
    /// Number of transition and output variables.
    pub fn num_machine_vars(&self) -> usize {
        let d: usize = self.delta.iter().flatten().map(|d| d.width()).sum();
        let mut outs: Vec<Var> = self.outputs.iter().flatten().flatten().copied().collect();
        outs.sort();
        outs.dedup();
        d + outs.len()
    }

    /// Reads the machine off a model of this encoding.
    pub fn decode(&self, ctx: &EncodingContext, model: EncodingModel<'_>) -> Result<Machine> {
        let n = ctx.bound;
        let valuations = 1usize << ctx.inputs.len();
        let mut next = vec![vec![0usize; valuations]; n];
        let mut out = vec![vec![vec![false; ctx.outputs.len()]; valuations]; n];
        let registry = &self.system.registry;
        let missing = |v: Var| Error::IncompleteModel(registry.name(v).unwrap_or("?").to_string());

        for k in 0..valuations {
            // the assignment describing valuation k, and where to find δ/o
            let (asg, slot) = match (self.kind, model) {
                (EncodingKind::Propositional, EncodingModel::Total(m)) => (Cow::Borrowed(m), k),
                (EncodingKind::InputSymbolic, EncodingModel::Skolem(m)) => {
                    let idx = m.table_index(|u| {
                        let j = self.input_vars.iter().position(|&x| x == u).expect("universal is an input");
                        k >> j & 1 == 1
                    });
                    let mut asg = m.outer.clone();
                    for (v, b) in m.tables[idx].assigned() {
                        asg.set(v, b);
                    }
                    (Cow::Owned(asg), 0)
                }
                (EncodingKind::InputSymbolic, EncodingModel::Total(m)) if ctx.inputs.is_empty() => (Cow::Borrowed(m), 0),
                _ => return Err(Error::Encoding("model kind does not match the encoding".into())),
            };
            for s in 0..n {
                let d = &self.delta[s][slot];
                let t = d.decode(&asg).ok_or_else(|| missing(d.vars().next().unwrap()))? as usize;
                if t >= n {
                    return Err(Error::Encoding(format!("successor {t} out of range")));
                }
                next[s][k] = t;
                for (o, &v) in self.outputs[s][slot].iter().enumerate() {
                    out[s][k][o] = asg.get(v).ok_or_else(|| missing(v))?;
                }
            }
        }
        Ok(Machine::from_tables(ctx.inputs.clone(), ctx.outputs.clone(), ctx.semantics, &next, &out))
    }
}

/// Decodes `model` of `encoding` into a machine.
pub fn decode_machine(ctx: &EncodingContext, encoding: &Encoding, model: EncodingModel<'_>) -> Result<Machine> {
    encoding.decode(ctx, model)
}
