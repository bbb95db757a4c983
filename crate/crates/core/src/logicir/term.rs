use std::collections::BTreeSet;

use super::{Assignment, Var, VarRegistry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bit {
    Var(Var),
    Const(bool),
}

impl Bit {
    fn term(self) -> Term {
        match self {
            Bit::Var(v) => Term::Var(v),
            Bit::Const(b) => Term::Const(b),
        }
    }
}

/// Natural number stored little-endian in `width = ⌈log2(capacity+1)⌉` bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundedNat {
    bits: Vec<Bit>,
    capacity: u64,
}

pub fn width_for(capacity: u64) -> usize {
    (u64::BITS - capacity.leading_zeros()) as usize
}

impl BoundedNat {
    /// Allocates the bit variables for a counter holding `0..=capacity`.
    pub fn fresh(reg: &mut VarRegistry, name: &str, capacity: u64) -> Self {
        let bits = (0..width_for(capacity))
            .map(|k| Bit::Var(reg.fresh(format!("{name}[{k}]"))))
            .collect();
        BoundedNat { bits, capacity }
    }

    pub fn constant(value: u64) -> Self {
        let bits = (0..width_for(value)).map(|k| Bit::Const(value >> k & 1 == 1)).collect();
        BoundedNat { bits, capacity: value }
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.bits.iter().filter_map(|b| match b {
            Bit::Var(v) => Some(*v),
            Bit::Const(_) => None,
        })
    }

    /// `self ≤ capacity`, or `None` when the width already enforces it.
    pub fn capacity_constraint(&self) -> Option<Term> {
        if (self.capacity + 1).is_power_of_two() {
            None
        } else {
            Some(Term::cmp(BoundedNat::constant(self.capacity), CmpOp::Ge, self.clone()))
        }
    }

    pub fn decode(&self, model: &Assignment) -> Option<u64> {
        let mut value = 0;
        for (k, bit) in self.bits.iter().enumerate() {
            let set = match bit {
                Bit::Const(b) => *b,
                Bit::Var(v) => model.get(*v)?,
            };
            if set {
                value |= 1 << k;
            }
        }
        Some(value)
    }

    fn bit(&self, k: usize) -> Term {
        self.bits.get(k).map_or(Term::Const(false), |b| b.term())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CmpOp {
    Ge,
    Gt,
    Eq,
}

/// Quantifier-free formulas of the constraint language.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(bool),
    Var(Var),
    Not(Box<Term>),
    And(Vec<Term>),
    Or(Vec<Term>),
    Implies(Box<Term>, Box<Term>),
    Cmp(Box<BoundedNat>, CmpOp, Box<BoundedNat>),
}

impl From<Var> for Term {
    fn from(v: Var) -> Self {
        Term::Var(v)
    }
}

impl Term {
    pub fn var(v: Var) -> Self {
        Term::Var(v)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(t: Term) -> Self {
        match t {
            Term::Const(b) => Term::Const(!b),
            Term::Not(inner) => *inner,
            other => Term::Not(Box::new(other)),
        }
    }

    pub fn and(parts: impl IntoIterator<Item = Term>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Term::Const(true) => {}
                Term::Const(false) => return Term::Const(false),
                Term::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        if has_complementary_literals(&mut out) {
            return Term::Const(false);
        }
        match out.len() {
            0 => Term::Const(true),
            1 => out.pop().unwrap(),
            _ => Term::And(out),
        }
    }

    pub fn or(parts: impl IntoIterator<Item = Term>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Term::Const(false) => {}
                Term::Const(true) => return Term::Const(true),
                Term::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        if has_complementary_literals(&mut out) {
            return Term::Const(true);
        }
        match out.len() {
            0 => Term::Const(false),
            1 => out.pop().unwrap(),
            _ => Term::Or(out),
        }
    }

    pub fn implies(a: Term, b: Term) -> Self {
        match (a, b) {
            (Term::Const(false), _) | (_, Term::Const(true)) => Term::Const(true),
            (Term::Const(true), b) => b,
            (a, Term::Const(false)) => Term::not(a),
            (a, b) => Term::Implies(Box::new(a), Box::new(b)),
        }
    }

    pub fn iff(a: Term, b: Term) -> Self {
        Term::and([
            Term::or([a.clone(), Term::not(b.clone())]),
            Term::or([Term::not(a), b]),
        ])
    }

    pub fn cmp(left: BoundedNat, op: CmpOp, right: BoundedNat) -> Self {
        Term::Cmp(Box::new(left), op, Box::new(right))
    }

    pub fn eval(&self, model: &Assignment) -> Option<bool> {
        Some(match self {
            Term::Const(b) => *b,
            Term::Var(v) => model.get(*v)?,
            Term::Not(t) => !t.eval(model)?,
            Term::And(ts) => {
                let mut all = true;
                for t in ts {
                    all &= t.eval(model)?;
                }
                all
            }
            Term::Or(ts) => {
                let mut any = false;
                for t in ts {
                    any |= t.eval(model)?;
                }
                any
            }
            Term::Implies(a, b) => !a.eval(model)? || b.eval(model)?,
            Term::Cmp(l, op, r) => {
                let (l, r) = (l.decode(model)?, r.decode(model)?);
                match op {
                    CmpOp::Ge => l >= r,
                    CmpOp::Gt => l > r,
                    CmpOp::Eq => l == r,
                }
            }
        })
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut set = BTreeSet::new();
        self.collect_vars(&mut set);
        set
    }

    fn collect_vars(&self, set: &mut BTreeSet<Var>) {
        match self {
            Term::Const(_) => {}
            Term::Var(v) => {
                set.insert(*v);
            }
            Term::Not(t) => t.collect_vars(set),
            Term::And(ts) | Term::Or(ts) => ts.iter().for_each(|t| t.collect_vars(set)),
            Term::Implies(a, b) => {
                a.collect_vars(set);
                b.collect_vars(set);
            }
            Term::Cmp(l, _, r) => set.extend(l.vars().chain(r.vars())),
        }
    }

    pub fn has_comparisons(&self) -> bool {
        match self {
            Term::Const(_) | Term::Var(_) => false,
            Term::Cmp(..) => true,
            Term::Not(t) => t.has_comparisons(),
            Term::And(ts) | Term::Or(ts) => ts.iter().any(Term::has_comparisons),
            Term::Implies(a, b) => a.has_comparisons() || b.has_comparisons(),
        }
    }
}

/// Dedups literal children; reports whether some `x` and `¬x` both occur.
fn has_complementary_literals(parts: &mut Vec<Term>) -> bool {
    let mut pos = BTreeSet::new();
    let mut neg = BTreeSet::new();
    let mut keep = Vec::with_capacity(parts.len());
    for p in parts.drain(..) {
        match &p {
            Term::Var(v) => {
                if neg.contains(v) {
                    return true;
                }
                if pos.insert(*v) {
                    keep.push(p);
                }
            }
            Term::Not(inner) if matches!(**inner, Term::Var(_)) => {
                let Term::Var(v) = **inner else { unreachable!() };
                if pos.contains(&v) {
                    return true;
                }
                if neg.insert(v) {
                    keep.push(p);
                }
            }
            _ => keep.push(p),
        }
    }
    *parts = keep;
    false
}

/// Replaces every comparison by its ripple-comparator formula over the bits.
pub fn lower_comparisons(t: &Term) -> Term {
    match t {
        Term::Const(_) | Term::Var(_) => t.clone(),
        Term::Not(inner) => Term::not(lower_comparisons(inner)),
        Term::And(ts) => Term::and(ts.iter().map(lower_comparisons)),
        Term::Or(ts) => Term::or(ts.iter().map(lower_comparisons)),
        Term::Implies(a, b) => Term::implies(lower_comparisons(a), lower_comparisons(b)),
        Term::Cmp(l, op, r) => lower_cmp(l, *op, r),
    }
}

fn lower_cmp(x: &BoundedNat, op: CmpOp, y: &BoundedNat) -> Term {
    let w = x.width().max(y.width());
    if op == CmpOp::Eq {
        return Term::and((0..w).map(|k| Term::iff(x.bit(k), y.bit(k))));
    }
    if w == 0 {
        return Term::Const(op == CmpOp::Ge);
    }
    // acc: comparison restricted to bits 0..=k
    let (x0, y0) = (x.bit(0), y.bit(0));
    let mut acc = match op {
        CmpOp::Ge => Term::or([x0, Term::not(y0)]),
        _ => Term::and([x0, Term::not(y0)]),
    };
    for k in 1..w {
        let (xk, yk) = (x.bit(k), y.bit(k));
        let greater = Term::and([xk.clone(), Term::not(yk.clone())]);
        let not_less = Term::or([xk, Term::not(yk)]);
        acc = Term::or([greater, Term::and([not_less, acc])]);
    }
    acc
}
