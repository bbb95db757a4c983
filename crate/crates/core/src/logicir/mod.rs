//! The constraint language the encoders target: propositional logic with
//! boolean quantifier blocks and comparisons between bounded naturals,
//! lowered to CNF and written as DIMACS / QDIMACS.

mod cnf;
mod dimacs;
mod term;

use std::fmt;

pub use cnf::{simplify, tseitin, Clausifier, Cnf};
pub use dimacs::{emit_dimacs, emit_qdimacs, parse_qdimacs};
pub use term::{lower_comparisons, width_for, Bit, BoundedNat, CmpOp, Term};

use crate::error::{Error, Result};

/// Solver variable, numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// DIMACS-style signed literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(i32);

impl Lit {
    pub fn new(v: Var, positive: bool) -> Self {
        let x = v.0 as i32;
        Lit(if positive { x } else { -x })
    }

    pub fn from_dimacs(x: i32) -> Self {
        assert!(x != 0);
        Lit(x)
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    pub fn var(self) -> Var {
        Var(self.0.unsigned_abs())
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn negate(self) -> Self {
        Lit(-self.0)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Assigns consecutive variable numbers in creation order and keeps the
/// names so models can be read back.
#[derive(Debug, Clone, Default)]
pub struct VarRegistry {
    names: Vec<Option<String>>,
}

impl VarRegistry {
    pub fn fresh(&mut self, name: impl Into<String>) -> Var {
        self.names.push(Some(name.into()));
        Var(self.names.len() as u32)
    }

    pub fn fresh_aux(&mut self) -> Var {
        self.names.push(None);
        Var(self.names.len() as u32)
    }

    pub fn len(&self) -> u32 {
        self.names.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: Var) -> Option<&str> {
        self.names.get(v.index().checked_sub(1)?)?.as_deref()
    }

    /// Named (non-auxiliary) variables.
    pub fn num_named(&self) -> usize {
        self.names.iter().filter(|n| n.is_some()).count()
    }
}

/// Partial assignment indexed by variable number.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn new(num_vars: u32) -> Self {
        Assignment { values: vec![None; num_vars as usize + 1] }
    }

    /// From a total model where `model[v]` is the value of variable `v`.
    pub fn from_total(model: &[bool]) -> Self {
        let mut values: Vec<Option<bool>> = model.iter().map(|&b| Some(b)).collect();
        if let Some(first) = values.first_mut() {
            *first = None;
        }
        Assignment { values }
    }

    pub fn get(&self, v: Var) -> Option<bool> {
        self.values.get(v.index()).copied().flatten()
    }

    pub fn set(&mut self, v: Var, value: bool) {
        if v.index() >= self.values.len() {
            self.values.resize(v.index() + 1, None);
        }
        self.values[v.index()] = Some(value);
    }

    pub fn assigned(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.values.iter().enumerate().filter_map(|(i, v)| v.map(|b| (Var(i as u32), b)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quant {
    Exists,
    Forall,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantBlock {
    pub quant: Quant,
    pub vars: Vec<Var>,
}

/// Quantifier prefix plus CNF matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantifiedCnf {
    pub prefix: Vec<QuantBlock>,
    pub cnf: Cnf,
}

/// Merges adjacent blocks of the same quantifier and drops empty ones.
pub fn normalize_prefix(prefix: &[QuantBlock]) -> Vec<QuantBlock> {
    let mut out: Vec<QuantBlock> = Vec::new();
    for b in prefix.iter().filter(|b| !b.vars.is_empty()) {
        match out.last_mut() {
            Some(last) if last.quant == b.quant => last.vars.extend(&b.vars),
            _ => out.push(b.clone()),
        }
    }
    out
}

/// A constraint system under construction: registry, prefix, and the
/// conjunction of asserted terms.
#[derive(Debug, Clone, Default)]
pub struct ConstraintSystem {
    pub registry: VarRegistry,
    pub prefix: Vec<QuantBlock>,
    pub constraints: Vec<Term>,
}

impl ConstraintSystem {
    pub fn fresh_var(&mut self, name: impl Into<String>) -> Var {
        self.registry.fresh(name)
    }

    /// New counter in `0..=capacity`; the capacity bound is asserted now.
    pub fn fresh_nat(&mut self, name: &str, capacity: u64) -> BoundedNat {
        let nat = BoundedNat::fresh(&mut self.registry, name, capacity);
        if let Some(c) = nat.capacity_constraint() {
            self.constraints.push(c);
        }
        nat
    }

    pub fn assert(&mut self, t: Term) {
        if t != Term::Const(true) {
            self.constraints.push(t);
        }
    }

    pub fn quantify(&mut self, quant: Quant, vars: Vec<Var>) {
        self.prefix.push(QuantBlock { quant, vars });
    }

    /// Lowers comparisons, clausifies, and places auxiliaries in the
    /// innermost existential block.
    pub fn to_qcnf(&self) -> QuantifiedCnf {
        let mut reg = self.registry.clone();
        let mut cnf = Cnf::new(reg.len());
        let aux = {
            let mut c = Clausifier::new(&mut reg);
            for t in &self.constraints {
                c.assert(t, &mut cnf);
            }
            c.aux
        };
        let mut prefix = normalize_prefix(&self.prefix);
        if !prefix.is_empty() && !aux.is_empty() {
            match prefix.last_mut() {
                Some(b) if b.quant == Quant::Exists => b.vars.extend(aux),
                _ => prefix.push(QuantBlock { quant: Quant::Exists, vars: aux }),
            }
        }
        QuantifiedCnf { prefix, cnf }
    }
}

pub(crate) fn check_prefix(prefix: &[QuantBlock], num_vars: u32) -> Result<()> {
    let mut seen = vec![false; num_vars as usize + 1];
    for b in prefix {
        for v in &b.vars {
            if v.0 == 0 || v.0 > num_vars {
                return Err(Error::Qbf(format!("prefix variable {} is not in the matrix registry", v.0)));
            }
            if std::mem::replace(&mut seen[v.index()], true) {
                return Err(Error::Qbf(format!("variable {} is bound twice", v.0)));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_numbering_is_consecutive() {
        let mut reg = VarRegistry::default();
        assert_eq!(reg.fresh("a"), Var(1));
        assert_eq!(reg.fresh_aux(), Var(2));
        assert_eq!(reg.fresh("c"), Var(3));
        assert_eq!(reg.name(Var(3)), Some("c"));
        assert_eq!(reg.name(Var(2)), None);
        assert_eq!(reg.num_named(), 2);
    }

    #[test]
    fn aux_go_innermost() {
        let mut cs = ConstraintSystem::default();
        let x = cs.fresh_var("x");
        let u = cs.fresh_var("u");
        cs.quantify(Quant::Exists, vec![x]);
        cs.quantify(Quant::Forall, vec![u]);
        cs.assert(Term::or([Term::and([Term::Var(x), Term::Var(u)]), Term::not(Term::Var(x))]));
        let q = cs.to_qcnf();
        assert_eq!(q.prefix.len(), 3);
        assert_eq!(q.prefix[2].quant, Quant::Exists);
        assert_eq!(q.prefix[2].vars, vec![Var(3)]);
    }

    #[test]
    fn prefix_normalization() {
        let p = vec![
            QuantBlock { quant: Quant::Exists, vars: vec![Var(1)] },
            QuantBlock { quant: Quant::Forall, vars: vec![] },
            QuantBlock { quant: Quant::Exists, vars: vec![Var(2)] },
        ];
        assert_eq!(normalize_prefix(&p), vec![QuantBlock { quant: Quant::Exists, vars: vec![Var(1), Var(2)] }]);
    }
}
