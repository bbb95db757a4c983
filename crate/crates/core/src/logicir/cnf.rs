use std::collections::HashMap;

use super::term::{lower_comparisons, Term};
use super::{Lit, VarRegistry};

/// Clause set over variables `1..=num_vars`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: u32,
    pub clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn new(num_vars: u32) -> Self {
        Cnf { num_vars, clauses: Vec::new() }
    }

    pub fn add_clause(&mut self, clause: Vec<Lit>) {
        for l in &clause {
            self.num_vars = self.num_vars.max(l.var().0);
        }
        self.clauses.push(clause);
    }

    /// Does the assignment `model[v]` (index 0 unused) satisfy every clause?
    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| model[l.var().index()] == l.is_positive()))
    }
}

/// Tseitin transformation with structural sharing of sub-terms.
///
/// Auxiliary variables are allocated from the registry; `fresh` records
/// every auxiliary it creates.
pub struct Clausifier<'a> {
    reg: &'a mut VarRegistry,
    cache: HashMap<Term, Lit>,
    pub aux: Vec<super::Var>,
}

impl<'a> Clausifier<'a> {
    pub fn new(reg: &'a mut VarRegistry) -> Self {
        Clausifier { reg, cache: HashMap::new(), aux: Vec::new() }
    }

    /// Literal equivalent to `t` under the defining clauses added to `cnf`.
    /// `t` must be comparison-free and constant-free below the root.
    pub fn encode(&mut self, t: &Term, cnf: &mut Cnf) -> Lit {
        match t {
            Term::Var(v) => return Lit::new(*v, true),
            Term::Not(inner) => return self.encode(inner, cnf).negate(),
            Term::Const(_) | Term::Cmp(..) => panic!("constants and comparisons must be removed before clausification"),
            _ => {}
        }
        if let Some(&l) = self.cache.get(t) {
            return l;
        }
        let lit = match t {
            Term::And(ts) => {
                let kids: Vec<Lit> = ts.iter().map(|k| self.encode(k, cnf)).collect();
                let a = self.fresh(cnf);
                for &k in &kids {
                    cnf.add_clause(vec![a.negate(), k]);
                }
                let mut big: Vec<Lit> = kids.iter().map(|k| k.negate()).collect();
                big.push(a);
                cnf.add_clause(big);
                a
            }
            Term::Or(ts) => {
                let kids: Vec<Lit> = ts.iter().map(|k| self.encode(k, cnf)).collect();
                let a = self.fresh(cnf);
                for &k in &kids {
                    cnf.add_clause(vec![a, k.negate()]);
                }
                let mut big = kids;
                big.push(a.negate());
                cnf.add_clause(big);
                a
            }
            Term::Implies(x, y) => {
                let or = Term::Or(vec![Term::not((**x).clone()), (**y).clone()]);
                self.encode(&or, cnf)
            }
            _ => unreachable!(),
        };
        self.cache.insert(t.clone(), lit);
        lit
    }

    fn fresh(&mut self, cnf: &mut Cnf) -> Lit {
        let v = self.reg.fresh_aux();
        self.aux.push(v);
        cnf.num_vars = cnf.num_vars.max(v.0);
        Lit::new(v, true)
    }

    /// Asserts `t`: top-level conjunctions are split and disjunctions of
    /// literals become clauses directly; everything else gets an auxiliary.
    pub fn assert(&mut self, t: &Term, cnf: &mut Cnf) {
        let t = simplify(&lower_comparisons(t));
        self.assert_simplified(&t, cnf);
    }

    fn assert_simplified(&mut self, t: &Term, cnf: &mut Cnf) {
        match t {
            Term::Const(true) => {}
            Term::Const(false) => cnf.add_clause(vec![]),
            Term::And(ts) => ts.iter().for_each(|k| self.assert_simplified(k, cnf)),
            Term::Implies(a, b) => {
                let or = Term::or([Term::not((**a).clone()), (**b).clone()]);
                self.assert_simplified(&or, cnf);
            }
            Term::Or(ts) => {
                let clause = ts.iter().map(|k| self.encode(k, cnf)).collect();
                cnf.add_clause(clause);
            }
            other => {
                let l = self.encode(other, cnf);
                cnf.add_clause(vec![l]);
            }
        }
    }
}

/// Rebuilds the term with the folding constructors so constants only
/// survive at the root.
pub fn simplify(t: &Term) -> Term {
    match t {
        Term::Const(_) | Term::Var(_) | Term::Cmp(..) => t.clone(),
        Term::Not(inner) => Term::not(simplify(inner)),
        Term::And(ts) => Term::and(ts.iter().map(simplify)),
        Term::Or(ts) => Term::or(ts.iter().map(simplify)),
        Term::Implies(a, b) => Term::implies(simplify(a), simplify(b)),
    }
}

/// Textbook Tseitin encoding: one auxiliary per connective, both polarities
/// of its definition, and a unit clause asserting the root.
pub fn tseitin(t: &Term, reg: &mut VarRegistry) -> Cnf {
    let t = simplify(&lower_comparisons(t));
    let mut cnf = Cnf::new(reg.len());
    match t {
        Term::Const(true) => {}
        Term::Const(false) => cnf.add_clause(vec![]),
        t => {
            let mut c = Clausifier::new(reg);
            let root = c.encode(&t, &mut cnf);
            cnf.add_clause(vec![root]);
        }
    }
    cnf
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjunction_textbook_clauses() {
        let mut reg = VarRegistry::default();
        let a = reg.fresh("a");
        let b = reg.fresh("b");
        let cnf = tseitin(&Term::and([Term::Var(a), Term::Var(b)]), &mut reg);
        let t = Lit::new(super::super::Var(3), true);
        let (la, lb) = (Lit::new(a, true), Lit::new(b, true));
        assert_eq!(
            cnf.clauses,
            vec![vec![t.negate(), la], vec![t.negate(), lb], vec![la.negate(), lb.negate(), t], vec![t]]
        );
        assert_eq!(cnf.num_vars, 3);
    }

    #[test]
    fn constants() {
        let mut reg = VarRegistry::default();
        assert!(tseitin(&Term::Const(true), &mut reg).clauses.is_empty());
        assert_eq!(tseitin(&Term::Const(false), &mut reg).clauses, vec![Vec::<Lit>::new()]);
    }

    #[test]
    fn assert_splits_clauses() {
        let mut reg = VarRegistry::default();
        let a = reg.fresh("a");
        let b = reg.fresh("b");
        let mut cnf = Cnf::new(reg.len());
        let mut c = Clausifier::new(&mut reg);
        c.assert(&Term::and([Term::or([Term::Var(a), Term::not(Term::Var(b))]), Term::Var(b)]), &mut cnf);
        assert_eq!(cnf.clauses, vec![vec![Lit::new(a, true), Lit::new(b, false)], vec![Lit::new(b, true)]]);
        assert!(c.aux.is_empty());
    }
}
