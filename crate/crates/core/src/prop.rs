//! Quantifier-free propositional formulas over an arbitrary atom type.
//!
//! Used for automaton edge labels (atoms are proposition indices) and for
//! machine guards and output functions (atoms are input indices).

use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prop<A> {
    True,
    False,
    Atom(A),
    Not(Box<Prop<A>>),
    And(Vec<Prop<A>>),
    Or(Vec<Prop<A>>),
}

impl<A: Clone + Ord> Prop<A> {
    pub fn atom(a: A) -> Self {
        Prop::Atom(a)
    }

    pub fn literal(a: A, positive: bool) -> Self {
        if positive {
            Prop::Atom(a)
        } else {
            Prop::Not(Box::new(Prop::Atom(a)))
        }
    }

    pub fn negate(self) -> Self {
        match self {
            Prop::True => Prop::False,
            Prop::False => Prop::True,
            Prop::Not(inner) => *inner,
            other => Prop::Not(Box::new(other)),
        }
    }

    /// Conjunction with constant folding and flattening.
    pub fn and_all(parts: impl IntoIterator<Item = Prop<A>>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Prop::True => {}
                Prop::False => return Prop::False,
                Prop::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        out.dedup();
        match out.len() {
            0 => Prop::True,
            1 => out.pop().unwrap(),
            _ => Prop::And(out),
        }
    }

    /// Disjunction with constant folding and flattening.
    pub fn or_all(parts: impl IntoIterator<Item = Prop<A>>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Prop::False => {}
                Prop::True => return Prop::True,
                Prop::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        out.dedup();
        match out.len() {
            0 => Prop::False,
            1 => out.pop().unwrap(),
            _ => Prop::Or(out),
        }
    }

    pub fn eval(&self, val: &impl Fn(&A) -> bool) -> bool {
        match self {
            Prop::True => true,
            Prop::False => false,
            Prop::Atom(a) => val(a),
            Prop::Not(p) => !p.eval(val),
            Prop::And(ps) => ps.iter().all(|p| p.eval(val)),
            Prop::Or(ps) => ps.iter().any(|p| p.eval(val)),
        }
    }

    pub fn atoms(&self) -> BTreeSet<A> {
        let mut set = BTreeSet::new();
        self.collect_atoms(&mut set);
        set
    }

    fn collect_atoms(&self, set: &mut BTreeSet<A>) {
        match self {
            Prop::True | Prop::False => {}
            Prop::Atom(a) => {
                set.insert(a.clone());
            }
            Prop::Not(p) => p.collect_atoms(set),
            Prop::And(ps) | Prop::Or(ps) => ps.iter().for_each(|p| p.collect_atoms(set)),
        }
    }

    pub fn map_atoms<B: Clone + Ord>(&self, f: &impl Fn(&A) -> B) -> Prop<B> {
        match self {
            Prop::True => Prop::True,
            Prop::False => Prop::False,
            Prop::Atom(a) => Prop::Atom(f(a)),
            Prop::Not(p) => p.map_atoms(f).negate(),
            Prop::And(ps) => Prop::and_all(ps.iter().map(|p| p.map_atoms(f))),
            Prop::Or(ps) => Prop::or_all(ps.iter().map(|p| p.map_atoms(f))),
        }
    }

    /// Truth-table test over the atoms that actually occur.
    pub fn is_tautology(&self) -> bool {
        let atoms: Vec<A> = self.atoms().into_iter().collect();
        assert!(atoms.len() <= 20, "tautology check over too many atoms");
        (0u32..1 << atoms.len()).all(|bits| {
            self.eval(&|a| {
                let idx = atoms.binary_search(a).unwrap();
                bits >> idx & 1 == 1
            })
        })
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Prop::False)
    }

    /// Renders the formula with caller-chosen syntax for the connectives.
    pub fn render(&self, syn: &Syntax, name: &impl Fn(&A) -> String) -> String {
        match self {
            Prop::True => syn.t.to_string(),
            Prop::False => syn.f.to_string(),
            Prop::Atom(a) => name(a),
            Prop::Not(p) => match **p {
                Prop::Atom(_) => format!("{}{}", syn.not, p.render(syn, name)),
                _ => format!("{}({})", syn.not, p.render(syn, name)),
            },
            Prop::And(ps) => join(ps, syn.and, syn, name),
            Prop::Or(ps) => join(ps, syn.or, syn, name),
        }
    }
}

fn join<A: Clone + Ord>(
    ps: &[Prop<A>],
    op: &str,
    syn: &Syntax,
    name: &impl Fn(&A) -> String,
) -> String {
    ps.iter()
        .map(|p| match p {
            Prop::And(_) | Prop::Or(_) => format!("({})", p.render(syn, name)),
            _ => p.render(syn, name),
        })
        .collect::<Vec<_>>()
        .join(op)
}

/// Concrete syntax for [`Prop::render`].
#[derive(Debug, Clone, Copy)]
pub struct Syntax {
    pub t: &'static str,
    pub f: &'static str,
    pub not: &'static str,
    pub and: &'static str,
    pub or: &'static str,
}

pub const SMV_SYNTAX: Syntax = Syntax { t: "TRUE", f: "FALSE", not: "!", and: " & ", or: " | " };
pub const HOA_SYNTAX: Syntax = Syntax { t: "t", f: "f", not: "!", and: " & ", or: " | " };

impl Prop<usize> {
    /// Builds a compact formula for the boolean function given by `table`,
    /// where entry `k` is the value under the valuation assigning atom `j`
    /// to bit `j` of `k`. Uses recursive Shannon expansion, dropping atoms the
    /// function does not depend on.
    pub fn from_truth_table(num_atoms: usize, table: &[bool]) -> Self {
        assert_eq!(table.len(), 1 << num_atoms);
        Self::shannon(num_atoms, table)
    }

    fn shannon(var: usize, table: &[bool]) -> Self {
        if table.iter().all(|&b| b) {
            return Prop::True;
        }
        if table.iter().all(|&b| !b) {
            return Prop::False;
        }
        // highest atom splits the table into two contiguous halves
        let top = var - 1;
        let half = table.len() / 2;
        let (lo, hi) = table.split_at(half);
        if lo == hi {
            return Self::shannon(top, lo);
        }
        let f0 = Self::shannon(top, lo);
        let f1 = Self::shannon(top, hi);
        let x = Prop::Atom(top);
        match (&f0, &f1) {
            (Prop::False, _) => Prop::and_all([x, f1]),
            (_, Prop::False) => Prop::and_all([x.negate(), f0]),
            (Prop::True, _) => Prop::or_all([x.negate(), f1]),
            (_, Prop::True) => Prop::or_all([x, f0]),
            _ => Prop::or_all([Prop::and_all([x.clone(), f1]), Prop::and_all([x.negate(), f0])]),
        }
    }
}

impl<A: fmt::Display + Clone + Ord> fmt::Display for Prop<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&HOA_SYNTAX, &|a| a.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_folding() {
        let p: Prop<usize> = Prop::and_all([Prop::True, Prop::atom(0)]);
        assert_eq!(p, Prop::atom(0));
        let q: Prop<usize> = Prop::or_all([Prop::atom(1), Prop::True]);
        assert_eq!(q, Prop::True);
        assert_eq!(Prop::<usize>::atom(2).negate().negate(), Prop::atom(2));
    }

    #[test]
    fn truth_table_roundtrip() {
        for k in 0..=3usize {
            for f in 0u32..1 << (1 << k) {
                let table: Vec<bool> = (0..1 << k).map(|i| f >> i & 1 == 1).collect();
                let p = Prop::from_truth_table(k, &table);
                for (i, &expected) in table.iter().enumerate() {
                    assert_eq!(p.eval(&|a: &usize| i >> a & 1 == 1), expected);
                }
            }
        }
    }

    #[test]
    fn tautology() {
        let x: Prop<usize> = Prop::or_all([Prop::atom(0), Prop::atom(0).negate()]);
        assert!(x.is_tautology());
        assert!(!Prop::<usize>::atom(0).is_tautology());
        assert!(Prop::<usize>::True.is_tautology());
    }

    #[test]
    fn renders_smv() {
        let p: Prop<usize> = Prop::and_all([Prop::atom(0), Prop::atom(1).negate()]);
        let names = ["r_0", "r_1"];
        assert_eq!(p.render(&SMV_SYNTAX, &|a| names[*a].to_string()), "r_0 & !r_1");
    }
}
