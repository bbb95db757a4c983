use std::sync::atomic::AtomicBool;

use super::{cdcl, SolveResult};
use crate::error::{Error, Result};
use crate::logicir::{normalize_prefix, Assignment, Cnf, Lit, Quant, QuantifiedCnf, Var};

/// Widest universal block accepted for expansion.
pub const MAX_UNIVERSALS: usize = 16;

/// Witness of a true ∃∀∃ formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkolemModel {
    /// Values of the outer existential block (and of free variables).
    pub outer: Assignment,
    pub universals: Vec<Var>,
    /// `tables[k]` holds the inner existentials when universal `j` takes
    /// bit `j` of `k`.
    pub tables: Vec<Assignment>,
}

impl SkolemModel {
    /// Index into `tables` for a valuation of the universals.
    pub fn table_index(&self, valuation: impl Fn(Var) -> bool) -> usize {
        self.universals
            .iter()
            .enumerate()
            .filter(|(_, &u)| valuation(u))
            .map(|(j, _)| 1 << j)
            .sum()
    }

    /// Value of `v` under universal valuation `k`, falling back to the
    /// outer block.
    pub fn value(&self, k: usize, v: Var) -> Option<bool> {
        self.tables[k].get(v).or_else(|| self.outer.get(v))
    }
}

struct Shape {
    outer: Vec<Var>,
    universals: Vec<Var>,
    inner: Vec<Var>,
}

/// Splits a prefix of shape ∃∀∃ (either existential block possibly empty).
/// Unbound variables join the outer block.
fn shape(q: &QuantifiedCnf) -> Result<Shape> {
    let blocks = normalize_prefix(&q.prefix);
    let quants: Vec<Quant> = blocks.iter().map(|b| b.quant).collect();
    let (outer, universals, inner) = match quants.as_slice() {
        [] => (vec![], vec![], vec![]),
        [Quant::Exists] => (blocks[0].vars.clone(), vec![], vec![]),
        [Quant::Forall] => (vec![], blocks[0].vars.clone(), vec![]),
        [Quant::Exists, Quant::Forall] => (blocks[0].vars.clone(), blocks[1].vars.clone(), vec![]),
        [Quant::Forall, Quant::Exists] => (vec![], blocks[0].vars.clone(), blocks[1].vars.clone()),
        [Quant::Exists, Quant::Forall, Quant::Exists] => {
            (blocks[0].vars.clone(), blocks[1].vars.clone(), blocks[2].vars.clone())
        }
        _ => return Err(Error::Qbf(format!("unsupported quantifier prefix {quants:?}"))),
    };
    if universals.len() > MAX_UNIVERSALS {
        return Err(Error::Qbf(format!(
            "universal block too wide: {} variables (at most {MAX_UNIVERSALS})",
            universals.len()
        )));
    }
    let mut bound = vec![false; q.cnf.num_vars as usize + 1];
    for v in outer.iter().chain(&universals).chain(&inner) {
        if v.index() >= bound.len() {
            return Err(Error::Qbf(format!("prefix variable {} is not in the matrix", v.0)));
        }
        bound[v.index()] = true;
    }
    let mut outer = outer;
    outer.extend((1..bound.len()).filter(|&i| !bound[i]).map(|i| Var(i as u32)));
    Ok(Shape { outer, universals, inner })
}

pub fn expand_universals(q: &QuantifiedCnf) -> Result<SolveResult<SkolemModel>> {
    expand_universals_with_cancel(q, None)
}

/// Decides `q` by instantiating the matrix once per valuation of the
/// universal block, with a private copy of the inner existentials per copy.
pub fn expand_universals_with_cancel(
    q: &QuantifiedCnf,
    cancel: Option<&AtomicBool>,
) -> Result<SolveResult<SkolemModel>> {
    let Shape { outer, universals, inner } = shape(q)?;
    let n = q.cnf.num_vars as usize;
    let copies = 1usize << universals.len();

    // role[v]: None for outer, Some(Ok(j)) universal j, Some(Err(i)) inner i
    let mut role: Vec<Option<std::result::Result<usize, usize>>> = vec![None; n + 1];
    for (j, u) in universals.iter().enumerate() {
        role[u.index()] = Some(Ok(j));
    }
    for (i, e) in inner.iter().enumerate() {
        role[e.index()] = Some(Err(i));
    }
    let inner_var = |k: usize, i: usize| Var((n + k * inner.len() + i + 1) as u32);

    let mut expanded = Cnf::new((n + copies * inner.len()) as u32);
    for k in 0..copies {
        'clause: for clause in &q.cnf.clauses {
            let mut out = Vec::with_capacity(clause.len());
            for &l in clause {
                match role[l.var().index()] {
                    None => out.push(l),
                    Some(Ok(j)) => {
                        let value = k >> j & 1 == 1;
                        if value == l.is_positive() {
                            continue 'clause;
                        }
                    }
                    Some(Err(i)) => out.push(Lit::new(inner_var(k, i), l.is_positive())),
                }
            }
            expanded.add_clause(out);
        }
    }
    log::debug!(
        "expansion: {} universals, {} copies, {} vars, {} clauses",
        universals.len(),
        copies,
        expanded.num_vars,
        expanded.clauses.len()
    );

    let Some(model) = cdcl::solve_with_cancel(&expanded, cancel)? else {
        return Ok(SolveResult::Unsat);
    };
    let mut outer_asg = Assignment::new(n as u32);
    for &v in &outer {
        outer_asg.set(v, model.get(v).unwrap_or(false));
    }
    let tables = (0..copies)
        .map(|k| {
            let mut t = Assignment::new(n as u32);
            for (i, &e) in inner.iter().enumerate() {
                t.set(e, model.get(inner_var(k, i)).unwrap_or(false));
            }
            t
        })
        .collect();
    Ok(SolveResult::Sat(SkolemModel { outer: outer_asg, universals, tables }))
}

/// Fixes the outer block to `outer` with unit clauses, leaving the residual
/// ∀∃ problem.
pub fn fix_outer(q: &QuantifiedCnf, outer: &Assignment) -> QuantifiedCnf {
    let mut fixed = q.clone();
    let mut prefix = normalize_prefix(&fixed.prefix);
    if let Some(first) = prefix.first() {
        if first.quant == Quant::Exists {
            for &v in &first.vars {
                if let Some(b) = outer.get(v) {
                    fixed.cnf.add_clause(vec![Lit::new(v, b)]);
                }
            }
            prefix.remove(0);
        }
    }
    fixed.prefix = prefix;
    fixed
}
