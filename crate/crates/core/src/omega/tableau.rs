//! Tableau translation from NNF LTL to Büchi automata.
//!
//! Tableau nodes are covers of a set of obligations: the literals that must
//! hold for the letter being read, the obligations passed to the next
//! position, and for every until-subformula whether the node fulfils it.
//! That yields a generalized Büchi automaton with one acceptance set per
//! until; a level counter then degeneralizes it to a single Büchi set.
//! Edges are labelled with the letter read when entering the target node.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::{resolve_atom, Edge, EdgeLabel, Nba};
use crate::error::{Error, Result};
use crate::prop::Prop;
use crate::specio::Ltl;

type FormulaId = usize;

/// Result of expanding a set of obligations for one position.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Cover {
    pos: BTreeSet<usize>,
    neg: BTreeSet<usize>,
    next: BTreeSet<FormulaId>,
    /// bit `k`: this node lies in acceptance set `k`
    fulfils: Vec<bool>,
}

struct Tableau {
    formulas: Vec<Ltl>,
    ids: HashMap<Ltl, FormulaId>,
    /// until-like formulas (`U`, `F`) with their right-hand side
    untils: Vec<(FormulaId, FormulaId)>,
    atoms: HashMap<FormulaId, usize>,
    cache: HashMap<BTreeSet<FormulaId>, Vec<Cover>>,
}

#[derive(Default, Clone)]
struct Branch {
    todo: Vec<FormulaId>,
    old: BTreeSet<FormulaId>,
    next: BTreeSet<FormulaId>,
    pos: BTreeSet<usize>,
    neg: BTreeSet<usize>,
}

impl Tableau {
    fn new(root: &Ltl, aps: &[String]) -> Result<(Self, FormulaId)> {
        let mut t = Tableau {
            formulas: Vec::new(),
            ids: HashMap::new(),
            untils: Vec::new(),
            atoms: HashMap::new(),
            cache: HashMap::new(),
        };
        let root_id = t.intern(root, aps)?;
        Ok((t, root_id))
    }

    fn intern(&mut self, f: &Ltl, aps: &[String]) -> Result<FormulaId> {
        if let Some(&id) = self.ids.get(f) {
            return Ok(id);
        }
        let children: Vec<FormulaId> =
            f.children().into_iter().map(|c| self.intern(c, aps)).collect::<Result<_>>()?;
        let id = self.formulas.len();
        self.formulas.push(f.clone());
        self.ids.insert(f.clone(), id);
        match f {
            Ltl::Atom(name) => {
                self.atoms.insert(id, resolve_atom(aps, name)?);
            }
            Ltl::Until(..) => self.untils.push((id, children[1])),
            Ltl::Finally(_) => self.untils.push((id, children[0])),
            Ltl::Implies(..) | Ltl::WeakUntil(..) => {
                return Err(Error::Encoding("translator input must be in negation normal form".into()))
            }
            Ltl::Not(inner) if !matches!(**inner, Ltl::Atom(_)) => {
                return Err(Error::Encoding("translator input must be in negation normal form".into()))
            }
            _ => {}
        }
        Ok(id)
    }

    fn child(&self, f: FormulaId, k: usize) -> FormulaId {
        self.ids[self.formulas[f].children()[k]]
    }

    /// All covers of the obligation set, deduplicated.
    fn expand(&mut self, obligations: &BTreeSet<FormulaId>) -> Vec<Cover> {
        if let Some(c) = self.cache.get(obligations) {
            return c.clone();
        }
        let mut out = BTreeSet::new();
        let mut stack = vec![Branch { todo: obligations.iter().rev().copied().collect(), ..Default::default() }];
        while let Some(mut b) = stack.pop() {
            let Some(f) = b.todo.pop() else {
                let fulfils = self
                    .untils
                    .iter()
                    .map(|&(u, rhs)| !b.old.contains(&u) || b.old.contains(&rhs))
                    .collect();
                out.insert(Cover { pos: b.pos, neg: b.neg, next: b.next, fulfils });
                continue;
            };
            if !b.old.insert(f) {
                stack.push(b);
                continue;
            }
            match &self.formulas[f] {
                Ltl::True => stack.push(b),
                Ltl::False => {}
                Ltl::Atom(_) => {
                    let ap = self.atoms[&f];
                    if !b.neg.contains(&ap) {
                        b.pos.insert(ap);
                        stack.push(b);
                    }
                }
                Ltl::Not(_) => {
                    let ap = self.atoms[&self.child(f, 0)];
                    if !b.pos.contains(&ap) {
                        b.neg.insert(ap);
                        stack.push(b);
                    }
                }
                Ltl::And(..) => {
                    b.todo.push(self.child(f, 1));
                    b.todo.push(self.child(f, 0));
                    stack.push(b);
                }
                Ltl::Or(..) => {
                    let mut other = b.clone();
                    other.todo.push(self.child(f, 1));
                    b.todo.push(self.child(f, 0));
                    stack.push(other);
                    stack.push(b);
                }
                Ltl::Next(_) => {
                    b.next.insert(self.child(f, 0));
                    stack.push(b);
                }
                Ltl::Until(..) => {
                    // a U b  ≡  b ∨ (a ∧ X(a U b))
                    let mut postpone = b.clone();
                    postpone.todo.push(self.child(f, 0));
                    postpone.next.insert(f);
                    b.todo.push(self.child(f, 1));
                    stack.push(postpone);
                    stack.push(b);
                }
                Ltl::Release(..) => {
                    // a R b  ≡  (a ∧ b) ∨ (b ∧ X(a R b))
                    let mut postpone = b.clone();
                    postpone.todo.push(self.child(f, 1));
                    postpone.next.insert(f);
                    b.todo.push(self.child(f, 1));
                    b.todo.push(self.child(f, 0));
                    stack.push(postpone);
                    stack.push(b);
                }
                Ltl::Finally(_) => {
                    let mut postpone = b.clone();
                    postpone.next.insert(f);
                    b.todo.push(self.child(f, 0));
                    stack.push(postpone);
                    stack.push(b);
                }
                Ltl::Globally(_) => {
                    b.todo.push(self.child(f, 0));
                    b.next.insert(f);
                    stack.push(b);
                }
                Ltl::Implies(..) | Ltl::WeakUntil(..) => unreachable!("rejected by intern"),
            }
        }
        let covers: Vec<Cover> = out.into_iter().collect();
        self.cache.insert(obligations.clone(), covers.clone());
        covers
    }
}

fn cover_label(c: &Cover) -> EdgeLabel {
    Prop::and_all(
        c.pos
            .iter()
            .map(|&a| Prop::literal(a, true))
            .chain(c.neg.iter().map(|&a| Prop::literal(a, false))),
    )
}

/// Translates an NNF formula into a Büchi automaton accepting exactly the
/// words satisfying it. Atoms are resolved against `aps`. The result is
/// pruned and quotiented before it is returned.
pub fn ltl_to_nba(formula: &Ltl, aps: &[String]) -> Result<Nba> {
    let (mut tableau, root) = Tableau::new(formula, aps)?;
    let k = tableau.untils.len();

    // A state is identified by the obligations it passes on and its
    // degeneralization level: the literals of the cover only label the
    // incoming edge, so covers agreeing on both have the same future.
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
    enum Key {
        Init,
        Node(BTreeSet<FormulaId>, usize),
    }
    let mut index: HashMap<Key, usize> = HashMap::new();
    let mut keys: Vec<Key> = Vec::new();
    let mut edges: Vec<BTreeMap<usize, Vec<EdgeLabel>>> = Vec::new();
    let mut queue = VecDeque::new();

    let mut state_of = |key: Key, keys: &mut Vec<Key>, edges: &mut Vec<BTreeMap<_, _>>, queue: &mut VecDeque<usize>| {
        *index.entry(key.clone()).or_insert_with(|| {
            keys.push(key);
            edges.push(BTreeMap::new());
            queue.push_back(keys.len() - 1);
            keys.len() - 1
        })
    };

    let init = state_of(Key::Init, &mut keys, &mut edges, &mut queue);
    while let Some(s) = queue.pop_front() {
        let (obligations, level) = match &keys[s] {
            Key::Init => (BTreeSet::from([root]), 0),
            Key::Node(next, level) => (next.clone(), *level),
        };
        let base = if level == k { 0 } else { level };
        for cover in tableau.expand(&obligations) {
            let mut lvl = base;
            while lvl < k && cover.fulfils[lvl] {
                lvl += 1;
            }
            let label = cover_label(&cover);
            let t = state_of(Key::Node(cover.next, lvl), &mut keys, &mut edges, &mut queue);
            edges[s].entry(t).or_default().push(label);
        }
    }

    let accepting = keys
        .iter()
        .map(|key| matches!(key, Key::Node(_, lvl) if *lvl == k))
        .collect();
    let edges = edges
        .into_iter()
        .map(|targets| {
            targets
                .into_iter()
                .map(|(target, labels)| Edge { label: Prop::or_all(labels), target })
                .collect()
        })
        .collect();
    Ok(super::reduce::reduce(Nba { aps: aps.to_vec(), initial: init, edges, accepting }))
}
