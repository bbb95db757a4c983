//! Conflict-driven clause learning SAT solver.
//!
//! Two watched literals with blocking literals, first-UIP learning with
//! local minimization, VSIDS branching (ties broken by lowest variable
//! index), phase saving, Luby restarts with a base of 64 conflicts and
//! learnt-clause reduction by LBD and activity every 2000 conflicts.

use std::sync::atomic::{AtomicBool, Ordering};

use crate::error::{Error, Result};
use crate::logicir::{Assignment, Cnf};

const NO_REASON: u32 = u32::MAX;
const RESTART_BASE: u64 = 64;
const REDUCE_INTERVAL: u64 = 2000;
const VAR_DECAY: f64 = 0.95;
const CLAUSE_DECAY: f64 = 0.999;

/// Internal literal: `2 * var + negated`, variables 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct L(u32);

impl L {
    fn new(var: usize, negated: bool) -> L {
        L((var as u32) << 1 | negated as u32)
    }

    fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    fn negated(self) -> bool {
        self.0 & 1 == 1
    }

    fn not(self) -> L {
        L(self.0 ^ 1)
    }

    fn idx(self) -> usize {
        self.0 as usize
    }
}

/// 1 = true, -1 = false, 0 = unassigned.
fn value(assigns: &[i8], l: L) -> i8 {
    let a = assigns[l.var()];
    if l.negated() {
        -a
    } else {
        a
    }
}

#[derive(Clone, Copy)]
struct Watch {
    cref: u32,
    blocker: L,
}

struct Clause {
    lits: Vec<L>,
    learnt: bool,
    deleted: bool,
    activity: f64,
    lbd: u32,
}

/// Max-heap of variables ordered by activity, then by lowest index.
struct VarHeap {
    heap: Vec<usize>,
    pos: Vec<Option<usize>>,
}

impl VarHeap {
    fn new(n: usize) -> Self {
        VarHeap { heap: Vec::with_capacity(n), pos: vec![None; n] }
    }

    fn better(act: &[f64], a: usize, b: usize) -> bool {
        act[a] > act[b] || (act[a] == act[b] && a < b)
    }

    fn contains(&self, v: usize) -> bool {
        self.pos[v].is_some()
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v] = Some(self.heap.len());
        self.heap.push(v);
        self.up(self.heap.len() - 1, act);
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.pos[top] = None;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last] = Some(0);
            self.down(0, act);
        }
        Some(top)
    }

    fn bumped(&mut self, v: usize, act: &[f64]) {
        if let Some(i) = self.pos[v] {
            self.up(i, act);
        }
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if !Self::better(act, v, self.heap[parent]) {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i]] = Some(i);
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        loop {
            let left = 2 * i + 1;
            if left >= self.heap.len() {
                break;
            }
            let right = left + 1;
            let child = if right < self.heap.len() && Self::better(act, self.heap[right], self.heap[left]) {
                right
            } else {
                left
            };
            if !Self::better(act, self.heap[child], v) {
                break;
            }
            self.heap[i] = self.heap[child];
            self.pos[self.heap[i]] = Some(i);
            i = child;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }
}

/// Finite Luby sequence 1 1 2 1 1 2 4 ...
fn luby(mut x: u64) -> u64 {
    let mut size = 1;
    let mut seq = 0;
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    1 << seq
}

#[derive(Debug, Clone, Default)]
pub struct Stats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
}

pub struct Solver<'c> {
    num_vars: usize,
    db: Vec<Clause>,
    learnts: Vec<u32>,
    watches: Vec<Vec<Watch>>,
    assigns: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<L>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: VarHeap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    ok: bool,
    cancel: Option<&'c AtomicBool>,
    pub stats: Stats,
}

impl<'c> Solver<'c> {
    pub fn new(cnf: &Cnf) -> Self {
        let n = cnf.num_vars as usize;
        let mut s = Solver {
            num_vars: n,
            db: Vec::new(),
            learnts: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            assigns: vec![0; n],
            level: vec![0; n],
            reason: vec![NO_REASON; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; n],
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: VarHeap::new(n),
            phase: vec![false; n],
            seen: vec![false; n],
            ok: true,
            cancel: None,
            stats: Stats::default(),
        };
        for v in 0..n {
            s.heap.insert(v, &s.activity);
        }
        for c in &cnf.clauses {
            let lits: Vec<L> = c.iter().map(|l| L::new(l.var().index() - 1, !l.is_positive())).collect();
            s.add_clause(lits);
            if !s.ok {
                break;
            }
        }
        s
    }

    pub fn with_cancel(mut self, flag: &'c AtomicBool) -> Self {
        self.cancel = Some(flag);
        self
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn add_clause(&mut self, mut lits: Vec<L>) {
        lits.sort_by_key(|l| l.0);
        lits.dedup();
        if lits.windows(2).any(|w| w[0].var() == w[1].var()) {
            return; // tautology
        }
        if lits.iter().any(|&l| value(&self.assigns, l) == 1) {
            return;
        }
        lits.retain(|&l| value(&self.assigns, l) == 0);
        match lits.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(lits[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.attach(lits, false, 0);
            }
        }
    }

    fn attach(&mut self, lits: Vec<L>, learnt: bool, lbd: u32) -> u32 {
        let cref = self.db.len() as u32;
        self.watches[lits[0].not().idx()].push(Watch { cref, blocker: lits[1] });
        self.watches[lits[1].not().idx()].push(Watch { cref, blocker: lits[0] });
        self.db.push(Clause { lits, learnt, deleted: false, activity: 0.0, lbd });
        if learnt {
            self.learnts.push(cref);
        }
        cref
    }

    fn enqueue(&mut self, l: L, reason: u32) {
        let v = l.var();
        self.assigns[v] = if l.negated() { -1 } else { 1 };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Unit propagation; returns a conflicting clause if any.
    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = p.not();
            let mut ws = std::mem::take(&mut self.watches[p.idx()]);
            let (mut i, mut j) = (0, 0);
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if value(&self.assigns, w.blocker) == 1 {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref as usize;
                let lits = &mut self.db[cref].lits;
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                let nw = Watch { cref: w.cref, blocker: first };
                if first != w.blocker && value(&self.assigns, first) == 1 {
                    ws[j] = nw;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..lits.len() {
                    if value(&self.assigns, lits[k]) != -1 {
                        lits.swap(1, k);
                        self.watches[lits[1].not().idx()].push(nw);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = nw;
                j += 1;
                if value(&self.assigns, first) == -1 {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, w.cref);
                }
            }
            ws.truncate(j);
            self.watches[p.idx()] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: usize) {
        let c = &mut self.db[cref];
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &l in &self.learnts {
                self.db[l as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting
    /// literal first, highest remaining level second) and backjump level.
    fn analyze(&mut self, mut confl: u32) -> (Vec<L>, u32) {
        let mut learnt = vec![L(0)];
        let mut path = 0;
        let mut p: Option<L> = None;
        let mut idx = self.trail.len();
        loop {
            let cref = confl as usize;
            if self.db[cref].learnt {
                self.bump_clause(cref);
            }
            let skip = usize::from(p.is_some());
            for k in skip..self.db[cref].lits.len() {
                let q = self.db[cref].lits[k];
                let v = q.var();
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = true;
                    if self.level[v] >= self.decision_level() {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var()] {
                    break;
                }
            }
            let lit = self.trail[idx];
            p = Some(lit);
            confl = self.reason[lit.var()];
            self.seen[lit.var()] = false;
            path -= 1;
            if path == 0 {
                break;
            }
        }
        learnt[0] = p.unwrap().not();

        // local minimization: drop literals implied by the rest
        let mut kept = vec![learnt[0]];
        for &l in &learnt[1..] {
            let r = self.reason[l.var()];
            let redundant = r != NO_REASON
                && self.db[r as usize].lits[1..]
                    .iter()
                    .all(|q| self.seen[q.var()] || self.level[q.var()] == 0);
            if !redundant {
                kept.push(l);
            }
        }
        for &l in &learnt {
            self.seen[l.var()] = false;
        }
        let mut learnt = kept;

        let back = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for k in 2..learnt.len() {
                if self.level[learnt[k].var()] > self.level[learnt[max_i].var()] {
                    max_i = k;
                }
            }
            learnt.swap(1, max_i);
            self.level[learnt[1].var()]
        };
        (learnt, back)
    }

    fn lbd(&self, lits: &[L]) -> u32 {
        let mut levels: Vec<u32> = lits.iter().map(|l| self.level[l.var()]).collect();
        levels.sort_unstable();
        levels.dedup();
        levels.len() as u32
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for k in (lim..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = l.var();
            self.phase[v] = !l.negated();
            self.assigns[v] = 0;
            self.reason[v] = NO_REASON;
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = lim;
    }

    fn locked(&self, cref: u32) -> bool {
        let l0 = self.db[cref as usize].lits[0];
        self.reason[l0.var()] == cref && value(&self.assigns, l0) == 1
    }

    /// Deletes the worse half of the learnt clauses (high LBD, low activity)
    /// and rebuilds the watch lists.
    fn reduce_db(&mut self) {
        let mut cands: Vec<u32> = self
            .learnts
            .iter()
            .copied()
            .filter(|&c| self.db[c as usize].lits.len() > 2 && !self.locked(c))
            .collect();
        cands.sort_by(|&a, &b| {
            let (ca, cb) = (&self.db[a as usize], &self.db[b as usize]);
            cb.lbd.cmp(&ca.lbd).then(ca.activity.total_cmp(&cb.activity))
        });
        for &c in &cands[..cands.len() / 2] {
            self.db[c as usize].deleted = true;
        }
        self.learnts.retain(|&c| !self.db[c as usize].deleted);
        for w in &mut self.watches {
            w.clear();
        }
        for (cref, c) in self.db.iter_mut().enumerate() {
            if c.deleted {
                c.lits = Vec::new();
                continue;
            }
            if c.lits.len() >= 2 {
                self.watches[c.lits[0].not().idx()].push(Watch { cref: cref as u32, blocker: c.lits[1] });
                self.watches[c.lits[1].not().idx()].push(Watch { cref: cref as u32, blocker: c.lits[0] });
            }
        }
    }

    fn pick_branch(&mut self) -> Option<L> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assigns[v] == 0 {
                self.stats.decisions += 1;
                return Some(L::new(v, !self.phase[v]));
            }
        }
        None
    }

    /// Runs the search. `Ok(Some(model))` with `model[v]` for `v` in
    /// `1..=num_vars` when satisfiable.
    pub fn solve(&mut self) -> Result<Option<Vec<bool>>> {
        if !self.ok || self.propagate().is_some() {
            self.ok = false;
            return Ok(None);
        }
        let mut restart_no = 0;
        let mut budget = RESTART_BASE * luby(restart_no);
        let mut since_restart = 0;
        let mut next_reduce = REDUCE_INTERVAL;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                since_restart += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Ok(None);
                }
                let (learnt, back) = self.analyze(confl);
                self.cancel_until(back);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let lbd = self.lbd(&learnt);
                    let asserting = learnt[0];
                    let cref = self.attach(learnt, true, lbd);
                    self.bump_clause(cref as usize);
                    self.enqueue(asserting, cref);
                }
                self.var_inc /= VAR_DECAY;
                self.cla_inc /= CLAUSE_DECAY;
                if self.stats.conflicts.is_multiple_of(256) {
                    if let Some(flag) = self.cancel {
                        if flag.load(Ordering::Relaxed) {
                            return Err(Error::Cancelled);
                        }
                    }
                }
            } else {
                if since_restart >= budget {
                    self.stats.restarts += 1;
                    restart_no += 1;
                    budget = RESTART_BASE * luby(restart_no);
                    since_restart = 0;
                    self.cancel_until(0);
                }
                if self.stats.conflicts >= next_reduce {
                    next_reduce += REDUCE_INTERVAL;
                    self.reduce_db();
                }
                match self.pick_branch() {
                    None => {
                        let mut model = vec![false; self.num_vars + 1];
                        for v in 0..self.num_vars {
                            model[v + 1] = self.assigns[v] == 1;
                        }
                        return Ok(Some(model));
                    }
                    Some(l) => {
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(l, NO_REASON);
                    }
                }
            }
        }
    }
}

/// Solves `cnf`, checking any model against every clause before returning.
pub fn solve_with_cancel(cnf: &Cnf, cancel: Option<&AtomicBool>) -> Result<Option<Assignment>> {
    let mut solver = Solver::new(cnf);
    if let Some(flag) = cancel {
        solver = solver.with_cancel(flag);
    }
    let Some(model) = solver.solve()? else {
        return Ok(None);
    };
    if !cnf.is_satisfied_by(&model) {
        return Err(Error::Solver("internal error: model violates a clause".into()));
    }
    log::trace!(
        "cdcl: {} vars, {} clauses, {} conflicts",
        cnf.num_vars,
        cnf.clauses.len(),
        solver.stats.conflicts
    );
    Ok(Some(Assignment::from_total(&model)))
}
