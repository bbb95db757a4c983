//! Deciding constraint systems: an internal CDCL core, QBF by universal
//! expansion, and an adapter for external solver processes.

mod cdcl;
mod expand;
mod external;

use std::sync::atomic::AtomicBool;

pub use cdcl::{Solver, Stats};
pub use expand::{expand_universals, expand_universals_with_cancel, fix_outer, SkolemModel, MAX_UNIVERSALS};
pub use external::{solve_external, ExternalSolver, InstanceFormat};

use crate::error::Result;
use crate::logicir::{Assignment, Cnf, Lit, Var};

/// Verdict of a decision procedure; the model exists exactly when satisfiable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult<M = Assignment> {
    Sat(M),
    Unsat,
}

impl<M> SolveResult<M> {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }

    pub fn model(&self) -> Option<&M> {
        match self {
            SolveResult::Sat(m) => Some(m),
            SolveResult::Unsat => None,
        }
    }

    pub fn into_model(self) -> Option<M> {
        match self {
            SolveResult::Sat(m) => Some(m),
            SolveResult::Unsat => None,
        }
    }
}

impl<M> From<Option<M>> for SolveResult<M> {
    fn from(m: Option<M>) -> Self {
        m.map_or(SolveResult::Unsat, SolveResult::Sat)
    }
}

pub fn solve_cnf(cnf: &Cnf) -> SolveResult {
    cdcl::solve_with_cancel(cnf, None)
        .expect("uncancellable solve cannot fail")
        .into()
}

/// Like [`solve_cnf`], but gives up with [`crate::Error::Cancelled`] once
/// `cancel` is raised.
pub fn solve_cnf_with_cancel(cnf: &Cnf, cancel: &AtomicBool) -> Result<SolveResult> {
    Ok(cdcl::solve_with_cancel(cnf, Some(cancel))?.into())
}

/// `pigeons` pigeons into `holes` holes, one per hole; variable
/// `p * holes + h + 1` places pigeon `p` in hole `h`.
pub fn pigeonhole(pigeons: u32, holes: u32) -> Cnf {
    let x = |p: u32, h: u32| Lit::new(Var(p * holes + h + 1), true);
    let mut cnf = Cnf::new(pigeons * holes);
    for p in 0..pigeons {
        cnf.add_clause((0..holes).map(|h| x(p, h)).collect());
    }
    for h in 0..holes {
        for p in 0..pigeons {
            for q in p + 1..pigeons {
                cnf.add_clause(vec![x(p, h).negate(), x(q, h).negate()]);
            }
        }
    }
    cnf
}
