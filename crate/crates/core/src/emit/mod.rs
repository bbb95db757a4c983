//! Serializers for synthesized machines.

mod aiger;
mod dot;
mod smv;

pub use aiger::{emit_aiger, Aig};
pub use dot::emit_dot;
pub use smv::emit_smv;

use crate::machine::Machine;

/// Output formats for a synthesized machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Aiger,
    Smv,
    Dot,
}

pub fn emit(m: &Machine, target: Target) -> String {
    match target {
        Target::Aiger => emit_aiger(m),
        Target::Smv => emit_smv(m),
        Target::Dot => emit_dot(m),
    }
}
