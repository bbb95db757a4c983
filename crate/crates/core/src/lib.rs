//! Bounded synthesis of reactive controllers from LTL specifications.
//!
//! The pipeline: parse a JSON specification ([`specio`]), build a universal
//! co-Büchi automaton for it ([`omega`]), encode the existence of an
//! implementation with `n` states as SAT or QBF ([`encode`], [`logicir`]),
//! decide it ([`solve`]), and on success decode, verify and print the
//! implementation ([`machine`], [`emit`]). [`search`] drives the bound.

pub mod error;
pub mod omega;
pub mod emit;
pub mod encode;
pub mod logicir;
pub mod machine;
pub mod prop;
pub mod search;
pub mod solve;
pub mod specio;

pub use error::{Error, Result};
pub use omega::UniversalCoBuchi;
pub use prop::Prop;
pub use specio::{Ltl, Player, Semantics, SynthesisProblem};
