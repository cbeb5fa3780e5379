//! Exact singular Hecke algebras, Markov traces and HOMFLY-type invariants of
//! singular links presented as closed singular braid words.

pub mod braid;
pub mod cli;
pub mod coeffs;
pub mod hecke;
pub mod invariant;
pub mod singular;
pub mod traces;
pub mod verify;
