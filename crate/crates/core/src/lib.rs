//! Core engine for the CL12 fragment of computability logic: formula and
//! sequent syntax, game semantics over finite interpretations, a classical
//! first-order validity oracle, the CL12 calculus with proof checking and
//! bounded proof search, compilation of proofs into winning strategies,
//! strategy composition in two modes, and the completeness counterstrategy.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats and the CLI
//! live in the companion `gameproof` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod calculus;
pub mod classical;
pub mod composition;
pub mod counterstrategy;
pub mod extraction;
pub mod runtime;
pub mod semantics;
pub mod syntax;

pub use syntax::{Formula, Sequent, Term};
