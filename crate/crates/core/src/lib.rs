//! Model checking and proof checking for the logic of unknowable truths.
//!
//! The language extends epistemic logic (`K_i`) with public announcements
//! (`[ψ]φ`) and an unknowability operator `U_i φ`: φ is true, and no truthful
//! public announcement of an epistemic formula lets agent `i` come to know φ.
//!
//! * [`formula`]: syntax, parser, printer, size / U-depth measures.
//! * [`kripke`]: finite reflexive models, model files, restriction, enumeration.
//! * [`bisim`]: autobisimulation partitions, quotients, characteristic formulas.
//! * [`semantics`]: evaluation, knowability witnesses, bounded validity search.
//! * [`rewrite`]: announcement elimination by reduction axioms.
//! * [`proofcheck`]: checker for Hilbert-style derivations.
//! * [`suite`]: executable catalog of the logic's known validities and invalidities.
//! * [`cli`]: the `lut` command-line front end.

pub mod bisim;
pub mod cli;
pub mod fixtures;
pub mod formula;
pub mod kripke;
pub mod proofcheck;
pub mod rewrite;
pub mod semantics;
pub mod suite;

pub use formula::{parse, Complexity, Formula};
pub use kripke::{load_model, Model, StateSet};
