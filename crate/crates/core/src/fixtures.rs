//! The two hand-drawn countermodels used throughout the catalog.

use crate::kripke::{load_model, Model};

/// `s: p` sees `t: ¬p`; both reflexive. `B_i p` holds at `s` but announcing
/// `p` lets `i` learn `p`, so `U_i p` fails there.
pub const TWO_STATE_JSON: &str = include_str!("../fixtures/two_state.json");

/// `t: p,¬q` ← `s: p,q` → `u: ¬p,q`; all reflexive. `U_i(¬K_i p ∧ ¬K_i q)`
/// holds at `s` while neither conjunct is an unknowable truth there.
pub const THREE_STATE_JSON: &str = include_str!("../fixtures/three_state.json");

pub fn two_state() -> Model {
    load_model(TWO_STATE_JSON).expect("two-state fixture is valid")
}

pub fn three_state() -> Model {
    load_model(THREE_STATE_JSON).expect("three-state fixture is valid")
}
