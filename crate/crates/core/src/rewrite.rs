//! Announcement elimination with the reduction axioms
//!
//! ```text
//! AP  [ψ]p      ↔ (ψ → p)            (also used for [ψ]top)
//! AN  [ψ]¬φ     ↔ (ψ → ¬[ψ]φ)
//! AC  [ψ](φ∧χ)  ↔ ([ψ]φ ∧ [ψ]χ)
//! AK  [ψ]K_iφ   ↔ (ψ → K_i[ψ]φ)
//! AA  [ψ][χ]φ   ↔ [ψ ∧ [ψ]χ]φ
//! ```
//!
//! applied left to right at the leftmost-outermost redex. There is no axiom
//! for `[ψ]U_iχ`, and the rewriter never looks inside `U_i`.

use crate::formula::{Complexity, Formula};
use serde::Serialize;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReductionAxiom {
    AP,
    AN,
    AC,
    AK,
    AA,
}

impl fmt::Display for ReductionAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("formula contains the unknowability operator, which has no reduction axiom")]
    ContainsUnknowability,
    #[error("rewrite by {axiom} did not decrease complexity: {before:?} -> {after:?}")]
    NotDecreasing {
        axiom: ReductionAxiom,
        before: Complexity,
        after: Complexity,
    },
}

/// Right-hand side of the reduction axiom whose left-hand side is `[ψ]body`,
/// or `None` when `body` is headed by `U_i`.
pub fn reduct(announced: &Arc<Formula>, body: &Formula) -> Option<(ReductionAxiom, Formula)> {
    let psi = || Formula::clone(announced);
    let ann = |x: &Arc<Formula>| Formula::Ann(announced.clone(), x.clone());
    let out = match body {
        Formula::Atom(_) | Formula::Top => (ReductionAxiom::AP, psi().implies(body.clone())),
        Formula::Neg(x) => (ReductionAxiom::AN, psi().implies(ann(x).not())),
        Formula::And(l, r) => (ReductionAxiom::AC, ann(l).and(ann(r))),
        Formula::Know(a, x) => (
            ReductionAxiom::AK,
            psi().implies(Formula::Know(a.clone(), Arc::new(ann(x)))),
        ),
        Formula::Ann(chi, x) => (
            ReductionAxiom::AA,
            Formula::Ann(Arc::new(psi().and(ann(chi))), x.clone()),
        ),
        Formula::Unk(..) => return None,
    };
    Some(out)
}

/// Rewrite the leftmost-outermost redex. `None` when there is none.
pub fn reduce_once(f: &Formula) -> Option<(ReductionAxiom, Formula)> {
    match f {
        Formula::Atom(_) | Formula::Top | Formula::Unk(..) => None,
        Formula::Neg(x) => reduce_once(x).map(|(ax, x)| (ax, x.not())),
        Formula::Know(a, x) => {
            reduce_once(x).map(|(ax, x)| (ax, Formula::Know(a.clone(), Arc::new(x))))
        }
        Formula::And(l, r) => {
            if let Some((ax, l)) = reduce_once(l) {
                return Some((ax, Formula::And(Arc::new(l), r.clone())));
            }
            reduce_once(r).map(|(ax, r)| (ax, Formula::And(l.clone(), Arc::new(r))))
        }
        Formula::Ann(a, body) => {
            if let Some(hit) = reduct(a, body) {
                return Some(hit);
            }
            if let Some((ax, a)) = reduce_once(a) {
                return Some((ax, Formula::Ann(Arc::new(a), body.clone())));
            }
            reduce_once(body).map(|(ax, b)| (ax, Formula::Ann(a.clone(), Arc::new(b))))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    /// Axiom used to reach `formula`; `None` for the input.
    pub axiom: Option<ReductionAxiom>,
    pub formula: Formula,
    pub complexity: Complexity,
}

/// Every intermediate formula from `f` to its announcement-free normal form,
/// checking that complexity strictly drops at each step.
pub fn trace(f: &Formula) -> Result<Vec<Step>, RewriteError> {
    if !f.is_pal() {
        return Err(RewriteError::ContainsUnknowability);
    }
    let mut steps = vec![Step {
        axiom: None,
        formula: f.clone(),
        complexity: f.complexity(),
    }];
    loop {
        let last = steps.last().unwrap();
        let Some((axiom, next)) = reduce_once(&last.formula) else {
            break;
        };
        let complexity = next.complexity();
        if complexity >= last.complexity {
            return Err(RewriteError::NotDecreasing {
                axiom,
                before: last.complexity,
                after: complexity,
            });
        }
        steps.push(Step {
            axiom: Some(axiom),
            formula: next,
            complexity,
        });
    }
    Ok(steps)
}

/// Equivalent epistemic formula for an announcement-logic formula.
pub fn eliminate_announcements(f: &Formula) -> Result<Formula, RewriteError> {
    Ok(trace(f)?.pop().unwrap().formula)
}
