//! Truth of formulas at pointed models.
//!
//! Evaluation works on extensions (sets of states) rather than single points.
//! Every model that arises during evaluation is the root model restricted to
//! some subset of its states, since restricting twice is restricting once to
//! the intersection. So a "view" is just a [`StateSet`] of the root model and
//! no submodel is ever materialized. Extensions are memoized per
//! `(view, subformula)` and partitions per view.
//!
//! `U_i φ` holds at `s` in view `W` iff φ holds at `s` and for no union `T` of
//! bisimulation blocks of `W` with `s ∈ T` does `K_i φ` hold at `s` in view
//! `T`. Those unions are exactly the extensions of epistemic formulas true at
//! `s`; announcements false at `s` are vacuous.

use crate::bisim::{defining_formula, defining_formula_at_rank, partition, partition_within, Partition};
use crate::formula::Formula;
use crate::kripke::{enumerate_models, EnumerationBounds, Model, ModelError, StateSet};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Memoizing evaluator over one root model.
///
/// Cache keys use subformula addresses; the `'f` borrow keeps every evaluated
/// formula alive (and so its address unique) for the evaluator's lifetime.
pub struct Evaluator<'m, 'f> {
    model: &'m Model,
    agents: HashMap<&'f str, usize>,
    extensions: HashMap<(StateSet, usize), StateSet>,
    partitions: HashMap<StateSet, Partition>,
}

impl<'m, 'f> Evaluator<'m, 'f> {
    pub fn new(model: &'m Model) -> Self {
        Evaluator {
            model,
            agents: HashMap::new(),
            extensions: HashMap::new(),
            partitions: HashMap::new(),
        }
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    /// Check that every agent in `f` exists in the model.
    pub fn prepare(&mut self, f: &'f Formula) -> Result<(), EvalError> {
        let mut missing = None;
        let model = self.model;
        let agents = &mut self.agents;
        visit_ref(f, &mut |g| {
            if let Formula::Know(a, _) | Formula::Unk(a, _) = g {
                match model.agent_index(a) {
                    Some(i) => {
                        agents.insert(&**a, i);
                    }
                    None => {
                        missing.get_or_insert_with(|| a.to_string());
                    }
                }
            }
        });
        match missing {
            Some(a) => Err(EvalError::UnknownAgent(a)),
            None => Ok(()),
        }
    }

    fn agent(&self, name: &str) -> usize {
        *self
            .agents
            .get(name)
            .expect("formula was prepared against this model")
    }

    pub fn partition_of(&mut self, view: StateSet) -> &Partition {
        let model = self.model;
        self.partitions
            .entry(view)
            .or_insert_with(|| partition_within(model, view))
    }

    /// States of `view` where `K_agent body` holds in the submodel `view`.
    fn know(&mut self, view: StateSet, agent: usize, body: &'f Formula) -> StateSet {
        let inner = self.extension_in(view, body);
        view.iter()
            .filter(|&s| (self.model.successors(agent, s) & view).is_subset(inner))
            .collect()
    }

    /// Extension of `f` in the submodel on `view`. `f` must have been
    /// [`prepare`](Self::prepare)d.
    pub fn extension_in(&mut self, view: StateSet, f: &'f Formula) -> StateSet {
        let key = (view, f as *const Formula as usize);
        if let Some(&hit) = self.extensions.get(&key) {
            return hit;
        }
        let result = match f {
            Formula::Atom(p) => self.model.atom_extension(p) & view,
            Formula::Top => view,
            Formula::Neg(x) => view - self.extension_in(view, x),
            Formula::And(l, r) => self.extension_in(view, l) & self.extension_in(view, r),
            Formula::Know(a, x) => {
                let a = self.agent(a);
                self.know(view, a, x)
            }
            Formula::Ann(announced, body) => {
                let kept = self.extension_in(view, announced);
                if kept.is_empty() {
                    view
                } else {
                    (view - kept) | self.extension_in(kept, body)
                }
            }
            Formula::Unk(a, x) => {
                let a = self.agent(a);
                let truths = self.extension_in(view, x);
                let mut knowable = StateSet::EMPTY;
                if !truths.is_empty() {
                    let unions: Vec<StateSet> = self.partition_of(view).unions().collect();
                    for t in unions {
                        if ((t & truths) - knowable).is_empty() {
                            continue;
                        }
                        knowable = knowable | (self.know(t, a, x) & truths);
                    }
                }
                truths - knowable
            }
        };
        self.extensions.insert(key, result);
        result
    }
}

fn visit_ref<'f>(f: &'f Formula, g: &mut impl FnMut(&'f Formula)) {
    g(f);
    match f {
        Formula::Atom(_) | Formula::Top => {}
        Formula::Neg(x) | Formula::Know(_, x) | Formula::Unk(_, x) => visit_ref(x, g),
        Formula::And(l, r) | Formula::Ann(l, r) => {
            visit_ref(l, g);
            visit_ref(r, g);
        }
    }
}

/// `{ s | M, s ⊨ φ }`
pub fn extension(model: &Model, f: &Formula) -> Result<StateSet, EvalError> {
    let mut ev = Evaluator::new(model);
    ev.prepare(f)?;
    Ok(ev.extension_in(model.all_states(), f))
}

/// `M, s ⊨ φ` for a state index.
pub fn eval(model: &Model, state: usize, f: &Formula) -> Result<bool, EvalError> {
    if state >= model.num_states() {
        return Err(EvalError::UnknownState(format!("#{state}")));
    }
    Ok(extension(model, f)?.contains(state))
}

/// `M, s ⊨ φ` for a state name.
pub fn eval_named(model: &Model, state: &str, f: &Formula) -> Result<bool, EvalError> {
    let s = model
        .state_index(state)
        .ok_or_else(|| EvalError::UnknownState(state.to_string()))?;
    eval(model, s, f)
}

/// An announcement after which the agent knows the formula: its extension
/// `states` contains the evaluation point and `announcement` defines it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub states: StateSet,
    pub announcement: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub value: bool,
    pub witness: Option<Witness>,
}

/// Evaluate, and when `φ = U_i χ` is false because some epistemic
/// announcement makes `i` know `χ`, return that announcement.
///
/// No witness is produced when χ itself is false at the state, or when the
/// formula is not headed by `U_i`.
pub fn eval_with_witness(model: &Model, state: usize, f: &Formula) -> Result<Verdict, EvalError> {
    let value = eval(model, state, f)?;
    let witness = match f {
        Formula::Unk(agent, body) if !value => knowability_witness(model, state, agent, body)?,
        _ => None,
    };
    Ok(Verdict { value, witness })
}

/// First union of bisimulation blocks `T ∋ state` (in
/// [`Partition::closed_subsets`] order) where `K_agent body` holds at `state`
/// after restricting to `T`, with a defining formula for `T`.
pub fn knowability_witness(
    model: &Model,
    state: usize,
    agent: &str,
    body: &Formula,
) -> Result<Option<Witness>, EvalError> {
    let a = model
        .agent_index(agent)
        .ok_or_else(|| EvalError::UnknownAgent(agent.to_string()))?;
    let mut ev = Evaluator::new(model);
    ev.prepare(body)?;
    if !ev.extension_in(model.all_states(), body).contains(state) {
        return Ok(None);
    }
    let blocks = partition(model);
    for t in blocks.closed_subsets(state) {
        if ev.know(t, a, body).contains(state) {
            return Ok(Some(Witness {
                states: t,
                announcement: smallest_definition(model, &blocks, t),
            }));
        }
    }
    Ok(None)
}

// The lowest-rank characteristic disjunction that already carves out `t`.
fn smallest_definition(model: &Model, blocks: &Partition, t: StateSet) -> Formula {
    (0..model.num_states())
        .map(|rank| defining_formula_at_rank(model, blocks, t, rank))
        .find(|f| extension(model, f).is_ok_and(|ext| ext == t))
        .unwrap_or_else(|| defining_formula(model, blocks, t))
}

/// Result of checking a formula on every pointed model within bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    ValidUpToBound { models_checked: u64 },
    Countermodel { model: Model, state: usize, models_checked: u64 },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::ValidUpToBound { .. })
    }

    pub fn models_checked(&self) -> u64 {
        match self {
            Validity::ValidUpToBound { models_checked }
            | Validity::Countermodel { models_checked, .. } => *models_checked,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValiditySummary {
    pub valid: bool,
    pub models_checked: u64,
}

/// Search the bounded model space for a pointed model falsifying `f`.
pub fn bounded_validity(
    f: &Formula,
    bounds: &EnumerationBounds,
    jobs: usize,
) -> Result<Validity, EvalError> {
    Ok(bounded_validity_all(std::slice::from_ref(f), bounds, jobs)?
        .pop()
        .expect("one result per formula"))
}

const CHUNK: usize = 2048;

/// [`bounded_validity`] for several formulas with a single pass over the
/// model space. Countermodels are the first in enumeration order for each
/// formula, independent of `jobs`.
pub fn bounded_validity_all(
    formulas: &[Formula],
    bounds: &EnumerationBounds,
    jobs: usize,
) -> Result<Vec<Validity>, EvalError> {
    for f in formulas {
        for a in f.agents() {
            if !bounds.agents.contains(&a) {
                return Err(EvalError::UnknownAgent(a.to_string()));
            }
        }
    }
    let mut stream = enumerate_models(bounds)?;
    let mut found: Vec<Option<(Model, usize, u64)>> = vec![None; formulas.len()];
    let mut checked: u64 = 0;

    // Index of the first false state, per formula; None where all hold.
    let check = |m: &Model| -> Vec<Option<usize>> {
        formulas
            .iter()
            .map(|f| {
                let ext = extension(m, f).expect("agents checked against bounds");
                (m.all_states() - ext).first()
            })
            .collect()
    };

    let pool = if jobs > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .expect("thread pool"),
        )
    } else {
        None
    };

    loop {
        let chunk: Vec<Model> = stream.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        let results: Vec<Vec<Option<usize>>> = match &pool {
            Some(pool) => pool.install(|| chunk.par_iter().map(check).collect()),
            None => chunk.iter().map(check).collect(),
        };
        for (offset, (m, falsified)) in chunk.iter().zip(results).enumerate() {
            for (slot, state) in found.iter_mut().zip(falsified) {
                if let (None, Some(state)) = (&slot, state) {
                    *slot = Some((m.clone(), state, checked + offset as u64 + 1));
                }
            }
        }
        checked += chunk.len() as u64;
        if found.iter().all(Option::is_some) {
            break;
        }
    }

    Ok(found
        .into_iter()
        .map(|hit| match hit {
            None => Validity::ValidUpToBound {
                models_checked: checked,
            },
            Some((model, state, models_checked)) => Validity::Countermodel {
                model,
                state,
                models_checked,
            },
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::formula::parse;

    fn at(m: &Model, s: &str, f: &str) -> bool {
        eval_named(m, s, &parse(f).unwrap()).unwrap()
    }

    #[test]
    fn unknown_truth_that_is_knowable() {
        let m = fixtures::two_state();
        assert!(at(&m, "s", "B_i p"));
        assert!(!at(&m, "s", "U_i p"));
        assert!(at(&m, "s", "<p> K_i p"));
    }

    #[test]
    fn conjunction_unknowable_but_conjuncts_not() {
        let m = fixtures::three_state();
        assert!(at(&m, "s", "U_i (~K_i p & ~K_i q)"));
        assert!(!at(&m, "s", "U_i ~K_i p"));
        assert!(!at(&m, "s", "U_i ~K_i q"));
    }

    #[test]
    fn top_is_never_unknowable() {
        for m in [fixtures::two_state(), fixtures::three_state()] {
            assert_eq!(extension(&m, &parse("U_i top").unwrap()).unwrap(), StateSet::EMPTY);
        }
    }

    #[test]
    fn single_reflexive_point() {
        let m = crate::kripke::load_model(
            r#"{"states":["s"],"agents":["i"],"reflexive_closure":true,"valuation":{"p":["s"]}}"#,
        )
        .unwrap();
        assert!(at(&m, "s", "K_i p"));
        assert!(!at(&m, "s", "B_i p"));
    }

    #[test]
    fn extensions_on_fixtures() {
        let three = fixtures::three_state();
        let ext = extension(&three, &parse("p").unwrap()).unwrap();
        assert_eq!(three.set_names(ext), ["s", "t"]);
        assert_eq!(extension(&three, &Formula::Top).unwrap(), three.all_states());
        // t sees only itself and ¬p holds there; s sees t.
        let two = fixtures::two_state();
        assert_eq!(extension(&two, &parse("K_i p").unwrap()).unwrap(), StateSet::EMPTY);
    }

    #[test]
    fn false_announcement_is_vacuous() {
        let m = fixtures::two_state();
        assert!(at(&m, "t", "[p] bot"));
        assert!(!at(&m, "s", "[p] bot"));
    }

    #[test]
    fn errors() {
        let m = fixtures::two_state();
        assert_eq!(
            eval_named(&m, "s", &parse("K_j p").unwrap()).unwrap_err(),
            EvalError::UnknownAgent("j".into())
        );
        assert_eq!(
            eval_named(&m, "x", &parse("p").unwrap()).unwrap_err(),
            EvalError::UnknownState("x".into())
        );
        assert!(eval(&m, 7, &parse("p").unwrap()).is_err());
    }

    #[test]
    fn witness_for_two_state_fixture() {
        let m = fixtures::two_state();
        let s = m.state_index("s").unwrap();
        let v = eval_with_witness(&m, s, &parse("U_i p").unwrap()).unwrap();
        assert!(!v.value);
        let w = v.witness.unwrap();
        assert_eq!(w.states, StateSet::singleton(s));
        assert!(w.announcement.is_el());
        assert_eq!(extension(&m, &w.announcement).unwrap(), w.states);
        let check = Formula::diamond(w.announcement, parse("K_i p").unwrap());
        assert!(eval(&m, s, &check).unwrap());
    }

    #[test]
    fn witness_for_three_state_fixture_deletes_t() {
        let m = fixtures::three_state();
        let s = m.state_index("s").unwrap();
        let v = eval_with_witness(&m, s, &parse("U_i ~K_i p").unwrap()).unwrap();
        assert!(!v.value);
        assert_eq!(m.set_names(v.witness.unwrap().states), ["s", "u"]);
    }

    #[test]
    fn no_witness_when_body_false() {
        let m = fixtures::two_state();
        let t = m.state_index("t").unwrap();
        let v = eval_with_witness(&m, t, &parse("U_i p").unwrap()).unwrap();
        assert_eq!(v, Verdict { value: false, witness: None });
    }

    #[test]
    fn bounded_validity_examples() {
        let b = EnumerationBounds::new(3, &["a"], &["p"]);
        assert!(bounded_validity(&parse("U_a p -> p").unwrap(), &b, 1)
            .unwrap()
            .is_valid());
        assert!(bounded_validity(&parse("[U_a p] ~U_a p").unwrap(), &b, 1)
            .unwrap()
            .is_valid());
    }

    #[test]
    fn bullet_does_not_imply_unknowable() {
        let b = EnumerationBounds::new(2, &["a"], &["p"]);
        let v = bounded_validity(&parse("B_a p -> U_a p").unwrap(), &b, 1).unwrap();
        let Validity::Countermodel { model, state, .. } = v else {
            panic!("expected a countermodel");
        };
        // Isomorphic to the two-state fixture: p-state sees a ¬p-state that
        // sees only itself.
        assert_eq!(model.num_states(), 2);
        let other = 1 - state;
        assert!(model.atom_extension("p").contains(state));
        assert!(!model.atom_extension("p").contains(other));
        assert_eq!(model.successors(0, state), StateSet::full(2));
        assert_eq!(model.successors(0, other), StateSet::singleton(other));
    }

    #[test]
    fn parallel_search_matches_sequential() {
        let b = EnumerationBounds::new(3, &["a"], &["p", "q"]);
        let fs: Vec<Formula> = ["U_a p -> K_a q", "B_a p -> U_a p", "U_a p -> p"]
            .iter()
            .map(|t| parse(t).unwrap())
            .collect();
        assert_eq!(
            bounded_validity_all(&fs, &b, 1).unwrap(),
            bounded_validity_all(&fs, &b, 4).unwrap()
        );
    }

    #[test]
    fn frame_conditional_formulas_hold_on_reflexive_frames() {
        // Announcing the blocks of s and of one ¬p-successor settles both.
        let refl = EnumerationBounds::new(3, &["a"], &["p"]);
        for text in ["~U_a K_a p", "~U_a ~K_a p"] {
            let f = parse(text).unwrap();
            assert!(bounded_validity(&f, &refl, 1).unwrap().is_valid(), "{text}");
        }
    }

    #[test]
    fn agent_outside_bounds_is_an_error() {
        let b = EnumerationBounds::new(2, &["a"], &["p"]);
        assert_eq!(
            bounded_validity(&parse("K_b p").unwrap(), &b, 1).unwrap_err(),
            EvalError::UnknownAgent("b".into())
        );
    }
}
