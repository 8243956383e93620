//! Reference implementations used as test oracles. They follow the textbook
//! definitions directly (explicit relations, explicit submodels, no
//! memoisation, no bitsets) and share no algorithmic code with the library.

#![allow(dead_code)]

use lut::kripke::Model;
use lut::{Formula, StateSet};
use proptest::prelude::*;
use rand::Rng;
use std::collections::BTreeMap;

/// A model as plain vectors: `rel[a][s][t]` and `val[p][s]`.
#[derive(Clone, Debug)]
pub struct Plain {
    pub n: usize,
    pub agents: Vec<String>,
    pub rel: Vec<Vec<Vec<bool>>>,
    pub val: BTreeMap<String, Vec<bool>>,
}

impl Plain {
    pub fn of(m: &Model) -> Plain {
        let n = m.num_states();
        Plain {
            n,
            agents: m.agents().iter().map(|a| a.to_string()).collect(),
            rel: (0..m.agents().len())
                .map(|a| {
                    (0..n)
                        .map(|s| (0..n).map(|t| m.successors(a, s).contains(t)).collect())
                        .collect()
                })
                .collect(),
            val: m
                .valuation()
                .iter()
                .map(|(p, e)| (p.to_string(), (0..n).map(|s| e.contains(s)).collect()))
                .collect(),
        }
    }

    fn agent(&self, name: &str) -> usize {
        self.agents.iter().position(|a| a == name).expect("agent in model")
    }

    fn holds(&self, atom: &str, s: usize) -> bool {
        self.val.get(atom).is_some_and(|v| v[s])
    }
}

/// Greatest bisimulation of the submodel on `alive`, by repeatedly deleting
/// pairs that violate forth or back until nothing changes.
pub fn naive_bisimulation(m: &Plain, alive: &[bool]) -> Vec<Vec<bool>> {
    let n = m.n;
    let mut z = vec![vec![false; n]; n];
    for s in 0..n {
        for t in 0..n {
            z[s][t] = alive[s] && alive[t] && m.val.values().all(|v| v[s] == v[t]);
        }
    }
    loop {
        let mut changed = false;
        for s in 0..n {
            for t in 0..n {
                if !z[s][t] {
                    continue;
                }
                let ok = (0..m.agents.len()).all(|a| {
                    let forth = (0..n).filter(|&s2| alive[s2] && m.rel[a][s][s2]).all(|s2| {
                        (0..n).any(|t2| alive[t2] && m.rel[a][t][t2] && z[s2][t2])
                    });
                    let back = (0..n).filter(|&t2| alive[t2] && m.rel[a][t][t2]).all(|t2| {
                        (0..n).any(|s2| alive[s2] && m.rel[a][s][s2] && z[s2][t2])
                    });
                    forth && back
                });
                if !ok {
                    z[s][t] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return z;
        }
    }
}

/// Equivalence classes of [`naive_bisimulation`], each as sorted state list,
/// the list itself sorted.
pub fn naive_classes(m: &Plain, alive: &[bool]) -> Vec<Vec<usize>> {
    let z = naive_bisimulation(m, alive);
    let mut seen = vec![false; m.n];
    let mut classes = Vec::new();
    for s in 0..m.n {
        if alive[s] && !seen[s] {
            let class: Vec<usize> = (0..m.n).filter(|&t| z[s][t]).collect();
            for &t in &class {
                seen[t] = true;
            }
            classes.push(class);
        }
    }
    classes.sort();
    classes
}

/// Truth of `f` at `s` in the submodel on `alive`, straight from the
/// definition; `U_i` quantifies over unions of bisimulation classes.
pub fn naive_eval(m: &Plain, alive: &[bool], s: usize, f: &Formula) -> bool {
    match f {
        Formula::Atom(p) => m.holds(p, s),
        Formula::Top => true,
        Formula::Neg(x) => !naive_eval(m, alive, s, x),
        Formula::And(l, r) => naive_eval(m, alive, s, l) && naive_eval(m, alive, s, r),
        Formula::Know(a, x) => {
            let a = m.agent(a);
            (0..m.n)
                .filter(|&t| alive[t] && m.rel[a][s][t])
                .all(|t| naive_eval(m, alive, t, x))
        }
        Formula::Ann(psi, x) => {
            if !naive_eval(m, alive, s, psi) {
                return true;
            }
            let next: Vec<bool> = (0..m.n)
                .map(|t| alive[t] && naive_eval(m, alive, t, psi))
                .collect();
            naive_eval(m, &next, s, x)
        }
        Formula::Unk(a, x) => {
            if !naive_eval(m, alive, s, x) {
                return false;
            }
            let know = Formula::Know(a.clone(), x.clone());
            let classes = naive_classes(m, alive);
            let pivot = classes.iter().position(|c| c.contains(&s)).unwrap();
            let others: Vec<usize> = (0..classes.len()).filter(|&c| c != pivot).collect();
            (0u32..1 << others.len()).all(|mask| {
                let mut keep = vec![false; m.n];
                for &t in &classes[pivot] {
                    keep[t] = true;
                }
                for (bit, &c) in others.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        for &t in &classes[c] {
                            keep[t] = true;
                        }
                    }
                }
                !naive_eval(m, &keep, s, &know)
            })
        }
    }
}

pub fn naive_eval_root(m: &Model, s: usize, f: &Formula) -> bool {
    let plain = Plain::of(m);
    naive_eval(&plain, &vec![true; plain.n], s, f)
}

/// Size and U-depth straight from their recursive definitions.
pub fn size_oracle(f: &Formula) -> u128 {
    match f {
        Formula::Atom(_) | Formula::Top => 1,
        Formula::Neg(x) | Formula::Know(_, x) | Formula::Unk(_, x) => size_oracle(x) + 1,
        Formula::And(l, r) => size_oracle(l) + size_oracle(r) + 1,
        Formula::Ann(a, b) => (5 + size_oracle(a)) * size_oracle(b),
    }
}

pub fn udepth_oracle(f: &Formula) -> u64 {
    match f {
        Formula::Atom(_) | Formula::Top => 0,
        Formula::Neg(x) | Formula::Know(_, x) => udepth_oracle(x),
        Formula::And(l, r) => udepth_oracle(l).max(udepth_oracle(r)),
        Formula::Ann(a, b) => udepth_oracle(a) + udepth_oracle(b),
        Formula::Unk(_, x) => udepth_oracle(x) + 1,
    }
}

/// Lexicographic (U-depth, size) comparison.
pub fn less_complex_oracle(a: &Formula, b: &Formula) -> bool {
    let (da, db) = (udepth_oracle(a), udepth_oracle(b));
    da < db || (da == db && size_oracle(a) < size_oracle(b))
}

/// A random reflexive model: each non-loop edge present with probability
/// one half, each atom true at each state with probability one half.
pub fn random_model<R: Rng>(rng: &mut R, max_states: usize, agents: &[&str], atoms: &[&str]) -> Model {
    let n = rng.gen_range(1..=max_states);
    let succ = agents
        .iter()
        .map(|_| {
            (0..n)
                .map(|_| (0..n).filter(|_| rng.gen_bool(0.5)).collect::<StateSet>())
                .collect()
        })
        .collect();
    let valuation = atoms
        .iter()
        .map(|p| {
            (
                (*p).into(),
                (0..n).filter(|_| rng.gen_bool(0.5)).collect::<StateSet>(),
            )
        })
        .collect();
    Model::from_parts(
        (0..n).map(|i| format!("w{i}")).collect(),
        agents.iter().map(|a| (*a).into()).collect(),
        succ,
        valuation,
    )
}

/// Epistemic formulas of modal depth at most two over `atoms` for one agent:
/// literals and `top`, then `K`/`¬K` of those and their pairwise
/// conjunctions, then `K`/`¬K` of the depth-one layer.
pub fn small_el_family(atoms: &[&str], agent: &str) -> Vec<Formula> {
    let mut base: Vec<Formula> = vec![Formula::Top];
    for p in atoms {
        base.push(Formula::atom(p));
        base.push(Formula::atom(p).not());
    }
    let mut one = base.clone();
    for x in &base {
        one.push(Formula::know(agent, x.clone()));
        one.push(Formula::know(agent, x.clone()).not());
    }
    for (i, x) in base.iter().enumerate() {
        for y in &base[i + 1..] {
            one.push(x.clone().and(y.clone()));
        }
    }
    let mut two = one.clone();
    for x in &one {
        two.push(Formula::know(agent, x.clone()));
        two.push(Formula::know(agent, x.clone()).not());
    }
    two
}

// proptest strategies

pub fn arb_formula(
    atoms: &'static [&'static str],
    agents: &'static [&'static str],
    announcements: bool,
    unknowability: bool,
    depth: u32,
) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::Top),
        6 => proptest::sample::select(atoms).prop_map(Formula::atom),
    ];
    leaf.prop_recursive(depth, 48, 2, move |inner| {
        let agent = proptest::sample::select(agents);
        let mut options: Vec<BoxedStrategy<Formula>> = vec![
            inner.clone().prop_map(Formula::not).boxed(),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| a.and(b))
                .boxed(),
            (agent.clone(), inner.clone())
                .prop_map(|(a, x)| Formula::know(a, x))
                .boxed(),
        ];
        if announcements {
            options.push(
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Formula::ann(a, b))
                    .boxed(),
            );
        }
        if unknowability {
            options.push(
                (agent, inner)
                    .prop_map(|(a, x)| Formula::unk(a, x))
                    .boxed(),
            );
        }
        proptest::strategy::Union::new(options)
    })
}

pub fn arb_model(
    max_states: usize,
    agents: &'static [&'static str],
    atoms: &'static [&'static str],
) -> impl Strategy<Value = Model> {
    (1..=max_states).prop_flat_map(move |n| {
        let edges = proptest::collection::vec(proptest::collection::vec(any::<u8>(), n), agents.len());
        let vals = proptest::collection::vec(any::<u8>(), atoms.len());
        (edges, vals).prop_map(move |(edges, vals)| {
            let mask = |bits: u8| -> StateSet { (0..n).filter(|i| bits >> i & 1 == 1).collect() };
            Model::from_parts(
                (0..n).map(|i| format!("w{i}")).collect(),
                agents.iter().map(|a| (*a).into()).collect(),
                edges
                    .iter()
                    .map(|rows| rows.iter().map(|&b| mask(b)).collect())
                    .collect(),
                atoms
                    .iter()
                    .zip(&vals)
                    .map(|(p, &b)| ((*p).into(), mask(b)))
                    .collect(),
            )
        })
    })
}
