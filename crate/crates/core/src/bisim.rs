//! Autobisimulation machinery.
//!
//! On a finite model two states satisfy the same epistemic formulas exactly
//! when they are bisimilar, so the subsets of a model definable by an
//! epistemic formula are exactly the unions of autobisimulation blocks. This
//! turns the "for every epistemic announcement" quantifier of `U_i` into a
//! finite enumeration over [`Partition::closed_subsets`], and
//! [`characteristic`] produces a concrete formula for each such subset.

use crate::formula::Formula;
use crate::kripke::{Model, StateSet};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BisimError {
    #[error("partition is not stable for this model")]
    Unstable,
}

/// Bisimulation classes of the states of a model (or of a sub-domain of it).
///
/// Blocks are ordered by their smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<StateSet>,
    block_of: Vec<Option<usize>>,
}

impl Partition {
    fn from_labels(domain: StateSet, mut label: impl FnMut(usize) -> usize, n: usize) -> Self {
        // Renumber labels in order of first appearance along the state order.
        let mut renumber: HashMap<usize, usize> = HashMap::new();
        let mut blocks: Vec<StateSet> = Vec::new();
        let mut block_of = vec![None; n];
        for s in domain.iter() {
            let next = renumber.len();
            let b = *renumber.entry(label(s)).or_insert(next);
            if b == blocks.len() {
                blocks.push(StateSet::EMPTY);
            }
            blocks[b].insert(s);
            block_of[s] = Some(b);
        }
        Partition { blocks, block_of }
    }

    pub fn blocks(&self) -> &[StateSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, state: usize) -> Option<usize> {
        self.block_of.get(state).copied().flatten()
    }

    /// The union of all blocks.
    pub fn domain(&self) -> StateSet {
        self.blocks.iter().fold(StateSet::EMPTY, |acc, &b| acc | b)
    }

    fn union_of(&self, mask: u64) -> StateSet {
        self.blocks
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(StateSet::EMPTY, |acc, (_, &b)| acc | b)
    }

    /// Every union of blocks containing the block of `state`, starting with
    /// that block alone and ending with the whole domain. Empty when `state`
    /// lies outside the domain.
    pub fn closed_subsets(&self, state: usize) -> impl Iterator<Item = StateSet> + '_ {
        let pivot = self.block_of(state);
        let others: Vec<usize> = (0..self.blocks.len())
            .filter(|&b| Some(b) != pivot)
            .collect();
        let count = if pivot.is_some() {
            1u64 << others.len()
        } else {
            0
        };
        (0..count).map(move |mask| {
            let mut set = self.blocks[pivot.unwrap()];
            for (bit, &b) in others.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    set = set | self.blocks[b];
                }
            }
            set
        })
    }

    /// Every nonempty union of blocks.
    pub fn unions(&self) -> impl Iterator<Item = StateSet> + '_ {
        (1u64..1 << self.blocks.len()).map(|mask| self.union_of(mask))
    }
}

/// Coarsest autobisimulation of the whole model.
pub fn partition(model: &Model) -> Partition {
    partition_within(model, model.all_states())
}

/// Coarsest autobisimulation of the submodel on `domain`, expressed in the
/// state indices of `model`.
pub fn partition_within(model: &Model, domain: StateSet) -> Partition {
    let n = model.num_states();
    // Atoms constant on the domain cannot separate anything.
    let splitting: Vec<StateSet> = model
        .valuation()
        .values()
        .map(|&ext| ext & domain)
        .filter(|&ext| !ext.is_empty() && ext != domain)
        .collect();
    let mut profiles: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
    let mut current = Partition::from_labels(
        domain,
        |s| {
            let key: Vec<bool> = splitting.iter().map(|e| e.contains(s)).collect();
            let next = profiles.len();
            *profiles.entry(key).or_insert(next)
        },
        n,
    );

    loop {
        let signature = |s: usize| -> (usize, Vec<u64>) {
            let moves = (0..model.agents().len())
                .map(|a| {
                    (model.successors(a, s) & domain)
                        .iter()
                        .fold(0u64, |acc, t| acc | 1 << current.block_of(t).unwrap())
                })
                .collect();
            (current.block_of(s).unwrap(), moves)
        };
        let mut ids: HashMap<(usize, Vec<u64>), usize> = HashMap::new();
        let labels: Vec<usize> = (0..n)
            .map(|s| {
                if domain.contains(s) {
                    let next = ids.len();
                    *ids.entry(signature(s)).or_insert(next)
                } else {
                    usize::MAX
                }
            })
            .collect();
        let refined = Partition::from_labels(domain, |s| labels[s], n);
        if refined.len() == current.len() {
            return refined;
        }
        current = refined;
    }
}

/// The model whose states are the blocks of `partition`. Block `B` sees block
/// `C` for agent `i` iff some member of `B` has an `i`-successor in `C`; an
/// atom holds at a block iff it holds at its members.
pub fn quotient(model: &Model, partition: &Partition) -> Result<Model, BisimError> {
    if partition.domain() != model.all_states() {
        return Err(BisimError::Unstable);
    }
    let block_moves = |a: usize, s: usize| -> StateSet {
        model
            .successors(a, s)
            .iter()
            .map(|t| partition.block_of(t).unwrap())
            .collect()
    };
    for &block in partition.blocks() {
        let rep = block.first().unwrap();
        for s in block.iter() {
            for ext in model.valuation().values() {
                if ext.contains(s) != ext.contains(rep) {
                    return Err(BisimError::Unstable);
                }
            }
            for a in 0..model.agents().len() {
                if block_moves(a, s) != block_moves(a, rep) {
                    return Err(BisimError::Unstable);
                }
            }
        }
    }
    let reps: Vec<usize> = partition
        .blocks()
        .iter()
        .map(|b| b.first().unwrap())
        .collect();
    let names = partition
        .blocks()
        .iter()
        .map(|&b| format!("{{{}}}", model.set_names(b).join(",")))
        .collect();
    let succ = (0..model.agents().len())
        .map(|a| reps.iter().map(|&r| block_moves(a, r)).collect())
        .collect();
    let valuation = model
        .valuation()
        .iter()
        .map(|(p, ext)| {
            let blocks = reps
                .iter()
                .enumerate()
                .filter(|(_, &r)| ext.contains(r))
                .map(|(b, _)| b)
                .collect();
            (p.clone(), blocks)
        })
        .collect();
    Ok(Model::from_parts(
        names,
        model.agents().to_vec(),
        succ,
        valuation,
    ))
}

/// Characteristic formulas of every state of `model` up to modal depth `rank`.
///
/// Rank 0 is the conjunction of literals over the model's atoms. Rank `k`
/// adds, for every agent `i`, `¬K_i¬χ` for each successor's rank `k-1`
/// formula `χ` and `K_i` of their disjunction. States with the same rank
/// `k-1` behaviour share one formula, so the result is a DAG of modest size.
pub struct CharacteristicTable {
    by_state: Vec<Formula>,
}

impl CharacteristicTable {
    pub fn new(model: &Model, rank: usize) -> Self {
        let n = model.num_states();
        let literals: Vec<Formula> = (0..n)
            .map(|s| {
                Formula::conjunction(model.valuation().iter().map(|(p, ext)| {
                    let atom = Formula::Atom(p.clone());
                    if ext.contains(s) {
                        atom
                    } else {
                        atom.not()
                    }
                }))
            })
            .collect();
        let profile: Vec<Vec<bool>> = (0..n)
            .map(|s| model.valuation().values().map(|e| e.contains(s)).collect())
            .collect();

        // class[s]: index into `formulas` of s's current-rank formula.
        let mut ids: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut class: Vec<usize> = Vec::with_capacity(n);
        let mut formulas: Vec<Formula> = Vec::new();
        for s in 0..n {
            let next = ids.len();
            let id = *ids.entry(profile[s].clone()).or_insert(next);
            if id == formulas.len() {
                formulas.push(literals[s].clone());
            }
            class.push(id);
        }

        for _ in 0..rank {
            let mut ids: HashMap<(Vec<bool>, Vec<Vec<usize>>), usize> = HashMap::new();
            let mut next_class = Vec::with_capacity(n);
            let mut next_formulas: Vec<Formula> = Vec::new();
            for s in 0..n {
                let moves: Vec<Vec<usize>> = (0..model.agents().len())
                    .map(|a| {
                        let mut cs: Vec<usize> =
                            model.successors(a, s).iter().map(|t| class[t]).collect();
                        cs.sort_unstable();
                        cs.dedup();
                        cs
                    })
                    .collect();
                let key = (profile[s].clone(), moves);
                let next = ids.len();
                let id = *ids.entry(key.clone()).or_insert(next);
                if id == next_formulas.len() {
                    let mut parts = vec![literals[s].clone()];
                    for (a, cs) in model.agents().iter().zip(&key.1) {
                        for &c in cs {
                            parts.push(
                                Formula::Know(a.clone(), formulas[c].clone().not().into()).not(),
                            );
                        }
                        let any = Formula::disjunction(cs.iter().map(|&c| formulas[c].clone()));
                        parts.push(Formula::Know(a.clone(), any.into()));
                    }
                    next_formulas.push(Formula::conjunction(parts));
                }
                next_class.push(id);
            }
            class = next_class;
            formulas = next_formulas;
        }
        CharacteristicTable {
            by_state: class.iter().map(|&c| formulas[c].clone()).collect(),
        }
    }

    pub fn of(&self, state: usize) -> &Formula {
        &self.by_state[state]
    }
}

/// Characteristic formula of `state` at the given modal rank. At rank at
/// least the number of states its extension is the bisimulation class of
/// `state`.
pub fn characteristic(model: &Model, state: usize, rank: usize) -> Formula {
    CharacteristicTable::new(model, rank).of(state).clone()
}

/// An epistemic formula whose extension in `model` is exactly `subset`,
/// provided `subset` is a union of bisimulation blocks: the disjunction of
/// the full-rank characteristic formulas of one representative per block.
pub fn defining_formula(model: &Model, partition: &Partition, subset: StateSet) -> Formula {
    defining_formula_at_rank(model, partition, subset, model.num_states())
}

/// [`defining_formula`] with characteristic formulas of the given rank. Below
/// full rank the extension may be larger than `subset`.
pub fn defining_formula_at_rank(
    model: &Model,
    partition: &Partition,
    subset: StateSet,
    rank: usize,
) -> Formula {
    let table = CharacteristicTable::new(model, rank);
    let mut reps: Vec<Formula> = partition
        .blocks()
        .iter()
        .filter(|b| b.is_subset(subset))
        .map(|b| table.of(b.first().unwrap()).clone())
        .collect();
    reps.dedup();
    Formula::disjunction(reps)
}
