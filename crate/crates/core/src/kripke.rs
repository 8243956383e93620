//! Finite reflexive Kripke models.
//!
//! States are addressed by index; state sets are 64-bit bitsets over that
//! ordering, so a model holds at most [`MAX_STATES`] states.

use crate::formula::Name;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};
use std::str::FromStr;
use thiserror::Error;

pub const MAX_STATES: usize = 64;

/// A set of states of some model, as a bitset over state indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet(u64);

impl StateSet {
    pub const EMPTY: StateSet = StateSet(0);

    pub fn from_bits(bits: u64) -> Self {
        StateSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{0, .., n-1}`
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_STATES);
        if n == MAX_STATES {
            StateSet(u64::MAX)
        } else {
            StateSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        StateSet(1u64 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_STATES && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: StateSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }
}

impl FromIterator<usize> for StateSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = StateSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl BitOr for StateSet {
    type Output = StateSet;
    fn bitor(self, rhs: StateSet) -> StateSet {
        StateSet(self.0 | rhs.0)
    }
}

impl BitAnd for StateSet {
    type Output = StateSet;
    fn bitand(self, rhs: StateSet) -> StateSet {
        StateSet(self.0 & rhs.0)
    }
}

impl Sub for StateSet {
    type Output = StateSet;
    fn sub(self, rhs: StateSet) -> StateSet {
        StateSet(self.0 & !rhs.0)
    }
}

/// Complement within all 64 slots; intersect with the model's full set.
impl Not for StateSet {
    type Output = StateSet;
    fn not(self) -> StateSet {
        StateSet(!self.0)
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("malformed model document: {0}")]
    Malformed(String),
    #[error("model has no states")]
    NoStates,
    #[error("model has {0} states; at most {MAX_STATES} are supported")]
    TooManyStates(usize),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("duplicate agent `{0}`")]
    DuplicateAgent(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("`{0}` is not a valid identifier")]
    InvalidName(String),
    #[error("relation of agent `{agent}` is not reflexive at state `{state}`")]
    NonReflexive { agent: String, state: String },
    #[error("restriction to the empty set of states")]
    EmptyRestriction,
    #[error("restriction mentions states outside the model")]
    RestrictionOutOfRange,
    #[error("search space of {candidates} candidate models exceeds the cap of {cap}")]
    SearchSpaceTooLarge { candidates: u128, cap: u128 },
}

/// A finite model with reflexive accessibility relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    states: Vec<String>,
    agents: Vec<Name>,
    /// `succ[agent][state]`: the agent's successors of `state`.
    succ: Vec<Vec<StateSet>>,
    valuation: BTreeMap<Name, StateSet>,
}

/// Serialized form of a [`Model`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub states: Vec<String>,
    #[serde(default)]
    pub agents: Vec<String>,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<(String, String)>>,
    #[serde(default)]
    pub reflexive_closure: bool,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric())
        && s != "top"
        && s != "bot"
}

impl ModelFile {
    pub fn into_model(self) -> Result<Model, ModelError> {
        let n = self.states.len();
        if n == 0 {
            return Err(ModelError::NoStates);
        }
        if n > MAX_STATES {
            return Err(ModelError::TooManyStates(n));
        }
        let mut index = BTreeMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if index.insert(s.as_str(), i).is_some() {
                return Err(ModelError::DuplicateState(s.clone()));
            }
        }
        let lookup = |s: &String| {
            index
                .get(s.as_str())
                .copied()
                .ok_or_else(|| ModelError::UnknownState(s.clone()))
        };

        let mut seen = BTreeSet::new();
        for a in &self.agents {
            if !is_identifier(a) {
                return Err(ModelError::InvalidName(a.clone()));
            }
            if !seen.insert(a.as_str()) {
                return Err(ModelError::DuplicateAgent(a.clone()));
            }
        }
        for a in self.relations.keys() {
            if !seen.contains(a.as_str()) {
                return Err(ModelError::UnknownAgent(a.clone()));
            }
        }

        let mut succ = Vec::with_capacity(self.agents.len());
        for agent in &self.agents {
            let mut rows = vec![StateSet::EMPTY; n];
            for (from, to) in self.relations.get(agent).into_iter().flatten() {
                rows[lookup(from)?].insert(lookup(to)?);
            }
            for (i, row) in rows.iter_mut().enumerate() {
                if self.reflexive_closure {
                    row.insert(i);
                } else if !row.contains(i) {
                    return Err(ModelError::NonReflexive {
                        agent: agent.clone(),
                        state: self.states[i].clone(),
                    });
                }
            }
            succ.push(rows);
        }

        let mut valuation = BTreeMap::new();
        for (atom, states) in &self.valuation {
            if !is_identifier(atom) {
                return Err(ModelError::InvalidName(atom.clone()));
            }
            let mut ext = StateSet::EMPTY;
            for s in states {
                ext.insert(lookup(s)?);
            }
            valuation.insert(Name::from(atom.as_str()), ext);
        }

        Ok(Model {
            states: self.states,
            agents: self.agents.iter().map(|a| Name::from(a.as_str())).collect(),
            succ,
            valuation,
        })
    }
}

impl Model {
    /// Build a model from index-based parts. Relations are closed under
    /// reflexivity.
    pub fn from_parts(
        states: Vec<String>,
        agents: Vec<Name>,
        mut succ: Vec<Vec<StateSet>>,
        valuation: BTreeMap<Name, StateSet>,
    ) -> Self {
        let n = states.len();
        assert!(n > 0 && n <= MAX_STATES);
        assert_eq!(agents.len(), succ.len());
        let all = StateSet::full(n);
        for rows in &mut succ {
            assert_eq!(rows.len(), n);
            for (i, row) in rows.iter_mut().enumerate() {
                row.insert(i);
                *row = *row & all;
            }
        }
        let valuation = valuation.into_iter().map(|(p, e)| (p, e & all)).collect();
        Model {
            states,
            agents,
            succ,
            valuation,
        }
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.states.len())
    }

    pub fn state_name(&self, i: usize) -> &str {
        &self.states[i]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn agents(&self) -> &[Name] {
        &self.agents
    }

    pub fn agent_index(&self, agent: &str) -> Option<usize> {
        self.agents.iter().position(|a| &**a == agent)
    }

    pub fn successors(&self, agent: usize, state: usize) -> StateSet {
        self.succ[agent][state]
    }

    /// All successor rows of one agent, indexed by state.
    pub fn relation(&self, agent: usize) -> &[StateSet] {
        &self.succ[agent]
    }

    pub fn valuation(&self) -> &BTreeMap<Name, StateSet> {
        &self.valuation
    }

    /// States where the atom is true; empty for atoms the model does not list.
    pub fn atom_extension(&self, atom: &str) -> StateSet {
        self.valuation.get(atom).copied().unwrap_or_default()
    }

    pub fn set_names(&self, set: StateSet) -> Vec<&str> {
        set.iter().map(|i| self.states[i].as_str()).collect()
    }

    pub fn state_set<'a, I: IntoIterator<Item = &'a str>>(
        &self,
        names: I,
    ) -> Result<StateSet, ModelError> {
        names
            .into_iter()
            .map(|n| {
                self.state_index(n)
                    .ok_or_else(|| ModelError::UnknownState(n.to_string()))
            })
            .collect()
    }

    /// Compact one-line rendering, e.g. `s{p} i:s,t | t{} i:t`.
    pub fn summary(&self) -> String {
        (0..self.num_states())
            .map(|s| {
                let atoms: Vec<&str> = self
                    .valuation
                    .iter()
                    .filter(|(_, ext)| ext.contains(s))
                    .map(|(a, _)| &**a)
                    .collect();
                let mut out = format!("{}{{{}}}", self.states[s], atoms.join(","));
                for (a, agent) in self.agents.iter().enumerate() {
                    out += &format!(" {agent}:{}", self.set_names(self.successors(a, s)).join(","));
                }
                out
            })
            .collect::<Vec<_>>()
            .join(" | ")
    }

    /// The submodel on `keep`: relations and valuation intersected with it,
    /// states renumbered in their original order.
    pub fn restrict(&self, keep: StateSet) -> Result<Model, ModelError> {
        if keep.is_empty() {
            return Err(ModelError::EmptyRestriction);
        }
        if !keep.is_subset(self.all_states()) {
            return Err(ModelError::RestrictionOutOfRange);
        }
        let old: Vec<usize> = keep.iter().collect();
        let reindex = |set: StateSet| -> StateSet {
            old.iter()
                .enumerate()
                .filter(|(_, &o)| set.contains(o))
                .map(|(new, _)| new)
                .collect()
        };
        Ok(Model {
            states: old.iter().map(|&i| self.states[i].clone()).collect(),
            agents: self.agents.clone(),
            succ: self
                .succ
                .iter()
                .map(|rows| old.iter().map(|&i| reindex(rows[i])).collect())
                .collect(),
            valuation: self
                .valuation
                .iter()
                .map(|(p, e)| (p.clone(), reindex(*e)))
                .collect(),
        })
    }

    pub fn to_file(&self) -> ModelFile {
        let relations = self
            .agents
            .iter()
            .zip(&self.succ)
            .map(|(a, rows)| {
                let pairs = rows
                    .iter()
                    .enumerate()
                    .flat_map(|(i, row)| {
                        row.iter()
                            .filter(move |&j| j != i)
                            .map(move |j| (self.states[i].clone(), self.states[j].clone()))
                    })
                    .collect();
                (a.to_string(), pairs)
            })
            .collect();
        ModelFile {
            states: self.states.clone(),
            agents: self.agents.iter().map(|a| a.to_string()).collect(),
            relations,
            reflexive_closure: true,
            valuation: self
                .valuation
                .iter()
                .map(|(p, e)| {
                    (
                        p.to_string(),
                        self.set_names(*e).into_iter().map(String::from).collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("model serializes")
    }
}

/// Parse and validate a model document.
pub fn load_model(document: &str) -> Result<Model, ModelError> {
    let file: ModelFile =
        serde_json::from_str(document).map_err(|e| ModelError::Malformed(e.to_string()))?;
    file.into_model()
}

pub fn save_model(model: &Model) -> String {
    model.to_json()
}

/// Relation properties of one agent's accessibility relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrameFlags {
    pub agent: String,
    pub reflexive: bool,
    pub transitive: bool,
    pub euclidean: bool,
}

/// Evaluates each property by quantifying over state pairs and triples.
pub fn frame_properties(model: &Model) -> Vec<FrameFlags> {
    let n = model.num_states();
    let states: Vec<usize> = (0..n).collect();
    model
        .agents()
        .iter()
        .enumerate()
        .map(|(a, name)| {
            let r = |x: usize, y: usize| model.successors(a, x).contains(y);
            let reflexive = states.iter().all(|&x| r(x, x));
            let mut transitive = true;
            let mut euclidean = true;
            for &x in &states {
                for &y in &states {
                    for &z in &states {
                        if r(x, y) && r(y, z) && !r(x, z) {
                            transitive = false;
                        }
                        if r(x, y) && r(x, z) && !r(y, z) {
                            euclidean = false;
                        }
                    }
                }
            }
            FrameFlags {
                agent: name.to_string(),
                reflexive,
                transitive,
                euclidean,
            }
        })
        .collect()
}

/// Frame classes available to the model enumerator. All are reflexive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameClass {
    Reflexive,
    Transitive,
    Euclidean,
    /// Transitive and Euclidean.
    Both,
}

impl FromStr for FrameClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reflexive" => Ok(FrameClass::Reflexive),
            "transitive" => Ok(FrameClass::Transitive),
            "euclidean" => Ok(FrameClass::Euclidean),
            "both" => Ok(FrameClass::Both),
            other => Err(format!(
                "unknown frame class `{other}` (expected reflexive, transitive, euclidean or both)"
            )),
        }
    }
}

impl fmt::Display for FrameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrameClass::Reflexive => "reflexive",
            FrameClass::Transitive => "transitive",
            FrameClass::Euclidean => "euclidean",
            FrameClass::Both => "both",
        })
    }
}

impl FrameClass {
    /// Set-based test on successor rows (independent of [`frame_properties`]).
    fn admits(self, rows: &[StateSet]) -> bool {
        let transitive = || {
            rows.iter()
                .all(|&row| row.iter().all(|y| rows[y].is_subset(row)))
        };
        let euclidean = || {
            rows.iter()
                .all(|&row| row.iter().all(|y| row.is_subset(rows[y])))
        };
        match self {
            FrameClass::Reflexive => true,
            FrameClass::Transitive => transitive(),
            FrameClass::Euclidean => euclidean(),
            FrameClass::Both => transitive() && euclidean(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationBounds {
    pub max_states: usize,
    pub agents: Vec<Name>,
    pub atoms: Vec<Name>,
    pub frame_class: FrameClass,
    /// Upper limit on the raw candidate space (before frame filtering).
    pub cap: u128,
}

impl EnumerationBounds {
    pub const DEFAULT_CAP: u128 = 20_000_000;

    pub fn new(max_states: usize, agents: &[&str], atoms: &[&str]) -> Self {
        EnumerationBounds {
            max_states,
            agents: agents.iter().map(|&a| Name::from(a)).collect(),
            atoms: atoms.iter().map(|&p| Name::from(p)).collect(),
            frame_class: FrameClass::Reflexive,
            cap: Self::DEFAULT_CAP,
        }
    }

    pub fn with_frame_class(mut self, frame_class: FrameClass) -> Self {
        self.frame_class = frame_class;
        self
    }

    pub fn with_cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }

    /// Number of labelled candidates examined: for each size k, every
    /// diagonal-containing relation per agent times every valuation.
    pub fn candidate_count(&self) -> u128 {
        (1..=self.max_states as u32)
            .map(|k| {
                let bits = k as u64 * (k as u64 - 1) * self.agents.len() as u64
                    + k as u64 * self.atoms.len() as u64;
                if bits >= 127 {
                    u128::MAX
                } else {
                    1u128 << bits
                }
            })
            .fold(0u128, |acc, x| acc.saturating_add(x))
    }
}

/// Every labelled model within the bounds, smallest first. See
/// [`enumerate_models`].
pub struct ModelStream {
    bounds: EnumerationBounds,
    size: usize,
    /// Admissible successor-row tables for the current size.
    relations: Vec<Vec<StateSet>>,
    /// Per-agent index into `relations`; last agent varies fastest.
    choice: Vec<usize>,
    valuation: u64,
    done: bool,
}

impl ModelStream {
    fn relations_for(size: usize, class: FrameClass) -> Vec<Vec<StateSet>> {
        let off_diagonal: Vec<(usize, usize)> = (0..size)
            .flat_map(|i| (0..size).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        (0u64..1 << off_diagonal.len())
            .map(|mask| {
                let mut rows: Vec<StateSet> = (0..size).map(StateSet::singleton).collect();
                for (bit, &(i, j)) in off_diagonal.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        rows[i].insert(j);
                    }
                }
                rows
            })
            .filter(|rows| class.admits(rows))
            .collect()
    }

    fn start_size(&mut self, size: usize) {
        self.size = size;
        self.relations = Self::relations_for(size, self.bounds.frame_class);
        self.choice = vec![0; self.bounds.agents.len()];
        self.valuation = 0;
    }

    fn current(&self) -> Model {
        let k = self.size;
        let states = (0..k).map(|i| format!("w{i}")).collect();
        let succ = self
            .choice
            .iter()
            .map(|&c| self.relations[c].clone())
            .collect();
        let valuation = self
            .bounds
            .atoms
            .iter()
            .enumerate()
            .map(|(a, p)| {
                let ext = StateSet::from_bits(self.valuation >> (a * k) & StateSet::full(k).bits());
                (p.clone(), ext)
            })
            .collect();
        Model {
            states,
            agents: self.bounds.agents.clone(),
            succ,
            valuation,
        }
    }

    fn advance(&mut self) {
        let k = self.size;
        let valuation_bits = k * self.bounds.atoms.len();
        self.valuation += 1;
        if self.valuation < 1u64 << valuation_bits {
            return;
        }
        self.valuation = 0;
        for slot in (0..self.choice.len()).rev() {
            self.choice[slot] += 1;
            if self.choice[slot] < self.relations.len() {
                return;
            }
            self.choice[slot] = 0;
        }
        if self.size == self.bounds.max_states {
            self.done = true;
        } else {
            self.start_size(self.size + 1);
        }
    }
}

impl Iterator for ModelStream {
    type Item = Model;

    fn next(&mut self) -> Option<Model> {
        if self.done {
            return None;
        }
        let m = self.current();
        self.advance();
        Some(m)
    }
}

/// Stream every labelled model with `1..=max_states` states whose relations
/// are reflexive and in the requested frame class, under every valuation of
/// the listed atoms. No isomorphism reduction.
pub fn enumerate_models(bounds: &EnumerationBounds) -> Result<ModelStream, ModelError> {
    let candidates = bounds.candidate_count();
    if candidates > bounds.cap {
        return Err(ModelError::SearchSpaceTooLarge {
            candidates,
            cap: bounds.cap,
        });
    }
    if bounds.max_states > MAX_STATES {
        return Err(ModelError::TooManyStates(bounds.max_states));
    }
    // Valuations are counted in a u64.
    if bounds.max_states * bounds.atoms.len() >= 64 {
        return Err(ModelError::SearchSpaceTooLarge {
            candidates: u128::MAX,
            cap: bounds.cap,
        });
    }
    let mut stream = ModelStream {
        bounds: bounds.clone(),
        size: 0,
        relations: Vec::new(),
        choice: Vec::new(),
        valuation: 0,
        done: bounds.max_states == 0,
    };
    if !stream.done {
        stream.start_size(1);
    }
    Ok(stream)
}
