//! Checker for Hilbert-style derivations.
//!
//! Axiom schemas:
//!
//! ```text
//! PL  all instances of propositional tautologies
//! K   K_i(φ→ψ) → (K_iφ → K_iψ)
//! KA  [χ](φ→ψ) → ([χ]φ → [χ]ψ)
//! T   K_iφ → φ
//! AP  [ψ]p ↔ (ψ → p)
//! AN  [ψ]¬φ ↔ (ψ → ¬[ψ]φ)
//! AC  [ψ](φ∧χ) ↔ ([ψ]φ ∧ [ψ]χ)
//! AK  [ψ]K_iφ ↔ (ψ → K_i[ψ]φ)
//! AA  [ψ][χ]φ ↔ [ψ∧[ψ]χ]φ
//! AU  U_iφ → φ ∧ [ψ]¬K_iφ        where ψ is epistemic
//! ```
//!
//! Rules: MP (from φ and φ→ψ infer ψ), GEN (from φ infer K_iφ), GENA (from φ
//! infer [χ]φ). The rule RU, which derives `η(U_iφ)` from `η(φ ∧ [ψ]¬K_iφ)`
//! for *every* epistemic ψ, has infinitely many premises and cannot be
//! checked against a finite list of steps; steps citing it are rejected.

use crate::formula::{parse, Formula, Name, ParseError};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AxiomName {
    PL,
    K,
    KA,
    T,
    AP,
    AN,
    AC,
    AK,
    AA,
    AU,
}

impl AxiomName {
    pub const ALL: [AxiomName; 10] = [
        AxiomName::PL,
        AxiomName::K,
        AxiomName::KA,
        AxiomName::T,
        AxiomName::AP,
        AxiomName::AN,
        AxiomName::AC,
        AxiomName::AK,
        AxiomName::AA,
        AxiomName::AU,
    ];
}

impl fmt::Display for AxiomName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for AxiomName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomName::ALL
            .into_iter()
            .find(|a| a.to_string() == s)
            .ok_or_else(|| format!("unknown axiom `{s}`"))
    }
}

// Schema patterns. Formula metavariables and agent metavariables are small
// indices into a binding table.
enum Pat {
    Meta(usize),
    /// An atom (or `top`): the `p` of AP.
    AtomMeta(usize),
    Neg(Box<Pat>),
    And(Box<Pat>, Box<Pat>),
    Know(usize, Box<Pat>),
    Ann(Box<Pat>, Box<Pat>),
    Unk(usize, Box<Pat>),
}

fn m(i: usize) -> Pat {
    Pat::Meta(i)
}
fn not(p: Pat) -> Pat {
    Pat::Neg(Box::new(p))
}
fn and(a: Pat, b: Pat) -> Pat {
    Pat::And(Box::new(a), Box::new(b))
}
fn imp(a: Pat, b: Pat) -> Pat {
    not(and(a, not(b)))
}
fn iff(a: impl Fn() -> Pat, b: impl Fn() -> Pat) -> Pat {
    and(imp(a(), b()), imp(b(), a()))
}
fn know(agent: usize, p: Pat) -> Pat {
    Pat::Know(agent, Box::new(p))
}
fn ann(a: Pat, b: Pat) -> Pat {
    Pat::Ann(Box::new(a), Box::new(b))
}

fn schema(name: AxiomName) -> Option<Pat> {
    use AxiomName::*;
    let (psi, phi, chi) = (0, 1, 2);
    let i = 0;
    Some(match name {
        PL => return None,
        K => imp(
            know(i, imp(m(phi), m(psi))),
            imp(know(i, m(phi)), know(i, m(psi))),
        ),
        KA => imp(
            ann(m(chi), imp(m(phi), m(psi))),
            imp(ann(m(chi), m(phi)), ann(m(chi), m(psi))),
        ),
        T => imp(know(i, m(phi)), m(phi)),
        AP => iff(
            || ann(m(psi), Pat::AtomMeta(phi)),
            || imp(m(psi), Pat::AtomMeta(phi)),
        ),
        AN => iff(
            || ann(m(psi), not(m(phi))),
            || imp(m(psi), not(ann(m(psi), m(phi)))),
        ),
        AC => iff(
            || ann(m(psi), and(m(phi), m(chi))),
            || and(ann(m(psi), m(phi)), ann(m(psi), m(chi))),
        ),
        AK => iff(
            || ann(m(psi), know(i, m(phi))),
            || imp(m(psi), know(i, ann(m(psi), m(phi)))),
        ),
        AA => iff(
            || ann(m(psi), ann(m(chi), m(phi))),
            || ann(and(m(psi), ann(m(psi), m(chi))), m(phi)),
        ),
        AU => imp(
            Pat::Unk(i, Box::new(m(phi))),
            and(m(phi), ann(m(psi), not(know(i, m(phi))))),
        ),
    })
}

#[derive(Default)]
struct Bindings<'f> {
    formulas: [Option<&'f Formula>; 3],
    agents: [Option<&'f Name>; 1],
}

fn matches<'f>(pat: &Pat, f: &'f Formula, b: &mut Bindings<'f>) -> bool {
    match (pat, f) {
        (Pat::Meta(i), _) => match b.formulas[*i] {
            Some(bound) => bound == f,
            None => {
                b.formulas[*i] = Some(f);
                true
            }
        },
        (Pat::AtomMeta(i), Formula::Atom(_) | Formula::Top) => matches(&Pat::Meta(*i), f, b),
        (Pat::Neg(p), Formula::Neg(x)) => matches(p, x, b),
        (Pat::And(p, q), Formula::And(l, r)) | (Pat::Ann(p, q), Formula::Ann(l, r)) => {
            matches(p, l, b) && matches(q, r, b)
        }
        (Pat::Know(a, p), Formula::Know(agent, x)) | (Pat::Unk(a, p), Formula::Unk(agent, x)) => {
            let agent_ok = match b.agents[*a] {
                Some(bound) => bound == agent,
                None => {
                    b.agents[*a] = Some(agent);
                    true
                }
            };
            agent_ok && matches(p, x, b)
        }
        _ => false,
    }
}

/// Why a formula is not an instance of a schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Mismatch {
    Shape,
    /// AU's announced formula is not epistemic.
    AnnouncementNotEpistemic,
    /// PL: the propositional skeleton is not a tautology.
    NotTautology,
    SkeletonTooLarge(usize),
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mismatch::Shape => f.write_str("formula does not have the schema's shape"),
            Mismatch::AnnouncementNotEpistemic => {
                f.write_str("the announced formula must be epistemic (no announcements or U)")
            }
            Mismatch::NotTautology => f.write_str("propositional skeleton is not a tautology"),
            Mismatch::SkeletonTooLarge(n) => write!(
                f,
                "propositional skeleton has {n} letters (limit {SKELETON_LIMIT})"
            ),
        }
    }
}

/// Check `f` against one axiom schema, with the reason for failure.
pub fn check_axiom(f: &Formula, name: AxiomName) -> Result<(), Mismatch> {
    let Some(pat) = schema(name) else {
        return match tautology_skeleton(f) {
            Ok(true) => Ok(()),
            Ok(false) => Err(Mismatch::NotTautology),
            Err(SkeletonTooLarge(n)) => Err(Mismatch::SkeletonTooLarge(n)),
        };
    };
    let mut b = Bindings::default();
    if !matches(&pat, f, &mut b) {
        return Err(Mismatch::Shape);
    }
    if name == AxiomName::AU && !b.formulas[0].is_some_and(Formula::is_el) {
        return Err(Mismatch::AnnouncementNotEpistemic);
    }
    Ok(())
}

/// Is `f` an instance of the named schema (side conditions included)?
pub fn match_axiom(f: &Formula, name: AxiomName) -> bool {
    check_axiom(f, name).is_ok()
}

pub const SKELETON_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("propositional skeleton has {0} letters; at most {SKELETON_LIMIT} are supported")]
pub struct SkeletonTooLarge(pub usize);

/// Decide whether `f` is a substitution instance of a propositional
/// tautology: maximal subformulas headed by an atom, `K_i`, an announcement
/// or `U_i` become letters (equal subformulas share one), `top` stays the
/// constant true, and the result is checked by truth table.
pub fn tautology_skeleton(f: &Formula) -> Result<bool, SkeletonTooLarge> {
    fn letters<'f>(f: &'f Formula, out: &mut HashMap<&'f Formula, usize>) {
        match f {
            Formula::Top => {}
            Formula::Neg(x) => letters(x, out),
            Formula::And(l, r) => {
                letters(l, out);
                letters(r, out);
            }
            _ => {
                let next = out.len();
                out.entry(f).or_insert(next);
            }
        }
    }
    fn value(f: &Formula, table: &HashMap<&Formula, usize>, row: u32) -> bool {
        match f {
            Formula::Top => true,
            Formula::Neg(x) => !value(x, table, row),
            Formula::And(l, r) => value(l, table, row) && value(r, table, row),
            _ => row >> table[f] & 1 == 1,
        }
    }
    let mut table = HashMap::new();
    letters(f, &mut table);
    if table.len() > SKELETON_LIMIT {
        return Err(SkeletonTooLarge(table.len()));
    }
    Ok((0u32..1 << table.len()).all(|row| value(f, &table, row)))
}

/// A formula context with one hole `#`, built from implication with a fixed
/// antecedent, `K_i` and announcement prefixes. RU is stated over these.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdmissibleForm {
    Hole,
    Implies(Formula, Box<AdmissibleForm>),
    Know(Name, Box<AdmissibleForm>),
    Ann(Formula, Box<AdmissibleForm>),
}

impl AdmissibleForm {
    pub fn fill(&self, f: Formula) -> Formula {
        match self {
            AdmissibleForm::Hole => f,
            AdmissibleForm::Implies(a, rest) => a.clone().implies(rest.fill(f)),
            AdmissibleForm::Know(agent, rest) => Formula::Know(agent.clone(), Arc::new(rest.fill(f))),
            AdmissibleForm::Ann(a, rest) => Formula::ann(a.clone(), rest.fill(f)),
        }
    }

    /// Every way of writing `f` as `η(U_iφ)`, outermost hole last.
    pub fn decompositions(f: &Formula) -> Vec<(AdmissibleForm, Name, Formula)> {
        let mut out = Vec::new();
        if let Formula::Unk(agent, body) = f {
            out.push((AdmissibleForm::Hole, agent.clone(), (**body).clone()));
        }
        let mut wrap = |inner: &Formula, make: &dyn Fn(Box<AdmissibleForm>) -> AdmissibleForm| {
            for (form, agent, body) in AdmissibleForm::decompositions(inner) {
                out.push((make(Box::new(form)), agent, body));
            }
        };
        match f {
            Formula::Neg(x) => {
                if let Formula::And(a, nb) = &**x {
                    if let Formula::Neg(b) = &**nb {
                        wrap(b, &|rest| AdmissibleForm::Implies((**a).clone(), rest));
                    }
                }
            }
            Formula::Know(agent, x) => wrap(x, &|rest| AdmissibleForm::Know(agent.clone(), rest)),
            Formula::Ann(a, x) => wrap(x, &|rest| AdmissibleForm::Ann((**a).clone(), rest)),
            _ => {}
        }
        out
    }
}

impl fmt::Display for AdmissibleForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdmissibleForm::Hole => f.write_str("#"),
            AdmissibleForm::Implies(a, rest) => write!(f, "({a}) -> {rest}"),
            AdmissibleForm::Know(agent, rest) => write!(f, "K_{agent} {rest}"),
            AdmissibleForm::Ann(a, rest) => write!(f, "[{a}] {rest}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Axiom(AxiomName),
    /// `MP(i, j)`: step `j` is `step_i → this`. 1-based.
    MP(usize, usize),
    /// `GEN(i, a)`: this is `K_a step_i`.
    Gen(usize, Name),
    /// `GENA(i, χ)`: this is `[χ] step_i`.
    Gena(usize, Formula),
    /// The infinitary rule; never accepted.
    RU,
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom(a) => write!(f, "{a}"),
            Justification::MP(i, j) => write!(f, "MP({i}, {j})"),
            Justification::Gen(i, a) => write!(f, "GEN({i}, {a})"),
            Justification::Gena(i, chi) => write!(f, "GENA({i}, {chi})"),
            Justification::RU => f.write_str("RU"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofStep {
    pub formula: Formula,
    pub by: Justification,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Proof {
    pub steps: Vec<ProofStep>,
}

impl Proof {
    pub fn new() -> Self {
        Proof::default()
    }

    /// Append a step; returns its 1-based index.
    pub fn push(&mut self, formula: Formula, by: Justification) -> usize {
        self.steps.push(ProofStep { formula, by });
        self.steps.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum StepError {
    #[error("not an instance of {axiom}: {reason}")]
    AxiomMismatch { axiom: AxiomName, reason: Mismatch },
    #[error("step {0} does not refer to an earlier step")]
    BadReference(usize),
    #[error("{rule} does not apply: {detail}")]
    RuleShapeMismatch { rule: &'static str, detail: String },
    /// `form` is the admissible form `η` with this step equal to `η(U_iφ)`,
    /// when there is one.
    #[error(
        "RU has a premise for every epistemic formula and cannot be checked from finitely many steps{}",
        match form {
            Some(f) => format!(" (this step is η(U_iφ) with η = {f})"),
            None => " (and this step is not of the form η(U_iφ))".to_string(),
        }
    )]
    InfinitaryRuleUnsupported { form: Option<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub index: usize,
    pub formula: String,
    pub by: String,
    pub error: Option<StepError>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofReport {
    pub accepted: bool,
    pub steps: Vec<StepReport>,
}

impl ProofReport {
    pub fn first_error(&self) -> Option<(usize, &StepError)> {
        self.steps
            .iter()
            .find_map(|s| s.error.as_ref().map(|e| (s.index, e)))
    }
}

fn check_step(steps: &[ProofStep], index: usize) -> Result<(), StepError> {
    let here = &steps[index - 1].formula;
    let earlier = |i: usize| -> Result<&Formula, StepError> {
        if i == 0 || i >= index {
            Err(StepError::BadReference(i))
        } else {
            Ok(&steps[i - 1].formula)
        }
    };
    match &steps[index - 1].by {
        Justification::Axiom(axiom) => check_axiom(here, *axiom).map_err(|reason| {
            StepError::AxiomMismatch {
                axiom: *axiom,
                reason,
            }
        }),
        Justification::MP(i, j) => {
            let premise = earlier(*i)?;
            let conditional = earlier(*j)?;
            if *conditional == premise.clone().implies(here.clone()) {
                Ok(())
            } else {
                Err(StepError::RuleShapeMismatch {
                    rule: "MP",
                    detail: format!("step {j} is not `step {i} -> this step`"),
                })
            }
        }
        Justification::Gen(i, agent) => {
            let premise = earlier(*i)?;
            if *here == Formula::Know(agent.clone(), Arc::new(premise.clone())) {
                Ok(())
            } else {
                Err(StepError::RuleShapeMismatch {
                    rule: "GEN",
                    detail: format!("this step is not `K_{agent}` of step {i}"),
                })
            }
        }
        Justification::Gena(i, chi) => {
            let premise = earlier(*i)?;
            if *here == Formula::ann(chi.clone(), premise.clone()) {
                Ok(())
            } else {
                Err(StepError::RuleShapeMismatch {
                    rule: "GENA",
                    detail: format!("this step is not `[{chi}]` applied to step {i}"),
                })
            }
        }
        Justification::RU => Err(StepError::InfinitaryRuleUnsupported {
            form: AdmissibleForm::decompositions(here)
                .first()
                .map(|(form, _, _)| form.to_string()),
        }),
    }
}

/// Check every step; the proof is accepted iff all steps are.
pub fn check_proof(proof: &Proof) -> ProofReport {
    let steps: Vec<StepReport> = (1..=proof.steps.len())
        .map(|index| {
            let step = &proof.steps[index - 1];
            StepReport {
                index,
                formula: step.formula.to_string(),
                by: step.by.to_string(),
                error: check_step(&proof.steps, index).err(),
            }
        })
        .collect();
    ProofReport {
        accepted: steps.iter().all(|s| s.error.is_none()),
        steps,
    }
}

// Proof files: { "steps": [ { "formula": "...", "by": ... } ] } where `by` is
// an axiom name, "RU", {"mp":[i,j]}, {"gen":[i,"a"]} or {"gena":[i,"χ"]}.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProofFile {
    steps: Vec<StepFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepFile {
    formula: String,
    by: ByFile,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ByFile {
    Named(String),
    Mp { mp: (usize, usize) },
    Gen { gen: (usize, String) },
    Gena { gena: (usize, String) },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofFormatError {
    #[error("malformed proof document: {0}")]
    Malformed(String),
    #[error("step {step}: {source}")]
    Formula { step: usize, source: ParseError },
    #[error("step {step}: {message}")]
    Justification { step: usize, message: String },
}

pub fn load_proof(document: &str) -> Result<Proof, ProofFormatError> {
    let file: ProofFile =
        serde_json::from_str(document).map_err(|e| ProofFormatError::Malformed(e.to_string()))?;
    let mut proof = Proof::new();
    for (n, step) in file.steps.into_iter().enumerate() {
        let index = n + 1;
        let formula =
            parse(&step.formula).map_err(|source| ProofFormatError::Formula { step: index, source })?;
        let by = match step.by {
            ByFile::Named(name) if name == "RU" => Justification::RU,
            ByFile::Named(name) => Justification::Axiom(name.parse().map_err(|message| {
                ProofFormatError::Justification {
                    step: index,
                    message,
                }
            })?),
            ByFile::Mp { mp: (i, j) } => Justification::MP(i, j),
            ByFile::Gen { gen: (i, agent) } => {
                if !crate::kripke::is_identifier(&agent) {
                    return Err(ProofFormatError::Justification {
                        step: index,
                        message: format!("`{agent}` is not a valid agent name"),
                    });
                }
                Justification::Gen(i, agent.as_str().into())
            }
            ByFile::Gena { gena: (i, chi) } => Justification::Gena(
                i,
                parse(&chi).map_err(|source| ProofFormatError::Formula { step: index, source })?,
            ),
        };
        proof.push(formula, by);
    }
    Ok(proof)
}

pub fn save_proof(proof: &Proof) -> String {
    let steps = proof
        .steps
        .iter()
        .map(|s| StepFile {
            formula: crate::formula::render_pretty(&s.formula),
            by: match &s.by {
                Justification::Axiom(a) => ByFile::Named(a.to_string()),
                Justification::RU => ByFile::Named("RU".into()),
                Justification::MP(i, j) => ByFile::Mp { mp: (*i, *j) },
                Justification::Gen(i, a) => ByFile::Gen {
                    gen: (*i, a.to_string()),
                },
                Justification::Gena(i, chi) => ByFile::Gena {
                    gena: (*i, crate::formula::render_pretty(chi)),
                },
            },
        })
        .collect();
    serde_json::to_string_pretty(&ProofFile { steps }).expect("proof serializes")
}

/// The three-step derivation of `U_a p → p`: AU with `ψ = top`, a PL
/// instance, and modus ponens.
pub fn sample_unknowable_implies_true() -> Proof {
    let f = |t: &str| parse(t).expect("sample formula parses");
    let mut proof = Proof::new();
    let au = proof.push(
        f("U_a p -> (p & [top] ~K_a p)"),
        Justification::Axiom(AxiomName::AU),
    );
    let pl = proof.push(
        f("(U_a p -> (p & [top] ~K_a p)) -> (U_a p -> p)"),
        Justification::Axiom(AxiomName::PL),
    );
    proof.push(f("U_a p -> p"), Justification::MP(au, pl));
    proof
}
