//! Executable catalog of the logic's known validities, invalidities, measure
//! inequalities and proof-system facts.
//!
//! Validities are checked on every pointed model up to a state bound, with
//! schematic letters instantiated from a small pool. Invalidities are checked
//! twice: on a hand-built countermodel, and by an independent search of the
//! bounded model space. Nothing here is a proof; every PASS means "holds up to
//! the bound".

use crate::fixtures;
use crate::formula::{parse, Formula, Generator};
use crate::kripke::{EnumerationBounds, FrameClass, Model};
use crate::proofcheck::{self, check_proof, match_axiom, AxiomName, Justification};
use crate::rewrite;
use crate::semantics::{bounded_validity, bounded_validity_all, eval_named, Validity};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use thiserror::Error;

const AGENT: &str = "i";
const ATOMS: [&str; 2] = ["p", "q"];
const POOL: [&str; 6] = ["p", "q", "~p", "p & q", "K_i p", "~K_i p"];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Largest model size searched (1..=4).
    pub bound: usize,
    pub jobs: usize,
    /// Random formulas per measure inequality.
    pub samples: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            bound: 3,
            jobs: 1,
            samples: 1000,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("bound must be between 1 and 4, got {0}")]
    BadBound(usize),
    #[error("no catalog entry named `{0}`")]
    UnknownEntry(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub id: &'static str,
    pub section: &'static str,
    pub claim: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl EntryReport {
    /// `ID  SECTION  PASS|FAIL  detail`
    pub fn line(&self) -> String {
        format!(
            "{}  {}  {}  {}",
            self.id,
            self.section,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

type Unary = fn(Formula) -> Formula;
type Binary = fn(Formula, Formula) -> Formula;

/// The letters a measure inequality is stated over.
pub struct Sample {
    pub psi: Formula,
    pub chi: Formula,
    pub chi2: Formula,
    pub delta: Formula,
    /// Epistemic formula, for the clauses that quantify over EL only.
    pub el: Formula,
    pub p: Formula,
}

enum Check {
    /// Valid on the frame class, for each instance.
    Valid(Instances, FrameClass),
    /// Falsified at `state` of the fixture and by a fresh search.
    Invalid {
        formula: &'static str,
        fixture: fn() -> Model,
        state: &'static str,
    },
    /// Each pair is (less complex, more complex).
    Measure(fn(&Sample) -> Vec<(Formula, Formula)>),
    Custom(fn(&SuiteConfig) -> Outcome),
}

enum Instances {
    Fixed(&'static [&'static str]),
    Unary(Unary),
    Binary(Binary),
}

pub struct Entry {
    pub id: &'static str,
    pub section: &'static str,
    pub claim: &'static str,
    check: Check,
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn u(f: Formula) -> Formula {
    Formula::unk(AGENT, f)
}
fn b(f: Formula) -> Formula {
    Formula::bullet(AGENT, f)
}
fn k(f: Formula) -> Formula {
    Formula::know(AGENT, f)
}

fn pool() -> Vec<Formula> {
    POOL.iter().map(|t| parse(t).expect("pool parses")).collect()
}

fn instances(which: &Instances) -> Vec<Formula> {
    match which {
        Instances::Fixed(texts) => texts.iter().map(|t| parse(t).expect("entry parses")).collect(),
        Instances::Unary(schema) => pool().into_iter().map(schema).collect(),
        Instances::Binary(schema) => {
            let pool = pool();
            pool.iter()
                .flat_map(|x| pool.iter().map(move |y| schema(x.clone(), y.clone())))
                .collect()
        }
    }
}

fn bounds(cfg: &SuiteConfig, frame: FrameClass) -> EnumerationBounds {
    EnumerationBounds::new(cfg.bound, &[AGENT], &ATOMS).with_frame_class(frame)
}

fn describe(model: &Model, state: usize) -> String {
    format!("{} of {}", model.state_name(state), model.summary())
}

fn all_valid(formulas: &[Formula], cfg: &SuiteConfig, frame: FrameClass) -> Outcome {
    let mut bounds = bounds(cfg, frame);
    let agents: std::collections::BTreeSet<_> = formulas.iter().flat_map(Formula::agents).collect();
    if !agents.is_empty() {
        bounds.agents = agents.into_iter().collect();
    }
    let results = bounded_validity_all(formulas, &bounds, cfg.jobs)
        .expect("catalog formulas use the catalog vocabulary");
    let frames = match frame {
        FrameClass::Reflexive => String::new(),
        other => format!(" {other}"),
    };
    for (f, r) in formulas.iter().zip(&results) {
        if let Validity::Countermodel { model, state, .. } = r {
            return Outcome {
                passed: false,
                detail: format!("`{f}` fails at {}", describe(model, *state)),
            };
        }
    }
    let models = results.first().map_or(0, Validity::models_checked);
    Outcome {
        passed: true,
        detail: format!(
            "{} instance(s) hold on all {models}{frames} models up to {} states",
            formulas.len(),
            cfg.bound
        ),
    }
}

fn invalid(formula: &str, fixture: fn() -> Model, state: &str, cfg: &SuiteConfig) -> Outcome {
    let f = parse(formula).expect("entry parses");
    let m = fixture();
    let on_fixture = eval_named(&m, state, &f).expect("fixture vocabulary");
    let search = bounded_validity(&f, &bounds(cfg, FrameClass::Reflexive), cfg.jobs)
        .expect("catalog vocabulary");
    let mut detail = if on_fixture {
        format!("fixture: true at {state} (expected false)")
    } else {
        format!("fixture: false at {state}")
    };
    let found = match &search {
        Validity::Countermodel { model, state, .. } => {
            detail += &format!("; search: fails at {}", describe(model, *state));
            true
        }
        Validity::ValidUpToBound { models_checked } => {
            detail += &format!("; search: no countermodel in {models_checked} models");
            false
        }
    };
    Outcome {
        passed: !on_fixture && found,
        detail,
    }
}

fn sample<R: Rng>(rng: &mut R) -> Sample {
    let lut = Generator::lut(&ATOMS, &[AGENT, "j"]);
    let el = Generator::el(&ATOMS, &[AGENT, "j"]);
    let any = |rng: &mut R| {
        let depth = rng.gen_range(0..=4);
        lut.formula(rng, depth)
    };
    Sample {
        psi: any(rng),
        chi: any(rng),
        chi2: any(rng),
        delta: any(rng),
        el: {
            let depth = rng.gen_range(0..=4);
            el.formula(rng, depth)
        },
        p: Formula::atom(ATOMS[rng.gen_range(0..ATOMS.len())]),
    }
}

fn measure(pairs: fn(&Sample) -> Vec<(Formula, Formula)>, salt: u64, cfg: &SuiteConfig) -> Outcome {
    let mut rng = StdRng::seed_from_u64(cfg.seed ^ salt);
    let mut compared = 0usize;
    for _ in 0..cfg.samples {
        for (small, big) in pairs(&sample(&mut rng)) {
            compared += 1;
            if !small.less_complex(&big) {
                return Outcome {
                    passed: false,
                    detail: format!(
                        "c({small}) = {:?} is not below c({big}) = {:?}",
                        small.complexity(),
                        big.complexity()
                    ),
                };
            }
        }
    }
    Outcome {
        passed: true,
        detail: format!("{compared} comparisons on {} random samples", cfg.samples),
    }
}

fn fitch(cfg: &SuiteConfig) -> Outcome {
    let m = fixtures::two_state();
    let bp = parse("B_i p").unwrap();
    let ubp = parse("U_i B_i p").unwrap();
    let unknown = eval_named(&m, "s", &bp).unwrap();
    let unknowable = eval_named(&m, "s", &ubp).unwrap();
    let search = bounded_validity(&ubp.clone().not(), &bounds(cfg, FrameClass::Reflexive), 1)
        .expect("catalog vocabulary");
    Outcome {
        passed: unknown && unknowable && !search.is_valid(),
        detail: format!(
            "fixture s: B_i p {unknown}, U_i B_i p {unknowable}; ~U_i B_i p {}",
            if search.is_valid() {
                "holds up to the bound"
            } else {
                "has a countermodel"
            }
        ),
    }
}

fn axiom_instances() -> Vec<(AxiomName, Formula)> {
    let pool: Vec<Formula> = ["p", "~K_i p", "K_i q", "p & q", "U_i ~K_i p"]
        .iter()
        .map(|t| parse(t).unwrap())
        .collect();
    let el: Vec<&Formula> = pool.iter().filter(|f| f.is_el()).collect();
    let atoms = [Formula::atom("p"), Formula::atom("q"), Formula::Top];
    let ann = Formula::ann;
    let mut out = Vec::new();
    for x in &pool {
        out.push((AxiomName::T, k(x.clone()).implies(x.clone())));
        for y in &pool {
            let (x, y) = (x.clone(), y.clone());
            out.push((
                AxiomName::K,
                k(x.clone().implies(y.clone())).implies(k(x.clone()).implies(k(y.clone()))),
            ));
            out.push((
                AxiomName::AN,
                ann(x.clone(), y.clone().not()).iff(x.clone().implies(ann(x.clone(), y.clone()).not())),
            ));
            out.push((
                AxiomName::AK,
                ann(x.clone(), k(y.clone())).iff(x.clone().implies(k(ann(x.clone(), y.clone())))),
            ));
            for z in &pool {
                let z = z.clone();
                out.push((
                    AxiomName::KA,
                    ann(z.clone(), x.clone().implies(y.clone()))
                        .implies(ann(z.clone(), x.clone()).implies(ann(z.clone(), y.clone()))),
                ));
                out.push((
                    AxiomName::AC,
                    ann(x.clone(), y.clone().and(z.clone()))
                        .iff(ann(x.clone(), y.clone()).and(ann(x.clone(), z.clone()))),
                ));
                out.push((
                    AxiomName::AA,
                    ann(x.clone(), ann(z.clone(), y.clone()))
                        .iff(ann(x.clone().and(ann(x.clone(), z.clone())), y.clone())),
                ));
            }
        }
        for a in &atoms {
            out.push((
                AxiomName::AP,
                ann(x.clone(), a.clone()).iff(x.clone().implies(a.clone())),
            ));
        }
        for psi in &el {
            out.push((
                AxiomName::AU,
                u(x.clone()).implies(x.clone().and(ann((*psi).clone(), k(x.clone()).not()))),
            ));
        }
    }
    out
}

fn axioms_sound(cfg: &SuiteConfig) -> Outcome {
    let instances = axiom_instances();
    if let Some((name, f)) = instances.iter().find(|(name, f)| !match_axiom(f, *name)) {
        return Outcome {
            passed: false,
            detail: format!("checker does not recognise `{f}` as {name}"),
        };
    }
    let formulas: Vec<Formula> = instances.into_iter().map(|(_, f)| f).collect();
    all_valid(&formulas, cfg, FrameClass::Reflexive)
}

fn reduction_sound(cfg: &SuiteConfig) -> Outcome {
    let mut rng = StdRng::seed_from_u64(cfg.seed ^ 0xa11);
    let pal = Generator::pal(&ATOMS, &[AGENT]);
    let mut equivalences = Vec::new();
    for _ in 0..(cfg.samples / 10).max(1) {
        let f = pal.formula(&mut rng, 3);
        match rewrite::trace(&f) {
            Ok(steps) => {
                let last = steps.last().unwrap().formula.clone();
                equivalences.push(f.iff(last));
            }
            Err(e) => {
                return Outcome {
                    passed: false,
                    detail: format!("`{f}`: {e}"),
                }
            }
        }
    }
    all_valid(&equivalences, cfg, FrameClass::Reflexive)
}

fn sample_proof(cfg: &SuiteConfig) -> Outcome {
    let proof = proofcheck::sample_unknowable_implies_true();
    let report = check_proof(&proof);
    let mut corrupted = proof.clone();
    corrupted.steps[0].by = Justification::Axiom(AxiomName::T);
    let rejected = !check_proof(&corrupted).accepted;
    if !report.accepted || !rejected {
        return Outcome {
            passed: false,
            detail: format!(
                "sample accepted: {}, corrupted rejected: {rejected}",
                report.accepted
            ),
        };
    }
    let formulas: Vec<Formula> = proof.steps.into_iter().map(|s| s.formula).collect();
    let inner = all_valid(&formulas, cfg, FrameClass::Reflexive);
    Outcome {
        passed: inner.passed,
        detail: format!("accepted, corrupted variant rejected; {}", inner.detail),
    }
}

macro_rules! valid {
    ($id:expr, $section:expr, $claim:expr, $inst:expr) => {
        valid!($id, $section, $claim, $inst, FrameClass::Reflexive)
    };
    ($id:expr, $section:expr, $claim:expr, $inst:expr, $frame:expr) => {
        Entry {
            id: $id,
            section: $section,
            claim: $claim,
            check: Check::Valid($inst, $frame),
        }
    };
}

macro_rules! invalid {
    ($id:expr, $section:expr, $claim:expr, $formula:expr, $fixture:expr, $state:expr) => {
        Entry {
            id: $id,
            section: $section,
            claim: $claim,
            check: Check::Invalid {
                formula: $formula,
                fixture: $fixture,
                state: $state,
            },
        }
    };
}

macro_rules! measure {
    ($id:expr, $claim:expr, $pairs:expr) => {
        Entry {
            id: $id,
            section: "complexity",
            claim: $claim,
            check: Check::Measure($pairs),
        }
    };
}

/// Every entry, in report order.
pub fn catalog() -> Vec<Entry> {
    use Instances::*;
    let two = fixtures::two_state as fn() -> Model;
    let three = fixtures::three_state as fn() -> Model;
    vec![
        // Unknowable truths.
        valid!("U-factive", "unknowable", "U_i φ → φ", Unary(|x| u(x.clone()).implies(x))),
        valid!(
            "U-K",
            "unknowable",
            "U_i(φ→ψ) → (U_iφ → U_iψ)",
            Binary(|x, y| u(x.clone().implies(y.clone())).implies(u(x).implies(u(y))))
        ),
        valid!(
            "U-conjunction",
            "unknowable",
            "U_iφ ∧ U_iψ → U_i(φ∧ψ)",
            Binary(|x, y| u(x.clone()).and(u(y.clone())).implies(u(x.and(y))))
        ),
        valid!("U-4", "unknowable", "U_iφ → U_iU_iφ", Unary(|x| u(x.clone()).implies(u(u(x))))),
        valid!("U-idempotence", "unknowable", "U_iφ ↔ U_iU_iφ", Unary(|x| u(x.clone()).iff(u(u(x))))),
        valid!("not-K-U", "unknowable", "¬K_iU_iφ", Unary(|x| k(u(x)).not())),
        valid!(
            "not-U-K-transitive",
            "frames",
            "¬U_iK_iφ on transitive frames",
            Unary(|x| u(k(x)).not()),
            FrameClass::Transitive
        ),
        valid!(
            "not-U-not-K-euclidean",
            "frames",
            "¬U_i¬K_iφ on Euclidean frames",
            Unary(|x| u(k(x).not()).not()),
            FrameClass::Euclidean
        ),
        valid!("U-moore", "moore", "[U_ip]¬U_ip", Fixed(&["[U_i p] ~U_i p", "[U_i q] ~U_i q"])),
        valid!(
            "U-atom-finite",
            "moore",
            "¬U_ip on finite models, so [U_ip]U_ip is not refutable there",
            Fixed(&["~U_i p", "~U_i q"])
        ),
        invalid!(
            "U-negative-invalid",
            "unknowable",
            "⊭ ¬U_iφ → U_i¬U_iφ (φ = top)",
            "~U_i top -> U_i ~U_i top",
            two,
            "s"
        ),
        invalid!(
            "U-distribution-invalid",
            "unknowable",
            "⊭ U_i(φ∧ψ) → U_iφ ∨ U_iψ",
            "U_i (~K_i p & ~K_i q) -> U_i ~K_i p | U_i ~K_i q",
            three,
            "s"
        ),
        // Unknown truths.
        valid!("B-factive", "unknown", "B_iφ → φ", Unary(|x| b(x.clone()).implies(x))),
        valid!(
            "B-K",
            "unknown",
            "B_i(φ→ψ) → (B_iφ → B_iψ)",
            Binary(|x, y| b(x.clone().implies(y.clone())).implies(b(x).implies(b(y))))
        ),
        valid!(
            "B-conjunction",
            "unknown",
            "B_iφ ∧ B_iψ → B_i(φ∧ψ)",
            Binary(|x, y| b(x.clone()).and(b(y.clone())).implies(b(x.and(y))))
        ),
        valid!(
            "B-distribution",
            "unknown",
            "B_i(φ∧ψ) → B_iφ ∨ B_iψ",
            Binary(|x, y| b(x.clone().and(y.clone())).implies(b(x).or(b(y))))
        ),
        valid!("B-4", "unknown", "B_iφ → B_iB_iφ", Unary(|x| b(x.clone()).implies(b(b(x))))),
        valid!("B-idempotence", "unknown", "B_iφ ↔ B_iB_iφ", Unary(|x| b(x.clone()).iff(b(b(x))))),
        valid!("not-K-B", "unknown", "¬K_iB_iφ", Unary(|x| k(b(x)).not())),
        valid!(
            "not-B-K-transitive",
            "frames",
            "¬B_iK_iφ on transitive frames",
            Unary(|x| b(k(x)).not()),
            FrameClass::Transitive
        ),
        valid!(
            "not-B-not-K-euclidean",
            "frames",
            "¬B_i¬K_iφ on Euclidean frames",
            Unary(|x| b(k(x).not()).not()),
            FrameClass::Euclidean
        ),
        valid!("B-moore", "moore", "[B_ip]¬B_ip", Fixed(&["[B_i p] ~B_i p", "[B_i q] ~B_i q"])),
        invalid!(
            "B-negative-invalid",
            "unknown",
            "⊭ ¬B_iφ → B_i¬B_iφ (φ = top)",
            "~B_i top -> B_i ~B_i top",
            two,
            "s"
        ),
        // Interactions.
        valid!("U-to-B", "interaction", "U_iφ → B_iφ", Unary(|x| u(x.clone()).implies(b(x)))),
        invalid!("B-to-U-invalid", "interaction", "⊭ B_iφ → U_iφ", "B_i p -> U_i p", two, "s"),
        valid!("B-iff-UB", "interaction", "B_iφ ↔ U_iB_iφ", Unary(|x| b(x.clone()).iff(u(b(x))))),
        valid!("U-to-UB", "interaction", "U_iφ → U_iB_iφ", Unary(|x| u(x.clone()).implies(u(b(x))))),
        invalid!("UB-to-U-invalid", "interaction", "⊭ U_iB_iφ → U_iφ", "U_i B_i p -> U_i p", two, "s"),
        valid!("U-iff-BU", "interaction", "U_iφ ↔ B_iU_iφ", Unary(|x| u(x.clone()).iff(b(u(x))))),
        Entry {
            id: "fitch",
            section: "interaction",
            claim: "an unknown truth yields an unknowable truth",
            check: Check::Custom(fitch),
        },
        valid!(
            "validities-knowable",
            "interaction",
            "⊨ φ implies ⊨ ¬U_iφ (instances)",
            Fixed(&["~U_i top", "~U_i (p | ~p)", "~U_i (K_i p -> p)"])
        ),
        // Measure.
        measure!("complexity-1", "c(ψ) < c(¬ψ)", |s| vec![(s.psi.clone(), s.psi.clone().not())]),
        measure!("complexity-2", "c(ψ), c(χ) < c(ψ∧χ)", |s| {
            let both = s.psi.clone().and(s.chi.clone());
            vec![(s.psi.clone(), both.clone()), (s.chi.clone(), both)]
        }),
        measure!("complexity-3", "c(ψ) < c(K_iψ)", |s| vec![(s.psi.clone(), k(s.psi.clone()))]),
        measure!("complexity-4", "c(ψ→p) < c([ψ]p)", |s| vec![(
            s.psi.clone().implies(s.p.clone()),
            Formula::ann(s.psi.clone(), s.p.clone())
        )]),
        measure!("complexity-5", "c(ψ→¬[ψ]χ) < c([ψ]¬χ)", |s| vec![(
            s.psi.clone().implies(Formula::ann(s.psi.clone(), s.chi.clone()).not()),
            Formula::ann(s.psi.clone(), s.chi.clone().not())
        )]),
        measure!("complexity-6", "c([ψ]χ₁), c([ψ]χ₂) < c([ψ](χ₁∧χ₂))", |s| {
            let big = Formula::ann(s.psi.clone(), s.chi.clone().and(s.chi2.clone()));
            vec![
                (Formula::ann(s.psi.clone(), s.chi.clone()), big.clone()),
                (Formula::ann(s.psi.clone(), s.chi2.clone()), big),
            ]
        }),
        measure!("complexity-7", "c(ψ→K_i[ψ]χ) < c([ψ]K_iχ)", |s| vec![(
            s.psi.clone().implies(k(Formula::ann(s.psi.clone(), s.chi.clone()))),
            Formula::ann(s.psi.clone(), k(s.chi.clone()))
        )]),
        measure!("complexity-8", "c([ψ∧[ψ]χ]δ) < c([ψ][χ]δ)", |s| vec![(
            Formula::ann(
                s.psi.clone().and(Formula::ann(s.psi.clone(), s.chi.clone())),
                s.delta.clone()
            ),
            Formula::ann(s.psi.clone(), Formula::ann(s.chi.clone(), s.delta.clone()))
        )]),
        measure!(
            "complexity-9",
            "c([ψ]χ), c([ψ][δ]¬K_iχ) < c([ψ]U_iχ), δ epistemic",
            |s| {
                let big = Formula::ann(s.psi.clone(), u(s.chi.clone()));
                vec![
                    (Formula::ann(s.psi.clone(), s.chi.clone()), big.clone()),
                    (
                        Formula::ann(
                            s.psi.clone(),
                            Formula::ann(s.el.clone(), k(s.chi.clone()).not())
                        ),
                        big,
                    ),
                ]
            }
        ),
        measure!(
            "complexity-10",
            "c(ψ), c([χ]¬K_iψ) < c(U_iψ), χ epistemic",
            |s| {
                let big = u(s.psi.clone());
                vec![
                    (s.psi.clone(), big.clone()),
                    (Formula::ann(s.el.clone(), k(s.psi.clone()).not()), big),
                ]
            }
        ),
        // Proof system.
        Entry {
            id: "axioms-sound",
            section: "axioms",
            claim: "instances of K, KA, T, AP, AN, AC, AK, AA, AU are valid",
            check: Check::Custom(axioms_sound),
        },
        Entry {
            id: "reduction-sound",
            section: "axioms",
            claim: "announcement elimination preserves truth",
            check: Check::Custom(reduction_sound),
        },
        Entry {
            id: "sample-proof",
            section: "axioms",
            claim: "⊢ U_ip → p, and every line is valid",
            check: Check::Custom(sample_proof),
        },
    ]
}

fn run_entry(entry: &Entry, index: usize, cfg: &SuiteConfig) -> EntryReport {
    let outcome = match &entry.check {
        Check::Valid(which, frame) => all_valid(&instances(which), cfg, *frame),
        Check::Invalid {
            formula,
            fixture,
            state,
        } => invalid(formula, *fixture, state, cfg),
        Check::Measure(pairs) => measure(*pairs, index as u64, cfg),
        Check::Custom(run) => run(cfg),
    };
    EntryReport {
        id: entry.id,
        section: entry.section,
        claim: entry.claim,
        passed: outcome.passed,
        detail: outcome.detail,
    }
}

/// Run the catalog, or the single entry named `only`.
pub fn run_suite(cfg: &SuiteConfig, only: Option<&str>) -> Result<Vec<EntryReport>, SuiteError> {
    if !(1..=4).contains(&cfg.bound) {
        return Err(SuiteError::BadBound(cfg.bound));
    }
    let catalog = catalog();
    if let Some(id) = only {
        if !catalog.iter().any(|e| e.id == id) {
            return Err(SuiteError::UnknownEntry(id.to_string()));
        }
    }
    Ok(catalog
        .iter()
        .enumerate()
        .filter(|(_, e)| only.is_none_or(|id| e.id == id))
        .map(|(i, e)| run_entry(e, i, cfg))
        .collect())
}
