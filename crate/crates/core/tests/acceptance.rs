//! Acceptance checks, one line per criterion. Runs as a plain binary
//! (`harness = false`) so the lines are always printed.

mod common;

use common::{less_complex_oracle, naive_classes, naive_eval, random_model, size_oracle, udepth_oracle, Plain};
use lut::bisim::{defining_formula, partition, quotient};
use lut::fixtures;
use lut::formula::Generator;
use lut::kripke::{enumerate_models, frame_properties, EnumerationBounds, FrameClass};
use lut::proofcheck::{check_proof, load_proof, sample_unknowable_implies_true, AxiomName, Justification, StepError};
use lut::rewrite::{reduce_once, reduct};
use lut::semantics::{bounded_validity, bounded_validity_all, eval, eval_named, eval_with_witness, extension};
use lut::{parse, Formula};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::process::ExitCode;
use std::time::{Duration, Instant};

type Check = Result<String, String>;

fn f(text: &str) -> Formula {
    parse(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let m = fixtures::two_state();
    let s = m.state_index("s").unwrap();
    ensure(eval(&m, s, &f("B_i p")).unwrap(), || "B_i p false at s".into())?;
    let v = eval_with_witness(&m, s, &f("U_i p")).unwrap();
    ensure(!v.value, || "U_i p true at s".into())?;
    let w = v.witness.ok_or("no witness emitted")?;
    let check = Formula::diamond(w.announcement.clone(), f("K_i p"));
    ensure(eval(&m, s, &check).unwrap(), || {
        format!("<{}> K_i p false at s", w.announcement)
    })?;
    within(start, Duration::from_secs(1))?;
    Ok(format!(
        "B_i p true, U_i p false at s; witness `{}` gives <ψ>K_i p ({:?})",
        w.announcement,
        start.elapsed()
    ))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let m = fixtures::three_state();
    let at_s = |t: &str| eval_named(&m, "s", &f(t)).unwrap();
    ensure(at_s("U_i (~K_i p & ~K_i q)"), || "U_i(¬K_ip ∧ ¬K_iq) false".into())?;
    ensure(!at_s("U_i ~K_i p"), || "U_i ¬K_ip true".into())?;
    ensure(!at_s("U_i ~K_i q"), || "U_i ¬K_iq true".into())?;
    within(start, Duration::from_secs(1))?;
    Ok(format!(
        "U_i(¬K_ip ∧ ¬K_iq) true, U_i¬K_ip and U_i¬K_iq false at s ({:?})",
        start.elapsed()
    ))
}

const POOL: [&str; 6] = ["p", "q", "~p", "p & q", "K_i p", "~K_i p"];

// X and Y are schematic letters.
const BATTERY: [&str; 17] = [
    "U_i X -> X",
    "U_i (X -> Y) -> (U_i X -> U_i Y)",
    "U_i X & U_i Y -> U_i (X & Y)",
    "U_i X -> U_i U_i X",
    "U_i X <-> U_i U_i X",
    "~K_i U_i X",
    "[U_i p] ~U_i p",
    "B_i X -> X",
    "B_i (X -> Y) -> (B_i X -> B_i Y)",
    "B_i X & B_i Y -> B_i (X & Y)",
    "B_i X -> B_i B_i X",
    "B_i X <-> B_i B_i X",
    "~K_i B_i X",
    "[B_i p] ~B_i p",
    "U_i X -> B_i X",
    "B_i X <-> U_i B_i X",
    "U_i X <-> B_i U_i X",
];

fn instantiate(template: &str) -> Vec<Formula> {
    let mut out = Vec::new();
    for x in POOL {
        for y in POOL {
            let text = template
                .replace('X', &format!("({x})"))
                .replace('Y', &format!("({y})"));
            out.push(f(&text));
        }
    }
    out.sort();
    out.dedup();
    out
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let formulas: Vec<Formula> = BATTERY.iter().flat_map(|t| instantiate(t)).collect();
    let bounds = EnumerationBounds::new(3, &["i"], &["p", "q"]);
    let results = bounded_validity_all(&formulas, &bounds, 4).map_err(|e| e.to_string())?;
    for (g, r) in formulas.iter().zip(&results) {
        ensure(r.is_valid(), || format!("countermodel for {g}"))?;
    }
    within(start, Duration::from_secs(600))?;
    Ok(format!(
        "{} instances of {} schemas hold on all {} models ≤ 3 states ({:?})",
        formulas.len(),
        BATTERY.len(),
        results[0].models_checked(),
        start.elapsed()
    ))
}

fn criterion_4() -> Check {
    let mut detail = Vec::new();
    for (text, class) in [
        ("~U_i K_i p", FrameClass::Transitive),
        ("~U_i ~K_i p", FrameClass::Euclidean),
    ] {
        let bounds = EnumerationBounds::new(3, &["i"], &["p"]).with_frame_class(class);
        // The filter itself, against the brute-force property check.
        for m in enumerate_models(&bounds).map_err(|e| e.to_string())? {
            let flags = &frame_properties(&m)[0];
            let ok = match class {
                FrameClass::Transitive => flags.transitive,
                _ => flags.euclidean,
            };
            ensure(ok && flags.reflexive, || format!("{class} filter let through {}", m.summary()))?;
        }
        let r = bounded_validity(&f(text), &bounds, 1).map_err(|e| e.to_string())?;
        ensure(r.is_valid(), || format!("{text} has a {class} countermodel"))?;
        detail.push(format!("{text} on {} {class} models", r.models_checked()));
    }
    Ok(detail.join("; ") + "; zero counterexamples")
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(5);
    let atoms = ["p", "q", "r"];
    let agents = ["i", "j"];
    let lut = Generator::lut(&atoms, &agents);
    let el = Generator::el(&atoms, &agents);
    let samples = 2000;
    let mut checked = 0;
    for _ in 0..samples {
        let mut any = || {
            let d = rng.gen_range(0..=4);
            lut.formula(&mut rng, d)
        };
        let (psi, chi, chi2, delta) = (any(), any(), any(), any());
        let d = rng.gen_range(0..=4);
        let e = el.formula(&mut rng, d);
        let p = Formula::atom(atoms[rng.gen_range(0..3)]);
        let ann = Formula::ann;
        let k = |x: Formula| Formula::know("i", x);
        let u = |x: Formula| Formula::unk("i", x);
        let pairs: [(usize, Formula, Formula); 14] = [
            (1, psi.clone(), psi.clone().not()),
            (2, psi.clone(), psi.clone().and(chi.clone())),
            (2, chi.clone(), psi.clone().and(chi.clone())),
            (3, psi.clone(), k(psi.clone())),
            (4, psi.clone().implies(p.clone()), ann(psi.clone(), p.clone())),
            (5, psi.clone().implies(ann(psi.clone(), chi.clone()).not()), ann(psi.clone(), chi.clone().not())),
            (6, ann(psi.clone(), chi.clone()), ann(psi.clone(), chi.clone().and(chi2.clone()))),
            (6, ann(psi.clone(), chi2.clone()), ann(psi.clone(), chi.clone().and(chi2.clone()))),
            (7, psi.clone().implies(k(ann(psi.clone(), chi.clone()))), ann(psi.clone(), k(chi.clone()))),
            (8, ann(psi.clone().and(ann(psi.clone(), chi.clone())), delta.clone()), ann(psi.clone(), ann(chi.clone(), delta.clone()))),
            (9, ann(psi.clone(), chi.clone()), ann(psi.clone(), u(chi.clone()))),
            (9, ann(psi.clone(), ann(e.clone(), k(chi.clone()).not())), ann(psi.clone(), u(chi.clone()))),
            (10, psi.clone(), u(psi.clone())),
            (10, ann(e.clone(), k(psi.clone()).not()), u(psi.clone())),
        ];
        for (item, small, big) in pairs {
            checked += 1;
            ensure(less_complex_oracle(&small, &big), || {
                format!("item ({item}) fails: {small} vs {big}")
            })?;
            ensure(small.less_complex(&big), || {
                format!("library measure disagrees on item ({item}): {small} vs {big}")
            })?;
            for g in [&small, &big] {
                ensure(
                    g.size() == size_oracle(g) && g.udepth() == udepth_oracle(g),
                    || format!("measure of {g} differs from its definition"),
                )?;
            }
        }
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!(
        "{checked} comparisons over {samples} random formula tuples, items (1)-(10), zero violations ({:?})",
        start.elapsed()
    ))
}

fn criterion_6() -> Check {
    let mut rng = StdRng::seed_from_u64(6);
    let atoms = ["p", "q"];
    let agents = ["a", "b"];
    let lut = Generator::lut(&atoms, &agents);
    let small = |rng: &mut StdRng| {
        let d = rng.gen_range(0..=2);
        lut.formula(rng, d)
    };
    let mut per_axiom = [0usize; 5];
    for _ in 0..1000 {
        let (psi, phi, chi) = (small(&mut rng), small(&mut rng), small(&mut rng));
        let agent = agents[rng.gen_range(0..2)];
        let p = Formula::atom(atoms[rng.gen_range(0..2)]);
        let which = rng.gen_range(0..5);
        // Left side, and the right side written out from the axiom.
        let (lhs, rhs) = match which {
            0 => (Formula::ann(psi.clone(), p.clone()), psi.clone().implies(p)),
            1 => (
                Formula::ann(psi.clone(), phi.clone().not()),
                psi.clone().implies(Formula::ann(psi.clone(), phi.clone()).not()),
            ),
            2 => (
                Formula::ann(psi.clone(), phi.clone().and(chi.clone())),
                Formula::ann(psi.clone(), phi.clone()).and(Formula::ann(psi.clone(), chi.clone())),
            ),
            3 => (
                Formula::ann(psi.clone(), Formula::know(agent, phi.clone())),
                psi.clone().implies(Formula::know(agent, Formula::ann(psi.clone(), phi.clone()))),
            ),
            _ => (
                Formula::ann(psi.clone(), Formula::ann(chi.clone(), phi.clone())),
                Formula::ann(psi.clone().and(Formula::ann(psi.clone(), chi.clone())), phi.clone()),
            ),
        };
        per_axiom[which] += 1;
        let Formula::Ann(a, body) = &lhs else { unreachable!() };
        let (_, produced) = reduct(a, body).ok_or_else(|| format!("no reduct for {lhs}"))?;
        ensure(produced == rhs, || format!("reduct of {lhs} is {produced}, expected {rhs}"))?;
        ensure(less_complex_oracle(&rhs, &lhs), || format!("{rhs} not below {lhs}"))?;
        let m = random_model(&mut rng, 4, &agents, &atoms);
        let s = rng.gen_range(0..m.num_states());
        let plain = Plain::of(&m);
        let all = vec![true; plain.n];
        let (l, r) = (eval(&m, s, &lhs).unwrap(), eval(&m, s, &rhs).unwrap());
        ensure(l == r, || format!("{lhs} / {rhs} differ at w{s} of {}", m.summary()))?;
        ensure(l == naive_eval(&plain, &all, s, &lhs), || {
            format!("evaluator disagrees with reference on {lhs} at w{s} of {}", m.summary())
        })?;
    }
    // Whole rewrite sequences on announcement-logic formulas.
    let pal = Generator::pal(&atoms, &agents);
    let mut steps = 0;
    for _ in 0..1000 {
        let mut g = pal.formula(&mut rng, 4);
        while let Some((axiom, next)) = reduce_once(&g) {
            steps += 1;
            ensure(less_complex_oracle(&next, &g), || format!("{axiom}: {next} not below {g}"))?;
            g = next;
        }
        ensure(g.is_el(), || format!("normal form {g} still has announcements"))?;
    }
    Ok(format!(
        "1000 triples (AP {}, AN {}, AC {}, AK {}, AA {}) agree; {steps} rewrite steps all decrease",
        per_axiom[0], per_axiom[1], per_axiom[2], per_axiom[3], per_axiom[4]
    ))
}

fn battery() -> Vec<Formula> {
    let mut out: Vec<Formula> = [
        "U_a p",
        "U_a ~K_a p",
        "U_a U_a (p & ~K_a p)",
        "U_a ~U_b q",
        "U_b (~K_a p & ~K_a q)",
        "[U_a p] U_b ~K_a q",
        "U_a [q] ~K_a p",
        "K_b U_a B_a q",
        "U_a (K_b p -> U_b ~K_a q)",
        "<~K_a q> U_a B_a p",
    ]
    .iter()
    .map(|t| f(t))
    .collect();
    let mut rng = StdRng::seed_from_u64(7);
    let lut = Generator::lut(&["p", "q"], &["a", "b"]);
    while out.len() < 50 {
        let g = lut.formula(&mut rng, 3);
        if g.udepth() > 0 && !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

fn criterion_7() -> Check {
    let mut rng = StdRng::seed_from_u64(8);
    let formulas = battery();
    let nested = formulas.iter().filter(|g| g.udepth() >= 2).count();
    let models = 150;
    let mut subsets = 0;
    for _ in 0..models {
        let m = random_model(&mut rng, 4, &["a", "b"], &["p", "q"]);
        let plain = Plain::of(&m);
        let all = vec![true; plain.n];
        // (a)
        let blocks = partition(&m);
        let mut ours: Vec<Vec<usize>> = blocks.blocks().iter().map(|b| b.iter().collect()).collect();
        ours.sort();
        ensure(ours == naive_classes(&plain, &all), || {
            format!("partition {ours:?} differs from reference on {}", m.summary())
        })?;
        // (b)
        for s in 0..m.num_states() {
            for t in blocks.closed_subsets(s) {
                subsets += 1;
                let psi = defining_formula(&m, &blocks, t);
                let ext = extension(&m, &psi).unwrap();
                ensure(ext == t, || format!("{psi} defines {ext:?}, not {t:?}, in {}", m.summary()))?;
            }
        }
        // (c)
        let q = quotient(&m, &blocks).map_err(|e| e.to_string())?;
        for g in &formulas {
            for s in 0..m.num_states() {
                let here = eval(&m, s, g).unwrap();
                let there = eval(&q, blocks.block_of(s).unwrap(), g).unwrap();
                ensure(here == there, || format!("{g} differs on quotient of {}", m.summary()))?;
                ensure(here == naive_eval(&plain, &all, s, g), || {
                    format!("{g} differs from reference at w{s} of {}", m.summary())
                })?;
            }
        }
    }
    Ok(format!(
        "{models} random models ≤ 4 states: partitions match reference, {subsets} closed subsets defined exactly, \
         {} formulas ({nested} with nested U) agree on quotients",
        formulas.len()
    ))
}

fn criterion_8() -> Check {
    let sample = sample_unknowable_implies_true();
    ensure(check_proof(&sample).accepted, || "sample proof rejected".into())?;
    let mut corrupted = sample.clone();
    corrupted.steps[0].by = Justification::Axiom(AxiomName::T);
    let report = check_proof(&corrupted);
    ensure(
        matches!(report.first_error(), Some((1, StepError::AxiomMismatch { .. }))),
        || format!("corrupted proof: {:?}", report.first_error()),
    )?;

    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/proofs");
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    let mut accepted = vec![sample];
    for path in &paths {
        let proof = load_proof(&std::fs::read_to_string(path).unwrap()).map_err(|e| e.to_string())?;
        if check_proof(&proof).accepted {
            accepted.push(proof);
        }
    }
    let mut lines = 0;
    for proof in &accepted {
        for step in &proof.steps {
            let g = &step.formula;
            let agents: Vec<String> = g.agents().iter().map(|a| a.to_string()).collect();
            let atoms: Vec<String> = g.atoms().iter().map(|a| a.to_string()).collect();
            let agents: Vec<&str> = agents.iter().map(String::as_str).collect();
            let atoms: Vec<&str> = atoms.iter().map(String::as_str).collect();
            let r = bounded_validity(g, &EnumerationBounds::new(3, &agents, &atoms), 4)
                .map_err(|e| e.to_string())?;
            ensure(r.is_valid(), || format!("accepted line {g} has a countermodel"))?;
            lines += 1;
        }
    }
    Ok(format!(
        "sample accepted, corrupted variant rejected with AxiomMismatch at step 1; \
         {lines} lines of {} accepted proofs valid at n=3",
        accepted.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("1 two-state fixture", criterion_1),
        ("2 three-state fixture", criterion_2),
        ("3 validity battery", criterion_3),
        ("4 frame-conditional battery", criterion_4),
        ("5 complexity measure", criterion_5),
        ("6 reduction soundness", criterion_6),
        ("7 bisimulation trust chain", criterion_7),
        ("8 proof checker", criterion_8),
    ];
    let mut passed = [false; 10];
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = run();
        passed[i + 1] = result.is_ok();
        match result {
            Ok(detail) => println!("criterion {name}: PASS  {detail}"),
            Err(detail) => println!("criterion {name}: FAIL  {detail}"),
        }
    }
    let proxy = passed[3] && passed[6] && passed[8];
    passed[9] = proxy;
    println!(
        "criterion 9 soundness proxy: {}  stands on criteria 3, 6 and 8 (the completeness direction is not checkable on finite models)",
        if proxy { "PASS" } else { "FAIL" }
    );
    if passed[1..].iter().all(|&p| p) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
