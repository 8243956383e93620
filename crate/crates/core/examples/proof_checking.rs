//! Build a Hilbert-style proof, check it, then break one step.

use lut::parse;
use lut::proofcheck::{check_proof, AxiomName, Justification, Proof};

fn main() {
    let mut proof = Proof::default();
    let t = proof.push(parse("K_a p -> p").unwrap(), Justification::Axiom(AxiomName::T));
    let g = proof.push(parse("K_b (K_a p -> p)").unwrap(), Justification::Gen(t, "b".into()));
    let k = proof.push(
        parse("K_b (K_a p -> p) -> (K_b K_a p -> K_b p)").unwrap(),
        Justification::Axiom(AxiomName::K),
    );
    proof.push(parse("K_b K_a p -> K_b p").unwrap(), Justification::MP(g, k));

    let report = check_proof(&proof);
    for s in &report.steps {
        println!("{:>2}. {:<44} {}", s.index, s.formula.to_string(), s.by);
    }
    println!("accepted: {}", report.accepted);

    proof.steps[0].by = Justification::Axiom(AxiomName::K);
    if let Some((i, err)) = check_proof(&proof).first_error() {
        println!("after corrupting step 1: step {i}: {err}");
    }
}
