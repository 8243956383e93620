//! Bisimulation blocks, the quotient model, and formulas defining each
//! union of blocks.

use lut::bisim::{characteristic, defining_formula, defining_formula_at_rank, partition, quotient};
use lut::load_model;
use lut::semantics::extension;

fn main() {
    let model = load_model(
        r#"{
            "states": ["a", "b", "c", "d"],
            "agents": ["i"],
            "reflexive_closure": true,
            "relations": {"i": [["a", "b"], ["b", "a"], ["c", "d"], ["d", "c"]]},
            "valuation": {"p": ["a", "c"]}
        }"#,
    )
    .unwrap();
    let blocks = partition(&model);
    for b in blocks.blocks() {
        println!("block {:?}", model.set_names(*b));
    }

    let q = quotient(&model, &blocks).unwrap();
    println!("quotient: {}", q.summary());

    println!("rank-1 characteristic formula of a: {}", characteristic(&model, 0, 1));

    for t in blocks.unions() {
        // The full-rank definition always works but is large; a lower
        // rank is usually enough.
        assert_eq!(extension(&model, &defining_formula(&model, &blocks, t)).unwrap(), t);
        let (rank, psi) = (0..model.num_states())
            .map(|r| (r, defining_formula_at_rank(&model, &blocks, t, r)))
            .find(|(_, f)| extension(&model, f).unwrap() == t)
            .unwrap();
        println!("{:?} is defined at rank {rank} by {psi}", model.set_names(t));
    }
}
