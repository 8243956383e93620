//! Evaluate formulas on a small model and print the announcement that
//! refutes an unknowability claim.

use lut::semantics::{eval, eval_with_witness};
use lut::{load_model, parse};

fn main() {
    let model = load_model(
        r#"{
            "states": ["s", "t"],
            "agents": ["i"],
            "reflexive_closure": true,
            "relations": {"i": [["s", "t"], ["t", "s"]]},
            "valuation": {"p": ["s"]}
        }"#,
    )
    .unwrap();
    let s = model.state_index("s").unwrap();
    println!("model: {}", model.summary());

    for text in ["p", "K_i p", "B_i p", "U_i p", "U_i B_i p"] {
        let f = parse(text).unwrap();
        println!("{text:>10} at s: {}", eval(&model, s, &f).unwrap());
    }

    let verdict = eval_with_witness(&model, s, &parse("U_i p").unwrap()).unwrap();
    if let Some(w) = verdict.witness {
        println!(
            "U_i p fails: announcing `{}` leaves {:?}, where i knows p",
            w.announcement,
            model.set_names(w.states)
        );
    }
}
