//! Eliminate public announcements with the reduction axioms, showing each
//! step and its complexity.

use lut::parse;
use lut::rewrite::trace;

fn main() {
    for text in ["[p][q] r", "[K_a p] ~K_b p", "<p & ~K_a p> K_a p"] {
        println!("{text}");
        for step in trace(&parse(text).unwrap()).unwrap() {
            let label = step.axiom.map_or("start".to_string(), |a| a.to_string());
            let c = step.formula.complexity();
            println!("  {label:<6}{}  (udepth {}, size {})", step.formula, c.udepth, c.size);
        }
    }
    // Unknowability has no reduction.
    println!("{}", trace(&parse("[p] U_a q").unwrap()).unwrap_err());
}
