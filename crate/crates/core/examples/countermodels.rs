//! Bounded validity: search all small reflexive models for a countermodel.

use lut::kripke::{EnumerationBounds, FrameClass};
use lut::parse;
use lut::semantics::{bounded_validity, Validity};

fn main() {
    let bounds = EnumerationBounds::new(3, &["i"], &["p", "q"]);
    let candidates = [
        "U_i p -> p",
        "U_i p -> U_i U_i p",
        "~U_i p -> U_i ~p",
        "U_i (p -> q) -> (U_i p -> U_i q)",
        "B_i p -> p",
        "B_i p -> U_i B_i p",
        "~B_i p -> B_i ~p",
    ];
    for text in candidates {
        match bounded_validity(&parse(text).unwrap(), &bounds, 2).unwrap() {
            Validity::ValidUpToBound { models_checked } => {
                println!("{text:<36} valid on {models_checked} models")
            }
            Validity::Countermodel { model, state, .. } => {
                println!("{text:<36} fails at {} of {}", model.state_name(state), model.summary())
            }
        }
    }

    // Restricting to a frame class.
    let euclidean = EnumerationBounds::new(3, &["i"], &["p"]).with_frame_class(FrameClass::Euclidean);
    let r = bounded_validity(&parse("~K_i p -> K_i ~K_i p").unwrap(), &euclidean, 1).unwrap();
    println!("negative introspection on euclidean frames: valid = {}", r.is_valid());
}
