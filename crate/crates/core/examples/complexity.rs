//! The complexity order used to justify the reduction axioms, shown as
//! (U-depth, size) pairs compared lexicographically.

use lut::parse;

fn main() {
    let pairs = [
        ("p -> q", "[p] q"),
        ("p -> K_a [p] q", "[p] K_a q"),
        ("[p & [p] q] r", "[p][q] r"),
        ("[K_a p] q", "U_a q"),
        ("U_a U_a p", "[U_a U_a p] q"),
    ];
    for (a, b) in pairs {
        let (fa, fb) = (parse(a).unwrap(), parse(b).unwrap());
        println!(
            "{a:<16} ({}, {})  <  {b:<16} ({}, {})  : {}",
            fa.udepth(),
            fa.size(),
            fb.udepth(),
            fb.size(),
            fa.less_complex(&fb)
        );
    }
}
