//! Size, U-depth and the lexicographic complexity order used to show that
//! announcement reduction terminates.

use super::Formula;
use serde::Serialize;
use std::cmp::Ordering;

/// U-depth first, then size. The derived `Ord` is exactly the
/// "less complex than" order because of the field order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Complexity {
    pub udepth: u64,
    pub size: u128,
}

impl Formula {
    /// `S(p) = 1`, `S(¬φ) = S(φ)+1`, `S(φ∧ψ) = S(φ)+S(ψ)+1`, `S(K_iφ) = S(φ)+1`,
    /// `S([φ]ψ) = (5+S(φ))·S(ψ)`, `S(U_iφ) = S(φ)+1`. `top` counts as an atom.
    ///
    /// Saturates instead of overflowing on absurdly nested announcements.
    pub fn size(&self) -> u128 {
        match self {
            Formula::Atom(_) | Formula::Top => 1,
            Formula::Neg(f) | Formula::Know(_, f) | Formula::Unk(_, f) => {
                f.size().saturating_add(1)
            }
            Formula::And(l, r) => l.size().saturating_add(r.size()).saturating_add(1),
            Formula::Ann(a, b) => a.size().saturating_add(5).saturating_mul(b.size()),
        }
    }

    pub fn udepth(&self) -> u64 {
        match self {
            Formula::Atom(_) | Formula::Top => 0,
            Formula::Neg(f) | Formula::Know(_, f) => f.udepth(),
            Formula::And(l, r) => l.udepth().max(r.udepth()),
            Formula::Ann(a, b) => a.udepth() + b.udepth(),
            Formula::Unk(_, f) => f.udepth() + 1,
        }
    }

    pub fn complexity(&self) -> Complexity {
        Complexity {
            udepth: self.udepth(),
            size: self.size(),
        }
    }

    /// Strict "less complex than".
    pub fn less_complex(&self, other: &Formula) -> bool {
        self.complexity().cmp(&other.complexity()) == Ordering::Less
    }
}
