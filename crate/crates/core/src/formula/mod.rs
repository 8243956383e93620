//! Syntax of the logic of unknowable truths.
//!
//! The stored tree only ever contains the primitive connectives: atoms, `top`,
//! negation, conjunction, knowledge `K_i`, public announcement `[ψ]φ` and
//! unknowability `U_i`. Disjunction, implication, equivalence, the dual
//! announcement `<ψ>φ`, the unknown-truth operator `B_i` and `bot` are expanded
//! by the constructors below (and by the parser) into those primitives.
//!
//! Children are reference counted so that large generated formulas (for
//! instance characteristic formulas) can share subtrees. Equality, ordering
//! and hashing are structural.

mod measure;
mod parse;
mod random;
mod render;

pub use measure::Complexity;
pub use parse::{parse, ParseError, ParseErrorKind};
pub use random::Generator;
pub use render::{render, render_pretty};

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Agent or atom identifier.
pub type Name = Arc<str>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Name),
    Top,
    Neg(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Know(Name, Arc<Formula>),
    /// `[announcement] body`
    Ann(Arc<Formula>, Arc<Formula>),
    Unk(Name, Arc<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Self {
        Formula::Atom(name.into())
    }

    pub fn top() -> Self {
        Formula::Top
    }

    pub fn bot() -> Self {
        Formula::top().not()
    }

    pub fn not(self) -> Self {
        Formula::Neg(Arc::new(self))
    }

    pub fn and(self, rhs: Formula) -> Self {
        Formula::And(Arc::new(self), Arc::new(rhs))
    }

    /// `¬(¬φ ∧ ¬ψ)`
    pub fn or(self, rhs: Formula) -> Self {
        self.not().and(rhs.not()).not()
    }

    /// `¬(φ ∧ ¬ψ)`
    pub fn implies(self, rhs: Formula) -> Self {
        self.and(rhs.not()).not()
    }

    /// `(φ → ψ) ∧ (ψ → φ)`
    pub fn iff(self, rhs: Formula) -> Self {
        self.clone().implies(rhs.clone()).and(rhs.implies(self))
    }

    pub fn know(agent: &str, body: Formula) -> Self {
        Formula::Know(agent.into(), Arc::new(body))
    }

    pub fn unk(agent: &str, body: Formula) -> Self {
        Formula::Unk(agent.into(), Arc::new(body))
    }

    /// `[announcement] body`
    pub fn ann(announcement: Formula, body: Formula) -> Self {
        Formula::Ann(Arc::new(announcement), Arc::new(body))
    }

    /// `<announcement> body`, i.e. `¬[announcement]¬body`.
    pub fn diamond(announcement: Formula, body: Formula) -> Self {
        Formula::ann(announcement, body.not()).not()
    }

    /// Unknown truth `φ ∧ ¬K_i φ`.
    pub fn bullet(agent: &str, body: Formula) -> Self {
        body.clone().and(Formula::know(agent, body).not())
    }

    /// Conjunction of all items, `top` when empty. Left-nested.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Disjunction of all items, `bot` when empty. Left-nested.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or_else(Formula::bot)
    }

    /// True iff the formula is in the epistemic fragment: no announcement and
    /// no unknowability operator anywhere.
    pub fn is_el(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Top => true,
            Formula::Neg(f) | Formula::Know(_, f) => f.is_el(),
            Formula::And(l, r) => l.is_el() && r.is_el(),
            Formula::Ann(..) | Formula::Unk(..) => false,
        }
    }

    /// True iff the formula contains no `U_i` (the announcement fragment).
    pub fn is_pal(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Top => true,
            Formula::Neg(f) | Formula::Know(_, f) => f.is_pal(),
            Formula::And(l, r) | Formula::Ann(l, r) => l.is_pal() && r.is_pal(),
            Formula::Unk(..) => false,
        }
    }

    pub fn contains_ann(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Top => false,
            Formula::Neg(f) | Formula::Know(_, f) | Formula::Unk(_, f) => f.contains_ann(),
            Formula::And(l, r) => l.contains_ann() || r.contains_ann(),
            Formula::Ann(..) => true,
        }
    }

    pub fn atoms(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(p) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn agents(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Know(a, _) | Formula::Unk(a, _) = f {
                out.insert(a.clone());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<F: FnMut(&Formula)>(&self, f: &mut F) {
        f(self);
        match self {
            Formula::Atom(_) | Formula::Top => {}
            Formula::Neg(x) | Formula::Know(_, x) | Formula::Unk(_, x) => x.visit(f),
            Formula::And(l, r) | Formula::Ann(l, r) => {
                l.visit(f);
                r.visit(f);
            }
        }
    }

    /// Number of nodes in the tree, counting shared subtrees once per use.
    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_pretty(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
