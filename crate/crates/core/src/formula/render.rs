use super::Formula;

// Binding strength, loosest first. Mirrors the parser's grammar levels.
const IFF: u8 = 0;
const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;

/// Derived-connective reading of a primitive node, used by the pretty printer.
enum View<'a> {
    Bot,
    Or(&'a Formula, &'a Formula),
    Imp(&'a Formula, &'a Formula),
    Iff(&'a Formula, &'a Formula),
    Diamond(&'a Formula, &'a Formula),
    Bullet(&'a str, &'a Formula),
}

fn as_imp(f: &Formula) -> Option<(&Formula, &Formula)> {
    if let Formula::Neg(x) = f {
        if let Formula::And(l, r) = &**x {
            if let Formula::Neg(r) = &**r {
                return Some((l, r));
            }
        }
    }
    None
}

fn view(f: &Formula) -> Option<View<'_>> {
    match f {
        Formula::Neg(x) => match &**x {
            Formula::Top => Some(View::Bot),
            Formula::And(l, r) => match (&**l, &**r) {
                // `(a -> b) -> c` and `a & ~b | c` share a tree; prefer the
                // former.
                (Formula::Neg(l), Formula::Neg(r))
                    if !matches!(&**l, Formula::And(_, x) if matches!(**x, Formula::Neg(_))) =>
                {
                    Some(View::Or(l, r))
                }
                (l, Formula::Neg(r)) => Some(View::Imp(l, r)),
                _ => None,
            },
            Formula::Ann(a, b) => match &**b {
                Formula::Neg(b) => Some(View::Diamond(a, b)),
                _ => None,
            },
            _ => None,
        },
        Formula::And(l, r) => {
            if let (Some((a, b)), Some((b2, a2))) = (as_imp(l), as_imp(r)) {
                if a == a2 && b == b2 {
                    return Some(View::Iff(a, b));
                }
            }
            if let Formula::Neg(r) = &**r {
                if let Formula::Know(agent, x) = &**r {
                    if **x == **l {
                        return Some(View::Bullet(agent, l));
                    }
                }
            }
            None
        }
        _ => None,
    }
}

struct Printer {
    sugar: bool,
    out: String,
}

impl Printer {
    fn wrap(&mut self, needed: u8, have: u8, body: impl FnOnce(&mut Self)) {
        if have > needed {
            self.out.push('(');
            body(self);
            self.out.push(')');
        } else {
            body(self);
        }
    }

    fn go(&mut self, f: &Formula, level: u8) {
        if self.sugar {
            if let Some(v) = view(f) {
                self.sugared(v, level);
                return;
            }
        }
        match f {
            Formula::Atom(p) => self.out.push_str(p),
            Formula::Top => self.out.push_str("top"),
            Formula::Neg(x) => {
                self.out.push('~');
                self.go(x, UNARY);
            }
            Formula::And(l, r) => self.wrap(AND, level, |p| {
                p.go(l, AND);
                p.out.push_str(" & ");
                p.go(r, UNARY);
            }),
            Formula::Know(a, x) => self.prefix("K_", a, x),
            Formula::Unk(a, x) => self.prefix("U_", a, x),
            Formula::Ann(a, x) => {
                self.out.push('[');
                self.go(a, IFF);
                self.out.push_str("] ");
                self.go(x, UNARY);
            }
        }
    }

    fn prefix(&mut self, op: &str, agent: &str, body: &Formula) {
        self.out.push_str(op);
        self.out.push_str(agent);
        self.out.push(' ');
        self.go(body, UNARY);
    }

    fn sugared(&mut self, v: View<'_>, level: u8) {
        match v {
            View::Bot => self.out.push_str("bot"),
            View::Or(l, r) => self.wrap(OR, level, |p| {
                p.go(l, OR);
                p.out.push_str(" | ");
                p.go(r, AND);
            }),
            View::Imp(l, r) => self.wrap(IMP, level, |p| {
                p.go(l, OR);
                p.out.push_str(" -> ");
                p.go(r, IMP);
            }),
            View::Iff(l, r) => self.wrap(IFF, level, |p| {
                p.go(l, IFF);
                p.out.push_str(" <-> ");
                p.go(r, IMP);
            }),
            View::Diamond(a, x) => {
                self.out.push('<');
                self.go(a, IFF);
                self.out.push_str("> ");
                self.go(x, UNARY);
            }
            View::Bullet(agent, x) => self.prefix("B_", agent, x),
        }
    }
}

/// Render using primitive connectives only, with minimal parentheses.
pub fn render(f: &Formula) -> String {
    let mut p = Printer {
        sugar: false,
        out: String::new(),
    };
    p.go(f, IFF);
    p.out
}

/// Render, folding expanded sugar (`->`, `|`, `<->`, `<ψ>`, `B_i`, `bot`) back
/// into its surface form. Reparses to the same tree as [`render`].
pub fn render_pretty(f: &Formula) -> String {
    let mut p = Printer {
        sugar: true,
        out: String::new(),
    };
    p.go(f, IFF);
    p.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn primitive_examples() {
        assert_eq!(render(&Formula::atom("p").not()), "~p");
        assert_eq!(
            render(&Formula::ann(
                Formula::atom("p"),
                Formula::know("a", Formula::atom("q"))
            )),
            "[p] K_a q"
        );
        assert_eq!(render(&Formula::unk("a", Formula::Top)), "U_a top");
    }

    #[test]
    fn minimal_parentheses() {
        let f = parse("(p & q) & r").unwrap();
        assert_eq!(render(&f), "p & q & r");
        let f = parse("p & (q & r)").unwrap();
        assert_eq!(render(&f), "p & (q & r)");
        let f = parse("K_a (p & q)").unwrap();
        assert_eq!(render(&f), "K_a (p & q)");
        assert_eq!(render(&parse("p -> q").unwrap()), "~(p & ~q)");
    }

    #[test]
    fn pretty_folds_sugar() {
        for text in [
            "p -> K_a (p -> q)",
            "p & (p -> q) -> r",
            "p | q | r",
            "(p -> q) -> r",
            "p <-> q",
            "<p> K_a p",
            "B_a p",
            "bot",
            "U_a B_a p",
        ] {
            let f = parse(text).unwrap();
            assert_eq!(render_pretty(&f), text);
        }
    }
}
