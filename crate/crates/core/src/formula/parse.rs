//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*            left-assoc
//! imp     := or ("->" imp)?              right-assoc
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | "K_" IDENT unary | "U_" IDENT unary | "B_" IDENT unary
//!          | "[" formula "]" unary | "<" formula ">" unary
//!          | "top" | "bot" | IDENT | "(" formula ")"
//! IDENT   := [a-z][a-zA-Z0-9]*
//! ```

use super::Formula;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {kind}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownToken(String),
    Unexpected { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
    MissingIdentifier(&'static str),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnknownToken(t) => write!(f, "unknown token `{t}`"),
            ParseErrorKind::Unexpected { found, expected } => {
                write!(f, "expected {expected}, found `{found}`")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "expected {expected}, found end of input")
            }
            ParseErrorKind::MissingIdentifier(op) => {
                write!(f, "`{op}` must be followed directly by an identifier")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Not,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LAngle,
    RAngle,
    Know(String),
    Unk(String),
    Bullet(String),
    Top,
    Bot,
    Ident(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Not => f.write_str("~"),
            Tok::And => f.write_str("&"),
            Tok::Or => f.write_str("|"),
            Tok::Imp => f.write_str("->"),
            Tok::Iff => f.write_str("<->"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
            Tok::LBrack => f.write_str("["),
            Tok::RBrack => f.write_str("]"),
            Tok::LAngle => f.write_str("<"),
            Tok::RAngle => f.write_str(">"),
            Tok::Know(a) => write!(f, "K_{a}"),
            Tok::Unk(a) => write!(f, "U_{a}"),
            Tok::Bullet(a) => write!(f, "B_{a}"),
            Tok::Top => f.write_str("top"),
            Tok::Bot => f.write_str("bot"),
            Tok::Ident(s) => f.write_str(s),
        }
    }
}

fn ident_len(s: &str) -> usize {
    let mut chars = s.char_indices();
    match chars.next() {
        Some((_, c)) if c.is_ascii_lowercase() => {}
        _ => return 0,
    }
    chars
        .find(|(_, c)| !c.is_ascii_alphanumeric())
        .map(|(i, _)| i)
        .unwrap_or(s.len())
}

fn tokenize(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < input.len() {
        let rest = &input[pos..];
        let c = rest.chars().next().unwrap();
        if c.is_whitespace() {
            pos += c.len_utf8();
            continue;
        }
        let fixed = [
            ("<->", Tok::Iff),
            ("->", Tok::Imp),
            ("~", Tok::Not),
            ("&", Tok::And),
            ("|", Tok::Or),
            ("(", Tok::LParen),
            (")", Tok::RParen),
            ("[", Tok::LBrack),
            ("]", Tok::RBrack),
            ("<", Tok::LAngle),
            (">", Tok::RAngle),
        ];
        if let Some((text, tok)) = fixed.iter().find(|(text, _)| rest.starts_with(text)) {
            out.push((pos, tok.clone()));
            pos += text.len();
            continue;
        }
        let modal = [("K_", 'K'), ("U_", 'U'), ("B_", 'B')];
        if let Some((op, kind)) = modal.iter().find(|(op, _)| rest.starts_with(op)) {
            let n = ident_len(&rest[2..]);
            if n == 0 {
                return Err(ParseError {
                    offset: pos + 2,
                    kind: ParseErrorKind::MissingIdentifier(op),
                });
            }
            let agent = rest[2..2 + n].to_string();
            let tok = match kind {
                'K' => Tok::Know(agent),
                'U' => Tok::Unk(agent),
                _ => Tok::Bullet(agent),
            };
            out.push((pos, tok));
            pos += 2 + n;
            continue;
        }
        let n = ident_len(rest);
        if n > 0 {
            let word = &rest[..n];
            let tok = match word {
                "top" => Tok::Top,
                "bot" => Tok::Bot,
                _ => Tok::Ident(word.to_string()),
            };
            out.push((pos, tok));
            pos += n;
            continue;
        }
        return Err(ParseError {
            offset: pos,
            kind: ParseErrorKind::UnknownToken(c.to_string()),
        });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    next: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.next).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.next).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.next += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &'static str) -> ParseError {
        let kind = match self.peek() {
            Some(t) => ParseErrorKind::Unexpected {
                found: t.to_string(),
                expected,
            },
            None => ParseErrorKind::UnexpectedEnd { expected },
        };
        ParseError {
            offset: self.offset(),
            kind,
        }
    }

    fn expect(&mut self, tok: &Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.imp()?;
            lhs = lhs.iff(rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.imp()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error("a formula"));
        };
        match tok {
            Tok::Not => {
                self.next += 1;
                Ok(self.unary()?.not())
            }
            Tok::Know(a) => {
                self.next += 1;
                Ok(Formula::know(&a, self.unary()?))
            }
            Tok::Unk(a) => {
                self.next += 1;
                Ok(Formula::unk(&a, self.unary()?))
            }
            Tok::Bullet(a) => {
                self.next += 1;
                Ok(Formula::bullet(&a, self.unary()?))
            }
            Tok::LBrack => {
                self.next += 1;
                let announced = self.formula()?;
                self.expect(&Tok::RBrack, "`]`")?;
                Ok(Formula::ann(announced, self.unary()?))
            }
            Tok::LAngle => {
                self.next += 1;
                let announced = self.formula()?;
                self.expect(&Tok::RAngle, "`>`")?;
                Ok(Formula::diamond(announced, self.unary()?))
            }
            Tok::LParen => {
                self.next += 1;
                let inner = self.formula()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Top => {
                self.next += 1;
                Ok(Formula::Top)
            }
            Tok::Bot => {
                self.next += 1;
                Ok(Formula::bot())
            }
            Tok::Ident(p) => {
                self.next += 1;
                Ok(Formula::atom(&p))
            }
            _ => Err(self.error("a formula")),
        }
    }
}

/// Parse a formula, expanding derived connectives into primitives.
pub fn parse(input: &str) -> Result<Formula, ParseError> {
    let toks = tokenize(input)?;
    let mut parser = Parser {
        toks,
        next: 0,
        end: input.len(),
    };
    let f = parser.formula()?;
    if parser.peek().is_some() {
        return Err(parser.error("end of input"));
    }
    Ok(f)
}
