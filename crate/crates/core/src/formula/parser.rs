//! Hand-rolled lexer and recursive-descent parsers for the textual
//! grammar. Precedence: unary > U/S > & > | > -> / <->, with U, S and
//! -> right-associative.

use crate::error::Error;
use crate::formula::{Atom, Dialect, FiniteFormula, PlusFormula, Quantifier};

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Op(&'static str), // uppercase temporal operators and keywords
    Bang,
    Amp,
    Pipe,
    LParen,
    RParen,
    Arrow,
    DArrow,
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

const WORD_OPS: &[&str] = &[
    "X", "WX", "F", "G", "U", "Y", "O", "H", "S", "true", "false", "last", "first", "safe",
    "guar", "recu", "pers",
];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, Error> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '!' => {
                toks.push((i, Tok::Bang));
                i += 1;
            }
            '&' => {
                toks.push((i, Tok::Amp));
                i += 1;
            }
            '|' => {
                toks.push((i, Tok::Pipe));
                i += 1;
            }
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((i, Tok::Arrow));
                    i += 2;
                } else {
                    return Err(Error::parse(i, "expected '->'"));
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    toks.push((i, Tok::DArrow));
                    i += 3;
                } else {
                    return Err(Error::parse(i, "expected '<->'"));
                }
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = &text[start..i];
                if let Some(op) = WORD_OPS.iter().find(|&&w| w == word) {
                    toks.push((start, Tok::Op(op)));
                } else if word.starts_with(|c: char| c.is_ascii_lowercase()) {
                    toks.push((start, Tok::Ident(word.to_string())));
                } else {
                    return Err(Error::parse(start, format!("unknown token {word:?}")));
                }
            }
            _ => return Err(Error::parse(i, format!("unexpected character {c:?}"))),
        }
    }
    Ok(toks)
}

impl Lexer {
    fn new(text: &str) -> Result<Lexer, Error> {
        Ok(Lexer { toks: lex(text)?, pos: 0, end: text.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), Error> {
        let pos = self.here();
        match self.next() {
            Some(t) if t == tok => Ok(()),
            _ => Err(Error::parse(pos, format!("expected {what}"))),
        }
    }
}

fn wrong_dialect(pos: usize, op: &str, dialect: Dialect) -> Error {
    Error::parse(pos, format!("operator {op:?} is not part of the {dialect} dialect"))
}

struct FiniteParser {
    lx: Lexer,
    dialect: Dialect,
}

impl FiniteParser {
    fn iff(&mut self) -> Result<FiniteFormula, Error> {
        let lhs = self.imp()?;
        if self.lx.peek() == Some(&Tok::DArrow) {
            self.lx.next();
            let rhs = self.iff()?;
            return Ok(FiniteFormula::Iff(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<FiniteFormula, Error> {
        let lhs = self.or()?;
        if self.lx.peek() == Some(&Tok::Arrow) {
            self.lx.next();
            let rhs = self.imp()?;
            return Ok(FiniteFormula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<FiniteFormula, Error> {
        let mut lhs = self.and()?;
        while self.lx.peek() == Some(&Tok::Pipe) {
            self.lx.next();
            let rhs = self.and()?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<FiniteFormula, Error> {
        let mut lhs = self.until()?;
        while self.lx.peek() == Some(&Tok::Amp) {
            self.lx.next();
            let rhs = self.until()?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<FiniteFormula, Error> {
        let lhs = self.unary()?;
        match self.lx.peek() {
            Some(&Tok::Op(op @ ("U" | "S"))) => {
                let pos = self.lx.here();
                let expected = if op == "U" { Dialect::Ltlf } else { Dialect::Ppltl };
                if self.dialect != expected {
                    return Err(wrong_dialect(pos, op, self.dialect));
                }
                self.lx.next();
                let rhs = self.until()?; // right-associative
                Ok(if op == "U" {
                    FiniteFormula::Until(Box::new(lhs), Box::new(rhs))
                } else {
                    FiniteFormula::Since(Box::new(lhs), Box::new(rhs))
                })
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<FiniteFormula, Error> {
        let pos = self.lx.here();
        match self.lx.peek() {
            Some(Tok::Bang) => {
                self.lx.next();
                Ok(self.unary()?.not())
            }
            Some(&Tok::Op(op @ ("X" | "WX" | "F" | "G" | "Y" | "O" | "H"))) => {
                let expected = match op {
                    "X" | "WX" | "F" | "G" => Dialect::Ltlf,
                    _ => Dialect::Ppltl,
                };
                if self.dialect != expected {
                    return Err(wrong_dialect(pos, op, self.dialect));
                }
                self.lx.next();
                let inner = Box::new(self.unary()?);
                Ok(match op {
                    "X" => FiniteFormula::Next(inner),
                    "WX" => FiniteFormula::WeakNext(inner),
                    "F" => FiniteFormula::Eventually(inner),
                    "G" => FiniteFormula::Always(inner),
                    "Y" => FiniteFormula::Yesterday(inner),
                    "O" => FiniteFormula::Once(inner),
                    _ => FiniteFormula::Historically(inner),
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<FiniteFormula, Error> {
        let pos = self.lx.here();
        match self.lx.next() {
            Some(Tok::Ident(name)) => Ok(FiniteFormula::Atom(Atom::new(&name)?)),
            Some(Tok::Op("true")) => Ok(FiniteFormula::True),
            Some(Tok::Op("false")) => Ok(FiniteFormula::False),
            Some(Tok::Op("last")) => {
                if self.dialect != Dialect::Ltlf {
                    return Err(wrong_dialect(pos, "last", self.dialect));
                }
                Ok(FiniteFormula::Last)
            }
            Some(Tok::Op("first")) => {
                if self.dialect != Dialect::Ppltl {
                    return Err(wrong_dialect(pos, "first", self.dialect));
                }
                Ok(FiniteFormula::First)
            }
            Some(Tok::LParen) => {
                let inner = self.iff()?;
                self.lx.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(t) => Err(Error::parse(pos, format!("unexpected token {t:?}"))),
            None => Err(Error::parse(pos, "unexpected end of input")),
        }
    }
}

/// Parse a finite-trace formula in the given dialect.
pub fn parse_finite(text: &str, dialect: Dialect) -> Result<FiniteFormula, Error> {
    let mut p = FiniteParser { lx: Lexer::new(text)?, dialect };
    if p.lx.peek().is_none() {
        return Err(Error::parse(0, "empty formula"));
    }
    let phi = p.iff()?;
    if let Some(t) = p.lx.peek() {
        return Err(Error::parse(p.lx.here(), format!("trailing input at {t:?}")));
    }
    Ok(phi)
}

struct PlusParser {
    lx: Lexer,
    dialect: Dialect,
}

impl PlusParser {
    fn or(&mut self) -> Result<PlusFormula, Error> {
        let mut lhs = self.and()?;
        while self.lx.peek() == Some(&Tok::Pipe) {
            self.lx.next();
            let rhs = self.and()?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<PlusFormula, Error> {
        let mut lhs = self.unary()?;
        while self.lx.peek() == Some(&Tok::Amp) {
            self.lx.next();
            let rhs = self.unary()?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<PlusFormula, Error> {
        if self.lx.peek() == Some(&Tok::Bang) {
            self.lx.next();
            return Ok(self.unary()?.not());
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<PlusFormula, Error> {
        let pos = self.lx.here();
        match self.lx.next() {
            Some(Tok::Op(kw @ ("safe" | "guar" | "recu" | "pers"))) => {
                let q = match kw {
                    "safe" => Quantifier::Safe,
                    "guar" => Quantifier::Guar,
                    "recu" => Quantifier::Recu,
                    _ => Quantifier::Pers,
                };
                self.lx.expect(Tok::LParen, "'(' after quantifier")?;
                let start = self.lx.pos;
                // scan to the matching ')'
                let mut depth = 1usize;
                while depth > 0 {
                    match self.lx.next() {
                        Some(Tok::LParen) => depth += 1,
                        Some(Tok::RParen) => depth -= 1,
                        Some(_) => {}
                        None => {
                            return Err(Error::parse(self.lx.here(), "unbalanced parentheses"))
                        }
                    }
                }
                let inner_toks = self.lx.toks[start..self.lx.pos - 1].to_vec();
                let inner_end = self.lx.toks[self.lx.pos - 1].0;
                let mut fp = FiniteParser {
                    lx: Lexer { toks: inner_toks, pos: 0, end: inner_end },
                    dialect: self.dialect,
                };
                if fp.lx.peek().is_none() {
                    return Err(Error::parse(inner_end, "empty quantified formula"));
                }
                let phi = fp.iff()?;
                if fp.lx.peek().is_some() {
                    return Err(Error::parse(fp.lx.here(), "trailing input in quantified formula"));
                }
                Ok(PlusFormula::Quantified(q, phi))
            }
            Some(Tok::Ident(name)) => Ok(self.prop_sugar(FiniteFormula::Atom(Atom::new(&name)?))),
            Some(Tok::Op("true")) => Ok(self.prop_sugar(FiniteFormula::True)),
            Some(Tok::Op("false")) => Ok(self.prop_sugar(FiniteFormula::False)),
            Some(Tok::LParen) => {
                let inner = self.or()?;
                self.lx.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(t) => Err(Error::parse(pos, format!("unexpected token {t:?}"))),
            None => Err(Error::parse(pos, "unexpected end of input")),
        }
    }

    // a bare propositional formula at the plus level constrains the first
    // position of the trace
    fn prop_sugar(&self, phi: FiniteFormula) -> PlusFormula {
        match self.dialect {
            Dialect::Ltlf => PlusFormula::Quantified(Quantifier::Safe, phi),
            Dialect::Ppltl => PlusFormula::Quantified(
                Quantifier::Safe,
                FiniteFormula::Historically(Box::new(FiniteFormula::Implies(
                    Box::new(FiniteFormula::First),
                    Box::new(phi),
                ))),
            ),
        }
    }
}

/// Parse a plus-level formula in the given dialect.
pub fn parse_plus(text: &str, dialect: Dialect) -> Result<PlusFormula, Error> {
    let mut p = PlusParser { lx: Lexer::new(text)?, dialect };
    if p.lx.peek().is_none() {
        return Err(Error::parse(0, "empty formula"));
    }
    let psi = p.or()?;
    if let Some(t) = p.lx.peek() {
        return Err(Error::parse(p.lx.here(), format!("trailing input at {t:?}")));
    }
    Ok(psi)
}
