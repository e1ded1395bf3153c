//! Parser for ring expressions.
//!
//! ```text
//! full   := expr [ 'mod' 'Fil(' int ')' ]
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | 'L' ['^' int] | int | 'P^' int | 'GL(' int ')'
//!         | 'inv(' expr ')' | 'B(' expr ')' | name | '(' expr ')'
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{class_b_subgroup, class_gl, k_invert_unit, GeneratorSymbol, KElement, KError};

pub(super) const RESERVED: &[&str] = &["L", "P", "GL", "inv", "B", "mod", "Fil"];

/// Named symbols available to the parser.
#[derive(Debug, Clone, Default)]
pub struct SymbolTable {
    symbols: BTreeMap<String, Arc<GeneratorSymbol>>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, symbol: Arc<GeneratorSymbol>) {
        self.symbols.insert(symbol.name().to_string(), symbol);
    }

    pub fn get(&self, name: &str) -> Option<&Arc<GeneratorSymbol>> {
        self.symbols.get(name)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i128),
    Ident(String),
    Punct(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, KError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let v = text[start..i]
                .parse()
                .map_err(|_| KError::OutOfRange(text[start..i].to_string()))?;
            out.push((start, Tok::Int(v)));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if b"+-*^()".contains(&c) {
            out.push((i, Tok::Punct(c as char)));
            i += 1;
        } else {
            let ch = text[i..].chars().next().expect("in bounds");
            return Err(KError::Syntax {
                position: i,
                message: format!("unexpected character `{ch}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    symbols: &'a SymbolTable,
    precision: Option<i64>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn error(&self, message: impl Into<String>) -> KError {
        KError::Syntax {
            position: self.offset(),
            message: message.into(),
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, c: char) -> Result<(), KError> {
        if self.eat_punct(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn signed_int(&mut self) -> Result<i64, KError> {
        let negative = self.eat_punct('-');
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                let v = i64::try_from(v).map_err(|_| KError::OutOfRange(v.to_string()))?;
                Ok(if negative { -v } else { v })
            }
            _ => Err(self.error("expected an integer")),
        }
    }

    fn unsigned(&mut self) -> Result<u32, KError> {
        let at = self.offset();
        let v = self.signed_int()?;
        u32::try_from(v).map_err(|_| KError::Syntax {
            position: at,
            message: format!("expected a nonnegative integer, got {v}"),
        })
    }

    fn full(&mut self) -> Result<(KElement, Option<i64>), KError> {
        let x = self.expr()?;
        let mut annotation = None;
        if self.peek() == Some(&Tok::Ident("mod".into())) {
            self.pos += 1;
            if self.peek() != Some(&Tok::Ident("Fil".into())) {
                return Err(self.error("expected `Fil`"));
            }
            self.pos += 1;
            self.expect_punct('(')?;
            annotation = Some(self.signed_int()?);
            self.expect_punct(')')?;
        }
        if self.pos != self.toks.len() {
            return Err(self.error("unexpected trailing input"));
        }
        Ok((x, annotation))
    }

    fn expr(&mut self) -> Result<KElement, KError> {
        let mut acc = self.term()?;
        loop {
            if self.eat_punct('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat_punct('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<KElement, KError> {
        let mut acc = self.factor()?;
        while self.eat_punct('*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn inner_exact(&mut self) -> Result<KElement, KError> {
        self.expect_punct('(')?;
        let x = self.expr()?;
        self.expect_punct(')')?;
        Ok(x)
    }

    fn factor(&mut self) -> Result<KElement, KError> {
        if self.eat_punct('-') {
            return Ok(self.factor()?.neg());
        }
        if self.eat_punct('(') {
            let x = self.expr()?;
            self.expect_punct(')')?;
            return Ok(x);
        }
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(KElement::integer(v))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "L" => {
                        let e = if self.eat_punct('^') {
                            self.signed_int()?
                        } else {
                            1
                        };
                        Ok(KElement::lefschetz(e))
                    }
                    "P" => {
                        self.expect_punct('^')?;
                        Ok(KElement::projective_space(self.unsigned()?))
                    }
                    "GL" => {
                        self.expect_punct('(')?;
                        let at = self.offset();
                        let n = self.unsigned()?;
                        if n == 0 {
                            return Err(KError::Syntax {
                                position: at,
                                message: "GL(n) needs n >= 1".into(),
                            });
                        }
                        self.expect_punct(')')?;
                        Ok(class_gl(n))
                    }
                    "inv" | "B" => {
                        let at = self.pos;
                        let x = self.inner_exact()?;
                        let tau = self.precision.ok_or(KError::NeedsPrecision)?;
                        if !x.is_exact() {
                            self.pos = at;
                            return Err(self.error(format!("argument of {name} must be exact")));
                        }
                        if name == "inv" {
                            k_invert_unit(&x, tau)
                        } else {
                            class_b_subgroup(&x, None, tau)
                        }
                    }
                    "mod" | "Fil" => {
                        self.pos -= 1;
                        Err(self.error(format!("unexpected `{name}`")))
                    }
                    _ => match self.symbols.get(&name) {
                        Some(s) => Ok(KElement::symbol(s)),
                        None => Err(KError::UnknownSymbol(name)),
                    },
                }
            }
            Some(Tok::Punct(c)) => Err(self.error(format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses with no named symbols.
pub fn parse_kring_expr(text: &str, precision: Option<i64>) -> Result<KElement, KError> {
    parse_kring_expr_with(text, precision, &SymbolTable::new())
}

/// Parses and evaluates an expression. A trailing `mod Fil(t)` overrides `precision`;
/// the result is reduced modulo the effective precision when there is one.
pub fn parse_kring_expr_with(
    text: &str,
    precision: Option<i64>,
    symbols: &SymbolTable,
) -> Result<KElement, KError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(KError::Syntax {
            position: 0,
            message: "empty expression".into(),
        });
    }
    // the annotation must be known before inv/B are expanded
    let annotation = find_annotation(&toks);
    let precision = annotation.or(precision);
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
        symbols,
        precision,
    };
    let (x, _) = parser.full()?;
    Ok(match precision {
        Some(t) => x.truncate(t),
        None => x,
    })
}

fn find_annotation(toks: &[(usize, Tok)]) -> Option<i64> {
    let at = toks
        .iter()
        .position(|(_, t)| *t == Tok::Ident("mod".into()))?;
    match &toks[at + 1..] {
        [(_, Tok::Ident(f)), (_, Tok::Punct('(')), (_, Tok::Int(v)), (_, Tok::Punct(')'))]
            if f == "Fil" =>
        {
            i64::try_from(*v).ok()
        }
        [(_, Tok::Ident(f)), (_, Tok::Punct('(')), (_, Tok::Punct('-')), (_, Tok::Int(v)), (_, Tok::Punct(')'))]
            if f == "Fil" =>
        {
            i64::try_from(*v).ok().map(|v| -v)
        }
        _ => None,
    }
}
