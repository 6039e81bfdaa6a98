//! Recursive-descent parser for the jet expression language.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' uint)?
//! atom     := rational | name | 'D(' name ',' '[' uint (',' uint)* ']' ')'
//!           | 'inv(' expr ')' | '(' expr ')' | '-' atom
//! rational := int ('/' uint)?
//! ```
//!
//! Whitespace is insignificant. Positions in errors are byte offsets.

use num_bigint::BigInt;

use super::ast::{JetExpr, Names};
use crate::error::{Error, Result};
use crate::series::{Coeff, MIndex};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

impl Lexer {
    fn new(text: &str) -> Result<Self> {
        let mut toks = Vec::new();
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (pos, c) = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().map(|(_, c)| c).collect();
                toks.push((Tok::Int(digits.parse().expect("ascii digits")), pos));
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                toks.push((Tok::Name(chars[start..i].iter().map(|(_, c)| c).collect()), pos));
            } else if "+-*^/()[],".contains(c) {
                toks.push((Tok::Sym(c), pos));
                i += 1;
            } else {
                return Err(Error::Syntax { pos, msg: format!("unexpected character `{c}`") });
            }
        }
        toks.push((Tok::End, text.len()));
        Ok(Lexer { toks })
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    names: &'a Names,
}

/// Parse one expression against the given variable and component names.
pub fn parse_expr(text: &str, names: &Names) -> Result<JetExpr> {
    let mut p = Parser { toks: Lexer::new(text)?.toks, at: 0, names };
    let e = p.expr()?;
    if p.peek() != &Tok::End {
        return Err(p.unexpected("end of input"));
    }
    Ok(e.normalize())
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> Error {
        let found = match self.peek() {
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Name(n) => format!("name `{n}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".to_string(),
        };
        Error::Syntax { pos: self.pos(), msg: format!("expected {wanted}, found {found}") }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == &Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected("an unsigned integer")),
        }
    }

    fn small_uint(&mut self) -> Result<u32> {
        let pos = self.pos();
        let n = self.uint()?;
        u32::try_from(&n).map_err(|_| Error::Syntax { pos, msg: format!("integer {n} is too large") })
    }

    fn expr(&mut self) -> Result<JetExpr> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                terms.push(JetExpr::Neg(Box::new(self.term()?)));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { JetExpr::Add(terms) })
    }

    fn term(&mut self) -> Result<JetExpr> {
        let mut factors = vec![self.factor()?];
        while self.eat('*') {
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { JetExpr::Mul(factors) })
    }

    fn factor(&mut self) -> Result<JetExpr> {
        let base = self.atom()?;
        if self.eat('^') {
            let n = self.small_uint()?;
            return Ok(JetExpr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<JetExpr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                let d = if self.eat('/') {
                    let dpos = self.pos();
                    let d = self.uint()?;
                    if d == BigInt::from(0) {
                        return Err(Error::Syntax { pos: dpos, msg: "zero denominator".into() });
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                Ok(JetExpr::Const(Coeff::new(n, d)))
            }
            Tok::Sym('-') => {
                self.bump();
                Ok(JetExpr::Neg(Box::new(self.atom()?)))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Name(name) => {
                self.bump();
                if self.peek() == &Tok::Sym('(') && (name == "inv" || name == "D") {
                    self.bump();
                    return if name == "inv" {
                        let e = self.expr()?;
                        self.expect(')')?;
                        Ok(JetExpr::Inv(Box::new(e)))
                    } else {
                        self.derivative(pos)
                    };
                }
                self.name_ref(&name, pos)
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn name_ref(&self, name: &str, pos: usize) -> Result<JetExpr> {
        if let Some(i) = self.names.space_vars.iter().position(|n| n == name) {
            return Ok(JetExpr::SpaceVar(i));
        }
        if let Some(l) = self.names.components.iter().position(|n| n == name) {
            return Ok(JetExpr::Jet { component: l, index: MIndex::zero(self.names.nvars()) });
        }
        Err(Error::UnknownName { name: name.to_string(), pos })
    }

    /// After `D(`: `name ',' '[' uint (',' uint)* ']' ')'`.
    fn derivative(&mut self, start: usize) -> Result<JetExpr> {
        let npos = self.pos();
        let name = match self.bump() {
            Tok::Name(n) => n,
            _ => {
                self.at -= 1;
                return Err(self.unexpected("a component name"));
            }
        };
        let component = self
            .names
            .components
            .iter()
            .position(|n| *n == name)
            .ok_or(Error::UnknownName { name, pos: npos })?;
        self.expect(',')?;
        self.expect('[')?;
        let mut exps = vec![self.small_uint()?];
        while self.eat(',') {
            exps.push(self.small_uint()?);
        }
        self.expect(']')?;
        self.expect(')')?;
        if exps.len() != self.names.nvars() {
            return Err(Error::JetArity { pos: start, expected: self.names.nvars(), found: exps.len() });
        }
        Ok(JetExpr::Jet { component, index: MIndex::new(exps) })
    }
}
