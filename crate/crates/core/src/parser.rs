//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/')? unary)*      juxtaposition multiplies
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | integer '/' integer | var | 'zeta(' integer ')' | '(' expr ')'
//! ```

use num_bigint::BigInt;

use crate::bivariate::BivariatePoly;
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::ring::Rational;
use crate::series::PuiseuxSeries;

const MAX_EXPONENT: u32 = 4096;
const MAX_CONDUCTOR: u32 = 100_000;

/// Parses a polynomial in `x` and `y`.
pub fn parse_polynomial(src: &str) -> Result<BivariatePoly> {
    Parser::new(src, &["x", "y"]).parse()
}

/// Parses a polynomial in the single variable `var` into an exact series.
pub fn parse_univariate(src: &str, var: &str) -> Result<PuiseuxSeries> {
    let p = Parser::new(src, &[var]).parse()?;
    Ok(PuiseuxSeries::exact(
        p.terms().iter().map(|(&(i, _), c)| (Rational::from_integer(i.into()), c.clone())).collect(),
    ))
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    vars: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, vars: &'a [&'a str]) -> Self {
        Parser { src, pos: 0, vars }
    }

    fn parse(mut self) -> Result<BivariatePoly> {
        self.skip_ws();
        if self.at_end() {
            return Err(self.error("empty expression"));
        }
        let p = self.expr()?;
        self.skip_ws();
        if !self.at_end() {
            return Err(self.error(&format!("unexpected `{}`", self.peek().unwrap())));
        }
        Ok(p)
    }

    fn error(&self, message: &str) -> Error {
        Error::Syntax { offset: self.pos, message: message.to_string() }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<BivariatePoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<BivariatePoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let at = self.pos;
                let d = self.unary()?;
                acc = acc.scale(&constant_inverse(&d).map_err(|message| Error::Syntax { offset: at, message })?);
            } else {
                self.skip_ws();
                match self.peek() {
                    Some(c) if c.is_ascii_alphanumeric() || c == '(' => acc = acc.mul(&self.power()?),
                    _ => return Ok(acc),
                }
            }
        }
    }

    fn unary(&mut self) -> Result<BivariatePoly> {
        if self.eat('-') {
            Ok(self.unary()?.neg())
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<BivariatePoly> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let e = self.small_integer()?;
            if e > MAX_EXPONENT {
                return Err(self.error(&format!("exponent {e} exceeds {MAX_EXPONENT}")));
            }
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        Ok(self.src[start..self.pos].parse().expect("digits parse"))
    }

    fn small_integer(&mut self) -> Result<u32> {
        let start = self.pos;
        let n = self.integer()?;
        u32::try_from(n).map_err(|_| Error::Syntax { offset: start, message: "integer too large".into() })
    }

    fn atom(&mut self) -> Result<BivariatePoly> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(BivariatePoly::constant(CycloNumber::rational(Rational::from_integer(n))))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
                    self.pos += self.peek().unwrap().len_utf8();
                }
                let name = &self.src[start..self.pos];
                if let Some(idx) = self.vars.iter().position(|v| *v == name) {
                    let one = CycloNumber::from_int(1);
                    return Ok(if idx == 0 {
                        BivariatePoly::monomial(one, 1, 0)
                    } else {
                        BivariatePoly::monomial(one, 0, 1)
                    });
                }
                if name == "zeta" {
                    self.expect('(')?;
                    let n_at = self.pos;
                    let n = self.small_integer()?;
                    if n == 0 || n > MAX_CONDUCTOR {
                        return Err(Error::Syntax {
                            offset: n_at,
                            message: format!("conductor must be in 1..={MAX_CONDUCTOR}"),
                        });
                    }
                    self.expect(')')?;
                    return Ok(BivariatePoly::constant(CycloNumber::root_of_unity(n, 1)));
                }
                Err(Error::UnknownIdentifier { name: name.to_string(), offset: start })
            }
            Some(c) => Err(self.error(&format!("unexpected `{c}`"))),
        }
    }
}

fn constant_inverse(d: &BivariatePoly) -> std::result::Result<CycloNumber, String> {
    if d.terms().keys().any(|&k| k != (0, 0)) {
        return Err("division by a non-constant".into());
    }
    d.constant_term().inv().map_err(|_| "division by zero".to_string())
}
