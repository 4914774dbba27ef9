//! Expression grammar for Laurent polynomials.
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary ("*" unary)*
//! unary   := "-" unary | power
//! power   := atom ("^" exponent)?
//! exponent:= "-"? digits | "(" "-"? digits ")"
//! atom    := digits | ident | "(" expr ")"
//! ident   := letter (letter | digit | "_")* ("[" int ("," int)* "]")?
//! ```
//!
//! Whitespace is ignored between tokens. An identifier with a bracketed
//! suffix such as `y[-1, 0]` names the variable `y[-1,0]`. A negative
//! exponent is accepted only when the base is a unit (a signed monomial in
//! exchange variables).

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{AlgebraError, ParseError};
use crate::poly::LaurentPoly;
use crate::space::VarSpace;

pub fn parse_poly(text: &str, space: &Arc<VarSpace>) -> Result<LaurentPoly, AlgebraError> {
    let mut p = Parser {
        src: text,
        pos: 0,
        space,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

/// Names of all identifiers in `text`, normalized as the parser would
/// normalize them, in order of first appearance. Useful for building a
/// space before parsing.
pub fn identifiers(text: &str) -> Result<Vec<String>, AlgebraError> {
    let space = Arc::new(VarSpace::new(Vec::new())?);
    let mut p = Parser {
        src: text,
        pos: 0,
        space: &space,
    };
    let mut out: Vec<String> = Vec::new();
    let mut prev_word = false;
    while let Some(c) = p.peek() {
        if !prev_word && (c.is_alphabetic() || c == '_') {
            let name = p.ident()?;
            if !out.contains(&name) {
                out.push(name);
            }
            prev_word = false;
        } else {
            prev_word = c.is_alphanumeric() || c == '_';
            p.bump();
        }
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    space: &'a Arc<VarSpace>,
}

impl Parser<'_> {
    fn error(&self, msg: impl Into<String>) -> AlgebraError {
        ParseError::new(self.pos, msg).into()
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<LaurentPoly, AlgebraError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly, AlgebraError> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<LaurentPoly, AlgebraError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<LaurentPoly, AlgebraError> {
        let base_pos = {
            self.skip_ws();
            self.pos
        };
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.exponent()?;
        if e >= 0 {
            return Ok(base.pow(e as u32));
        }
        match base.as_unit() {
            Some(u) => Ok(LaurentPoly::from_unit(self.space, &u.inverse()).pow(e.unsigned_abs())),
            None => Err(ParseError::new(
                base_pos,
                "negative exponent applied to a non-invertible base",
            )
            .into()),
        }
    }

    fn exponent(&mut self) -> Result<i32, AlgebraError> {
        self.skip_ws();
        let paren = self.eat('(');
        self.skip_ws();
        let neg = self.eat('-');
        self.skip_ws();
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.error("expected an integer exponent"));
        }
        let v: i32 = digits
            .parse()
            .map_err(|_| self.error("exponent out of range"))?;
        if paren && !self.eat(')') {
            return Err(self.error("expected `)`"));
        }
        Ok(if neg { -v } else { v })
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<LaurentPoly, AlgebraError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.bump();
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let n: BigInt = d.parse().expect("ascii digits");
                Ok(LaurentPoly::constant(self.space, n))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let name = self.ident()?;
                match self.space.index_of(&name) {
                    Some(v) => Ok(LaurentPoly::var(self.space, v)),
                    None => Err(AlgebraError::UnknownVariable(name)),
                }
            }
            Some(_) => Err(self.error("expected a number, variable or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn ident(&mut self) -> Result<String, AlgebraError> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_alphanumeric() || c == '_')
        {
            self.bump();
        }
        let mut name = self.src[start..self.pos].to_string();
        if self.peek() == Some('[') {
            self.bump();
            let mut parts = Vec::new();
            loop {
                self.skip_ws();
                let neg = self.peek() == Some('-');
                if neg {
                    self.bump();
                }
                let d = self.digits().to_string();
                if d.is_empty() {
                    return Err(self.error("expected an integer index"));
                }
                let v: i64 = d.parse().map_err(|_| self.error("index out of range"))?;
                parts.push(if neg { -v } else { v }.to_string());
                self.skip_ws();
                match self.bump() {
                    Some(',') => continue,
                    Some(']') => break,
                    _ => return Err(self.error("expected `,` or `]`")),
                }
            }
            name.push('[');
            name.push_str(&parts.join(","));
            name.push(']');
        }
        Ok(name)
    }
}
