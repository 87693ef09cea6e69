//! Polynomial literal parser.
//!
//! Grammar (whitespace ignored, `*` optional between factors):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (['*'|'/'] power)*
//! power  := atom ['^' exp]
//! atom   := integer | 'x' | 't' | '(' expr ')'
//! ```
//!
//! Exponents on `x` and on parenthesized groups are non-negative integers.
//! Exponents on `t` may be negative or rational; `t^-1/2` reads greedily as
//! `t^(-1/2)`, and `t^(a/b)` is accepted as well. Division is only allowed by
//! a nonzero constant.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElem};
use crate::poly::Poly;
use crate::valgroup::Rat;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigUint),
    X,
    T,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    digits.push(d);
                    chars.next();
                }
                let n = digits.parse::<BigUint>().map_err(|e| Error::parse(e.to_string()))?;
                out.push(Tok::Num(n));
            }
            _ => {
                chars.next();
                out.push(match c {
                    'x' => Tok::X,
                    't' => Tok::T,
                    '+' => Tok::Plus,
                    '-' | '\u{2212}' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    other => return Err(Error::parse(format!("unexpected character '{other}'"))),
                });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    field: FieldDescriptor,
    toks: &'a [Tok],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(Error::parse(format!("expected {t:?} at token {}", self.pos)))
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let negate = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        let first = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            if self.eat(&Tok::Plus) {
                acc = acc.add(&self.term()?)?;
            } else if self.eat(&Tok::Minus) {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_) | Tok::X | Tok::T | Tok::LParen))
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = acc.mul(&self.power()?)?;
            } else if self.eat(&Tok::Slash) {
                let d = self.power()?;
                if !d.is_constant() {
                    return Err(Error::parse("division by a non-constant polynomial"));
                }
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                acc = acc.scale(&d.coeff(0).inv()?)?;
            } else if self.starts_atom() {
                acc = acc.mul(&self.power()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unsigned(&mut self) -> Result<BigUint> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => Err(Error::parse(format!("expected integer at token {}", self.pos))),
        }
    }

    fn small(n: &BigUint) -> Result<i64> {
        i64::try_from(n).map_err(|_| Error::parse("exponent too large"))
    }

    fn nat_exponent(&mut self) -> Result<u32> {
        let paren = self.eat(&Tok::LParen);
        let n = self.unsigned()?;
        if paren {
            self.expect(&Tok::RParen)?;
        }
        u32::try_from(&n).map_err(|_| Error::parse("exponent too large"))
    }

    fn signed_rational(&mut self) -> Result<Rat> {
        let neg = self.eat(&Tok::Minus);
        let num = Self::small(&self.unsigned()?)?;
        let den = if self.eat(&Tok::Slash) {
            Self::small(&self.unsigned()?)?
        } else {
            1
        };
        if den == 0 {
            return Err(Error::parse("zero denominator in exponent"));
        }
        let r = Rat::new(num, den);
        Ok(if neg { -r } else { r })
    }

    fn t_exponent(&mut self) -> Result<Rat> {
        if self.eat(&Tok::LParen) {
            let r = self.signed_rational()?;
            self.expect(&Tok::RParen)?;
            Ok(r)
        } else {
            self.signed_rational()
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let field = self.field;
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let c = Poly::constant(FieldElem::from_biguint(field, &n));
                if self.eat(&Tok::Caret) {
                    return c.pow(self.nat_exponent()?);
                }
                Ok(c)
            }
            Some(Tok::X) => {
                self.pos += 1;
                let k = if self.eat(&Tok::Caret) { self.nat_exponent()? } else { 1 };
                Ok(Poly::monomial(FieldElem::one(field), k as usize))
            }
            Some(Tok::T) => {
                self.pos += 1;
                let e = if self.eat(&Tok::Caret) { self.t_exponent()? } else { Rat::one() };
                if !field.has_t() {
                    return Err(Error::parse(format!("field {field} has no variable t")));
                }
                Ok(Poly::constant(FieldElem::t_pow(field, e)?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(&Tok::RParen)?;
                if self.eat(&Tok::Caret) {
                    return inner.pow(self.nat_exponent()?);
                }
                Ok(inner)
            }
            other => Err(Error::parse(format!(
                "unexpected {} at token {}",
                other.map_or("end of input".to_string(), |t| format!("{t:?}")),
                self.pos
            ))),
        }
    }
}

/// Parses a polynomial literal such as `x^2 + x + t^-1` over `field`.
pub fn parse_poly(field: FieldDescriptor, s: &str) -> Result<Poly> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::parse("empty polynomial literal"));
    }
    let mut p = Parser {
        field,
        toks: &toks,
        pos: 0,
    };
    let out = p.expr()?;
    if p.pos != toks.len() {
        return Err(Error::parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}

/// Parses a constant literal into a field element.
pub fn parse_elem(field: FieldDescriptor, s: &str) -> Result<FieldElem> {
    let p = parse_poly(field, s)?;
    if !p.is_constant() {
        return Err(Error::parse(format!("'{s}' is not a constant")));
    }
    Ok(if p.is_zero() { FieldElem::zero(field) } else { p.coeff(0) })
}
