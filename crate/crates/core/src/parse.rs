//! Parser for single-copy operator expressions.
//!
//! ```text
//! expr     := ['-'] term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := atom ('^' exponent)?
//! atom     := integer | 'z' | 'm' | 'a' | 'x' | 't' | 'dx' | 'dt' | 'Sx' | 'St'
//!           | '(' expr ')' | '[' expr ',' expr ']'
//! exponent := ['-'] integer | '(' ['-'] integer '/' integer ')'
//! ```
//!
//! Rationals such as `1/2` are integer division. Division is only by
//! invertible elements (nonzero rationals, powers of `z`, shifts). Negative
//! exponents are legal on `z`, `Sx` and `St` only, and `St` alone accepts
//! a half-integer exponent.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::coeff::{Coefficient, Rational};
use crate::error::{Error, Result};
use crate::op::OpElement;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        if ch.is_ascii_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[start..i].parse().expect("ascii digits");
            out.push((start, Tok::Int(n)));
        } else if ch.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^()[],".contains(ch) {
            out.push((i, Tok::Sym(ch)));
            i += 1;
        } else {
            return Err(Error::Syntax { offset: i, message: format!("unexpected character `{ch}`") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum AtomKind {
    /// z, Sx
    Invertible,
    /// St
    HalfInvertible,
    Plain,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { offset: self.offset(), message: message.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<OpElement> {
        let negate = self.eat('-');
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
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

    fn term(&mut self) -> Result<OpElement> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.factor()?;
            } else if self.eat('/') {
                let at = self.offset();
                let divisor = self.factor()?;
                acc = &acc
                    * &invert(&divisor)
                        .ok_or(Error::Syntax { offset: at, message: "division by a non-invertible element".into() })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        let negative = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(if negative { -n } else { n })
            }
            _ => self.err("expected an integer"),
        }
    }

    fn exponent(&mut self) -> Result<Rational> {
        if self.eat('(') {
            let num = self.int()?;
            self.expect('/')?;
            let den = self.int()?;
            if den.is_zero() {
                return self.err("zero denominator");
            }
            self.expect(')')?;
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(self.int()?))
        }
    }

    fn factor(&mut self) -> Result<OpElement> {
        let (base, kind, name) = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let exp_at = self.offset();
        let e = self.exponent()?;
        let illegal = || Error::IllegalExponent { atom: name.clone(), exponent: e.to_string(), offset: exp_at };
        if !e.is_integer() {
            let twice = &e * Rational::from_integer(BigInt::from(2));
            if kind != AtomKind::HalfInvertible || !twice.is_integer() {
                return Err(illegal());
            }
            let h: i32 = twice.to_integer().try_into().map_err(|_| illegal())?;
            return Ok(OpElement::st_half(h));
        }
        let n: i64 = e.to_integer().try_into().map_err(|_| illegal())?;
        if n >= 0 {
            return Ok(base.pow(n as u32));
        }
        if kind == AtomKind::Plain {
            return Err(illegal());
        }
        let inv = invert(&base).ok_or_else(illegal)?;
        Ok(inv.pow((-n) as u32))
    }

    fn atom(&mut self) -> Result<(OpElement, AtomKind, String)> {
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of input");
        };
        let plain = |e: OpElement, s: &str| Ok((e, AtomKind::Plain, s.to_string()));
        match tok {
            Tok::Int(n) => {
                self.pos += 1;
                plain(OpElement::from(Coefficient::constant(Rational::from_integer(n.clone()))), &n.to_string())
            }
            Tok::Ident(id) => {
                self.pos += 1;
                match id.as_str() {
                    "z" => Ok((OpElement::from(Coefficient::z()), AtomKind::Invertible, id)),
                    "m" => plain(OpElement::from(Coefficient::m()), &id),
                    "a" => plain(OpElement::from(Coefficient::a()), &id),
                    "x" => plain(OpElement::x(), &id),
                    "t" => plain(OpElement::t(), &id),
                    "dx" => plain(OpElement::dx(), &id),
                    "dt" => plain(OpElement::dt(), &id),
                    "Sx" => Ok((OpElement::sx(1), AtomKind::Invertible, id)),
                    "St" => Ok((OpElement::st(1), AtomKind::HalfInvertible, id)),
                    _ => {
                        self.pos -= 1;
                        self.err(format!("unknown symbol `{id}`"))
                    }
                }
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                plain(e, "(...)")
            }
            Tok::Sym('[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(']')?;
                plain(a.commutator(&b), "[...]")
            }
            Tok::Sym(c) => self.err(format!("unexpected `{c}`")),
        }
    }
}

/// Inverse of a nonzero rational multiple of `z^k` times a shift monomial.
fn invert(e: &OpElement) -> Option<OpElement> {
    if e.len() != 1 {
        return None;
    }
    let (mono, c) = e.terms().next()?;
    if c.len() != 1 || mono.degree() != 0 {
        return None;
    }
    let (pm, r) = c.terms().next()?;
    if pm.m_exp != 0 || pm.a_exp != 0 || r.is_zero() {
        return None;
    }
    let mut inv_mono = mono.clone();
    for ce in inv_mono.0.iter_mut() {
        ce.sx = -ce.sx;
        ce.st_half = -ce.st_half;
    }
    let coeff = Coefficient::z_pow(-pm.z_exp).scale(&(Rational::one() / r));
    Some(OpElement::monomial(inv_mono, coeff))
}

/// Parses an operator expression into its normal form.
pub fn parse_operator(src: &str) -> Result<OpElement> {
    if src.trim().is_empty() {
        return Err(Error::Syntax { offset: 0, message: "empty expression".into() });
    }
    let mut p = Parser { toks: tokenize(src)?, pos: 0, end: src.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_model, ModelKind};

    #[test]
    fn weyl_bracket_parses_to_one() {
        assert_eq!(parse_operator("[dx, x]").unwrap(), OpElement::one(1));
    }

    #[test]
    fn space_casimir_text() {
        let e = parse_operator("(1/z^2)*(1 - Sx^-1)^2 - 2*m*dt").unwrap();
        assert_eq!(e, build_model(ModelKind::Space, None).casimir());
    }

    #[test]
    fn time_casimir_text() {
        let e = parse_operator("dx^2 - m/z*(1 - St^-1)").unwrap();
        assert_eq!(e, build_model(ModelKind::Time, None).casimir());
    }

    #[test]
    fn dangling_operator_reports_offset() {
        assert_eq!(parse_operator("x +"), Err(Error::Syntax { offset: 3, message: "unexpected end of input".into() }));
    }

    #[test]
    fn negative_power_on_x_is_illegal() {
        assert!(matches!(parse_operator("x^-1"), Err(Error::IllegalExponent { .. })));
        assert!(matches!(parse_operator("m^-2"), Err(Error::IllegalExponent { .. })));
        assert!(matches!(parse_operator("Sx^(1/2)"), Err(Error::IllegalExponent { .. })));
    }

    #[test]
    fn half_time_shift() {
        let e = parse_operator("St^(1/2)*St^(1/2)").unwrap();
        assert_eq!(e, OpElement::st(1));
        assert_eq!(parse_operator("St^(-1/2)").unwrap().to_string(), "St^(-1/2)");
    }

    #[test]
    fn division_by_non_invertible_fails() {
        assert!(matches!(parse_operator("1/x"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_operator("1/(z + 1)"), Err(Error::Syntax { .. })));
        assert!(parse_operator("x/Sx").is_ok());
    }

    #[test]
    fn unknown_symbol() {
        assert!(matches!(parse_operator("x*y"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_operator("   "), Err(Error::Syntax { offset: 0, .. })));
    }

    #[test]
    fn rendering_reparses() {
        let src = "(1/2*m + a)*x^2*Sx - 3/4*z^-2*t*dt*St^-1 + [x*dx, Sx]";
        let e = parse_operator(src).unwrap();
        assert_eq!(parse_operator(&e.to_string()).unwrap(), e);
    }
}
