use num_bigint::BigInt;
use num_traits::Zero;

use super::{BivariatePoly, Rational};

/// Exponents above this are rejected to keep expansion bounded.
pub const MAX_EXPONENT: u32 = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnexpectedEnd,
    UnknownVariable(char),
    BadExponent,
    DivisionByZero,
    NonConstantDivisor,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message} at byte {offset}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
    pub message: String,
}

/// Parses a polynomial in `x`, `y`.
///
/// ```text
/// expr   := ('+'|'-')? term (('+'|'-') term)*
/// term   := factor (('*'|'/') factor)*
/// factor := base ('^' uint)?
/// base   := 'x' | 'y' | number | '(' expr ')'
/// number := uint ('/' uint)? | uint '.' uint
/// ```
///
/// Division is only accepted by a nonzero constant. Decimals are read
/// exactly (`0.5` is `1/2`). There is no implicit multiplication.
pub fn parse_poly(expr: &str) -> Result<BivariatePoly, ParseError> {
    let mut p = Parser { src: expr.as_bytes(), pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.unexpected());
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, kind: ParseErrorKind, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError { kind, offset, message: message.into() }
    }

    fn unexpected(&mut self) -> ParseError {
        match self.peek() {
            None => self.err(ParseErrorKind::UnexpectedEnd, self.pos, "unexpected end of input"),
            Some(c) => {
                let ch = std::str::from_utf8(&self.src[self.pos..])
                    .ok()
                    .and_then(|s| s.chars().next())
                    .unwrap_or(c as char);
                self.err(ParseErrorKind::Syntax, self.pos, format!("unexpected '{ch}'"))
            }
        }
    }

    fn expr(&mut self) -> Result<BivariatePoly, ParseError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BivariatePoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc * self.factor()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.factor()?;
                    if d.total_degree() > 0 {
                        return Err(self.err(
                            ParseErrorKind::NonConstantDivisor,
                            at,
                            "divisor must be a constant",
                        ));
                    }
                    if d.is_zero() {
                        return Err(self.err(ParseErrorKind::DivisionByZero, at, "division by zero"));
                    }
                    acc = acc.scale(&d.coeff(0, 0).recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<BivariatePoly, ParseError> {
        let base = self.base()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let at = self.pos;
        let digits = self.digits();
        let bad = |p: &Self| p.err(ParseErrorKind::BadExponent, at, "exponent must be a nonnegative integer literal");
        if digits.is_empty() || self.src.get(self.pos) == Some(&b'.') {
            return Err(bad(self));
        }
        let e: u32 = match digits.parse() {
            Ok(e) if e <= MAX_EXPONENT => e,
            _ => {
                return Err(self.err(
                    ParseErrorKind::BadExponent,
                    at,
                    format!("exponent exceeds {MAX_EXPONENT}"),
                ))
            }
        };
        Ok(base.pow(e))
    }

    fn base(&mut self) -> Result<BivariatePoly, ParseError> {
        let at = self.pos_after_ws();
        match self.peek() {
            Some(b'x') | Some(b'y') if !self.ident_continues(at + 1) => {
                self.pos += 1;
                Ok(if self.src[at] == b'x' { BivariatePoly::x() } else { BivariatePoly::y() })
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let end = (at..self.src.len())
                    .find(|&k| !(self.src[k].is_ascii_alphanumeric() || self.src[k] == b'_'))
                    .unwrap_or(self.src.len());
                let name = String::from_utf8_lossy(&self.src[at..end]);
                if matches!(c, b'x' | b'y') {
                    // "xy", "x2": a variable immediately followed by more identifier characters.
                    self.pos = at + 1;
                    return Err(self.err(
                        ParseErrorKind::Syntax,
                        at + 1,
                        format!("unexpected '{}' (implicit multiplication is not supported)", &name[1..2]),
                    ));
                }
                Err(self.err(
                    ParseErrorKind::UnknownVariable(c as char),
                    at,
                    format!("unknown variable '{name}'"),
                ))
            }
            Some(c) if c.is_ascii_digit() => self.number().map(BivariatePoly::constant),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.unexpected()),
        }
    }

    fn pos_after_ws(&mut self) -> usize {
        self.skip_ws();
        self.pos
    }

    fn ident_continues(&self, k: usize) -> bool {
        self.src.get(k).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn number(&mut self) -> Result<Rational, ParseError> {
        let int_part: BigInt = self.digits().parse().unwrap();
        match self.src.get(self.pos) {
            Some(b'.') => {
                self.pos += 1;
                let at = self.pos;
                let frac = self.digits();
                if frac.is_empty() {
                    return Err(self.err(ParseErrorKind::Syntax, at, "expected digits after '.'"));
                }
                let scale = num_traits::pow(BigInt::from(10), frac.len());
                let frac: BigInt = frac.parse().unwrap();
                Ok(Rational::new(int_part * &scale + frac, scale))
            }
            _ => {
                // "p/q" is a rational literal only when q follows directly;
                // otherwise '/' is left for the term-level division.
                let save = self.pos;
                self.skip_ws();
                if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let at = self.pos;
                    let den = self.digits();
                    if !den.is_empty() && self.src.get(self.pos) != Some(&b'.') {
                        let den: BigInt = den.parse().unwrap();
                        if den.is_zero() {
                            return Err(self.err(ParseErrorKind::DivisionByZero, at, "division by zero"));
                        }
                        return Ok(Rational::new(int_part, den));
                    }
                }
                self.pos = save;
                Ok(Rational::from_integer(int_part))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    fn terms(p: &BivariatePoly) -> Vec<((u32, u32), Rational)> {
        p.terms().map(|(&e, c)| (e, c.clone())).collect()
    }

    #[test]
    fn maire_and_zero() {
        let p = parse_poly("x^3 - x*y^2").unwrap();
        assert_eq!(terms(&p), vec![((1, 2), int(-1)), ((3, 0), int(1))]);
        assert!(parse_poly("0").unwrap().is_zero());
    }

    #[test]
    fn binomial_square() {
        let p = parse_poly("(x+y)^2").unwrap();
        assert_eq!(terms(&p), vec![((0, 2), int(1)), ((1, 1), int(2)), ((2, 0), int(1))]);
    }

    #[test]
    fn literals() {
        assert_eq!(parse_poly("0.5").unwrap(), BivariatePoly::constant(rat(1, 2)));
        assert_eq!(parse_poly("3/6 * x").unwrap(), BivariatePoly::monomial(rat(1, 2), 1, 0));
        assert_eq!(parse_poly("x^2/2 + y^2/2").unwrap(), parse_poly("1/2*x^2 + 1/2*y^2").unwrap());
        assert_eq!(parse_poly("3/2^2").unwrap(), BivariatePoly::constant(rat(9, 4)));
        assert_eq!(parse_poly("3/2.5").unwrap(), BivariatePoly::constant(rat(6, 5)));
        assert_eq!(parse_poly(" - x ").unwrap(), -BivariatePoly::x());
        assert_eq!(parse_poly("x^0").unwrap(), BivariatePoly::one());
        assert_eq!(parse_poly("12.250").unwrap(), BivariatePoly::constant(rat(49, 4)));
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse_poly("xy").unwrap_err();
        assert_eq!((e.kind, e.offset), (ParseErrorKind::Syntax, 1));
        let e = parse_poly("x + z").unwrap_err();
        assert_eq!((e.kind, e.offset), (ParseErrorKind::UnknownVariable('z'), 4));
        let e = parse_poly("x^^2").unwrap_err();
        assert_eq!((e.kind, e.offset), (ParseErrorKind::BadExponent, 2));
        let e = parse_poly("x^1.5").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::BadExponent);
        let e = parse_poly("x^y").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::BadExponent);
        let e = parse_poly("(x + 1").unwrap_err();
        assert_eq!((e.kind, e.offset), (ParseErrorKind::UnexpectedEnd, 6));
        let e = parse_poly("x / y").unwrap_err();
        assert_eq!((e.kind, e.offset), (ParseErrorKind::NonConstantDivisor, 3));
        let e = parse_poly("1/0").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DivisionByZero);
        assert!(parse_poly("").is_err());
        assert!(parse_poly("x +").is_err());
        assert!(parse_poly("2 x").is_err());
    }
}
