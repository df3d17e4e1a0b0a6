//! Reader for the textual expression format used by the CLI and by tests:
//! integers, the variables of [`Var`], `+ - * / ^` and parentheses.
//! Exponents are integers and may be negative.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::mpoly::MPoly;
use super::ratfn::RatFn;
use super::var::Var;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Int(text.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '\u{2212}' {
            out.push(Tok::Op('-'));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// A product kept unexpanded so that parenthesised denominator factors stay
/// structural factors of the result.
type Product = Vec<RatFn>;

fn collapse(factors: Product) -> RatFn {
    factors.iter().fold(RatFn::one(), |acc, f| &acc * f)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Product> {
        let first = self.term()?;
        if !matches!(self.peek(), Some(Tok::Op('+' | '-'))) {
            return Ok(first);
        }
        let mut acc = collapse(first);
        loop {
            if self.eat('+') {
                acc = &acc + &collapse(self.term()?);
            } else if self.eat('-') {
                acc = &acc - &collapse(self.term()?);
            } else {
                return Ok(vec![acc]);
            }
        }
    }

    fn term(&mut self) -> Result<Product> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc.extend(self.unary()?);
            } else if self.eat('/') {
                for f in self.unary()? {
                    acc.push(f.recip()?);
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Product> {
        if self.eat('-') {
            let mut inner = self.unary()?;
            inner.push(RatFn::from_int(-1));
            return Ok(inner);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Product> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e = match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                i32::try_from(n).map_err(|_| Error::Parse("exponent too large".into()))?
            }
            _ => return Err(Error::Parse("expected integer exponent".into())),
        };
        let e = if neg { -e } else { e };
        base.iter().map(|f| f.pow(e)).collect()
    }

    fn atom(&mut self) -> Result<Product> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(vec![RatFn::constant(BigRational::from_integer(n))])
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(vec![RatFn::var(Var::from_str(&name)?)])
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing `)`".into()));
                }
                Ok(inner)
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

pub fn parse_ratfn(s: &str) -> Result<RatFn> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let f = collapse(p.expr()?);
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!(
            "trailing input at token {}",
            p.pos + 1
        )));
    }
    Ok(f)
}

/// Parses an expression that must be a polynomial.
pub fn parse_poly(s: &str) -> Result<MPoly> {
    let f = parse_ratfn(s)?;
    f.as_poly()
        .cloned()
        .ok_or_else(|| Error::Parse(format!("`{s}` is not a polynomial")))
}

impl FromStr for RatFn {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_ratfn(s)
    }
}

impl FromStr for MPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_poly(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_canonical_text() {
        for s in [
            "p^2*t - p + 3",
            "X1/(1 - X1)",
            "(p^3*t^3 + 1)/(1 - p^4*t^3)",
            "1/((1 - t)*(1 - p*t)*(1 - p^2*t^3))",
            "(p + 1)/p",
            "3*t/p^2",
            "-1/2*y1^2 + y2",
        ] {
            assert_eq!(parse_ratfn(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_ratfn("").is_err());
        assert!(parse_ratfn("p +").is_err());
        assert!(parse_ratfn("(p").is_err());
        assert!(parse_ratfn("z").is_err());
        assert!(parse_ratfn("p^q").is_err());
        assert!(parse_poly("1/p").is_err());
        assert!(parse_ratfn("p $ 2").is_err());
    }

    #[test]
    fn unicode_minus() {
        assert_eq!(parse_poly("1 \u{2212} q").unwrap(), parse_poly("1 - q").unwrap());
    }
}
