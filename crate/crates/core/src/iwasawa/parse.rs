//! Module expressions such as `p^2*(T^3+p*T+p)` or `p, T`.
//!
//! ```text
//! relations := expr (',' expr)*
//! expr      := ['-'] term (('+' | '-') term)*
//! term      := factor ('*' factor)*
//! factor    := atom ('^' integer)?
//! atom      := integer | 'p' | 'T' | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::module::ModulePresentation;
use super::series::LambdaSeries;
use crate::error::{Error, Result};

/// p-adic precision given to parsed integer polynomials.
pub const PARSE_PRECISION: u32 = 40;
const MAX_DEGREE: usize = 256;

type Poly = Vec<BigInt>;

fn add(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect()
}

fn neg(a: &Poly) -> Poly {
    a.iter().map(|c| -c).collect()
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    p: BigInt,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at position {}", self.pos))
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        txt.parse().map_err(|_| self.err("bad integer"))
    }

    fn expr(&mut self) -> Result<Poly> {
        let negate = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = neg(&acc);
        }
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = add(&acc, &self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = add(&acc, &neg(&self.term()?));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = crate::numberfield::intpoly::mul(&acc, &self.factor()?);
            if acc.len() > MAX_DEGREE {
                return Err(self.err("degree too large"));
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let e: u32 = self
            .integer()?
            .try_into()
            .map_err(|_| self.err("exponent too large"))?;
        let deg = base.len().saturating_sub(1);
        if deg * e as usize > MAX_DEGREE || e > 1000 {
            return Err(self.err("exponent too large"));
        }
        let mut acc: Poly = vec![BigInt::one()];
        for _ in 0..e {
            acc = crate::numberfield::intpoly::mul(&acc, &base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'p') => {
                self.pos += 1;
                Ok(vec![self.p.clone()])
            }
            Some(b'T') => {
                self.pos += 1;
                Ok(vec![BigInt::zero(), BigInt::one()])
            }
            Some(c) if c.is_ascii_digit() => Ok(vec![self.integer()?]),
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses one polynomial in `p` and `T` into a series over `Z_p`.
pub fn parse_series(src: &str, p: u64) -> Result<LambdaSeries> {
    let mut parser = Parser { s: src.as_bytes(), pos: 0, p: BigInt::from(p) };
    let poly = parser.expr()?;
    if parser.peek().is_some() {
        return Err(parser.err("trailing input"));
    }
    to_series(&poly, p)
}

fn to_series(poly: &Poly, p: u64) -> Result<LambdaSeries> {
    LambdaSeries::new(p, PARSE_PRECISION, poly.len().max(1), poly)
}

/// Parses comma-separated relations into the cyclic module `Λ/(f_1, …)`.
pub fn parse_module(src: &str, p: u64) -> Result<ModulePresentation> {
    let mut parser = Parser { s: src.as_bytes(), pos: 0, p: BigInt::from(p) };
    let mut rels = vec![to_series(&parser.expr()?, p)?];
    while parser.peek() == Some(b',') {
        parser.pos += 1;
        rels.push(to_series(&parser.expr()?, p)?);
    }
    if parser.peek().is_some() {
        return Err(parser.err("trailing input"));
    }
    ModulePresentation::cyclic(rels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn parses_products_and_powers() {
        let f = parse_series("p^2*(T^3+p*T+p)", 3).unwrap();
        assert_eq!(f.signed_coeffs(), ints(&[27, 27, 0, 9]));
        assert!(f.polynomial);
        let f = parse_series("-(1 + T)^2 + 2*T", 5).unwrap();
        assert_eq!(f.signed_coeffs(), ints(&[-1, 0, -1]));
        assert_eq!(parse_series("T - T", 5).unwrap().degree(), None);
        let m = parse_module("p, T", 3).unwrap();
        assert_eq!(m.relations.len(), 2);
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "p +", "(T", "x", "T^", "p)", "T^999999"] {
            assert!(matches!(parse_series(bad, 3), Err(Error::Parse(_))), "{bad}");
        }
    }
}
