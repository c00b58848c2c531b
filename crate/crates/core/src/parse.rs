//! Polynomial text grammar:
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := INT ['/' INT] | IDENT ['^' INT]
//! ```
//!
//! Whitespace between tokens is ignored. Exponents must be at least one.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::poly::{Monomial, Poly, Ring};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'/' => out.push((start, Tok::Slash)),
            b'^' => out.push((start, Tok::Caret)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Int(v)));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(Error::Syntax { pos: start, msg: format!("unexpected character `{ch}`") });
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    ring: &'a Arc<Ring>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = v.clone();
                self.pos += 1;
                Ok(v)
            }
            _ => self.err("expected an integer"),
        }
    }

    fn factor(&mut self, coeff: &mut FieldElem, exps: &mut [u32]) -> Result<()> {
        let field = self.ring.field().clone();
        match self.peek().cloned() {
            Some(Tok::Int(num)) => {
                self.pos += 1;
                let value = if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    let at = self.offset();
                    let den = self.int()?;
                    field.from_ratio(&num, &den).map_err(|_| Error::Syntax {
                        pos: at,
                        msg: format!("denominator {den} is zero in {field}"),
                    })?
                } else {
                    field.from_bigint(&num)
                };
                *coeff = field.mul(coeff, &value);
                Ok(())
            }
            Some(Tok::Ident(name)) => {
                let at = self.offset();
                let idx = self
                    .ring
                    .var_index(&name)
                    .ok_or(Error::UnknownVariable { name: name.clone(), pos: at })?;
                self.pos += 1;
                let e = if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    let at = self.offset();
                    let e = self.int()?;
                    match u32::try_from(e) {
                        Ok(e) if e >= 1 => e,
                        _ => return Err(Error::Syntax { pos: at, msg: "exponent must be a positive integer".into() }),
                    }
                } else {
                    1
                };
                exps[idx] = exps[idx]
                    .checked_add(e)
                    .ok_or(Error::Syntax { pos: at, msg: "exponent overflow".into() })?;
                Ok(())
            }
            _ => self.err("expected a coefficient or a variable"),
        }
    }

    fn term(&mut self, negate: bool) -> Result<Poly> {
        let field = self.ring.field().clone();
        let mut coeff = if negate { field.from_i64(-1) } else { field.one() };
        let mut exps = vec![0u32; self.ring.nvars()];
        self.factor(&mut coeff, &mut exps)?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            self.factor(&mut coeff, &mut exps)?;
        }
        Ok(Poly::term(self.ring, Monomial::new(exps), coeff))
    }

    fn poly(&mut self) -> Result<Poly> {
        if self.toks.is_empty() {
            return self.err("empty polynomial");
        }
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term(negate)?;
        loop {
            match self.peek() {
                None => return Ok(acc),
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term(false)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc + &self.term(true)?;
                }
                Some(_) => return self.err("expected `+`, `-` or end of input"),
            }
        }
    }
}

pub(crate) fn parse_poly(text: &str, ring: &Arc<Ring>) -> Result<Poly> {
    let toks = tokenize(text)?;
    let mut parser = Parser { toks, pos: 0, end: text.len(), ring };
    parser.poly()
}

/// Splits a comma-separated polynomial list.
pub fn parse_poly_list(text: &str, ring: &Arc<Ring>) -> Result<Vec<Poly>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|s| parse_poly(s, ring)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn literal_parse() {
        let r = Ring::xy(Field::Rational);
        let a = parse_poly("X^2 + Y", &r).unwrap();
        let expected = &Poly::monomial(&r, &[2, 0]) + &Poly::var(&r, 1);
        assert_eq!(a, expected);
    }

    #[test]
    fn zero_parses_to_empty_term_map() {
        let r = Ring::xy(Field::Rational);
        let z = parse_poly("0", &r).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
    }

    #[test]
    fn coefficients_reduce_modulo_p() {
        let r = Ring::xy(Field::Prime(5));
        let a = parse_poly("-1*Y^3", &r).unwrap();
        assert_eq!(a.num_terms(), 1);
        assert_eq!(a.to_string(), "4*Y^3");
    }

    #[test]
    fn fractions_and_whitespace() {
        let r = Ring::xy(Field::Rational);
        let a = parse_poly(" 1/2 * X ^ 2 -  3 *Y*X + 4/6", &r).unwrap();
        assert_eq!(a.to_string(), "1/2*X^2 - 3*X*Y + 2/3");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let r = Ring::xy(Field::Rational);
        assert_eq!(
            parse_poly("X + * Y", &r),
            Err(Error::Syntax { pos: 4, msg: "expected a coefficient or a variable".into() })
        );
        assert!(matches!(parse_poly("X^0", &r), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("", &r), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_poly("X Y", &r), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("X#", &r), Err(Error::Syntax { pos: 1, .. })));
        assert!(matches!(parse_poly("1/0", &r), Err(Error::Syntax { pos: 2, .. })));
    }

    #[test]
    fn unknown_variable() {
        let r = Ring::xy(Field::Rational);
        assert_eq!(
            parse_poly("X + Z^2", &r),
            Err(Error::UnknownVariable { name: "Z".into(), pos: 4 })
        );
    }

    #[test]
    fn indexed_and_symbolic_names() {
        let r = Ring::indexed(Field::Rational, 3);
        assert_eq!(parse_poly("X1*X3 - X2^2", &r).unwrap().to_string(), "X1*X3 - X2^2");
        let s = Ring::new(Field::Rational, &["a1", "b", "x1"]).unwrap();
        assert_eq!(parse_poly("-b + x1", &s).unwrap().to_string(), "-b + x1");
    }
}
