//! Exact coefficient fields: prime fields `𝔽_p` (`p < 2^31`) and the rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const MAX_PRIME: u64 = 1 << 31;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

/// A field element. `Mod` values are canonical representatives `0..p`,
/// `Rat` values are in lowest terms with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Mod(u64),
    Rat(BigRational),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p >= MAX_PRIME || !is_prime(p) {
            return Err(Error::FieldSpec(format!("fp:{p}")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> FieldElem {
        match self {
            Field::Rational => FieldElem::Rat(BigRational::zero()),
            Field::Prime(_) => FieldElem::Mod(0),
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElem {
        match self {
            Field::Rational => FieldElem::Rat(BigRational::from_integer(v.into())),
            Field::Prime(p) => FieldElem::Mod(v.rem_euclid(*p as i64) as u64),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldElem {
        match self {
            Field::Rational => FieldElem::Rat(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(*p));
                FieldElem::Mod(r.to_u64().expect("residue fits in u64"))
            }
        }
    }

    /// `num / den`; fails when `den` vanishes in this field.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<FieldElem> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Field::Rational => Ok(FieldElem::Rat(BigRational::new(num.clone(), den.clone()))),
            Field::Prime(_) => {
                let d = self.from_bigint(den);
                let inv = self.inv(&d).ok_or(Error::DivisionByZero)?;
                Ok(self.mul(&self.from_bigint(num), &inv))
            }
        }
    }

    pub fn is_zero(&self, a: &FieldElem) -> bool {
        a.is_zero()
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        match (self, a, b) {
            (Field::Prime(p), FieldElem::Mod(x), FieldElem::Mod(y)) => FieldElem::Mod((x + y) % p),
            (Field::Rational, FieldElem::Rat(x), FieldElem::Rat(y)) => FieldElem::Rat(x + y),
            _ => panic!("field element does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        match (self, a) {
            (Field::Prime(p), FieldElem::Mod(x)) => FieldElem::Mod((p - x) % p),
            (Field::Rational, FieldElem::Rat(x)) => FieldElem::Rat(-x),
            _ => panic!("field element does not belong to {self}"),
        }
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        match (self, a, b) {
            (Field::Prime(p), FieldElem::Mod(x), FieldElem::Mod(y)) => FieldElem::Mod(x * y % p),
            (Field::Rational, FieldElem::Rat(x), FieldElem::Rat(y)) => FieldElem::Rat(x * y),
            _ => panic!("field element does not belong to {self}"),
        }
    }

    pub fn inv(&self, a: &FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return None;
        }
        match (self, a) {
            (Field::Prime(p), FieldElem::Mod(x)) => Some(FieldElem::Mod(mod_pow(*x, p - 2, *p))),
            (Field::Rational, FieldElem::Rat(x)) => Some(FieldElem::Rat(x.recip())),
            _ => panic!("field element does not belong to {self}"),
        }
    }

    pub fn pow(&self, a: &FieldElem, exp: u32) -> FieldElem {
        let mut acc = self.one();
        for _ in 0..exp {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn contains(&self, a: &FieldElem) -> bool {
        match (self, a) {
            (Field::Prime(p), FieldElem::Mod(x)) => x < p,
            (Field::Rational, FieldElem::Rat(_)) => true,
            _ => false,
        }
    }

    /// All nonzero elements of a prime field, in increasing order.
    /// Returns `None` over ℚ.
    pub fn nonzero_elements(&self) -> Option<Vec<FieldElem>> {
        match self {
            Field::Prime(p) => Some((1..*p).map(FieldElem::Mod).collect()),
            Field::Rational => None,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Parses `q` or `fp:<p>`.
    fn from_str(s: &str) -> Result<Field> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        let p = t
            .strip_prefix("fp:")
            .and_then(|p| p.parse::<u64>().ok())
            .ok_or_else(|| Error::FieldSpec(s.to_string()))?;
        Field::prime(p).map_err(|_| Error::FieldSpec(s.to_string()))
    }
}

impl FieldElem {
    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Mod(x) => *x == 0,
            FieldElem::Rat(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Mod(x) => *x == 1,
            FieldElem::Rat(x) => x.is_one(),
        }
    }

    /// True when the printed form starts with a minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            FieldElem::Mod(_) => false,
            FieldElem::Rat(x) => x.is_negative(),
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Mod(x) => write!(f, "{x}"),
            FieldElem::Rat(x) if x.denom().is_one() => write!(f, "{}", x.numer()),
            FieldElem::Rat(x) => write!(f, "{}/{}", x.numer(), x.denom()),
        }
    }
}
