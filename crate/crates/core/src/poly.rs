//! Sparse multivariate polynomials with exact coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};

/// The ambient ring: a coefficient field plus an ordered list of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    field: Field,
    vars: Vec<String>,
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Ring {
    pub fn new<S: AsRef<str>>(field: Field, vars: &[S]) -> Result<Arc<Ring>> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().trim().to_string()).collect();
        if vars.is_empty() {
            return Err(Error::Variables("no variables".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            if !valid_identifier(v) {
                return Err(Error::Variables(format!("`{v}` is not an identifier")));
            }
            if vars[..i].contains(v) {
                return Err(Error::Variables(format!("`{v}` appears twice")));
            }
        }
        Ok(Arc::new(Ring { field, vars }))
    }

    /// `k[X, Y]`.
    pub fn xy(field: Field) -> Arc<Ring> {
        Ring::new(field, &["X", "Y"]).expect("valid variables")
    }

    /// `k[X1, ..., Xn]`.
    pub fn indexed(field: Field, n: usize) -> Arc<Ring> {
        let vars: Vec<String> = (1..=n).map(|i| format!("X{i}")).collect();
        Ring::new(field, &vars).expect("valid variables")
    }

    /// Parses a comma-separated variable list such as `X,Y`.
    /// `"X,Y"` style name lists, or a count `n` for `X1..Xn`.
    pub fn from_spec(field: Field, vars: &str) -> Result<Arc<Ring>> {
        if let Ok(n) = vars.trim().parse::<usize>() {
            if n == 0 {
                return Err(Error::Variables("need at least one variable".into()));
            }
            return Ok(Ring::indexed(field, n));
        }
        let names: Vec<&str> = vars.split(',').map(str::trim).collect();
        Ring::new(field, &names)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

/// Exponent vector. Ordered degree-lexicographically, earlier variables
/// weighing more.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Monomial {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    /// Index of the only variable occurring, if exactly one does.
    pub fn pure_power_of(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    /// All monomials in `nvars` variables of total degree exactly `deg`,
    /// in decreasing deglex order.
    pub fn of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
        fn rec(nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if cur.len() + 1 == nvars {
                cur.push(left);
                out.push(Monomial(cur.clone()));
                cur.pop();
                return;
            }
            for e in (0..=left).rev() {
                cur.push(e);
                rec(nvars, left - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(nvars, deg, &mut Vec::with_capacity(nvars), &mut out);
        out
    }

    /// All monomials of total degree `< bound`, degree ascending.
    pub fn below_degree(nvars: usize, bound: u32) -> Vec<Monomial> {
        (0..bound).flat_map(|d| Monomial::of_degree(nvars, d)).collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `ring`. No zero coefficients are stored.
#[derive(Clone, Debug)]
pub struct Poly {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, FieldElem>,
}

pub(crate) fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(ring: &Arc<Ring>) -> Poly {
        Poly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Arc<Ring>) -> Poly {
        Poly::constant(ring, ring.field().one())
    }

    pub fn constant(ring: &Arc<Ring>, c: FieldElem) -> Poly {
        Poly::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn from_i64(ring: &Arc<Ring>, c: i64) -> Poly {
        Poly::constant(ring, ring.field().from_i64(c))
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Poly {
        Poly::term(ring, Monomial::var(ring.nvars(), i), ring.field().one())
    }

    /// The monomial with exponent vector `exps` and coefficient one.
    pub fn monomial(ring: &Arc<Ring>, exps: &[u32]) -> Poly {
        assert_eq!(exps.len(), ring.nvars(), "exponent vector length");
        Poly::term(ring, Monomial::new(exps.to_vec()), ring.field().one())
    }

    pub fn term(ring: &Arc<Ring>, m: Monomial, c: FieldElem) -> Poly {
        assert!(ring.field().contains(&c), "coefficient outside {}", ring.field());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { ring: ring.clone(), terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, FieldElem)>>(ring: &Arc<Ring>, it: I) -> Poly {
        let mut p = Poly::zero(ring);
        for (m, c) in it {
            assert_eq!(m.exps().len(), ring.nvars(), "exponent vector length");
            p.add_term(m, &c);
        }
        p
    }

    pub fn parse(text: &str, ring: &Arc<Ring>) -> Result<Poly> {
        crate::parse::parse_poly(text, ring)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing deglex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field().zero())
    }

    pub fn constant_term(&self) -> FieldElem {
        self.coeff(&Monomial::one(self.ring.nvars()))
    }

    /// Units of the local ring are exactly the elements with nonzero constant term.
    pub fn is_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    pub fn in_maximal_ideal(&self) -> bool {
        !self.is_unit()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Lowest total degree of a term (the 𝔪-adic order).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &FieldElem)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: &FieldElem) {
        if c.is_zero() {
            return;
        }
        let field = self.ring.field().clone();
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = field.add(o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_ring(&self, other: &Poly) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        let field = self.field();
        let mut out = Poly::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), &field.mul(c1, c2));
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Poly {
        let field = self.field();
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), field.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Poly {
        let field = self.field();
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), field.mul(v, c))).collect(),
        }
    }

    /// Multiplies by a monomial with coefficient one.
    pub fn shift(&self, m: &Monomial) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `Σ cᵢ·pᵢ·qᵢ`.
    pub fn combination(ring: &Arc<Ring>, parts: &[(FieldElem, &Poly, &Poly)]) -> Result<Poly> {
        let mut acc = Poly::zero(ring);
        for (c, p, q) in parts {
            acc = acc.checked_add(&p.checked_mul(q)?.scale(c))?;
        }
        Ok(acc)
    }

    /// Exact quotient `self / divisor` in the polynomial ring, or `None` when
    /// `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Option<Poly>> {
        self.check_ring(divisor)?;
        let Some((lm, lc)) = divisor.leading_term() else {
            return Err(Error::DivisionByZero);
        };
        let field = self.field();
        let lc_inv = field.inv(lc).expect("nonzero leading coefficient");
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.ring);
        while let Some((m, c)) = rem.leading_term() {
            // {divisor} is a Gröbner basis of (divisor): a leading term that is
            // not divisible means the remainder is nonzero.
            if !lm.divides(m) {
                return Ok(None);
            }
            let t = Poly::term(&self.ring, lm.quotient_of(m), field.mul(c, &lc_inv));
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Ok(Some(quot))
    }

    /// Moves the polynomial into another ring with the same field and number
    /// of variables, keeping exponent vectors.
    pub fn relabel(&self, ring: &Arc<Ring>) -> Result<Poly> {
        if ring.field() != self.field() || ring.nvars() != self.ring.nvars() {
            return Err(Error::RingMismatch);
        }
        Ok(Poly { ring: ring.clone(), terms: self.terms.clone() })
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Poly> for &Poly {
            type Output = Poly;

            /// Panics if the operands live in different rings; use the
            /// `checked_*` methods at API boundaries.
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs).expect("polynomials from different rings")
            }
        }

        impl $tr<Poly> for Poly {
            type Output = Poly;

            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

impl Neg for Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly::neg(&self)
    }
}

fn fmt_monomial(m: &Monomial, vars: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (e, v) in m.exps().iter().zip(vars) {
        if *e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if *e == 1 {
            write!(f, "{v}")?;
        } else {
            write!(f, "{v}^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    /// Canonical text form: terms in decreasing deglex order, e.g.
    /// `X^4 + 2*X^2*Y + Y^2`, `-x2`, `1/2*X - 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.field();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, abs) = if c.is_negative() { (true, field.neg(c)) } else { (false, c.clone()) };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                fmt_monomial(m, self.ring.vars(), f)?;
            }
        }
        Ok(())
    }
}
