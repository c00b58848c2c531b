//! Colength, membership and generator counts for 𝔪-primary ideals of the
//! local ring `S`, computed in finite truncations `S/𝔪^N`.
//!
//! Columns of a truncation are the monomials of degree `< N` in ascending
//! degree, so a leftmost pivot is a lowest-degree term. One echelon form at
//! order `M` therefore yields `ℓ(S/(J + 𝔪^k))` for every `k ≤ M`: it is the
//! number of columns of degree `< k` minus the pivots among them.

pub(crate) mod echelon;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, NotPrimary, Result};
use crate::poly::{same_ring, Monomial, Poly, Ring};

use echelon::{Echelon, ModP, Rationals, Scalars, SparseRow};

pub const DEFAULT_CAP: usize = 64;

/// Runs `$body` with `$s` bound to the scalar backend of `$field`.
macro_rules! with_scalars {
    ($field:expr, $s:ident => $body:expr) => {
        match $field {
            $crate::field::Field::Prime(p) => {
                let $s = $crate::engine::echelon::ModP(*p);
                $body
            }
            $crate::field::Field::Rational => {
                let $s = $crate::engine::echelon::Rationals;
                $body
            }
        }
    };
}
pub(crate) use with_scalars;

/// Generators of an ideal of `S`, all in the maximal ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalIdeal {
    ring: Arc<Ring>,
    gens: Vec<Poly>,
}

impl LocalIdeal {
    pub fn new(ring: &Arc<Ring>, gens: Vec<Poly>) -> Result<LocalIdeal> {
        if gens.is_empty() {
            return Err(Error::EmptyIdeal);
        }
        for g in &gens {
            if !same_ring(g.ring(), ring) {
                return Err(Error::RingMismatch);
            }
            if g.is_unit() {
                return Err(Error::NotInMaximalIdeal(g.to_string()));
            }
        }
        Ok(LocalIdeal { ring: ring.clone(), gens })
    }

    pub fn parse(ring: &Arc<Ring>, gens: &[&str]) -> Result<LocalIdeal> {
        let polys = gens.iter().map(|s| Poly::parse(s, ring)).collect::<Result<Vec<_>>>()?;
        LocalIdeal::new(ring, polys)
    }

    /// The maximal ideal `(X₁, …, X_v)`.
    pub fn maximal(ring: &Arc<Ring>) -> LocalIdeal {
        let gens = (0..ring.nvars()).map(|i| Poly::var(ring, i)).collect();
        LocalIdeal { ring: ring.clone(), gens }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn sum(&self, other: &LocalIdeal) -> Result<LocalIdeal> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ok(LocalIdeal { ring: self.ring.clone(), gens })
    }

    /// `J + (extra)`.
    pub fn with(&self, extra: &[Poly]) -> Result<LocalIdeal> {
        let other = LocalIdeal::new(&self.ring, extra.to_vec())?;
        self.sum(&other)
    }

    /// Generated by pairwise products of generators.
    pub fn product(&self, other: &LocalIdeal) -> Result<LocalIdeal> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for g in &self.gens {
            for h in &other.gens {
                gens.push(g * h);
            }
        }
        Ok(LocalIdeal { ring: self.ring.clone(), gens })
    }

    /// `J²`, generated by the products `gᵢgⱼ` with `i ≤ j`.
    pub fn square(&self) -> LocalIdeal {
        let n = self.gens.len();
        let mut gens = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                gens.push(&self.gens[i] * &self.gens[j]);
            }
        }
        LocalIdeal { ring: self.ring.clone(), gens }
    }

    /// First variable without a pure power among the generators. Such an
    /// ideal lies in the prime ideal of the corresponding coordinate axis.
    pub fn missing_pure_power(&self) -> Option<usize> {
        let nvars = self.ring.nvars();
        let mut seen = vec![false; nvars];
        for g in &self.gens {
            for (m, _) in g.terms() {
                if let Some(v) = m.pure_power_of() {
                    seen[v] = true;
                }
            }
        }
        seen.iter().position(|s| !s)
    }
}

impl fmt::Display for LocalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

/// Monomials of degree `< order`, degree ascending, with a reverse index.
#[derive(Debug)]
struct Layout {
    basis: Vec<Monomial>,
    index: HashMap<Monomial, u32>,
    /// `start[k]` is the number of monomials of degree `< k`.
    start: Vec<usize>,
}

impl Layout {
    fn new(nvars: usize, order: u32) -> Layout {
        let basis = Monomial::below_degree(nvars, order);
        let index = basis.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
        let mut start = vec![0; order as usize + 1];
        for m in &basis {
            start[m.degree() as usize + 1] += 1;
        }
        for k in 1..start.len() {
            start[k] += start[k - 1];
        }
        Layout { basis, index, start }
    }

    fn order(&self) -> u32 {
        (self.start.len() - 1) as u32
    }

    fn row<S: Scalars>(&self, s: &S, p: &Poly, shift: Option<&Monomial>) -> SparseRow<S::E> {
        let order = self.order();
        let mut row: SparseRow<S::E> = p
            .terms()
            .filter_map(|(m, c)| {
                let m = match shift {
                    Some(t) => t.mul(m),
                    None => m.clone(),
                };
                (m.degree() < order).then(|| (self.index[&m], s.lift(c)))
            })
            .collect();
        row.sort_unstable_by_key(|e| e.0);
        row
    }

    /// Echelon form of the image of `(gens)` in `S/𝔪^order`.
    fn echelon<S: Scalars>(&self, s: S, gens: &[Poly]) -> Echelon<S> {
        let mut e = Echelon::new(s, self.basis.len());
        let order = self.order();
        for g in gens {
            let Some(ord) = g.order() else { continue };
            if ord >= order {
                continue;
            }
            for t in &self.basis[..self.start[(order - ord) as usize]] {
                let r = self.row(&e.scalars, g, Some(t));
                e.insert(r);
            }
        }
        e
    }
}

#[derive(Clone, Debug)]
enum Space {
    Mod(Echelon<ModP>),
    Rat(Echelon<Rationals>),
}

trait Backend: Scalars + 'static {
    fn wrap(e: Echelon<Self>) -> Space;
}

impl Backend for ModP {
    fn wrap(e: Echelon<Self>) -> Space {
        Space::Mod(e)
    }
}

impl Backend for Rationals {
    fn wrap(e: Echelon<Self>) -> Space {
        Space::Rat(e)
    }
}

/// The image of an ideal `J` in `S/𝔪^N`, in reduced row echelon form, at an
/// order `N` with `𝔪^N ⊆ J`.
#[derive(Clone, Debug)]
pub struct Truncation {
    ring: Arc<Ring>,
    layout: Arc<Layout>,
    space: Space,
}

impl Truncation {
    pub fn order(&self) -> u32 {
        self.layout.order()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.layout.basis
    }

    pub fn rank(&self) -> usize {
        match &self.space {
            Space::Mod(e) => e.rank(),
            Space::Rat(e) => e.rank(),
        }
    }

    /// `ℓ(S/J)`.
    pub fn colength(&self) -> usize {
        self.layout.basis.len() - self.rank()
    }

    /// Monomials not among the pivots: a basis of `S/J`.
    pub fn standard_monomials(&self) -> Vec<Monomial> {
        let is_pivot = |c: u32| match &self.space {
            Space::Mod(e) => e.is_pivot(c),
            Space::Rat(e) => e.is_pivot(c),
        };
        (0..self.layout.basis.len() as u32)
            .filter(|&c| !is_pivot(c))
            .map(|c| self.layout.basis[c as usize].clone())
            .collect()
    }

    /// Rows of the reduced echelon form as polynomials, ordered by pivot.
    pub fn rref_rows(&self) -> Vec<Poly> {
        fn lower<S: Scalars>(t: &Truncation, e: &Echelon<S>) -> Vec<Poly> {
            e.rows()
                .iter()
                .map(|r| {
                    Poly::from_terms(
                        &t.ring,
                        r.iter().map(|(c, v)| (t.layout.basis[*c as usize].clone(), e.scalars.lower(v))),
                    )
                })
                .collect()
        }
        match &self.space {
            Space::Mod(e) => lower(self, e),
            Space::Rat(e) => lower(self, e),
        }
    }

    /// `u ∈ J`. Terms of degree `≥ N` lie in `𝔪^N ⊆ J` and are dropped.
    pub fn contains(&self, u: &Poly) -> Result<bool> {
        if !same_ring(u.ring(), &self.ring) {
            return Err(Error::RingMismatch);
        }
        Ok(match &self.space {
            Space::Mod(e) => e.contains(self.layout.row(&e.scalars, u, None)),
            Space::Rat(e) => e.contains(self.layout.row(&e.scalars, u, None)),
        })
    }
}

/// Outcome of a system-of-parameters test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SopStatus {
    Parameters { colength: usize },
    NotParameters,
    /// Undecided: the colength did not stabilize below the cap.
    CapExceeded { cap: usize },
}

impl SopStatus {
    pub fn is_sop(&self) -> bool {
        matches!(self, SopStatus::Parameters { .. })
    }
}

/// Truncation-based ideal arithmetic with a cap on the truncation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Engine {
    cap: usize,
}

impl Default for Engine {
    fn default() -> Self {
        Engine { cap: DEFAULT_CAP }
    }
}

const FIRST_ORDER: u32 = 8;

impl Engine {
    pub fn new(cap: usize) -> Result<Engine> {
        if cap == 0 {
            return Err(Error::Input("truncation cap must be positive".into()));
        }
        Ok(Engine { cap })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn stable_in<S: Backend>(&self, s: S, j: &LocalIdeal) -> Result<Truncation> {
        let nvars = j.ring.nvars();
        let cap = self.cap as u32;
        let mut order = FIRST_ORDER.min(cap + 1);
        loop {
            let layout = Layout::new(nvars, order);
            let e = layout.echelon(s.clone(), &j.gens);
            let len = |k: usize| layout.start[k] - e.pivots_below(layout.start[k]);
            let stable = (1..order as usize).find(|&k| len(k) == len(k + 1));
            if let Some(n) = stable.filter(|&n| n <= self.cap) {
                let layout = Arc::new(Layout::new(nvars, n as u32));
                let projected = e.project_rref(layout.basis.len());
                return Ok(Truncation { ring: j.ring.clone(), layout, space: S::wrap(projected) });
            }
            if order > cap {
                return Err(Error::NotPrimary(NotPrimary::CapExceeded { cap: self.cap }));
            }
            order = (order * 2).min(cap + 1);
        }
    }

    /// Smallest `N ≥ 1` with `ℓ(S/(J+𝔪^N)) = ℓ(S/(J+𝔪^{N+1}))`, which forces
    /// `𝔪^N ⊆ J`.
    pub fn stable_truncation(&self, j: &LocalIdeal) -> Result<Truncation> {
        if let Some(v) = j.missing_pure_power() {
            let var = j.ring.vars()[v].clone();
            return Err(Error::NotPrimary(NotPrimary::MissingPurePower { var }));
        }
        with_scalars!(j.ring.field(), s => self.stable_in(s, j))
    }

    pub fn colength(&self, j: &LocalIdeal) -> Result<usize> {
        Ok(self.stable_truncation(j)?.colength())
    }

    /// `ℓ(S/(J + 𝔪^order))`.
    pub fn colength_at(&self, j: &LocalIdeal, order: u32) -> usize {
        let layout = Layout::new(j.ring.nvars(), order);
        let rank = with_scalars!(j.ring.field(), s => layout.echelon(s, &j.gens).rank());
        layout.basis.len() - rank
    }

    pub fn member(&self, u: &Poly, j: &LocalIdeal) -> Result<bool> {
        self.stable_truncation(j)?.contains(u)
    }

    /// Whether every polynomial of `elems` lies in `j`.
    pub fn contains_all(&self, j: &LocalIdeal, elems: &[Poly]) -> Result<bool> {
        let t = self.stable_truncation(j)?;
        for u in elems {
            if !t.contains(u)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality by mutual generator membership.
    pub fn ideal_equal(&self, j1: &LocalIdeal, j2: &LocalIdeal) -> Result<bool> {
        if !same_ring(&j1.ring, &j2.ring) {
            return Err(Error::RingMismatch);
        }
        let t1 = self.stable_truncation(j1)?;
        let t2 = self.stable_truncation(j2)?;
        if t1.colength() != t2.colength() {
            return Ok(false);
        }
        for g in &j1.gens {
            if !t2.contains(g)? {
                return Ok(false);
            }
        }
        for g in &j2.gens {
            if !t1.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Minimal number of generators `dim J/𝔪J`.
    pub fn mu(&self, j: &LocalIdeal) -> Result<usize> {
        self.mu_relative(j, &[])
    }

    /// `dim (J + E)/(𝔪J + E)`: the minimal number of generators of the image
    /// of `J` in `S/(E)`. Requires `J + E` to be 𝔪-primary.
    pub fn mu_relative(&self, j: &LocalIdeal, extra: &[Poly]) -> Result<usize> {
        let mut full = j.clone();
        full.gens.extend(extra.iter().cloned());
        let t = self.stable_truncation(&full)?;
        // 𝔪^{N+1} ⊆ 𝔪(J+E) ⊆ 𝔪J + E, so order N+1 computes ℓ(S/(𝔪J+E)) exactly.
        let mut small = j.product(&LocalIdeal::maximal(&j.ring))?;
        small.gens.extend(extra.iter().cloned());
        Ok(self.colength_at(&small, t.order() + 1) - t.colength())
    }

    /// Whether `elems` is a system of parameters: as many elements as
    /// variables, generating an 𝔪-primary ideal.
    pub fn is_sop(&self, elems: &[Poly]) -> Result<SopStatus> {
        let Some(first) = elems.first() else {
            return Ok(SopStatus::NotParameters);
        };
        let ring = first.ring().clone();
        let j = LocalIdeal::new(&ring, elems.to_vec())?;
        if elems.len() != ring.nvars() {
            return Ok(SopStatus::NotParameters);
        }
        match self.colength(&j) {
            Ok(colength) => Ok(SopStatus::Parameters { colength }),
            Err(Error::NotPrimary(NotPrimary::MissingPurePower { .. })) => Ok(SopStatus::NotParameters),
            Err(Error::NotPrimary(NotPrimary::CapExceeded { cap })) => Ok(SopStatus::CapExceeded { cap }),
            Err(e) => Err(e),
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn q() -> Arc<Ring> {
        Ring::xy(Field::Rational)
    }

    fn ideal(r: &Arc<Ring>, gens: &[&str]) -> LocalIdeal {
        LocalIdeal::parse(r, gens).unwrap()
    }

    fn p(r: &Arc<Ring>, s: &str) -> Poly {
        Poly::parse(s, r).unwrap()
    }

    #[test]
    fn maximal_ideal_stabilizes_at_one() {
        let r = q();
        let t = Engine::default().stable_truncation(&ideal(&r, &["X", "Y"])).unwrap();
        assert_eq!(t.order(), 1);
        assert_eq!(t.colength(), 1);
    }

    #[test]
    fn colengths() {
        let r = q();
        let e = Engine::default();
        assert_eq!(e.colength(&ideal(&r, &["X^2 + Y", "Y^3"])).unwrap(), 6);
        assert_eq!(e.colength(&ideal(&r, &["X + Y", "X^3*Y"])).unwrap(), 4);
        assert_eq!(e.colength(&ideal(&r, &["X^2 + Y", "X*Y"])).unwrap(), 3);
        assert_eq!(e.colength(&ideal(&r, &["X^4", "Y^5"])).unwrap(), 20);
    }

    #[test]
    fn localization_ignores_unit_factors() {
        let r = q();
        // X·(1 + X) generates (X) locally.
        let e = Engine::default();
        assert_eq!(e.colength(&ideal(&r, &["X + X^2", "Y^2"])).unwrap(), 2);
        assert!(e.member(&p(&r, "X"), &ideal(&r, &["X + X^2", "Y^2"])).unwrap());
    }

    #[test]
    fn not_primary() {
        let r = q();
        let e = Engine::default();
        assert_eq!(
            e.colength(&ideal(&r, &["X"])),
            Err(Error::NotPrimary(NotPrimary::MissingPurePower { var: "Y".into() }))
        );
        let e = Engine::new(10).unwrap();
        assert_eq!(
            e.colength(&ideal(&r, &["X + Y", "X^2 + X*Y"])),
            Err(Error::NotPrimary(NotPrimary::CapExceeded { cap: 10 }))
        );
    }

    #[test]
    fn membership() {
        let r = q();
        let e = Engine::default();
        let j = ideal(&r, &["X^2 + Y", "Y^3"]);
        assert!(!e.member(&p(&r, "Y^2"), &j).unwrap());
        assert!(e.member(&p(&r, "X^2*Y^2 + Y^3"), &j).unwrap());
        assert!(!e.member(&p(&r, "Y"), &ideal(&r, &["X^2", "Y^2"])).unwrap());
        assert!(e.member(&Poly::zero(&r), &j).unwrap());
    }

    #[test]
    fn equality_and_mu() {
        let r = q();
        let e = Engine::default();
        assert!(e.ideal_equal(&ideal(&r, &["X", "Y"]), &ideal(&r, &["X + Y", "Y"])).unwrap());
        assert!(!e.ideal_equal(&ideal(&r, &["X^2", "Y"]), &ideal(&r, &["X^3", "Y"])).unwrap());
        assert_eq!(e.mu(&ideal(&r, &["X", "Y"])).unwrap(), 2);
        assert_eq!(e.mu(&ideal(&r, &["X^2", "X*Y", "Y^2"])).unwrap(), 3);
        assert_eq!(e.mu(&ideal(&r, &["X^2 + Y", "X*Y", "Y^2"])).unwrap(), 2);
    }

    #[test]
    fn square_matches_reduction_modulo_f() {
        let r = q();
        let e = Engine::default();
        let i = ideal(&r, &["X^2 + Y", "X*Y"]);
        let f = p(&r, "Y^3");
        let lhs = i.square().with(std::slice::from_ref(&f)).unwrap();
        let rhs = ideal(&r, &["X^2 + Y"]).product(&i).unwrap().with(&[f]).unwrap();
        assert!(e.ideal_equal(&lhs, &rhs).unwrap());
    }

    #[test]
    fn sop_status() {
        let r = q();
        let e = Engine::default();
        assert!(e.is_sop(&[p(&r, "X^2 + Y"), p(&r, "X*Y")]).unwrap().is_sop());
        assert!(e.is_sop(&[p(&r, "X^3 + 2*X*Y"), p(&r, "X^2*Y + Y^2")]).unwrap().is_sop());
        assert_eq!(e.is_sop(&[p(&r, "X"), p(&r, "X")]).unwrap(), SopStatus::NotParameters);
        assert_eq!(e.is_sop(&[p(&r, "X")]).unwrap(), SopStatus::NotParameters);
    }

    #[test]
    fn mu_modulo_hypersurface() {
        let r = q();
        let e = Engine::default();
        // In S/(Y²) the ideal (X, Y, X*Y) needs two generators.
        let j = ideal(&r, &["X", "Y", "X*Y"]);
        assert_eq!(e.mu_relative(&j, &[p(&r, "Y^2")]).unwrap(), 2);
        // (X², XY, Y²) modulo Y² is (X², XY).
        let j = ideal(&r, &["X^2", "X*Y", "Y^2"]);
        assert_eq!(e.mu_relative(&j, &[p(&r, "Y^2")]).unwrap(), 2);
    }

    #[test]
    fn prime_field_backend() {
        let r = Ring::xy(Field::Prime(2));
        let e = Engine::default();
        // (X + Y)² = X² + Y² in characteristic two.
        let j = ideal(&r, &["X^2 + Y^2", "X*Y"]);
        assert_eq!(e.colength(&j).unwrap(), 4);
        let rq = q();
        assert_eq!(e.colength(&ideal(&rq, &["X^2 + Y^2", "X*Y"])).unwrap(), 4);
        assert!(e.member(&p(&r, "X^3"), &j).unwrap());
    }

    #[test]
    fn standard_monomials_count_colength() {
        let r = q();
        let t = Engine::default().stable_truncation(&ideal(&r, &["X^3", "Y^2"])).unwrap();
        assert_eq!(t.standard_monomials().len(), 6);
        assert_eq!(t.rank() + t.colength(), t.basis().len());
        assert!(t.rref_rows().iter().all(|row| !row.is_zero()));
    }
}
