//! Brute-force enumeration of Ulrich ideals over a finite field.
//!
//! Candidates are pairs in normal form, `a = X^n + a₁Y` with
//! `b = b₁Y` (shape [`SearchShape::YMultiple`]) or `b = b₁XY` and `a₁ ∉ (X)`
//! plus the split pairs `(X^n, Y)` (shape [`SearchShape::XkY`]). For normal
//! form pairs the reduction is `(a)`, so only that one is tried. Split pairs
//! go through the full reduction search.

use std::sync::Arc;

use rayon::prelude::*;

use super::{field_constants, full_list, FTag, FamilyInstance, FamilyList, Grid};
use crate::engine::{Engine, LocalIdeal};
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::poly::{Monomial, Poly, Ring};
use crate::ulrich::{is_ulrich, UlrichOptions};

pub const DEFAULT_SEARCH_CAP: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchShape {
    YMultiple,
    XkY,
}

impl SearchShape {
    pub fn tag(&self) -> &'static str {
        match self {
            SearchShape::YMultiple => "y-multiple",
            SearchShape::XkY => "xky",
        }
    }

    pub fn from_tag(tag: &str) -> Option<SearchShape> {
        match tag {
            "y-multiple" => Some(SearchShape::YMultiple),
            "xky" => Some(SearchShape::XkY),
            _ => None,
        }
    }

    /// The natural shape for `Y^k` and `X^kY`.
    pub fn for_f(f: &Poly) -> Option<SearchShape> {
        match FTag::of_poly(f)? {
            FTag::YPower(_) => Some(SearchShape::YMultiple),
            FTag::XPowerY(_) => Some(SearchShape::XkY),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub nmax: u32,
    /// Bound on the total degree of `a₁` and `b₁`.
    pub coeff_degree: u32,
    pub cap: u128,
}

/// One ideal class found by the search, with its first representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoundIdeal {
    pub ideal: LocalIdeal,
    pub n: u32,
    pub split: bool,
    /// `ℓ_R(R/I)`
    pub colength: usize,
    /// Number of Ulrich candidates generating this ideal.
    pub representations: usize,
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub f: Poly,
    pub shape: SearchShape,
    pub bounds: SearchBounds,
    pub candidates: u128,
    pub ulrich_candidates: usize,
    pub found: Vec<FoundIdeal>,
    pub list: Option<FTag>,
    pub partial: bool,
    /// `(found index, instance label)`
    pub matched: Vec<(usize, String)>,
    /// Found ideals equal to no listed instance.
    pub unmatched: Vec<usize>,
    /// Listed instances fitting the bounds that were not found.
    pub missing: Vec<String>,
    pub expected: usize,
    /// Largest `n` among non-split Ulrich candidates.
    pub max_n: Option<u32>,
}

impl SearchReport {
    /// No unmatched ideals and no missing instances.
    pub fn agrees(&self) -> bool {
        self.unmatched.is_empty() && self.missing.is_empty()
    }
}

struct Space {
    ring: Arc<Ring>,
    consts: Vec<FieldElem>,
    monos: Vec<Monomial>,
    /// `p^M`
    per_coeff: u64,
}

impl Space {
    fn poly(&self, mut idx: u64) -> Poly {
        let p = self.consts.len() as u64;
        let mut terms = Vec::new();
        for m in &self.monos {
            let digit = (idx % p) as usize;
            idx /= p;
            if digit != 0 {
                terms.push((m.clone(), self.consts[digit].clone()));
            }
        }
        Poly::from_terms(&self.ring, terms)
    }

    /// Whether `a₁(0, Y) ≠ 0`.
    fn outside_x(&self, idx: u64) -> bool {
        let p = self.consts.len() as u64;
        let mut idx = idx;
        self.monos.iter().any(|m| {
            let digit = idx % p;
            idx /= p;
            digit != 0 && m.exps()[0] == 0
        })
    }
}

#[derive(Clone, Debug)]
struct Candidate {
    n: u32,
    split: bool,
    gens: [Poly; 2],
}

fn candidate_count(shape: SearchShape, nmax: u32, per_coeff: u128) -> u128 {
    let main = nmax as u128 * per_coeff * per_coeff.saturating_sub(1);
    match shape {
        SearchShape::YMultiple => main,
        SearchShape::XkY => main + nmax as u128,
    }
}

/// Enumerates every normal-form pair within `bounds` over `𝔽_p`, keeps the
/// Ulrich ones, groups them by the ideal of `S/(f)` they generate, and
/// matches the classes against the list for `f` when there is one.
pub fn exhaustive_search(engine: &Engine, f: &Poly, shape: SearchShape, bounds: SearchBounds) -> Result<SearchReport> {
    let ring = f.ring().clone();
    if ring.nvars() != 2 {
        return Err(Error::Variables("the search runs in two variables".into()));
    }
    let consts = field_constants(&ring)
        .ok_or_else(|| Error::Unsupported("exhaustive search needs a prime field".into()))?;
    if bounds.nmax == 0 {
        return Err(Error::Input("nmax must be positive".into()));
    }
    let monos: Vec<Monomial> = Monomial::below_degree(2, bounds.coeff_degree + 1);
    let p = consts.len() as u128;
    let per_coeff = p.checked_pow(monos.len() as u32).unwrap_or(u128::MAX);
    let size = candidate_count(shape, bounds.nmax, per_coeff);
    if per_coeff == u128::MAX || size > bounds.cap {
        return Err(Error::SearchSpace { size, cap: bounds.cap });
    }
    let space = Space { ring: ring.clone(), consts, monos, per_coeff: per_coeff as u64 };

    let x = Poly::var(&ring, 0);
    let y = Poly::var(&ring, 1);
    let b_factor = match shape {
        SearchShape::YMultiple => y.clone(),
        SearchShape::XkY => &x * &y,
    };
    let per = space.per_coeff;
    let main = bounds.nmax as u64 * per * (per - 1);
    let total = size as u64;

    let decode = |idx: u64| -> Option<Candidate> {
        if idx >= main {
            let n = (idx - main) as u32 + 1;
            return Some(Candidate { n, split: true, gens: [x.pow(n), y.clone()] });
        }
        let n = (idx / (per * (per - 1))) as u32 + 1;
        let rest = idx % (per * (per - 1));
        let a_idx = rest / (per - 1);
        let b_idx = rest % (per - 1) + 1;
        if shape == SearchShape::XkY && !space.outside_x(a_idx) {
            return None;
        }
        let a = &x.pow(n) + &(&space.poly(a_idx) * &y);
        let b = &space.poly(b_idx) * &b_factor;
        Some(Candidate { n, split: false, gens: [a, b] })
    };

    let main_opts = UlrichOptions { q_choice: Some(vec![0]), ..Default::default() };
    let split_opts = UlrichOptions::default();
    let hits: Vec<Candidate> = (0..total)
        .into_par_iter()
        .filter_map(decode)
        .filter_map(|c| {
            let opts = if c.split { &split_opts } else { &main_opts };
            match is_ulrich(engine, &c.gens, f, opts) {
                Ok(v) if v.is_ulrich => Some(Ok(c)),
                Ok(_) => None,
                Err(e) => Some(Err(e)),
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let fs = [f.clone()];
    let max_n = hits.iter().filter(|c| !c.split).map(|c| c.n).max();
    let mut found: Vec<FoundIdeal> = Vec::new();
    let mut lifted: Vec<LocalIdeal> = Vec::new();
    for c in &hits {
        let ideal = LocalIdeal::new(&ring, c.gens.to_vec())?;
        let with_f = ideal.with(&fs)?;
        let colength = engine.colength(&with_f)?;
        let mut hit = None;
        for (k, g) in found.iter().enumerate() {
            if g.colength == colength && engine.ideal_equal(&lifted[k], &with_f)? {
                hit = Some(k);
                break;
            }
        }
        match hit {
            Some(k) => found[k].representations += 1,
            None => {
                found.push(FoundIdeal { ideal, n: c.n, split: c.split, colength, representations: 1 });
                lifted.push(with_f);
            }
        }
    }

    let mut report = SearchReport {
        f: f.clone(),
        shape,
        bounds,
        candidates: size,
        ulrich_candidates: hits.len(),
        found,
        list: None,
        partial: false,
        matched: Vec::new(),
        unmatched: Vec::new(),
        missing: Vec::new(),
        expected: 0,
        max_n,
    };
    let list = FTag::of_poly(f).map(full_list).and_then(|r| r.ok());
    match list {
        Some(list) => compare_with_list(engine, &mut report, &list, &space, &lifted)?,
        None => report.unmatched = (0..report.found.len()).collect(),
    }
    Ok(report)
}

/// Degree of a polynomial, or `None` for zero.
fn fits(p: &Poly, bound: u32) -> bool {
    p.degree().is_none_or(|d| d <= bound)
}

/// Whether an instance is itself a candidate of the search.
fn is_candidate(inst: &FamilyInstance, shape: SearchShape, bounds: &SearchBounds) -> bool {
    let ring = inst.f.ring();
    let x = Poly::var(ring, 0);
    let y = Poly::var(ring, 1);
    let [a, b] = &inst.gens;
    let split = matches!(shape, SearchShape::XkY) && *b == y;
    let n = (1..=bounds.nmax).find(|&n| {
        let rest = a - &x.pow(n);
        matches!(rest.div_exact(&y), Ok(Some(a1)) if fits(&a1, bounds.coeff_degree)
            && (split || shape == SearchShape::YMultiple || a1.terms().any(|(m, _)| m.exps()[0] == 0)))
    });
    let Some(n) = n else { return false };
    if split {
        return *a == x.pow(n);
    }
    let factor = match shape {
        SearchShape::YMultiple => y,
        SearchShape::XkY => &x * &y,
    };
    matches!(b.div_exact(&factor), Ok(Some(b1)) if !b1.is_zero() && fits(&b1, bounds.coeff_degree))
}

fn compare_with_list(
    engine: &Engine,
    report: &mut SearchReport,
    list: &FamilyList,
    space: &Space,
    lifted: &[LocalIdeal],
) -> Result<()> {
    let ring = &space.ring;
    report.list = Some(list.tag);
    report.partial = list.partial;
    let bounds = report.bounds;
    // Every listed ideal that could share a colength with a candidate: units
    // and alphas range over all polynomials of the coefficient degree bound.
    let polys: Vec<Poly> = (0..space.per_coeff).map(|i| space.poly(i)).collect();
    let grid = Grid {
        lmax: bounds.nmax + bounds.coeff_degree + 2,
        units: polys.iter().filter(|p| p.is_unit()).cloned().collect(),
        alphas: polys,
    };
    let instances = list.instances(ring, &grid)?;
    let fs = [report.f.clone()];
    let inst_lifted = instances
        .par_iter()
        .map(|i| {
            let j = i.ideal().with(&fs)?;
            let c = engine.colength(&j)?;
            Ok((j, c))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut found_hit = vec![false; report.found.len()];
    for (k, g) in report.found.iter().enumerate() {
        for (inst, (j, c)) in instances.iter().zip(&inst_lifted) {
            if *c == g.colength && engine.ideal_equal(&lifted[k], j)? {
                report.matched.push((k, inst.label()));
                found_hit[k] = true;
                break;
            }
        }
    }
    report.unmatched = (0..report.found.len()).filter(|&k| !found_hit[k]).collect();

    // Expected: instances that are themselves candidates, one per class.
    let mut expected: Vec<(String, &LocalIdeal, usize)> = Vec::new();
    for (inst, (j, c)) in instances.iter().zip(&inst_lifted) {
        if !is_candidate(inst, report.shape, &bounds) {
            continue;
        }
        let mut dup = false;
        for (_, e, ec) in &expected {
            if ec == c && engine.ideal_equal(e, j)? {
                dup = true;
                break;
            }
        }
        if !dup {
            expected.push((inst.label(), j, *c));
        }
    }
    report.expected = expected.len();
    for (label, j, c) in expected {
        let mut seen = false;
        for (k, g) in report.found.iter().enumerate() {
            if g.colength == c && engine.ideal_equal(&lifted[k], j)? {
                seen = true;
                break;
            }
        }
        if !seen {
            report.missing.push(label);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn search(f: &str, nmax: u32, deg: u32) -> SearchReport {
        let r = Ring::xy(Field::Prime(2));
        let f = Poly::parse(f, &r).unwrap();
        let shape = SearchShape::for_f(&f).unwrap();
        exhaustive_search(&Engine::default(), &f, shape, SearchBounds { nmax, coeff_degree: deg, cap: DEFAULT_SEARCH_CAP })
            .unwrap()
    }

    #[test]
    fn y_square_small() {
        let rep = search("Y^2", 3, 1);
        assert_eq!(rep.found.len(), 3);
        assert!(rep.agrees(), "{rep:?}");
    }

    #[test]
    fn x2y_only_split() {
        let rep = search("X^2*Y", 3, 1);
        assert_eq!(rep.found.len(), 1);
        assert!(rep.found[0].split);
        assert!(rep.agrees());
    }

    #[test]
    fn space_cap() {
        let r = Ring::xy(Field::Prime(3));
        let f = Poly::parse("Y^3", &r).unwrap();
        let err = exhaustive_search(
            &Engine::default(),
            &f,
            SearchShape::YMultiple,
            SearchBounds { nmax: 3, coeff_degree: 3, cap: DEFAULT_SEARCH_CAP },
        );
        assert!(matches!(err, Err(Error::SearchSpace { .. })));
        let rq = Ring::xy(Field::Rational);
        let f = Poly::parse("Y^3", &rq).unwrap();
        let err = exhaustive_search(&Engine::default(), &f, SearchShape::YMultiple, SearchBounds { nmax: 1, coeff_degree: 0, cap: 10 });
        assert!(matches!(err, Err(Error::Unsupported(_))));
    }
}
