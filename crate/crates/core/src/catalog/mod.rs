//! Classified Ulrich-ideal families in `k[[X, Y]]/(f)` for `f = Y^k` and
//! `f = X^kY`, decomposable pairs for a factored `f`, and the brute-force
//! search that cross-checks the lists.

mod search;

pub use search::{exhaustive_search, FoundIdeal, SearchBounds, SearchReport, SearchShape, DEFAULT_SEARCH_CAP};

use std::fmt;
use std::sync::Arc;

use crate::engine::{Engine, LocalIdeal};
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::poly::{Poly, Ring};
use crate::ulrich::UlrichCertificate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `(X^l, Y)` in `S/(Y²)`.
    YSquare,
    /// `(X^{2l} + εY, X^l Y^m)` in `S/(Y^{2m+1})`.
    YOdd,
    /// `(X^l + αY, Y^m)` in `S/(Y^{2m})`, `m ≥ 2`.
    YEven,
    /// `(X^n + 2X^{n-p}Y, Y(X^p + Y))` in `S/(Y⁴)`, `0 < p < n`, `2n ≤ 3p`.
    YFourMixed,
    /// `(X^k, Y)` in `S/(X^kY)`.
    XkYSplit,
    /// `(X^{k-2} + εY, XY)` in `S/(X^kY)`, `k ≥ 3`.
    XkYWithXY,
    /// `(X + εY^l, XY^p)` in `S/(X^kY)`, `k` odd, `(k-2)l = 2p - 1`.
    XkYLinear,
}

/// Static description of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyDescriptor {
    pub family: Family,
    pub name: &'static str,
    pub f_template: &'static str,
    pub gens_template: [&'static str; 2],
    pub params: &'static [&'static str],
    pub constraints: &'static [&'static str],
}

/// Named parameters. Unset fields are reported as missing when needed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params {
    pub k: Option<u32>,
    pub m: Option<u32>,
    pub l: Option<u32>,
    pub n: Option<u32>,
    pub p: Option<u32>,
    /// A unit of `S`.
    pub epsilon: Option<Poly>,
    pub alpha: Option<Poly>,
}

impl Params {
    fn int(&self, name: &str) -> Result<u32> {
        let v = match name {
            "k" => self.k,
            "m" => self.m,
            "l" => self.l,
            "n" => self.n,
            "p" => self.p,
            _ => None,
        };
        v.ok_or_else(|| Error::Constraint(format!("missing parameter {name}")))
    }

    fn unit(&self, ring: &Arc<Ring>) -> Result<Poly> {
        let eps = self.epsilon.clone().unwrap_or_else(|| Poly::one(ring));
        if !eps.is_unit() {
            return Err(Error::Constraint(format!("epsilon = {eps} must be a unit")));
        }
        Ok(eps)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, v) in [("k", self.k), ("m", self.m), ("l", self.l), ("n", self.n), ("p", self.p)] {
            if let Some(v) = v {
                parts.push(format!("{name}={v}"));
            }
        }
        if let Some(e) = &self.epsilon {
            parts.push(format!("epsilon={e}"));
        }
        if let Some(a) = &self.alpha {
            parts.push(format!("alpha={a}"));
        }
        write!(f, "{}", parts.join(", "))
    }
}

/// A family member with its generators and, for constant units, a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyInstance {
    pub family: Family,
    pub params: Params,
    pub f: Poly,
    pub gens: [Poly; 2],
    pub certificate: Option<UlrichCertificate>,
}

impl FamilyInstance {
    pub fn ideal(&self) -> LocalIdeal {
        LocalIdeal::new(self.f.ring(), self.gens.to_vec()).expect("family generators lie in the maximal ideal")
    }

    pub fn label(&self) -> String {
        format!("{}[{}]", self.family.tag(), self.params)
    }
}

fn x(ring: &Arc<Ring>, e: u32) -> Poly {
    Poly::monomial(ring, &[e, 0])
}

fn y(ring: &Arc<Ring>, e: u32) -> Poly {
    Poly::monomial(ring, &[0, e])
}

fn xy(ring: &Arc<Ring>, i: u32, j: u32) -> Poly {
    Poly::monomial(ring, &[i, j])
}

fn constant_inverse(eps: &Poly) -> Result<Poly> {
    let ring = eps.ring();
    if eps.num_terms() != 1 || !eps.is_unit() {
        return Err(Error::Unsupported(format!("certificate formulas need a nonzero constant unit, got {eps}")));
    }
    let inv = ring.field().inv(&eps.constant_term()).expect("nonzero constant");
    Ok(Poly::constant(ring, inv))
}

fn int_poly(ring: &Arc<Ring>, v: i64) -> Poly {
    Poly::from_i64(ring, v)
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::YSquare,
        Family::YOdd,
        Family::YEven,
        Family::YFourMixed,
        Family::XkYSplit,
        Family::XkYWithXY,
        Family::XkYLinear,
    ];

    pub fn tag(&self) -> &'static str {
        self.descriptor().name
    }

    pub fn from_tag(tag: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.tag() == tag)
    }

    pub fn descriptor(&self) -> FamilyDescriptor {
        let (name, f_template, gens_template, params, constraints): (_, _, _, &'static [&'static str], &'static [&'static str]) =
            match self {
                Family::YSquare => ("y-square", "Y^2", ["X^l", "Y"], &["l"], &["l > 0"]),
                Family::YOdd => (
                    "y-odd",
                    "Y^(2m+1)",
                    ["X^(2l) + epsilon*Y", "X^l*Y^m"],
                    &["m", "l", "epsilon"],
                    &["m >= 1", "l > 0", "epsilon unit"],
                ),
                Family::YEven => (
                    "y-even",
                    "Y^(2m)",
                    ["X^l + alpha*Y", "Y^m"],
                    &["m", "l", "alpha"],
                    &["m >= 2", "l > 0"],
                ),
                Family::YFourMixed => (
                    "y4-mixed",
                    "Y^4",
                    ["X^n + 2*X^(n-p)*Y", "Y*(X^p + Y)"],
                    &["n", "p"],
                    &["0 < p < n", "2n <= 3p"],
                ),
                Family::XkYSplit => ("xky-split", "X^k*Y", ["X^k", "Y"], &["k"], &["k >= 1"]),
                Family::XkYWithXY => (
                    "xky-xy",
                    "X^k*Y",
                    ["X^(k-2) + epsilon*Y", "X*Y"],
                    &["k", "epsilon"],
                    &["k >= 3", "epsilon unit"],
                ),
                Family::XkYLinear => (
                    "xky-linear",
                    "X^k*Y",
                    ["X + epsilon*Y^l", "X*Y^p"],
                    &["k", "l", "p", "epsilon"],
                    &["k odd, k >= 3", "l, p > 0", "(k-2)l = 2p-1", "epsilon unit"],
                ),
            };
        FamilyDescriptor { family: *self, name, f_template, gens_template, params, constraints }
    }

    /// Checks the integer constraints.
    pub fn check(&self, params: &Params) -> Result<()> {
        let fail = |c: &str| Err(Error::Constraint(format!("{}: {c}", self.tag())));
        match self {
            Family::YSquare => {
                if params.int("l")? == 0 {
                    return fail("l > 0");
                }
            }
            Family::YOdd => {
                if params.int("m")? < 1 {
                    return fail("m >= 1");
                }
                if params.int("l")? == 0 {
                    return fail("l > 0");
                }
            }
            Family::YEven => {
                if params.int("m")? < 2 {
                    return fail("m >= 2");
                }
                if params.int("l")? == 0 {
                    return fail("l > 0");
                }
            }
            Family::YFourMixed => {
                let (n, p) = (params.int("n")?, params.int("p")?);
                if !(0 < p && p < n) {
                    return fail("0 < p < n");
                }
                if 2 * n > 3 * p {
                    return fail("2n <= 3p");
                }
            }
            Family::XkYSplit => {
                if params.int("k")? < 1 {
                    return fail("k >= 1");
                }
            }
            Family::XkYWithXY => {
                if params.int("k")? < 3 {
                    return fail("k >= 3");
                }
            }
            Family::XkYLinear => {
                let (k, l, p) = (params.int("k")?, params.int("l")?, params.int("p")?);
                if k < 3 || k % 2 == 0 {
                    return fail("k odd, k >= 3");
                }
                if l == 0 || p == 0 {
                    return fail("l, p > 0");
                }
                if (k - 2) * l != 2 * p - 1 {
                    return fail("(k-2)l = 2p-1");
                }
            }
        }
        Ok(())
    }

    pub fn f(&self, ring: &Arc<Ring>, params: &Params) -> Result<Poly> {
        Ok(match self {
            Family::YSquare => y(ring, 2),
            Family::YOdd => y(ring, 2 * params.int("m")? + 1),
            Family::YEven => y(ring, 2 * params.int("m")?),
            Family::YFourMixed => y(ring, 4),
            Family::XkYSplit | Family::XkYWithXY | Family::XkYLinear => xy(ring, params.int("k")?, 1),
        })
    }

    /// Generators of the family member.
    pub fn gens(&self, ring: &Arc<Ring>, params: &Params) -> Result<[Poly; 2]> {
        check_ring(ring)?;
        self.check(params)?;
        let int = |n| params.int(n);
        Ok(match self {
            Family::YSquare => [x(ring, int("l")?), y(ring, 1)],
            Family::YOdd => {
                let (m, l) = (int("m")?, int("l")?);
                let eps = params.unit(ring)?;
                [&x(ring, 2 * l) + &(&eps * &y(ring, 1)), xy(ring, l, m)]
            }
            Family::YEven => {
                let (m, l) = (int("m")?, int("l")?);
                let alpha = params.alpha.clone().unwrap_or_else(|| Poly::zero(ring));
                [&x(ring, l) + &(&alpha * &y(ring, 1)), y(ring, m)]
            }
            Family::YFourMixed => {
                let (n, p) = (int("n")?, int("p")?);
                [&x(ring, n) + &(&int_poly(ring, 2) * &xy(ring, n - p, 1)), &y(ring, 1) * &(&x(ring, p) + &y(ring, 1))]
            }
            Family::XkYSplit => [x(ring, int("k")?), y(ring, 1)],
            Family::XkYWithXY => {
                let eps = params.unit(ring)?;
                [&x(ring, int("k")? - 2) + &(&eps * &y(ring, 1)), xy(ring, 1, 1)]
            }
            Family::XkYLinear => {
                let eps = params.unit(ring)?;
                [&x(ring, 1) + &(&eps * &y(ring, int("l")?)), xy(ring, 1, int("p")?)]
            }
        })
    }

    /// The built-in certificate. Needs a constant unit.
    pub fn certificate(&self, ring: &Arc<Ring>, params: &Params) -> Result<UlrichCertificate> {
        let [a, b] = self.gens(ring, params)?;
        let f = self.f(ring, params)?;
        let int = |n| params.int(n);
        let zero = Poly::zero(ring);
        let one = Poly::one(ring);
        match self {
            Family::YSquare | Family::YEven => UlrichCertificate::new(f, vec![a], b, vec![zero], one),
            Family::YOdd => {
                let (m, l) = (int("m")?, int("l")?);
                let eps = params.unit(ring)?;
                let inv = constant_inverse(&eps)?;
                let phi = -&(&inv * &y(ring, 2 * m - 1));
                let psi = &inv * &xy(ring, l, m - 1);
                UlrichCertificate::from_pair(f, a, b, &phi, &psi, -&eps)
            }
            Family::YFourMixed => {
                let (n, p) = (int("n")?, int("p")?);
                let phi = -&xy(ring, 3 * p - 2 * n, 1);
                let psi = x(ring, 2 * p - n);
                UlrichCertificate::from_pair(f, a, b, &phi, &psi, one)
            }
            Family::XkYSplit => {
                // (α, β) = (X^k, Y) with a = α + β, b = β, x = -β, ε = -1.
                let (alpha, beta) = (a, b);
                let a = &alpha + &beta;
                let x1 = -&beta;
                UlrichCertificate::new(f, vec![a], beta, vec![x1], -&one)
            }
            Family::XkYWithXY => {
                let inv = constant_inverse(&params.unit(ring)?)?;
                let psi = -&(&inv * &x(ring, 1));
                UlrichCertificate::from_pair(f, a, b, &zero, &psi, -&inv)
            }
            Family::XkYLinear => {
                let (k, l, p) = (int("k")?, int("l")?, int("p")?);
                let inv = constant_inverse(&params.unit(ring)?)?;
                let inv_pow = |e: u32| inv.pow(e);
                let sign = |e: u32| if e.is_multiple_of(2) { one.clone() } else { -&one };
                let (phi, psi) = if k == 3 {
                    (-&(&inv * &xy(ring, 1, 1)), y(ring, p))
                } else {
                    let mut phi = Poly::zero(ring);
                    for i in 0..=k - 4 {
                        let coeff = &(&sign(i + k) * &int_poly(ring, i as i64 + 1)) * &inv_pow(k - 2 - i);
                        phi = &phi + &(&coeff * &xy(ring, k - 2 - i, i * l + 1));
                    }
                    let psi = -&(&(&int_poly(ring, k as i64 - 2) * &inv) * &xy(ring, 1, p - l));
                    (phi, psi)
                };
                let delta = &sign(k) * &inv_pow(k - 2);
                UlrichCertificate::from_pair(f, a, b, &phi, &psi, delta)
            }
        }
    }

    /// Generators plus a certificate when the unit is constant.
    pub fn instance(&self, ring: &Arc<Ring>, params: &Params) -> Result<FamilyInstance> {
        let gens = self.gens(ring, params)?;
        let f = self.f(ring, params)?;
        let certificate = match self.certificate(ring, params) {
            Ok(c) => Some(c),
            Err(Error::Unsupported(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(FamilyInstance { family: *self, params: params.clone(), f, gens, certificate })
    }
}

fn check_ring(ring: &Arc<Ring>) -> Result<()> {
    if ring.nvars() != 2 {
        return Err(Error::Variables(format!("families live in two variables, got {}", ring.nvars())));
    }
    Ok(())
}

/// Parameter grid for [`family_instances`] and [`FamilyList::instances`].
#[derive(Clone, Debug)]
pub struct Grid {
    /// Bound for the free integer parameters `l`, `n`, `p`.
    pub lmax: u32,
    pub units: Vec<Poly>,
    pub alphas: Vec<Poly>,
}

impl Grid {
    /// Units: all nonzero constants over `𝔽_p`, `{1}` over `ℚ`. Alphas: `{0}`.
    pub fn constants(ring: &Arc<Ring>, lmax: u32) -> Grid {
        let units = match ring.field().nonzero_elements() {
            Some(elems) => elems.into_iter().map(|c| Poly::constant(ring, c)).collect(),
            None => vec![Poly::one(ring)],
        };
        Grid { lmax, units, alphas: vec![Poly::zero(ring)] }
    }
}

/// Instances of one family for fixed `k`/`m` (from `fixed`) over the grid.
pub fn family_instances(family: Family, ring: &Arc<Ring>, fixed: &Params, grid: &Grid) -> Result<Vec<FamilyInstance>> {
    check_ring(ring)?;
    let mut out = Vec::new();
    let with = |f: &dyn Fn(&mut Params)| {
        let mut p = fixed.clone();
        f(&mut p);
        p
    };
    let mut push = |p: Params| -> Result<()> {
        out.push(family.instance(ring, &p)?);
        Ok(())
    };
    match family {
        Family::YSquare => {
            for l in 1..=grid.lmax {
                push(with(&|p| p.l = Some(l)))?;
            }
        }
        Family::YOdd => {
            for l in 1..=grid.lmax {
                for e in &grid.units {
                    push(with(&|p| {
                        p.l = Some(l);
                        p.epsilon = Some(e.clone());
                    }))?;
                }
            }
        }
        Family::YEven => {
            for l in 1..=grid.lmax {
                for a in &grid.alphas {
                    push(with(&|p| {
                        p.l = Some(l);
                        p.alpha = Some(a.clone());
                    }))?;
                }
            }
        }
        Family::YFourMixed => {
            for n in 2..=grid.lmax {
                for pp in 1..n {
                    if 2 * n <= 3 * pp {
                        push(with(&|p| {
                            p.n = Some(n);
                            p.p = Some(pp);
                        }))?;
                    }
                }
            }
        }
        Family::XkYSplit => push(fixed.clone())?,
        Family::XkYWithXY => {
            for e in &grid.units {
                push(with(&|p| p.epsilon = Some(e.clone())))?;
            }
        }
        Family::XkYLinear => {
            let k = fixed.int("k")?;
            for pp in 1..=grid.lmax {
                if (2 * pp - 1) % (k - 2) != 0 {
                    continue;
                }
                let l = (2 * pp - 1) / (k - 2);
                for e in &grid.units {
                    push(with(&|p| {
                        p.l = Some(l);
                        p.p = Some(pp);
                        p.epsilon = Some(e.clone());
                    }))?;
                }
            }
        }
    }
    Ok(out)
}

/// The shape of `f` a list refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FTag {
    /// `Y^k`
    YPower(u32),
    /// `X^k·Y`
    XPowerY(u32),
}

impl FTag {
    pub fn parse(tag: &str) -> Result<FTag> {
        let t: String = tag.chars().filter(|c| *c != '^' && !c.is_whitespace()).collect();
        let bad = || Error::Unsupported(format!("f tag `{tag}`"));
        let num = |s: &str| -> Result<u32> {
            if s.is_empty() {
                return Ok(1);
            }
            s.parse::<u32>().map_err(|_| bad()).and_then(|v| if v == 0 { Err(bad()) } else { Ok(v) })
        };
        if let Some(rest) = t.strip_prefix('X') {
            let exp = rest.strip_suffix('Y').ok_or_else(bad)?;
            return Ok(FTag::XPowerY(num(exp)?));
        }
        if let Some(exp) = t.strip_prefix('Y') {
            return Ok(FTag::YPower(num(exp)?));
        }
        Err(bad())
    }

    /// Recognizes `Y^k` and `X^k·Y` (unit coefficient) in two variables.
    pub fn of_poly(f: &Poly) -> Option<FTag> {
        if f.ring().nvars() != 2 || f.num_terms() != 1 {
            return None;
        }
        let (m, c) = f.leading_term()?;
        if !c.is_one() {
            return None;
        }
        match m.exps() {
            [0, k] if *k >= 1 => Some(FTag::YPower(*k)),
            [k, 1] if *k >= 1 => Some(FTag::XPowerY(*k)),
            _ => None,
        }
    }

    pub fn poly(&self, ring: &Arc<Ring>) -> Poly {
        match self {
            FTag::YPower(k) => y(ring, *k),
            FTag::XPowerY(k) => xy(ring, *k, 1),
        }
    }
}

impl fmt::Display for FTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FTag::YPower(k) => write!(f, "Y{k}"),
            FTag::XPowerY(1) => write!(f, "XY"),
            FTag::XPowerY(k) => write!(f, "X{k}Y"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListEntry {
    pub family: Family,
    pub fixed: Params,
}

/// All known Ulrich ideals for one `f`, as families. `partial` marks lists
/// that are known to be incomplete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyList {
    pub tag: FTag,
    pub entries: Vec<ListEntry>,
    pub partial: bool,
}

impl FamilyList {
    pub fn instances(&self, ring: &Arc<Ring>, grid: &Grid) -> Result<Vec<FamilyInstance>> {
        let mut out = Vec::new();
        for e in &self.entries {
            out.extend(family_instances(e.family, ring, &e.fixed, grid)?);
        }
        Ok(out)
    }
}

pub fn full_list(tag: FTag) -> Result<FamilyList> {
    let entry = |family, fixed| ListEntry { family, fixed };
    let k_only = |k| Params { k: Some(k), ..Default::default() };
    let m_only = |m| Params { m: Some(m), ..Default::default() };
    let (entries, partial) = match tag {
        FTag::YPower(2) => (vec![entry(Family::YSquare, Params::default())], false),
        FTag::YPower(3) => (vec![entry(Family::YOdd, m_only(1))], false),
        FTag::YPower(4) => (vec![entry(Family::YEven, m_only(2)), entry(Family::YFourMixed, Params::default())], true),
        FTag::YPower(k) if k % 2 == 0 && k >= 6 => (vec![entry(Family::YEven, m_only(k / 2))], true),
        FTag::XPowerY(k @ (1 | 2)) => (vec![entry(Family::XkYSplit, k_only(k))], false),
        FTag::XPowerY(3) => (vec![entry(Family::XkYSplit, k_only(3)), entry(Family::XkYLinear, k_only(3))], false),
        FTag::XPowerY(4) => (vec![entry(Family::XkYSplit, k_only(4)), entry(Family::XkYWithXY, k_only(4))], false),
        other => return Err(Error::Unsupported(format!("no classification list for f tag {other}"))),
    };
    Ok(FamilyList { tag, entries, partial })
}

/// Pairs `(α_J, β_J)` with `α_J = ∏_{j∈J} p_j^{e_j}`, `β_J` the complementary
/// product, one per `{J, Λ∖J}`: the smaller side, or on a tie the side
/// containing the first factor.
pub fn decomposables(engine: &Engine, prime_powers: &[(Poly, u32)]) -> Result<Vec<LocalIdeal>> {
    let l = prime_powers.len();
    if l < 2 {
        return Ok(Vec::new());
    }
    if l > 20 {
        return Err(Error::Input(format!("{l} factors is too many")));
    }
    let ring = prime_powers[0].0.ring().clone();
    for (p, e) in prime_powers {
        if *e == 0 {
            return Err(Error::Input("exponents must be positive".into()));
        }
        if p.is_unit() || p.is_zero() {
            return Err(Error::NotInMaximalIdeal(p.to_string()));
        }
        if !crate::poly::same_ring(p.ring(), &ring) {
            return Err(Error::RingMismatch);
        }
    }
    if ring.nvars() == 2 {
        for i in 0..l {
            for j in i + 1..l {
                let pair = [prime_powers[i].0.clone(), prime_powers[j].0.clone()];
                if !engine.is_sop(&pair)?.is_sop() {
                    return Err(Error::Precondition(format!(
                        "factors {} and {} are not coprime",
                        pair[0], pair[1]
                    )));
                }
            }
        }
    }
    let powers: Vec<Poly> = prime_powers.iter().map(|(p, e)| p.pow(*e)).collect();
    let mut masks: Vec<u32> = (1..(1u32 << l) - 1)
        .filter(|&mask| {
            let ones = mask.count_ones() as usize;
            2 * ones < l || (2 * ones == l && mask & 1 == 1)
        })
        .collect();
    masks.sort_by_key(|&mask| (mask.count_ones(), mask.reverse_bits()));
    masks.reverse();
    masks.sort_by_key(|&mask| mask.count_ones());
    let product = |sel: &dyn Fn(usize) -> bool| {
        (0..l).filter(|&j| sel(j)).fold(Poly::one(&ring), |acc, j| &acc * &powers[j])
    };
    masks
        .into_iter()
        .map(|mask| {
            let alpha = product(&|j| mask >> j & 1 == 1);
            let beta = product(&|j| mask >> j & 1 == 0);
            LocalIdeal::new(&ring, vec![alpha, beta])
        })
        .collect()
}

/// Result of matching two ideal lists under equality in `S/(f)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SetComparison {
    /// `(found index, expected index)`
    pub matched: Vec<(usize, usize)>,
    /// Expected but not found.
    pub missing: Vec<usize>,
    /// Found but not expected.
    pub extra: Vec<usize>,
}

impl SetComparison {
    pub fn is_exact(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

/// One-to-one matching under equality of `J + (modulo)`. Equality is an
/// equivalence relation, so greedy matching is maximum.
pub fn ideal_set_compare(
    engine: &Engine,
    found: &[LocalIdeal],
    expected: &[LocalIdeal],
    modulo: &[Poly],
) -> Result<SetComparison> {
    let lift = |j: &LocalIdeal| -> Result<LocalIdeal> {
        if modulo.is_empty() {
            Ok(j.clone())
        } else {
            j.with(modulo)
        }
    };
    let found_l = found.iter().map(lift).collect::<Result<Vec<_>>>()?;
    let expected_l = expected.iter().map(lift).collect::<Result<Vec<_>>>()?;
    let found_c = found_l.iter().map(|j| engine.colength(j)).collect::<Result<Vec<_>>>()?;
    let expected_c = expected_l.iter().map(|j| engine.colength(j)).collect::<Result<Vec<_>>>()?;
    let mut used = vec![false; expected.len()];
    let mut out = SetComparison::default();
    for (i, fi) in found_l.iter().enumerate() {
        let mut hit = None;
        for (j, ej) in expected_l.iter().enumerate() {
            if !used[j] && found_c[i] == expected_c[j] && engine.ideal_equal(fi, ej)? {
                hit = Some(j);
                break;
            }
        }
        match hit {
            Some(j) => {
                used[j] = true;
                out.matched.push((i, j));
            }
            None => out.extra.push(i),
        }
    }
    out.missing = (0..expected.len()).filter(|&j| !used[j]).collect();
    Ok(out)
}

/// Constants of a prime field as polynomials; `None` over `ℚ`.
pub(crate) fn field_constants(ring: &Arc<Ring>) -> Option<Vec<FieldElem>> {
    let p = ring.field().characteristic();
    (p > 0).then(|| (0..p).map(|v| ring.field().from_i64(v as i64)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::ulrich::{is_ulrich, verify_certificate, UlrichOptions};

    fn q() -> Arc<Ring> {
        Ring::xy(Field::Rational)
    }

    fn p(r: &Arc<Ring>, s: &str) -> Poly {
        Poly::parse(s, r).unwrap()
    }

    fn params(k: Option<u32>, m: Option<u32>, l: Option<u32>, n: Option<u32>, pp: Option<u32>) -> Params {
        Params { k, m, l, n, p: pp, ..Default::default() }
    }

    #[test]
    fn y_odd_instance() {
        let r = q();
        let inst = Family::YOdd.instance(&r, &params(None, Some(1), Some(2), None, None)).unwrap();
        assert_eq!(inst.gens, [p(&r, "X^4 + Y"), p(&r, "X^2*Y")]);
        let c = inst.certificate.unwrap();
        assert_eq!(c.x[0], p(&r, "-X^4*Y - Y^2 + X^4*Y"));
        assert!(verify_certificate(&Engine::default(), &c).unwrap());
    }

    #[test]
    fn xky_linear_k3() {
        let r = q();
        let inst = Family::XkYLinear.instance(&r, &params(Some(3), None, Some(1), None, Some(1))).unwrap();
        assert_eq!(inst.gens, [p(&r, "X + Y"), p(&r, "X*Y")]);
        let c = inst.certificate.unwrap();
        assert_eq!(c.epsilon, p(&r, "-1"));
        assert!(verify_certificate(&Engine::default(), &c).unwrap());
    }

    #[test]
    fn xky_linear_higher_k() {
        let r = q();
        let e = Engine::default();
        // (k-2)l = 2p-1: k=5, l=1, p=2 and k=7, l=1, p=3 and k=5, l=3, p=5.
        for (k, l, pp) in [(5, 1, 2), (7, 1, 3), (5, 3, 5)] {
            for eps in ["1", "2", "-1/3"] {
                let mut prm = params(Some(k), None, Some(l), None, Some(pp));
                prm.epsilon = Some(p(&r, eps));
                let c = Family::XkYLinear.certificate(&r, &prm).unwrap();
                assert!(verify_certificate(&e, &c).unwrap(), "k={k} l={l} p={pp} eps={eps}");
            }
        }
    }

    #[test]
    fn y_even_cor() {
        let r = q();
        let mut prm = params(None, Some(2), Some(3), None, None);
        prm.alpha = Some(Poly::zero(&r));
        let inst = Family::YEven.instance(&r, &prm).unwrap();
        assert_eq!(inst.gens, [p(&r, "X^3"), p(&r, "Y^2")]);
    }

    #[test]
    fn constraints_are_named() {
        let r = q();
        let bad = Family::XkYLinear.instance(&r, &params(Some(3), None, Some(2), None, Some(1)));
        assert_eq!(bad, Err(Error::Constraint("xky-linear: (k-2)l = 2p-1".into())));
        let bad = Family::YFourMixed.instance(&r, &params(None, None, None, Some(4), Some(2)));
        assert_eq!(bad, Err(Error::Constraint("y4-mixed: 2n <= 3p".into())));
        let missing = Family::YOdd.instance(&r, &params(None, None, Some(1), None, None));
        assert_eq!(missing, Err(Error::Constraint("missing parameter m".into())));
    }

    #[test]
    fn every_family_verifies_and_is_ulrich() {
        let r = q();
        let e = Engine::default();
        for tag in ["Y2", "Y3", "Y4", "Y6", "XY", "X2Y", "X3Y", "X4Y"] {
            let list = full_list(FTag::parse(tag).unwrap()).unwrap();
            let grid = Grid { lmax: 3, units: vec![p(&r, "1"), p(&r, "-2")], alphas: vec![p(&r, "0"), p(&r, "X")] };
            for inst in list.instances(&r, &grid).unwrap() {
                let c = inst.certificate.as_ref().unwrap();
                assert!(verify_certificate(&e, c).unwrap(), "{}", inst.label());
                let v = is_ulrich(&e, &inst.gens, &inst.f, &UlrichOptions::default()).unwrap();
                assert!(v.is_ulrich, "{}", inst.label());
            }
        }
    }

    #[test]
    fn list_shapes() {
        assert_eq!(full_list(FTag::YPower(3)).unwrap().entries.len(), 1);
        let x4y = full_list(FTag::parse("X^4Y").unwrap()).unwrap();
        assert_eq!(x4y.entries.iter().map(|e| e.family).collect::<Vec<_>>(), vec![Family::XkYSplit, Family::XkYWithXY]);
        assert!(!x4y.partial);
        assert!(full_list(FTag::YPower(4)).unwrap().partial);
        assert!(matches!(full_list(FTag::YPower(5)), Err(Error::Unsupported(_))));
        assert!(matches!(FTag::parse("Z3"), Err(Error::Unsupported(_))));
        assert_eq!(FTag::parse("XY").unwrap(), FTag::XPowerY(1));
    }

    #[test]
    fn decomposable_lists() {
        let r = q();
        let e = Engine::default();
        let d = decomposables(&e, &[(p(&r, "X"), 3), (p(&r, "Y"), 1)]).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].gens(), &[p(&r, "X^3"), p(&r, "Y")]);
        let d = decomposables(&e, &[(p(&r, "X"), 1), (p(&r, "Y"), 1), (p(&r, "X + Y"), 1)]).unwrap();
        let got: Vec<Vec<Poly>> = d.iter().map(|j| j.gens().to_vec()).collect();
        assert_eq!(
            got,
            vec![
                vec![p(&r, "X"), p(&r, "X*Y + Y^2")],
                vec![p(&r, "Y"), p(&r, "X^2 + X*Y")],
                vec![p(&r, "X + Y"), p(&r, "X*Y")],
            ]
        );
        assert!(decomposables(&e, &[(p(&r, "X"), 2)]).unwrap().is_empty());
        assert!(matches!(
            decomposables(&e, &[(p(&r, "X"), 1), (p(&r, "X"), 2)]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn set_comparison() {
        let r = q();
        let e = Engine::default();
        let found = vec![LocalIdeal::parse(&r, &["X", "Y"]).unwrap()];
        let expected = vec![LocalIdeal::parse(&r, &["Y", "X"]).unwrap()];
        let c = ideal_set_compare(&e, &found, &expected, &[]).unwrap();
        assert_eq!(c.matched, vec![(0, 0)]);
        assert!(c.is_exact());
        let found = vec![LocalIdeal::parse(&r, &["X^2", "Y"]).unwrap()];
        let expected = vec![LocalIdeal::parse(&r, &["X^3", "Y"]).unwrap()];
        let c = ideal_set_compare(&e, &found, &expected, &[]).unwrap();
        assert_eq!((c.missing, c.extra), (vec![0], vec![0]));
    }

    #[test]
    fn distinct_parameters_give_distinct_ideals() {
        let r = Ring::xy(Field::Prime(3));
        let e = Engine::default();
        let list = full_list(FTag::YPower(3)).unwrap();
        let inst = list.instances(&r, &Grid::constants(&r, 3)).unwrap();
        assert_eq!(inst.len(), 6);
        let f = [inst[0].f.clone()];
        for i in 0..inst.len() {
            for j in i + 1..inst.len() {
                let a = inst[i].ideal().with(&f).unwrap();
                let b = inst[j].ideal().with(&f).unwrap();
                assert!(!e.ideal_equal(&a, &b).unwrap(), "{} vs {}", inst[i].label(), inst[j].label());
            }
        }
    }
}
