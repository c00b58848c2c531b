//! Deciding Ulrich-ness of `I = (a₁, …, a_d, b)R` in `R = S/(f)`.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::echelon::{solve_affine, Scalars};
use crate::engine::{with_scalars, Engine, LocalIdeal, SopStatus};
use crate::error::{Error, NotPrimary, Result};
use crate::field::Field;
use crate::poly::{same_ring, Monomial, Poly, Ring};

/// `b² + Σ aᵢxᵢ = εf` with `xᵢ ∈ (a, b)`, `(a, b)` a system of parameters of
/// `S` and `ε` a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UlrichCertificate {
    pub f: Poly,
    pub a: Vec<Poly>,
    pub b: Poly,
    pub x: Vec<Poly>,
    pub epsilon: Poly,
}

impl UlrichCertificate {
    /// Checks shapes and rings. `a` and `b` must lie in the maximal ideal.
    pub fn new(f: Poly, a: Vec<Poly>, b: Poly, x: Vec<Poly>, epsilon: Poly) -> Result<UlrichCertificate> {
        let ring = f.ring().clone();
        let d = ring.nvars().checked_sub(1).filter(|&d| d >= 1).ok_or_else(|| {
            Error::Dimension("a certificate needs at least two variables".into())
        })?;
        if a.len() != d || x.len() != d {
            return Err(Error::Dimension(format!(
                "expected {d} entries in a and x for {} variables, got {} and {}",
                ring.nvars(),
                a.len(),
                x.len()
            )));
        }
        for p in a.iter().chain(&x).chain([&b, &epsilon]) {
            if !same_ring(p.ring(), &ring) {
                return Err(Error::RingMismatch);
            }
        }
        for p in a.iter().chain([&b]) {
            if p.is_unit() {
                return Err(Error::NotInMaximalIdeal(p.to_string()));
            }
        }
        Ok(UlrichCertificate { f, a, b, x, epsilon })
    }

    /// One-dimensional data `x₁ = aφ + bψ`, `ε = δ`.
    pub fn from_pair(f: Poly, a: Poly, b: Poly, phi: &Poly, psi: &Poly, delta: Poly) -> Result<UlrichCertificate> {
        let x1 = a.checked_mul(phi)?.checked_add(&b.checked_mul(psi)?)?;
        UlrichCertificate::new(f, vec![a], b, vec![x1], delta)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.f.ring()
    }

    pub fn d(&self) -> usize {
        self.a.len()
    }

    /// `g = εf`.
    pub fn g(&self) -> Poly {
        &self.epsilon * &self.f
    }

    /// `b² + Σ aᵢxᵢ`.
    pub fn lhs(&self) -> Poly {
        let mut acc = &self.b * &self.b;
        for (a, x) in self.a.iter().zip(&self.x) {
            acc = &acc + &(a * x);
        }
        acc
    }

    /// Generators `a₁, …, a_d, b`.
    pub fn gens(&self) -> Vec<Poly> {
        let mut g = self.a.clone();
        g.push(self.b.clone());
        g
    }

    pub fn ideal(&self) -> LocalIdeal {
        LocalIdeal::new(self.ring(), self.gens()).expect("certificate generators lie in the maximal ideal")
    }
}

/// The four conditions of a certificate, evaluated separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateCheck {
    pub identity: bool,
    pub unit: bool,
    pub parameters: bool,
    /// Not evaluated (and false) when the generators are not parameters.
    pub membership: bool,
}

impl CertificateCheck {
    pub fn is_valid(&self) -> bool {
        self.identity && self.unit && self.parameters && self.membership
    }

    /// Name of the first failed condition.
    pub fn first_failure(&self) -> Option<&'static str> {
        if !self.identity {
            Some("identity b^2 + sum a_i x_i = epsilon f")
        } else if !self.unit {
            Some("epsilon is a unit")
        } else if !self.parameters {
            Some("(a, b) is a system of parameters")
        } else if !self.membership {
            Some("x_i in (a, b)")
        } else {
            None
        }
    }
}

pub fn check_certificate(engine: &Engine, c: &UlrichCertificate) -> Result<CertificateCheck> {
    let identity = c.lhs() == c.g();
    let unit = c.epsilon.is_unit();
    let parameters = match engine.is_sop(&c.gens())? {
        SopStatus::Parameters { .. } => true,
        SopStatus::NotParameters => false,
        SopStatus::CapExceeded { cap } => return Err(Error::NotPrimary(NotPrimary::CapExceeded { cap })),
    };
    let membership = parameters && engine.contains_all(&c.ideal(), &c.x)?;
    Ok(CertificateCheck { identity, unit, parameters, membership })
}

pub fn verify_certificate(engine: &Engine, c: &UlrichCertificate) -> Result<bool> {
    Ok(check_certificate(engine, c)?.is_valid())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FailureReason {
    /// `μ_R(I) ≠ d + 1`.
    MuMismatch,
    /// No tried `Q` generates an 𝔪-primary ideal of `R`.
    QNotParameter,
    /// `ℓ(R/Q) ≠ 2·ℓ(R/I)`.
    ColengthMismatch,
    /// `I² ≠ QI` in `R`.
    ReductionFails,
}

impl FailureReason {
    pub fn tag(&self) -> &'static str {
        match self {
            FailureReason::MuMismatch => "mu_mismatch",
            FailureReason::QNotParameter => "q_not_parameter",
            FailureReason::ColengthMismatch => "colength_mismatch",
            FailureReason::ReductionFails => "reduction_fails",
        }
    }

    pub fn from_tag(tag: &str) -> Option<FailureReason> {
        [
            FailureReason::MuMismatch,
            FailureReason::QNotParameter,
            FailureReason::ColengthMismatch,
            FailureReason::ReductionFails,
        ]
        .into_iter()
        .find(|r| r.tag() == tag)
    }
}

/// Result of a bounded-degree certificate search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateSearch {
    NotRun,
    Found,
    /// No certificate with coefficient degree `≤ degree`; proves nothing.
    Inconclusive { degree: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UlrichVerdict {
    pub is_ulrich: bool,
    pub mu: usize,
    pub colength_ri: usize,
    /// `ℓ(R/Q)` for the reported reduction, when one was a parameter ideal.
    pub colength_rq: Option<usize>,
    /// Generators of the reported `Q`.
    pub q: Option<Vec<Poly>>,
    pub witness: Option<UlrichCertificate>,
    pub failure_reason: Option<FailureReason>,
    pub certificate_search: CertificateSearch,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UlrichOptions {
    /// Indices of the generators forming `Q`; all `d`-subsets when absent.
    pub q_choice: Option<Vec<usize>>,
    /// Extra reductions tried after the subsets and the combinations
    /// `gᵢ + c·g_d` (`c = 1, -1, 2`): random combinations of the generators
    /// with nonzero constant coefficients.
    pub random_reductions: usize,
    pub seed: u64,
    pub search_certificate: bool,
    /// Coefficient degree bound for the search; the stable truncation order
    /// of `I + (f)` when absent.
    pub certificate_degree: Option<u32>,
}

enum Attempt {
    Success { colength_rq: usize },
    Fail { reason: FailureReason, colength_rq: Option<usize> },
    Undecided { cap: usize },
}

fn try_reduction(engine: &Engine, i: &LocalIdeal, q: &[Poly], f: &Poly, colength_ri: usize) -> Result<Attempt> {
    let ring = i.ring();
    let q_ideal = LocalIdeal::new(ring, q.to_vec())?;
    let qf = q_ideal.with(std::slice::from_ref(f))?;
    let colength_rq = match engine.colength(&qf) {
        Ok(c) => c,
        Err(Error::NotPrimary(NotPrimary::MissingPurePower { .. })) => {
            return Ok(Attempt::Fail { reason: FailureReason::QNotParameter, colength_rq: None })
        }
        Err(Error::NotPrimary(NotPrimary::CapExceeded { cap })) => return Ok(Attempt::Undecided { cap }),
        Err(e) => return Err(e),
    };
    if colength_rq != 2 * colength_ri {
        return Ok(Attempt::Fail { reason: FailureReason::ColengthMismatch, colength_rq: Some(colength_rq) });
    }
    // QI ⊆ I² always, so containment of I² decides equality.
    let qi = q_ideal.product(i)?.with(std::slice::from_ref(f))?;
    if !engine.contains_all(&qi, i.square().gens())? {
        return Ok(Attempt::Fail { reason: FailureReason::ReductionFails, colength_rq: Some(colength_rq) });
    }
    Ok(Attempt::Success { colength_rq })
}

fn random_constant(field: &Field, rng: &mut ChaCha8Rng) -> crate::field::FieldElem {
    match field {
        Field::Prime(p) => field.from_i64(rng.gen_range(1..*p) as i64),
        Field::Rational => {
            let v: i64 = rng.gen_range(1..=9);
            field.from_i64(if rng.gen_bool(0.5) { v } else { -v })
        }
    }
}

/// Decides whether `(gens)R` is an Ulrich ideal of `R = S/(f)`, where the
/// number of generators equals the number of variables `d + 1`.
pub fn is_ulrich(engine: &Engine, gens: &[Poly], f: &Poly, opts: &UlrichOptions) -> Result<UlrichVerdict> {
    let ring = f.ring().clone();
    if f.is_zero() {
        return Err(Error::Input("f must be nonzero".into()));
    }
    if f.is_unit() {
        return Err(Error::NotInMaximalIdeal(f.to_string()));
    }
    let n = ring.nvars();
    if gens.len() != n {
        return Err(Error::Dimension(format!("expected {n} generators, got {}", gens.len())));
    }
    let d = n - 1;
    let i = LocalIdeal::new(&ring, gens.to_vec())?;
    let i_f = i.with(std::slice::from_ref(f))?;
    let colength_ri = engine.colength(&i_f)?;
    let mu = engine.mu_relative(&i, std::slice::from_ref(f))?;
    let mut verdict = UlrichVerdict {
        is_ulrich: false,
        mu,
        colength_ri,
        colength_rq: None,
        q: None,
        witness: None,
        failure_reason: None,
        certificate_search: CertificateSearch::NotRun,
    };
    if mu != d + 1 {
        verdict.failure_reason = Some(FailureReason::MuMismatch);
        return Ok(verdict);
    }

    // Candidate reductions with the generator that completes them to I.
    let mut candidates: Vec<(Vec<Poly>, Option<Poly>)> = Vec::new();
    match &opts.q_choice {
        Some(idx) => {
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != d || sorted.iter().any(|&k| k >= n) {
                return Err(Error::Input(format!("q_choice must name {d} distinct generator indices below {n}")));
            }
            let rest = (0..n).find(|k| !sorted.contains(k)).expect("one index left");
            candidates.push((sorted.iter().map(|&k| gens[k].clone()).collect(), Some(gens[rest].clone())));
        }
        None => {
            for omit in (0..n).rev() {
                let q = (0..n).filter(|&k| k != omit).map(|k| gens[k].clone()).collect();
                candidates.push((q, Some(gens[omit].clone())));
            }
            // Subsets miss reductions such as (X + Y) for 𝔪 in S/(XY).
            let field = ring.field();
            let mut consts = vec![field.one(), field.from_i64(-1), field.from_i64(2)];
            consts.retain(|c| !c.is_zero());
            consts.dedup();
            for c in consts {
                let q = (0..d).map(|k| &gens[k] + &gens[d].scale(&c)).collect();
                candidates.push((q, Some(gens[d].clone())));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            for _ in 0..opts.random_reductions {
                let q = (0..d)
                    .map(|_| {
                        let mut acc = Poly::zero(&ring);
                        for g in gens {
                            acc = &acc + &g.scale(&random_constant(ring.field(), &mut rng));
                        }
                        acc
                    })
                    .collect();
                candidates.push((q, None));
            }
        }
    }

    let mut first_failure: Option<(FailureReason, Option<usize>, Vec<Poly>)> = None;
    let mut undecided = None;
    let mut success = None;
    for (q, b) in candidates {
        match try_reduction(engine, &i, &q, f, colength_ri)? {
            Attempt::Success { colength_rq } => {
                success = Some((q, b, colength_rq));
                break;
            }
            Attempt::Fail { reason, colength_rq } => {
                let better = match &first_failure {
                    None => true,
                    Some((FailureReason::QNotParameter, ..)) => reason != FailureReason::QNotParameter,
                    Some(_) => false,
                };
                if better {
                    first_failure = Some((reason, colength_rq, q));
                }
            }
            Attempt::Undecided { cap } => undecided = undecided.or(Some(cap)),
        }
    }

    let Some((q, b, colength_rq)) = success else {
        match first_failure {
            Some((reason, colength_rq, q)) if reason != FailureReason::QNotParameter || undecided.is_none() => {
                verdict.failure_reason = Some(reason);
                verdict.colength_rq = colength_rq;
                verdict.q = colength_rq.map(|_| q);
                return Ok(verdict);
            }
            _ => match undecided {
                Some(cap) => return Err(Error::NotPrimary(NotPrimary::CapExceeded { cap })),
                None => {
                    verdict.failure_reason = Some(FailureReason::QNotParameter);
                    return Ok(verdict);
                }
            },
        }
    };
    verdict.is_ulrich = true;
    verdict.colength_rq = Some(colength_rq);
    verdict.q = Some(q.clone());

    if opts.search_certificate {
        let degree = match opts.certificate_degree {
            Some(dg) => dg,
            None => engine.stable_truncation(&i_f)?.order(),
        };
        let b = match b {
            Some(b) => Some(b),
            None => completing_generator(engine, &i_f, &q, gens, f)?,
        };
        let found = match b {
            Some(b) => search_certificate(engine, &q, &b, f, degree)?,
            None => None,
        };
        verdict.certificate_search = match found {
            Some(c) => {
                verdict.witness = Some(c);
                CertificateSearch::Found
            }
            None => CertificateSearch::Inconclusive { degree },
        };
    }
    Ok(verdict)
}

/// A generator `b` with `Q + (b) + (f) = I + (f)`.
fn completing_generator(engine: &Engine, i_f: &LocalIdeal, q: &[Poly], gens: &[Poly], f: &Poly) -> Result<Option<Poly>> {
    for b in gens {
        let mut cand = q.to_vec();
        cand.push(b.clone());
        cand.push(f.clone());
        let j = LocalIdeal::new(f.ring(), cand)?;
        if engine.ideal_equal(&j, i_f)? {
            return Ok(Some(b.clone()));
        }
    }
    Ok(None)
}

/// Searches `xᵢ = Σⱼ cᵢⱼgⱼ` (with `g = (a, b)`) and `ε` with polynomial
/// coefficients of degree `≤ degree` solving `b² + Σ aᵢxᵢ = εf` exactly and
/// `ε(0) ≠ 0`. Returns a verified certificate or `None`.
pub fn search_certificate(engine: &Engine, a: &[Poly], b: &Poly, f: &Poly, degree: u32) -> Result<Option<UlrichCertificate>> {
    let ring = f.ring().clone();
    let found = with_scalars!(ring.field(), s => search_in(&s, &ring, a, b, f, degree));
    let Some(c) = found else { return Ok(None) };
    Ok(verify_certificate(engine, &c)?.then_some(c))
}

fn search_in<S: Scalars>(s: &S, ring: &Arc<Ring>, a: &[Poly], b: &Poly, f: &Poly, degree: u32) -> Option<UlrichCertificate> {
    let nv = ring.nvars();
    let basis = Monomial::below_degree(nv, degree + 1);
    let mut gens = a.to_vec();
    gens.push(b.clone());
    // Unknown blocks: products aᵢgⱼ for each (i, j), then -f for ε.
    let mut blocks: Vec<Poly> = Vec::new();
    for ai in a {
        for g in &gens {
            blocks.push(ai * g);
        }
    }
    blocks.push(-f);
    let ncols = blocks.len() * basis.len();
    let mut rows: HashMap<Monomial, usize> = HashMap::new();
    let mut matrix: Vec<Vec<S::E>> = Vec::new();
    let mut row_of = |m: Monomial, matrix: &mut Vec<Vec<S::E>>| -> usize {
        *rows.entry(m).or_insert_with(|| {
            matrix.push(vec![s.zero(); ncols]);
            matrix.len() - 1
        })
    };
    for (k, block) in blocks.iter().enumerate() {
        for (t_idx, t) in basis.iter().enumerate() {
            let col = k * basis.len() + t_idx;
            for (m, c) in block.terms() {
                let r = row_of(t.mul(m), &mut matrix);
                matrix[r][col] = s.lift(c);
            }
        }
    }
    let b2 = b * b;
    let targets: Vec<(usize, S::E)> =
        b2.terms().map(|(m, c)| (row_of(m.clone(), &mut matrix), s.neg(&s.lift(c)))).collect();
    let mut rhs = vec![s.zero(); matrix.len()];
    for (r, v) in targets {
        rhs[r] = v;
    }
    let (particular, kernel) = solve_affine(s, matrix, rhs, ncols)?;
    let eps_const = (blocks.len() - 1) * basis.len();
    let solution = if !s.is_zero(&particular[eps_const]) {
        particular
    } else {
        let k = kernel.into_iter().find(|k| !s.is_zero(&k[eps_const]))?;
        particular.iter().zip(&k).map(|(p, v)| s.sub_mul(p, &s.neg(&s.one()), v)).collect()
    };
    let coeff_poly = |block: usize| {
        Poly::from_terms(
            ring,
            basis.iter().enumerate().map(|(t_idx, t)| (t.clone(), s.lower(&solution[block * basis.len() + t_idx]))),
        )
    };
    let d = a.len();
    let x: Vec<Poly> = (0..d)
        .map(|i| {
            let mut acc = Poly::zero(ring);
            for (j, g) in gens.iter().enumerate() {
                acc = &acc + &(&coeff_poly(i * gens.len() + j) * g);
            }
            acc
        })
        .collect();
    let epsilon = coeff_poly(blocks.len() - 1);
    UlrichCertificate::new(f.clone(), a.to_vec(), b.clone(), x, epsilon).ok()
}

/// `f ∈ (gens)²`, a necessary condition for Ulrich-ness when `S` is regular.
pub fn necessary_f_in_i2(engine: &Engine, gens: &[Poly], f: &Poly) -> Result<bool> {
    let i = LocalIdeal::new(f.ring(), gens.to_vec())?;
    engine.member(f, &i.square())
}

/// `ab = ρf` for a unit `ρ`. Only polynomial quotients are detected.
pub fn is_decomposable_pair(a: &Poly, b: &Poly, f: &Poly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::Input("f must be nonzero".into()));
    }
    let ab = a.checked_mul(b)?;
    Ok(ab.div_exact(f)?.is_some_and(|rho| rho.is_unit()))
}

/// The hypersurface form of the annihilator condition `(a) = 0 :_R b`,
/// `(b) = 0 :_R a`: a decomposable pair that is also a system of parameters.
pub fn annihilator_pair_check(engine: &Engine, a: &Poly, b: &Poly, f: &Poly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::Input("f must be nonzero".into()));
    }
    let ab = a.checked_mul(b)?;
    if ab.div_exact(f)?.is_none() {
        return Err(Error::Precondition(format!("ab = {ab} is not a multiple of f = {f}")));
    }
    if !is_decomposable_pair(a, b, f)? {
        return Ok(false);
    }
    Ok(engine.is_sop(&[a.clone(), b.clone()])?.is_sop())
}
