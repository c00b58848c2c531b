//! JSON forms of certificates, verdicts, resolutions and catalog reports.
//! Polynomials travel as strings in the input grammar. Every top-level
//! document carries `"schema": 1`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::{FamilyInstance, SearchReport};
use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::poly::{Poly, Ring};
use crate::engine::Engine;
use crate::resolution::{betti, complex_defects, fitting_ideal_check, minimality_check, rank_sequence, ResolutionData};
use crate::ulrich::{CertificateCheck, CertificateSearch, UlrichCertificate, UlrichVerdict};

pub const SCHEMA: u32 = 1;

fn strings(ps: &[Poly]) -> Vec<String> {
    ps.iter().map(Poly::to_string).collect()
}

fn polys(ring: &Arc<Ring>, ss: &[String]) -> Result<Vec<Poly>> {
    ss.iter().map(|s| Poly::parse(s, ring)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub f: String,
    pub a: Vec<String>,
    pub b: String,
    pub x: Vec<String>,
    pub epsilon: String,
}

impl From<&UlrichCertificate> for CertificateJson {
    fn from(c: &UlrichCertificate) -> Self {
        CertificateJson {
            f: c.f.to_string(),
            a: strings(&c.a),
            b: c.b.to_string(),
            x: strings(&c.x),
            epsilon: c.epsilon.to_string(),
        }
    }
}

impl CertificateJson {
    pub fn to_certificate(&self, ring: &Arc<Ring>) -> Result<UlrichCertificate> {
        UlrichCertificate::new(
            Poly::parse(&self.f, ring)?,
            polys(ring, &self.a)?,
            Poly::parse(&self.b, ring)?,
            polys(ring, &self.x)?,
            Poly::parse(&self.epsilon, ring)?,
        )
    }
}

/// A certificate file: the certificate plus optional ring information.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    pub certificate: CertificateJson,
}

impl CertificateFile {
    pub fn new(c: &UlrichCertificate) -> CertificateFile {
        let ring = c.ring();
        CertificateFile {
            schema: SCHEMA,
            field: Some(ring.field().to_string()),
            vars: Some(ring.vars().to_vec()),
            certificate: c.into(),
        }
    }

    pub fn parse(text: &str) -> Result<CertificateFile> {
        let file: CertificateFile = serde_json::from_str(text)?;
        check_schema(file.schema)?;
        Ok(file)
    }
}

pub fn check_schema(schema: u32) -> Result<()> {
    if schema != SCHEMA {
        return Err(Error::Input(format!("unsupported schema {schema}, expected {SCHEMA}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl From<&PolyMatrix> for MatrixJson {
    fn from(m: &PolyMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect()).collect(),
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self, ring: &Arc<Ring>) -> Result<PolyMatrix> {
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(Error::Dimension(format!("matrix entries do not match {}x{}", self.rows, self.cols)));
        }
        let rows = self.entries.iter().map(|r| polys(ring, r)).collect::<Result<Vec<_>>>()?;
        if self.rows == 0 {
            return Ok(PolyMatrix::zeros(ring, 0, self.cols));
        }
        PolyMatrix::from_rows(ring, rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckJson {
    pub schema: u32,
    pub valid: bool,
    pub identity: bool,
    pub unit: bool,
    pub parameters: bool,
    pub membership: bool,
    pub failed: Option<String>,
    pub certificate: CertificateJson,
}

impl CheckJson {
    pub fn new(c: &UlrichCertificate, check: &CertificateCheck) -> CheckJson {
        CheckJson {
            schema: SCHEMA,
            valid: check.is_valid(),
            identity: check.identity,
            unit: check.unit,
            parameters: check.parameters,
            membership: check.membership,
            failed: check.first_failure().map(str::to_string),
            certificate: c.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CertificateSearchJson {
    NotRun,
    Found,
    Inconclusive { degree: u32 },
}

impl From<&CertificateSearch> for CertificateSearchJson {
    fn from(s: &CertificateSearch) -> Self {
        match s {
            CertificateSearch::NotRun => CertificateSearchJson::NotRun,
            CertificateSearch::Found => CertificateSearchJson::Found,
            CertificateSearch::Inconclusive { degree } => CertificateSearchJson::Inconclusive { degree: *degree },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub schema: u32,
    pub f: String,
    pub ideal: Vec<String>,
    pub is_ulrich: bool,
    pub mu: usize,
    pub colength_ri: usize,
    pub colength_rq: Option<usize>,
    pub q: Option<Vec<String>>,
    pub failure_reason: Option<String>,
    pub witness: Option<CertificateJson>,
    pub certificate_search: CertificateSearchJson,
}

impl VerdictJson {
    pub fn new(f: &Poly, gens: &[Poly], v: &UlrichVerdict) -> VerdictJson {
        VerdictJson {
            schema: SCHEMA,
            f: f.to_string(),
            ideal: strings(gens),
            is_ulrich: v.is_ulrich,
            mu: v.mu,
            colength_ri: v.colength_ri,
            colength_rq: v.colength_rq,
            q: v.q.as_deref().map(strings),
            failure_reason: v.failure_reason.map(|r| r.tag().to_string()),
            witness: v.witness.as_ref().map(CertificateJson::from),
            certificate_search: (&v.certificate_search).into(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionChecksJson {
    pub complex: bool,
    pub defects: Vec<String>,
    pub minimal: bool,
    /// Absent in symbolic mode, where `(a, b)` is not primary.
    pub fitting: Option<bool>,
    pub ranks: Vec<usize>,
    pub betti: Vec<String>,
    pub betti_match: bool,
}

impl ResolutionChecksJson {
    /// Runs every check on `r`. The Fitting ideal check is skipped when `fitting` is false.
    pub fn compute(engine: &Engine, r: &ResolutionData, fitting: bool) -> Result<ResolutionChecksJson> {
        let defects = complex_defects(r);
        let i_max = r.d + 3;
        let ranks = rank_sequence(r, i_max);
        let betti: Vec<String> = (0..=i_max).map(|i| betti(r.d, i, 1).to_string()).collect();
        let betti_match = ranks.iter().map(usize::to_string).collect::<Vec<_>>() == betti;
        let fitting = if fitting { Some(fitting_ideal_check(engine, r)?) } else { None };
        Ok(ResolutionChecksJson { complex: defects.is_empty(), defects, minimal: minimality_check(r), fitting, ranks, betti, betti_match })
    }

    pub fn passed(&self) -> bool {
        self.complex && self.minimal && self.fitting != Some(false) && self.betti_match
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionJson {
    pub schema: u32,
    pub d: usize,
    pub g: String,
    pub ranks: Vec<usize>,
    pub matrices: Vec<MatrixJson>,
    pub certificate: CertificateJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<ResolutionChecksJson>,
}

impl ResolutionJson {
    pub fn new(r: &ResolutionData, checks: Option<ResolutionChecksJson>) -> ResolutionJson {
        let certificate = CertificateJson {
            f: r.f.to_string(),
            a: strings(&r.a),
            b: r.b.to_string(),
            x: strings(&r.x),
            epsilon: r.epsilon.to_string(),
        };
        ResolutionJson {
            schema: SCHEMA,
            d: r.d,
            g: r.g.to_string(),
            ranks: r.ranks(),
            matrices: r.differentials.iter().map(MatrixJson::from).collect(),
            certificate,
            checks,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub f: String,
    pub ideal: Vec<String>,
    pub certificate: Option<CertificateJson>,
}

impl From<&FamilyInstance> for InstanceJson {
    fn from(i: &FamilyInstance) -> Self {
        let p = &i.params;
        let mut params = BTreeMap::new();
        for (name, v) in [("k", p.k), ("m", p.m), ("l", p.l), ("n", p.n), ("p", p.p)] {
            if let Some(v) = v {
                params.insert(name.to_string(), v.to_string());
            }
        }
        if let Some(e) = &p.epsilon {
            params.insert("epsilon".into(), e.to_string());
        }
        if let Some(a) = &p.alpha {
            params.insert("alpha".into(), a.to_string());
        }
        InstanceJson {
            family: i.family.tag().to_string(),
            params,
            f: i.f.to_string(),
            ideal: strings(&i.gens),
            certificate: i.certificate.as_ref().map(CertificateJson::from),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateJson {
    pub schema: u32,
    pub tag: String,
    pub partial: bool,
    pub families: Vec<String>,
    pub instances: Vec<InstanceJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsJson {
    pub nmax: u32,
    pub coeff_degree: u32,
    pub cap: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoundJson {
    pub ideal: Vec<String>,
    pub colength: usize,
    pub n: u32,
    pub split: bool,
    pub representations: usize,
    pub matched: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchJson {
    pub schema: u32,
    pub f: String,
    pub field: String,
    pub shape: String,
    pub bounds: BoundsJson,
    pub candidates: String,
    pub ulrich_candidates: usize,
    pub list: Option<String>,
    pub partial: bool,
    pub found: Vec<FoundJson>,
    pub unmatched: Vec<Vec<String>>,
    pub missing: Vec<String>,
    pub expected: usize,
    pub max_n: Option<u32>,
    pub agrees: bool,
}

impl From<&SearchReport> for SearchJson {
    fn from(r: &SearchReport) -> Self {
        let matched: BTreeMap<usize, &String> = r.matched.iter().map(|(k, l)| (*k, l)).collect();
        SearchJson {
            schema: SCHEMA,
            f: r.f.to_string(),
            field: r.f.ring().field().to_string(),
            shape: r.shape.tag().to_string(),
            bounds: BoundsJson {
                nmax: r.bounds.nmax,
                coeff_degree: r.bounds.coeff_degree,
                cap: r.bounds.cap.to_string(),
            },
            candidates: r.candidates.to_string(),
            ulrich_candidates: r.ulrich_candidates,
            list: r.list.map(|t| t.to_string()),
            partial: r.partial,
            found: r
                .found
                .iter()
                .enumerate()
                .map(|(k, g)| FoundJson {
                    ideal: strings(g.ideal.gens()),
                    colength: g.colength,
                    n: g.n,
                    split: g.split,
                    representations: g.representations,
                    matched: matched.get(&k).map(|l| l.to_string()),
                })
                .collect(),
            unmatched: r.unmatched.iter().map(|&k| strings(r.found[k].ideal.gens())).collect(),
            missing: r.missing.clone(),
            expected: r.expected,
            max_n: r.max_n,
            agrees: r.agrees(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposablesJson {
    pub schema: u32,
    pub f: String,
    pub pairs: Vec<Vec<String>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Engine;
    use crate::field::Field;
    use crate::resolution::build_resolution;

    fn cert() -> UlrichCertificate {
        let r = Ring::xy(Field::Rational);
        let p = |s: &str| Poly::parse(s, &r).unwrap();
        UlrichCertificate::new(p("Y^3"), vec![p("X^2 + Y")], p("X*Y"), vec![p("-Y^2")], p("-1")).unwrap()
    }

    #[test]
    fn certificate_file_round_trip() {
        let c = cert();
        let text = serde_json::to_string(&CertificateFile::new(&c)).unwrap();
        assert!(text.contains("\"schema\":1"));
        let back = CertificateFile::parse(&text).unwrap();
        assert_eq!(back.certificate.to_certificate(c.ring()).unwrap(), c);
        let bad = text.replace("\"schema\":1", "\"schema\":2");
        assert!(matches!(CertificateFile::parse(&bad), Err(Error::Input(_))));
    }

    #[test]
    fn resolution_round_trip() {
        let c = cert();
        let r = build_resolution(&Engine::default(), &c).unwrap();
        let j = ResolutionJson::new(&r, None);
        let text = serde_json::to_string(&j).unwrap();
        let back: ResolutionJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
        for (m, mj) in r.differentials.iter().zip(&back.matrices) {
            assert_eq!(&mj.to_matrix(c.ring()).unwrap(), m);
        }
        assert_eq!(back.certificate.to_certificate(c.ring()).unwrap(), c);
    }

    #[test]
    fn search_status_tags() {
        let j = serde_json::to_string(&CertificateSearchJson::Inconclusive { degree: 3 }).unwrap();
        assert_eq!(j, r#"{"status":"inconclusive","degree":3}"#);
    }
}
