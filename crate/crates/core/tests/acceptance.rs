//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ulrich_core::catalog::{
    decomposables, exhaustive_search, family_instances, ideal_set_compare, Family, Grid, Params, SearchBounds,
    SearchReport, SearchShape, DEFAULT_SEARCH_CAP,
};
use ulrich_core::engine::{Engine, LocalIdeal};
use ulrich_core::field::Field;
use ulrich_core::matrix::PolyMatrix;
use ulrich_core::poly::{Monomial, Poly, Ring};
use ulrich_core::resolution::{
    betti, build_resolution, build_resolution_unchecked, complex_defects, fitting_ideal_check, rank_sequence,
    symbolic_resolution, symbolic_ring,
};
use ulrich_core::ulrich::{
    is_decomposable_pair, is_ulrich, necessary_f_in_i2, verify_certificate, UlrichCertificate, UlrichOptions,
};

struct Failure {
    msg: String,
    /// A failure analysed and recorded as unattainable by a correct build.
    documented: bool,
}

impl Failure {
    fn new(e: impl ToString) -> Failure {
        Failure { msg: e.to_string(), documented: false }
    }
}

impl From<String> for Failure {
    fn from(msg: String) -> Failure {
        Failure { msg, documented: false }
    }
}

impl From<&str> for Failure {
    fn from(msg: &str) -> Failure {
        Failure::new(msg)
    }
}

type Outcome = Result<String, Failure>;

fn p(r: &Arc<Ring>, s: &str) -> Poly {
    Poly::parse(s, r).unwrap()
}

fn matrix(r: &Arc<Ring>, rows: &[&[&str]]) -> PolyMatrix {
    let rows: Vec<Vec<Poly>> = rows.iter().map(|row| row.iter().map(|s| p(r, s)).collect()).collect();
    PolyMatrix::from_rows(r, rows).unwrap()
}

fn symbolic_example() -> Outcome {
    let displayed: Vec<Vec<&[&[&str]]>> = vec![
        vec![&[&["a1", "b"]], &[&["-b", "x1"], &["a1", "b"]]],
        vec![
            &[&["a1", "a2", "b"]],
            &[&["-a2", "-b", "0", "x1"], &["a1", "0", "-b", "x2"], &["0", "a1", "a2", "b"]],
            &[
                &["b", "-x2", "x1", "0"],
                &["-a2", "-b", "0", "x1"],
                &["a1", "0", "-b", "x2"],
                &["0", "a1", "a2", "b"],
            ],
        ],
        vec![
            &[&["a1", "a2", "a3", "b"]],
            &[
                &["-a2", "-a3", "0", "-b", "0", "0", "x1"],
                &["a1", "0", "-a3", "0", "-b", "0", "x2"],
                &["0", "a1", "a2", "0", "0", "-b", "x3"],
                &["0", "0", "0", "a1", "a2", "a3", "b"],
            ],
            &[
                &["a3", "b", "0", "0", "-x2", "x1", "0", "0"],
                &["-a2", "0", "b", "0", "-x3", "0", "x1", "0"],
                &["a1", "0", "0", "b", "0", "x3", "x2", "0"],
                &["0", "-a2", "-a3", "0", "-b", "0", "0", "x1"],
                &["0", "a1", "0", "-a3", "0", "-b", "0", "x2"],
                &["0", "0", "a1", "a2", "0", "0", "-b", "x3"],
                &["0", "0", "0", "0", "a1", "a2", "a3", "b"],
            ],
            &[
                &["-b", "x3", "-x2", "x1", "0", "0", "0", "0"],
                &["a3", "b", "0", "0", "-x2", "x1", "0", "0"],
                &["-a2", "0", "b", "0", "-x3", "0", "x1", "0"],
                &["a1", "0", "0", "b", "0", "x3", "x2", "0"],
                &["0", "-a2", "-a3", "0", "-b", "0", "0", "x1"],
                &["0", "a1", "0", "-a3", "0", "-b", "0", "x2"],
                &["0", "0", "a1", "a2", "0", "0", "-b", "x3"],
                &["0", "0", "0", "0", "a1", "a2", "a3", "b"],
            ],
        ],
    ];
    let mut compared = 0;
    let mut diffs = Vec::new();
    let mut differing = 0;
    let mut displayed_defects = Vec::new();
    let mut built_defects = Vec::new();
    for (k, mats) in displayed.iter().enumerate() {
        let d = k + 1;
        let ring = symbolic_ring(d, Field::Rational).map_err(Failure::new)?;
        let r = symbolic_resolution(d, Field::Rational).map_err(Failure::new)?;
        let mut shown = r.clone();
        for (i, rows) in mats.iter().enumerate() {
            let want = matrix(&ring, rows);
            let got = &r.differentials[i];
            differing += usize::from(*got != want);
            for (row, want_row) in rows.iter().enumerate() {
                for col in 0..want_row.len() {
                    if got.get(row, col) != want.get(row, col) {
                        diffs.push(format!(
                            "d={d} D{}[{},{}] shown {}, built {}",
                            i + 1,
                            row + 1,
                            col + 1,
                            want.get(row, col),
                            got.get(row, col)
                        ));
                    }
                }
            }
            shown.differentials[i] = want;
            compared += 1;
        }
        displayed_defects.extend(complex_defects(&shown).into_iter().map(|m| format!("d={d} {m}")));
        built_defects.extend(complex_defects(&r).into_iter().map(|m| format!("d={d} {m}")));
    }
    if diffs.is_empty() {
        return Ok(format!("{compared} matrices equal"));
    }
    let msg = format!(
        "{} of {compared} matrices differ in {} entries: {}; displayed matrices violate {:?}; built matrices violate {:?}",
        differing,
        diffs.len(),
        diffs.join("; "),
        displayed_defects,
        built_defects
    );
    // The d=3 display carries +x3 at one entry of D3 and D4 where the Koszul
    // block gives -x3. With the displayed sign the matrices are not a complex.
    let known = [
        "d=3 D3[3,6] shown x3, built -x3".to_string(),
        "d=3 D4[4,6] shown x3, built -x3".to_string(),
    ];
    let documented = diffs == known && built_defects.is_empty() && !displayed_defects.is_empty();
    Err(Failure { msg, documented })
}

fn pair_identity(r: &Arc<Ring>, a: &str, b: &str, phi: &str, psi: &str, rhs: &str) -> Result<(), String> {
    let (a, b, phi, psi, rhs) = (p(r, a), p(r, b), p(r, phi), p(r, psi), p(r, rhs));
    let lhs = &(&(&(&a * &a) * &phi) + &(&(&a * &b) * &psi)) + &(&b * &b);
    if lhs != rhs {
        return Err(format!("got {lhs}, want {rhs}"));
    }
    Ok(())
}

fn certificate_identities() -> Result<String, String> {
    let r = Ring::xy(Field::Rational);
    let checks = [
        ("odd power m=1 l=1", "X^2 + Y", "X*Y", "-Y", "X", "-Y^3"),
        ("Y^4 mixed n=3 p=2", "X^3 + 2*X*Y", "X^2*Y + Y^2", "-Y", "X", "Y^4"),
        ("X^3Y linear l=1 p=1", "X + Y", "X*Y", "-X*Y", "Y", "-X^3*Y"),
    ];
    for (name, a, b, phi, psi, rhs) in checks {
        let t = Instant::now();
        pair_identity(&r, a, b, phi, psi, rhs).map_err(|e| format!("{name}: {e}"))?;
        if t.elapsed() > Duration::from_millis(10) {
            return Err(format!("{name}: took {:?}", t.elapsed()));
        }
    }
    // The catalog produces the same certificates.
    let e = Engine::default();
    let built = [
        Family::YOdd.certificate(&r, &Params { m: Some(1), l: Some(1), ..Default::default() }),
        Family::YFourMixed.certificate(&r, &Params { n: Some(3), p: Some(2), ..Default::default() }),
        Family::XkYLinear.certificate(&r, &Params { k: Some(3), l: Some(1), p: Some(1), ..Default::default() }),
    ];
    for c in built {
        let c = c.map_err(|e| e.to_string())?;
        if !verify_certificate(&e, &c).map_err(|e| e.to_string())? {
            return Err(format!("catalog certificate for {} rejected", c.ideal()));
        }
    }
    Ok("3 identities exact".into())
}

fn colengths() -> Result<String, String> {
    let r = Ring::xy(Field::Rational);
    let e = Engine::default();
    let mut got = Vec::new();
    for (gens, want) in [(["X^2 + Y", "Y^3"], 6), (["X^2 + Y", "X*Y"], 3), (["X + Y", "X^3*Y"], 4)] {
        let j = LocalIdeal::parse(&r, &gens).unwrap();
        let c = e.colength(&j).map_err(|e| e.to_string())?;
        if c != want {
            return Err(format!("colength of {j} is {c}, want {want}"));
        }
        got.push(c);
    }
    if got[0] != 2 * got[1] {
        return Err("ratio is not 2".into());
    }
    Ok(format!("{got:?}"))
}

fn random_in_max(rng: &mut ChaCha8Rng, ring: &Arc<Ring>) -> Poly {
    let n = ring.nvars();
    let terms = (1..=2u32).flat_map(|deg| Monomial::of_degree(n, deg)).filter_map(|m| {
        let c: i64 = rng.gen_range(0..7);
        (c != 0).then(|| (m, ring.field().from_i64(c)))
    });
    let terms: Vec<_> = terms.collect();
    Poly::from_terms(ring, terms)
}

fn random_certificates() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut total = 0;
    for d in 1..=3 {
        let ring = Ring::indexed(Field::Prime(7), d + 1);
        for _ in 0..100 {
            let a: Vec<Poly> = (0..d).map(|_| random_in_max(&mut rng, &ring)).collect();
            let b = random_in_max(&mut rng, &ring);
            let x: Vec<Poly> = (0..d).map(|_| random_in_max(&mut rng, &ring)).collect();
            let eps = Poly::from_i64(&ring, rng.gen_range(1..7));
            let eps_inv = Poly::constant(&ring, ring.field().inv(&eps.constant_term()).unwrap());
            let mut g = &b * &b;
            for (ai, xi) in a.iter().zip(&x) {
                g = &g + &(ai * xi);
            }
            let f = &eps_inv * &g;
            let c = UlrichCertificate::new(f, a, b, x, eps).map_err(|e| e.to_string())?;
            let r = build_resolution_unchecked(&c).map_err(|e| e.to_string())?;
            let defects = complex_defects(&r);
            if !defects.is_empty() {
                return Err(format!("d={d}: {defects:?} for {c:?}"));
            }
            total += 1;
        }
    }
    Ok(format!("{total} complexes exact"))
}

fn small_instances(ring: &Arc<Ring>) -> Vec<ulrich_core::catalog::FamilyInstance> {
    let grid = Grid {
        lmax: 3,
        units: ["1", "2", "3"].iter().map(|s| p(ring, s)).collect(),
        alphas: ["0", "1", "2", "3"].iter().map(|s| p(ring, s)).collect(),
    };
    let m = |v| Params { m: Some(v), ..Default::default() };
    let k = |v| Params { k: Some(v), ..Default::default() };
    let choices = [
        (Family::YSquare, Params::default()),
        (Family::YOdd, m(1)),
        (Family::YOdd, m(2)),
        (Family::YOdd, m(3)),
        (Family::YEven, m(2)),
        (Family::YEven, m(3)),
        (Family::XkYSplit, k(1)),
        (Family::XkYSplit, k(2)),
        (Family::XkYSplit, k(3)),
        (Family::XkYWithXY, k(3)),
        (Family::XkYLinear, k(3)),
    ];
    let mut out = Vec::new();
    for (family, fixed) in choices {
        out.extend(family_instances(family, ring, &fixed, &grid).unwrap());
    }
    out.extend(family_instances(Family::YFourMixed, ring, &Params::default(), &grid).unwrap());
    out
}

fn betti_consistency() -> Result<String, String> {
    let ring = Ring::xy(Field::Rational);
    let e = Engine::default();
    let instances = small_instances(&ring);
    for inst in &instances {
        let c = inst.certificate.as_ref().ok_or("instance without certificate")?;
        let r = build_resolution(&e, c).map_err(|err| format!("{}: {err}", inst.label()))?;
        let d = r.d;
        let ranks = rank_sequence(&r, d + 3);
        let want: Vec<usize> = (0..=d + 3).map(|i| usize::try_from(betti(d, i, 1)).unwrap()).collect();
        if ranks != want {
            return Err(format!("{}: ranks {ranks:?}, want {want:?}", inst.label()));
        }
        if !fitting_ideal_check(&e, &r).map_err(|err| err.to_string())? {
            return Err(format!("{}: fitting ideal check failed", inst.label()));
        }
    }
    Ok(format!("{} instances", instances.len()))
}

struct Searches {
    reports: Vec<(&'static str, SearchReport)>,
}

fn run_searches() -> Result<Searches, String> {
    let ring = Ring::xy(Field::Prime(2));
    let e = Engine::default();
    let bounds = SearchBounds { nmax: 3, coeff_degree: 2, cap: DEFAULT_SEARCH_CAP };
    let mut reports = Vec::new();
    for f in ["Y^2", "X*Y", "X^2*Y", "Y^3", "X^3*Y"] {
        let fp = p(&ring, f);
        let shape = SearchShape::for_f(&fp).unwrap();
        let rep = exhaustive_search(&e, &fp, shape, bounds).map_err(|err| format!("{f}: {err}"))?;
        reports.push((f, rep));
    }
    Ok(Searches { reports })
}

fn classification(s: &Searches) -> Result<String, String> {
    let ring = Ring::xy(Field::Prime(2));
    let e = Engine::default();
    let mut summary = Vec::new();
    for (f, rep) in &s.reports {
        let found: Vec<LocalIdeal> = rep.found.iter().map(|g| g.ideal.clone()).collect();
        let fp = [p(&ring, f)];
        let exact = |want: Vec<[&str; 2]>| -> Result<(), String> {
            let want: Vec<LocalIdeal> = want.iter().map(|g| LocalIdeal::parse(&ring, g).unwrap()).collect();
            let cmp = ideal_set_compare(&e, &found, &want, &fp).map_err(|err| err.to_string())?;
            if !cmp.is_exact() {
                return Err(format!("{f}: found {found:?}, comparison {cmp:?}"));
            }
            Ok(())
        };
        match *f {
            "Y^2" => exact(vec![["X", "Y"], ["X^2", "Y"], ["X^3", "Y"]])?,
            "X*Y" => exact(vec![["X", "Y"]])?,
            "X^2*Y" => exact(vec![["X^2", "Y"]])?,
            _ => {}
        }
        if !rep.unmatched.is_empty() {
            let bad: Vec<String> = rep.unmatched.iter().map(|&k| rep.found[k].ideal.to_string()).collect();
            return Err(format!("{f}: unmatched {bad:?}"));
        }
        if *f == "X^3*Y" && !rep.missing.is_empty() {
            return Err(format!("{f}: missing {:?}", rep.missing));
        }
        summary.push(format!("{f}: {} found/{} cands", rep.found.len(), rep.candidates));
    }
    Ok(summary.join(", "))
}

fn decomposable_lists() -> Result<String, String> {
    let ring = Ring::xy(Field::Rational);
    let e = Engine::default();
    let lists: Vec<Vec<(&str, u32)>> = vec![
        vec![("X", 2), ("Y", 1)],
        vec![("X + Y", 1), ("X - Y", 2)],
        vec![("X", 1), ("Y", 1), ("X + Y", 1)],
        vec![("X", 2), ("Y", 1), ("X - Y", 1)],
    ];
    let mut pairs = 0;
    for list in lists {
        let pp: Vec<(Poly, u32)> = list.iter().map(|(s, k)| (p(&ring, s), *k)).collect();
        let f = pp.iter().fold(Poly::one(&ring), |acc, (q, k)| &acc * &q.pow(*k));
        let out = decomposables(&e, &pp).map_err(|err| err.to_string())?;
        let want = (1usize << (pp.len() - 1)) - 1;
        if out.len() != want {
            return Err(format!("{list:?}: {} pairs, want {want}", out.len()));
        }
        for j in &out {
            let [alpha, beta] = [&j.gens()[0], &j.gens()[1]];
            if !is_decomposable_pair(alpha, beta, &f).map_err(|err| err.to_string())? {
                return Err(format!("{j} is not a decomposable pair for {f}"));
            }
            let v = is_ulrich(&e, j.gens(), &f, &UlrichOptions::default()).map_err(|err| err.to_string())?;
            if !v.is_ulrich {
                return Err(format!("{j} is not Ulrich for {f}: {:?}", v.failure_reason));
            }
            pairs += 1;
        }
    }
    let x3y = decomposables(&e, &[(p(&ring, "X"), 3), (p(&ring, "Y"), 1)]).map_err(|err| err.to_string())?;
    let want = [LocalIdeal::parse(&ring, &["X^3", "Y"]).unwrap()];
    let cmp = ideal_set_compare(&e, &x3y, &want, &[]).map_err(|err| err.to_string())?;
    if !cmp.is_exact() {
        return Err(format!("X^3*Y gave {x3y:?}"));
    }
    Ok(format!("{pairs} pairs"))
}

fn chain(s: &Searches) -> Result<String, String> {
    let e = Engine::default();
    let opts = UlrichOptions::default();
    let mut checked = 0;
    let mut certified = Vec::new();

    let q = Ring::xy(Field::Rational);
    certified.push(Family::YOdd.certificate(&q, &Params { m: Some(1), l: Some(1), ..Default::default() }));
    certified.push(Family::YFourMixed.certificate(&q, &Params { n: Some(3), p: Some(2), ..Default::default() }));
    certified.push(Family::XkYLinear.certificate(&q, &Params { k: Some(3), l: Some(1), p: Some(1), ..Default::default() }));
    for list in [vec![("X", 3), ("Y", 1)], vec![("X", 1), ("Y", 1), ("X + Y", 1)], vec![("X", 2), ("Y", 1)]] {
        let pp: Vec<(Poly, u32)> = list.iter().map(|(s, k)| (p(&q, s), *k)).collect();
        let f = pp.iter().fold(Poly::one(&q), |acc, (g, k)| &acc * &g.pow(*k));
        for j in decomposables(&e, &pp).map_err(|err| err.to_string())? {
            let (alpha, beta) = (j.gens()[0].clone(), j.gens()[1].clone());
            certified.push(UlrichCertificate::new(f.clone(), vec![&alpha + &beta], beta.clone(), vec![-&beta], p(&q, "-1")));
        }
    }
    for c in certified {
        let c = c.map_err(|err| err.to_string())?;
        if !verify_certificate(&e, &c).map_err(|err| err.to_string())? {
            return Err(format!("certificate for {} rejected", c.ideal()));
        }
        let gens = c.gens();
        if !is_ulrich(&e, &gens, &c.f, &opts).map_err(|err| err.to_string())?.is_ulrich {
            return Err(format!("{} certified but not Ulrich", c.ideal()));
        }
        if !necessary_f_in_i2(&e, &gens, &c.f).map_err(|err| err.to_string())? {
            return Err(format!("{}: f not in I^2", c.ideal()));
        }
        checked += 1;
    }
    for (_, rep) in &s.reports {
        for g in &rep.found {
            let gens = g.ideal.gens();
            if !is_ulrich(&e, gens, &rep.f, &opts).map_err(|err| err.to_string())?.is_ulrich {
                return Err(format!("found {} is not Ulrich under the default options", g.ideal));
            }
            if !necessary_f_in_i2(&e, gens, &rep.f).map_err(|err| err.to_string())? {
                return Err(format!("found {}: f not in I^2", g.ideal));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} instances, 0 counterexamples"))
}

fn plain(r: Result<String, String>) -> Outcome {
    r.map_err(Failure::from)
}

fn main() -> ExitCode {
    let mut unexpected = 0;
    let mut documented = 0;
    let mut report = |n: usize, name: &str, limit: Option<Duration>, run: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let out = run();
        let el = t.elapsed();
        let out = match (out, limit) {
            (Ok(msg), Some(lim)) if el > lim => Err(Failure::from(format!("{msg}; took {el:.2?}, limit {lim:?}"))),
            (o, _) => o,
        };
        match out {
            Ok(msg) => println!("criterion {n} PASS {name}: {msg} ({el:.2?})"),
            Err(f) => {
                if f.documented {
                    documented += 1;
                } else {
                    unexpected += 1;
                }
                let note = if f.documented { " [documented discrepancy]" } else { "" };
                println!("criterion {n} FAIL {name}: {}{note} ({el:.2?})", f.msg);
            }
        }
    };
    report(1, "symbolic resolution matrices", Some(Duration::from_secs(1)), &mut symbolic_example);
    report(2, "certificate identities", None, &mut || plain(certificate_identities()));
    report(3, "colength identities", Some(Duration::from_secs(1)), &mut || plain(colengths()));
    report(4, "random certificate complexes", Some(Duration::from_secs(30)), &mut || plain(random_certificates()));
    report(5, "rank sequences and fitting ideals", Some(Duration::from_secs(60)), &mut || plain(betti_consistency()));
    let t = Instant::now();
    let searches = run_searches();
    let search_time = t.elapsed();
    let mut classify = || -> Outcome {
        let s = searches.as_ref().map_err(|e| Failure::from(e.clone()))?;
        if search_time > Duration::from_secs(600) {
            return Err(Failure::from(format!("searches took {search_time:.2?}")));
        }
        plain(classification(s).map(|m| format!("{m}; searches {search_time:.2?}")))
    };
    report(6, "classification oracle", None, &mut classify);
    report(7, "decomposable pairs", Some(Duration::from_secs(5)), &mut || plain(decomposable_lists()));
    let mut run_chain = || -> Outcome { plain(chain(searches.as_ref().map_err(|e| e.clone())?)) };
    report(8, "soundness chain", None, &mut run_chain);
    println!("acceptance: {} pass, {documented} documented failure(s), {unexpected} unexpected failure(s)", 8 - documented - unexpected);
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
