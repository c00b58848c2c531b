use ulrich_core::catalog::{
    exhaustive_search, full_list, FTag, Grid, SearchBounds, SearchShape, DEFAULT_SEARCH_CAP,
};
use ulrich_core::ulrich::{is_ulrich, verify_certificate, UlrichOptions};
use ulrich_core::{Engine, Field, Poly, Ring};

fn search(field: Field, f: &str, nmax: u32, deg: u32) -> ulrich_core::catalog::SearchReport {
    let r = Ring::xy(field);
    let f = Poly::parse(f, &r).unwrap();
    let shape = SearchShape::for_f(&f).unwrap();
    let bounds = SearchBounds { nmax, coeff_degree: deg, cap: DEFAULT_SEARCH_CAP };
    exhaustive_search(&Engine::default(), &f, shape, bounds).unwrap()
}

#[test]
fn x4y_search_agrees_with_list() {
    let rep = search(Field::Prime(2), "X^4*Y", 4, 1);
    assert!(rep.agrees(), "unmatched {:?} missing {:?}", rep.unmatched, rep.missing);
    let labels: Vec<&str> = rep.matched.iter().map(|(_, l)| l.as_str()).collect();
    assert!(labels.iter().any(|l| l.starts_with("xky-split")));
    assert!(labels.iter().any(|l| l.starts_with("xky-xy")));
    // n < k for the non-split ideals.
    assert!(rep.max_n.unwrap() < 4);
}

#[test]
fn x3y_over_f3() {
    let rep = search(Field::Prime(3), "X^3*Y", 3, 1);
    assert!(rep.agrees(), "unmatched {:?} missing {:?}", rep.unmatched, rep.missing);
    assert!(rep.max_n.unwrap() < 3);
}

#[test]
fn y3_units_beyond_constants() {
    let rep = search(Field::Prime(2), "Y^3", 4, 2);
    assert!(rep.agrees());
    // (X^4 + XY + Y, X^2 Y) is a family member with the unit 1 + X.
    let want = Poly::parse("X^4 + X*Y + Y", &Ring::xy(Field::Prime(2))).unwrap();
    assert!(rep.found.iter().any(|g| g.ideal.gens()[0] == want));
    assert_eq!(rep.found.len(), 3);
    for g in &rep.found {
        assert_eq!(g.ideal.gens()[0].degree(), Some(g.n));
    }
}

#[test]
fn y4_partial_list_reports_raw() {
    let rep = search(Field::Prime(2), "Y^4", 2, 1);
    assert!(rep.partial);
    for &k in &rep.unmatched {
        let g = &rep.found[k];
        let v = is_ulrich(&Engine::default(), g.ideal.gens(), &rep.f, &UlrichOptions::default()).unwrap();
        assert!(v.is_ulrich);
    }
}

#[test]
fn listed_instances_verify_over_small_fields() {
    let e = Engine::default();
    for p in [2, 3, 5] {
        let r = Ring::xy(Field::Prime(p));
        for tag in ["Y2", "Y3", "Y4", "XY", "X2Y", "X3Y", "X4Y"] {
            let list = full_list(FTag::parse(tag).unwrap()).unwrap();
            for inst in list.instances(&r, &Grid::constants(&r, 3)).unwrap() {
                let c = inst.certificate.as_ref().unwrap();
                assert!(verify_certificate(&e, c).unwrap(), "{} over F_{p}", inst.label());
            }
        }
    }
}
