use proptest::prelude::*;

use ulrich_core::resolution::{
    betti, build_resolution_unchecked, complex_defects, koszul_matrix, koszul_transpose_identity, matrix_factorization,
    minimality_check, rank_sequence,
};
use ulrich_core::ulrich::UlrichCertificate;
use ulrich_core::{Field, Monomial, Poly, PolyMatrix, Ring};

fn random_max(ring: &std::sync::Arc<Ring>, coeffs: &[i64]) -> Poly {
    let monos: Vec<Monomial> = (1..=2u32).flat_map(|k| Monomial::of_degree(ring.nvars(), k)).collect();
    let terms = monos.into_iter().zip(coeffs).map(|(m, &c)| (m, ring.field().from_i64(c)));
    Poly::from_terms(ring, terms.collect::<Vec<_>>())
}

fn certificate(d: usize, coeffs: &[Vec<i64>], eps: i64) -> UlrichCertificate {
    let ring = Ring::indexed(Field::Prime(7), d + 1);
    let a: Vec<Poly> = (0..d).map(|i| random_max(&ring, &coeffs[i])).collect();
    let b = random_max(&ring, &coeffs[d]);
    let x: Vec<Poly> = (0..d).map(|i| random_max(&ring, &coeffs[d + 1 + i])).collect();
    let eps = Poly::from_i64(&ring, eps);
    let inv = Poly::constant(&ring, ring.field().inv(&eps.constant_term()).unwrap());
    let mut g = &b * &b;
    for (ai, xi) in a.iter().zip(&x) {
        g = &g + &(ai * xi);
    }
    UlrichCertificate::new(&inv * &g, a, b, x, eps).unwrap()
}

fn coeffs(d: usize) -> impl Strategy<Value = (Vec<Vec<i64>>, i64)> {
    let n = d + 1;
    let monos = n + n * (n + 1) / 2;
    (prop::collection::vec(prop::collection::vec(0i64..7, monos), 2 * d + 1), 1i64..7)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    #[test]
    fn random_certificates_give_complexes_d1((c, e) in coeffs(1)) {
        let r = build_resolution_unchecked(&certificate(1, &c, e)).unwrap();
        prop_assert!(complex_defects(&r).is_empty());
    }

    #[test]
    fn random_certificates_give_complexes_d2((c, e) in coeffs(2)) {
        let r = build_resolution_unchecked(&certificate(2, &c, e)).unwrap();
        prop_assert!(complex_defects(&r).is_empty());
        let (m, n) = matrix_factorization(&r);
        prop_assert_eq!(m.mul(&n).unwrap(), PolyMatrix::scalar(&r.g, 4));
    }

    #[test]
    fn random_certificates_give_complexes_d3((c, e) in coeffs(3)) {
        let r = build_resolution_unchecked(&certificate(3, &c, e)).unwrap();
        prop_assert!(complex_defects(&r).is_empty());
        prop_assert!(minimality_check(&r));
    }

    #[test]
    fn koszul_transpose_relation(d in 1usize..4, seed in prop::collection::vec(0i64..7, 40)) {
        let ring = Ring::indexed(Field::Prime(7), d + 1);
        let pick = |k: usize| random_max(&ring, &seed[k..]);
        let a: Vec<Poly> = (0..d).map(&pick).collect();
        let x: Vec<Poly> = (0..d).map(|i| pick(i + 5)).collect();
        for p in 1..=d {
            prop_assert!(koszul_transpose_identity(&a, &x, p).unwrap());
        }
    }
}

#[test]
fn ranks_follow_the_betti_formula() {
    for d in 1..=4 {
        let c = certificate(d, &vec![vec![1, 2, 3, 4, 5, 6, 1, 2, 3, 4, 5, 6, 1, 2, 3, 4, 5, 6, 1, 2]; 2 * d + 1], 3);
        let r = build_resolution_unchecked(&c).unwrap();
        let ranks = rank_sequence(&r, d + 3);
        let want: Vec<usize> = (0..=d + 3).map(|i| usize::try_from(betti(d, i, 1)).unwrap()).collect();
        assert_eq!(ranks, want, "d = {d}");
    }
}

#[test]
fn koszul_shapes() {
    let ring = Ring::indexed(Field::Rational, 4);
    let gens: Vec<Poly> = (0..3).map(|i| Poly::var(&ring, i)).collect();
    let shapes: Vec<(usize, usize)> = (1..=3).map(|p| {
        let m = koszul_matrix(&gens, p).unwrap();
        (m.rows(), m.cols())
    }).collect();
    assert_eq!(shapes, vec![(1, 3), (3, 3), (3, 1)]);
}
