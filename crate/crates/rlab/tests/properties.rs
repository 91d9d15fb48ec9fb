//! Algebraic invariants under random inputs.

use proptest::prelude::*;
use rlab::combinatorics::{
    enumerate_periodic_theta, multipartition_to_theta, multipartitions_of, partitions_of, theta_monomial,
    theta_to_multipartition,
};
use rlab::parse::{parse_list, parse_rational};
use rlab::series::{frac, geometric_expand, int, poch_ratio_expand, powi};
use rlab::special::{poch_flip_check, qpoch};
use rlab::{Error, Exponent, Scalar, TruncatedSeries, Truncation};

const ORDER: u32 = 4;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-9i64..=9, 1i64..=7).prop_map(|(n, d)| frac(n, d))
}

fn nonzero_scalar() -> impl Strategy<Value = Scalar> {
    scalar().prop_filter("nonzero", |s| *s != int(0))
}

/// A value of `q` away from the roots of unity.
fn qvalue() -> impl Strategy<Value = Scalar> {
    nonzero_scalar().prop_filter("not +-1", |s| *s != int(1) && *s != int(-1))
}

fn series(nvars: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec((prop::collection::vec(0u32..=ORDER, nvars), scalar()), 0..8).prop_map(move |terms| {
        let items = terms.into_iter().filter(|(e, _)| e.iter().sum::<u32>() <= ORDER).map(|(e, c)| (Exponent::new(e), c));
        TruncatedSeries::from_terms(nvars, Truncation::Total(ORDER), items.collect::<Vec<_>>()).unwrap()
    })
}

fn qshift(f: &TruncatedSeries, q: &Scalar) -> TruncatedSeries {
    f.map_coeffs(|e, c| Ok(c * powi(q, e.degree() as i64)?)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn addition_is_a_group((a, b, c) in (series(2), series(2), series(2))) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn multiplication_is_commutative_ring((a, b, c) in (series(2), series(2), series(2))) {
        let one = TruncatedSeries::one(2, Truncation::Total(ORDER));
        prop_assert_eq!(a.mul(&one).unwrap(), a.clone());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        let left = a.mul(&b.add(&c).unwrap()).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn prefixes_add_under_multiplication(a in series(1), l1 in scalar(), l2 in scalar()) {
        let x = a.clone().with_prefix(Some(vec![l1.clone(), int(0)]));
        let y = a.with_prefix(Some(vec![l2.clone(), int(1)]));
        let p = x.mul(&y).unwrap();
        prop_assert_eq!(p.prefix().unwrap().to_vec(), vec![l1 + l2, int(1)]);
        prop_assert!(matches!(x.add(&y), Err(Error::PrefixMismatch(_))));
    }

    #[test]
    fn geometric_inverts_linear(c in scalar(), e in prop::collection::vec(0u32..=2, 2)) {
        prop_assume!(e.iter().sum::<u32>() > 0);
        let trunc = Truncation::Total(ORDER);
        let m = Exponent::new(e);
        let g = geometric_expand(&c, &m, trunc).unwrap();
        let lin = TruncatedSeries::one(2, trunc).sub(&TruncatedSeries::monomial(c, m, trunc)).unwrap();
        prop_assert_eq!(g.mul(&lin).unwrap(), TruncatedSeries::one(2, trunc));
    }

    #[test]
    fn poch_ratio_round_trip(a in scalar(), b in scalar(), q in qvalue()) {
        let trunc = Truncation::Total(5);
        let m = Exponent::unit(1, 0);
        let f = poch_ratio_expand(&a, &b, &q, &m, trunc).unwrap();
        let g = poch_ratio_expand(&b, &a, &q, &m, trunc).unwrap();
        prop_assert_eq!(f.mul(&g).unwrap(), TruncatedSeries::one(1, trunc));
    }

    #[test]
    fn poch_ratio_functional_equation(a in scalar(), b in scalar(), q in qvalue()) {
        // (1 - b z) F(z) = (1 - a z) F(q z) for F = (a z;q)/(b z;q)
        let trunc = Truncation::Total(5);
        let z = Exponent::unit(1, 0);
        let f = poch_ratio_expand(&a, &b, &q, &z, trunc).unwrap();
        let one = TruncatedSeries::one(1, trunc);
        let lin = |c: &Scalar| one.sub(&TruncatedSeries::monomial(c.clone(), z.clone(), trunc)).unwrap();
        prop_assert_eq!(lin(&b).mul(&f).unwrap(), lin(&a).mul(&qshift(&f, &q)).unwrap());
    }

    #[test]
    fn qpoch_cocycle(z in scalar(), q in qvalue(), m in -3i64..=3, n in -3i64..=3) {
        let qm = powi(&q, m).unwrap();
        let whole = qpoch(&z, &q, m + n);
        let parts = qpoch(&z, &q, m).and_then(|a| Ok(a * qpoch(&(&qm * &z), &q, n)?));
        if let (Ok(w), Ok(p)) = (whole, parts) {
            prop_assert_eq!(w, p);
        }
    }

    #[test]
    fn flip_identity(a in nonzero_scalar(), b in nonzero_scalar(), q in qvalue(), m in 0i64..=4) {
        match poch_flip_check(&a, &b, &q, m) {
            Ok(ok) => prop_assert!(ok),
            Err(Error::Pole(_)) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn rational_text_round_trip(x in scalar()) {
        prop_assert_eq!(parse_rational(&x.to_string()).unwrap(), x.clone());
        let list = parse_list(&format!("{x}, 1/2")).unwrap();
        prop_assert_eq!(list, vec![x, frac(1, 2)]);
    }

    #[test]
    fn parsers_never_panic(s in ".{0,40}") {
        let _ = parse_rational(&s);
        let _ = parse_list(&s);
        let _ = rlab::parse::parse_config(&s);
    }
}

#[test]
fn bijection_round_trips_with_monomials() {
    for n in 1..=3 {
        for th in enumerate_periodic_theta(n, 5) {
            let lam = theta_to_multipartition(&th);
            assert_eq!(lam.weight(), th.zdegree(), "{lam}");
            assert_eq!(theta_monomial(&th, n), lam.monomial(), "{lam}");
            let back = multipartition_to_theta(&lam);
            assert_eq!(back.nonzero().collect::<Vec<_>>(), th.normalized().nonzero().collect::<Vec<_>>(), "{lam}");
        }
        for w in 0..=4 {
            for lam in multipartitions_of(n, w) {
                assert_eq!(theta_to_multipartition(&multipartition_to_theta(&lam)), lam);
            }
        }
    }
}

#[test]
fn counts_agree_with_enumerators() {
    for n in 1..=3usize {
        let by_weight: usize = (0..=5).map(|w| multipartitions_of(n, w).len()).sum();
        assert_eq!(enumerate_periodic_theta(n, 5).len(), by_weight);
    }
    assert_eq!(partitions_of(8).len(), 22);
}
