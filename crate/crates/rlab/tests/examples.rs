//! Worked examples with independently computed expected values.

use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rlab::combinatorics::{
    enumerate_partitions, enumerate_theta, multipartitions_of, partitions_of, theta_to_multipartition, MultiPartition,
    Partition, PeriodicThetaMatrix, ThetaMatrix,
};
use rlab::convergence::{bounds_c1c2, check_coeff_bound, check_euler_identity, check_block_products, partial_sums, ConvergenceInput};
use rlab::identities::random_body;
use rlab::operators::{
    apply_d_elliptic, apply_d_trig, apply_e, apply_t_nonstat, apply_t_trig, apply_tkp, eigenvalue_eps, DeltaMode,
    OperatorContext,
};
use rlab::ruijsenaars::{
    check_chi_duality, check_representations, f_gl_balanced, f_nonstat, f_trig, macdonald_oracle, Representation,
    SeriesRequest,
};
use rlab::series::{frac, geometric_expand, int, poch_ratio_expand, powi};
use rlab::special::coeffs::{coeff_cn, coeff_gl_balanced};
use rlab::special::{nekrasov, poch_flip_check, qpoch, ParamPoint};
use rlab::{Exponent, Scalar, TruncatedSeries, Truncation};

use num_complex::Complex64;

fn series(nvars: usize, d: u32, terms: &[(&[u32], Scalar)]) -> TruncatedSeries {
    TruncatedSeries::from_terms(nvars, Truncation::Total(d), terms.iter().map(|(e, c)| (Exponent::new(e.to_vec()), c.clone())).collect::<Vec<_>>())
        .unwrap()
}

#[test]
fn geometric_in_two_variables() {
    let g = geometric_expand(&int(2), &Exponent::new(vec![1, 1]), Truncation::Total(4)).unwrap();
    assert_eq!(g, series(2, 4, &[(&[0, 0], int(1)), (&[1, 1], int(2)), (&[2, 2], int(4))]));
}

#[test]
fn pochhammer_ratio_first_order() {
    // 1/((qz;q)_inf) to first order: sum_{n>=1} q^n = q/(1-q) = 1 at q = 1/2
    let f = poch_ratio_expand(&int(0), &frac(1, 2), &frac(1, 2), &Exponent::unit(1, 0), Truncation::Total(1)).unwrap();
    assert_eq!(f, series(1, 1, &[(&[0], int(1)), (&[1], int(1))]));
}

#[test]
fn partition_and_multipartition_counts() {
    let counts: Vec<usize> = (0..=6).map(|w| partitions_of(w).len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11]);
    assert_eq!(multipartitions_of(2, 2).len(), 5);
}

#[test]
fn block_matrices_of_small_degree() {
    // zero, theta12 in {1,2}, theta23 in {1,2}, theta12 = theta23 = 1, theta13 = 1
    assert_eq!(enumerate_theta(3, 2).len(), 7);
    assert_eq!(enumerate_theta(2, 0).len(), 1);
}

#[test]
fn single_row_bijection() {
    let mut th = PeriodicThetaMatrix::zero(1, 2);
    th.set(1, 1, 2);
    th.set(1, 2, 1);
    let lam = theta_to_multipartition(&th);
    assert_eq!(lam, MultiPartition::new(vec![Partition::new(vec![3, 1]).unwrap()]));
}

#[test]
fn flip_identity_example() {
    assert!(poch_flip_check(&int(2), &int(3), &frac(1, 5), 2).unwrap());
}

#[test]
fn nekrasov_single_box_brute_force() {
    // N = 1, k = 0, lam = (1), mu = empty: only the pair a = b = 1 with
    // length lam_1 - lam_2 = 1 contributes, giving 1 - u q^{-mu_1 + lam_2} = 1 - u.
    // The mu-range is empty.
    let lam = Partition::new(vec![1]).unwrap();
    let mu = Partition::empty();
    let (u, q, kappa) = (frac(3, 7), frac(2, 5), frac(5, 3));
    let want = qpoch(&u, &q, 1).unwrap();
    assert_eq!(nekrasov(&lam, &mu, 0, 1, &u, &q, &kappa).unwrap(), want);
}

#[test]
fn trig_coefficient_at_first_macdonald_point() {
    let mut th = ThetaMatrix::zero(2);
    th.set(1, 2, 1);
    let p = ParamPoint::spectral(frac(1, 2), frac(2, 7), int(1), &[1, 0]).unwrap();
    assert_eq!(coeff_cn(&th, &p).unwrap(), int(1));
    let f = f_trig(&SeriesRequest::new(p, 3)).unwrap();
    assert_eq!(f.coeff(&Exponent::new(vec![1])), int(1));
    assert_eq!(f.coeff(&Exponent::new(vec![2])), int(0));
    assert_eq!(f.coeff(&Exponent::new(vec![3])), int(0));
}

#[test]
fn macdonald_examples() {
    let (q, t) = (frac(1, 3), frac(2, 5));
    let p = macdonald_oracle(&Partition::new(vec![2]).unwrap(), 2, &q, &t).unwrap();
    let mixed = (int(1) + &q) * (int(1) - &t) / (int(1) - &q * &t);
    assert_eq!(p.coeff(&[2, 0]), int(1));
    assert_eq!(p.coeff(&[0, 2]), int(1));
    assert_eq!(p.coeff(&[1, 1]), mixed);
    let e3 = macdonald_oracle(&Partition::new(vec![1, 1, 1]).unwrap(), 3, &q, &t).unwrap();
    assert_eq!(e3.terms.len(), 1);
    for lam in enumerate_partitions(3).filter(|l| l.len() <= 2) {
        let rep = rlab::ruijsenaars::check_macdonald_reduction(&lam, 2, &frac(1, 2), &t).unwrap();
        assert!(rep.passed(), "{rep}");
    }
}

#[test]
fn theta_and_multipartition_sums_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let p = ParamPoint::random(&mut rng, 3);
        let rep = check_representations(&SeriesRequest::new(p, 5)).unwrap();
        assert!(rep.passed(), "{rep}");
    }
}

#[test]
fn single_component_balanced_coefficients_are_nekrasov_ratios() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let p = ParamPoint::random(&mut rng, 1);
    for w in 0..=4 {
        for lam in multipartitions_of(1, w) {
            let part = &lam.components()[0];
            let u = |x: &Scalar| nekrasov(part, part, 0, 1, x, &p.q, &p.kappa).unwrap();
            let want = powi(&p.t, -(w as i64)).unwrap() * u(&p.t) / u(&int(1));
            assert_eq!(coeff_gl_balanced(&lam, &p).unwrap(), want, "{lam}");
        }
    }
    let f = f_gl_balanced(&SeriesRequest::new(p, 0)).unwrap();
    assert_eq!(f, TruncatedSeries::one(1, Truncation::Total(0)));
}

#[test]
fn unit_series_at_order_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let p = ParamPoint::random(&mut rng, 2);
    let req = SeriesRequest::new(p, 0).representation(Representation::Multipartition);
    assert_eq!(f_nonstat(&req).unwrap(), TruncatedSeries::one(2, Truncation::Total(0)));
}

#[test]
fn chi_duality_bidegree_three() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let p = ParamPoint::random(&mut rng, 2);
    let rep = check_chi_duality(&SeriesRequest::new(p, 3).dual(3)).unwrap();
    assert!(rep.passed(), "{rep}");
}

#[test]
fn macdonald_operator_eigenvalues_on_trig_series() {
    let (r, t) = (frac(1, 2), frac(3, 5));
    let q = &r * &r;
    for lam in [vec![1i64, 0], vec![2, 1], vec![2, 0, 0]] {
        let n = lam.len();
        let p = ParamPoint::spectral(r.clone(), t.clone(), int(1), &lam).unwrap();
        let f = f_trig(&SeriesRequest::new(p, 5)).unwrap().with_prefix(Some(lam.iter().map(|&l| int(l)).collect()));
        let ctx = OperatorContext::new(n, r.clone(), t.clone());
        for sign in [1i64, -1] {
            let ev: Scalar = (0..n)
                .map(|i| powi(&t, sign * (n - 1 - i) as i64).unwrap() * powi(&q, sign * lam[i]).unwrap())
                .sum();
            assert_eq!(apply_d_trig(&f, sign, &ctx).unwrap(), f.scale(&ev), "{lam:?} {sign}");
        }
    }
}

#[test]
fn macdonald_operator_on_two_row_polynomial() {
    // x^(2,0) f_trig at s = (t q^2, 1) has eigenvalue t q^2 + 1
    let (r, t) = (frac(1, 3), frac(2, 7));
    let q = &r * &r;
    let p = ParamPoint::spectral(r.clone(), t.clone(), int(1), &[2, 0]).unwrap();
    let f = f_trig(&SeriesRequest::new(p, 4)).unwrap().with_prefix(Some(vec![int(2), int(0)]));
    let ctx = OperatorContext::new(2, r, t.clone());
    assert_eq!(apply_d_trig(&f, 1, &ctx).unwrap(), f.scale(&(&t * &q * &q + int(1))));
}

#[test]
fn modified_operator_in_one_variable() {
    let ctx = OperatorContext::new(1, frac(1, 2), frac(1, 3));
    let one = TruncatedSeries::one(0, Truncation::Total(2));
    let s = vec![frac(5, 4)];
    assert_eq!(apply_e(&one, 1, &s, &ctx).unwrap(), one.scale(&frac(5, 4)));
    assert_eq!(apply_e(&one, -1, &s, &ctx).unwrap(), one.scale(&frac(4, 5)));
}

#[test]
fn elliptic_operator_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let ctx = OperatorContext::new(2, frac(1, 2), frac(2, 3));
    for _ in 0..3 {
        let f = random_body(&mut rng, 2, 3, 5).unwrap().with_prefix(Some(vec![int(1), int(0)]));
        for sign in [1, -1] {
            let a = apply_d_elliptic(&f, sign, &ctx, false).unwrap();
            let b = apply_d_elliptic(&f, sign, &ctx, true).unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn elliptic_operator_reduces_to_trigonometric() {
    // on a nome-free body the nome-0 slice of the elliptic action is the trig action
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let ctx = OperatorContext::new(3, frac(1, 2), frac(2, 3));
    let body = random_body(&mut rng, 2, 3, 5).unwrap();
    let cyclic = body.embed(3, 0, Truncation::Total(3)).unwrap().with_prefix(Some(vec![int(1), int(0), int(0)]));
    let short = body.with_prefix(Some(vec![int(1), int(0), int(0)]));
    for sign in [1, -1] {
        let a = apply_d_elliptic(&cyclic, sign, &ctx, false).unwrap().slice_zero(2).unwrap();
        let b = apply_d_trig(&short, sign, &ctx).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn nome_shift_examples() {
    let trunc = Truncation::Total(3);
    let zn = TruncatedSeries::monomial(int(1), Exponent::new(vec![0, 1]), trunc);
    assert_eq!(apply_tkp(&zn, &frac(3, 2), 2).unwrap(), zn.scale(&frac(3, 2)));
    let m = TruncatedSeries::monomial(int(1), Exponent::new(vec![1, 2]), trunc);
    assert_eq!(apply_tkp(&m, &int(5), 2).unwrap(), m.scale(&int(25)));
    assert_eq!(apply_tkp(&m, &int(1), 2).unwrap(), m);
}

#[test]
fn eigenvalue_examples() {
    let r = frac(1, 2);
    assert_eq!(eigenvalue_eps(&[int(0)], &r).unwrap(), int(1));
    assert_eq!(eigenvalue_eps(&[int(2)], &r).unwrap(), frac(1, 16));
    // N = 2, lam = (1,0), beta = 1: exponents (2, 0)
    assert_eq!(eigenvalue_eps(&[int(2), int(0)], &r).unwrap(), powi(&r, 4).unwrap());
}

#[test]
fn trig_operator_single_variable() {
    let r = frac(1, 3);
    let ctx = OperatorContext::with_beta(1, r.clone(), 1).unwrap();
    let f = TruncatedSeries::one(0, Truncation::Total(2)).with_prefix(Some(vec![int(3)]));
    let g = apply_t_trig(&f, &ctx, &DeltaMode::Integer { beta: 1 }).unwrap();
    assert_eq!(g, f.scale(&powi(&r, 9).unwrap()));
}

#[test]
fn nonstationary_operator_first_order_by_hand() {
    // N = 1 on x^lam: the empty matrix contributes the prefactor
    // (p;q)/(tp;q) = 1 + (t-1)/(1-q) p with p scaled by kappa, and the single
    // theta_12 = 1 term contributes its coefficient at p = 0, which is
    // (1 - 1/t)/(1 - 1/q). Both carry q^{lam^2/2}.
    let (r, beta, lam) = (frac(1, 2), 2i64, 1i64);
    let ctx = OperatorContext::with_beta(1, r.clone(), beta).unwrap();
    let (q, t) = (ctx.q.clone(), ctx.t.clone());
    let kappa = frac(3, 7);
    let one = Scalar::one();
    let f = TruncatedSeries::one(1, Truncation::Total(1)).with_prefix(Some(vec![int(lam)]));
    let g = apply_t_nonstat(&f, &ctx, &kappa, &DeltaMode::Integer { beta }).unwrap();
    let base = powi(&r, lam * lam).unwrap();
    let z1 = &kappa * (&t - &one) / (&one - &q) + (&one - t.recip()) / (&one - q.recip());
    assert_eq!(g.coeff(&Exponent::new(vec![0])), base.clone());
    assert_eq!(g.coeff(&Exponent::new(vec![1])), base * z1);
}

#[test]
fn bound_closed_forms() {
    let base = ConvergenceInput {
        n: 1,
        sigma: 0.5,
        q: 0.5,
        kappa: 2.0,
        t: Complex64::new(0.5, 0.0),
        s: vec![Complex64::new(1.0, 0.0)],
        rho: 0.1,
    };
    let b = bounds_c1c2(&base).unwrap();
    assert_eq!((b.c1, b.c2, b.rho_max), (1.0, 1.0, 1.0));
    let rep = check_coeff_bound(&base, 5).unwrap();
    assert_eq!(rep.violations, 0);
    assert!((rep.worst_root - 1.0).abs() < 1e-12);
    let off = ConvergenceInput { t: Complex64::new(1.0, 0.0), ..base.clone() };
    let b = bounds_c1c2(&off).unwrap();
    assert!((b.c1 - 3.0).abs() < 1e-12 && (b.c2 - 2.0).abs() < 1e-12);
    let bad = ConvergenceInput { kappa: 0.5, ..base };
    assert!(bounds_c1c2(&bad).is_err());
}

#[test]
fn partial_sums_at_the_origin_are_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut input = ConvergenceInput::sample(&mut rng, 2);
    input.rho = bounds_c1c2(&input).unwrap().rho_max / 2.0;
    let rep = partial_sums(&input, &[Complex64::new(0.0, 0.0); 2], 5).unwrap();
    assert!(rep.sums.iter().all(|s| (*s - Complex64::new(1.0, 0.0)).norm() < 1e-15));
}

#[test]
fn partial_sums_decay_at_admissible_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let mut input = ConvergenceInput::sample(&mut rng, 2);
    input.rho = bounds_c1c2(&input).unwrap().rho_max / 2.0;
    let z = [Complex64::from_polar(0.8 * input.rho, 0.4), Complex64::from_polar(0.8 * input.rho, -1.1)];
    let rep = partial_sums(&input, &z, 10).unwrap();
    assert_eq!(rep.violations, 0);
    assert!(rep.increments.last().unwrap() < &1e-10);
}

#[test]
fn euler_and_product_identity() {
    for d in [0, 6, 12] {
        assert!(check_euler_identity(d).unwrap().passed());
    }
    let same = check_block_products(&frac(2, 3), &frac(2, 3), &frac(1, 4), 2, 4).unwrap();
    assert!(same.passed());
    assert!(check_block_products(&frac(2, 3), &frac(5, 3), &frac(1, 4), 3, 5).unwrap().passed());
}
