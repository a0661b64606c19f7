//! Zero location, disk counts and sign alternation against exact oracles.

mod common;

use common::*;
use lp_certify::real::to_f64;
use lp_certify::series::*;
use lp_certify::zeros::*;
use lp_certify::Precision;
use num_rational::BigRational;
use proptest::prelude::*;

fn cq(q: f64) -> CoefficientSequence {
    make_family(&FamilySpec::constant_quotient(q)).unwrap()
}

fn from_rationals(c: &[BigRational]) -> TruncationPolynomial {
    let p = Precision::default();
    TruncationPolynomial::from_coeffs(c.iter().map(|x| to_real(x, p)).collect(), p).unwrap()
}

#[test]
fn sturm_oracle_sanity() {
    // (z + 1)^2 (z + 2) (z^2 + 1): two distinct real roots
    let c: Vec<BigRational> = [2, 5, 6, 6, 4, 1].iter().map(|&x| rat(x, 1)).collect();
    assert_eq!(sturm_real_roots(&c), 2);
    let c: Vec<BigRational> = [-6, 11, -6, 1].iter().map(|&x| rat(x, 1)).collect();
    assert_eq!(sturm_real_roots(&c), 3);
}

#[test]
fn hutchinson_truncation_is_real_rooted() {
    let t = truncate(&cq(4.0), 8).unwrap();
    let rep = locate_zeros(&t, 1e-8).unwrap();
    assert!(rep.all_real_negative_simple(), "{rep:?}");
    assert_eq!(sturm_real_roots(&constant_quotient_coeffs(&rat(4, 1), 8)), 8);
}

#[test]
fn below_q_infinity_has_a_nonreal_pair() {
    let exact = constant_quotient_coeffs(&rat(31, 10), 32);
    let real = sturm_real_roots(&exact);
    assert!(real < 32);
    let rep = locate_zeros(&from_rationals(&exact), 1e-8).unwrap();
    assert_eq!(rep.count_unresolved, 0);
    assert_eq!(rep.count_real, real);
    assert!(rep.count_nonreal >= 2);
    assert_eq!(rep.count_nonreal % 2, 0);
}

#[test]
fn real_counts_agree_with_sturm() {
    let cases = [
        constant_quotient_coeffs(&rat(13, 5), 24),
        constant_quotient_coeffs(&rat(3, 1), 24),
        constant_quotient_coeffs(&rat(33, 10), 24),
        constant_quotient_coeffs(&rat(5, 2), 17),
        kummer_coeffs(2, 20),
    ];
    for exact in &cases {
        let rep = locate_zeros(&from_rationals(exact), 1e-8).unwrap();
        assert_eq!(rep.count_real, sturm_real_roots(exact), "degree {}", exact.len() - 1);
        assert_eq!(rep.roots.len(), exact.len() - 1);
    }
}

#[test]
fn q_kummer_rho() {
    // q_2 = 5/3, q_3 = 9/5 from the exact coefficients
    let c = kummer_coeffs(2, 3);
    let q2 = &c[1] * &c[1] / (&c[0] * &c[2]);
    let q3 = &c[2] * &c[2] / (&c[1] * &c[3]);
    assert_eq!((q2.clone(), q3.clone()), (rat(5, 3), rat(9, 5)));
    let s = make_family(&FamilySpec::QKummer { a: 2.0 }).unwrap();
    let r = to_f64(&rho(&quotients(&s, 5).unwrap(), 2).unwrap());
    assert!((r - 5f64.sqrt()).abs() < 1e-15);
    // q_2 ... q_j < rho_j < q_2 ... q_{j+1}
    let prof = quotients(&s, 12).unwrap();
    for j in 2..11 {
        let r = to_f64(&rho(&prof, j).unwrap());
        let lower: f64 = (2..=j).map(|n| prof.q_f64(n).unwrap()).product();
        assert!(lower < r && r < lower * prof.q_f64(j + 1).unwrap());
    }
}

#[test]
fn disk_counts_match_the_index() {
    let s = cq(4.0);
    let d = count_zeros_disk(&s, &disk_radius(&s, 6).unwrap(), &ContourPolicy::for_disk(6)).unwrap();
    assert_eq!(d.count, 6);
    assert!(d.residual <= 1e-6);
}

#[test]
fn disk_count_against_truncation_roots() {
    let s = cq(3.3);
    let r = disk_radius(&s, 8).unwrap();
    let d = count_zeros_disk(&s, &r, &ContourPolicy::for_disk(8)).unwrap();
    let rep = locate_zeros(&truncate(&s, 60).unwrap(), 1e-8).unwrap();
    let inside = rep.roots.iter().filter(|z| z.modulus() < to_f64(&r)).count();
    assert_eq!(d.count, 8);
    assert_eq!(inside, 8);
}

#[test]
fn quartic_against_direct_roots() {
    for q in [CUBE_ROOT_REGIME, 3.0, 9.0] {
        let c = quartic_unit_disk_count(q, q).unwrap();
        assert_eq!(c.unit_disk_count, 2);
        assert!(c.value_at_one > 0.0 && c.min_on_interval == c.value_at_one);
        let s = q * q.sqrt();
        let poly = TruncationPolynomial::from_f64(&[1.0, -s, q * q, -s, 1.0], Precision::default()).unwrap();
        let rep = roots_of_truncation(&poly).unwrap();
        assert_eq!(rep.roots.iter().filter(|z| z.modulus() < 1.0).count(), 2);
    }
}

#[test]
fn decreasing_pairs_against_direct_roots() {
    for (qj, qj1) in [(9.0, 3.0), (3.5, CUBE_ROOT_REGIME), (3.0, 9.0)] {
        let c = quartic_unit_disk_count(qj, qj1).unwrap();
        let s = qj * qj1.sqrt();
        let poly = TruncationPolynomial::from_f64(&[1.0, -s, qj * qj1, -s, 1.0], Precision::default()).unwrap();
        let rep = roots_of_truncation(&poly).unwrap();
        let on_circle = rep.roots.iter().filter(|z| (z.modulus() - 1.0).abs() < 1e-6).count();
        let inside = rep.roots.iter().filter(|z| z.modulus() < 1.0 - 1e-6).count();
        assert_eq!((c.unit_disk_count, c.circle_zeros), (inside, on_circle), "({qj}, {qj1})");
    }
}

#[test]
fn sign_alternation_matches_exact_signs() {
    for (q, exact) in [(3.5, rat(7, 2)), (4.0, rat(4, 1))] {
        let rep = sign_alternation_check(&cq(q), 20).unwrap();
        assert!(rep.all_certified());
        for row in &rep.rows {
            assert_eq!(sign_at_negated_rho(&exact, row.k), Some(row.sign as i32), "q = {q}, k = {}", row.k);
        }
    }
}

#[test]
fn census_examples() {
    let c = nonreal_census(&cq(4.0), 4, 10, 60).unwrap();
    assert!(c.rows.iter().all(|r| r.nonreal == 0 && r.nonreal_truncation == 0));
    let c = nonreal_census(&cq(3.3), 4, 10, 60).unwrap();
    assert!(c.stabilized);
    assert!(c.rows.iter().all(|r| r.winding == r.j && r.nonreal == 0));
    let c = nonreal_census(&cq(2.6), 6, 12, 80).unwrap();
    assert!(c.stabilized, "{:?}", c.rows);
    let last = c.rows.last().unwrap();
    assert!(last.nonreal > 0 && last.nonreal % 2 == 0);
}

#[test]
fn alternation_and_disk_counts_imply_real_zeros() {
    let s = cq(3.5);
    let k = 12;
    let alt = sign_alternation_check(&s, k).unwrap();
    assert!(alt.all_certified());
    let c = nonreal_census(&s, 2, k, 60).unwrap();
    assert!(c.rows.iter().all(|r| r.winding == r.j));
    assert_eq!(c.rows.last().unwrap().nonreal, 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn nonreal_roots_pair_with_conjugates(q in 2.2f64..3.6, n in 6usize..28) {
        let rep = locate_zeros(&truncate(&cq(q), n).unwrap(), 1e-8).unwrap();
        prop_assert_eq!(rep.roots.len(), n);
        for a in rep.roots.iter().filter(|r| r.class == RootClass::NonrealPair) {
            let paired = rep.roots.iter().any(|b| {
                (b.re - a.re).hypot(b.im + a.im) <= a.radius + b.radius + 1e-14 * a.modulus()
            });
            prop_assert!(paired, "{:?}", a);
        }
        prop_assert_eq!(rep.count_nonreal % 2, 0);
    }

    #[test]
    fn winding_at_a_large_radius_is_the_degree(q in 2.0f64..6.0, n in 1usize..30) {
        let t = truncate(&cq(q), n).unwrap();
        // Cauchy bound: every root satisfies |z| < 1 + max |c_k / c_n|
        let c = t.coeffs_f64();
        let lc = c[n];
        let bound = 1.0 + c.iter().map(|x| (x / lc).abs()).fold(0.0, f64::max);
        let d = count_zeros_disk(&t, &t.precision().real(10.0 * bound), &ContourPolicy::default()).unwrap();
        prop_assert_eq!(d.count, n);
        prop_assert!(d.residual <= 1e-6);
    }
}
