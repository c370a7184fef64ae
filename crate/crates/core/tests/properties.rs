use ellipsoid_green::formula::monomial_lower_bound;
use ellipsoid_green::oracle::sample_interior;
use ellipsoid_green::oracle::verify::{verify_certificate, CertificateKind, VerifyConfig};
use ellipsoid_green::{ball_formula, evaluate, weighted_am_gm, Ellipsoid, Point};
use num_complex::Complex64;
use proptest::prelude::*;

fn exponents(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1f64..4.0, n)
}

fn instance() -> impl Strategy<Value = (Ellipsoid, Point, u64)> {
    (2usize..=5).prop_flat_map(|n| (exponents(n), 1..=n, any::<u64>())).prop_map(|(p, k, seed)| {
        let ell = Ellipsoid::new(p, k).unwrap();
        let z = sample_interior(&ell, 1, seed, 1e-3).unwrap().pop().unwrap();
        (ell, z, seed)
    })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn phases_do_not_matter((ell, z, seed) in instance(), shift in -10.0f64..10.0) {
        let base = evaluate(&ell, &z).unwrap().value;
        let rotated: Vec<f64> = z.phases().iter().enumerate().map(|(j, t)| t + shift * (j as f64 + 1.0) + seed as f64 % 7.0).collect();
        let w = Point::from_polar(&z.moduli(), &rotated);
        prop_assert!(close(evaluate(&ell, &w).unwrap().value, base));
    }

    #[test]
    fn permuting_the_front_block_is_harmless((ell, z, _) in instance(), rot in 0usize..5) {
        let k = ell.k();
        let p = ell.exponents();
        let mut order: Vec<usize> = (0..ell.dim()).collect();
        order[..k].rotate_left(rot % k);
        let q: Vec<f64> = order.iter().map(|&j| p[j]).collect();
        let w = Point::new(order.iter().map(|&j| z.coords()[j]).collect());
        let permuted = Ellipsoid::new(q, k).unwrap();
        prop_assert!(close(evaluate(&permuted, &w).unwrap().value, evaluate(&ell, &z).unwrap().value));
    }

    #[test]
    fn value_lies_between_monomial_bound_and_one((ell, z, _) in instance()) {
        let r = evaluate(&ell, &z).unwrap().value;
        let lower = monomial_lower_bound(&ell, &z).unwrap();
        prop_assert!(lower <= r * (1.0 + 1e-12), "{lower} > {r}");
        prop_assert!(r < 1.0);
        let front: f64 = z.moduli()[..ell.k()].iter().product();
        prop_assert!(front <= r * (1.0 + 1e-12));
    }

    #[test]
    fn ball_closed_form_matches(n in 2usize..=5, kk in 1usize..=5, seed in any::<u64>()) {
        let k = kk.min(n);
        let ell = Ellipsoid::ball(n, k).unwrap();
        let z = sample_interior(&ell, 1, seed, 0.0).unwrap().pop().unwrap();
        let a = evaluate(&ell, &z).unwrap().value;
        let b = ball_formula(&z, k).unwrap();
        prop_assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
    }

    #[test]
    fn am_gm_holds(a in prop::collection::vec(0.0f64..10.0, 1..8), seed in 0.01f64..3.0) {
        let w: Vec<f64> = (0..a.len()).map(|j| seed + j as f64 * 0.37).collect();
        let (lhs, rhs) = weighted_am_gm(&a, &w).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn am_gm_equality_at_equal_arguments(c in 0.0f64..10.0, w in prop::collection::vec(0.01f64..3.0, 1..8)) {
        let a = vec![c; w.len()];
        let (lhs, rhs) = weighted_am_gm(&a, &w).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
    }

    #[test]
    fn zero_front_coordinate_gives_zero((ell, z, _) in instance(), slot in 0usize..5) {
        let j = slot % ell.k();
        let mut c = z.coords().to_vec();
        c[j] = Complex64::new(0.0, 0.0);
        prop_assert_eq!(evaluate(&ell, &Point::new(c)).unwrap().value, 0.0);
    }
}

#[test]
fn am_gm_examples() {
    assert_eq!(weighted_am_gm(&[1.0, 0.0], &[1.0, 1.0]).unwrap(), (0.0, 0.25));
    let (l, r) = weighted_am_gm(&[2.0, 8.0], &[0.5, 0.5]).unwrap();
    assert!((l - 4.0).abs() < 1e-15 && (r - 5.0).abs() < 1e-15);
    assert!(weighted_am_gm(&[-1.0], &[1.0]).is_err());
    assert!(weighted_am_gm(&[1.0], &[0.0]).is_err());
}

#[test]
fn reports_serialize_identically_for_a_fixed_seed() {
    let ell = Ellipsoid::new(vec![0.7, 1.5, 2.5], 2).unwrap();
    let z = Point::from_polar(&[0.4, 0.3, 0.2], &[0.1, -1.0, 2.0]);
    let cfg = VerifyConfig { seed: 11, ..VerifyConfig::default() };
    let run = |kind| {
        verify_certificate(&ell, &z, kind, &cfg)
            .unwrap()
            .iter()
            .map(|r| serde_json::to_string(r).unwrap())
            .collect::<Vec<_>>()
            .join("\n")
    };
    for kind in [CertificateKind::Green, CertificateKind::Mobius] {
        let first = run(kind);
        assert_eq!(first, run(kind));
        assert!(!first.is_empty());
    }
}

#[test]
fn optimizer_does_not_see_certificates() {
    let src = include_str!("../src/oracle/optimize.rs");
    assert!(!src.contains("certificate"));
    assert!(!include_str!("../src/oracle/fd.rs").contains("certificate"));
}
