//! Property-based invariants across the library.
//!
//! Expression generation is seed-driven: proptest supplies seeds, the shared
//! pool builds deterministic expressions from them.

mod common;

use common::{pool_expr, Rng};
use proptest::prelude::*;
use tempered::expr::{eval, expr_from_str, expr_to_string, is_zero_at, zero_set, SeqExpr};
use tempered::growth::{audit_lower, audit_upper, infer_certificate, LowerCertificate};
use tempered::ideals::{fixed_maximal_member, separator};
use tempered::krull::{check_product_law, check_sum_law};
use tempered::lattice::{LatticePoint, Window};
use tempered::number::GaussianRational;
use tempered::ring::{divides, gcd, DivisibilityVerdict};
use tempered::ZeroSetInfo;

fn quotient_free(e: &SeqExpr) -> bool {
    !e.contains_quotient() && !e.contains_half_root()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms_hold_extensionally(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let dim = 1 + rng.below(2) as usize;
        let f = pool_expr(&mut rng, dim, 1);
        let g = pool_expr(&mut rng, dim, 1);
        let sum = SeqExpr::sum(f.clone(), g.clone()).unwrap();
        let prod = SeqExpr::product(f.clone(), g.clone()).unwrap();
        for n in Window::new(dim, 4).points() {
            let (fv, gv) = (eval(&f, &n).unwrap(), eval(&g, &n).unwrap());
            prop_assert_eq!(eval(&sum, &n).unwrap(), &fv + &gv);
            prop_assert_eq!(eval(&prod, &n).unwrap(), &fv * &gv);
        }
    }

    #[test]
    fn quotient_fill_contract(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let dim = 1 + rng.below(2) as usize;
        let f = pool_expr(&mut rng, dim, 1);
        let g = pool_expr(&mut rng, dim, 1);
        let q = SeqExpr::quotient(f.clone(), g.clone()).unwrap();
        for n in Window::new(dim, 4).points() {
            let gv = eval(&g, &n).unwrap();
            let qv = eval(&q, &n).unwrap();
            if gv.is_zero() {
                prop_assert!(qv.is_zero());
            } else {
                prop_assert_eq!(&qv * &gv, eval(&f, &n).unwrap());
            }
        }
    }

    #[test]
    fn zero_set_membership_agrees_with_eval(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let dim = 1 + rng.below(2) as usize;
        let f = pool_expr(&mut rng, dim, 2);
        let zs = zero_set(&f);
        if !zs.is_decidable() {
            return Ok(());
        }
        for n in Window::new(dim, 5).points() {
            let val_zero = is_zero_at(&f, &n).unwrap();
            prop_assert_eq!(zs.contains(&n), Some(val_zero), "disagreement at {:?}", n);
        }
    }

    #[test]
    fn serialization_round_trips_structurally(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let dim = 1 + rng.below(3) as usize;
        let f = pool_expr(&mut rng, dim, 2);
        let text = expr_to_string(&f).unwrap();
        let back = expr_from_str(&text, Some(dim)).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(expr_to_string(&back).unwrap(), text);
    }

    #[test]
    fn inferred_certificates_validate_on_windows(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let dim = 1 + rng.below(2) as usize;
        let f = pool_expr(&mut rng, dim, 2);
        if !quotient_free(&f) {
            return Ok(());
        }
        let cert = infer_certificate(&f).unwrap();
        let radius = if dim == 1 { 200 } else { 50 };
        let report = audit_upper(&f, &cert, &Window::new(dim, radius)).unwrap();
        prop_assert!(report.validated(), "inferred certificate falsified for {:?}", f);
    }

    #[test]
    fn lower_audits_fail_at_zeros(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let dim = 1 + rng.below(2) as usize;
        let f = pool_expr(&mut rng, dim, 1);
        if f.contains_half_root() {
            return Ok(());
        }
        let zs = zero_set(&f);
        // pick an exact zero within a small window, if any
        let zero_in_window = Window::new(dim, 5)
            .points()
            .find(|n| zs.contains(n) == Some(true));
        let Some(_) = zero_in_window else { return Ok(()) };
        let cert = LowerCertificate::new(common::rat(1, 1_000_000), 8);
        let report = audit_lower(&f, &cert, &Window::new(dim, 5)).unwrap();
        prop_assert!(
            !report.validated(),
            "lower audit must fail for {:?} with a zero in the window",
            f
        );
    }

    #[test]
    fn zero_order_laws(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let dim = 1 + rng.below(2) as usize;
        let base = common::point(&mut rng, dim, 3);
        let f = common::finite_support_near(&mut rng, dim, &base);
        let g = common::finite_support_near(&mut rng, dim, &base);
        prop_assert!(check_sum_law(&f, &g, &base, 32).unwrap());
        prop_assert!(check_product_law(&f, &g, &base, 32).unwrap());
    }

    #[test]
    fn separator_antisymmetry(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let dim = 1 + rng.below(3) as usize;
        let a = common::point(&mut rng, dim, 6);
        let mut b = common::point(&mut rng, dim, 6);
        if a == b {
            b = LatticePoint::new(
                b.coords()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| if i == 0 { c + 1 } else { *c })
                    .collect(),
            );
        }
        let s = separator(&a, &b).unwrap();
        prop_assert!(fixed_maximal_member(&s, &a).unwrap());
        prop_assert!(!fixed_maximal_member(&s, &b).unwrap());
    }

    #[test]
    fn fixed_ideal_closure_at_window_scale(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let dim = 1 + rng.below(2) as usize;
        let k = common::point(&mut rng, dim, 3);
        // force two members of the ideal at k by multiplying with the complement
        let f = SeqExpr::product(
            SeqExpr::dirac_complement(k.clone()),
            pool_expr(&mut rng, dim, 1),
        )
        .unwrap();
        let g = SeqExpr::product(
            SeqExpr::dirac_complement(k.clone()),
            pool_expr(&mut rng, dim, 1),
        )
        .unwrap();
        let h = pool_expr(&mut rng, dim, 1);
        prop_assert!(fixed_maximal_member(&f, &k).unwrap());
        prop_assert!(fixed_maximal_member(&SeqExpr::sum(f.clone(), g).unwrap(), &k).unwrap());
        prop_assert!(fixed_maximal_member(&SeqExpr::product(h, f).unwrap(), &k).unwrap());
    }

    #[test]
    fn common_divisors_divide_the_gcd(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let dim = 1 + rng.below(2) as usize;
        let h = pool_expr(&mut rng, dim, 1);
        if h.contains_half_root() {
            return Ok(());
        }
        let count = 1 + rng.below(3);
        let gens: Vec<SeqExpr> = (0..count)
            .map(|_| SeqExpr::product(h.clone(), pool_expr(&mut rng, dim, 1)).unwrap())
            .collect();
        let d = gcd(&gens).unwrap();
        let window = Window::new(dim, 12);
        match divides(&h, &d, &window, 32).unwrap() {
            DivisibilityVerdict::Divides { cofactor, .. } => {
                // the witnessed identity holds exactly on the window
                for n in window.points() {
                    let lhs = &eval(&cofactor, &n).unwrap() * &eval(&h, &n).unwrap();
                    prop_assert_eq!(lhs, eval(&d, &n).unwrap());
                }
            }
            DivisibilityVerdict::RefutedAtZero { point } => {
                prop_assert!(false, "refuted at {:?} though h divides every generator", point);
            }
            DivisibilityVerdict::RefutedEmpirically { .. } => {
                prop_assert!(false, "empirical refutation though h divides every generator");
            }
        }
    }

    #[test]
    fn magnitude_multiplicativity(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let z = common::value(&mut rng);
        let w = common::value(&mut rng);
        prop_assert_eq!(
            (&z * &w).magnitude_sq(),
            z.magnitude_sq() * w.magnitude_sq()
        );
    }

    #[test]
    fn gcd_zero_set_is_the_intersection(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let dim = 1 + rng.below(2) as usize;
        let count = 1 + rng.below(3);
        let gens: Vec<SeqExpr> = (0..count).map(|_| pool_expr(&mut rng, dim, 1)).collect();
        let d = gcd(&gens).unwrap();
        let zs = zero_set(&d);
        if matches!(zs, ZeroSetInfo::Unknown) {
            return Ok(());
        }
        for n in Window::new(dim, 4).points() {
            let all_zero = gens
                .iter()
                .all(|g| matches!(is_zero_at(g, &n), Ok(true)));
            prop_assert_eq!(zs.contains(&n), Some(all_zero), "at {:?}", n);
        }
    }
}

#[test]
fn half_root_squares_to_the_radicand_on_windows() {
    // |approx(root(e), n)^2 - e(n)| stays within the certified error at
    // every window point: with h~ the midpoint and err the bound,
    // |h~^2 - e| <= err (2|h~| + err)
    let e = SeqExpr::sum(
        SeqExpr::product(SeqExpr::coord(1, 0), SeqExpr::coord(1, 0)).unwrap(),
        SeqExpr::one(1),
    )
    .unwrap();
    let h = SeqExpr::half_root(e.clone());
    for n in Window::new(1, 10).points() {
        let approx = tempered::eval_approx(&h, &n, 96).unwrap();
        let sq = &approx.value * &approx.value;
        let diff_sq = (&sq - &eval(&e, &n).unwrap()).magnitude_sq();
        let mag = tempered::number::rat_sqrt_upper(&approx.value.magnitude_sq());
        let tol = &approx.abs_err * &(&(&mag + &mag) + &approx.abs_err);
        assert!(diff_sq <= &tol * &tol, "square check failed at {n:?}");
        assert!(approx.abs_err <= common::rat(1, 1 << 30));
    }
}

#[test]
fn zero_test_matches_eval_for_exact_expressions() {
    let mut rng = Rng::new(0xfeed);
    for _ in 0..200 {
        let dim = 1 + rng.below(2) as usize;
        let f = pool_expr(&mut rng, dim, 2);
        if f.contains_half_root() {
            continue;
        }
        let n = common::point(&mut rng, dim, 5);
        assert_eq!(is_zero_at(&f, &n).unwrap(), eval(&f, &n).unwrap().is_zero());
    }
}

#[test]
fn window_audit_counterexamples_are_canonical_first() {
    // scanning order is canonical, so the reported point is minimal
    let f = SeqExpr::product(SeqExpr::coord(1, 0), SeqExpr::coord(1, 0)).unwrap();
    let cert = tempered::growth::GrowthCertificate::new(common::rat(1, 1), 1);
    let report = audit_upper(&f, &cert, &Window::new(1, 10)).unwrap();
    match report.verdict {
        tempered::growth::AuditVerdict::Falsified { point, .. } => {
            assert_eq!(point, LatticePoint::new(vec![-2]));
        }
        _ => panic!("expected falsification"),
    }
    let _ = GaussianRational::one();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn audits_are_monotone_in_the_window(seed in any::<u64>()) {
        // a certificate validated at radius R stays validated at R' <= R
        let mut rng = Rng::new(seed);
        let f = pool_expr(&mut rng, 1, 2);
        if f.contains_half_root() {
            return Ok(());
        }
        let outcome = tempered::growth::fit_certificate(&f, &Window::new(1, 60), 32).unwrap();
        let tempered::growth::FitOutcome::Fitted(cert) = outcome else {
            return Ok(());
        };
        prop_assert!(audit_upper(&f, &cert, &Window::new(1, 60)).unwrap().validated());
        for r in [0u64, 7, 31] {
            prop_assert!(
                audit_upper(&f, &cert, &Window::new(1, r)).unwrap().validated(),
                "fitted certificate failed on the smaller window {r}"
            );
        }
    }
}

#[test]
fn values_and_expressions_are_shareable_across_threads() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<SeqExpr>();
    assert_send_sync::<GaussianRational>();
    assert_send_sync::<LatticePoint>();
    assert_send_sync::<ZeroSetInfo>();
    assert_send_sync::<tempered::growth::GrowthCertificate>();
    // concurrent evaluation of one shared expression
    let f = SeqExpr::product(
        SeqExpr::pattern_mask(2, 1).unwrap(),
        SeqExpr::sum(SeqExpr::coord(2, 0), SeqExpr::one(2)).unwrap(),
    )
    .unwrap();
    let expected: Vec<_> = Window::new(2, 6)
        .points()
        .map(|n| eval(&f, &n).unwrap())
        .collect();
    std::thread::scope(|scope| {
        for _ in 0..4 {
            scope.spawn(|| {
                let got: Vec<_> = Window::new(2, 6)
                    .points()
                    .map(|n| eval(&f, &n).unwrap())
                    .collect();
                assert_eq!(got, expected);
            });
        }
    });
}
