mod common;

use brimcalc::growth::{fit_polynomial, BinomialPolynomial, Convention, IntegerSequenceWindow};
use brimcalc::invariants::{ideal_invariants, module_invariants, DirectSumModule, FitConfig};
use brimcalc::Ideal;
use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;

fn conventions() -> impl Strategy<Value = Convention> {
    prop_oneof![
        (1usize..4).prop_map(|dim| Convention::HilbertSamuel { dim }),
        (1usize..3, 1usize..4).prop_map(|(dim, rank)| Convention::BuchsbaumRim { dim, rank }),
        (1usize..3, 1usize..4)
            .prop_filter("degree >= 0", |(d, r)| d + r >= 2)
            .prop_map(|(dim, rank)| Convention::Fiber { dim, rank }),
        (1usize..4).prop_map(|rank| Convention::Sally { rank }),
    ]
}

fn polynomial() -> impl Strategy<Value = BinomialPolynomial> {
    conventions().prop_flat_map(|c| {
        proptest::collection::vec(-50i64..50, c.degree() + 1).prop_map(move |cs| {
            BinomialPolynomial::from_signed(c, cs.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minimal_generators_are_idempotent(i in any_ideal_2()) {
        let again = Ideal::new(i.ring(), i.generators().to_vec()).unwrap();
        prop_assert_eq!(again.generators(), i.generators());
        // no generator divides another
        for a in i.generators() {
            for b in i.generators() {
                if a != b {
                    prop_assert!(!a.iter().zip(b).all(|(x, y)| x <= y));
                }
            }
        }
    }

    #[test]
    fn product_is_commutative_and_associative(a in any_ideal_2(), b in any_ideal_2(), c in any_ideal_2()) {
        prop_assert_eq!(a.product(&b).unwrap(), b.product(&a).unwrap());
        prop_assert_eq!(
            a.product(&b).unwrap().product(&c).unwrap(),
            a.product(&b.product(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn powers_add(i in primary_ideal(2, 5), a in 0usize..4, b in 0usize..4) {
        prop_assert_eq!(i.power(a).unwrap().product(&i.power(b).unwrap()).unwrap(), i.power(a + b).unwrap());
    }

    #[test]
    fn colength_matches_box_count(i in primary_ideal(2, 8)) {
        prop_assert_eq!(i.colength().unwrap(), brute_colength(&i));
    }

    #[test]
    fn colength_matches_box_count_3d(i in primary_ideal(3, 5)) {
        prop_assert_eq!(i.colength().unwrap(), brute_colength(&i));
    }

    #[test]
    fn colength_matches_semigroup_count(i in semigroup_ideal()) {
        prop_assert_eq!(i.colength().unwrap(), brute_colength(&i));
    }

    #[test]
    fn colength_is_antitone(i in primary_ideal(2, 5), j in primary_ideal(2, 5)) {
        // I·J ⊆ I ⊆ I + J
        let ij = i.product(&j).unwrap();
        let sum = i.sum(&j).unwrap();
        prop_assert!(ij.colength().unwrap() >= i.colength().unwrap());
        prop_assert!(i.colength().unwrap() >= sum.colength().unwrap());
    }

    #[test]
    fn signed_coefficients_round_trip(p in polynomial(), lo in -3i64..4) {
        let c = p.convention();
        let deg = c.degree();
        let w = IntegerSequenceWindow::from_fn(lo, lo + (deg + 4) as i64, |n| p.evaluate(n));
        let fit = fit_polynomial(&w, c, 3).unwrap();
        prop_assert_eq!(fit.polynomial.signed_coefficients(), p.signed_coefficients());
        for n in -5..20 {
            prop_assert_eq!(p.evaluate(n), p.evaluate_signed(n));
        }
    }

    #[test]
    fn translation_shifts_the_argument(p in polynomial(), s in -6i64..6) {
        let q = p.translate(s);
        for n in -4..12 {
            prop_assert_eq!(q.evaluate(n), p.evaluate(n + s));
        }
    }

    #[test]
    fn fit_agrees_after_postulation(p in polynomial(), noise in proptest::collection::vec(-9i64..9, 0..4)) {
        let c = p.convention();
        let k = noise.len() as i64;
        let hi = k + (c.degree() + 5) as i64;
        // perturb the first values only
        let w = IntegerSequenceWindow::from_fn(0, hi, |n| {
            let base = p.evaluate(n);
            if n < k { base + BigInt::from(noise[n as usize] + 100) } else { base }
        });
        let fit = fit_polynomial(&w, c, 3).unwrap();
        prop_assert_eq!(fit.polynomial.signed_coefficients(), p.signed_coefficients());
        prop_assert!(fit.postulation <= k);
        for n in fit.postulation..=hi {
            prop_assert_eq!(w.value(n).unwrap(), &fit.polynomial.evaluate(n));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn leading_coefficients_are_positive(i in primary_ideal(2, 4), r in 1usize..3) {
        let cfg = FitConfig::default();
        let inv = ideal_invariants(&i, &cfg).unwrap();
        prop_assert!(inv.e[0] > BigInt::from(0));
        prop_assert!(inv.f[0] > BigInt::from(0));
        let m = module_invariants(&DirectSumModule::copies(&i, r).unwrap(), &cfg).unwrap();
        prop_assert!(m.br[0] > BigInt::from(0));
        prop_assert!(m.f[0] > BigInt::from(0));
    }

    #[test]
    fn fitted_values_reproduce_the_sequence(i in primary_ideal(2, 4), j in primary_ideal(2, 4)) {
        let m = DirectSumModule::new(vec![i, j]).unwrap();
        let inv = module_invariants(&m, &FitConfig::default()).unwrap();
        let p = BinomialPolynomial::from_signed(
            Convention::BuchsbaumRim { dim: 2, rank: 2 },
            inv.br.clone(),
        ).unwrap();
        for n in inv.bf_postulation.max(0)..inv.bf_postulation.max(0) + 4 {
            prop_assert_eq!(p.evaluate(n), naive_bf(&m, n as u32));
        }
    }
}
