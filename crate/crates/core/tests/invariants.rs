use fatoulab_core::cf::rule::{ledger_from_rule, QuotientRule};
use fatoulab_core::cf::*;
use fatoulab_core::dynamics::{exp_lift, exp_project};
use fatoulab_core::fatou::{theta_contains, ThetaSpec};
use fatoulab_core::prec::{abs_f64, cx, to_c64};
use fatoulab_core::renorm::sector_count;
use num_complex::Complex64;
use proptest::prelude::*;
use rug::{Float, Integer};

const BITS: u32 = 256;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expansion_satisfies_the_level_recurrence(x in 1e-6f64..0.499_999) {
        let cf = expand_cf(&Float::with_val(BITS, x), 20).unwrap();
        let tol = Float::with_val(BITS, Float::i_exp(1, 40 - BITS as i32));
        // A terminated expansion stores 0 for a remainder below the rational floor.
        let last = if cf.terminated { cf.depth - 1 } else { cf.depth };
        for n in 1..=last {
            let lhs = Float::with_val(BITS, cf.alpha_seq[n - 1].recip_ref());
            let rhs = Float::with_val(BITS, &cf.alpha_seq[n] * i32::from(cf.eps[n])) + &cf.a[n];
            let scale = Float::with_val(BITS, lhs.abs_ref()).max(&Float::with_val(BITS, 1));
            prop_assert!(Float::with_val(BITS, &lhs - &rhs).abs() <= Float::with_val(BITS, &tol * &scale));
            prop_assert!(cf.a[n] >= 2);
            prop_assert!(cf.alpha_seq[n] >= 0 && cf.alpha_seq[n] < 0.5);
        }
    }

    #[test]
    fn expansion_reconstructs_the_input(x in 1e-3f64..0.49) {
        let cf = expand_cf(&Float::with_val(BITS, x), 25).unwrap();
        let r = cf.reconstruct(cf.depth);
        let back = Float::with_val(BITS, &r).to_f64();
        prop_assert!((back - x).abs() <= 1e-12 * x.max(1e-3));
    }

    #[test]
    fn denominators_increase(a in prop::collection::vec(2u64..1_000_000, 1..40)) {
        let mut qs = vec![Integer::new()];
        qs.extend(a.iter().map(|&v| Integer::from(v)));
        let eps = vec![1i8; qs.len()];
        let q = Approximants::from_quotients(&qs, &eps, Convention::Plain).q;
        prop_assert!(q.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn partial_sums_and_products_are_monotone(period in prop::collection::vec(2u64..200, 1..4)) {
        let (ledger, _) = ledger_from_rule(&QuotientRule::Periodic { period }, 20);
        prop_assert!(ledger.partial_sums.windows(2).all(|w| w[1] >= w[0]));
        prop_assert!(ledger.log_product_seq.windows(2).all(|w| w[1] <= w[0]));
        for (j, b) in ledger.beta.iter().enumerate().skip(1) {
            prop_assert!(*b < 0.5f64.powi(j as i32) * (1.0 + 1e-12), "β_{j} = {b}");
        }
    }

    #[test]
    fn exp_lift_round_trips(re in -5.0f64..5.0, im in -3.0f64..3.0, branch in -4i64..4) {
        let w = cx(128, re, im);
        let z = exp_project(&w);
        let back = exp_lift(&z, branch, true).unwrap();
        prop_assert!(abs_f64(&(exp_project(&back) - &z)) <= 1e-30 * abs_f64(&z).max(1.0));
        let d = to_c64(&back) - Complex64::new(re, im);
        prop_assert!((d.re - d.re.round()).abs() < 1e-12 && d.im.abs() < 1e-12);
    }

    #[test]
    fn sector_count_identity(
        q_prev in 1u64..1_000_000,
        gap in 1u64..1_000_000,
        a in 1u64..10_000,
        slack in 0u64..3,
        k in 0i64..50,
        extra in 1i64..50,
    ) {
        let q_prev = Integer::from(q_prev);
        let q_n = Integer::from(&q_prev + gap);
        let q_next = Integer::from(&q_n * (a + slack)) + &q_prev;
        let sc = sector_count(&q_prev, &q_n, &q_next, k + extra, k, &Integer::from(a));
        prop_assert!(sc.holds());
        prop_assert_eq!(sc.lhs == sc.rhs, slack == 0);
        // RHS − LHS = q_{n+1} − a q_n − q_{n−1} exactly.
        prop_assert_eq!(Integer::from(&sc.rhs - &sc.lhs), Integer::from(&q_n * slack));
    }

    #[test]
    fn theta_is_invariant_under_the_deck_translation(
        r in 0.5f64..20.0,
        inv in 5.0f64..200.0,
        re in -300.0f64..300.0,
        im in -100.0f64..100.0,
        n in -3i32..3,
    ) {
        let alpha = 1.0 / inv;
        let t = ThetaSpec::new(r, alpha);
        let w = Complex64::new(re, im);
        let shifted = w + f64::from(n) * inv;
        // Stay off the boundary circles, where rounding decides membership.
        prop_assume!((t.pole_distance(w) - r).abs() > 1e-9);
        prop_assert_eq!(theta_contains(&t, w), theta_contains(&t, shifted));
    }
}
