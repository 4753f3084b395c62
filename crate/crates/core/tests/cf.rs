use fatoulab_core::cf::rule::{curated_family, ledger_from_rule, QuotientRule};
use fatoulab_core::cf::*;
use rug::{Float, Integer, Rational};

fn ints(v: &[u64]) -> Vec<Integer> {
    v.iter().map(|&x| Integer::from(x)).collect()
}

fn sqrt2m1(prec: u32) -> Float {
    Float::with_val(prec, 2).sqrt() - 1u32
}

#[test]
fn silver_ratio_expansion_is_constant() {
    let cf = expand_cf(&sqrt2m1(256), 4).unwrap();
    assert_eq!(cf.a, ints(&[0, 2, 2, 2, 2]));
    assert!(cf.eps.iter().all(|&e| e == 1));
    let target = sqrt2m1(256);
    for al in &cf.alpha_seq[..=4] {
        let d = Float::with_val(256, al - &target).abs();
        assert!(d < 1e-70, "α_n drifted by {d}");
    }
}

#[test]
fn rational_input_terminates() {
    let third = Float::with_val(256, Rational::from((1, 3)));
    let cf = expand_cf(&third, 8).unwrap();
    assert_eq!(cf.a, ints(&[0, 3]));
    assert!(cf.terminated);
    assert_eq!(cf.depth, 1);
    assert!(cf.alpha_seq[1].is_zero());
}

#[test]
fn nearest_integer_of_point_seven() {
    let x = Float::with_val(256, Rational::from((7, 10)));
    let cf = expand_cf(&x, 1).unwrap();
    assert_eq!(cf.a[0], 1);
    assert_eq!(cf.eps[0], -1);
    let d = Float::with_val(256, &cf.alpha_seq[0] - Float::with_val(256, Rational::from((3, 10)))).abs();
    assert!(d < 1e-70);
}

#[test]
fn half_integer_ties_round_to_even() {
    let x = Float::with_val(128, 2.5);
    let cf = expand_cf(&x, 1).unwrap();
    assert_eq!(cf.a[0], 2);
    let y = Float::with_val(128, 3.5);
    assert_eq!(expand_cf(&y, 1).unwrap().a[0], 4);
}

#[test]
fn levels_satisfy_the_recurrence() {
    let x = Float::with_val(256, 1u32).exp() - 2u32;
    let cf = expand_cf(&x, 30).unwrap();
    let tol = Float::with_val(256, Float::i_exp(1, 1 - 256)) * 10u32;
    for n in 1..=cf.depth {
        let lhs = Float::with_val(256, cf.alpha_seq[n - 1].recip_ref());
        let rhs = Float::with_val(256, &cf.alpha_seq[n] * i32::from(cf.eps[n])) + &cf.a[n];
        let scale = Float::with_val(256, lhs.abs_ref()).max(&Float::with_val(256, 1));
        assert!(Float::with_val(256, &lhs - &rhs).abs() <= Float::with_val(256, &tol * &scale), "level {n}");
        assert!(cf.alpha_seq[n] > 0 && cf.alpha_seq[n] < 0.5);
    }
}

#[test]
fn precision_exhaustion_is_reported_and_auto_doubling_recovers() {
    let x = sqrt2m1(64);
    match expand_cf(&x, 200) {
        Err(CfError::PrecisionExhausted { bits, .. }) => assert_eq!(bits, 64),
        other => panic!("expected PrecisionExhausted, got {other:?}"),
    }
    let cf = expand_cf_auto(sqrt2m1, 200, 64, 4096).unwrap();
    assert!(cf.prec > 64);
    assert_eq!(cf.depth, 200);
}

#[test]
fn approximants_examples() {
    let silver = Approximants::from_quotients(&ints(&[0, 2, 2, 2, 2]), &[1; 5], Convention::Plain);
    assert_eq!(silver.q, ints(&[1, 2, 5, 12, 29]));
    let one = Approximants::from_quotients(&ints(&[0, 1]), &[1, 1], Convention::Plain);
    assert_eq!(one.q, ints(&[1, 1]));
    let fig = Approximants::from_quotients(&ints(&[0, 3, 50]), &[1, 1, 1], Convention::Plain);
    assert_eq!(fig.q, ints(&[1, 3, 151]));
}

#[test]
fn sign_aware_denominators_differ_when_a_sign_is_negative() {
    let a = ints(&[0, 3, 4, 5, 6]);
    let eps = [1, 1, -1, 1, 1];
    let signed = Approximants::from_quotients(&a, &eps, Convention::SignAware);
    // q_2 = 4·3 + 1, q_3 = a_3 q_2 + ε_2 q_1 = 5·13 − 3
    assert_eq!(signed.q[3], 62);
    assert_eq!(Approximants::divergence_level(&a, &eps), Some(3));
}

#[test]
fn approximant_denominators_do_not_overflow() {
    let a: Vec<Integer> = std::iter::once(Integer::new()).chain((0..40).map(|_| Integer::from(u64::MAX))).collect();
    let q = Approximants::from_quotients(&a, &[1; 41], Convention::Plain).q;
    assert!(q[40].significant_bits() > 64 * 39);
    assert!(q.windows(2).skip(1).all(|w| w[1] > w[0]));
}

#[test]
fn brjuno_partial_examples() {
    let cf = ModifiedCF::from_quotients(&ints(&[0, 2, 2, 2]), &[1; 4], 128).unwrap();
    let oracle = 2f64.ln() + 5f64.ln() / 2.0;
    assert!((brjuno_partial(&cf, 1).unwrap() - oracle).abs() < 1e-14);
    assert!((oracle - 1.4978).abs() < 1e-4);

    let one = ModifiedCF::from_quotients(&ints(&[0, 1]), &[1, 1], 128).unwrap();
    assert_eq!(brjuno_partial(&one, 0).unwrap(), 0.0);
    assert!(matches!(brjuno_partial(&one, 1), Err(CfError::DepthExceeded { .. })));
}

/// `a_{j+1} = ⌈e^{q_j}⌉` with exact big integers; every summand `ln q_{j+1}/q_j` is at least 1.
#[test]
fn super_exponential_partial_sums_grow_at_least_linearly() {
    let mut a = vec![Integer::new(), Integer::from(3)];
    let mut q = vec![Integer::from(1), Integer::from(3)];
    for j in 1..3 {
        let qj = q[j].to_f64();
        let bits = (qj * 1.5) as u32 + 64;
        let next = Float::with_val(bits, Float::with_val(bits, &q[j])).exp().ceil().to_integer().unwrap();
        let qn = Integer::from(&next * &q[j]) + &q[j - 1];
        a.push(next);
        q.push(qn);
    }
    for n in 1..=2 {
        let s = brjuno_partial_from_q(&q, n).unwrap();
        assert!(s >= n as f64, "B({n}) = {s}");
    }
}

#[test]
fn product_sequence_first_term_is_alpha_one() {
    let x = Float::with_val(256, 0.3183);
    let cf = expand_cf(&x, 5).unwrap();
    let p1 = product_sequence(&cf, 1).unwrap();
    assert!((p1 - cf.alpha_seq[1].to_f64()).abs() < 1e-15);
    assert!(matches!(product_sequence(&cf, 0), Err(CfError::DepthExceeded { .. })));
}

#[test]
fn product_sequence_silver_limit() {
    let cf = expand_cf(&sqrt2m1(512), 60).unwrap();
    let s = 2f64.sqrt() - 1.0;
    let limit = s.powf(1.0 / (1.0 - s));
    let p = product_sequence(&cf, 60).unwrap();
    assert!((p - limit).abs() < 1e-12, "{p} vs {limit}");
    assert!((limit - 0.2222).abs() < 1e-3);
}

#[test]
fn product_sequence_decays_for_super_exponential_quotients() {
    let (ledger, _) = ledger_from_rule(&QuotientRule::SuperExp { c: 1.0 }, 8);
    let p5 = ledger.product_seq[4];
    let p6 = ledger.product_seq[5];
    assert!(p6 < 1e-3, "P(6) = {p6}");
    assert!(p6 < p5);
}

#[test]
fn rule_ledger_matches_materialized_expansion() {
    let (ledger, _) = ledger_from_rule(&QuotientRule::Periodic { period: vec![2, 5] }, 20);
    let a: Vec<Integer> = std::iter::once(Integer::new())
        .chain((0..80).map(|i| Integer::from(if i % 2 == 0 { 2 } else { 5 })))
        .collect();
    let cf = ModifiedCF::from_quotients(&a, &[1; 81], 512).unwrap();
    let direct = BrjunoLedger::from_cf(&cf);
    for n in 0..20 {
        assert!((ledger.partial_sums[n] - direct.partial_sums[n]).abs() < 1e-12, "partial {n}");
        assert!((ledger.log_product_seq[n] - direct.log_product_seq[n]).abs() < 1e-12, "product {n}");
    }
}

#[test]
fn irr_n_examples() {
    let mk = |v: &[u64]| ModifiedCF::from_quotients(&ints(v), &vec![1; v.len()], 128).unwrap();
    assert!(is_irr_n(&mk(&[0, 2, 2, 2]), 2));
    assert!(!is_irr_n(&mk(&[0, 3, 50, 1]), 3));
    assert!(is_irr_n(&mk(&[0, 3, 50, 100000]), 3));
}

#[test]
fn q_beta_stays_in_the_duality_band_on_brjuno_cases() {
    for case in curated_family().into_iter().filter(|c| c.brjuno) {
        let (ledger, _) = ledger_from_rule(&case.rule, 25);
        for (n, v) in ledger.q_beta.iter().enumerate().take(25) {
            assert!((1e-2..=1e2).contains(v), "{}: q_n β_(n-1) at {n} = {v}", case.name);
        }
    }
}

#[test]
fn document_serializes_with_fixed_keys() {
    let cf = expand_cf(&sqrt2m1(128), 3).unwrap();
    let doc = serde_json::to_value(CfDocument::new(&cf)).unwrap();
    let keys: Vec<&str> = doc.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    for k in ["a", "eps", "alpha", "q", "brjuno_partials", "product_seq"] {
        assert!(keys.contains(&k), "missing {k}");
    }
    assert!(doc["alpha"][0].is_string());
    assert_eq!(doc["q"][3], "12");
    let again = serde_json::to_string(&CfDocument::new(&cf)).unwrap();
    assert_eq!(serde_json::to_string(&doc).unwrap().len(), again.len());
}
