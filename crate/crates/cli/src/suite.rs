//! The verification sections driven by [`Config`].

use fatoulab_core::cf::rule::{curated_family, ledger_from_rule};
use fatoulab_core::cf::expand_cf;
use fatoulab_core::dynamics::MapSpec;
use fatoulab_core::fatou::{
    abel_report, fit_near_translation, fundamental_grid, near_translation_report, semiconjugacy_report, AbelOptions,
    FatouFrame, FrameConfig, Lift, PolarGrid, ThetaSpec,
};
use fatoulab_core::renorm::{
    critical_gate_experiment, renormalize, return_window_report, sector_count, GateCase, GateOptions, RenormOptions,
    TowerLedger,
};
use fatoulab_core::report::{Check, Relation, VerifyReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::{Float, Integer};
use serde::Serialize;

use crate::config::{parse_map_name, Config};

#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub name: String,
    pub report: VerifyReport,
}

pub fn map_spec(name: &str, alpha: f64, prec: u32) -> MapSpec {
    if parse_map_name(name) == Some(true) {
        MapSpec::cubic(alpha, prec)
    } else {
        MapSpec::quadratic(alpha, prec)
    }
}

/// Runs the configured sections in parallel and returns them in configuration order.
pub fn run_suite(cfg: &Config) -> Vec<Section> {
    cfg.sections.par_iter().map(|name| Section { name: name.clone(), report: run_section(name, cfg) }).collect()
}

pub fn run_section(name: &str, cfg: &Config) -> VerifyReport {
    match name {
        "cf_roundtrip" => cf_roundtrip(cfg),
        "brjuno_equivalence" => brjuno_equivalence(cfg),
        "semiconjugacy" => semiconjugacy(cfg),
        "near_translation" => near_translation(cfg),
        "abel" => abel(cfg),
        "sector_count" => sector_counts(cfg),
        "rotation" => rotation(cfg),
        "return_window" => return_window(cfg),
        "gate" => gate(cfg),
        other => {
            let mut r = VerifyReport::new(other, "unknown section", 0);
            r.push(Check::flag("section exists", false));
            r
        }
    }
}

/// A uniformly random `bits`-bit dyadic number in `(0, 1)`.
pub fn random_unit(rng: &mut ChaCha8Rng, bits: u32) -> Float {
    let words = bits.div_ceil(64);
    let mut n = Integer::new();
    for _ in 0..words {
        n <<= 64;
        n += rng.gen::<u64>();
    }
    if n == 0 {
        n += 1;
    }
    Float::with_val(bits, n) >> (64 * words) as i32
}

pub fn cf_roundtrip(cfg: &Config) -> VerifyReport {
    let mut report = VerifyReport::new(
        "cf-roundtrip",
        format!("{} random alpha in (0,1), depth {}, {} bits", cfg.cf_samples, cfg.cf_depth, cfg.cf_bits),
        cfg.cf_bits,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let alphas: Vec<Float> = (0..cfg.cf_samples).map(|_| random_unit(&mut rng, cfg.cf_bits)).collect();
    let mut worst = 0.0f64;
    let mut errors = 0usize;
    for a in &alphas {
        match expand_cf(a, cfg.cf_depth) {
            Ok(cf) => {
                let back = Float::with_val(cfg.cf_bits, cf.reconstruct(cf.depth));
                worst = worst.max(Float::with_val(cfg.cf_bits, back - a).abs().to_f64());
            }
            Err(_) => errors += 1,
        }
    }
    let bound = 2f64.powi(cfg.cf_error_log2);
    report.push(Check::new("max |reconstruct(expand(alpha)) - alpha|", worst, Relation::AtMost, bound));
    report.push(Check::new("expansion errors", errors as f64, Relation::AtMost, 0.0));
    report.samples = alphas.len();
    report
}

pub fn brjuno_equivalence(cfg: &Config) -> VerifyReport {
    let family = curated_family();
    let mut report = VerifyReport::new(
        "brjuno-product-equivalence",
        format!(
            "{} curated expansions, product depth {} (threshold {:e}), Brjuno partial depth {} (threshold {:e})",
            family.len(),
            cfg.brjuno_product_depth,
            cfg.brjuno_product_threshold,
            cfg.brjuno_partial_depth,
            cfg.brjuno_sum_threshold
        ),
        fatoulab_core::prec::CF_BITS,
    );
    let depth = cfg.brjuno_product_depth.max(cfg.brjuno_partial_depth) + 1;
    let ledgers: Vec<_> = family.par_iter().map(|c| ledger_from_rule(&c.rule, depth).0).collect();
    for (case, ledger) in family.iter().zip(&ledgers) {
        let log_p = ledger.log_product(cfg.brjuno_product_depth).unwrap_or(f64::NAN);
        let b = ledger.partial(cfg.brjuno_partial_depth).unwrap_or(f64::NAN);
        let product_says_brjuno = !(log_p < cfg.brjuno_product_threshold.ln());
        let sum_says_brjuno = !(b > cfg.brjuno_sum_threshold);
        report.fit(format!("{}: log product", case.name), log_p);
        report.fit(format!("{}: Brjuno partial", case.name), b);
        report.push(Check::flag(
            format!(
                "{}: classifiers agree (product says {}, partial sum says {})",
                case.name,
                if product_says_brjuno { "Brjuno" } else { "non-Brjuno" },
                if sum_says_brjuno { "Brjuno" } else { "non-Brjuno" }
            ),
            product_says_brjuno == sum_says_brjuno,
        ));
    }
    report.samples = family.len();
    report
}

pub fn semiconjugacy(cfg: &Config) -> VerifyReport {
    let mut report = VerifyReport::new(
        "semiconjugacy",
        format!("{0}x{0} grid per (alpha, map)", cfg.semiconjugacy_grid),
        cfg.precision_bits,
    );
    let jobs: Vec<(f64, &String)> =
        cfg.semiconjugacy_alphas.iter().flat_map(|&a| cfg.semiconjugacy_maps.iter().map(move |m| (a, m))).collect();
    let parts: Vec<(String, VerifyReport)> = jobs
        .par_iter()
        .map(|&(a, m)| {
            let prefix = format!("alpha={a} {m}: ");
            let r = match Lift::new(map_spec(m, a, cfg.precision_bits), None) {
                Ok(lift) => semiconjugacy_report(&lift, &fundamental_grid(a, cfg.semiconjugacy_grid, cfg.semiconjugacy_pole_radius)),
                Err(e) => failed("semiconjugacy", &e.to_string()),
            };
            (prefix, r)
        })
        .collect();
    for (prefix, r) in parts {
        report.absorb(&prefix, r);
    }
    report
}

fn failed(lemma: &str, why: &str) -> VerifyReport {
    let mut r = VerifyReport::new(lemma, why, 0);
    r.push(Check::flag(format!("setup: {why}"), false));
    r
}

/// Fitted radius on a polar grid and on the doubled grid.
pub fn fitted_radii(lift: &Lift) -> (Option<f64>, Option<f64>) {
    let g = PolarGrid::default();
    (fit_near_translation(lift, &g).radius, fit_near_translation(lift, &g.doubled()).radius)
}

pub fn near_translation(cfg: &Config) -> VerifyReport {
    let mut report = VerifyReport::new(
        "near-translation",
        format!(
            "fitted R <= {:e}, stable within {} under grid doubling",
            cfg.near_translation_max_radius, cfg.near_translation_stability
        ),
        cfg.precision_bits,
    );
    let jobs: Vec<(f64, &String)> =
        cfg.near_translation_alphas.iter().flat_map(|&a| cfg.near_translation_maps.iter().map(move |m| (a, m))).collect();
    let parts: Vec<(String, VerifyReport)> = jobs
        .par_iter()
        .map(|&(a, m)| {
            let prefix = format!("alpha={a} {m}: ");
            let Ok(lift) = Lift::new(map_spec(m, a, cfg.precision_bits), None) else {
                return (prefix, failed("near-translation", "lift construction"));
            };
            let (r1, r2) = fitted_radii(&lift);
            let mut r = match r1 {
                Some(r) => near_translation_report(&lift, &ThetaSpec::new(r, a), &PolarGrid::default(), 0.25),
                None => failed("near-translation", "no radius fitted"),
            };
            let (r1, r2) = (r1.unwrap_or(f64::NAN), r2.unwrap_or(f64::NAN));
            r.push(Check::new("fitted R", r1, Relation::AtMost, cfg.near_translation_max_radius));
            r.push(Check::new("|R(doubled)/R - 1|", (r2 / r1 - 1.0).abs(), Relation::AtMost, cfg.near_translation_stability));
            r.fit("R_doubled", r2);
            (prefix, r)
        })
        .collect();
    for (prefix, r) in parts {
        report.absorb(&prefix, r);
    }
    report
}

pub fn abel(cfg: &Config) -> VerifyReport {
    let mut report = VerifyReport::new("abel", format!("alpha={}, {} random points", cfg.abel_alpha, cfg.abel_points), cfg.precision_bits);
    let opts = AbelOptions { points: cfg.abel_points, seed: cfg.seed, abel_tolerance: cfg.abel_tolerance, ..AbelOptions::default() };
    for m in &cfg.abel_maps {
        let r = match FatouFrame::calibrate(map_spec(m, cfg.abel_alpha, cfg.precision_bits), &FrameConfig::default()) {
            Ok(frame) => abel_report(&frame, &opts),
            Err(e) => failed("abel", &e.to_string()),
        };
        report.absorb(&format!("{m}: "), r);
    }
    report
}

pub fn sector_counts(cfg: &Config) -> VerifyReport {
    let mut report = VerifyReport::new(
        "sector-count",
        format!("{} random triples and {} silver-ratio levels", cfg.sector_triples, cfg.sector_pell_levels),
        0,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut bad = 0usize;
    let mut equalities = 0usize;
    for _ in 0..cfg.sector_triples {
        let q_prev = Integer::from(rng.gen_range(1u64..1 << 40));
        let q_n = Integer::from(&q_prev + rng.gen_range(1u64..1 << 40));
        let a: u64 = rng.gen_range(1..1 << 20);
        let slack: u64 = rng.gen_range(0..3);
        let q_next = Integer::from(&q_n * (a + slack)) + &q_prev;
        let k: i64 = rng.gen_range(0..1000);
        let k_n = k + rng.gen_range(1..1000);
        let sc = sector_count(&q_prev, &q_n, &q_next, k_n, k, &Integer::from(a));
        let diff = Integer::from(&sc.rhs - &sc.lhs);
        if !sc.holds() || diff != Integer::from(&q_n * slack) {
            bad += 1;
        }
        equalities += usize::from(sc.lhs == sc.rhs);
    }
    report.push(Check::new("random triples violating the count", bad as f64, Relation::AtMost, 0.0));
    report.fit("random triples with equality", equalities as f64);

    let silver = Float::with_val(512, 2).sqrt() - 1u32;
    match expand_cf(&silver, cfg.sector_pell_levels + 2) {
        Ok(cf) => {
            let ledger = TowerLedger::from_cf(&cf, cfg.sector_pell_levels, 3, 1);
            report.push(Check::new(
                "silver-ratio levels checked",
                ledger.levels.len() as f64,
                Relation::AtLeast,
                cfg.sector_pell_levels as f64,
            ));
            report.absorb("silver: ", ledger.report("silver"));
        }
        Err(e) => report.absorb("silver: ", failed("sector-count", &e.to_string())),
    }
    report.samples += cfg.sector_triples;
    report
}

fn renorm_options(cfg: &Config) -> RenormOptions {
    RenormOptions {
        radius: cfg.rotation_radius,
        steps: cfg.rotation_steps,
        secant_angles: cfg.secant_angles,
        ..RenormOptions::default()
    }
}

pub fn rotation(cfg: &Config) -> VerifyReport {
    let mut report = VerifyReport::new(
        "rotation",
        format!("renormalized {} maps, radius {:e}, {} steps", cfg.rotation_map, cfg.rotation_radius, cfg.rotation_steps),
        cfg.precision_bits,
    );
    let opts = renorm_options(cfg);
    let parts: Vec<(String, VerifyReport)> = cfg
        .rotation_alphas
        .par_iter()
        .map(|&a| {
            let r = match renormalize(map_spec(&cfg.rotation_map, a, cfg.precision_bits), &opts) {
                Ok(res) => return_window_report(&res, cfg.rotation_tolerance, cfg.secant_tolerance),
                Err(e) => failed("renormalization", &e.to_string()),
            };
            (format!("alpha={a}: "), r)
        })
        .collect();
    for (prefix, r) in parts {
        report.absorb(&prefix, r);
    }
    report
}

pub fn return_window(cfg: &Config) -> VerifyReport {
    let opts = renorm_options(cfg);
    match renormalize(map_spec(&cfg.window_map, cfg.window_alpha, cfg.precision_bits), &opts) {
        Ok(res) => {
            let mut r = return_window_report(&res, cfg.window_rotation_tolerance, cfg.secant_tolerance);
            r.lemma = "return-window".into();
            r
        }
        Err(e) => failed("return-window", &e.to_string()),
    }
}

pub fn gate(cfg: &Config) -> VerifyReport {
    let opts = GateOptions { budgets: cfg.gate_budgets.clone(), ratio_bound: cfg.gate_ratio, ..GateOptions::default() };
    match critical_gate_experiment(&GateCase::figure_cases(), &opts) {
        Ok(g) => g.report,
        Err(e) => failed("gate", &e.to_string()),
    }
}
