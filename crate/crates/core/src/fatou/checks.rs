use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{FatouFrame, Lift, ThetaSpec};
use crate::prec::{abs_f64, cx, to_c64};
use crate::report::{Check, Relation, VerifyReport};

/// `n × n` grid over `0 ≤ Re w ≤ 1/α`, `−1/α ≤ Im w ≤ 1/α`, restricted to `Θ(theta_r)`.
pub fn fundamental_grid(alpha: f64, n: usize, theta_r: f64) -> Vec<Complex64> {
    let inv = 1.0 / alpha;
    let theta = ThetaSpec::new(theta_r, alpha);
    let mut pts = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let re = inv * (i as f64 + 0.5) / n as f64;
            let im = -inv + 2.0 * inv * (j as f64 + 0.5) / n as f64;
            let w = Complex64::new(re, im);
            if theta.contains(w) {
                pts.push(w);
            }
        }
    }
    pts
}

pub const SEMICONJUGACY_TOLERANCE: f64 = 1e-20;

/// Residuals of `h∘τ = τ∘F`, `τ(w + 1/α) = τ(w)` and `F(w + 1/α) = F(w) + 1/α` over `points`.
pub fn semiconjugacy_report(lift: &Lift, points: &[Complex64]) -> VerifyReport {
    let alpha = lift.alpha_f64();
    let mut report = VerifyReport::new(
        "semiconjugacy",
        format!("{} grid points of one fundamental domain, alpha={alpha}, map={}", points.len(), lift.map.name()),
        lift.prec,
    );
    let rows: Vec<Option<(f64, f64, f64)>> = points
        .par_iter()
        .map(|w| {
            let wc = cx(lift.prec, w.re, w.im);
            let semi = lift.semiconjugacy_residual(&wc).ok()?.to_f64();
            let shifted = wc.clone() + &lift.inv_alpha;
            let dtau = abs_f64(&(lift.tau(&shifted).ok()? - lift.tau(&wc).ok()?));
            let df = abs_f64(&(lift.lift_f(&shifted).ok()? - lift.lift_f(&wc).ok()? - &lift.inv_alpha));
            Some((semi, dtau, df))
        })
        .collect();
    let failed = rows.iter().filter(|r| r.is_none()).count();
    let ok: Vec<_> = rows.into_iter().flatten().collect();
    let sup = |f: fn(&(f64, f64, f64)) -> f64| ok.iter().map(f).fold(0.0, f64::max);
    report.samples = ok.len();
    report.push(Check::new("sup |h(tau(w)) - tau(F(w))|", sup(|r| r.0), Relation::Below, SEMICONJUGACY_TOLERANCE));
    report.push(Check::new("sup |tau(w+1/alpha) - tau(w)|", sup(|r| r.1), Relation::Below, SEMICONJUGACY_TOLERANCE));
    report.push(Check::new("sup |F(w+1/alpha) - F(w) - 1/alpha|", sup(|r| r.2), Relation::Below, SEMICONJUGACY_TOLERANCE));
    report.push(Check::new("points where F is undefined", failed as f64, Relation::AtMost, 0.0));
    report
}

/// Seeded random points of the validated region: `a ≤ Re w ≤ 1/α − a`,
/// `|Im w| ≤ 1/(2α)`, inside `Θ(R)` for the fitted radius.
pub fn random_valid_points(frame: &FatouFrame, n: usize, seed: u64) -> Vec<Complex64> {
    let alpha = frame.alpha_f64();
    let inv = 1.0 / alpha;
    let a = frame.base_a.to_f64();
    let theta = ThetaSpec::new(frame.fit.radius.unwrap_or(0.0), alpha);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = if inv - a > a { (a, inv - a) } else { (a, a + 1.0) };
    let mut pts = Vec::with_capacity(n);
    let mut tries = 0;
    while pts.len() < n && tries < 100 * n + 100 {
        tries += 1;
        let w = Complex64::new(rng.gen_range(lo..hi), rng.gen_range(-0.5 * inv..0.5 * inv));
        if theta.contains(w) {
            pts.push(w);
        }
    }
    pts
}

#[derive(Clone, Copy, Debug)]
pub struct AbelOptions {
    pub points: usize,
    pub seed: u64,
    pub abel_tolerance: f64,
    pub normalization_tolerance: f64,
    pub dilatation_s: usize,
    pub dilatation_t: usize,
}

impl Default for AbelOptions {
    fn default() -> Self {
        AbelOptions {
            points: 1000,
            seed: 7,
            abel_tolerance: 1e-15,
            normalization_tolerance: 1e-12,
            dilatation_s: 11,
            dilatation_t: 201,
        }
    }
}

/// Abel equation, normalization, dilatation of `g`, orientation, image band, and growth of
/// `Im Φ` towards the fixed point 0.
pub fn abel_report(frame: &FatouFrame, opts: &AbelOptions) -> VerifyReport {
    let alpha = frame.alpha_f64();
    let inv = 1.0 / alpha;
    let mut report = VerifyReport::new(
        "abel",
        format!(
            "{} random points of the validated region, base line a={:.6}, alpha={alpha}, map={}",
            opts.points,
            frame.base_a.to_f64(),
            frame.map().name()
        ),
        frame.prec(),
    );
    if frame.base_fallback {
        report.flag("BASE_LINE_FALLBACK");
    }
    let pts = random_valid_points(frame, opts.points, opts.seed);
    let rows: Vec<Option<(f64, f64, f64)>> = pts
        .par_iter()
        .map(|w| {
            let wc = cx(frame.prec(), w.re, w.im);
            let fw = frame.lift.lift_f(&wc).ok()?;
            let (sp, _) = frame.land(&wc).ok()?;
            let a = frame.phi(&fw).ok()?;
            let b = frame.phi(&wc).ok()?;
            let res = abs_f64(&(a - &b - 1u32));
            Some((res, b.real().to_f64(), sp.jacobian))
        })
        .collect();
    let failed = rows.iter().filter(|r| r.is_none()).count();
    let ok: Vec<_> = rows.into_iter().flatten().collect();
    report.samples = ok.len();
    let sup_abel = ok.iter().map(|r| r.0).fold(0.0, f64::max);
    let min_re = ok.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let max_re = ok.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    let min_jac = ok.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    report.push(Check::new("sup |Phi(F(w)) - Phi(w) - 1|", sup_abel, Relation::Below, opts.abel_tolerance));
    report.push(Check::new("points where Phi is undefined", failed as f64, Relation::AtMost, 0.0));
    report.push(Check::new("min Re Phi", min_re, Relation::AtLeast, 0.0));
    report.push(Check::new("max Re Phi", max_re, Relation::AtMost, inv));
    report.push(Check::new("min Jacobian of g at landing points", min_jac, Relation::Above, 0.0));

    let cp = frame.phi(&frame.cp_lift).map(|z| abs_f64(&z)).unwrap_or(f64::INFINITY);
    report.push(Check::new("|Phi(cp_lift)|", cp, Relation::Below, opts.normalization_tolerance));
    let cp_abs = frame.lift.tau(&frame.cp_lift).map(|z| abs_f64(&z)).unwrap_or(f64::NAN);
    report.push(Check::new("|tau(cp_lift)| > 0.22", cp_abs, Relation::Above, 0.22));
    report.push(Check::new("|tau(cp_lift)| < 2", cp_abs, Relation::Below, 2.0));

    // Dilatation on the base strip.
    let span = inv;
    let grid: Vec<(f64, f64)> = (0..opts.dilatation_t)
        .flat_map(|j| {
            let t = -span + 2.0 * span * j as f64 / (opts.dilatation_t.max(2) - 1) as f64;
            (0..opts.dilatation_s).map(move |i| (i as f64 / (opts.dilatation_s.max(2) - 1) as f64, t))
        })
        .collect();
    let dil = grid.par_iter().map(|&(s, t)| frame.dilatation(s, t).unwrap_or(f64::INFINITY)).collect::<Vec<_>>();
    let sup_dil = dil.iter().copied().fold(0.0, f64::max);
    report.push(Check::new("sup dilatation of g on the base strip", sup_dil, Relation::Below, 1.0 / 3.0));

    // Im Φ grows without bound along a vertical ray towards the fixed point 0.
    let re = frame.base_a.to_f64() + 0.5;
    let heights = [0.5 * inv, inv, 2.0 * inv, 4.0 * inv];
    let ims: Vec<f64> =
        heights.iter().filter_map(|&h| frame.phi(&frame.c(re, h)).ok().map(|z| to_c64(&z).im)).collect();
    let increasing = ims.len() == heights.len() && ims.windows(2).all(|w| w[1] > w[0] + 0.25 * inv);
    report.push(Check::flag("Im Phi increases along tau-preimages approaching 0", increasing));
    report.fit("base_a", frame.base_a.to_f64());
    report.fit("normalization_shift_re", to_c64(&frame.normalization_shift).re);
    report.fit("normalization_shift_im", to_c64(&frame.normalization_shift).im);
    report
}
