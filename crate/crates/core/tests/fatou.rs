use std::f64::consts::TAU;

use fatoulab_core::dynamics::MapSpec;
use fatoulab_core::fatou::*;
use fatoulab_core::prec::{abs_f64, cx, to_c64};
use num_complex::Complex64;

const P: u32 = 128;

fn lift(alpha: f64, cubic: bool) -> Lift {
    let m = if cubic { MapSpec::cubic(alpha, P) } else { MapSpec::quadratic(alpha, P) };
    Lift::new(m, None).unwrap()
}

fn frame(alpha: f64, cubic: bool) -> FatouFrame {
    let m = if cubic { MapSpec::cubic(alpha, P) } else { MapSpec::quadratic(alpha, P) };
    FatouFrame::calibrate(m, &FrameConfig::default()).unwrap()
}

#[test]
fn tau_examples() {
    let l = lift(0.05, false);
    let sigma = to_c64(&l.sigma);
    let half = to_c64(&l.tau(&cx(P, 10.0, 0.0)).unwrap());
    assert!((half - sigma / 2.0).norm() < 1e-15);

    let w = cx(P, 3.7, -1.3);
    let shifted = w.clone() + &l.inv_alpha;
    assert!(abs_f64(&(l.tau(&w).unwrap() - l.tau(&shifted).unwrap())) < 1e-30);

    // Im(αw) = 20
    let top = to_c64(&l.tau(&cx(P, 4.0, 400.0)).unwrap());
    let scale = sigma.norm() * (-TAU * 0.05 * 400.0).exp();
    assert!((top.norm() / scale - 1.0).abs() < 1e-10);

    assert_eq!(l.tau(&cx(P, 0.0, 0.0)), Err(FatouError::PoleHit));
}

#[test]
fn lift_semiconjugates_and_commutes_with_deck_translation() {
    for cubic in [false, true] {
        let l = lift(0.01, cubic);
        for &(re, im) in &[(30.0, 0.0), (50.0, 20.0), (70.0, -15.0)] {
            let w = cx(P, re, im);
            assert!(l.semiconjugacy_residual(&w).unwrap() < 1e-25);
            let f = l.lift_f(&w).unwrap();
            let fs = l.lift_f(&(w.clone() + &l.inv_alpha)).unwrap();
            assert!(abs_f64(&(fs - f - &l.inv_alpha)) < 1e-28);
        }
    }
}

#[test]
fn lift_inverse_round_trips() {
    let l = lift(0.02, true);
    let w = cx(P, 20.0, 3.0);
    let back = l.lift_f_inverse(&l.lift_f(&w).unwrap()).unwrap();
    assert!(abs_f64(&(back - w)) < 1e-30);
}

#[test]
fn quadratic_lift_exits_outside_the_escape_disk() {
    let l = lift(0.2, false);
    // Near the pole τ is large.
    assert_eq!(l.lift_f(&cx(P, 1e-3, 0.0)), Err(FatouError::DomainExit));
}

#[test]
fn region_membership_examples() {
    let alpha = 0.1;
    let t = ThetaSpec::new(1.0, alpha);
    assert!(!theta_contains(&t, Complex64::new(0.5, 0.0)));
    assert!(!theta_contains(&t, Complex64::new(0.5 + 1.0 / alpha, 0.0)));
    assert!(theta_contains(&t, Complex64::new(5.0, 0.0)));
    let s = SigmaStrip::new(2.0, alpha);
    assert!(sigma_contains(&s, Complex64::new(5.0, 0.0)));
    assert!(!sigma_contains(&s, Complex64::new(9.0, 0.0)));
}

#[test]
fn near_translation_radius_fit_at_small_alpha() {
    let l = lift(0.01, false);
    let fit = fit_near_translation(&l, &PolarGrid::default());
    let r = fit.radius.expect("fitted radius");
    assert!(r > 1.0 && r < 1e3, "R = {r}");
    let report = near_translation_report(&l, &ThetaSpec::new(r, 0.01), &PolarGrid::default(), 0.25);
    assert!(report.pass, "{:?}", report.failures());
}

#[test]
fn near_translation_report_at_alpha_0_005() {
    let l = lift(0.005, false);
    let fit = fit_near_translation(&l, &PolarGrid::default());
    let r = fit.radius.unwrap();
    let report = near_translation_report(&l, &ThetaSpec::new(r, 0.005), &PolarGrid::default(), 0.25);
    assert!(report.pass, "{:?}", report.failures());
    // Decay bound at Im w = 40, midway between the poles so the point lies in the fitted region.
    let c3 = report.fitted["C3"];
    let d = deviation(&l, Complex64::new(100.0, 40.0));
    let bound = c3 * (0.005 / 0.25) * (-TAU * 0.005 * 40.0).exp();
    assert!(d.worst() <= bound * (1.0 + 1e-9), "{} > {bound}", d.worst());
}

#[test]
fn near_translation_report_on_a_single_point() {
    let l = lift(0.01, true);
    let grid = PolarGrid { radii: 1, angles: 1, ..PolarGrid::default() };
    let report = near_translation_report(&l, &ThetaSpec::new(5.0, 0.01), &grid, 0.25);
    assert_eq!(report.samples, 1);
}

#[test]
fn coordinate_normalization_abel_and_growth() {
    let f = frame(0.02, true);
    assert!(abs_f64(&f.phi(&f.cp_lift).unwrap()) < 1e-12);
    let cp_tau = abs_f64(&f.lift.tau(&f.cp_lift).unwrap());
    assert!(cp_tau > 0.22 && cp_tau < 2.0);
    for w in random_valid_points(&f, 20, 5) {
        let r = f.abel_residual(&cx(P, w.re, w.im)).unwrap();
        assert!(r < 1e-20, "{w}: {r:e}");
    }
    let mut prev = f64::NEG_INFINITY;
    for h in [5.0, 20.0, 50.0, 100.0, 200.0] {
        let im = to_c64(&f.phi(&cx(P, 20.0, h)).unwrap()).im;
        assert!(im > prev + 1.0);
        prev = im;
    }
}

#[test]
fn inverse_coordinate_round_trips() {
    let f = frame(0.05, true);
    let w = cx(P, 7.3, 2.1);
    let z = f.phi(&w).unwrap();
    let back = f.phi_inverse(&z, 20.0).unwrap();
    assert!(abs_f64(&(back - &w)) < 1e-15);

    let zeta = cx(P, 3.4, 1.0);
    let a = f.phi_inverse(&zeta, 20.0).unwrap();
    let b = f.phi_inverse(&(zeta.clone() + 1u32), 20.0).unwrap();
    assert!(abs_f64(&(f.lift.lift_f(&a).unwrap() - b)) < 1e-25);

    let high = f.phi_inverse(&cx(P, 3.0, 30.0), 20.0).unwrap();
    assert!(abs_f64(&f.lift.tau(&high).unwrap()) < 1e-3);

    assert!(matches!(f.phi_inverse(&cx(P, -1.0, 0.0), 20.0), Err(FatouError::OutsideImageBand { .. })));
}

#[test]
fn dilatation_of_the_interpolation_is_small() {
    let f = frame(0.01, false);
    for s in [0.0, 0.5, 1.0] {
        for t in [-100.0, -10.0, 0.0, 10.0, 100.0] {
            assert!(f.dilatation(s, t).unwrap() < 1.0 / 3.0);
        }
    }
}

#[test]
fn sector_c_contains_the_critical_value() {
    let f = frame(0.02, true);
    let cloud = f.sector_extract(&SectorSpec::c(), 64).unwrap();
    let lam = Complex64::from_polar(1.0, TAU * 0.02);
    assert!(cloud.contains(lam * (-4.0 / 27.0)));
    assert!(!cloud.contains(Complex64::new(0.0, 0.0)));
    assert!(cloud.to_csv().starts_with("part,re,im\n"));
}

#[test]
fn sector_csharp_touches_zero() {
    let f = frame(0.02, true);
    let cloud = f.sector_extract(&SectorSpec::csharp(), 64).unwrap();
    let top: f64 = SectorSpec::csharp()
        .boundary_params(64)
        .iter()
        .filter(|z| z.im >= CSHARP_TRUNCATION - 1e-9)
        .map(|z| to_c64(&f.lift.tau(&f.phi_inverse_unchecked(&cx(P, z.re, z.im)).unwrap()).unwrap()).norm())
        .fold(0.0, f64::max);
    assert!(cloud.distance_to(Complex64::new(0.0, 0.0)) <= top);
}

#[test]
fn sector_band_diameter_matches_fitted_m() {
    let f = frame(0.02, true);
    let proto = ConstantsProtocol { sector_samples: 32, ..ConstantsProtocol::default() };
    let ledger = fit_constants(&f, &proto);
    let m = ledger.get("M").unwrap();
    let center = (0.5 / 0.02f64).floor();
    let cloud = f.sector_extract(&SectorSpec::c().translated(center), 32).unwrap();
    assert!(cloud.diameter <= m * 0.02 * (1.0 + 1e-12));
    for name in ["C1", "C2", "j0", "C4", "k", "C5", "C6", "C7"] {
        let v = ledger.get(name).unwrap_or(f64::NAN);
        assert!(v.is_finite(), "{name} = {v}");
    }
    assert!(ledger.get("C6").unwrap() > 1.0);
}

#[test]
fn renorm_kind_is_rejected_by_the_lift() {
    use fatoulab_core::renorm::{renormalize, RenormOptions};
    let r = renormalize(MapSpec::quadratic(0.24, P), &RenormOptions { steps: 2, ..RenormOptions::default() }).unwrap();
    assert!(matches!(Lift::new(r.as_map_spec(), None), Err(FatouError::UnsupportedMap)));
}
