use std::f64::consts::{PI, TAU};

use fatoulab_core::dynamics::*;
use fatoulab_core::prec::{abs_f64, cx, from_c64, to_c64};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float};

const P: u32 = 128;

fn maps(alpha: f64) -> [MapSpec; 2] {
    [MapSpec::quadratic(alpha, P), MapSpec::cubic(alpha, P)]
}

#[test]
fn zero_is_fixed_and_rotates_by_alpha() {
    for m in maps(0.137) {
        assert!(m.eval(&cx(P, 0.0, 0.0)).unwrap().is_zero());
        let d = to_c64(&m.derivative(&cx(P, 0.0, 0.0)).unwrap());
        assert!((d.norm() - 1.0).abs() < 1e-15);
        assert!((d.arg() - TAU * 0.137).abs() < 1e-15);
    }
}

#[test]
fn cubic_critical_values() {
    let m = MapSpec::cubic(0.21, P);
    let lam = Complex64::from_polar(1.0, TAU * 0.21);
    let third = Complex::with_val(P, (Float::with_val(P, -1) / 3u32, 0));
    let v = to_c64(&m.eval(&third).unwrap());
    assert!((v - lam * (-4.0 / 27.0)).norm() < 1e-15);
    assert!(m.eval(&cx(P, -1.0, 0.0)).unwrap().is_zero());
}

#[test]
fn sigma_closed_forms() {
    let a = 0.09;
    let lam = Complex64::from_polar(1.0, TAU * a);
    let q = to_c64(&MapSpec::quadratic(a, P).sigma_fixed_point().unwrap());
    assert!((q - (1.0 - lam)).norm() < 1e-15);
    let c = to_c64(&MapSpec::cubic(a, P).sigma_fixed_point().unwrap());
    assert!((c - (Complex64::from_polar(1.0, -PI * a) - 1.0)).norm() < 1e-15);
    // σ is a root of λz² + 2λz + (λ − 1).
    assert!((lam * c * c + 2.0 * lam * c + lam - 1.0).norm() < 1e-15);
}

#[test]
fn fixed_point_residual_at_working_precision() {
    for a in [1e-1, 1e-2, 1e-3] {
        for m in maps(a) {
            let s = m.sigma_fixed_point().unwrap();
            let r = abs_f64(&(m.eval(&s).unwrap() - &s));
            assert!(r <= 1e-28, "{} α={a}: {r:e}", m.name());
        }
    }
}

#[test]
fn sigma_over_alpha_limit() {
    for m in maps(1e-6) {
        let s = to_c64(&m.sigma_fixed_point().unwrap()) / 1e-6;
        let h2 = to_c64(&m.second_derivative_at_zero().unwrap());
        let limit = Complex64::new(0.0, -4.0 * PI) / h2;
        assert!((s - limit).norm() < 1e-4, "{}: {s} vs {limit}", m.name());
    }
    let s = to_c64(&MapSpec::quadratic(1e-6, P).sigma_fixed_point().unwrap()) / 1e-6;
    assert!((s - Complex64::new(0.0, -TAU)).norm() < 1e-4);
}

#[test]
fn parabolic_parameter_is_rejected() {
    for m in maps(0.0) {
        assert_eq!(m.sigma_fixed_point(), Err(DynError::ParabolicCase));
        assert_eq!(m.u_at_zero(), Err(DynError::ParabolicCase));
    }
}

#[test]
fn u_at_zero_and_consistency() {
    let a = 0.037;
    let lam = Complex64::from_polar(1.0, TAU * a);
    let q = MapSpec::quadratic(a, P);
    assert!((to_c64(&q.u_at_zero().unwrap()) - 1.0).norm() < 1e-15);
    let c = MapSpec::cubic(a, P);
    let expected = (1.0 - lam) / (Complex64::from_polar(1.0, -PI * a) - 1.0);
    assert!((to_c64(&c.u_at_zero().unwrap()) - expected).norm() < 1e-14);
    for m in [q, c] {
        let s = m.sigma_fixed_point().unwrap();
        let prod = Complex::with_val(P, &s * m.u_at_zero().unwrap());
        let diff = abs_f64(&(prod - (Complex::with_val(P, 1u32 - &m.lambda))));
        assert!(diff < 1e-30);
        // The quotient form agrees with the closed form away from 0 and σ.
        let z = cx(P, 0.3, -0.2);
        let d = abs_f64(&(m.u_quotient(&z).unwrap() - m.u(&z).unwrap()));
        assert!(d < 1e-30, "{}", m.name());
        assert!(m.u_quotient(&cx(P, 1e-12, 0.0)).is_ok());
    }
}

#[test]
fn critical_points_are_roots_of_the_derivative() {
    for m in maps(0.3) {
        for c in m.critical_points().unwrap() {
            let r = abs_f64(&m.derivative(&c).unwrap());
            assert!(r <= 1e-28, "{}: {r:e}", m.name());
        }
    }
    let q = MapSpec::quadratic(0.3, P);
    let c = to_c64(&q.main_critical_point().unwrap());
    assert!((c + Complex64::from_polar(0.5, TAU * 0.3)).norm() < 1e-15);
}

#[test]
fn domain_u_examples() {
    let u = DomainU::default();
    assert!(u.contains(Complex64::new(0.0, 0.0)));
    assert!(!u.contains(Complex64::new(-2.0, 0.0)));
    assert!(!u.contains(Complex64::new(-1.0, 0.0)));
    assert!(!u.contains(Complex64::new(-1.0, 1e-5)));
    assert!(u.in_b(Complex64::new(-1.0, 1e-5)));
    assert!(u.contains(Complex64::new(-1.0, 0.1)));
    assert!(!u.contains(Complex64::new(1e4, 0.0)));
    for x in [-1.0, -1.5, -10.0, -1e6] {
        assert!(!u.contains(Complex64::new(x, 0.0)));
    }
}

/// Membership answers under resolution doubling only change next to the boundary of `B`.
#[test]
fn domain_mask_is_stable_under_resolution_doubling() {
    let coarse = DomainU::new(512);
    let fine = DomainU::new(1024);
    let h = coarse.pixel_size();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let w = coarse.half_width;
    let mut changed = 0;
    for _ in 0..1000 {
        let z = Complex64::new(-1.0 + rng.gen_range(-w..w), rng.gen_range(-w..w));
        if coarse.contains(z) != fine.contains(z) {
            changed += 1;
            // Distance to the level set |P| = inner, to first order.
            let dp = (1.0 + z) * (1.0 + 3.0 * z);
            let dist = (cubic_p(z).norm() - coarse.inner_radius).abs() / dp.norm();
            assert!(dist <= 2.0 * h, "{z} changed {dist:e} from the boundary");
        }
    }
    assert!(changed < 50);
}

#[test]
fn domain_mask_exports_pgm() {
    let u = DomainU::new(64);
    let mut buf = Vec::new();
    u.write_pgm(&mut buf).unwrap();
    assert!(buf.starts_with(b"P5\n64 64\n255\n"));
    assert_eq!(buf.len(), b"P5\n64 64\n255\n".len() + 64 * 64);
    assert!(u.mask_pixels() > 0);
}

#[test]
fn orbit_examples() {
    let q = MapSpec::quadratic(0.3, P);
    let o = orbit(&q, Complex64::new(0.0, 0.0), 10, 4.0).unwrap();
    assert_eq!(o.points.len(), 11);
    assert!(o.points.iter().all(|p| p[0] == 0.0 && p[1] == 0.0));
    assert_eq!(o.escaped_at, None);

    let o = orbit(&q, Complex64::new(10.0, 0.0), 10, 4.0).unwrap();
    assert_eq!(o.escaped_at, Some(1));
    assert_eq!(o.points.len(), 2);

    let silver = MapSpec::quadratic(2f64.sqrt() - 1.0, P);
    let cp = to_c64(&silver.main_critical_point().unwrap());
    let o = orbit(&silver, cp, 100_000, 4.0).unwrap();
    assert_eq!(o.escaped_at, None);
}

#[test]
fn orbit_records_follow_the_map() {
    let q = MapSpec::quadratic(0.3, P);
    let o = orbit(&q, Complex64::new(0.1, 0.2), 50, 4.0).unwrap();
    for w in o.points.windows(2) {
        let z = Complex64::new(w[0][0], w[0][1]);
        let lam = Complex64::from_polar(1.0, TAU * 0.3);
        let next = lam * z + z * z;
        assert!((next - Complex64::new(w[1][0], w[1][1])).norm() < 1e-14);
    }
    let mut csv = Vec::new();
    o.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("iter,re,im,abs"));
    assert_eq!(text.lines().count(), 52);
}

#[test]
fn exp_projection_examples() {
    let z = exp_project(&cx(P, 0.0, 0.0));
    assert!((to_c64(&z) - Complex64::new(-4.0 / 27.0, 0.0)).norm() < 1e-30);
    let w = cx(P, 0.31, -0.7);
    let a = to_c64(&exp_project(&w));
    let b = to_c64(&exp_project(&(w.clone() + 1u32)));
    assert!((a - b).norm() < 1e-15);
    let mut prev = f64::INFINITY;
    for h in [1.0, 2.0, 4.0, 8.0] {
        let m = abs_f64(&exp_project(&cx(P, 0.2, h)));
        assert!(m < prev);
        assert!((m - 4.0 / 27.0 * (-TAU * h).exp()).abs() < 1e-12 * m.max(1e-300) + 1e-40);
        prev = m;
    }
    assert_eq!(exp_lift(&cx(P, 0.0, 0.0), 0, true), Err(DynError::ZeroNotInImage));
}

#[test]
fn exp_lift_inverts_projection_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10_000 {
        let w = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-2.0..2.0));
        let wc = from_c64(P, w);
        for conj in [true, false] {
            let z = if conj { exp_project(&wc) } else { exp_project_plain(&wc) };
            let b: i64 = rng.gen_range(-3..=3);
            let back = exp_lift(&z, b, conj).unwrap();
            let proj = if conj { exp_project(&back) } else { exp_project_plain(&back) };
            assert!(abs_f64(&(proj - &z)) <= 1e-30 * abs_f64(&z).max(1.0));
            let d = to_c64(&back) - w;
            assert!((d.re - d.re.round()).abs() < 1e-12 && d.im.abs() < 1e-12, "{w} -> {}", to_c64(&back));
        }
    }
}
