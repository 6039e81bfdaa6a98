use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, PI};

use gevrey_core::borel::{
    asymptotic_partial_sum, borel_series_check, central_binomials, flat_difference, flat_difference_closed_form,
    laplace_batch, laplace_ray, winding_integral, QuadParams,
};
use gevrey_core::series::Coeff;
use gevrey_core::Exec;
use num_complex::Complex64;
use proptest::prelude::*;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn conjugation_symmetry(w in 2.0f64..40.0, theta in 0.05f64..1.5) {
        let q = QuadParams::default();
        let up = laplace_ray(re(w), theta, &q).unwrap().value;
        let down = laplace_ray(re(w), -theta, &q).unwrap().value;
        prop_assert!(rel(up.conj(), down) <= 10.0 * q.rel_tol, "w = {}, θ = {}: {} vs {}", w, theta, up, down);
    }

    #[test]
    fn path_independence(r in 2.0f64..40.0, phi in -0.6f64..0.6, t1 in 0.05f64..0.8, t2 in 0.05f64..0.8, upper in any::<bool>()) {
        let q = QuadParams::default();
        let w = Complex64::from_polar(r, phi);
        let sign = if upper { 1.0 } else { -1.0 };
        let a = laplace_ray(w, sign * t1, &q).unwrap().value;
        let b = laplace_ray(w, sign * t2, &q).unwrap().value;
        prop_assert!(rel(a, b) <= 10.0 * q.rel_tol, "w = {}, angles {} {}", w, sign * t1, sign * t2);
    }

    #[test]
    fn flat_difference_matches_closed_form(r in 1.0f64..60.0, phi in -1.2f64..1.2) {
        let w = Complex64::from_polar(r, phi);
        let q = QuadParams::default();
        let a = flat_difference(w, &q).unwrap().value;
        prop_assert!(rel(a, flat_difference_closed_form(w)) <= 1e-9, "w = {}", w);
    }

    #[test]
    fn halving_the_tolerance_stays_within_the_error_estimate(w in 2.0f64..40.0, theta in 0.1f64..1.4) {
        let coarse = laplace_ray(re(w), theta, &QuadParams::with_rel_tol(1e-8)).unwrap();
        let fine = laplace_ray(re(w), theta, &QuadParams::with_rel_tol(5e-9)).unwrap();
        prop_assert!((coarse.value - fine.value).norm() <= coarse.error, "w = {}, θ = {}", w, theta);
    }

    #[test]
    fn monodromy_has_order_two(w in 4.0f64..30.0, k in 1i64..=3) {
        let q = QuadParams::default();
        let fp = laplace_ray(re(w), FRAC_PI_4, &q).unwrap().value;
        let fm = laplace_ray(re(w), -FRAC_PI_4, &q).unwrap().value;
        for turns in [k, -k] {
            let direct = winding_integral(re(w), turns, FRAC_PI_4, &q).unwrap().value;
            let expect = if turns % 2 == 0 { fp } else { fm };
            prop_assert!(rel(direct, expect) <= 1e-7, "w = {}, k = {}", w, turns);
        }
    }
}

#[test]
fn central_binomial_coefficients() {
    let head: Vec<Coeff> = [1, 2, 6, 20, 70].iter().map(|&c| Coeff::from_integer(c.into())).collect();
    assert_eq!(&central_binomials(4)[..], &head[..]);
    assert!(borel_series_check(0));
    assert!(borel_series_check(20));
}

#[test]
fn flat_function_decay_ratio() {
    let r = (flat_difference_closed_form(re(8.0)) / flat_difference_closed_form(re(4.0))).norm();
    assert!((r - (-1.0f64).exp() * 0.5f64.sqrt()).abs() <= 1e-6);
    let q = QuadParams::default();
    let r = (flat_difference(re(8.0), &q).unwrap().value / flat_difference(re(4.0), &q).unwrap().value).norm();
    assert!((r - (-1.0f64).exp() * 0.5f64.sqrt()).abs() <= 1e-6);
}

#[test]
fn optimal_truncation_error_is_flat_scale() {
    let q = QuadParams::default();
    for w in [12.0, 20.0, 30.0] {
        let f = laplace_ray(re(w), FRAC_PI_4, &q).unwrap().value;
        let n = (w / 4.0f64).round() as usize;
        let err = (f - asymptotic_partial_sum(re(w), n)).norm();
        let a = flat_difference_closed_form(re(w)).norm();
        assert!(err <= 50.0 * a && a <= 50.0 * err, "w = {w}: error {err:e}, |a| = {a:e}");
    }
    let f = laplace_ray(re(20.0), FRAC_PI_6, &q).unwrap().value;
    let err = (f - asymptotic_partial_sum(re(20.0), 6)).norm();
    assert!(err <= 2.0 * flat_difference_closed_form(re(20.0)).norm());
}

#[test]
fn batch_matches_pointwise() {
    let q = QuadParams::default();
    let ws: Vec<Complex64> = (1..=12).map(|i| Complex64::from_polar(3.0 * i as f64, 0.3 * (i as f64 / 12.0 * PI).sin())).collect();
    let seq = laplace_batch(&ws, FRAC_PI_4, &q, Exec::Sequential);
    let par = laplace_batch(&ws, FRAC_PI_4, &q, Exec::Parallel);
    for ((w, a), b) in ws.iter().zip(seq).zip(par) {
        let single = laplace_ray(*w, FRAC_PI_4, &q).unwrap().value;
        assert_eq!(a.unwrap().value, single);
        assert_eq!(b.unwrap().value, single);
    }
}

#[test]
fn rays_need_decay() {
    let q = QuadParams::default();
    assert!(laplace_ray(re(10.0), 0.0, &q).is_err());
    assert!(laplace_ray(Complex64::new(0.0, 10.0), 0.5, &q).is_err());
    assert!(laplace_ray(re(10.0), 1.6, &q).is_err());
}
