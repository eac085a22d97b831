mod common;

use beurling_core::function::{dilate, random_expansion, Polynomial};
use beurling_core::functional::{
    e_monomial_bound, e_monomial_bound_abs, e_poly_quad, exp_moment, ka_eval, scaling_fit, weighted_bdj,
    MomentOrder, Status,
};
use beurling_core::linalg::Matrix;
use beurling_core::special::erf;
use beurling_core::{PolyGaussian, TestFunction};
use proptest::prelude::*;

const PI: f64 = std::f64::consts::PI;

fn gaussian() -> TestFunction {
    PolyGaussian::gaussian(1).into()
}

/// `∬ e^{-(x²+y²)/2 + a|xy|}` by nested adaptive Gauss–Kronrod on one quadrant.
fn brute_force_gaussian_ka(a: f64) -> f64 {
    let l = (80.0 / (1.0 - a)).sqrt();
    let f = |x: f64, y: f64| (-0.5 * (x * x + y * y) + a * x * y).exp();
    4.0 * common::adaptive_2d(&f, (0.0, l), (0.0, l), 1e-11)
}

fn closed_form(a: f64) -> f64 {
    2.0 * PI / (1.0 - a * a).sqrt() * (1.0 + 2.0 / PI * a.asin())
}

#[test]
fn gaussian_functional_matches_brute_force_and_closed_form() {
    // f = f̂ = e^{-x²/2}
    for i in 1..=9 {
        let a = i as f64 / 10.0;
        let brute = brute_force_gaussian_ka(a);
        let closed = closed_form(a);
        assert!((brute - closed).abs() < 1e-9 * closed, "a={a}: {brute} vs {closed}");
        let v = ka_eval(&gaussian(), a, 1e-8).unwrap();
        assert!(v.converged, "a={a} {v:?}");
        assert!((v.value - closed).abs() < 1e-6 * closed, "a={a}");
    }
    assert!((closed_form(0.6) - 11.0714871779409).abs() < 1e-11);
}

#[test]
fn functional_is_dilation_invariant() {
    let f = TestFunction::from(random_expansion(1, 4, 17).unwrap());
    let base = ka_eval(&f, 0.5, 1e-9).unwrap();
    assert!(base.converged);
    for delta in [1.0 / 3.0, 3.0] {
        let d = ka_eval(&dilate(&f, delta).unwrap(), 0.5, 1e-9).unwrap();
        assert!(d.converged);
        assert!((d.value - base.value).abs() < 1e-6 * base.value, "δ={delta}");
    }
}

#[test]
fn monomial_sum_dominates_signed_integral() {
    for (j, k, a) in [(0, 0, 0.5f64), (1, 1, 0.3), (2, 1, 0.7), (3, 2, 0.5), (0, 4, 0.8)] {
        let l = (90.0 / (1.0 - a)).sqrt();
        let signed = common::adaptive_2d(
            &|x: f64, y: f64| x.abs().powi(j) * y.abs().powi(k) * (-0.5 * (x * x + y * y) + a * x * y).exp(),
            (-l, l),
            (-l, l),
            1e-10,
        );
        let abs = common::adaptive_2d(
            &|x: f64, y: f64| x.abs().powi(j) * y.abs().powi(k) * (-0.5 * (x * x + y * y) + a * (x * y).abs()).exp(),
            (-l, l),
            (-l, l),
            1e-10,
        );
        let b = e_monomial_bound(j as u32, k as u32, a).unwrap();
        assert!(signed <= b * (1.0 + 1e-9), "({j},{k},{a}): {signed} > {b}");
        assert!(abs <= e_monomial_bound_abs(j as u32, k as u32, a).unwrap() * (1.0 + 1e-9));
    }
    let abs00 = closed_form(0.5);
    assert!(abs00 > e_monomial_bound(0, 0, 0.5).unwrap());
}

#[test]
fn e_poly_gaussian_case_is_the_closed_form() {
    let one = Polynomial::one(1);
    let v = e_poly_quad(&one, &one, 0.6, 1e-10).unwrap();
    assert!((v.value - closed_form(0.6)).abs() < 1e-8 * v.value);
}

#[test]
fn scaling_fit_recovers_planted_power() {
    let samples: Vec<(f64, f64)> = [0.9f64, 0.99, 0.999].iter().map(|&a| (a, 3.0 * (1.0 - a * a).powf(-1.5))).collect();
    let fit = scaling_fit(&samples).unwrap();
    assert!((fit.exponent - 1.5).abs() < 1e-12);
    assert!(scaling_fit(&samples[..2]).is_err());
}

#[test]
fn exponential_moment_of_gaussian() {
    // ∫ e^{-x²/2} e^{t|x|} = √(2π) e^{t²/2} (1+erf(t/√2))
    let t = 1.3;
    let v = exp_moment(&gaussian(), t, MomentOrder::Linear).unwrap();
    let want = (2.0 * PI).sqrt() * (0.5 * t * t).exp() * (1.0 + erf(t / 2f64.sqrt()));
    assert!((v.value - want).abs() < 1e-9 * want, "{v:?} {want}");
}

#[test]
fn weighted_functional_verdicts() {
    let finite = weighted_bdj(&gaussian(), 2.0, 1e-6).unwrap();
    assert!(matches!(finite.status, Status::Converged | Status::Finite), "{finite:?}");
    let flat = weighted_bdj(&gaussian(), 0.0, 1e-6).unwrap();
    assert_eq!(flat.status, Status::Divergent);
    let chirp = PolyGaussian::new(Polynomial::one(1), Matrix::diagonal(&[0.5]), Some(Matrix::diagonal(&[0.5]))).unwrap();
    let c = weighted_bdj(&chirp.into(), 10.0, 1e-6).unwrap();
    assert_eq!(c.status, Status::Divergent);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn functional_grows_with_a(a in 0.05f64..0.8, da in 0.01f64..0.15) {
        let f = TestFunction::from(random_expansion(1, 3, 5).unwrap());
        let lo = ka_eval(&f, a, 1e-8).unwrap().value;
        let hi = ka_eval(&f, a + da, 1e-8).unwrap().value;
        prop_assert!(hi >= lo * (1.0 - 1e-8));
    }
}
