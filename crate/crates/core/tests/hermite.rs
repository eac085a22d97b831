mod common;

use beurling_core::function::{dilate, fourier, random_expansion};
use beurling_core::hermite::{
    gauss_hermite_rule, hermite_eval, hermite_functions, mehler_kernel, mehler_partial_sum,
    multiindex_enumerate, project, synthesize,
};
use beurling_core::{HermiteExpansion, MultiIndex, TestFunction};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn inner_products(n: usize, d: u32) -> f64 {
    let rule = gauss_hermite_rule(40).unwrap();
    let (pts, w) = rule.tensor(n, true);
    let idx = multiindex_enumerate(n, d);
    let vals: Vec<Vec<f64>> =
        idx.iter().map(|a| pts.chunks(n).map(|x| hermite_eval(a, x).unwrap().value).collect()).collect();
    let mut worst: f64 = 0.0;
    for i in 0..idx.len() {
        for j in i..idx.len() {
            let ip: f64 = vals[i].iter().zip(&vals[j]).zip(&w).map(|((a, b), w)| a * b * w).sum();
            let delta = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((ip - delta).abs());
        }
    }
    worst
}

#[test]
fn orthonormal_up_to_degree_twelve() {
    assert!(inner_products(1, 12) < 1e-10);
    assert!(inner_products(2, 12) < 1e-10);
}

#[test]
fn low_order_closed_forms() {
    let pi14 = std::f64::consts::PI.powf(-0.25);
    for x in [-2.5, -0.3, 0.0, 1.1, 4.0] {
        let h = hermite_functions(2, x);
        let g = (-0.5 * x * x).exp() * pi14;
        assert!((h[0] - g).abs() < 1e-15);
        assert!((h[1] - 2f64.sqrt() * x * g).abs() < 1e-15);
        assert!((h[2] - (2.0 * x * x - 1.0) / 2f64.sqrt() * g).abs() < 1e-14);
    }
    let v = hermite_eval(&MultiIndex::single(2000), &[1e3]).unwrap();
    assert!(v.value.is_finite());
}

#[test]
fn mehler_partial_sums_converge() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10 {
        let x = [rng.random_range(-2.0..2.0)];
        let y = [rng.random_range(-2.0..2.0)];
        let closed = mehler_kernel(0.5, &x, &y).unwrap();
        let s40 = mehler_partial_sum(0.5, &x, &y, 40).unwrap();
        assert!((closed - s40).abs() < 1e-10);
    }
    let (x, y) = ([0.4], [0.7]);
    let closed = mehler_kernel(0.5, &x, &y).unwrap();
    let t1 = closed - mehler_partial_sum(0.5, &x, &y, 30).unwrap();
    let t2 = closed - mehler_partial_sum(0.5, &x, &y, 32).unwrap();
    let ratio = t2 / t1;
    assert!((ratio / 0.25 - 1.0).abs() < 0.2, "{ratio}");
}

#[test]
fn gauss_hermite_is_exact_on_low_moments() {
    let rule = gauss_hermite_rule(20).unwrap();
    let mut exact = 1f64;
    for k in (0..=38).step_by(2) {
        let m: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(k)).sum();
        let want = std::f64::consts::PI.sqrt() * exact;
        assert!((m - want).abs() < 1e-12 * want, "k={k}");
        exact *= (k as f64 + 1.0) / 2.0;
    }
}

#[test]
fn synthesized_fourier_matches_quadrature() {
    let e = random_expansion(1, 6, 21).unwrap();
    let f = TestFunction::from(e.clone());
    let g = fourier(&f).unwrap();
    for xi in [-3.0, -1.2, 0.0, 0.5, 2.7] {
        let re = common::line(&|x| (e.eval(&[x]) * num_complex::Complex64::from_polar(1.0, -x * xi)).re, 14.0, 1e-13);
        let im = common::line(&|x| (e.eval(&[x]) * num_complex::Complex64::from_polar(1.0, -x * xi)).im, 14.0, 1e-13);
        let want = num_complex::Complex64::new(re, im) / (2.0 * std::f64::consts::PI).sqrt();
        assert!((g.eval(&[xi]) - want).norm() < 1e-8);
    }
}

#[test]
fn fourier_twice_reflects() {
    let f = TestFunction::from(random_expansion(2, 5, 4).unwrap());
    let ff = fourier(&fourier(&f).unwrap()).unwrap();
    for x in [[0.3, -1.0], [1.5, 0.2], [-2.0, 2.0]] {
        assert!((ff.eval(&x) - f.eval(&[-x[0], -x[1]])).norm() < 1e-8);
    }
}

#[test]
fn dilation_scales_the_transform() {
    let f = TestFunction::from(random_expansion(1, 4, 9).unwrap());
    for delta in [1.0 / 3.0, 3.0] {
        let fd = dilate(&f, delta).unwrap();
        let g = fourier(&fd).unwrap();
        let fhat = fourier(&f).unwrap();
        for y in [-1.0, 0.2, 2.0] {
            let want = fhat.eval(&[y / delta]) * delta.powf(-0.5);
            assert!((g.eval(&[y]) - want).norm() < 1e-10);
        }
    }
}

#[test]
fn projection_recovers_expansion() {
    let e = random_expansion(2, 6, 3).unwrap();
    let p = project(&|x: &[f64]| synthesize(&e, x), 2, 6, 16, 1e-12).unwrap();
    assert!(p.converged);
    for (a, c) in e.iter() {
        assert!((p.expansion.get(a) - c).norm() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parity(k in 0u32..40, x in -8.0f64..8.0) {
        let a = MultiIndex::single(k);
        let p = hermite_eval(&a, &[x]).unwrap().value;
        let m = hermite_eval(&a, &[-x]).unwrap().value;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((p - sign * m).abs() <= 1e-13 * p.abs().max(1e-300));
    }

    #[test]
    fn mehler_is_symmetric(r in 0.0f64..0.95, x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let a = mehler_kernel(r, &[x], &[y]).unwrap();
        let b = mehler_kernel(r, &[y], &[x]).unwrap();
        prop_assert!((a - b).abs() <= 1e-14 * a.abs());
    }

    #[test]
    fn enumeration_is_graded(n in 1usize..4, d in 0u32..7) {
        let idx = multiindex_enumerate(n, d);
        for w in idx.windows(2) {
            prop_assert!(w[0] < w[1]);
            prop_assert!(w[0].degree() <= w[1].degree());
        }
        let count = (0..=d).map(|k| binom(k as u64 + n as u64 - 1, n as u64 - 1)).sum::<u64>();
        prop_assert_eq!(idx.len() as u64, count);
    }

    #[test]
    fn synthesis_is_linear(seed in 0u64..1000, x in -4.0f64..4.0) {
        let e = random_expansion(1, 8, seed).unwrap();
        let g = random_expansion(1, 8, seed + 1).unwrap();
        let mut sum = HermiteExpansion::zero(1).unwrap();
        for a in multiindex_enumerate(1, 8) {
            sum.insert(a.clone(), e.get(&a) + g.get(&a)).unwrap();
        }
        let lhs = synthesize(&sum, &[x]);
        let rhs = synthesize(&e, &[x]) + synthesize(&g, &[x]);
        prop_assert!((lhs - rhs).norm() < 1e-13);
    }
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
