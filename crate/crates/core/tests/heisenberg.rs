use beurling_core::function::random_expansion;
use beurling_core::heisenberg::{
    kaverage_identity_check, l2_norm_sq, laguerre_growth_fit, phi_imag_ln, schrodinger_apply, GroupElement,
};
use beurling_core::{HermiteExpansion, MultiIndex, PolyGaussian, TestFunction};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn real_action_is_unitary() {
    let f = TestFunction::from(random_expansion(1, 5, 2).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let g = GroupElement::real(vec![rng.random_range(-3.0..3.0)], vec![rng.random_range(-3.0..3.0)]).unwrap();
        let (v, ok) = l2_norm_sq(&schrodinger_apply(&f, &g).unwrap(), 1e-13).unwrap();
        assert!(ok && (v - 1.0).abs() < 1e-10, "{v}");
    }
}

#[test]
fn identity_acts_trivially() {
    let f = TestFunction::from(random_expansion(2, 3, 1).unwrap());
    let g = schrodinger_apply(&f, &GroupElement::identity(2)).unwrap();
    for x in [[0.1, 0.2], [-1.0, 2.0]] {
        assert_eq!(g.eval(&x), f.eval(&x));
    }
}

#[test]
fn complex_elements_need_hermite_expansions() {
    let f = TestFunction::from(PolyGaussian::gaussian(1));
    let g = GroupElement::complex(vec![0.0], vec![0.3], vec![0.0], vec![0.0]).unwrap();
    assert!(schrodinger_apply(&f, &g).is_err());
}

#[test]
fn circle_average_identity() {
    let cases = [
        HermiteExpansion::basis(MultiIndex::single(0)),
        HermiteExpansion::basis(MultiIndex::single(1)),
        random_expansion(1, 4, 6).unwrap(),
    ];
    for f in &cases {
        for (y, v) in [(0.0, 0.0), (0.3, 0.0), (0.2, -0.4), (0.35, 0.35)] {
            let r = kaverage_identity_check(f, y, v, 64).unwrap();
            assert!(r.converged && r.rel_dev < 1e-4, "{y},{v}: {r:?}");
        }
    }
    let r = kaverage_identity_check(&cases[1], 0.3, 0.2, 64).unwrap();
    let rho2: f64 = 0.13;
    assert!((r.rhs - (1.0 + 2.0 * rho2) * rho2.exp()).abs() < 1e-13);
}

#[test]
fn laguerre_growth_matches_szego() {
    let ks: Vec<u32> = (20..=60).collect();
    let fit = laguerre_growth_fit(0, 1.0, &ks).unwrap();
    assert!((0.9..=1.1).contains(&fit.slope), "{}", fit.slope);
    let later: Vec<u32> = (200..=240).collect();
    assert!(laguerre_growth_fit(0, 1.0, &later).unwrap().residual < fit.residual);
    let flat = laguerre_growth_fit(0, 1e-4, &ks).unwrap();
    assert!(flat.slope.abs() < 1e-2);
    assert!(laguerre_growth_fit(0, 0.0, &ks).is_err());
}

proptest! {
    #[test]
    fn imaginary_phi_positive_and_increasing(k in 0u32..80, nu in 0u32..3, r in 0.0f64..3.0, dr in 0.01f64..1.0) {
        let a = phi_imag_ln(k, nu, r * r).unwrap();
        let b = phi_imag_ln(k, nu, (r + dr) * (r + dr)).unwrap();
        prop_assert!(a.is_finite() && a >= 0.0 && b > a);
    }
}
