use std::sync::Arc;

use beurling_core::bargmann::{
    bargmann_handle, coeff_bridge, contour_taylor, default_radii, duality_check, polydisc_grid,
    product_estimate_check, EntireFunctionHandle, QuadratureBargmann,
};
use beurling_core::envelope::{decay_rate_fit, envelope_check, DecayEnvelope, DecayLaw, EnvelopeKind};
use beurling_core::function::{make_ft_eigenfunction, random_expansion, random_phase_expansion, Sampled};
use beurling_core::functional::ka_eval;
use beurling_core::heisenberg::poisson_semigroup;
use beurling_core::hermite::{multiindex_enumerate, project};
use beurling_core::{DecayBound, HermiteExpansion, MultiIndex, TestFunction, C64};

fn shifted_gaussian(x0: f64) -> TestFunction {
    let k = std::f64::consts::PI.powf(-0.25);
    let eval = Arc::new(move |x: &[f64]| C64::new(k * (-0.5 * (x[0] - x0) * (x[0] - x0)).exp(), 0.0));
    let ln_abs = Arc::new(move |x: &[f64]| k.ln() - 0.5 * (x[0] - x0) * (x[0] - x0));
    let decay = DecayBound::gaussian(k * (0.5 * x0 * x0).exp(), 0.25);
    Sampled::new(1, eval, decay).with_ln_abs(ln_abs).into()
}

#[test]
fn duality_on_random_expansions() {
    for seed in 0..5 {
        let f = TestFunction::from(random_expansion(1, 8, seed).unwrap());
        let dev = duality_check(&f, &polydisc_grid(1, 2.0, 5)).unwrap();
        assert!(dev < 1e-8, "seed {seed}: {dev}");
    }
}

#[test]
fn contour_path_matches_projection() {
    for n in [1, 2] {
        let e = random_expansion(n, 8, 11).unwrap();
        let f = TestFunction::from(e.clone());
        let proj = project(&|x: &[f64]| f.eval(x), n, 8, 16, 1e-13).unwrap().expansion;
        let h = bargmann_handle(&f, 1.0).unwrap();
        let t = contour_taylor(&h, &vec![1.0; n], 32, 8).unwrap();
        let bridged = coeff_bridge(&t).unwrap();
        for a in multiindex_enumerate(n, 8) {
            let d = (proj.get(&a) - bridged.get(&a)).norm();
            assert!(d < 1e-8, "n={n} {a}: {d}");
        }
    }
}

#[test]
fn quadrature_bargmann_recovers_coherent_coefficients() {
    let x0 = 1.0;
    let f = shifted_gaussian(x0);
    let q = QuadratureBargmann::new(&f, 5.0, 1e-12).unwrap();
    assert!(q.converged());
    let h = EntireFunctionHandle::QuadratureBargmann(q);
    let t = contour_taylor(&h, &[1.5], 48, 12).unwrap();
    let e = coeff_bridge(&t).unwrap();
    for k in 0..=12u32 {
        let a = MultiIndex::single(k);
        let exact = beurling_core::function::coherent_state(&[x0], &a) * std::f64::consts::PI.powf(-0.25);
        assert!((e.get(&a).re - exact).abs() < 1e-10, "k={k}");
    }
}

#[test]
fn product_estimate_holds() {
    let phi0 = TestFunction::from(HermiteExpansion::basis(MultiIndex::single(0)));
    let eig = TestFunction::from(make_ft_eigenfunction(1, 8, 1, 3).unwrap());
    let grid = polydisc_grid(1, 3.0, 5);
    for f in [&phi0, &eig] {
        for a in [0.3, 0.7] {
            let r = product_estimate_check(f, a, &grid, None).unwrap();
            assert!(r.max_ratio <= 1.0 + 1e-9, "a={a}: {}", r.max_ratio);
        }
    }
}

#[test]
fn eigenfunction_envelope_dominates() {
    std::thread::scope(|scope| {
        let jobs: Vec<_> = [1usize, 2]
            .into_iter()
            .flat_map(|n| (0..5u64).map(move |seed| (n, seed)))
            .map(|(n, seed)| {
                scope.spawn(move || {
                    let e = make_ft_eigenfunction(n, 12, (seed % 4) as u32, seed).unwrap();
                    let tol = if n == 1 { 1e-6 } else { 1e-4 };
                    let ka = ka_eval(&TestFunction::from(e.clone()), 0.5, tol).unwrap();
                    assert!(ka.converged, "n={n} seed={seed}");
                    let env = DecayEnvelope::new(EnvelopeKind::Eigenfunction, n)
                        .with_a(0.5)
                        .unwrap()
                        .with_ka(ka.value)
                        .unwrap();
                    let r = envelope_check(&e, &env).unwrap();
                    assert!(r.dominated(), "n={n} seed={seed}: slope {}", r.slope);
                })
            })
            .collect();
        for j in jobs {
            j.join().unwrap();
        }
    });
}

#[test]
fn phi0_against_eigenfunction_envelope() {
    let e = HermiteExpansion::basis(MultiIndex::single(0));
    let ka = ka_eval(&TestFunction::from(e.clone()), 0.5, 1e-9).unwrap().value;
    assert!(ka > 1.0);
    let env = DecayEnvelope::new(EnvelopeKind::Eigenfunction, 1).with_a(0.5).unwrap().with_ka(ka).unwrap();
    let r = envelope_check(&e, &env).unwrap();
    assert!((r.rows[0].log_ratio.exp() - ka.powf(-0.5)).abs() < 1e-12);
}

#[test]
fn gaussian_meets_exp_decay_envelope() {
    let f = shifted_gaussian(1.0);
    let h = EntireFunctionHandle::QuadratureBargmann(QuadratureBargmann::new(&f, 6.0, 1e-12).unwrap());
    let mut coeffs = HermiteExpansion::zero(1).unwrap();
    for k in 0..=16u32 {
        let a = MultiIndex::single(k);
        let t = contour_taylor(&h, &default_radii(&a), 64, k).unwrap();
        let c = coeff_bridge(&t).unwrap().get(&a);
        coeffs.insert(a, c).unwrap();
    }
    for t in [0.5, 1.0] {
        let env = DecayEnvelope::new(EnvelopeKind::ExpDecay, 1).with_t(t).unwrap();
        let r = envelope_check(&coeffs, &env).unwrap();
        assert!(r.dominated(), "t={t}: {}", r.slope);
    }
}

#[test]
fn semigroup_decay_is_sqrt_not_geometric() {
    let g = random_phase_expansion(1, 40, 2).unwrap();
    let f = poisson_semigroup(&g, 0.8).unwrap();
    let env = DecayEnvelope::new(EnvelopeKind::EntireVector, 1).with_t(0.76).unwrap();
    assert!(envelope_check(&f, &env).unwrap().slope < 0.0);
    let s = decay_rate_fit(&f, DecayLaw::SqrtExponential).unwrap();
    let q = decay_rate_fit(&f, DecayLaw::Geometric).unwrap();
    assert!((s.t - 0.8).abs() < 1e-10);
    assert!(q.residual > 10.0 * s.residual.max(1e-12), "{} vs {}", q.residual, s.residual);
}

#[test]
fn semigroup_images_have_finite_functional() {
    let g = random_expansion(1, 10, 8).unwrap();
    for t in [0.5, 1.0] {
        let f = TestFunction::from(poisson_semigroup(&g, t).unwrap());
        assert!(ka_eval(&f, 0.5, 1e-8).unwrap().converged);
    }
}
