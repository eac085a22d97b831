use beurling_core::envelope::{
    envelope_check, pointwise_gaussian_verify, DecayEnvelope, EnvelopeKind,
};
use beurling_core::hermite::multiindex_enumerate;
use beurling_core::special::least_squares;
use beurling_core::{HermiteExpansion, MultiIndex, C64};
use proptest::prelude::*;

fn envelope(kind: EnvelopeKind, n: usize, t: f64) -> DecayEnvelope {
    DecayEnvelope::new(kind, n).with_t(t).unwrap().with_ka(7.0).unwrap().with_c(1.3).unwrap()
}

/// `ln env − prefactor` against the kind's statistic.
fn statistic(kind: EnvelopeKind, a: &MultiIndex) -> (f64, f64) {
    let n = a.dim() as f64;
    let deg = a.degree() as f64;
    let ln_odd: f64 = a.entries().iter().map(|&k| (2.0 * k as f64 + 1.0).ln()).sum();
    let sq: f64 = a.entries().iter().map(|&k| (2.0 * k as f64 + 1.0).sqrt()).sum();
    match kind {
        EnvelopeKind::Eigenfunction => (deg, ln_odd / (4.0 * n)),
        EnvelopeKind::OnFinite => (deg, 0.25 * ln_odd),
        EnvelopeKind::ExpDecay => (sq, 0.25 * ln_odd),
        EnvelopeKind::EntireVector => ((2.0 * deg + n).sqrt(), 0.0),
        EnvelopeKind::VemuriHardy => (deg, -0.25 * ln_odd),
        EnvelopeKind::HardyPointwise => (deg, 0.0),
    }
}

fn expected_slope(kind: EnvelopeKind, n: usize, t: f64) -> f64 {
    let n = n as f64;
    match kind {
        EnvelopeKind::Eigenfunction => -t / n,
        EnvelopeKind::OnFinite | EnvelopeKind::VemuriHardy | EnvelopeKind::HardyPointwise => -t,
        EnvelopeKind::ExpDecay => -t / (2.0 * n).sqrt(),
        EnvelopeKind::EntireVector => -t,
    }
}

#[test]
fn envelopes_are_log_linear_in_their_statistic() {
    for kind in EnvelopeKind::ALL {
        for n in [1, 2] {
            let e = envelope(kind, n, 0.4);
            let idx = multiindex_enumerate(n, 10);
            let (xs, ys): (Vec<f64>, Vec<f64>) = idx
                .iter()
                .map(|a| {
                    let (x, pre) = statistic(kind, a);
                    (x, e.ln_eval(a).unwrap() - pre)
                })
                .unzip();
            let (slope, _) = least_squares(&xs, &ys);
            assert!((slope - expected_slope(kind, n, 0.4)).abs() < 1e-10, "{kind:?} n={n}");
        }
    }
}

#[test]
fn exact_envelope_values_give_zero_ratios() {
    let e = envelope(EnvelopeKind::OnFinite, 2, 0.7);
    let coeffs = HermiteExpansion::from_pairs(
        2,
        multiindex_enumerate(2, 6).into_iter().map(|a| {
            let v = e.ln_eval(&a).unwrap().exp();
            (a, C64::new(v, 0.0))
        }),
    )
    .unwrap();
    let r = envelope_check(&coeffs, &e).unwrap();
    assert!(r.rows.iter().all(|row| row.log_ratio.abs() < 1e-12));
    assert!(r.slope.abs() < 1e-12 && r.dominated());
    for w in r.rows.windows(2) {
        assert!(w[0].alpha < w[1].alpha);
    }
}

#[test]
fn planted_geometric_coefficients_obey_pointwise_bound() {
    let (c, t, s) = (1.0, 1.0, 0.5);
    let coeffs = HermiteExpansion::from_pairs(
        1,
        (0..30u32).map(|k| {
            let sign = if k % 3 == 0 { -1.0 } else { 1.0 };
            (MultiIndex::single(k), C64::new(sign * (-(2.0 * k as f64 + 1.0) * t / 2.0).exp(), 0.0))
        }),
    )
    .unwrap();
    let grid: Vec<Vec<f64>> = (0..=200).map(|i| vec![-5.0 + 0.05 * i as f64]).collect();
    let r = pointwise_gaussian_verify(&coeffs, c, t, s, &grid).unwrap();
    assert!(r.passed(), "{}", r.max_ratio);
    let too_big = coeffs.scaled(C64::new(2.0, 0.0));
    assert!(pointwise_gaussian_verify(&too_big, c, t, s, &grid).is_err());
}

proptest! {
    #[test]
    fn envelopes_are_positive(k in 0u32..200, j in 0u32..200, t in 0.01f64..3.0) {
        for kind in EnvelopeKind::ALL {
            let e = envelope(kind, 2, t);
            let l = e.ln_eval(&MultiIndex::new(vec![k, j]).unwrap()).unwrap();
            prop_assert!(l.is_finite());
        }
    }

    #[test]
    fn a_and_t_stay_linked(a in 0.01f64..0.99) {
        let e = DecayEnvelope::new(EnvelopeKind::Eigenfunction, 1).with_a(a).unwrap();
        prop_assert!((e.a().unwrap() - a).abs() < 1e-14);
    }
}
