//! The acceptance criteria as fixed experiment lists.

use std::time::{Duration, Instant};

use anyhow::{bail, Result};

use crate::config::Experiment;
use crate::experiments::{self as ex, run_parallel, EnvelopeArg, Expectation, LawArg, Outcome};
use crate::function_spec::{FunctionKind, FunctionSpec};
use crate::report::{sort_rows, ReportRow};

pub struct Criterion {
    pub number: u32,
    pub id: &'static str,
    pub title: &'static str,
    pub limit: Duration,
    pub jobs: fn() -> Vec<Experiment>,
}

impl Criterion {
    pub fn run(&self) -> Result<Outcome> {
        let jobs = (self.jobs)();
        for j in &jobs {
            j.validate()?;
        }
        Ok(run_parallel(&jobs, |j| j.run())?.with_id(self.id))
    }
}

/// Outcome of one criterion with its wall time.
pub struct Timed {
    pub outcome: Outcome,
    pub elapsed: Duration,
}

pub fn run_timed(c: &Criterion) -> Result<Timed> {
    let start = Instant::now();
    let outcome = c.run()?;
    Ok(Timed { outcome, elapsed: start.elapsed() })
}

fn func(kind: FunctionKind, degree: u32, seed: Option<u64>) -> FunctionSpec {
    let mut f = FunctionSpec::new(kind);
    f.degree = degree;
    f.seed = seed;
    f
}

fn c01() -> Vec<Experiment> {
    vec![Experiment::Orthonormality(ex::OrthoArgs { dims: vec![1, 2], max_degree: 12, tol: 1e-10 })]
}

fn c02() -> Vec<Experiment> {
    vec![Experiment::Mehler(ex::MehlerArgs { r: 0.5, k: 40, points: 10, seed: 2, tol: 1e-10 })]
}

fn c03() -> Vec<Experiment> {
    vec![Experiment::KaEval(ex::KaEvalArgs {
        n: 1,
        function: func(FunctionKind::Gaussian, 0, None),
        a: (1..=9).map(|k| k as f64 / 10.0).collect(),
        reltol: 1e-7,
        max_depth: None,
    })]
}

fn c04() -> Vec<Experiment> {
    [(0, 0), (1, 1), (2, 1)]
        .into_iter()
        .map(|(m1, m2)| {
            Experiment::ScalingFit(ex::ScalingArgs {
                n: 1,
                function: func(FunctionKind::Gaussian, 0, None),
                m1: Some(m1),
                m2: Some(m2),
                grid: vec![0.9, 0.99, 0.999],
                reltol: 1e-8,
                tol: 0.05,
            })
        })
        .collect()
}

fn c05() -> Vec<Experiment> {
    vec![Experiment::Dilation(ex::DilationArgs {
        n: 1,
        function: func(FunctionKind::Random, 4, Some(17)),
        a: 0.5,
        deltas: vec![1.0 / 3.0, 3.0],
        reltol: 1e-9,
        tol: 1e-6,
    })]
}

fn c06() -> Vec<Experiment> {
    (1..=5)
        .map(|seed| {
            Experiment::DualityCheck(ex::DualityArgs {
                n: 1,
                function: func(FunctionKind::Random, 8, Some(seed)),
                radius: 2.0,
                k: 5,
                tol: 1e-8,
            })
        })
        .collect()
}

fn c07() -> Vec<Experiment> {
    [1, 2]
        .into_iter()
        .map(|n| {
            Experiment::HermiteCoeffs(ex::HermiteCoeffArgs {
                n,
                function: func(FunctionKind::Random, 8, Some(11)),
                max_degree: 8,
                m: 32,
                radius: 1.0,
                tol: 1e-8,
            })
        })
        .collect()
}

fn c08() -> Vec<Experiment> {
    let mut eigen = func(FunctionKind::Eigen, 8, Some(3));
    eigen.k0 = 1;
    [func(FunctionKind::Hermite, 0, None), eigen]
        .into_iter()
        .map(|function| {
            Experiment::ProductBound(ex::ProductArgs {
                n: 1,
                function,
                a: vec![0.3, 0.7],
                radius: 3.0,
                k: 5,
                tol: 1e-9,
            })
        })
        .collect()
}

fn c09() -> Vec<Experiment> {
    let mut jobs = Vec::new();
    for n in [1, 2] {
        for seed in 0..5u64 {
            let mut function = func(FunctionKind::Eigen, 12, Some(seed));
            function.k0 = (seed % 4) as u32;
            jobs.push(Experiment::EnvelopeCheck(ex::EnvelopeArgs {
                n,
                function,
                kind: EnvelopeArg::Eigenfunction,
                a: Some(0.5),
                t: None,
                ka: None,
                c: 1.0,
                max_degree: 12,
                m: 64,
                slope_tol: 0.01,
            }));
        }
    }
    jobs
}

fn c10() -> Vec<Experiment> {
    let mut translated = func(FunctionKind::Translated, 0, None);
    translated.shift = 1.0;
    let mut jobs = Vec::new();
    for function in [func(FunctionKind::Gaussian, 0, None), translated] {
        for t in [0.5, 1.0] {
            jobs.push(Experiment::EnvelopeCheck(ex::EnvelopeArgs {
                n: 1,
                function: function.clone(),
                kind: EnvelopeArg::ExpDecay,
                a: None,
                t: Some(t),
                ka: None,
                c: 1.0,
                max_degree: 16,
                m: 64,
                slope_tol: 0.01,
            }));
        }
    }
    jobs
}

fn random_phase_40() -> FunctionSpec {
    func(FunctionKind::RandomPhase, 40, Some(5))
}

fn c11() -> Vec<Experiment> {
    vec![Experiment::Poisson(ex::PoissonArgs {
        n: 1,
        function: random_phase_40(),
        t: 0.8,
        t_prime: vec![0.76],
        ka_a: None,
    })]
}

fn c12() -> Vec<Experiment> {
    let mut semigroup = random_phase_40();
    semigroup.semigroup_t = 0.8;
    vec![
        Experiment::DecayFit(ex::DecayFitArgs {
            n: 1,
            function: func(FunctionKind::Gaussian, 12, None),
            law: LawArg::Sqrt,
            planted_t: Some(2.0),
            tol: 1e-9,
        }),
        Experiment::DecayFit(ex::DecayFitArgs {
            n: 1,
            function: semigroup,
            law: LawArg::Sqrt,
            planted_t: None,
            tol: 0.04,
        }),
    ]
}

fn c13() -> Vec<Experiment> {
    [func(FunctionKind::Hermite, 0, None), func(FunctionKind::Hermite, 1, None), func(FunctionKind::Random, 4, Some(13))]
        .into_iter()
        .map(|function| {
            Experiment::KaverageCheck(ex::KAverageArgs {
                function,
                y: vec![0.0, 0.3, 0.2, 0.35],
                v: vec![0.0, 0.0, -0.4, 0.35],
                m: 64,
                tol: 1e-4,
            })
        })
        .collect()
}

fn c14() -> Vec<Experiment> {
    vec![Experiment::LaguerreGrowth(ex::LaguerreArgs { nu: 0, rho: 1.0, k_min: 20, k_max: 60 })]
}

fn c15() -> Vec<Experiment> {
    let mut chirp = func(FunctionKind::Chirp, 0, None);
    chirp.chirp = 1.0;
    [(func(FunctionKind::Gaussian, 0, None), 2.0, Expectation::Finite), (func(FunctionKind::Gaussian, 0, None), 0.0, Expectation::Divergent), (chirp, 10.0, Expectation::Divergent)]
        .into_iter()
        .map(|(function, power, expect)| {
            Experiment::WeightedBdj(ex::BdjArgs { n: 1, function, power, reltol: 1e-6, expect: Some(expect) })
        })
        .collect()
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

/// Criteria 1–15; determinism (16) compares two `run-all` reports.
pub const CRITERIA: &[Criterion] = &[
    Criterion { number: 1, id: "c01-orthonormality", title: "Hermite orthonormality", limit: secs(2), jobs: c01 },
    Criterion { number: 2, id: "c02-mehler", title: "Mehler identity and tail ratio", limit: secs(1), jobs: c02 },
    Criterion { number: 3, id: "c03-ka-closed-form", title: "Gaussian K_a closed form", limit: secs(30), jobs: c03 },
    Criterion { number: 4, id: "c04-scaling", title: "E(R,S,a) scaling exponents", limit: secs(300), jobs: c04 },
    Criterion { number: 5, id: "c05-dilation", title: "dilation invariance", limit: secs(60), jobs: c05 },
    Criterion { number: 6, id: "c06-duality", title: "Bargmann duality", limit: secs(10), jobs: c06 },
    Criterion { number: 7, id: "c07-coefficient-paths", title: "projection vs contour coefficients", limit: secs(30), jobs: c07 },
    Criterion { number: 8, id: "c08-product", title: "Bargmann product estimate", limit: secs(120), jobs: c08 },
    Criterion { number: 9, id: "c09-eigen-envelope", title: "eigenfunction envelope", limit: secs(300), jobs: c09 },
    Criterion { number: 10, id: "c10-decay-envelope", title: "exponential-decay envelope", limit: secs(60), jobs: c10 },
    Criterion { number: 11, id: "c11-entire-vector", title: "entire-vector criterion", limit: secs(60), jobs: c11 },
    Criterion { number: 12, id: "c12-decay-fit", title: "decay-rate recovery", limit: secs(10), jobs: c12 },
    Criterion { number: 13, id: "c13-kaverage", title: "K-average identity", limit: secs(120), jobs: c13 },
    Criterion { number: 14, id: "c14-laguerre", title: "Laguerre growth", limit: secs(5), jobs: c14 },
    Criterion { number: 15, id: "c15-weighted", title: "weighted functional verdicts", limit: secs(120), jobs: c15 },
];

/// Looks up by number (`9`, `c09`) or full id.
pub fn find(key: &str) -> Result<&'static Criterion> {
    let k = key.trim_start_matches('c');
    if let Ok(num) = k.parse::<u32>() {
        if let Some(c) = CRITERIA.iter().find(|c| c.number == num) {
            return Ok(c);
        }
    }
    match CRITERIA.iter().find(|c| c.id == key) {
        Some(c) => Ok(c),
        None => bail!("unknown criterion {key:?}"),
    }
}

/// Runs the selected criteria one after another and returns sorted rows.
pub fn run_all(selected: &[&Criterion]) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for c in selected {
        rows.extend(c.run()?.rows);
    }
    sort_rows(&mut rows);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_jobs_validate() {
        for (i, c) in CRITERIA.iter().enumerate() {
            assert_eq!(c.number as usize, i + 1);
            assert!(c.id.starts_with(&format!("c{:02}-", c.number)));
            for j in (c.jobs)() {
                j.validate().unwrap();
            }
        }
        assert_eq!(find("9").unwrap().number, 9);
        assert_eq!(find("c09").unwrap().number, 9);
        assert_eq!(find("c14-laguerre").unwrap().number, 14);
        assert!(find("c99").is_err());
    }

    #[test]
    fn fast_criteria_pass() {
        for key in ["1", "2", "12", "14"] {
            let o = find(key).unwrap().run().unwrap();
            assert!(!o.rows.is_empty());
            for r in &o.rows {
                assert_eq!(r.verdict, crate::report::Verdict::Pass, "{r:?}");
            }
        }
    }
}
