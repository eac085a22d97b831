//! One runner per subcommand. Each takes its argument struct (shared by the
//! CLI and config files) and returns report rows plus optional plot series.

use anyhow::{bail, ensure, Context, Result};
use beurling_core::bargmann::{
    bargmann_handle, coeff_bridge, contour_taylor, duality_check, natural_radius_coefficients, polydisc_grid,
    product_estimate_check, EntireFunctionHandle, QuadratureBargmann,
};
use beurling_core::envelope::{decay_rate_fit, envelope_check, DecayEnvelope, DecayLaw, EnvelopeKind};
use beurling_core::function::{dilate, Polynomial};
use beurling_core::functional::{
    e_monomial_bound_abs, e_poly_quad, ka_eval_with, scaling_fit_e, scaling_fit_ka, weighted_bdj_with, BdjOptions,
    KaOptions, Status,
};
use beurling_core::heisenberg::{kaverage_identity_check, laguerre_growth_fit, poisson_semigroup};
use beurling_core::hermite::{
    mehler_kernel, mehler_partial_sum, multiindex_enumerate, orthonormality_defect, project,
};
use beurling_core::{HermiteExpansion, MultiIndex, TestFunction, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::function_spec::{FunctionKind, FunctionSpec};
use crate::report::{ReportRow, Verdict};

/// A named `(x, y)` series for external plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct XySeries {
    pub name: String,
    pub columns: (String, String),
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub rows: Vec<ReportRow>,
    pub notes: Vec<String>,
    pub xy: Vec<XySeries>,
}

impl Outcome {
    fn row(&mut self, id: &str, params: String, measured: f64, reference: f64, verdict: Verdict) {
        self.rows.push(ReportRow::new(id, params, measured, reference, verdict));
    }

    fn series(&mut self, name: String, columns: (&str, &str), points: Vec<(f64, f64)>) {
        self.xy.push(XySeries { name, columns: (columns.0.into(), columns.1.into()), points });
    }

    pub fn verdict(&self) -> Verdict {
        Verdict::combine(self.rows.iter().map(|r| r.verdict))
    }

    pub fn merge(&mut self, other: Outcome) {
        self.rows.extend(other.rows);
        self.notes.extend(other.notes);
        self.xy.extend(other.xy);
    }

    /// Renames every row's experiment id.
    pub fn with_id(mut self, id: &str) -> Self {
        for r in &mut self.rows {
            r.experiment_id = id.to_string();
        }
        for s in &mut self.xy {
            s.name = format!("{id}-{}", s.name);
        }
        self
    }
}

mod defaults {
    pub fn n() -> usize {
        1
    }
    pub fn a_single() -> Vec<f64> {
        vec![0.6]
    }
    pub fn a_pair() -> Vec<f64> {
        vec![0.3, 0.7]
    }
    pub fn half() -> f64 {
        0.5
    }
    pub fn grid() -> Vec<f64> {
        vec![0.9, 0.99, 0.999]
    }
    pub fn reltol() -> f64 {
        1e-8
    }
    pub fn fit_tol() -> f64 {
        0.05
    }
    pub fn two() -> f64 {
        2.0
    }
    pub fn three() -> f64 {
        3.0
    }
    pub fn one() -> f64 {
        1.0
    }
    pub fn bdj_reltol() -> f64 {
        1e-6
    }
    pub fn twelve() -> u32 {
        12
    }
    pub fn eight() -> u32 {
        8
    }
    pub fn sixteen() -> u32 {
        16
    }
    pub fn five() -> usize {
        5
    }
    pub fn thirty_two() -> usize {
        32
    }
    pub fn sixty_four() -> usize {
        64
    }
    pub fn tight() -> f64 {
        1e-10
    }
    pub fn loose() -> f64 {
        1e-8
    }
    pub fn deltas() -> Vec<f64> {
        vec![1.0 / 3.0, 3.0]
    }
    pub fn dilation_tol() -> f64 {
        1e-6
    }
    pub fn slope_tol() -> f64 {
        0.01
    }
    pub fn t_fit_tol() -> f64 {
        0.04
    }
    pub fn poisson_t() -> f64 {
        0.8
    }
    pub fn t_primes() -> Vec<f64> {
        vec![0.76]
    }
    pub fn kavg_tol() -> f64 {
        1e-4
    }
    pub fn k_min() -> u32 {
        20
    }
    pub fn k_max() -> u32 {
        60
    }
    pub fn mehler_k() -> u32 {
        40
    }
    pub fn ten() -> usize {
        10
    }
    pub fn product_tol() -> f64 {
        1e-9
    }
    pub fn seed() -> u64 {
        1
    }
    pub fn function() -> crate::function_spec::FunctionSpec {
        crate::function_spec::FunctionSpec::new(crate::function_spec::FunctionKind::Gaussian)
    }
}

fn fparams(f: &FunctionSpec, n: usize) -> String {
    format!("fn={};n={n}", f.label())
}

fn expansion_of(f: &FunctionSpec, n: usize) -> Result<HermiteExpansion> {
    f.expansion(n)?.with_context(|| format!("function kind {:?} has no finite Hermite expansion", f.kind))
}

/// Unconverged values are inconclusive whatever the comparison says.
fn judged(converged: bool, ok: bool) -> Verdict {
    if !converged {
        Verdict::Inconclusive
    } else {
        Verdict::from_bool(ok)
    }
}

/// `(2π/√(1−a²))(1 + (2/π) arcsin a)`, the Gaussian value in one dimension.
pub fn gaussian_ka_closed_form(a: f64) -> f64 {
    let pi = std::f64::consts::PI;
    2.0 * pi / (1.0 - a * a).sqrt() * (1.0 + 2.0 / pi * a.asin())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct KaEvalArgs {
    #[arg(long, default_value_t = 1)]
    #[serde(default = "defaults::n")]
    pub n: usize,
    #[command(flatten)]
    #[serde(default = "defaults::function")]
    pub function: FunctionSpec,
    #[arg(long, value_delimiter = ',', default_values_t = defaults::a_single())]
    #[serde(default = "defaults::a_single")]
    pub a: Vec<f64>,
    #[arg(long, default_value_t = defaults::reltol())]
    #[serde(default = "defaults::reltol")]
    pub reltol: f64,
    /// Panel halvings; the evaluator picks by dimension when absent.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_depth: Option<u32>,
}

pub fn ka_eval(args: &KaEvalArgs) -> Result<Outcome> {
    let f = args.function.build(args.n)?;
    let mut out = Outcome::default();
    let closed = args.function.kind == FunctionKind::Gaussian && args.n == 1;
    for &a in &args.a {
        let mut opts = KaOptions::new(args.reltol);
        opts.max_depth = args.max_depth;
        let r = ka_eval_with(&f, a, opts)?;
        let reference = if closed { gaussian_ka_closed_form(a) } else { f64::NAN };
        let ok = !closed || (r.value - reference).abs() <= 10.0 * args.reltol * reference;
        out.notes.push(format!("K_a = {} ± {:.3e} ({:?}) at a = {a}", r.value, r.abs_error, r.status));
        out.row("ka-eval", format!("{};a={a}", fparams(&args.function, args.n)), r.value, reference, judged(r.converged, ok));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct EPolyArgs {
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub m1: u32,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub m2: u32,
    #[arg(long, value_delimiter = ',', default_values_t = defaults::a_single())]
    #[serde(default = "defaults::a_single")]
    pub a: Vec<f64>,
    #[arg(long, default_value_t = defaults::reltol())]
    #[serde(default = "defaults::reltol")]
    pub reltol: f64,
}

/// `E(x^{m1}, x^{m2}, a)` against the monomial bound for the `|xy|` kernel.
pub fn e_poly(args: &EPolyArgs) -> Result<Outcome> {
    let r = Polynomial::monomial(MultiIndex::single(args.m1), C64::new(1.0, 0.0));
    let s = Polynomial::monomial(MultiIndex::single(args.m2), C64::new(1.0, 0.0));
    let mut out = Outcome::default();
    for &a in &args.a {
        let v = e_poly_quad(&r, &s, a, args.reltol)?;
        let bound = e_monomial_bound_abs(args.m1, args.m2, a)?;
        out.notes.push(format!("E = {} ± {:.3e}, bound {bound}", v.value, v.abs_error));
        out.row(
            "e-poly",
            format!("m1={};m2={};a={a}", args.m1, args.m2),
            v.value,
            bound,
            judged(v.converged, v.value <= bound * (1.0 + 1e-9)),
        );
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct ScalingArgs {
    #[arg(long, default_value_t = 1)]
    #[serde(default = "defaults::n")]
    pub n: usize,
    #[command(flatten)]
    #[serde(default = "defaults::function")]
    pub function: FunctionSpec,
    /// Degrees of `R` and `S`; when both are given `E(R,S,a)` is fitted
    /// instead of `K_a(f)`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m1: Option<u32>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m2: Option<u32>,
    #[arg(long, value_delimiter = ',', default_values_t = defaults::grid())]
    #[serde(default = "defaults::grid")]
    pub grid: Vec<f64>,
    #[arg(long, default_value_t = defaults::reltol())]
    #[serde(default = "defaults::reltol")]
    pub reltol: f64,
    /// Relative band around the predicted exponent.
    #[arg(long, default_value_t = defaults::fit_tol())]
    #[serde(default = "defaults::fit_tol")]
    pub tol: f64,
}

pub fn scaling_fit(args: &ScalingArgs) -> Result<Outcome> {
    let mut out = Outcome::default();
    let (fit, params, reference) = match (args.m1, args.m2) {
        (Some(m1), Some(m2)) => {
            let r = Polynomial::monomial(MultiIndex::single(m1), C64::new(1.0, 0.0));
            let s = Polynomial::monomial(MultiIndex::single(m2), C64::new(1.0, 0.0));
            let fit = scaling_fit_e(&r, &s, &args.grid, args.reltol)?;
            (fit, format!("m1={m1};m2={m2};n=1"), (1 + m1 + m2) as f64 / 2.0)
        }
        (None, None) => {
            let f = args.function.build(args.n)?;
            let fit = scaling_fit_ka(&f, &args.grid, args.reltol)?;
            let deg = match args.function.kind {
                FunctionKind::Gaussian => Some(0),
                FunctionKind::Monomial if args.n == 1 => Some(args.function.degree),
                FunctionKind::Hermite if args.n == 1 => Some(args.function.degree),
                _ => None,
            };
            let reference = deg.map_or(f64::NAN, |d| (args.n as f64 + 2.0 * d as f64) / 2.0);
            (fit, fparams(&args.function, args.n), reference)
        }
        _ => bail!("give both --m1 and --m2, or neither"),
    };
    let grid: Vec<String> = args.grid.iter().map(|a| a.to_string()).collect();
    let verdict = if reference.is_nan() {
        Verdict::Inconclusive
    } else {
        Verdict::from_bool((fit.exponent - reference).abs() <= args.tol * reference)
    };
    out.notes.push(format!("fitted exponent {} (predicted {reference}), residual {:.3e}", fit.exponent, fit.residual));
    out.row("scaling-fit", format!("{params};grid={}", grid.join("|")), fit.exponent, reference, verdict);
    out.series(format!("scaling-{params}"), ("-ln(1-a^2)", "ln_value"), fit.log_points());
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    Finite,
    Divergent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct BdjArgs {
    #[arg(long, default_value_t = 1)]
    #[serde(default = "defaults::n")]
    pub n: usize,
    #[command(flatten)]
    #[serde(default = "defaults::function")]
    pub function: FunctionSpec,
    /// Weight exponent `N` in `(1+|x|+|y|)^{-N}`.
    #[arg(long, default_value_t = defaults::two())]
    #[serde(default = "defaults::two")]
    pub power: f64,
    #[arg(long, default_value_t = defaults::bdj_reltol())]
    #[serde(default = "defaults::bdj_reltol")]
    pub reltol: f64,
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expectation>,
}

pub fn weighted_bdj(args: &BdjArgs) -> Result<Outcome> {
    let f = args.function.build(args.n)?;
    let (r, partial) = weighted_bdj_with(&f, args.power, BdjOptions { reltol: args.reltol, ..BdjOptions::default() })?;
    let finite = matches!(r.status, Status::Converged | Status::Finite);
    let decided = finite || r.status == Status::Divergent;
    let verdict = match (decided, args.expect) {
        (false, _) => Verdict::Inconclusive,
        (true, None) => Verdict::Pass,
        (true, Some(Expectation::Finite)) => Verdict::from_bool(finite),
        (true, Some(Expectation::Divergent)) => Verdict::from_bool(r.status == Status::Divergent),
    };
    let reference = match args.expect {
        Some(Expectation::Divergent) => f64::INFINITY,
        _ => f64::NAN,
    };
    let mut out = Outcome::default();
    let params = format!("{};N={}", fparams(&args.function, args.n), args.power);
    out.notes.push(format!("weighted functional: {} ({:?})", r.value, r.status));
    out.row("weighted-bdj", params.clone(), r.value, reference, verdict);
    out.series(format!("bdj-{params}"), ("R", "partial_sum"), partial);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct OrthoArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![1usize, 2])]
    #[serde(default = "ortho_dims")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 12)]
    #[serde(default = "defaults::twelve")]
    pub max_degree: u32,
    #[arg(long, default_value_t = defaults::tight())]
    #[serde(default = "defaults::tight")]
    pub tol: f64,
}

fn ortho_dims() -> Vec<usize> {
    vec![1, 2]
}

pub fn orthonormality(args: &OrthoArgs) -> Result<Outcome> {
    let mut out = Outcome::default();
    for &n in &args.dims {
        let m = args.max_degree as usize + 8;
        let d = orthonormality_defect(n, args.max_degree, m)?;
        out.row("orthonormality", format!("n={n};D={}", args.max_degree), d, 0.0, Verdict::from_bool(d < args.tol));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct MehlerArgs {
    #[arg(long, default_value_t = defaults::half())]
    #[serde(default = "defaults::half")]
    pub r: f64,
    #[arg(long, default_value_t = 40)]
    #[serde(default = "defaults::mehler_k")]
    pub k: u32,
    #[arg(long, default_value_t = 10)]
    #[serde(default = "defaults::ten")]
    pub points: usize,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "defaults::seed")]
    pub seed: u64,
    #[arg(long, default_value_t = defaults::tight())]
    #[serde(default = "defaults::tight")]
    pub tol: f64,
}

/// Closed form against the partial sum, and the tail ratio `T(K+2)/T(K)`
/// at the origin, which tends to `r²`.
pub fn mehler(args: &MehlerArgs) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..args.points {
        let x = [rng.random_range(-2.0..2.0)];
        let y = [rng.random_range(-2.0..2.0)];
        let d = mehler_kernel(args.r, &x, &y)? - mehler_partial_sum(args.r, &x, &y, args.k)?;
        worst = worst.max(d.abs());
    }
    let mut out = Outcome::default();
    out.row("mehler", format!("r={};K={};seed={}", args.r, args.k, args.seed), worst, 0.0, Verdict::from_bool(worst < args.tol));
    let kt = 30;
    let z = [0.0];
    let closed = mehler_kernel(args.r, &z, &z)?;
    let t1 = closed - mehler_partial_sum(args.r, &z, &z, kt)?;
    let t2 = closed - mehler_partial_sum(args.r, &z, &z, kt + 2)?;
    let ratio = t2 / t1;
    let r2 = args.r * args.r;
    out.row("mehler", format!("r={};tail-ratio;K={kt}", args.r), ratio, r2, Verdict::from_bool((ratio / r2 - 1.0).abs() <= 0.2));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct DilationArgs {
    #[arg(long, default_value_t = 1)]
    #[serde(default = "defaults::n")]
    pub n: usize,
    #[command(flatten)]
    #[serde(default = "defaults::function")]
    pub function: FunctionSpec,
    #[arg(long, default_value_t = defaults::half())]
    #[serde(default = "defaults::half")]
    pub a: f64,
    #[arg(long, value_delimiter = ',', default_values_t = defaults::deltas())]
    #[serde(default = "defaults::deltas")]
    pub deltas: Vec<f64>,
    #[arg(long, default_value_t = 1e-9)]
    #[serde(default = "dilation_reltol")]
    pub reltol: f64,
    #[arg(long, default_value_t = defaults::dilation_tol())]
    #[serde(default = "defaults::dilation_tol")]
    pub tol: f64,
}

fn dilation_reltol() -> f64 {
    1e-9
}

pub fn dilation(args: &DilationArgs) -> Result<Outcome> {
    let f = args.function.build(args.n)?;
    let base = ka_eval_with(&f, args.a, KaOptions::new(args.reltol))?;
    let mut out = Outcome::default();
    for &delta in &args.deltas {
        let d = ka_eval_with(&dilate(&f, delta)?, args.a, KaOptions::new(args.reltol))?;
        let ok = (d.value - base.value).abs() <= args.tol * base.value;
        out.row(
            "dilation",
            format!("{};a={};delta={delta:.6}", fparams(&args.function, args.n), args.a),
            d.value,
            base.value,
            judged(base.converged && d.converged, ok),
        );
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct HermiteCoeffArgs {
    #[arg(long, default_value_t = 1)]
    #[serde(default = "defaults::n")]
    pub n: usize,
    #[command(flatten)]
    #[serde(default = "defaults::function")]
    pub function: FunctionSpec,
    #[arg(long, default_value_t = 8)]
    #[serde(default = "defaults::eight")]
    pub max_degree: u32,
    /// Contour points per axis.
    #[arg(long, default_value_t = 32)]
    #[serde(default = "defaults::thirty_two")]
    pub m: usize,
    #[arg(long, default_value_t = defaults::one())]
    #[serde(default = "defaults::one")]
    pub radius: f64,
    #[arg(long, default_value_t = defaults::loose())]
    #[serde(default = "defaults::loose")]
    pub tol: f64,
}

/// Projection against the Bargmann → contour → bridge path.
pub fn hermite_coeffs(args: &HermiteCoeffArgs) -> Result<Outcome> {
    let n = args.n;
    let f = args.function.build(n)?;
    let proj = project(&|x: &[f64]| f.eval(x), n, args.max_degree, 16, 1e-13)?;
    let h = bargmann_handle(&f, args.radius)?;
    let t = contour_taylor(&h, &vec![args.radius; n], args.m, args.max_degree)?;
    let bridged = coeff_bridge(&t)?;
    let mut worst: f64 = 0.0;
    for a in multiindex_enumerate(n, args.max_degree) {
        worst = worst.max((proj.expansion.get(&a) - bridged.get(&a)).norm());
    }
    let mut out = Outcome::default();
    out.row(
        "hermite-coeffs",
        format!("{};D={};M={}", fparams(&args.function, n), args.max_degree, args.m),
        worst,
        0.0,
        judged(proj.converged && h.converged(), worst < args.tol),
    );
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct BargmannTaylorArgs {
    #[arg(long, default_value_t = 1)]
    #[serde(default = "defaults::n")]
    pub n: usize,
    #[command(flatten)]
    #[serde(default = "defaults::function")]
    pub function: FunctionSpec,
    #[arg(long, default_value_t = 16)]
    #[serde(default = "defaults::sixteen")]
    pub max_degree: u32,
    #[arg(long, default_value_t = 64)]
    #[serde(default = "defaults::sixty_four")]
    pub m: usize,
    #[arg(long, default_value_t = defaults::loose())]
    #[serde(default = "defaults::loose")]
    pub tol: f64,
}

fn bargmann_for_contours(f: &TestFunction, max_degree: u32) -> Result<EntireFunctionHandle> {
    let rho = (2.0 * max_degree as f64 + 1.0).sqrt();
    match f.to_expansion() {
        Some(_) => Ok(bargmann_handle(f, rho)?),
        None => Ok(EntireFunctionHandle::QuadratureBargmann(QuadratureBargmann::new(f, rho, 1e-12)?)),
    }
}

/// Hermite coefficients measured on contours at `r_j = (2α_j+1)^{1/2}`.
pub fn measured_coefficients(f: &TestFunction, max_degree: u32, m: usize) -> Result<(HermiteExpansion, bool)> {
    let h = bargmann_for_contours(f, max_degree)?;
    Ok((natural_radius_coefficients(&h, max_degree, m)?, h.converged()))
}

pub fn bargmann_taylor(args: &BargmannTaylorArgs) -> Result<Outcome> {
    let n = args.n;
    let f = args.function.build(n)?;
    let (measured, ok) = measured_coefficients(&f, args.max_degree, args.m)?;
    let reference = match f.to_expansion() {
        Some(e) => e,
        None => project(&|x: &[f64]| f.eval(x), n, args.max_degree, 32, 1e-13)?.expansion,
    };
    let mut out = Outcome::default();
    let mut pts = Vec::new();
    for a in multiindex_enumerate(n, args.max_degree) {
        let (mv, rv) = (measured.get(&a), reference.get(&a));
        let d = (mv - rv).norm();
        out.row(
            "bargmann-taylor",
            format!("{};alpha={a}", fparams(&args.function, n)),
            mv.norm(),
            rv.norm(),
            judged(ok, d <= args.tol),
        );
        if mv.norm() > 0.0 {
            pts.push((a.degree() as f64, mv.norm().ln()));
        }
    }
    out.series(format!("taylor-{}", fparams(&args.function, n)), ("degree", "ln_abs_coeff"), pts);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct DualityArgs {
    #[arg(long, default_value_t = 1)]
    #[serde(default = "defaults::n")]
    pub n: usize,
    #[command(flatten)]
    #[serde(default = "defaults::function")]
    pub function: FunctionSpec,
    #[arg(long, default_value_t = defaults::two())]
    #[serde(default = "defaults::two")]
    pub radius: f64,
    /// Radii and angles per axis.
    #[arg(long, default_value_t = 5)]
    #[serde(default = "defaults::five")]
    pub k: usize,
    #[arg(long, default_value_t = defaults::loose())]
    #[serde(default = "defaults::loose")]
    pub tol: f64,
}

pub fn duality(args: &DualityArgs) -> Result<Outcome> {
    let f = args.function.build(args.n)?;
    let dev = duality_check(&f, &polydisc_grid(args.n, args.radius, args.k))?;
    let mut out = Outcome::default();
    out.row(
        "duality-check",
        format!("{};radius={};k={}", fparams(&args.function, args.n), args.radius, args.k),
        dev,
        0.0,
        Verdict::from_bool(dev < args.tol),
    );
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct ProductArgs {
    #[arg(long, default_value_t = 1)]
    #[serde(default = "defaults::n")]
    pub n: usize,
    #[command(flatten)]
    #[serde(default = "defaults::function")]
    pub function: FunctionSpec,
    #[arg(long, value_delimiter = ',', default_values_t = defaults::a_pair())]
    #[serde(default = "defaults::a_pair")]
    pub a: Vec<f64>,
    #[arg(long, default_value_t = defaults::three())]
    #[serde(default = "defaults::three")]
    pub radius: f64,
    #[arg(long, default_value_t = 5)]
    #[serde(default = "defaults::five")]
    pub k: usize,
    #[arg(long, default_value_t = defaults::product_tol())]
    #[serde(default = "defaults::product_tol")]
    pub tol: f64,
}

pub fn product_bound(args: &ProductArgs) -> Result<Outcome> {
    let f = args.function.build(args.n)?;
    let grid = polydisc_grid(args.n, args.radius, args.k);
    let mut out = Outcome::default();
    for &a in &args.a {
        let r = product_estimate_check(&f, a, &grid, None)?;
        out.row(
            "product-bound",
            format!("{};a={a};radius={}", fparams(&args.function, args.n), args.radius),
            r.max_ratio,
            1.0,
            Verdict::from_bool(r.max_ratio <= 1.0 + args.tol),
        );
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum EnvelopeArg {
    Eigenfunction,
    ONFinite,
    ExpDecay,
    EntireVector,
    VemuriHardy,
    HardyPointwise,
}

impl From<EnvelopeArg> for EnvelopeKind {
    fn from(k: EnvelopeArg) -> Self {
        match k {
            EnvelopeArg::Eigenfunction => EnvelopeKind::Eigenfunction,
            EnvelopeArg::ONFinite => EnvelopeKind::OnFinite,
            EnvelopeArg::ExpDecay => EnvelopeKind::ExpDecay,
            EnvelopeArg::EntireVector => EnvelopeKind::EntireVector,
            EnvelopeArg::VemuriHardy => EnvelopeKind::VemuriHardy,
            EnvelopeArg::HardyPointwise => EnvelopeKind::HardyPointwise,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct EnvelopeArgs {
    #[arg(long, default_value_t = 1)]
    #[serde(default = "defaults::n")]
    pub n: usize,
    #[command(flatten)]
    #[serde(default = "defaults::function")]
    pub function: FunctionSpec,
    #[arg(long, value_enum)]
    pub kind: EnvelopeArg,
    /// Sets `t = artanh(a)/2`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    /// Measured at `a` when the envelope needs it and none is given.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ka: Option<f64>,
    #[arg(long, default_value_t = defaults::one())]
    #[serde(default = "defaults::one")]
    pub c: f64,
    /// Degree bound for contour-measured coefficients.
    #[arg(long, default_value_t = 16)]
    #[serde(default = "defaults::sixteen")]
    pub max_degree: u32,
    #[arg(long, default_value_t = 64)]
    #[serde(default = "defaults::sixty_four")]
    pub m: usize,
    #[arg(long, default_value_t = defaults::slope_tol())]
    #[serde(default = "defaults::slope_tol")]
    pub slope_tol: f64,
}

pub fn envelope(args: &EnvelopeArgs) -> Result<Outcome> {
    let n = args.n;
    let kind: EnvelopeKind = args.kind.into();
    let mut env = DecayEnvelope::new(kind, n).with_c(args.c)?;
    env = match (args.a, args.t) {
        (Some(a), Some(t)) => env.with_a_t(a, t)?,
        (Some(a), None) => env.with_a(a)?,
        (None, Some(t)) => env.with_t(t)?,
        (None, None) => bail!("give --a or --t"),
    };
    let f = args.function.build(n)?;
    let (coeffs, coeffs_ok) = match f.to_expansion() {
        Some(e) => (e, true),
        None => measured_coefficients(&f, args.max_degree, args.m)?,
    };
    let mut ka_ok = true;
    if matches!(kind, EnvelopeKind::Eigenfunction | EnvelopeKind::OnFinite) {
        let ka = match args.ka {
            Some(v) => v,
            None => {
                let a = env.a().context("K_a needs a")?;
                let r = ka_eval_with(&f, a, KaOptions::new(if n == 1 { 1e-6 } else { 1e-4 }))?;
                ka_ok = r.converged;
                r.value
            }
        };
        env = env.with_ka(ka)?;
    }
    let r = envelope_check(&coeffs, &env)?;
    let params = format!("{};envelope={};t={}", fparams(&args.function, n), kind.name(), env.t().unwrap_or(f64::NAN));
    let mut out = Outcome::default();
    out.notes.push(format!(
        "{} rows, max log-ratio {}, trend slope {} ({})",
        r.rows.len(),
        r.max_log_ratio,
        r.slope,
        if r.dominated_with(args.slope_tol) { "dominated" } else { "not dominated" }
    ));
    out.row("envelope-check", params.clone(), r.slope, 0.0, judged(coeffs_ok && ka_ok, r.dominated_with(args.slope_tol)));
    out.series(
        format!("envelope-{params}"),
        ("degree", "log_ratio"),
        r.rows.iter().map(|row| (row.alpha.degree() as f64, row.log_ratio)).collect(),
    );
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum LawArg {
    Sqrt,
    Geometric,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct DecayFitArgs {
    #[arg(long, default_value_t = 1)]
    #[serde(default = "defaults::n")]
    pub n: usize,
    #[command(flatten)]
    #[serde(default = "defaults::function")]
    pub function: FunctionSpec,
    #[arg(long, value_enum, default_value = "both")]
    #[serde(default = "law_both")]
    pub law: LawArg,
    /// Fit planted coefficients `e^{-t(2|α|+n)^{1/2}}` instead of a function.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planted_t: Option<f64>,
    #[arg(long, default_value_t = defaults::t_fit_tol())]
    #[serde(default = "defaults::t_fit_tol")]
    pub tol: f64,
}

fn law_both() -> LawArg {
    LawArg::Both
}

fn planted(n: usize, t: f64, max_degree: u32) -> Result<HermiteExpansion> {
    let pairs = multiindex_enumerate(n, max_degree).into_iter().map(|a| {
        let s = (2.0 * a.degree() as f64 + n as f64).sqrt();
        (a, C64::new((-t * s).exp(), 0.0))
    });
    Ok(HermiteExpansion::from_pairs(n, pairs)?.with_maxdeg(max_degree)?)
}

pub fn decay_fit(args: &DecayFitArgs) -> Result<Outcome> {
    let (coeffs, reference, label) = match args.planted_t {
        Some(t) => (planted(args.n, t, args.function.degree.max(12))?, t, format!("planted:t={t};n={}", args.n)),
        None => {
            let e = expansion_of(&args.function, args.n)?;
            let t = if args.function.semigroup_t > 0.0 { args.function.semigroup_t } else { f64::NAN };
            (e, t, fparams(&args.function, args.n))
        }
    };
    let mut out = Outcome::default();
    let laws: &[(DecayLaw, &str)] = match args.law {
        LawArg::Sqrt => &[(DecayLaw::SqrtExponential, "sqrt")],
        LawArg::Geometric => &[(DecayLaw::Geometric, "geometric")],
        LawArg::Both => &[(DecayLaw::SqrtExponential, "sqrt"), (DecayLaw::Geometric, "geometric")],
    };
    let mut residuals = Vec::new();
    for &(law, name) in laws {
        let fit = decay_rate_fit(&coeffs, law)?;
        let verdict = match (law, reference.is_nan()) {
            (DecayLaw::SqrtExponential, false) => Verdict::from_bool((fit.t - reference).abs() <= args.tol),
            _ => Verdict::Pass,
        };
        let shown_ref = if law == DecayLaw::SqrtExponential { reference } else { f64::NAN };
        out.notes.push(format!("{name} law: t = {}, residual {:.3e}", fit.t, fit.residual));
        out.row("decay-fit", format!("{label};law={name};quantity=t"), fit.t, shown_ref, verdict);
        out.row("decay-fit", format!("{label};law={name};quantity=residual"), fit.residual, 0.0, Verdict::Pass);
        out.series(format!("decay-{label}-{name}"), ("statistic", "-ln_abs_coeff"), fit.points.clone());
        residuals.push(fit.residual);
    }
    if let [sqrt, geo] = residuals[..] {
        let ratio = geo / sqrt.max(1e-15);
        out.row("decay-fit", format!("{label};quantity=geometric/sqrt-residual"), ratio, 10.0, Verdict::Pass);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct PoissonArgs {
    #[arg(long, default_value_t = 1)]
    #[serde(default = "defaults::n")]
    pub n: usize,
    #[command(flatten)]
    #[serde(default = "defaults::function")]
    pub function: FunctionSpec,
    #[arg(long, default_value_t = defaults::poisson_t())]
    #[serde(default = "defaults::poisson_t")]
    pub t: f64,
    /// Envelope rates to test, each below `t`.
    #[arg(long, value_delimiter = ',', default_values_t = defaults::t_primes())]
    #[serde(default = "defaults::t_primes")]
    pub t_prime: Vec<f64>,
    /// Also require `K_a` of the image to converge at this `a`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ka_a: Option<f64>,
}

/// Semigroup image checked against the entire-vector envelope, and against
/// a geometric fit that should be much worse than the square-root one.
pub fn poisson(args: &PoissonArgs) -> Result<Outcome> {
    let g = expansion_of(&args.function, args.n)?;
    let f = poisson_semigroup(&g, args.t)?;
    let half = poisson_semigroup(&poisson_semigroup(&g, 0.5 * args.t)?, 0.5 * args.t)?;
    let law_dev = f.iter().map(|(a, c)| (half.get(a) - c).norm() / c.norm()).fold(0.0, f64::max);
    let base = format!("{};t={}", fparams(&args.function, args.n), args.t);
    let mut out = Outcome::default();
    out.row("poisson", format!("{base};quantity=semigroup-law"), law_dev, 0.0, Verdict::from_bool(law_dev < 1e-13));
    for &tp in &args.t_prime {
        ensure!(tp < args.t, "envelope rate {tp} must be below t = {}", args.t);
        let env = DecayEnvelope::new(EnvelopeKind::EntireVector, args.n).with_t(tp)?;
        let r = envelope_check(&f, &env)?;
        out.row("poisson", format!("{base};quantity=entire-envelope-slope;t'={tp}"), r.slope, 0.0, Verdict::from_bool(r.dominated()));
    }
    let s = decay_rate_fit(&f, DecayLaw::SqrtExponential)?;
    let q = decay_rate_fit(&f, DecayLaw::Geometric)?;
    let ratio = q.residual / s.residual.max(1e-15);
    out.notes.push(format!("residuals: sqrt {:.3e}, geometric {:.3e}", s.residual, q.residual));
    out.row("poisson", format!("{base};quantity=geometric/sqrt-residual"), ratio, 10.0, Verdict::from_bool(ratio > 10.0));
    if let Some(a) = args.ka_a {
        let r = ka_eval_with(&f.into(), a, KaOptions::new(1e-8))?;
        out.row("poisson", format!("{base};quantity=ka;a={a}"), r.value, f64::NAN, judged(r.converged, r.value.is_finite()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct KAverageArgs {
    #[command(flatten)]
    #[serde(default = "defaults::function")]
    pub function: FunctionSpec,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.3])]
    #[serde(default = "kavg_y")]
    pub y: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.0])]
    #[serde(default = "kavg_v")]
    pub v: Vec<f64>,
    #[arg(long, default_value_t = 64)]
    #[serde(default = "defaults::sixty_four")]
    pub m: usize,
    #[arg(long, default_value_t = defaults::kavg_tol())]
    #[serde(default = "defaults::kavg_tol")]
    pub tol: f64,
}

fn kavg_y() -> Vec<f64> {
    vec![0.3]
}

fn kavg_v() -> Vec<f64> {
    vec![0.0]
}

pub fn kaverage(args: &KAverageArgs) -> Result<Outcome> {
    ensure!(args.y.len() == args.v.len(), "--y and --v need the same length");
    let e = expansion_of(&args.function, 1)?;
    let mut out = Outcome::default();
    for (&y, &v) in args.y.iter().zip(&args.v) {
        let r = kaverage_identity_check(&e, y, v, args.m)?;
        out.row(
            "kaverage-check",
            format!("{};y={y};v={v};M={}", fparams(&args.function, 1), args.m),
            r.lhs,
            r.rhs,
            judged(r.converged, r.rel_dev < args.tol),
        );
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct LaguerreArgs {
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub nu: u32,
    #[arg(long, default_value_t = defaults::one())]
    #[serde(default = "defaults::one")]
    pub rho: f64,
    #[arg(long, default_value_t = 20)]
    #[serde(default = "defaults::k_min")]
    pub k_min: u32,
    #[arg(long, default_value_t = 60)]
    #[serde(default = "defaults::k_max")]
    pub k_max: u32,
}

pub fn laguerre_growth(args: &LaguerreArgs) -> Result<Outcome> {
    let ks: Vec<u32> = (args.k_min..=args.k_max).collect();
    let fit = laguerre_growth_fit(args.nu, args.rho, &ks)?;
    let mut out = Outcome::default();
    let params = format!("nu={};rho={};k={}..{}", args.nu, args.rho, args.k_min, args.k_max);
    out.row("laguerre-growth", params.clone(), fit.slope, 1.0, Verdict::from_bool((fit.slope - 1.0).abs() <= 0.1));
    out.series(format!("laguerre-{params}"), ("2sqrt(2k+n)rho", "ln_phi"), fit.points);
    Ok(out)
}

/// Runs independent jobs on the current pool, keeping input order.
pub fn run_parallel<T: Sync>(items: &[T], job: impl Fn(&T) -> Result<Outcome> + Sync + Send) -> Result<Outcome> {
    let parts: Vec<Result<Outcome>> = items.par_iter().map(job).collect();
    let mut out = Outcome::default();
    for p in parts {
        out.merge(p?);
    }
    Ok(out)
}
