//! TOML experiment files. Every field of a run is recorded, so a config
//! written by `--save-config` replays the same run.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use crate::experiments::{self as ex, Outcome};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, clap::Subcommand)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Experiment {
    /// `K_a(f)` for a list of `a`.
    KaEval(ex::KaEvalArgs),
    /// `E(x^{m1}, x^{m2}, a)` against the monomial bound.
    EPoly(ex::EPolyArgs),
    /// Exponent of the `(1−a²)^{-N}` blow-up near `a = 1`.
    ScalingFit(ex::ScalingArgs),
    /// Finite or divergent verdict for the weighted functional.
    WeightedBdj(ex::BdjArgs),
    /// Gram-matrix defect of the Hermite functions.
    Orthonormality(ex::OrthoArgs),
    /// Mehler closed form against its partial sums.
    Mehler(ex::MehlerArgs),
    /// `K_a` before and after `L²`-normalized dilations.
    Dilation(ex::DilationArgs),
    /// Projection against contour-extracted coefficients.
    HermiteCoeffs(ex::HermiteCoeffArgs),
    /// Coefficients from contours at the natural radii.
    BargmannTaylor(ex::BargmannTaylorArgs),
    /// `Bf(−iz) = Bf̂(z)` on a polydisc grid.
    DualityCheck(ex::DualityArgs),
    /// `|Bf Bf̂|` against its Gaussian-weighted bound.
    ProductBound(ex::ProductArgs),
    /// Coefficient moduli against a decay envelope.
    EnvelopeCheck(ex::EnvelopeArgs),
    /// Fitted decay rate of the coefficient moduli.
    DecayFit(ex::DecayFitArgs),
    /// Hermite–Poisson semigroup image against the entire-vector envelope.
    Poisson(ex::PoissonArgs),
    /// Circle-average norm identity in one dimension.
    KaverageCheck(ex::KAverageArgs),
    /// Growth of Laguerre functions at imaginary argument.
    LaguerreGrowth(ex::LaguerreArgs),
}

impl Experiment {
    pub fn run(&self) -> Result<Outcome> {
        match self {
            Experiment::KaEval(a) => ex::ka_eval(a),
            Experiment::EPoly(a) => ex::e_poly(a),
            Experiment::ScalingFit(a) => ex::scaling_fit(a),
            Experiment::WeightedBdj(a) => ex::weighted_bdj(a),
            Experiment::Orthonormality(a) => ex::orthonormality(a),
            Experiment::Mehler(a) => ex::mehler(a),
            Experiment::Dilation(a) => ex::dilation(a),
            Experiment::HermiteCoeffs(a) => ex::hermite_coeffs(a),
            Experiment::BargmannTaylor(a) => ex::bargmann_taylor(a),
            Experiment::DualityCheck(a) => ex::duality(a),
            Experiment::ProductBound(a) => ex::product_bound(a),
            Experiment::EnvelopeCheck(a) => ex::envelope(a),
            Experiment::DecayFit(a) => ex::decay_fit(a),
            Experiment::Poisson(a) => ex::poisson(a),
            Experiment::KaverageCheck(a) => ex::kaverage(a),
            Experiment::LaguerreGrowth(a) => ex::laguerre_growth(a),
        }
    }

    /// The subcommand name, which is also the config `command` tag.
    pub fn name(&self) -> String {
        serde_json::to_value(self)
            .ok()
            .and_then(|v| v.get("command")?.as_str().map(str::to_string))
            .unwrap_or_default()
    }

    pub fn validate(&self) -> Result<()> {
        let f = match self {
            Experiment::KaEval(a) => &a.function,
            Experiment::ScalingFit(a) => &a.function,
            Experiment::WeightedBdj(a) => &a.function,
            Experiment::Dilation(a) => &a.function,
            Experiment::HermiteCoeffs(a) => &a.function,
            Experiment::BargmannTaylor(a) => &a.function,
            Experiment::DualityCheck(a) => &a.function,
            Experiment::ProductBound(a) => &a.function,
            Experiment::EnvelopeCheck(a) => &a.function,
            Experiment::DecayFit(a) => &a.function,
            Experiment::Poisson(a) => &a.function,
            Experiment::KaverageCheck(a) => &a.function,
            _ => return Ok(()),
        };
        f.validate()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xy_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub id: String,
    #[serde(default)]
    pub output: OutputPaths,
    pub experiment: Experiment,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let c: Self = toml::from_str(text).context("invalid experiment config")?;
        c.experiment.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn run(&self) -> Result<Outcome> {
        Ok(self.experiment.run()?.with_id(&self.id))
    }
}
