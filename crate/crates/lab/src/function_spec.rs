//! Named test functions shared by the CLI and config files.

use anyhow::{bail, Result};
use beurling_core::function::{make_ft_eigenfunction, random_expansion, random_phase_expansion, Polynomial};
use beurling_core::heisenberg::{poisson_semigroup, schrodinger_apply, GroupElement};
use beurling_core::linalg::Matrix;
use beurling_core::{HermiteExpansion, MultiIndex, PolyGaussian, TestFunction};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionKind {
    /// `e^{-|x|²/2}`.
    Gaussian,
    /// A single Hermite function `Φ_k` along every axis.
    Hermite,
    /// Unit-norm complex-normal coefficients up to the degree.
    Random,
    /// Unit-modulus coefficients with random phases.
    RandomPhase,
    /// Fourier eigenfunction in class `k0`.
    Eigen,
    /// `e^{-(1+ib)|x|²/2}`.
    Chirp,
    /// `x^{m}` times the Gaussian.
    Monomial,
    /// `e^{-|x-s|²/2}` with `s = (shift, 0, …)`.
    Translated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    #[arg(id = "fn", long = "fn", value_enum, default_value = "gaussian")]
    pub kind: FunctionKind,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub degree: u32,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Fourier eigen-class for `eigen`.
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub k0: u32,
    /// Chirp strength `b` for `chirp`.
    #[arg(long, default_value_t = 0.0)]
    #[serde(default)]
    pub chirp: f64,
    /// Hermite–Poisson time applied to expansions.
    #[arg(long, default_value_t = 0.0)]
    #[serde(default)]
    pub semigroup_t: f64,
    /// Translation for `translated`.
    #[arg(long, default_value_t = 0.0)]
    #[serde(default)]
    pub shift: f64,
}

impl FunctionSpec {
    pub fn new(kind: FunctionKind) -> Self {
        Self { kind, degree: 0, seed: None, k0: 0, chirp: 0.0, semigroup_t: 0.0, shift: 0.0 }
    }

    pub fn is_random(&self) -> bool {
        matches!(self.kind, FunctionKind::Random | FunctionKind::RandomPhase | FunctionKind::Eigen)
    }

    pub fn validate(&self) -> Result<()> {
        if self.is_random() && self.seed.is_none() {
            bail!("function kind {:?} needs a seed", self.kind);
        }
        if self.kind == FunctionKind::Chirp && self.chirp == 0.0 {
            bail!("chirp needs a nonzero `chirp` strength");
        }
        if self.semigroup_t < 0.0 {
            bail!("semigroup_t must be nonnegative");
        }
        Ok(())
    }

    /// Hermite coefficients when the kind has them.
    pub fn expansion(&self, n: usize) -> Result<Option<HermiteExpansion>> {
        self.validate()?;
        let seed = self.seed.unwrap_or(0);
        let e = match self.kind {
            FunctionKind::Hermite => HermiteExpansion::basis(MultiIndex::new(vec![self.degree; n])?),
            FunctionKind::Random => random_expansion(n, self.degree, seed)?,
            FunctionKind::RandomPhase => random_phase_expansion(n, self.degree, seed)?,
            FunctionKind::Eigen => make_ft_eigenfunction(n, self.degree.max(self.k0), self.k0, seed)?,
            _ => return Ok(None),
        };
        Ok(Some(if self.semigroup_t > 0.0 { poisson_semigroup(&e, self.semigroup_t)? } else { e }))
    }

    pub fn build(&self, n: usize) -> Result<TestFunction> {
        if n == 0 {
            bail!("dimension must be at least 1");
        }
        if let Some(e) = self.expansion(n)? {
            return Ok(e.into());
        }
        Ok(match self.kind {
            FunctionKind::Gaussian => PolyGaussian::gaussian(n).into(),
            FunctionKind::Chirp => PolyGaussian::new(
                Polynomial::one(n),
                Matrix::identity(n).scaled(0.5),
                Some(Matrix::identity(n).scaled(0.5 * self.chirp)),
            )?
            .into(),
            FunctionKind::Monomial => {
                if n != 1 {
                    bail!("monomial test functions are one-dimensional");
                }
                PolyGaussian::standard(Polynomial::monomial(MultiIndex::single(self.degree), 1.0.into())).into()
            }
            FunctionKind::Translated => {
                let mut u = vec![0.0; n];
                u[0] = -self.shift;
                let g = GroupElement::real(vec![0.0; n], u)?;
                schrodinger_apply(&PolyGaussian::gaussian(n).into(), &g)?
            }
            _ => unreachable!("expansion kinds handled above"),
        })
    }

    /// Short `key=value` description for report rows.
    pub fn label(&self) -> String {
        let kind = serde_json::to_value(self.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        let mut s = kind;
        match self.kind {
            FunctionKind::Gaussian => {}
            FunctionKind::Chirp => s += &format!(":b={}", self.chirp),
            FunctionKind::Translated => s += &format!(":s={}", self.shift),
            _ => s += &format!(":D={}", self.degree),
        }
        if let Some(seed) = self.seed {
            s += &format!(":seed={seed}");
        }
        if self.kind == FunctionKind::Eigen {
            s += &format!(":k0={}", self.k0);
        }
        if self.semigroup_t > 0.0 {
            s += &format!(":t={}", self.semigroup_t);
        }
        s
    }
}
