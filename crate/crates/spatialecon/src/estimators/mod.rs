//! Regression models for spatially dependent data.
//!
//! OLS and SLX are least-squares fits; SAR, SEM, SDM, and SDEM maximize a
//! concentrated Gaussian log-likelihood in the spatial parameter. All fits
//! share one result type carrying coefficients, covariance, log-likelihood,
//! and residuals.

mod least_squares;
mod likelihood;

pub use least_squares::{fit_ols, fit_slx};
pub use likelihood::{fit_sar, fit_sdem, fit_sdm, fit_sem, log_det, FitOptions};

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::linalg::chi_sq_sf;
use crate::weights::SpatialWeights;

/// The model family member being estimated. The kind determines which of
/// (rho, lambda, theta) are present: SAR has rho, SEM has lambda, SLX has
/// theta, SDM has rho and theta, SDEM has lambda and theta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Ols,
    Slx,
    Sar,
    Sem,
    Sdm,
    Sdem,
}

impl ModelKind {
    pub const ALL: [ModelKind; 6] = [
        ModelKind::Ols,
        ModelKind::Slx,
        ModelKind::Sar,
        ModelKind::Sem,
        ModelKind::Sdm,
        ModelKind::Sdem,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Ols => "ols",
            ModelKind::Slx => "slx",
            ModelKind::Sar => "sar",
            ModelKind::Sem => "sem",
            ModelKind::Sdm => "sdm",
            ModelKind::Sdem => "sdem",
        }
    }

    pub fn has_rho(&self) -> bool {
        matches!(self, ModelKind::Sar | ModelKind::Sdm)
    }

    pub fn has_lambda(&self) -> bool {
        matches!(self, ModelKind::Sem | ModelKind::Sdem)
    }

    pub fn has_theta(&self) -> bool {
        matches!(self, ModelKind::Slx | ModelKind::Sdm | ModelKind::Sdem)
    }

    /// Global-spillover models propagate effects through the multiplier;
    /// local ones stop at the neighbours named in W.
    pub fn is_global(&self) -> bool {
        self.has_rho()
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ols" => Ok(ModelKind::Ols),
            "slx" => Ok(ModelKind::Slx),
            "sar" => Ok(ModelKind::Sar),
            "sem" => Ok(ModelKind::Sem),
            "sdm" => Ok(ModelKind::Sdm),
            "sdem" => Ok(ModelKind::Sdem),
            other => Err(Error::ConfigError(format!("unknown model '{other}'"))),
        }
    }
}

/// A model request: which family member, and which covariate columns enter
/// the spatially lagged block (None lags every covariate).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    #[serde(default)]
    pub lagged_covariates: Option<Vec<usize>>,
}

impl ModelSpec {
    pub fn new(kind: ModelKind) -> ModelSpec {
        ModelSpec {
            kind,
            lagged_covariates: None,
        }
    }
}

/// Estimates for one fitted model.
///
/// `vcov` is ordered as `param_names`: intercept, covariates, lagged
/// covariates, the spatial parameter when present, then sigma2.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitResult {
    pub model: ModelKind,
    pub n: usize,
    pub k: usize,
    pub covariate_names: Vec<String>,
    pub theta_names: Vec<String>,
    pub alpha: f64,
    pub beta: Vec<f64>,
    pub theta: Vec<f64>,
    pub rho: Option<f64>,
    pub lambda: Option<f64>,
    pub sigma2: f64,
    pub loglik: f64,
    pub aic: f64,
    pub param_names: Vec<String>,
    pub vcov: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub warnings: Vec<String>,
}

impl FitResult {
    /// Number of estimated parameters, counting sigma2.
    pub fn n_params(&self) -> usize {
        1 + self.beta.len()
            + self.theta.len()
            + usize::from(self.rho.is_some() || self.lambda.is_some())
            + 1
    }

    /// All estimates in `param_names` order.
    pub fn params(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.n_params());
        v.push(self.alpha);
        v.extend_from_slice(&self.beta);
        v.extend_from_slice(&self.theta);
        if let Some(r) = self.rho {
            v.push(r);
        }
        if let Some(l) = self.lambda {
            v.push(l);
        }
        v.push(self.sigma2);
        v
    }

    /// Standard errors from the diagonal of the covariance matrix.
    pub fn std_errors(&self) -> Vec<f64> {
        (0..self.vcov.len())
            .map(|i| {
                let v = self.vcov[i][i];
                if v >= 0.0 {
                    v.sqrt()
                } else {
                    f64::NAN
                }
            })
            .collect()
    }

    pub fn std_error_of(&self, name: &str) -> Option<f64> {
        let i = self.param_names.iter().position(|p| p == name)?;
        Some(self.std_errors()[i])
    }

    pub fn is_ols(&self) -> bool {
        self.model == ModelKind::Ols
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<FitResult> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Likelihood-ratio comparison of two nested fits.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LrTestResult {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    pub restricted_model: ModelKind,
    pub unrestricted_model: ModelKind,
}

fn nested_in(restricted: ModelKind, unrestricted: ModelKind) -> bool {
    use ModelKind::*;
    restricted == unrestricted
        || matches!(
            (restricted, unrestricted),
            (Ols, _) | (Slx, Sdm) | (Slx, Sdem) | (Sar, Sdm) | (Sem, Sdem)
        )
}

/// Likelihood-ratio test: statistic 2(l_u - l_r) against chi-square with
/// df equal to the parameter-count difference.
pub fn lr_test(restricted: &FitResult, unrestricted: &FitResult) -> Result<LrTestResult> {
    if !nested_in(restricted.model, unrestricted.model) {
        return Err(Error::NotNested(
            restricted.model.to_string(),
            unrestricted.model.to_string(),
        ));
    }
    if restricted.n != unrestricted.n || restricted.k != unrestricted.k {
        return Err(Error::NotNested(
            format!("n={}, k={}", restricted.n, restricted.k),
            format!("n={}, k={}", unrestricted.n, unrestricted.k),
        ));
    }
    let df = unrestricted.n_params().saturating_sub(restricted.n_params());
    let statistic = 2.0 * (unrestricted.loglik - restricted.loglik);
    let p_value = if df == 0 {
        1.0
    } else {
        chi_sq_sf(statistic, df as f64)
    };
    Ok(LrTestResult {
        statistic,
        df,
        p_value,
        restricted_model: restricted.model,
        unrestricted_model: unrestricted.model,
    })
}

/// Fit any member of the family with default options.
pub fn fit(spec: &ModelSpec, data: &Dataset, w: Option<&SpatialWeights>) -> Result<FitResult> {
    let need_w = spec.kind != ModelKind::Ols;
    let w = match (need_w, w) {
        (false, _) => None,
        (true, Some(w)) => Some(w),
        (true, None) => {
            return Err(Error::ConfigError(format!(
                "model '{}' requires a weights matrix",
                spec.kind
            )))
        }
    };
    let opts = FitOptions::default();
    match spec.kind {
        ModelKind::Ols => fit_ols(data),
        ModelKind::Slx => fit_slx(data, w.unwrap(), spec.lagged_covariates.as_deref()),
        ModelKind::Sar => fit_sar(data, w.unwrap(), &opts),
        ModelKind::Sem => fit_sem(data, w.unwrap(), &opts),
        ModelKind::Sdm => fit_sdm(data, w.unwrap(), &opts, spec.lagged_covariates.as_deref()),
        ModelKind::Sdem => fit_sdem(data, w.unwrap(), &opts, spec.lagged_covariates.as_deref()),
    }
}

pub(crate) const LN_2PI: f64 = 1.8378770664093453;

/// Gaussian log-likelihood at the maximizing sigma2 = rss / n.
pub(crate) fn gaussian_loglik(n: usize, rss: f64) -> f64 {
    if rss <= 0.0 {
        return f64::INFINITY;
    }
    let nf = n as f64;
    -0.5 * nf * (LN_2PI + 1.0) - 0.5 * nf * (rss / nf).ln()
}

pub(crate) fn aic_from(loglik: f64, n_params: usize) -> f64 {
    2.0 * n_params as f64 - 2.0 * loglik
}

/// Shared argument check for fits that use a weights matrix.
pub(crate) fn check_spatial_inputs(data: &Dataset, w: &SpatialWeights) -> Result<Vec<String>> {
    data.ensure_finite()?;
    if data.n() != w.n() {
        return Err(Error::IdMismatch(format!(
            "data has {} rows, weights have {} units",
            data.n(),
            w.n()
        )));
    }
    if w.normalization() == crate::weights::Normalization::Raw {
        return Err(Error::RequiresNormalizedW);
    }
    let mut warnings = Vec::new();
    let islands = w.detect_islands();
    if !islands.is_empty() {
        warnings.push(format!(
            "{} island unit(s) contribute zero spatial lags: indices {:?}",
            islands.count, islands.island_indices
        ));
    }
    Ok(warnings)
}
