//! Spatial econometrics for cross-sectional data.
//!
//! The crate builds and normalizes sparse spatial weights matrices, tests
//! for spatial autocorrelation, estimates the SAR/SEM/SLX/SDM/SDEM family
//! of regression models by least squares or concentrated maximum
//! likelihood, and decomposes the results into direct and indirect spatial
//! impacts with simulation-based inference.
//!
//! # Modules
//!
//! - [`weights`]: sparse W construction (edge lists, k-nearest-neighbour,
//!   inverse distance), row and max-eigenvalue normalization, spatial lags,
//!   island detection.
//! - [`diagnostics`]: global Moran's I with permutation inference and the
//!   Lagrange multiplier battery for model selection.
//! - [`estimators`]: OLS, SLX, SAR, SEM, SDM, SDEM fits with
//!   log-likelihoods, covariance matrices, and likelihood-ratio tests.
//! - [`impacts`]: the spatial multiplier, unit-level partial effects, and
//!   direct/indirect/total summaries with simulated intervals.
//! - [`simulate`]: synthetic data from each process for recovery checks and
//!   bias demonstrations.
//! - [`cli`]: the batch command-line front end (`weights`, `fit`,
//!   `diagnose`, `impacts`, `simulate`).
//!
//! # Quick start
//!
//! ```
//! use nalgebra::DVector;
//! use spatialecon::weights::SpatialWeights;
//! use spatialecon::diagnostics::morans_i;
//!
//! let w = SpatialWeights::lattice_rook(4, 4).row_normalize()?;
//! let y = DVector::from_fn(16, |i, _| if (i / 4 + i % 4) % 2 == 0 { 1.0 } else { 0.0 });
//! let moran = morans_i(&w, &y, 999, 42)?;
//! assert!(moran.statistic < 0.0); // checkerboards are negatively autocorrelated
//! # Ok::<(), spatialecon::Error>(())
//! ```
//!
//! The `examples/` directory walks through each capability end to end; the
//! `spatialecon` binary exposes the same operations for batch use.

pub mod cli;
pub mod data;
pub mod diagnostics;
mod error;
pub mod estimators;
pub mod impacts;
mod linalg;
pub mod rng;
pub mod simulate;
pub mod weights;

pub use data::Dataset;
pub use diagnostics::{lm_tests, morans_i, morans_i_residuals, LmTestResult, MoranResult};
pub use error::{Error, Result};
pub use estimators::{
    fit_ols, fit_sar, fit_sdem, fit_sdm, fit_sem, fit_slx, log_det, lr_test, FitOptions,
    FitResult, LrTestResult, ModelKind, ModelSpec,
};
pub use impacts::{
    impacts_inference, impacts_summary, multiplier_matrix, partial_effects, ImpactsSummary,
    MultiplierMatrix,
};
pub use simulate::{generate, ols_bias_experiment, BiasReport, DgpSpec};
pub use weights::{IslandReport, Normalization, SpatialWeights};
