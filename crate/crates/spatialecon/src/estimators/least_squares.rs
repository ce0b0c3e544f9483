//! Least-squares estimators: OLS and the spatially lagged X model, which is
//! OLS on the design augmented with W X.

use nalgebra::{DMatrix, DVector};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{lstsq, xtx_inverse};
use crate::weights::SpatialWeights;

use super::{aic_from, check_spatial_inputs, gaussian_loglik, FitResult, ModelKind};

pub(crate) struct OlsCore {
    pub coef: DVector<f64>,
    pub residuals: DVector<f64>,
    pub rss: f64,
    pub xtx_inv: DMatrix<f64>,
}

pub(crate) fn ols_on_design(design: &DMatrix<f64>, y: &DVector<f64>) -> Result<OlsCore> {
    let coef = lstsq(design, y)?;
    let residuals = y - design * &coef;
    let rss = residuals.dot(&residuals);
    let xtx_inv = xtx_inverse(design)?;
    Ok(OlsCore {
        coef,
        residuals,
        rss,
        xtx_inv,
    })
}

/// Intercept column prepended to the covariates.
pub(crate) fn design_with_intercept(x: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.nrows();
    let mut d = DMatrix::zeros(n, x.ncols() + 1);
    d.column_mut(0).fill(1.0);
    d.view_mut((0, 1), (n, x.ncols())).copy_from(x);
    d
}

/// Columns of W X for the selected covariates (all when `lagged` is None),
/// with their display names.
pub(crate) fn lagged_block(
    data: &Dataset,
    w: &SpatialWeights,
    lagged: Option<&[usize]>,
) -> Result<(DMatrix<f64>, Vec<String>)> {
    let cols: Vec<usize> = match lagged {
        None => (0..data.k()).collect(),
        Some(list) => {
            for &c in list {
                if c >= data.k() {
                    return Err(Error::BadIndex {
                        index: c,
                        k: data.k(),
                    });
                }
            }
            list.to_vec()
        }
    };
    let sub = DMatrix::from_fn(data.n(), cols.len(), |i, c| data.x[(i, cols[c])]);
    let wx = w.spatial_lag(&sub)?;
    let names = cols
        .iter()
        .map(|&c| format!("W.{}", data.covariate_names[c]))
        .collect();
    Ok((wx, names))
}

fn finish_least_squares(
    model: ModelKind,
    data: &Dataset,
    core: OlsCore,
    theta_names: Vec<String>,
    warnings: Vec<String>,
) -> FitResult {
    let n = data.n();
    let k = data.k();
    let n_coef = core.coef.len();
    let n_theta = theta_names.len();
    let loglik = gaussian_loglik(n, core.rss);
    let sigma2 = core.rss / n as f64;

    // Classical coefficient covariance with the unbiased variance estimate,
    // plus the large-sample variance of sigma2 itself in the last slot.
    let dof = n.saturating_sub(n_coef).max(1) as f64;
    let s2_unbiased = core.rss / dof;
    let p = n_coef + 1;
    let mut vcov = vec![vec![0.0f64; p]; p];
    for i in 0..n_coef {
        for j in 0..n_coef {
            vcov[i][j] = s2_unbiased * core.xtx_inv[(i, j)];
        }
    }
    vcov[p - 1][p - 1] = 2.0 * sigma2 * sigma2 / n as f64;

    let mut param_names = vec!["(intercept)".to_string()];
    param_names.extend(data.covariate_names.iter().cloned());
    param_names.extend(theta_names.iter().cloned());
    param_names.push("sigma2".to_string());

    let beta: Vec<f64> = (1..=k).map(|i| core.coef[i]).collect();
    let theta: Vec<f64> = (k + 1..k + 1 + n_theta).map(|i| core.coef[i]).collect();
    let n_params = 1 + k + n_theta + 1;

    FitResult {
        model,
        n,
        k,
        covariate_names: data.covariate_names.clone(),
        theta_names,
        alpha: core.coef[0],
        beta,
        theta,
        rho: None,
        lambda: None,
        sigma2,
        loglik,
        aic: aic_from(loglik, n_params),
        param_names,
        vcov,
        residuals: core.residuals.iter().copied().collect(),
        warnings,
    }
}

/// Ordinary least squares of y on an intercept and the covariates.
pub fn fit_ols(data: &Dataset) -> Result<FitResult> {
    data.ensure_finite()?;
    if data.n() <= data.k() + 1 {
        return Err(Error::SingularDesign);
    }
    let design = design_with_intercept(&data.x);
    let core = ols_on_design(&design, &data.y)?;
    Ok(finish_least_squares(
        ModelKind::Ols,
        data,
        core,
        Vec::new(),
        Vec::new(),
    ))
}

/// The spatially lagged X model: OLS on [1, X, W X]. Lagged-covariate
/// coefficients are reported as theta, separately from beta.
pub fn fit_slx(
    data: &Dataset,
    w: &SpatialWeights,
    lagged: Option<&[usize]>,
) -> Result<FitResult> {
    let warnings = check_spatial_inputs(data, w)?;
    let (wx, theta_names) = lagged_block(data, w, lagged)?;
    let base = design_with_intercept(&data.x);
    let mut design = DMatrix::zeros(data.n(), base.ncols() + wx.ncols());
    design
        .view_mut((0, 0), (data.n(), base.ncols()))
        .copy_from(&base);
    design
        .view_mut((0, base.ncols()), (data.n(), wx.ncols()))
        .copy_from(&wx);
    let core = ols_on_design(&design, &data.y)?;
    Ok(finish_least_squares(
        ModelKind::Slx,
        data,
        core,
        theta_names,
        warnings,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn dataset(ids: usize, y: Vec<f64>, x: Vec<Vec<f64>>) -> Dataset {
        let names: Vec<String> = (0..x.len()).map(|i| format!("x{}", i + 1)).collect();
        let n = y.len();
        let k = x.len();
        let mut flat = Vec::with_capacity(n * k);
        for i in 0..n {
            for col in &x {
                flat.push(col[i]);
            }
        }
        Dataset::new(
            (0..ids).map(|i| i.to_string()).collect(),
            "y".into(),
            DVector::from_vec(y),
            names,
            DMatrix::from_row_slice(n, k, &flat),
        )
        .unwrap()
    }

    #[test]
    fn ols_exact_line_has_zero_variance() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 + 3.0 * v).collect();
        let fit = fit_ols(&dataset(10, y, vec![x])).unwrap();
        assert_relative_eq!(fit.alpha, 2.0, epsilon = 1e-10);
        assert_relative_eq!(fit.beta[0], 3.0, epsilon = 1e-10);
        assert!(fit.sigma2 < 1e-20);
    }

    #[test]
    fn ols_rejects_collinear_design() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y = x.clone();
        let d = dataset(10, y, vec![x.clone(), x]);
        assert!(matches!(fit_ols(&d), Err(Error::SingularDesign)));
    }

    #[test]
    fn slx_rejects_unnormalized_weights() {
        let w = SpatialWeights::lattice_rook(2, 2);
        let d = dataset(
            4,
            vec![1.0, 2.0, 3.0, 4.0],
            vec![vec![0.0, 1.0, 0.0, 1.0]],
        );
        assert!(matches!(
            fit_slx(&d, &w, None),
            Err(Error::RequiresNormalizedW)
        ));
    }

    #[test]
    fn slx_all_island_weights_is_singular() {
        // Every unit an island: the lagged block is all zeros.
        let units: Vec<String> = (0..6).map(|i| i.to_string()).collect();
        let w = SpatialWeights::from_edge_list_with_units(&units, &[], false)
            .unwrap()
            .row_normalize()
            .unwrap();
        let d = dataset(
            6,
            vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
            vec![vec![0.3, 1.0, 2.0, 0.5, 4.0, 2.5]],
        );
        assert!(matches!(
            fit_slx(&d, &w, None),
            Err(Error::SingularDesign)
        ));
    }
}
