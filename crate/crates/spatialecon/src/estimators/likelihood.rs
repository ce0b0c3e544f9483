//! Concentrated maximum likelihood for the autoregressive members of the
//! family.
//!
//! For SAR-type models the Gaussian log-likelihood concentrates to
//! l(rho) = const - (n/2) ln(rss(rho)/n) + ln|I - rho W|, where rss(rho) is
//! the residual sum of squares of (y - rho W y) regressed on the design.
//! Because the residual of that regression is linear in rho, rss(rho) is an
//! exact quadratic and each evaluation is O(1) after two least-squares
//! solves. SEM concentrates the same way through the spatially filtered
//! regression of (I - lambda W) y on (I - lambda W) X, which reduces to
//! fixed moment matrices combined per lambda.
//!
//! ln|I - rho W| is computed from the eigenvalues of W, found once per
//! weights matrix and reused across every evaluation; a dense LU pass is
//! the fallback when the spectrum is unusable.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::weights::SpatialWeights;

use super::least_squares::{design_with_intercept, lagged_block, ols_on_design};
use super::{aic_from, check_spatial_inputs, gaussian_loglik, FitResult, ModelKind, LN_2PI};

/// Options for the concentrated-likelihood search.
#[derive(Debug, Clone)]
pub struct FitOptions {
    /// Override for the spatial-parameter search interval; intersected with
    /// the interval implied by the spectrum of W.
    pub rho_bounds: Option<(f64, f64)>,
    /// Absolute tolerance on the spatial parameter.
    pub tol: f64,
    /// Coarse grid size evaluated before local refinement.
    pub grid_points: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            rho_bounds: None,
            tol: 1e-8,
            grid_points: 100,
        }
    }
}

/// ln|I - rho W| from the spectrum of W: the sum of ln|1 - rho lambda_i|
/// over eigenvalues, complex pairs entering through their moduli.
pub fn log_det(rho: f64, w: &SpatialWeights) -> Result<f64> {
    log_det_spectrum(rho, w.eigenvalues())
}

fn log_det_spectrum(rho: f64, eigenvalues: &[Complex<f64>]) -> Result<f64> {
    let mut acc = 0.0;
    for lam in eigenvalues {
        let m = (Complex::new(1.0, 0.0) - lam * rho).norm();
        if m <= 1e-14 {
            return Err(Error::SingularMultiplier(rho));
        }
        acc += m.ln();
    }
    Ok(acc)
}

enum LogDetEngine {
    Spectrum(Vec<Complex<f64>>),
    DenseLu(DMatrix<f64>),
}

impl LogDetEngine {
    fn new(w: &SpatialWeights) -> Result<LogDetEngine> {
        let eig = w.eigenvalues();
        if eig.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Ok(LogDetEngine::Spectrum(eig.to_vec()));
        }
        if w.n() <= 2000 {
            Ok(LogDetEngine::DenseLu(w.to_dense()))
        } else {
            Err(Error::Normalization(
                "eigen-solve failed and n exceeds the dense LU fallback limit".into(),
            ))
        }
    }

    fn log_det(&self, rho: f64) -> Result<f64> {
        match self {
            LogDetEngine::Spectrum(eig) => log_det_spectrum(rho, eig),
            LogDetEngine::DenseLu(w) => {
                let n = w.nrows();
                let mut a = -w * rho;
                for i in 0..n {
                    a[(i, i)] += 1.0;
                }
                let lu = a.lu();
                let mut acc = 0.0;
                for i in 0..n {
                    let d = lu.u()[(i, i)].abs();
                    if d <= 1e-300 {
                        return Err(Error::SingularMultiplier(rho));
                    }
                    acc += d.ln();
                }
                Ok(acc)
            }
        }
    }
}

/// Search interval for rho implied by the real spectrum of W, intersected
/// with (-0.999, 0.999) for normalized matrices.
fn spectral_bounds(w: &SpatialWeights) -> (f64, f64) {
    let mut lam_min = 0.0f64;
    let mut lam_max = 0.0f64;
    for z in w.eigenvalues() {
        if z.im.abs() <= 1e-8 * (1.0 + z.re.abs()) {
            lam_min = lam_min.min(z.re);
            lam_max = lam_max.max(z.re);
        }
    }
    let lo = if lam_min < 0.0 { 1.0 / lam_min } else { -0.999 };
    let hi = if lam_max > 0.0 { 1.0 / lam_max } else { 0.999 };
    (lo.max(-0.999), hi.min(0.999))
}

fn search_bounds(w: &SpatialWeights, opts: &FitOptions) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = spectral_bounds(w);
    if let Some((a, b)) = opts.rho_bounds {
        lo = lo.max(a);
        hi = hi.min(b);
    }
    if !(lo < hi) {
        return Err(Error::ConfigError(format!(
            "empty search interval for the spatial parameter: ({lo}, {hi})"
        )));
    }
    Ok((lo, hi))
}

/// Golden-section maximization on [a, b] for a unimodal objective.
fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.6180339887498949;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Maximize a concentrated likelihood: coarse grid over the interval, then
/// golden-section refinement in the bracketing cells. Returns the optimum
/// and whether it sits at the interval edge.
fn maximize_concentrated<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    grid_points: usize,
    tol: f64,
) -> (f64, bool) {
    let g = grid_points.max(3);
    let h = (hi - lo) / g as f64;
    let mut best_i = 0usize;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..g {
        let r = lo + (i as f64 + 0.5) * h;
        let v = f(r);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let center = lo + (best_i as f64 + 0.5) * h;
    let a = (center - h).max(lo);
    let b = (center + h).min(hi);
    let mut opt = golden_section(f, a, b, tol);
    // Refinement never falls below the best grid value on a unimodal
    // bracket; guard against a flat or ragged objective anyway.
    if f(opt) < best_v {
        opt = center;
    }
    let span = hi - lo;
    let at_edge = (opt - lo).abs() <= 1e-6 * span || (hi - opt).abs() <= 1e-6 * span;
    (opt, at_edge)
}

struct SarConcentrated {
    e0_sq: f64,
    e0_el: f64,
    el_sq: f64,
    b_y: DVector<f64>,
    b_lag: DVector<f64>,
    e0: DVector<f64>,
    el: DVector<f64>,
}

impl SarConcentrated {
    fn rss(&self, rho: f64) -> f64 {
        (self.e0_sq - 2.0 * rho * self.e0_el + rho * rho * self.el_sq).max(0.0)
    }
}

fn model_with_lags(
    base: ModelKind,
    data: &Dataset,
    w: &SpatialWeights,
    lagged: Option<&[usize]>,
    with_theta: bool,
) -> Result<(DMatrix<f64>, Vec<String>)> {
    let plain = design_with_intercept(&data.x);
    if !with_theta {
        return Ok((plain, Vec::new()));
    }
    let (wx, theta_names) = lagged_block(data, w, lagged)?;
    let mut design = DMatrix::zeros(data.n(), plain.ncols() + wx.ncols());
    design
        .view_mut((0, 0), (data.n(), plain.ncols()))
        .copy_from(&plain);
    design
        .view_mut((0, plain.ncols()), (data.n(), wx.ncols()))
        .copy_from(&wx);
    let _ = base;
    Ok((design, theta_names))
}

#[allow(clippy::too_many_arguments)]
fn assemble_ml_fit(
    model: ModelKind,
    data: &Dataset,
    theta_names: Vec<String>,
    coef: DVector<f64>,
    spatial: f64,
    sigma2: f64,
    loglik: f64,
    residuals: DVector<f64>,
    vcov: Vec<Vec<f64>>,
    warnings: Vec<String>,
) -> FitResult {
    let k = data.k();
    let n_theta = theta_names.len();
    let beta: Vec<f64> = (1..=k).map(|i| coef[i]).collect();
    let theta: Vec<f64> = (k + 1..k + 1 + n_theta).map(|i| coef[i]).collect();
    let spatial_name = if model.has_rho() { "rho" } else { "lambda" };
    let mut param_names = vec!["(intercept)".to_string()];
    param_names.extend(data.covariate_names.iter().cloned());
    param_names.extend(theta_names.iter().cloned());
    param_names.push(spatial_name.to_string());
    param_names.push("sigma2".to_string());
    let n_params = 1 + k + n_theta + 2;
    FitResult {
        model,
        n: data.n(),
        k,
        covariate_names: data.covariate_names.clone(),
        theta_names,
        alpha: coef[0],
        beta,
        theta,
        rho: model.has_rho().then_some(spatial),
        lambda: model.has_lambda().then_some(spatial),
        sigma2,
        loglik,
        aic: aic_from(loglik, n_params),
        param_names,
        vcov,
        residuals: residuals.iter().copied().collect(),
        warnings,
    }
}

fn sar_like(
    model: ModelKind,
    data: &Dataset,
    w: &SpatialWeights,
    opts: &FitOptions,
    lagged: Option<&[usize]>,
) -> Result<FitResult> {
    let mut warnings = check_spatial_inputs(data, w)?;
    let (design, theta_names) = model_with_lags(model, data, w, lagged, model.has_theta())?;
    let n = data.n();
    let wy = w.lag_vector(&data.y);
    let engine = LogDetEngine::new(w)?;
    let (lo, hi) = search_bounds(w, opts)?;

    let fit_y = ols_on_design(&design, &data.y)?;
    let fit_l = ols_on_design(&design, &wy)?;
    let conc = SarConcentrated {
        e0_sq: fit_y.residuals.dot(&fit_y.residuals),
        e0_el: fit_y.residuals.dot(&fit_l.residuals),
        el_sq: fit_l.residuals.dot(&fit_l.residuals),
        b_y: fit_y.coef,
        b_lag: fit_l.coef,
        e0: fit_y.residuals,
        el: fit_l.residuals,
    };

    let objective = |rho: f64| -> f64 {
        match engine.log_det(rho) {
            Ok(ld) => {
                let rss = conc.rss(rho);
                if rss <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                -0.5 * n as f64 * (rss / n as f64).ln() + ld
            }
            Err(_) => f64::NEG_INFINITY,
        }
    };
    let (rho_hat, at_edge) = maximize_concentrated(&objective, lo, hi, opts.grid_points, opts.tol);
    if at_edge {
        warnings.push(format!(
            "BoundaryEstimate: spatial parameter {rho_hat:.6} sits at the search bound ({lo:.4}, {hi:.4})"
        ));
    }

    let coef = &conc.b_y - &conc.b_lag * rho_hat;
    let residuals = &conc.e0 - &conc.el * rho_hat;
    let rss = conc.rss(rho_hat);
    let sigma2 = rss / n as f64;
    let loglik = gaussian_loglik(n, rss) + engine.log_det(rho_hat)?;

    // Covariance from the numerical Hessian of the full log-likelihood in
    // (coefficients, rho, sigma2).
    let mut point: Vec<f64> = coef.iter().copied().collect();
    point.push(rho_hat);
    point.push(sigma2);
    let y = data.y.clone();
    let full = |v: &[f64]| -> f64 {
        let m = v.len();
        let s2 = v[m - 1];
        if s2 <= 0.0 {
            return -1e300;
        }
        let rho = v[m - 2];
        let ld = match engine.log_det(rho) {
            Ok(l) => l,
            Err(_) => return -1e300,
        };
        let b = DVector::from_column_slice(&v[..m - 2]);
        let eps = &y - &wy * rho - &design * b;
        let sse = eps.dot(&eps);
        -0.5 * n as f64 * (LN_2PI + s2.ln()) - sse / (2.0 * s2) + ld
    };
    let (vcov, hess_warn) = hessian_vcov(&full, &point);
    if let Some(msg) = hess_warn {
        warnings.push(msg);
    }

    Ok(assemble_ml_fit(
        model, data, theta_names, coef, rho_hat, sigma2, loglik, residuals, vcov, warnings,
    ))
}

struct SemConcentrated {
    dtd: DMatrix<f64>,
    dtwd_sym: DMatrix<f64>,
    wdtwd: DMatrix<f64>,
    dty: DVector<f64>,
    dtwy_plus_wdty: DVector<f64>,
    wdtwy: DVector<f64>,
    yy: f64,
    ywy: f64,
    wywy: f64,
}

impl SemConcentrated {
    /// Filtered least squares at a given lambda: coefficients and rss of
    /// (I - lambda W) y on (I - lambda W) D.
    fn solve(&self, lambda: f64) -> Option<(DVector<f64>, f64)> {
        let m = &self.dtd - &self.dtwd_sym * lambda + &self.wdtwd * (lambda * lambda);
        let r = &self.dty - &self.dtwy_plus_wdty * lambda + &self.wdtwy * (lambda * lambda);
        let q = self.yy - 2.0 * lambda * self.ywy + lambda * lambda * self.wywy;
        let lu = m.lu();
        let beta = lu.solve(&r)?;
        let rss = (q - beta.dot(&r)).max(0.0);
        Some((beta, rss))
    }
}

fn sem_like(
    model: ModelKind,
    data: &Dataset,
    w: &SpatialWeights,
    opts: &FitOptions,
    lagged: Option<&[usize]>,
) -> Result<FitResult> {
    let mut warnings = check_spatial_inputs(data, w)?;
    let (design, theta_names) = model_with_lags(model, data, w, lagged, model.has_theta())?;
    let n = data.n();
    // Rank check once; the filtered designs inherit full rank for lambda in
    // the interior of the parameter space.
    ols_on_design(&design, &data.y)?;

    let wd = w.spatial_lag(&design)?;
    let wy = w.lag_vector(&data.y);
    let engine = LogDetEngine::new(w)?;
    let (lo, hi) = search_bounds(w, opts)?;

    let dtwd = design.transpose() * &wd;
    let conc = SemConcentrated {
        dtd: design.transpose() * &design,
        dtwd_sym: &dtwd + dtwd.transpose(),
        wdtwd: wd.transpose() * &wd,
        dty: design.transpose() * &data.y,
        dtwy_plus_wdty: design.transpose() * &wy + wd.transpose() * &data.y,
        wdtwy: wd.transpose() * &wy,
        yy: data.y.dot(&data.y),
        ywy: data.y.dot(&wy),
        wywy: wy.dot(&wy),
    };

    let objective = |lambda: f64| -> f64 {
        let ld = match engine.log_det(lambda) {
            Ok(l) => l,
            Err(_) => return f64::NEG_INFINITY,
        };
        match conc.solve(lambda) {
            Some((_, rss)) if rss > 0.0 => -0.5 * n as f64 * (rss / n as f64).ln() + ld,
            _ => f64::NEG_INFINITY,
        }
    };
    let (lambda_hat, at_edge) =
        maximize_concentrated(&objective, lo, hi, opts.grid_points, opts.tol);
    if at_edge {
        warnings.push(format!(
            "BoundaryEstimate: spatial parameter {lambda_hat:.6} sits at the search bound ({lo:.4}, {hi:.4})"
        ));
    }

    let (coef, rss) = conc
        .solve(lambda_hat)
        .ok_or(Error::SingularDesign)?;
    let sigma2 = rss / n as f64;
    let loglik = gaussian_loglik(n, rss) + engine.log_det(lambda_hat)?;
    let u = &data.y - &design * &coef;
    let residuals = &u - w.lag_vector(&u) * lambda_hat;

    let mut point: Vec<f64> = coef.iter().copied().collect();
    point.push(lambda_hat);
    point.push(sigma2);
    let y = data.y.clone();
    let wref = w;
    let full = |v: &[f64]| -> f64 {
        let m = v.len();
        let s2 = v[m - 1];
        if s2 <= 0.0 {
            return -1e300;
        }
        let lambda = v[m - 2];
        let ld = match engine.log_det(lambda) {
            Ok(l) => l,
            Err(_) => return -1e300,
        };
        let b = DVector::from_column_slice(&v[..m - 2]);
        let u = &y - &design * b;
        let eps = &u - wref.lag_vector(&u) * lambda;
        let sse = eps.dot(&eps);
        -0.5 * n as f64 * (LN_2PI + s2.ln()) - sse / (2.0 * s2) + ld
    };
    let (vcov, hess_warn) = hessian_vcov(&full, &point);
    if let Some(msg) = hess_warn {
        warnings.push(msg);
    }

    Ok(assemble_ml_fit(
        model,
        data,
        theta_names,
        coef,
        lambda_hat,
        sigma2,
        loglik,
        residuals,
        vcov,
        warnings,
    ))
}

/// Spatial autoregressive model: y = a + rho W y + X b + e, rho chosen to
/// maximize the concentrated log-likelihood.
pub fn fit_sar(data: &Dataset, w: &SpatialWeights, opts: &FitOptions) -> Result<FitResult> {
    sar_like(ModelKind::Sar, data, w, opts, None)
}

/// Spatial Durbin model: SAR with the design augmented by W X.
pub fn fit_sdm(
    data: &Dataset,
    w: &SpatialWeights,
    opts: &FitOptions,
    lagged: Option<&[usize]>,
) -> Result<FitResult> {
    sar_like(ModelKind::Sdm, data, w, opts, lagged)
}

/// Spatial error model: y = a + X b + u with u = lambda W u + e.
pub fn fit_sem(data: &Dataset, w: &SpatialWeights, opts: &FitOptions) -> Result<FitResult> {
    sem_like(ModelKind::Sem, data, w, opts, None)
}

/// Spatial Durbin error model: SEM with the design augmented by W X.
pub fn fit_sdem(
    data: &Dataset,
    w: &SpatialWeights,
    opts: &FitOptions,
    lagged: Option<&[usize]>,
) -> Result<FitResult> {
    sem_like(ModelKind::Sdem, data, w, opts, lagged)
}

/// Covariance of the estimates as the inverse negative central-difference
/// Hessian of the full log-likelihood.
fn hessian_vcov<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64]) -> (Vec<Vec<f64>>, Option<String>) {
    let p = x.len();
    let step: Vec<f64> = x.iter().map(|v| 1e-5 * v.abs().max(1.0)).collect();
    let mut h = DMatrix::zeros(p, p);
    let f0 = f(x);
    let mut buf = x.to_vec();
    for i in 0..p {
        buf.copy_from_slice(x);
        buf[i] = x[i] + step[i];
        let fp = f(&buf);
        buf[i] = x[i] - step[i];
        let fm = f(&buf);
        h[(i, i)] = (fp - 2.0 * f0 + fm) / (step[i] * step[i]);
    }
    for i in 0..p {
        for j in (i + 1)..p {
            buf.copy_from_slice(x);
            buf[i] = x[i] + step[i];
            buf[j] = x[j] + step[j];
            let fpp = f(&buf);
            buf[j] = x[j] - step[j];
            let fpm = f(&buf);
            buf[i] = x[i] - step[i];
            buf[j] = x[j] + step[j];
            let fmp = f(&buf);
            buf[j] = x[j] - step[j];
            let fmm = f(&buf);
            let v = (fpp - fpm - fmp + fmm) / (4.0 * step[i] * step[j]);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    match (-h).try_inverse() {
        Some(inv) => {
            let vcov = (0..p)
                .map(|i| (0..p).map(|j| inv[(i, j)]).collect())
                .collect();
            (vcov, None)
        }
        None => (
            vec![vec![f64::NAN; p]; p],
            Some("covariance unavailable: singular Hessian at the optimum".into()),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn worked_example_row_normalized() -> SpatialWeights {
        let units: Vec<String> = (1..=5).map(|i| i.to_string()).collect();
        let edges: Vec<(String, String, Option<f64>)> =
            [(1, 2), (1, 4), (2, 3), (2, 5), (3, 4), (4, 5)]
                .iter()
                .map(|&(a, b)| (a.to_string(), b.to_string(), None))
                .collect();
        SpatialWeights::from_edge_list_with_units(&units, &edges, true)
            .unwrap()
            .row_normalize()
            .unwrap()
    }

    #[test]
    fn log_det_identity_at_zero() {
        let w = worked_example_row_normalized();
        assert_relative_eq!(log_det(0.0, &w).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn log_det_worked_example_analytic() {
        // Spectrum of the row-normalized bipartite matrix is {1, -1, 0, 0, 0},
        // so ln|I - 0.6 W| = ln(0.4) + ln(1.6).
        let w = worked_example_row_normalized();
        let expected = 0.4f64.ln() + 1.6f64.ln();
        assert_relative_eq!(log_det(0.6, &w).unwrap(), expected, epsilon = 1e-10);
        assert_relative_eq!(expected, -0.44629, epsilon = 1e-5);
    }

    #[test]
    fn log_det_matches_dense_lu_on_random_weights() {
        use rand::Rng;
        let mut rng = crate::rng::substream(7, "logdet-test", 0);
        let n = 100;
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && rng.random::<f64>() < 0.05 {
                    entries.push((i, j, rng.random::<f64>() + 0.1));
                }
            }
        }
        let w = SpatialWeights::from_entries(n, &entries)
            .unwrap()
            .row_normalize()
            .unwrap();
        let dense = w.to_dense();
        for t in 0..20 {
            let rho = -0.9 + 1.8 * (t as f64 + 0.5) / 20.0;
            let mut a = -&dense * rho;
            for i in 0..n {
                a[(i, i)] += 1.0;
            }
            let lu = a.lu();
            let mut expect = 0.0;
            for i in 0..n {
                expect += lu.u()[(i, i)].abs().ln();
            }
            let got = log_det(rho, &w).unwrap();
            assert!(
                (got - expect).abs() < 1e-8,
                "rho = {rho}: eigen {got} vs LU {expect}"
            );
        }
    }

    #[test]
    fn golden_section_finds_quadratic_peak() {
        let opt = golden_section(|x| -(x - 0.3).powi(2), -1.0, 1.0, 1e-10);
        assert_relative_eq!(opt, 0.3, epsilon = 1e-8);
    }

    #[test]
    fn refined_optimum_dominates_grid() {
        let w = SpatialWeights::lattice_rook(8, 8).row_normalize().unwrap();
        let data = crate::simulate::generate(
            &crate::simulate::DgpSpec {
                kind: ModelKind::Sar,
                rho: 0.4,
                lambda: 0.0,
                beta: vec![1.0],
                theta: vec![],
                sigma: 1.0,
                seed: 11,
            },
            &w,
        )
        .unwrap();
        let n = data.n();
        let design = design_with_intercept(&data.x);
        let wy = w.lag_vector(&data.y);
        let engine = LogDetEngine::new(&w).unwrap();
        let fy = ols_on_design(&design, &data.y).unwrap();
        let fl = ols_on_design(&design, &wy).unwrap();
        let conc = SarConcentrated {
            e0_sq: fy.residuals.dot(&fy.residuals),
            e0_el: fy.residuals.dot(&fl.residuals),
            el_sq: fl.residuals.dot(&fl.residuals),
            b_y: fy.coef,
            b_lag: fl.coef,
            e0: fy.residuals,
            el: fl.residuals,
        };
        let obj = |r: f64| -> f64 {
            let rss = conc.rss(r);
            -0.5 * n as f64 * (rss / n as f64).ln() + engine.log_det(r).unwrap()
        };
        let (lo, hi) = search_bounds(&w, &FitOptions::default()).unwrap();
        let (opt, _) = maximize_concentrated(&obj, lo, hi, 100, 1e-8);
        let v_opt = obj(opt);
        for i in 0..100 {
            let r = lo + (i as f64 + 0.5) * (hi - lo) / 100.0;
            assert!(v_opt >= obj(r) - 1e-9);
        }
    }
}
