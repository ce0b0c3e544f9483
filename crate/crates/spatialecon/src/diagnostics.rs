//! Spatial autocorrelation and specification tests.
//!
//! Global Moran's I for a variable (or model residuals) with permutation
//! inference, and the Lagrange multiplier battery that discriminates between
//! lag and error dependence from an OLS fit.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::estimators::FitResult;
use crate::linalg::chi_sq_sf;
use crate::rng::substream;
use crate::weights::{Normalization, SpatialWeights};

/// Which tail of the permutation distribution feeds the p-value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tail {
    TwoSided,
    Greater,
    Less,
}

/// Global Moran's I with its reference expectation and permutation p-value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MoranResult {
    pub statistic: f64,
    /// Expectation -1/(n-1) under the randomization null.
    pub expectation: f64,
    pub p_value: f64,
    pub n_permutations: usize,
    pub seed: u64,
    pub s0: f64,
}

/// I = (N / S0) * sum_ij w_ij (y_i - ybar)(y_j - ybar) / sum_i (y_i - ybar)^2,
/// with a two-sided permutation p-value over random relabelings of y; the
/// observed statistic is counted among the draws.
pub fn morans_i(
    w: &SpatialWeights,
    y: &DVector<f64>,
    n_permutations: usize,
    seed: u64,
) -> Result<MoranResult> {
    morans_i_tailed(w, y, n_permutations, seed, Tail::TwoSided)
}

pub fn morans_i_tailed(
    w: &SpatialWeights,
    y: &DVector<f64>,
    n_permutations: usize,
    seed: u64,
    tail: Tail,
) -> Result<MoranResult> {
    let n = w.n();
    if y.len() != n {
        return Err(Error::ShapeError(format!(
            "y has {} entries for {} units",
            y.len(),
            n
        )));
    }
    if n < 3 {
        return Err(Error::ConfigError("Moran's I needs at least 3 units".into()));
    }
    if w.entry_count() == 0 {
        return Err(Error::NoConnectivity);
    }
    let s0 = w.s0();
    let mean = y.sum() / n as f64;
    let z: Vec<f64> = y.iter().map(|v| v - mean).collect();
    let denom: f64 = z.iter().map(|v| v * v).sum();
    if denom == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let scale = n as f64 / (s0 * denom);
    let observed = scale * cross_product(w, &z, None);

    let exceed: usize = (0..n_permutations)
        .into_par_iter()
        .map(|p| {
            let mut rng = substream(seed, "moran-perm", p as u64);
            let mut perm: Vec<usize> = (0..n).collect();
            use rand::seq::SliceRandom;
            perm.shuffle(&mut rng);
            let stat = scale * cross_product(w, &z, Some(&perm));
            match tail {
                Tail::TwoSided => usize::from(stat.abs() >= observed.abs()),
                Tail::Greater => usize::from(stat >= observed),
                Tail::Less => usize::from(stat <= observed),
            }
        })
        .sum();
    let p_value = (1 + exceed) as f64 / (1 + n_permutations) as f64;

    Ok(MoranResult {
        statistic: observed,
        expectation: -1.0 / (n as f64 - 1.0),
        p_value,
        n_permutations,
        seed,
        s0,
    })
}

fn cross_product(w: &SpatialWeights, z: &[f64], perm: Option<&[usize]>) -> f64 {
    let mut acc = 0.0;
    match perm {
        None => {
            for (i, j, wij) in w.entries() {
                acc += wij * z[i] * z[j];
            }
        }
        Some(p) => {
            for (i, j, wij) in w.entries() {
                acc += wij * z[p[i]] * z[p[j]];
            }
        }
    }
    acc
}

/// Moran's I applied to the residuals of a fitted model.
pub fn morans_i_residuals(
    fit: &FitResult,
    w: &SpatialWeights,
    n_permutations: usize,
    seed: u64,
) -> Result<MoranResult> {
    let resid = DVector::from_column_slice(&fit.residuals);
    morans_i(w, &resid, n_permutations, seed)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TestStat {
    pub statistic: f64,
    pub p_value: f64,
}

fn chi1(statistic: f64) -> TestStat {
    TestStat {
        statistic,
        p_value: chi_sq_sf(statistic, 1.0),
    }
}

/// Lagrange multiplier battery from an OLS fit: lag and error statistics
/// plus the variants robust to the alternative source of dependence. Each
/// is chi-square with one degree of freedom under its null.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LmTestResult {
    pub lm_lag: TestStat,
    pub lm_err: TestStat,
    pub robust_lm_lag: TestStat,
    pub robust_lm_err: TestStat,
}

/// With e the OLS residuals, s2 = e'e/n, M the annihilator of the design,
/// and T = tr(W'W + WW):
///   d_lag = e'Wy / s2,   d_err = e'We / s2,
///   J = [(WXb)' M (WXb) + T s2] / s2,
///   LM_err  = d_err^2 / T,                  LM_lag  = d_lag^2 / J,
///   RLM_lag = (d_lag - d_err)^2 / (J - T),  RLM_err = (d_err - (T/J) d_lag)^2 / (T - T^2/J).
pub fn lm_tests(data: &Dataset, ols_fit: &FitResult, w: &SpatialWeights) -> Result<LmTestResult> {
    if !ols_fit.is_ols() {
        return Err(Error::WrongModel {
            expected: "ols".into(),
            got: ols_fit.model.to_string(),
        });
    }
    if w.normalization() != Normalization::Row {
        return Err(Error::RequiresNormalizedW);
    }
    if w.entry_count() == 0 {
        return Err(Error::NoConnectivity);
    }
    let n = w.n();
    if data.n() != n || ols_fit.residuals.len() != n {
        return Err(Error::IdMismatch(format!(
            "data ({}), fit ({}), and weights ({}) disagree on n",
            data.n(),
            ols_fit.residuals.len(),
            n
        )));
    }

    let e = DVector::from_column_slice(&ols_fit.residuals);
    let s2 = e.dot(&e) / n as f64;
    if s2 == 0.0 {
        return Err(Error::ZeroVariance);
    }

    // T = tr(W'W + WW) over the sparse entries.
    let mut t_stat = 0.0;
    for (i, j, wij) in w.entries() {
        t_stat += wij * wij + wij * w.get(j, i);
    }

    let wy = w.lag_vector(&data.y);
    let we = w.lag_vector(&e);
    let d_lag = e.dot(&wy) / s2;
    let d_err = e.dot(&we) / s2;

    // (W X b)' M (W X b): the rss of W(fitted) regressed on the design.
    let design = {
        let mut d = nalgebra::DMatrix::zeros(n, data.k() + 1);
        d.column_mut(0).fill(1.0);
        d.view_mut((0, 1), (n, data.k())).copy_from(&data.x);
        d
    };
    let mut coef = Vec::with_capacity(data.k() + 1);
    coef.push(ols_fit.alpha);
    coef.extend_from_slice(&ols_fit.beta);
    let fitted = &design * DVector::from_column_slice(&coef);
    let w_fitted = w.lag_vector(&fitted);
    let proj = crate::linalg::lstsq(&design, &w_fitted)?;
    let m_wfit = &w_fitted - &design * proj;
    let wxb_m_wxb = m_wfit.dot(&m_wfit);

    let j_stat = (wxb_m_wxb + t_stat * s2) / s2;

    let lm_err = d_err * d_err / t_stat;
    let lm_lag = d_lag * d_lag / j_stat;
    let denom_rlag = j_stat - t_stat;
    let robust_lm_lag = if denom_rlag > 0.0 {
        (d_lag - d_err).powi(2) / denom_rlag
    } else {
        f64::NAN
    };
    let denom_rerr = t_stat - t_stat * t_stat / j_stat;
    let robust_lm_err = if denom_rerr > 0.0 {
        (d_err - (t_stat / j_stat) * d_lag).powi(2) / denom_rerr
    } else {
        f64::NAN
    };

    Ok(LmTestResult {
        lm_lag: chi1(lm_lag),
        lm_err: chi1(lm_err),
        robust_lm_lag: chi1(robust_lm_lag),
        robust_lm_err: chi1(robust_lm_err),
    })
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
    fn checkerboard_gives_perfect_negative_autocorrelation() {
        let w = worked_example_row_normalized();
        let y = DVector::from_vec(vec![0.0, 1.0, 0.0, 1.0, 0.0]);
        let r = morans_i(&w, &y, 99, 1).unwrap();
        assert_relative_eq!(r.statistic, -1.0, epsilon = 1e-12);
        assert_relative_eq!(r.expectation, -0.25, epsilon = 1e-12);
    }

    #[test]
    fn two_block_constant_pattern_gives_plus_one() {
        // Two disconnected 2-cycles, y constant within each component.
        let w = SpatialWeights::from_entries(
            4,
            &[(0, 1, 1.0), (1, 0, 1.0), (2, 3, 1.0), (3, 2, 1.0)],
        )
        .unwrap()
        .row_normalize()
        .unwrap();
        let y = DVector::from_vec(vec![2.0, 2.0, -1.0, -1.0]);
        let r = morans_i(&w, &y, 99, 1).unwrap();
        assert_relative_eq!(r.statistic, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn constant_y_is_rejected() {
        let w = worked_example_row_normalized();
        let y = DVector::from_element(5, 3.5);
        assert!(matches!(
            morans_i(&w, &y, 99, 1),
            Err(Error::ZeroVariance)
        ));
    }

    #[test]
    fn empty_weights_rejected() {
        let units: Vec<String> = (0..4).map(|i| i.to_string()).collect();
        let w = SpatialWeights::from_edge_list_with_units(&units, &[], false).unwrap();
        let y = DVector::from_vec(vec![1.0, 2.0, 3.0, 4.0]);
        assert!(matches!(
            morans_i(&w, &y, 99, 1),
            Err(Error::NoConnectivity)
        ));
    }

    #[test]
    fn affine_invariance() {
        let w = SpatialWeights::lattice_rook(6, 6).row_normalize().unwrap();
        let y = DVector::from_fn(36, |i, _| ((i * 13 + 5) % 17) as f64);
        let y2 = y.map(|v| -3.2 * v + 11.0);
        let a = morans_i(&w, &y, 9, 1).unwrap();
        let b = morans_i(&w, &y2, 9, 1).unwrap();
        assert_relative_eq!(a.statistic, b.statistic, epsilon = 1e-10);
    }

    #[test]
    fn s0_equals_n_gives_identical_statistic_for_row_normalized() {
        let w = SpatialWeights::lattice_rook(5, 5).row_normalize().unwrap();
        let y = DVector::from_fn(25, |i, _| ((i * 7 + 3) % 11) as f64);
        let r = morans_i(&w, &y, 9, 1).unwrap();
        // Recompute with S0 replaced by n.
        let mean = y.sum() / 25.0;
        let z: Vec<f64> = y.iter().map(|v| v - mean).collect();
        let denom: f64 = z.iter().map(|v| v * v).sum();
        let num: f64 = w.entries().map(|(i, j, wij)| wij * z[i] * z[j]).sum();
        let with_n = (25.0 / 25.0) * num / denom;
        assert_relative_eq!(r.statistic, with_n, epsilon = 1e-12);
        assert_relative_eq!(r.s0, 25.0, epsilon = 1e-10);
    }

    #[test]
    fn permutation_p_values_are_reproducible() {
        let w = SpatialWeights::lattice_rook(5, 5).row_normalize().unwrap();
        let y = DVector::from_fn(25, |i, _| ((i * 7 + 3) % 11) as f64);
        let a = morans_i(&w, &y, 499, 42).unwrap();
        let b = morans_i(&w, &y, 499, 42).unwrap();
        assert_eq!(a.p_value, b.p_value);
        let c = morans_i(&w, &y, 499, 43).unwrap();
        assert_eq!(a.statistic, c.statistic);
    }

    #[test]
    fn lm_tests_reject_non_ols_fit() {
        let w = SpatialWeights::lattice_rook(5, 4).row_normalize().unwrap();
        let spec = crate::simulate::DgpSpec {
            kind: crate::estimators::ModelKind::Sar,
            rho: 0.4,
            lambda: 0.0,
            beta: vec![1.0],
            theta: vec![],
            sigma: 1.0,
            seed: 5,
        };
        let data = crate::simulate::generate(&spec, &w).unwrap();
        let sar = crate::estimators::fit_sar(
            &data,
            &w,
            &crate::estimators::FitOptions::default(),
        )
        .unwrap();
        assert!(matches!(
            lm_tests(&data, &sar, &w),
            Err(Error::WrongModel { .. })
        ));
        let ols = crate::estimators::fit_ols(&data).unwrap();
        let res = lm_tests(&data, &ols, &w).unwrap();
        assert!(res.lm_lag.statistic >= 0.0);
        assert!(res.lm_err.statistic >= 0.0);
        assert!(res.robust_lm_lag.statistic >= 0.0);
        assert!(res.robust_lm_err.statistic >= 0.0);
    }

    #[test]
    fn lm_tests_require_connectivity() {
        let units: Vec<String> = (0..8).map(|i| i.to_string()).collect();
        let w = SpatialWeights::from_edge_list_with_units(&units, &[], false).unwrap();
        let y: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let x: Vec<f64> = (0..8).map(|i| (i * i) as f64).collect();
        let data = Dataset::new(
            units,
            "y".into(),
            DVector::from_vec(y),
            vec!["x1".into()],
            nalgebra::DMatrix::from_column_slice(8, 1, &x),
        )
        .unwrap();
        let ols = crate::estimators::fit_ols(&data).unwrap();
        // Raw all-zero weights: normalization check fires first on Raw, so
        // row-normalize (a no-op here) to reach the connectivity check.
        let wn = w.row_normalize().unwrap();
        assert!(matches!(
            lm_tests(&data, &ols, &wn),
            Err(Error::NoConnectivity)
        ));
    }
}
