//! Small dense linear-algebra helpers shared across modules.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Least squares solve of `X b = y` via column-pivoted QR with a rank check.
///
/// Returns the coefficient vector; a numerically rank-deficient design is
/// rejected rather than silently regularized.
pub fn lstsq(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    let (n, p) = x.shape();
    if y.len() != n {
        return Err(Error::ShapeError(format!(
            "design has {n} rows but response has {} entries",
            y.len()
        )));
    }
    if n < p {
        return Err(Error::SingularDesign);
    }
    let qr = x.clone().col_piv_qr();
    // Rank test on the diagonal of R, relative to its largest element.
    let r = qr.r();
    let dmax = (0..p).map(|i| r[(i, i)].abs()).fold(0.0_f64, f64::max);
    let tol = dmax * (n.max(p) as f64) * f64::EPSILON;
    if dmax == 0.0 || (0..p).any(|i| r[(i, i)].abs() <= tol) {
        return Err(Error::SingularDesign);
    }
    // X P = Q R, so the minimizer is P (R^-1 (Q' y)).
    let qty = qr.q().transpose() * y;
    let mut z = r
        .solve_upper_triangular(&qty)
        .ok_or(Error::SingularDesign)?;
    qr.p().inv_permute_rows(&mut z);
    Ok(z)
}

/// Inverse of X'X, used for classical least-squares covariance matrices.
pub fn xtx_inverse(x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let xtx = x.transpose() * x;
    xtx.try_inverse().ok_or(Error::SingularDesign)
}

/// Symmetrize and clip negative eigenvalues at zero, returning a factor L
/// with L L' equal to the repaired matrix. Fails when the matrix is
/// indefinite beyond numerical noise.
pub fn psd_factor(v: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let p = v.nrows();
    if v.ncols() != p {
        return Err(Error::BadCovariance);
    }
    if v.iter().any(|e| !e.is_finite()) {
        return Err(Error::BadCovariance);
    }
    let sym = (v + v.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let lam_max = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    let floor = -1e-8 * lam_max.max(1.0);
    if eig.eigenvalues.iter().any(|&l| l < floor) {
        return Err(Error::BadCovariance);
    }
    let mut l = eig.eigenvectors.clone();
    for j in 0..p {
        let s = eig.eigenvalues[j].max(0.0).sqrt();
        for i in 0..p {
            l[(i, j)] *= s;
        }
    }
    Ok(l)
}

/// Empirical quantile with linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    if sorted.len() == 1 {
        return sorted[0];
    }
    let h = q * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

/// Upper-tail chi-square probability P(X > x) with `df` degrees of freedom.
pub fn chi_sq_sf(x: f64, df: f64) -> f64 {
    if df <= 0.0 {
        // Degenerate test with no free parameters.
        return if x > 0.0 { 0.0 } else { 1.0 };
    }
    if x <= 0.0 {
        return 1.0;
    }
    statrs::function::gamma::gamma_ur(df / 2.0, x / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn lstsq_exact_line() {
        let x = DMatrix::from_row_slice(4, 2, &[1.0, 0.0, 1.0, 1.0, 1.0, 2.0, 1.0, 3.0]);
        let y = DVector::from_vec(vec![2.0, 5.0, 8.0, 11.0]);
        let b = lstsq(&x, &y).unwrap();
        assert_relative_eq!(b[0], 2.0, epsilon = 1e-12);
        assert_relative_eq!(b[1], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn lstsq_rejects_collinear() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 2.0, 4.0, 3.0, 6.0]);
        let y = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        assert!(matches!(lstsq(&x, &y), Err(Error::SingularDesign)));
    }

    #[test]
    fn chi_sq_sf_reference_values() {
        // P(chi2_1 > 3.841) ~ 0.05
        assert_relative_eq!(chi_sq_sf(3.841458820694124, 1.0), 0.05, epsilon = 1e-10);
        assert_relative_eq!(chi_sq_sf(5.991464547107979, 2.0), 0.05, epsilon = 1e-10);
    }

    #[test]
    fn quantile_interpolates() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_relative_eq!(quantile(&v, 0.5), 2.5);
        assert_relative_eq!(quantile(&v, 0.0), 1.0);
        assert_relative_eq!(quantile(&v, 1.0), 4.0);
    }
}
