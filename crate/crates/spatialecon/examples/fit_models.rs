//! Fit the whole model family to one simulated dataset and compare
//! log-likelihoods, AIC, and likelihood-ratio tests against OLS.
//!
//! Run with: cargo run --example fit_models

use spatialecon::estimators::{
    fit_ols, fit_sar, fit_sdem, fit_sdm, fit_sem, fit_slx, lr_test, FitOptions, FitResult,
    ModelKind,
};
use spatialecon::simulate::{generate, DgpSpec};
use spatialecon::weights::SpatialWeights;
use spatialecon::Result;

fn main() -> Result<()> {
    // A lag process on a 20x20 lattice: rho = 0.5, beta = (1, -1).
    let w = SpatialWeights::lattice_rook(20, 20).row_normalize()?;
    let spec = DgpSpec {
        kind: ModelKind::Sar,
        rho: 0.5,
        lambda: 0.0,
        beta: vec![1.0, -1.0],
        theta: vec![],
        sigma: 1.0,
        seed: 314,
    };
    let data = generate(&spec, &w)?;
    println!("data: n = {}, truth rho = 0.5, beta = (1, -1)\n", data.n());

    let opts = FitOptions::default();
    let ols = fit_ols(&data)?;
    let fits: Vec<FitResult> = vec![
        ols.clone(),
        fit_slx(&data, &w, None)?,
        fit_sar(&data, &w, &opts)?,
        fit_sem(&data, &w, &opts)?,
        fit_sdm(&data, &w, &opts, None)?,
        fit_sdem(&data, &w, &opts, None)?,
    ];

    println!(
        "{:<6} {:>9} {:>9} {:>8} {:>8} {:>10} {:>10} {:>12}",
        "model", "beta1", "beta2", "rho", "lambda", "loglik", "AIC", "LR vs OLS"
    );
    for fit in &fits {
        let lr = if fit.model == ModelKind::Ols {
            "-".to_string()
        } else {
            let t = lr_test(&ols, fit)?;
            format!("{:.1} (p={:.3})", t.statistic, t.p_value)
        };
        println!(
            "{:<6} {:>9.4} {:>9.4} {:>8} {:>8} {:>10.2} {:>10.2} {:>12}",
            fit.model.name(),
            fit.beta[0],
            fit.beta[1],
            fit.rho.map_or("-".into(), |r| format!("{r:.4}")),
            fit.lambda.map_or("-".into(), |l| format!("{l:.4}")),
            fit.loglik,
            fit.aic,
            lr
        );
    }

    let best = fits
        .iter()
        .min_by(|a, b| a.aic.partial_cmp(&b.aic).unwrap())
        .unwrap();
    println!("\nlowest AIC: {} (the process that generated the data)", best.model);
    println!("standard errors come from the numerical Hessian of the full likelihood;");
    let sar = &fits[2];
    println!(
        "e.g. rho = {:.4} with SE {:.4}",
        sar.rho.unwrap(),
        sar.std_error_of("rho").unwrap()
    );
    Ok(())
}
