//! Why spatial dependence matters for plain OLS: on lag-process data the
//! omitted spatial lag acts like an omitted variable, and the bias sign
//! follows rho times Cov(x, Wy).
//!
//! Run with: cargo run --example ols_bias

use spatialecon::estimators::{fit_sar, FitOptions, ModelKind};
use spatialecon::rng::derive_seed;
use spatialecon::simulate::{generate, ols_bias_experiment, DgpSpec};
use spatialecon::weights::SpatialWeights;
use spatialecon::Result;

fn main() -> Result<()> {
    let w = SpatialWeights::lattice_rook(20, 20).row_normalize()?;
    let spec = DgpSpec {
        kind: ModelKind::Sar,
        rho: 0.5,
        lambda: 0.0,
        beta: vec![1.0],
        theta: vec![],
        sigma: 1.0,
        seed: 1000,
    };

    let reps = 300;
    let report = ols_bias_experiment(&spec, &w, reps)?;
    println!("non-spatial OLS on lag-process data ({reps} replications, truth beta = 1):");
    println!(
        "  mean OLS beta   {:.4}  (bias {:+.4}, MC se {:.4})",
        report.mean_beta_ols[0], report.mean_bias[0], report.mc_se[0]
    );
    println!(
        "  mean Cov(x, Wy) {:.4}; sign of bias matches rho * Cov(x, Wy): {}",
        report.mean_cov_x_wy[0], report.sign_agreement[0]
    );

    // The same replications fitted by concentrated maximum likelihood.
    let mut mean_ml = 0.0;
    for r in 0..reps {
        let mut rep_spec = spec.clone();
        rep_spec.seed = derive_seed(spec.seed, "bias-rep", r as u64);
        let data = generate(&rep_spec, &w)?;
        mean_ml += fit_sar(&data, &w, &FitOptions::default())?.beta[0] / reps as f64;
    }
    println!("\nthe lag model on the same draws:");
    println!("  mean ML beta    {:.4}  (bias {:+.4})", mean_ml, mean_ml - 1.0);
    println!("\naccounting for the lag removes the omitted-variable distortion;");
    println!("with rho = 0 the two estimators coincide and neither is biased.");
    Ok(())
}
