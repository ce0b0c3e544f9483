//! Local spillovers: the spatial lag W X as neighbour averages, and the
//! SLX decomposition where direct and indirect impacts are just the
//! coefficients on X and W X.
//!
//! Run with: cargo run --example local_spillovers

use nalgebra::DMatrix;
use spatialecon::estimators::{fit_slx, ModelKind};
use spatialecon::impacts::impacts_summary;
use spatialecon::simulate::{generate, DgpSpec};
use spatialecon::weights::SpatialWeights;
use spatialecon::Result;

fn main() -> Result<()> {
    let units: Vec<String> = (1..=5).map(|i| i.to_string()).collect();
    let edges: Vec<(String, String, Option<f64>)> =
        [(1, 2), (1, 4), (2, 3), (2, 5), (3, 4), (4, 5)]
            .iter()
            .map(|&(a, b)| (a.to_string(), b.to_string(), None))
            .collect();
    let w = SpatialWeights::from_edge_list_with_units(&units, &edges, true)?.row_normalize()?;

    // Two covariates over the five units. With row-normalized contiguity
    // weights, each lagged value is the plain mean among neighbours.
    let x = DMatrix::from_row_slice(
        5,
        2,
        &[3.0, 120.0, 4.0, 140.0, 1.0, 200.0, 8.0, 70.0, 5.0, 250.0],
    );
    let wx = w.spatial_lag(&x)?;
    println!("covariates X and their spatial lags WX (neighbour means):");
    for i in 0..5 {
        println!(
            "  unit {}: x = ({:5.1}, {:6.1})   Wx = ({:5.1}, {:6.1})",
            i + 1,
            x[(i, 0)],
            x[(i, 1)],
            wx[(i, 0)],
            wx[(i, 1)]
        );
    }

    // An SLX fit on simulated data: theta measures how neighbours'
    // covariates move the focal outcome, with no feedback loops involved.
    let lattice = SpatialWeights::lattice_rook(20, 20).row_normalize()?;
    let spec = DgpSpec {
        kind: ModelKind::Slx,
        rho: 0.0,
        lambda: 0.0,
        beta: vec![0.5, -0.25],
        theta: vec![0.3, 0.6],
        sigma: 1.0,
        seed: 42,
    };
    let data = generate(&spec, &lattice)?;
    let fit = fit_slx(&data, &lattice, None)?;
    println!("\nSLX fit on a 20x20 lattice (truth: beta = (0.5, -0.25), theta = (0.3, 0.6)):");
    for (name, est) in fit.covariate_names.iter().zip(&fit.beta) {
        println!("  beta[{name}]  = {est:7.4}");
    }
    for (name, est) in fit.theta_names.iter().zip(&fit.theta) {
        println!("  theta[{name}] = {est:7.4}");
    }

    let impacts = impacts_summary(&fit, &lattice)?;
    println!("\nlocal impacts (direct = beta, indirect = theta, exactly):");
    for row in &impacts.rows {
        println!(
            "  {:>3}: direct {:7.4}  indirect {:7.4}  total {:7.4}",
            row.covariate, row.direct, row.indirect, row.total
        );
    }
    Ok(())
}
