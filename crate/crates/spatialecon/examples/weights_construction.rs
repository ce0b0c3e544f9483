//! Ways to build a weights matrix: edge lists, k nearest neighbours, and
//! inverse distance with a cutoff, plus island handling and normalization.
//!
//! Run with: cargo run --example weights_construction

use spatialecon::weights::SpatialWeights;
use spatialecon::Result;

fn main() -> Result<()> {
    // Contiguity from an edge list; an isolated unit shows up as an island.
    let units: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
    let edges = vec![
        ("a".to_string(), "b".to_string(), None),
        ("b".to_string(), "c".to_string(), None),
    ];
    let w = SpatialWeights::from_edge_list_with_units(&units, &edges, true)?;
    let islands = w.detect_islands();
    println!(
        "edge list: n = {}, {} stored weights, islands = {:?}",
        w.n(),
        w.entry_count(),
        islands.island_ids
    );
    let (dropped, _) = w.drop_islands();
    println!("after dropping islands: n = {}", dropped.n());

    // k nearest neighbours never produce islands; ties break to the lower
    // unit index.
    let coords: Vec<(f64, f64)> = vec![
        (0.0, 0.0),
        (1.0, 0.2),
        (2.1, -0.1),
        (0.4, 1.8),
        (1.6, 1.4),
        (3.0, 1.0),
    ];
    let knn = SpatialWeights::knn_weights(&coords, 2)?;
    println!("\nknn (k = 2): every row has exactly 2 neighbours");
    for i in 0..knn.n() {
        let neighbours: Vec<usize> = knn.row(i).map(|(j, _)| j).collect();
        println!("  unit {i} -> {neighbours:?}");
    }

    // Inverse distance with a cutoff keeps only proximate pairs and decays
    // smoothly; eigen normalization preserves the cross-row proportions
    // that row normalization would distort.
    let idw = SpatialWeights::inverse_distance_weights(&coords, 2.0, 2.0)?;
    println!(
        "\ninverse-distance (alpha = 2, cutoff = 2): {} weights, largest eigenvalue {:.4}",
        idw.entry_count(),
        idw.largest_eigenvalue_magnitude()?
    );
    let eigen = idw.eigen_normalize()?;
    println!(
        "eigen-normalized: spectral radius {:.6}, proportions preserved",
        eigen.spectral_radius()
    );
    let row = idw.row_normalize()?;
    println!(
        "row-normalized: S0 = {:.4} equals the number of non-island units",
        row.s0()
    );
    Ok(())
}
