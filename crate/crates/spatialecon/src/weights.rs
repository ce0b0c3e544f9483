//! Sparse spatial weights matrices: construction, validation, normalization,
//! and spatial lags.
//!
//! A weights matrix W is an n x n sparse matrix whose entry w_ij encodes the
//! connectivity between units i and j. Diagonal entries are always zero (no
//! unit is a neighbour of itself) and stored weights are strictly positive.
//! Matrices are stored as coordinate triplets compiled into a row-compressed
//! form for products, and are immutable after construction.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Normalization state of a weights matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Weights as constructed.
    Raw,
    /// Each non-zero weight divided by its row sum; spatial lags are
    /// neighbour averages.
    Row,
    /// Every weight divided by the largest-magnitude eigenvalue of the raw
    /// matrix; proportions across rows are preserved.
    Eigen,
}

impl std::fmt::Display for Normalization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Normalization::Raw => write!(f, "raw"),
            Normalization::Row => write!(f, "row"),
            Normalization::Eigen => write!(f, "eigen"),
        }
    }
}

/// Units with no neighbours (all-zero rows of W).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IslandReport {
    pub island_indices: Vec<usize>,
    pub island_ids: Vec<String>,
    pub count: usize,
}

impl IslandReport {
    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
}

/// An input edge: (source id, destination id, optional weight).
/// A missing weight defaults to 1 (binary contiguity).
pub type Edge = (String, String, Option<f64>);

/// Sparse n x n spatial connectivity matrix.
#[derive(Debug, Clone)]
pub struct SpatialWeights {
    n: usize,
    ids: Vec<String>,
    id_index: HashMap<String, usize>,
    // CSR storage of the (possibly normalized) weights.
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
    normalization: Normalization,
    // Whether the matrix was symmetric before normalization. Together with
    // the row sums this lets the spectrum be computed from a similar
    // symmetric matrix even after row normalization.
    raw_symmetric: bool,
    row_scale: Option<Vec<f64>>,
    spectrum: OnceLock<Vec<Complex<f64>>>,
}

impl SpatialWeights {
    fn from_triplets(
        ids: Vec<String>,
        triplets: BTreeMap<(usize, usize), f64>,
        normalization: Normalization,
        raw_symmetric: Option<bool>,
        row_scale: Option<Vec<f64>>,
    ) -> Self {
        let n = ids.len();
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        for (&(i, j), &w) in &triplets {
            debug_assert!(i < n && j < n && i != j && w > 0.0);
            row_ptr[i + 1] += 1;
            col_idx.push(j);
            values.push(w);
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let id_index = ids
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let mut w = SpatialWeights {
            n,
            ids,
            id_index,
            row_ptr,
            col_idx,
            values,
            normalization,
            raw_symmetric: false,
            row_scale,
            spectrum: OnceLock::new(),
        };
        w.raw_symmetric = raw_symmetric.unwrap_or_else(|| w.is_symmetric_within(1e-12));
        w
    }

    /// Build a raw weights matrix from an edge list. Unit identifiers are
    /// registered in order of first appearance; a row with a zero-weight
    /// self-loop registers the unit without adding an edge, which is how
    /// islands survive the edge-list file format.
    pub fn from_edge_list(pairs: &[Edge], symmetrize: bool) -> Result<SpatialWeights> {
        Self::from_edge_list_with_units(&[], pairs, symmetrize)
    }

    /// As [`from_edge_list`](Self::from_edge_list), with an explicit unit
    /// universe so that units without any edges are retained as islands.
    pub fn from_edge_list_with_units(
        units: &[String],
        pairs: &[Edge],
        symmetrize: bool,
    ) -> Result<SpatialWeights> {
        let mut ids: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let intern = |s: &String, ids: &mut Vec<String>, index: &mut HashMap<String, usize>| {
            *index.entry(s.clone()).or_insert_with(|| {
                ids.push(s.clone());
                ids.len() - 1
            })
        };
        for u in units {
            intern(u, &mut ids, &mut index);
        }
        // Source ids first, destinations after: a canonical file (one src
        // block per unit, islands as zero self-loops) round-trips with its
        // unit order intact.
        for (src, _, _) in pairs {
            intern(src, &mut ids, &mut index);
        }
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        let mut triplets: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (src, dst, weight) in pairs {
            let i = intern(src, &mut ids, &mut index);
            let j = intern(dst, &mut ids, &mut index);
            let w = weight.unwrap_or(1.0);
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeight(format!(
                    "edge ({src}, {dst}) has weight {w}; weights must be finite and non-negative"
                )));
            }
            if i == j {
                if w != 0.0 {
                    return Err(Error::InvalidWeight(format!(
                        "self-loop ({src}, {src}) with nonzero weight {w}; diagonal must be zero"
                    )));
                }
                // Zero self-loop: declares the unit, stores nothing.
                continue;
            }
            if !seen.insert((i, j)) {
                return Err(Error::DuplicateEdge(src.clone(), dst.clone()));
            }
            if w > 0.0 {
                triplets.insert((i, j), w);
            }
        }
        if symmetrize {
            let forward: Vec<((usize, usize), f64)> =
                triplets.iter().map(|(&k, &v)| (k, v)).collect();
            for ((i, j), w) in forward {
                triplets.entry((j, i)).or_insert(w);
            }
        }
        Ok(Self::from_triplets(ids, triplets, Normalization::Raw, None, None))
    }

    /// Build a raw weights matrix from index triplets (ids are the indices).
    pub fn from_entries(n: usize, entries: &[(usize, usize, f64)]) -> Result<SpatialWeights> {
        let ids: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut triplets = BTreeMap::new();
        for &(i, j, w) in entries {
            if i >= n || j >= n {
                return Err(Error::ShapeError(format!(
                    "entry ({i}, {j}) out of range for n = {n}"
                )));
            }
            if i == j {
                if w != 0.0 {
                    return Err(Error::InvalidWeight(format!(
                        "self-loop at index {i} with nonzero weight"
                    )));
                }
                continue;
            }
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::InvalidWeight(format!(
                    "entry ({i}, {j}) has weight {w}; stored weights must be strictly positive"
                )));
            }
            if triplets.insert((i, j), w).is_some() {
                return Err(Error::DuplicateEdge(i.to_string(), j.to_string()));
            }
        }
        Ok(Self::from_triplets(ids, triplets, Normalization::Raw, None, None))
    }

    /// k-nearest-neighbour weights from planar coordinates. Each row gets
    /// exactly k unit-weight entries; distance ties break towards the lower
    /// unit index, and the result is island-free by construction.
    pub fn knn_weights(coords: &[(f64, f64)], k: usize) -> Result<SpatialWeights> {
        let ids: Vec<String> = (0..coords.len()).map(|i| i.to_string()).collect();
        Self::knn_weights_with_ids(&ids, coords, k)
    }

    pub fn knn_weights_with_ids(
        ids: &[String],
        coords: &[(f64, f64)],
        k: usize,
    ) -> Result<SpatialWeights> {
        let n = coords.len();
        if ids.len() != n {
            return Err(Error::ShapeError(format!(
                "{} ids for {} coordinates",
                ids.len(),
                n
            )));
        }
        if k == 0 || k >= n {
            return Err(Error::InvalidK { k, n });
        }
        if coords.iter().any(|&(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::ConfigError("non-finite coordinate".into()));
        }
        let mut triplets = BTreeMap::new();
        for i in 0..n {
            let mut dists: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (sq_dist(coords[i], coords[j]), j))
                .collect();
            dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for &(_, j) in dists.iter().take(k) {
                triplets.insert((i, j), 1.0);
            }
        }
        Ok(Self::from_triplets(
            ids.to_vec(),
            triplets,
            Normalization::Raw,
            None,
            None,
        ))
    }

    /// Inverse-distance weights w_ij = d_ij^(-alpha) for 0 < d_ij <= cutoff.
    pub fn inverse_distance_weights(
        coords: &[(f64, f64)],
        alpha: f64,
        cutoff: f64,
    ) -> Result<SpatialWeights> {
        let ids: Vec<String> = (0..coords.len()).map(|i| i.to_string()).collect();
        Self::inverse_distance_weights_with_ids(&ids, coords, alpha, cutoff)
    }

    pub fn inverse_distance_weights_with_ids(
        ids: &[String],
        coords: &[(f64, f64)],
        alpha: f64,
        cutoff: f64,
    ) -> Result<SpatialWeights> {
        let n = coords.len();
        if ids.len() != n {
            return Err(Error::ShapeError(format!(
                "{} ids for {} coordinates",
                ids.len(),
                n
            )));
        }
        if !(alpha > 0.0) || !(cutoff > 0.0) {
            return Err(Error::ConfigError(
                "inverse-distance weights require alpha > 0 and cutoff > 0".into(),
            ));
        }
        if coords.iter().any(|&(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::ConfigError("non-finite coordinate".into()));
        }
        let mut triplets = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let d = sq_dist(coords[i], coords[j]).sqrt();
                if d == 0.0 {
                    return Err(Error::ZeroDistance(ids[i].clone(), ids[j].clone()));
                }
                if d <= cutoff {
                    triplets.insert((i, j), d.powf(-alpha));
                }
            }
        }
        Ok(Self::from_triplets(
            ids.to_vec(),
            triplets,
            Normalization::Raw,
            None,
            None,
        ))
    }

    /// Binary rook-contiguity weights on a rows x cols grid, in row-major
    /// unit order. Handy as a regular-lattice test bed.
    pub fn lattice_rook(rows: usize, cols: usize) -> SpatialWeights {
        let n = rows * cols;
        let ids: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut triplets = BTreeMap::new();
        for r in 0..rows {
            for c in 0..cols {
                let i = r * cols + c;
                if c + 1 < cols {
                    triplets.insert((i, i + 1), 1.0);
                    triplets.insert((i + 1, i), 1.0);
                }
                if r + 1 < rows {
                    triplets.insert((i, i + cols), 1.0);
                    triplets.insert((i + cols, i), 1.0);
                }
            }
        }
        Self::from_triplets(ids, triplets, Normalization::Raw, Some(true), None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.id_index.get(id).copied()
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn entry_count(&self) -> usize {
        self.values.len()
    }

    /// Sum of all weights, S0.
    pub fn s0(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Iterate stored entries as (row, col, weight) in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |p| (i, self.col_idx[p], self.values[p]))
        })
    }

    /// Entries of row i as (col, weight).
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |p| (self.col_idx[p], self.values[p]))
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.row_ptr[i + 1] - self.row_ptr[i]
    }

    /// Weight at (i, j), zero when not stored.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        match self.col_idx[lo..hi].binary_search(&j) {
            Ok(p) => self.values[lo + p],
            Err(_) => 0.0,
        }
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.row(i).map(|(_, w)| w).sum()
    }

    pub fn is_symmetric_within(&self, tol: f64) -> bool {
        self.entries().all(|(i, j, w)| {
            let wt = self.get(j, i);
            (w - wt).abs() <= tol * w.abs().max(wt.abs()).max(1.0)
        })
    }

    /// Row normalization: each non-zero weight divided by its row sum.
    /// Island rows stay all-zero. Idempotent; already row-normalized input
    /// is returned unchanged.
    pub fn row_normalize(&self) -> Result<SpatialWeights> {
        match self.normalization {
            Normalization::Row => return Ok(self.clone()),
            Normalization::Eigen => {
                return Err(Error::Normalization(
                    "cannot row-normalize an eigen-normalized matrix; rebuild from raw weights"
                        .into(),
                ))
            }
            Normalization::Raw => {}
        }
        let mut scale = vec![0.0f64; self.n];
        for i in 0..self.n {
            scale[i] = self.row_sum(i);
        }
        let mut triplets = BTreeMap::new();
        for (i, j, w) in self.entries() {
            triplets.insert((i, j), w / scale[i]);
        }
        Ok(Self::from_triplets(
            self.ids.clone(),
            triplets,
            Normalization::Row,
            Some(self.raw_symmetric),
            Some(scale),
        ))
    }

    /// Eigen normalization: every weight divided by the largest-magnitude
    /// eigenvalue of the raw matrix.
    pub fn eigen_normalize(&self) -> Result<SpatialWeights> {
        if self.normalization != Normalization::Raw {
            return Err(Error::Normalization(
                "eigen normalization applies to raw weights".into(),
            ));
        }
        if self.values.is_empty() {
            return Err(Error::NoConnectivity);
        }
        let lambda_max = self.largest_eigenvalue_magnitude()?;
        if lambda_max <= 0.0 {
            return Err(Error::Normalization(
                "largest eigenvalue magnitude is zero; cannot eigen-normalize".into(),
            ));
        }
        let mut triplets = BTreeMap::new();
        for (i, j, w) in self.entries() {
            triplets.insert((i, j), w / lambda_max);
        }
        Ok(Self::from_triplets(
            self.ids.clone(),
            triplets,
            Normalization::Eigen,
            Some(self.raw_symmetric),
            None,
        ))
    }

    /// Largest-magnitude eigenvalue of the (non-negative) matrix, via
    /// shifted power iteration with a dense fallback for n <= 500.
    pub fn largest_eigenvalue_magnitude(&self) -> Result<f64> {
        if self.values.is_empty() {
            return Ok(0.0);
        }
        // Non-negative matrix: the spectral radius is the Perron root, and
        // shifting by c >= radius makes it strictly dominant.
        let c = (0..self.n).map(|i| self.row_sum(i)).fold(0.0f64, f64::max);
        let mut v = DVector::from_element(self.n, 1.0 / (self.n as f64).sqrt());
        let mut rayleigh = 0.0f64;
        let mut converged = false;
        for _ in 0..20_000 {
            let mut u = self.lag_vector(&v);
            u.axpy(c, &v, 1.0);
            let r = v.dot(&u);
            let norm = u.norm();
            if norm == 0.0 {
                break;
            }
            v = u / norm;
            if (r - rayleigh).abs() <= 1e-12 * r.abs().max(1.0) {
                rayleigh = r;
                converged = true;
                break;
            }
            rayleigh = r;
        }
        if converged {
            // Residual certificate on the shifted matrix.
            let mut u = self.lag_vector(&v);
            u.axpy(c, &v, 1.0);
            let resid = (&u - &v * rayleigh).amax();
            if resid <= 1e-9 * rayleigh.abs().max(1.0) {
                return Ok(rayleigh - c);
            }
        }
        if self.n <= 500 {
            let dense = self.to_dense();
            let max = dense
                .complex_eigenvalues()
                .iter()
                .map(|z| z.norm())
                .fold(0.0f64, f64::max);
            Ok(max)
        } else {
            Err(Error::Normalization(
                "power iteration did not converge and n exceeds the dense fallback limit".into(),
            ))
        }
    }

    /// Spatial lag W x of a column vector.
    pub fn lag_vector(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.n);
        for i in 0..self.n {
            let mut acc = 0.0;
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[p] * x[self.col_idx[p]];
            }
            out[i] = acc;
        }
        out
    }

    /// Spatial lag W X of an n x k matrix.
    pub fn spatial_lag(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if x.nrows() != self.n {
            return Err(Error::ShapeError(format!(
                "weights are {0} x {0} but the matrix has {1} rows",
                self.n,
                x.nrows()
            )));
        }
        let k = x.ncols();
        let mut out = DMatrix::zeros(self.n, k);
        for i in 0..self.n {
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                let w = self.values[p];
                let j = self.col_idx[p];
                for c in 0..k {
                    out[(i, c)] += w * x[(j, c)];
                }
            }
        }
        Ok(out)
    }

    /// Units with zero out-degree.
    pub fn detect_islands(&self) -> IslandReport {
        let island_indices: Vec<usize> =
            (0..self.n).filter(|&i| self.out_degree(i) == 0).collect();
        let island_ids = island_indices.iter().map(|&i| self.ids[i].clone()).collect();
        IslandReport {
            count: island_indices.len(),
            island_indices,
            island_ids,
        }
    }

    /// Drop island units entirely, re-indexing the remainder. Returns the
    /// reduced matrix and the report of what was dropped.
    pub fn drop_islands(&self) -> (SpatialWeights, IslandReport) {
        let report = self.detect_islands();
        if report.is_empty() {
            return (self.clone(), report);
        }
        let keep: Vec<usize> = (0..self.n).filter(|&i| self.out_degree(i) > 0).collect();
        let mut remap = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let ids: Vec<String> = keep.iter().map(|&i| self.ids[i].clone()).collect();
        let mut triplets = BTreeMap::new();
        for (i, j, w) in self.entries() {
            if remap[i] != usize::MAX && remap[j] != usize::MAX {
                triplets.insert((remap[i], remap[j]), w);
            }
        }
        let row_scale = self
            .row_scale
            .as_ref()
            .map(|s| keep.iter().map(|&i| s[i]).collect());
        (
            Self::from_triplets(
                ids,
                triplets,
                self.normalization,
                Some(self.raw_symmetric),
                row_scale,
            ),
            report,
        )
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for (i, j, w) in self.entries() {
            m[(i, j)] = w;
        }
        m
    }

    /// Full spectrum of W, computed once and cached. Row-normalized
    /// matrices built from symmetric raw weights use a similar symmetric
    /// matrix, so their (real) spectrum comes from a symmetric eigensolver;
    /// anything else falls back to a dense Schur decomposition.
    pub fn eigenvalues(&self) -> &[Complex<f64>] {
        self.spectrum.get_or_init(|| self.compute_eigenvalues())
    }

    fn compute_eigenvalues(&self) -> Vec<Complex<f64>> {
        if self.values.is_empty() {
            return vec![Complex::new(0.0, 0.0); self.n];
        }
        if let Some(sym) = self.symmetric_similar() {
            let eig = sym.symmetric_eigen();
            let mut out: Vec<Complex<f64>> = eig
                .eigenvalues
                .iter()
                .map(|&l| Complex::new(l, 0.0))
                .collect();
            out.resize(self.n, Complex::new(0.0, 0.0));
            return out;
        }
        self.to_dense().complex_eigenvalues().iter().copied().collect()
    }

    // A dense symmetric matrix with the same nonzero spectrum as W, when one
    // is cheaply available. Island units contribute zero eigenvalues and are
    // excluded from the block.
    fn symmetric_similar(&self) -> Option<DMatrix<f64>> {
        if self.is_symmetric_within(1e-12) {
            return Some(self.to_dense());
        }
        if self.normalization == Normalization::Row && self.raw_symmetric {
            let scale = self.row_scale.as_ref()?;
            let active: Vec<usize> = (0..self.n).filter(|&i| scale[i] > 0.0).collect();
            let pos = {
                let mut pos = vec![usize::MAX; self.n];
                for (p, &i) in active.iter().enumerate() {
                    pos[i] = p;
                }
                pos
            };
            let m = active.len();
            let mut b = DMatrix::zeros(m, m);
            for (i, j, w) in self.entries() {
                if pos[i] == usize::MAX || pos[j] == usize::MAX {
                    return None;
                }
                // D^{1/2} W D^{-1/2} with D the raw row sums.
                b[(pos[i], pos[j])] = w * (scale[i] / scale[j]).sqrt();
            }
            // Symmetric up to rounding in the reconstruction.
            let b = (&b + b.transpose()) * 0.5;
            return Some(b);
        }
        None
    }

    /// Largest eigenvalue modulus of the current matrix.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues()
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max)
    }

    /// Write the canonical edge-list CSV (`src,dst,weight`), sorted by unit
    /// index. Islands are recorded as a zero-weight self-loop so the unit
    /// universe survives a round-trip.
    pub fn write_edge_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut wtr = csv::Writer::from_path(path)?;
        wtr.write_record(["src", "dst", "weight"])?;
        for i in 0..self.n {
            if self.out_degree(i) == 0 {
                wtr.write_record([self.ids[i].as_str(), self.ids[i].as_str(), "0"])?;
            } else {
                for (j, w) in self.row(i) {
                    wtr.write_record([
                        self.ids[i].as_str(),
                        self.ids[j].as_str(),
                        &format!("{w}"),
                    ])?;
                }
            }
        }
        wtr.flush()?;
        Ok(())
    }

    /// Read an edge-list CSV with header `src,dst,weight` (weight optional,
    /// default 1). The result is marked raw regardless of how the file was
    /// produced.
    pub fn read_edge_csv<P: AsRef<Path>>(path: P, symmetrize: bool) -> Result<SpatialWeights> {
        let mut rdr = csv::ReaderBuilder::new().flexible(true).from_path(path)?;
        let headers = rdr.headers()?.clone();
        let src_col = find_column(&headers, "src")?;
        let dst_col = find_column(&headers, "dst")?;
        let w_col = headers.iter().position(|h| h.trim() == "weight");
        let mut pairs: Vec<Edge> = Vec::new();
        for record in rdr.records() {
            let record = record?;
            let src = record
                .get(src_col)
                .ok_or_else(|| Error::ConfigError("missing src field".into()))?
                .trim()
                .to_string();
            let dst = record
                .get(dst_col)
                .ok_or_else(|| Error::ConfigError("missing dst field".into()))?
                .trim()
                .to_string();
            let weight = match w_col.and_then(|c| record.get(c)) {
                None => None,
                Some(s) if s.trim().is_empty() => None,
                Some(s) => Some(s.trim().parse::<f64>().map_err(|_| {
                    Error::ConfigError(format!("unparseable weight '{s}' for edge ({src}, {dst})"))
                })?),
            };
            pairs.push((src, dst, weight));
        }
        Self::from_edge_list(&pairs, symmetrize)
    }
}

fn find_column(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| Error::ConfigError(format!("edge file is missing the '{name}' column")))
}

fn sq_dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    dx * dx + dy * dy
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn worked_example_raw() -> SpatialWeights {
        let units: Vec<String> = (1..=5).map(|i| i.to_string()).collect();
        let edges: Vec<Edge> = [(1, 2), (1, 4), (2, 3), (2, 5), (3, 4), (4, 5)]
            .iter()
            .map(|&(a, b)| (a.to_string(), b.to_string(), None))
            .collect();
        SpatialWeights::from_edge_list_with_units(&units, &edges, true).unwrap()
    }

    #[test]
    fn worked_example_binary_matrix() {
        let w = worked_example_raw();
        assert_eq!(w.n(), 5);
        assert_eq!(w.entry_count(), 12);
        let expected = [
            [0.0, 1.0, 0.0, 1.0, 0.0],
            [1.0, 0.0, 1.0, 0.0, 1.0],
            [0.0, 1.0, 0.0, 1.0, 0.0],
            [1.0, 0.0, 1.0, 0.0, 1.0],
            [0.0, 1.0, 0.0, 1.0, 0.0],
        ];
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(w.get(i, j), expected[i][j], "({i}, {j})");
            }
        }
    }

    #[test]
    fn empty_edge_list_with_units_gives_islands() {
        let units: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let w = SpatialWeights::from_edge_list_with_units(&units, &[], false).unwrap();
        let report = w.detect_islands();
        assert_eq!(report.count, 3);
        assert_eq!(report.island_indices, vec![0, 1, 2]);
    }

    #[test]
    fn nonzero_self_loop_rejected() {
        let pairs = vec![("2".to_string(), "2".to_string(), Some(1.0))];
        assert!(matches!(
            SpatialWeights::from_edge_list(&pairs, false),
            Err(Error::InvalidWeight(_))
        ));
    }

    #[test]
    fn duplicate_edge_rejected() {
        let pairs = vec![
            ("a".to_string(), "b".to_string(), None),
            ("a".to_string(), "b".to_string(), Some(2.0)),
        ];
        assert!(matches!(
            SpatialWeights::from_edge_list(&pairs, false),
            Err(Error::DuplicateEdge(_, _))
        ));
    }

    #[test]
    fn knn_collinear_tie_breaks_to_lower_index() {
        let coords = [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)];
        let w = SpatialWeights::knn_weights(&coords, 1).unwrap();
        let edges: Vec<(usize, usize)> = w.entries().map(|(i, j, _)| (i, j)).collect();
        assert_eq!(edges, vec![(0, 1), (1, 0), (2, 1), (3, 2)]);
        assert!(w.detect_islands().is_empty());
    }

    #[test]
    fn knn_full_graph_and_bounds() {
        let coords = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)];
        let w = SpatialWeights::knn_weights(&coords, 3).unwrap();
        assert_eq!(w.entry_count(), 12);
        assert!(matches!(
            SpatialWeights::knn_weights(&coords, 4),
            Err(Error::InvalidK { .. })
        ));
        assert!(matches!(
            SpatialWeights::knn_weights(&coords, 0),
            Err(Error::InvalidK { .. })
        ));
    }

    #[test]
    fn inverse_distance_formula_and_cutoff() {
        let coords = [(0.0, 0.0), (2.0, 0.0)];
        let w = SpatialWeights::inverse_distance_weights(&coords, 1.0, 10.0).unwrap();
        assert_relative_eq!(w.get(0, 1), 0.5);
        assert_relative_eq!(w.get(1, 0), 0.5);
        let w2 = SpatialWeights::inverse_distance_weights(&coords, 2.0, 10.0).unwrap();
        assert_relative_eq!(w2.get(0, 1), 0.25);
        let far = [(0.0, 0.0), (11.0, 0.0)];
        let w3 = SpatialWeights::inverse_distance_weights(&far, 1.0, 10.0).unwrap();
        assert_eq!(w3.entry_count(), 0);
    }

    #[test]
    fn coincident_points_within_cutoff_rejected() {
        let coords = [(1.0, 1.0), (1.0, 1.0)];
        assert!(matches!(
            SpatialWeights::inverse_distance_weights(&coords, 1.0, 10.0),
            Err(Error::ZeroDistance(_, _))
        ));
    }

    #[test]
    fn row_normalize_worked_example() {
        let w = worked_example_raw().row_normalize().unwrap();
        for &i in &[0usize, 2, 4] {
            let row: Vec<f64> = w.row(i).map(|(_, v)| v).collect();
            assert_eq!(row.len(), 2);
            for v in row {
                assert_relative_eq!(v, 0.5);
            }
        }
        for &i in &[1usize, 3] {
            let row: Vec<f64> = w.row(i).map(|(_, v)| v).collect();
            assert_eq!(row.len(), 3);
            for v in row {
                assert_relative_eq!(v, 1.0 / 3.0);
            }
        }
        // Idempotent.
        let again = w.row_normalize().unwrap();
        for ((i, j, a), (_, _, b)) in w.entries().zip(again.entries()) {
            assert_eq!(a, b, "entry ({i}, {j}) changed");
        }
    }

    #[test]
    fn row_normalize_leaves_island_rows_zero() {
        let w = SpatialWeights::from_entries(3, &[(0, 1, 2.0), (1, 0, 1.0)])
            .unwrap()
            .row_normalize()
            .unwrap();
        assert_eq!(w.out_degree(2), 0);
        assert_relative_eq!(w.row_sum(0), 1.0, epsilon = 1e-12);
        assert_relative_eq!(w.row_sum(1), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn s0_equals_n_for_row_normalized_without_islands() {
        let w = SpatialWeights::lattice_rook(6, 7).row_normalize().unwrap();
        assert_relative_eq!(w.s0(), 42.0, epsilon = 1e-10);
    }

    #[test]
    fn eigen_normalize_worked_example() {
        // Complete bipartite 3 + 2 structure: largest eigenvalue sqrt(6).
        let w = worked_example_raw().eigen_normalize().unwrap();
        let expected = 1.0 / 6.0f64.sqrt();
        for (_, _, v) in w.entries() {
            assert_relative_eq!(v, expected, epsilon = 1e-10);
        }
        assert_relative_eq!(w.spectral_radius(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn eigen_normalize_two_cycle() {
        let w = SpatialWeights::from_entries(2, &[(0, 1, 1.0), (1, 0, 1.0)])
            .unwrap()
            .eigen_normalize()
            .unwrap();
        assert_relative_eq!(w.get(0, 1), 1.0, epsilon = 1e-10);
        assert_relative_eq!(w.get(1, 0), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn eigen_normalize_scaling_invariance() {
        let base = worked_example_raw();
        let scaled = SpatialWeights::from_entries(
            5,
            &base
                .entries()
                .map(|(i, j, w)| (i, j, 7.25 * w))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let a = base.eigen_normalize().unwrap();
        let b = scaled.eigen_normalize().unwrap();
        for ((i, j, x), (_, _, y)) in a.entries().zip(b.entries()) {
            assert_relative_eq!(x, y, epsilon = 1e-10, max_relative = 1e-10);
            let _ = (i, j);
        }
    }

    #[test]
    fn eigen_normalize_rejects_empty() {
        let w = SpatialWeights::from_entries(3, &[]).unwrap();
        assert!(matches!(w.eigen_normalize(), Err(Error::NoConnectivity)));
    }

    #[test]
    fn spatial_lag_matches_local_spillover_example() {
        let w = worked_example_raw().row_normalize().unwrap();
        let x = DMatrix::from_row_slice(
            5,
            2,
            &[3.0, 120.0, 4.0, 140.0, 1.0, 200.0, 8.0, 70.0, 5.0, 250.0],
        );
        let wx = w.spatial_lag(&x).unwrap();
        let expected = [
            [6.0, 105.0],
            [3.0, 190.0],
            [6.0, 105.0],
            [3.0, 190.0],
            [6.0, 105.0],
        ];
        for i in 0..5 {
            for c in 0..2 {
                assert_eq!(wx[(i, c)], expected[i][c], "entry ({i}, {c})");
            }
        }
    }

    #[test]
    fn spatial_lag_of_ones_is_ones() {
        let w = SpatialWeights::lattice_rook(5, 5).row_normalize().unwrap();
        let ones = DMatrix::from_element(25, 1, 1.0);
        let lag = w.spatial_lag(&ones).unwrap();
        for i in 0..25 {
            assert_relative_eq!(lag[(i, 0)], 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn spatial_lag_island_row_is_zero() {
        let w = SpatialWeights::from_entries(3, &[(0, 1, 1.0), (1, 0, 1.0)])
            .unwrap()
            .row_normalize()
            .unwrap();
        let x = DMatrix::from_column_slice(3, 1, &[5.0, 7.0, 9.0]);
        let lag = w.spatial_lag(&x).unwrap();
        assert_eq!(lag[(2, 0)], 0.0);
    }

    #[test]
    fn spatial_lag_shape_mismatch() {
        let w = SpatialWeights::lattice_rook(2, 2);
        let x = DMatrix::zeros(3, 1);
        assert!(matches!(w.spatial_lag(&x), Err(Error::ShapeError(_))));
    }

    #[test]
    fn island_detection_cases() {
        assert!(worked_example_raw().detect_islands().is_empty());
        let units: Vec<String> = ["0", "1", "2"].iter().map(|s| s.to_string()).collect();
        let pairs = vec![("0".to_string(), "1".to_string(), None)];
        let w = SpatialWeights::from_edge_list_with_units(&units, &pairs, true).unwrap();
        assert_eq!(w.detect_islands().island_indices, vec![2]);
        let empty = SpatialWeights::from_edge_list_with_units(&units[..2], &[], false).unwrap();
        assert_eq!(empty.detect_islands().island_indices, vec![0, 1]);
    }

    #[test]
    fn rook_lattice_spectrum_is_real_with_radius_one() {
        let w = SpatialWeights::lattice_rook(5, 4).row_normalize().unwrap();
        let eig = w.eigenvalues();
        assert_eq!(eig.len(), 20);
        assert!(eig.iter().all(|z| z.im.abs() < 1e-10));
        assert_relative_eq!(w.spectral_radius(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn edge_csv_round_trips_including_islands() {
        let units: Vec<String> = ["u1", "u2", "u3"].iter().map(|s| s.to_string()).collect();
        let pairs = vec![("u1".to_string(), "u2".to_string(), Some(2.5))];
        let w = SpatialWeights::from_edge_list_with_units(&units, &pairs, true).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.csv");
        w.write_edge_csv(&path).unwrap();
        let back = SpatialWeights::read_edge_csv(&path, false).unwrap();
        assert_eq!(back.n(), 3);
        assert_eq!(back.ids(), w.ids());
        assert_eq!(back.get(0, 1), 2.5);
        assert_eq!(back.get(1, 0), 2.5);
        assert_eq!(back.detect_islands().island_ids, vec!["u3".to_string()]);
    }

    #[test]
    fn drop_islands_reindexes() {
        let units: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let pairs = vec![("a".to_string(), "c".to_string(), None)];
        let w = SpatialWeights::from_edge_list_with_units(&units, &pairs, true).unwrap();
        let (reduced, report) = w.drop_islands();
        assert_eq!(report.island_ids, vec!["b".to_string()]);
        assert_eq!(reduced.n(), 2);
        assert_eq!(reduced.ids(), &["a".to_string(), "c".to_string()]);
        assert_eq!(reduced.get(0, 1), 1.0);
    }

    // Random sparse symmetric-by-construction weights for property checks.
    fn arb_weights(max_n: usize) -> impl Strategy<Value = SpatialWeights> {
        (3usize..max_n)
            .prop_flat_map(|n| {
                let edges = proptest::collection::vec(
                    ((0..n), (0..n), 0.1f64..10.0),
                    1..(3 * n),
                );
                (Just(n), edges)
            })
            .prop_map(|(n, edges)| {
                let mut triplets: BTreeMap<(usize, usize), f64> = BTreeMap::new();
                for (i, j, w) in edges {
                    if i != j {
                        triplets.insert((i, j), w);
                        triplets.insert((j, i), w);
                    }
                }
                let list: Vec<(usize, usize, f64)> =
                    triplets.into_iter().map(|((i, j), w)| (i, j, w)).collect();
                SpatialWeights::from_entries(n, &list).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn prop_row_normalize_rows_sum_to_one(w in arb_weights(24)) {
            let r = w.row_normalize().unwrap();
            for i in 0..r.n() {
                if r.out_degree(i) > 0 {
                    prop_assert!((r.row_sum(i) - 1.0).abs() <= 1e-12);
                } else {
                    prop_assert_eq!(r.row_sum(i), 0.0);
                }
            }
            // Idempotence.
            let rr = r.row_normalize().unwrap();
            for ((_, _, a), (_, _, b)) in r.entries().zip(rr.entries()) {
                prop_assert_eq!(a, b);
            }
        }

        #[test]
        fn prop_sparse_lag_matches_dense_product(w in arb_weights(20)) {
            let n = w.n();
            let x = DMatrix::from_fn(n, 2, |i, c| ((i * 7 + c * 3) % 11) as f64 - 5.0);
            let sparse = w.spatial_lag(&x).unwrap();
            let dense = w.to_dense() * &x;
            for i in 0..n {
                for c in 0..2 {
                    prop_assert!((sparse[(i, c)] - dense[(i, c)]).abs() <= 1e-12);
                }
            }
        }

        #[test]
        fn prop_eigen_normalized_radius_is_one(w in arb_weights(16)) {
            if w.entry_count() > 0 {
                let e = w.eigen_normalize().unwrap();
                prop_assert!((e.spectral_radius() - 1.0).abs() <= 1e-9);
            }
        }

        #[test]
        fn prop_knn_has_no_islands(n in 4usize..24, k in 1usize..3) {
            let coords: Vec<(f64, f64)> = (0..n)
                .map(|i| ((i as f64 * 0.7).sin() * 10.0, (i as f64 * 1.3).cos() * 10.0))
                .collect();
            let w = SpatialWeights::knn_weights(&coords, k.min(n - 1)).unwrap();
            prop_assert!(w.detect_islands().is_empty());
            for i in 0..n {
                prop_assert_eq!(w.out_degree(i), k.min(n - 1));
            }
        }
    }
}
