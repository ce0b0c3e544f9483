//! Tabular data: an outcome vector plus named covariate columns, joined to
//! weights matrices by opaque unit identifiers.

use std::path::Path;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::weights::SpatialWeights;

/// Outcome y, covariate matrix X with column names, and unit identifiers.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub ids: Vec<String>,
    pub outcome_name: String,
    pub y: DVector<f64>,
    pub covariate_names: Vec<String>,
    pub x: DMatrix<f64>,
}

impl Dataset {
    pub fn new(
        ids: Vec<String>,
        outcome_name: String,
        y: DVector<f64>,
        covariate_names: Vec<String>,
        x: DMatrix<f64>,
    ) -> Result<Dataset> {
        let n = ids.len();
        if y.len() != n || x.nrows() != n || x.ncols() != covariate_names.len() {
            return Err(Error::ShapeError(format!(
                "{} ids, {} outcomes, X is {} x {} with {} names",
                n,
                y.len(),
                x.nrows(),
                x.ncols(),
                covariate_names.len()
            )));
        }
        Ok(Dataset {
            ids,
            outcome_name,
            y,
            covariate_names,
            x,
        })
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn k(&self) -> usize {
        self.covariate_names.len()
    }

    /// Load selected columns from a CSV file with a header row and an `id`
    /// column. Empty cells and NA/NaN markers are missing values and are
    /// reported with their row indices.
    pub fn from_csv<P: AsRef<Path>>(
        path: P,
        outcome: &str,
        covariates: &[String],
    ) -> Result<Dataset> {
        let mut rdr = csv::Reader::from_path(path)?;
        let headers = rdr.headers()?.clone();
        let col_of = |name: &str| -> Result<usize> {
            headers
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| Error::ConfigError(format!("column '{name}' not found in data file")))
        };
        let id_col = col_of("id")?;
        let y_col = col_of(outcome)?;
        let x_cols: Vec<usize> = covariates
            .iter()
            .map(|c| col_of(c))
            .collect::<Result<_>>()?;

        let mut ids = Vec::new();
        let mut y_vals = Vec::new();
        let mut x_vals: Vec<f64> = Vec::new();
        let mut missing_rows = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            ids.push(
                record
                    .get(id_col)
                    .unwrap_or("")
                    .trim()
                    .to_string(),
            );
            let mut row_missing = false;
            let mut parse = |col: usize| -> f64 {
                match record.get(col).map(str::trim) {
                    None | Some("") | Some("NA") | Some("na") | Some("NaN") | Some("nan") => {
                        row_missing = true;
                        f64::NAN
                    }
                    Some(s) => s.parse::<f64>().unwrap_or_else(|_| {
                        row_missing = true;
                        f64::NAN
                    }),
                }
            };
            y_vals.push(parse(y_col));
            for &c in &x_cols {
                x_vals.push(parse(c));
            }
            if row_missing {
                missing_rows.push(row);
            }
        }
        if !missing_rows.is_empty() {
            return Err(Error::MissingData(missing_rows));
        }
        let n = ids.len();
        let k = covariates.len();
        Dataset::new(
            ids,
            outcome.to_string(),
            DVector::from_vec(y_vals),
            covariates.to_vec(),
            DMatrix::from_row_slice(n, k, &x_vals),
        )
    }

    /// Write the dataset as CSV: `id`, the outcome column, then covariates.
    pub fn write_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut wtr = csv::Writer::from_path(path)?;
        let mut header = vec!["id".to_string(), self.outcome_name.clone()];
        header.extend(self.covariate_names.iter().cloned());
        wtr.write_record(&header)?;
        for i in 0..self.n() {
            let mut row = vec![self.ids[i].clone(), format!("{}", self.y[i])];
            for c in 0..self.k() {
                row.push(format!("{}", self.x[(i, c)]));
            }
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// Z-score the outcome and every covariate, using the sample standard
    /// deviation (n - 1 denominator).
    pub fn standardize(&self) -> Result<Dataset> {
        let y = standardize_vector(self.y.as_slice())?;
        let mut x = self.x.clone();
        for c in 0..self.k() {
            let col: Vec<f64> = (0..self.n()).map(|i| x[(i, c)]).collect();
            let z = standardize_vector(&col)?;
            for i in 0..self.n() {
                x[(i, c)] = z[i];
            }
        }
        Dataset::new(
            self.ids.clone(),
            self.outcome_name.clone(),
            DVector::from_vec(y),
            self.covariate_names.clone(),
            x,
        )
    }

    /// Reorder rows to the unit order of a weights matrix, joining on
    /// identifiers. The id sets must match exactly.
    pub fn align_to(&self, w: &SpatialWeights) -> Result<Dataset> {
        if self.n() != w.n() {
            return Err(Error::IdMismatch(format!(
                "data has {} rows, weights have {} units",
                self.n(),
                w.n()
            )));
        }
        let mut order = Vec::with_capacity(self.n());
        let mut pos = std::collections::HashMap::new();
        for (i, id) in self.ids.iter().enumerate() {
            if pos.insert(id.as_str(), i).is_some() {
                return Err(Error::IdMismatch(format!("duplicate data id '{id}'")));
            }
        }
        for id in w.ids() {
            match pos.get(id.as_str()) {
                Some(&i) => order.push(i),
                None => {
                    return Err(Error::IdMismatch(format!(
                        "weights unit '{id}' not present in the data"
                    )))
                }
            }
        }
        let y = DVector::from_iterator(self.n(), order.iter().map(|&i| self.y[i]));
        let x = DMatrix::from_fn(self.n(), self.k(), |r, c| self.x[(order[r], c)]);
        Dataset::new(
            w.ids().to_vec(),
            self.outcome_name.clone(),
            y,
            self.covariate_names.clone(),
            x,
        )
    }

    /// Reject non-finite values; estimation requires complete data.
    pub fn ensure_finite(&self) -> Result<()> {
        let mut bad = Vec::new();
        for i in 0..self.n() {
            let mut row_bad = !self.y[i].is_finite();
            for c in 0..self.k() {
                row_bad |= !self.x[(i, c)].is_finite();
            }
            if row_bad {
                bad.push(i);
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::MissingData(bad))
        }
    }
}

fn standardize_vector(v: &[f64]) -> Result<Vec<f64>> {
    let n = v.len();
    let mean = v.iter().sum::<f64>() / n as f64;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    if var == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let sd = var.sqrt();
    Ok(v.iter().map(|x| (x - mean) / sd).collect())
}

/// Read `id,x,y` coordinates from a CSV file.
pub fn read_coords_csv<P: AsRef<Path>>(path: P) -> Result<(Vec<String>, Vec<(f64, f64)>)> {
    let mut rdr = csv::Reader::from_path(path)?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::ConfigError(format!("coordinates file is missing '{name}'")))
    };
    let (idc, xc, yc) = (col("id")?, col("x")?, col("y")?);
    let mut ids = Vec::new();
    let mut coords = Vec::new();
    for record in rdr.records() {
        let record = record?;
        ids.push(record.get(idc).unwrap_or("").trim().to_string());
        let parse = |c: usize| -> Result<f64> {
            record
                .get(c)
                .unwrap_or("")
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::ConfigError("unparseable coordinate".into()))
        };
        coords.push((parse(xc)?, parse(yc)?));
    }
    Ok((ids, coords))
}
