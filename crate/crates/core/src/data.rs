//! In-memory sample matrices with named columns.

use std::collections::HashMap;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    #[error("duplicate column `{0}`")]
    DuplicateColumn(String),
    #[error("row {row} has {got} fields, expected {want}")]
    RaggedRow { row: usize, got: usize, want: usize },
    #[error("row {row}, column `{col}`: bad number `{value}`")]
    BadNumber {
        row: usize,
        col: String,
        value: String,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// An N×p matrix of reals with unique column names. Row-major storage.
#[derive(Debug, Clone)]
pub struct Dataset {
    columns: Vec<String>,
    index: HashMap<String, usize>,
    values: Vec<f64>,
    rows: usize,
}

impl Dataset {
    pub fn new(columns: Vec<String>, values: Vec<f64>) -> Result<Self, DataError> {
        let p = columns.len();
        assert!(p > 0 && values.len() % p == 0, "values must fill whole rows");
        let mut index = HashMap::new();
        for (i, c) in columns.iter().enumerate() {
            if index.insert(c.clone(), i).is_some() {
                return Err(DataError::DuplicateColumn(c.clone()));
            }
        }
        let rows = values.len() / p;
        Ok(Self {
            columns,
            index,
            values,
            rows,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn column_index(&self, name: &str) -> Result<usize, DataError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| DataError::UnknownColumn(name.to_string()))
    }

    #[inline]
    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.columns.len() + col]
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>, DataError> {
        let c = self.column_index(name)?;
        Ok((0..self.rows).map(|r| self.value(r, c)).collect())
    }

    /// A copy without the named columns.
    pub fn drop_columns<S: AsRef<str>>(&self, drop: &[S]) -> Result<Dataset, DataError> {
        let mut drop_mask = vec![false; self.columns.len()];
        for d in drop {
            drop_mask[self.column_index(d.as_ref())?] = true;
        }
        let keep: Vec<usize> = (0..self.columns.len()).filter(|&c| !drop_mask[c]).collect();
        let columns: Vec<String> = keep.iter().map(|&c| self.columns[c].clone()).collect();
        let mut values = Vec::with_capacity(self.rows * keep.len());
        for r in 0..self.rows {
            for &c in &keep {
                values.push(self.value(r, c));
            }
        }
        Dataset::new(columns, values)
    }

    /// Sample covariance matrix (denominator N−1), column order preserved.
    pub fn covariance(&self) -> nalgebra::DMatrix<f64> {
        let p = self.n_cols();
        let n = self.rows;
        let mut mean = vec![0.0; p];
        for r in 0..n {
            for c in 0..p {
                mean[c] += self.value(r, c);
            }
        }
        for m in &mut mean {
            *m /= n as f64;
        }
        let mut cov = nalgebra::DMatrix::zeros(p, p);
        for r in 0..n {
            for i in 0..p {
                let di = self.value(r, i) - mean[i];
                for j in i..p {
                    cov[(i, j)] += di * (self.value(r, j) - mean[j]);
                }
            }
        }
        let denom = (n as f64 - 1.0).max(1.0);
        for i in 0..p {
            for j in i..p {
                cov[(i, j)] /= denom;
                cov[(j, i)] = cov[(i, j)];
            }
        }
        cov
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<(), DataError> {
        let mut w = csv::Writer::from_path(path.as_ref())?;
        w.write_record(&self.columns)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.columns.len())
                .map(|c| self.value(r, c).to_string())
                .collect();
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset, DataError> {
        let mut r = csv::Reader::from_path(path.as_ref())?;
        let columns: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let p = columns.len();
        let mut values = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            if rec.len() != p {
                return Err(DataError::RaggedRow {
                    row: i + 1,
                    got: rec.len(),
                    want: p,
                });
            }
            for (c, field) in rec.iter().enumerate() {
                let v: f64 = field.parse().map_err(|_| DataError::BadNumber {
                    row: i + 1,
                    col: columns[c].clone(),
                    value: field.to_string(),
                })?;
                values.push(v);
            }
        }
        Dataset::new(columns, values)
    }
}
