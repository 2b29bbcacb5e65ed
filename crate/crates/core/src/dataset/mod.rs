//! Tabular regression data: a dense feature matrix, a target vector and
//! per-column metadata.
//!
//! Categorical columns are stored as non-negative integer codes (cast to
//! `f64`) alongside the label dictionary that produced them, so numeric and
//! categorical features share one row-major matrix.

mod io;
mod split;
mod standardize;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{load_features_csv, load_query_csv};
pub use split::{split_indices, SplitSpec};
pub use standardize::{ColumnScale, Standardizer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Numeric,
    Categorical,
}

impl fmt::Display for ColumnKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnKind::Numeric => f.write_str("numeric"),
            ColumnKind::Categorical => f.write_str("categorical"),
        }
    }
}

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                left: data.len(),
                right: rows * cols,
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from equal-length rows. An empty slice yields a
    /// `0 x cols` matrix only through [`Matrix::new`]; here it yields `0 x 0`.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::LengthMismatch {
                    left: row.len(),
                    right: cols,
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.rows).map(move |i| self.data[i * self.cols + j])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn select_rows(&self, indices: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }
}

/// Feature-column metadata: names, kinds and, for categorical columns, the
/// label dictionary (`categories[j][code]` is the label of `code`).
#[derive(Debug, Clone, PartialEq)]
pub struct Schema {
    names: Vec<String>,
    kinds: Vec<ColumnKind>,
    categories: Vec<Vec<String>>,
}

impl Schema {
    pub fn new(names: Vec<String>, kinds: Vec<ColumnKind>) -> Result<Self> {
        if names.len() != kinds.len() {
            return Err(Error::LengthMismatch {
                left: names.len(),
                right: kinds.len(),
            });
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::DuplicateColumn(name.clone()));
            }
        }
        let categories = vec![Vec::new(); names.len()];
        Ok(Schema {
            names,
            kinds,
            categories,
        })
    }

    pub(crate) fn with_categories(
        names: Vec<String>,
        kinds: Vec<ColumnKind>,
        categories: Vec<Vec<String>>,
    ) -> Self {
        debug_assert!(names.len() == kinds.len() && kinds.len() == categories.len());
        Schema {
            names,
            kinds,
            categories,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn kinds(&self) -> &[ColumnKind] {
        &self.kinds
    }

    /// Label dictionary of column `j`; empty for numeric columns.
    pub fn categories(&self, j: usize) -> &[String] {
        &self.categories[j]
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// First numeric column, if any.
    pub fn first_numeric(&self) -> Option<&str> {
        self.kinds
            .iter()
            .position(|k| *k == ColumnKind::Numeric)
            .map(|j| self.names[j].as_str())
    }

    /// Same column names and kinds, in the same order. Dictionaries may differ.
    pub fn check_compatible(&self, other: &Schema) -> Result<()> {
        if self.names != other.names {
            return Err(Error::SchemaMismatch(format!(
                "columns [{}] vs [{}]",
                self.names.join(","),
                other.names.join(",")
            )));
        }
        if let Some(j) = (0..self.len()).find(|&j| self.kinds[j] != other.kinds[j]) {
            return Err(Error::SchemaMismatch(format!(
                "column {:?} is {} vs {}",
                self.names[j], self.kinds[j], other.kinds[j]
            )));
        }
        Ok(())
    }

    /// Ensures every categorical column has a label for each code in `features`.
    fn fill_missing_labels(&mut self, features: &Matrix) {
        for j in 0..self.len() {
            if self.kinds[j] != ColumnKind::Categorical {
                continue;
            }
            let max_code = features.column(j).fold(-1.0f64, f64::max);
            let needed = (max_code + 1.0) as usize;
            let labels = &mut self.categories[j];
            while labels.len() < needed {
                labels.push(labels.len().to_string());
            }
        }
    }
}

/// Features plus a real-valued target.
///
/// Invariants, checked at construction: one target per row, one schema entry
/// per column, every value finite, categorical values are integer codes `>= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Matrix,
    target: Vec<f64>,
    schema: Schema,
    target_name: String,
}

impl Dataset {
    pub fn new(features: Matrix, target: Vec<f64>, schema: Schema, target_name: impl Into<String>) -> Result<Self> {
        let target_name = target_name.into();
        if features.rows() != target.len() {
            return Err(Error::LengthMismatch {
                left: features.rows(),
                right: target.len(),
            });
        }
        if features.cols() != schema.len() {
            return Err(Error::SchemaMismatch(format!(
                "{} feature columns but {} schema entries",
                features.cols(),
                schema.len()
            )));
        }
        if schema.position(&target_name).is_some() {
            return Err(Error::DuplicateColumn(target_name));
        }
        validate_values(&features, &schema)?;
        if let Some(i) = target.iter().position(|v| !v.is_finite()) {
            return Err(Error::ParseCell {
                row: i + 1,
                column: target_name,
                value: target[i].to_string(),
            });
        }
        let mut schema = schema;
        schema.fill_missing_labels(&features);
        Ok(Dataset {
            features,
            target,
            schema,
            target_name,
        })
    }

    /// Convenience constructor with target column named `"target"`.
    pub fn from_rows<R: AsRef<[f64]>>(
        names: Vec<String>,
        kinds: Vec<ColumnKind>,
        rows: &[R],
        target: Vec<f64>,
    ) -> Result<Self> {
        let schema = Schema::new(names, kinds)?;
        let features = if rows.is_empty() {
            Matrix::new(0, schema.len(), Vec::new())?
        } else {
            Matrix::from_rows(rows)?
        };
        Dataset::new(features, target, schema, "target")
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn target(&self) -> &[f64] {
        &self.target
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn target_name(&self) -> &str {
        &self.target_name
    }

    pub fn n_rows(&self) -> usize {
        self.features.rows()
    }

    pub fn n_cols(&self) -> usize {
        self.features.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn column_kinds(&self) -> &[ColumnKind] {
        self.schema.kinds()
    }

    pub fn column_names(&self) -> &[String] {
        self.schema.names()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.features.row(i)
    }

    /// Rows in the given order. Indices must be in range.
    pub fn select_rows(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: self.features.select_rows(indices),
            target: indices.iter().map(|&i| self.target[i]).collect(),
            schema: self.schema.clone(),
            target_name: self.target_name.clone(),
        }
    }

    pub fn split(&self, spec: &SplitSpec) -> Result<(Dataset, Dataset)> {
        let (train, test) = split_indices(self.n_rows(), spec)?;
        Ok((self.select_rows(&train), self.select_rows(&test)))
    }

    pub(crate) fn with_features(&self, features: Matrix) -> Dataset {
        Dataset {
            features,
            target: self.target.clone(),
            schema: self.schema.clone(),
            target_name: self.target_name.clone(),
        }
    }

    #[cfg(test)]
    pub(crate) fn with_target(&self, target: Vec<f64>) -> Dataset {
        Dataset {
            target,
            ..self.clone()
        }
    }
}

fn validate_values(features: &Matrix, schema: &Schema) -> Result<()> {
    for (i, row) in features.iter_rows().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let bad = match schema.kinds()[j] {
                ColumnKind::Numeric => !v.is_finite(),
                ColumnKind::Categorical => !is_code(v),
            };
            if bad {
                return Err(Error::ParseCell {
                    row: i + 1,
                    column: schema.names()[j].clone(),
                    value: v.to_string(),
                });
            }
        }
    }
    Ok(())
}

pub(crate) fn is_code(v: f64) -> bool {
    v.is_finite() && v >= 0.0 && v.fract() == 0.0
}
