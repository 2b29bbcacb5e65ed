use super::{ColumnKind, Dataset, Matrix, Schema};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnScale {
    pub mean: f64,
    /// Population standard deviation.
    pub sd: f64,
}

impl ColumnScale {
    #[inline]
    pub fn transform(&self, v: f64) -> f64 {
        if self.sd == 0.0 {
            0.0
        } else {
            (v - self.mean) / self.sd
        }
    }
}

/// Z-score transform for numeric columns, fitted on training rows only.
/// Categorical columns pass through untouched.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    names: Vec<String>,
    kinds: Vec<ColumnKind>,
    scales: Vec<Option<ColumnScale>>,
}

impl Standardizer {
    pub fn fit(train: &Dataset) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::EmptyData);
        }
        let x = train.features();
        let n = x.rows() as f64;
        let scales = train
            .column_kinds()
            .iter()
            .enumerate()
            .map(|(j, kind)| match kind {
                ColumnKind::Categorical => None,
                ColumnKind::Numeric => {
                    let mean = x.column(j).fold(0.0, |acc, v| acc + v) / n;
                    let var = x.column(j).fold(0.0, |acc, v| acc + (v - mean) * (v - mean)) / n;
                    Some(ColumnScale {
                        mean,
                        sd: var.sqrt(),
                    })
                }
            })
            .collect();
        Ok(Standardizer {
            names: train.column_names().to_vec(),
            kinds: train.column_kinds().to_vec(),
            scales,
        })
    }

    pub fn scales(&self) -> &[Option<ColumnScale>] {
        &self.scales
    }

    pub fn apply(&self, data: &Dataset) -> Result<Dataset> {
        self.check_schema(data.schema())?;
        Ok(data.with_features(self.transform_matrix(data.features())))
    }

    /// Transforms a bare matrix whose columns follow the fitted schema.
    pub fn apply_matrix(&self, m: &Matrix) -> Result<Matrix> {
        if m.cols() != self.scales.len() {
            return Err(Error::DimensionMismatch {
                expected: self.scales.len(),
                got: m.cols(),
            });
        }
        Ok(self.transform_matrix(m))
    }

    pub fn apply_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.scales.len() {
            return Err(Error::DimensionMismatch {
                expected: self.scales.len(),
                got: row.len(),
            });
        }
        Ok(row
            .iter()
            .zip(&self.scales)
            .map(|(&v, s)| s.map_or(v, |s| s.transform(v)))
            .collect())
    }

    fn transform_matrix(&self, m: &Matrix) -> Matrix {
        let mut out = m.clone();
        let cols = m.cols();
        if cols == 0 {
            return out;
        }
        for row in out.as_mut_slice().chunks_mut(cols) {
            for (v, s) in row.iter_mut().zip(&self.scales) {
                if let Some(s) = s {
                    *v = s.transform(*v);
                }
            }
        }
        out
    }

    fn check_schema(&self, schema: &Schema) -> Result<()> {
        if schema.names() != self.names.as_slice() || schema.kinds() != self.kinds.as_slice() {
            return Err(Error::SchemaMismatch(format!(
                "standardizer fitted on [{}], data has [{}]",
                self.names.join(","),
                schema.names().join(",")
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn one_column(kind: ColumnKind, values: &[f64]) -> Dataset {
        let rows: Vec<Vec<f64>> = values.iter().map(|&v| vec![v]).collect();
        Dataset::from_rows(vec!["c".into()], vec![kind], &rows, vec![0.0; values.len()]).unwrap()
    }

    #[test]
    fn two_point_column() {
        let d = one_column(ColumnKind::Numeric, &[0.0, 10.0]);
        let s = Standardizer::fit(&d).unwrap();
        assert_eq!(s.scales()[0], Some(ColumnScale { mean: 5.0, sd: 5.0 }));
        assert_eq!(s.apply(&d).unwrap().features().as_slice(), &[-1.0, 1.0]);
    }

    #[test]
    fn constant_column_maps_to_zero() {
        let d = one_column(ColumnKind::Numeric, &[7.0, 7.0, 7.0]);
        let s = Standardizer::fit(&d).unwrap();
        assert_eq!(s.apply(&d).unwrap().features().as_slice(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn categorical_untouched() {
        let d = one_column(ColumnKind::Categorical, &[0.0, 1.0, 0.0]);
        let s = Standardizer::fit(&d).unwrap();
        assert_eq!(s.apply(&d).unwrap().features().as_slice(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn target_untouched_and_schema_checked() {
        let d = Dataset::from_rows(
            vec!["a".into()],
            vec![ColumnKind::Numeric],
            &[vec![1.0], vec![3.0]],
            vec![100.0, 200.0],
        )
        .unwrap();
        let s = Standardizer::fit(&d).unwrap();
        assert_eq!(s.apply(&d).unwrap().target(), &[100.0, 200.0]);

        let other = Dataset::from_rows(
            vec!["b".into()],
            vec![ColumnKind::Numeric],
            &[vec![1.0]],
            vec![1.0],
        )
        .unwrap();
        assert!(matches!(s.apply(&other), Err(Error::SchemaMismatch(_))));
        assert!(matches!(
            s.apply_row(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn fitted_on_train_applied_to_test() {
        let train = one_column(ColumnKind::Numeric, &[0.0, 10.0]);
        let test = one_column(ColumnKind::Numeric, &[20.0]);
        let s = Standardizer::fit(&train).unwrap();
        assert_eq!(s.apply(&test).unwrap().features().as_slice(), &[3.0]);
    }

    proptest! {
        #[test]
        fn standardized_moments(values in prop::collection::vec(-1e6f64..1e6, 2..200)) {
            let d = one_column(ColumnKind::Numeric, &values);
            let s = Standardizer::fit(&d).unwrap();
            let z = s.apply(&d).unwrap();
            let col: Vec<f64> = z.features().column(0).collect();
            let n = col.len() as f64;
            let mean = col.iter().sum::<f64>() / n;
            let sd = (col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
            if s.scales()[0].unwrap().sd > 0.0 {
                prop_assert!(mean.abs() <= 1e-9, "mean {}", mean);
                prop_assert!((sd - 1.0).abs() <= 1e-9, "sd {}", sd);
            } else {
                prop_assert!(col.iter().all(|&v| v == 0.0));
            }
        }
    }
}
