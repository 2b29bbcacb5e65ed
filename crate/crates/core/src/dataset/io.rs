use std::collections::HashMap;
use std::fs::File;
use std::path::Path;

use csv::{ReaderBuilder, StringRecord, Trim, WriterBuilder};

use super::{ColumnKind, Dataset, Matrix, Schema};
use crate::error::{Error, Result};

struct RawTable {
    header: Vec<String>,
    records: Vec<StringRecord>,
}

fn read_raw(path: &Path) -> Result<RawTable> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = ReaderBuilder::new()
        .has_headers(true)
        .trim(Trim::All)
        .from_reader(file);
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let header: Vec<String> = reader
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(str::to_string)
        .collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(Error::MissingHeader);
    }
    for (i, name) in header.iter().enumerate() {
        if name.is_empty() {
            return Err(Error::InvalidColumn {
                column: format!("#{}", i + 1),
                reason: "empty column name".into(),
            });
        }
        if header[..i].contains(name) {
            return Err(Error::DuplicateColumn(name.clone()));
        }
    }
    let records = reader
        .records()
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(csv_err)?;
    if records.is_empty() {
        return Err(Error::EmptyData);
    }
    Ok(RawTable { header, records })
}

/// Label-to-code dictionary assigning dense codes in first-appearance order.
struct Coder {
    labels: Vec<String>,
    lookup: HashMap<String, usize>,
}

impl Coder {
    fn from_labels(labels: &[String]) -> Self {
        let lookup = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        Coder {
            labels: labels.to_vec(),
            lookup,
        }
    }

    fn code(&mut self, label: &str) -> usize {
        if let Some(&c) = self.lookup.get(label) {
            return c;
        }
        let c = self.labels.len();
        self.labels.push(label.to_string());
        self.lookup.insert(label.to_string(), c);
        c
    }
}

enum Cell {
    Numeric,
    Categorical(Coder),
}

/// Parses the selected raw columns into a matrix. `columns[j]` is the raw
/// position of output column `j`.
fn parse_columns(
    raw: &RawTable,
    columns: &[usize],
    cells: &mut [Cell],
) -> Result<Matrix> {
    let mut data = Vec::with_capacity(raw.records.len() * columns.len());
    for (r, record) in raw.records.iter().enumerate() {
        for (&c, cell) in columns.iter().zip(cells.iter_mut()) {
            let text = record.get(c).unwrap_or("");
            let name = &raw.header[c];
            if text.is_empty() {
                return Err(Error::MissingValue {
                    row: r + 1,
                    column: name.clone(),
                });
            }
            let value = match cell {
                Cell::Numeric => parse_real(text, r + 1, name)?,
                Cell::Categorical(coder) => coder.code(text) as f64,
            };
            data.push(value);
        }
    }
    Matrix::new(raw.records.len(), columns.len(), data)
}

fn parse_real(text: &str, row: usize, column: &str) -> Result<f64> {
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::ParseCell {
            row,
            column: column.to_string(),
            value: text.to_string(),
        }),
    }
}

fn finish_schema(names: Vec<String>, kinds: Vec<ColumnKind>, cells: Vec<Cell>) -> Schema {
    let categories = cells
        .into_iter()
        .map(|c| match c {
            Cell::Numeric => Vec::new(),
            Cell::Categorical(coder) => coder.labels,
        })
        .collect();
    Schema::with_categories(names, kinds, categories)
}

fn check_listed<S: AsRef<str>>(header: &[String], listed: &[S]) -> Result<()> {
    for name in listed {
        let name = name.as_ref();
        if !header.iter().any(|h| h == name) {
            return Err(Error::MissingColumn(name.to_string()));
        }
    }
    Ok(())
}

fn load_table<S: AsRef<str>>(
    path: &Path,
    target: Option<&str>,
    categorical: &[S],
) -> Result<(Schema, Matrix, Option<Vec<f64>>)> {
    let raw = read_raw(path)?;
    check_listed(&raw.header, categorical)?;
    let target_pos = match target {
        Some(t) => {
            if categorical.iter().any(|c| c.as_ref() == t) {
                return Err(Error::TargetIsCategorical(t.to_string()));
            }
            Some(
                raw.header
                    .iter()
                    .position(|h| h == t)
                    .ok_or_else(|| Error::MissingColumn(t.to_string()))?,
            )
        }
        None => None,
    };

    let columns: Vec<usize> = (0..raw.header.len()).filter(|&c| Some(c) != target_pos).collect();
    let names: Vec<String> = columns.iter().map(|&c| raw.header[c].clone()).collect();
    let kinds: Vec<ColumnKind> = names
        .iter()
        .map(|n| {
            if categorical.iter().any(|c| c.as_ref() == n) {
                ColumnKind::Categorical
            } else {
                ColumnKind::Numeric
            }
        })
        .collect();
    let mut cells: Vec<Cell> = kinds
        .iter()
        .map(|k| match k {
            ColumnKind::Numeric => Cell::Numeric,
            ColumnKind::Categorical => Cell::Categorical(Coder::from_labels(&[])),
        })
        .collect();
    let features = parse_columns(&raw, &columns, &mut cells)?;
    let target = match target_pos {
        Some(t) => {
            let mut cell = [Cell::Numeric];
            let m = parse_columns(&raw, &[t], &mut cell)?;
            Some(m.as_slice().to_vec())
        }
        None => None,
    };
    Ok((finish_schema(names, kinds, cells), features, target))
}

impl Dataset {
    /// Loads a labelled dataset. Every column other than `target` becomes a
    /// feature; columns listed in `categorical` are coded by first appearance.
    pub fn load_csv<P: AsRef<Path>, S: AsRef<str>>(
        path: P,
        target: &str,
        categorical: &[S],
    ) -> Result<Dataset> {
        let (schema, features, y) = load_table(path.as_ref(), Some(target), categorical)?;
        Dataset::new(features, y.unwrap_or_default(), schema, target)
    }

    /// Writes features then target, reals at 17 significant digits and
    /// categorical columns as their labels.
    pub fn write_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = WriterBuilder::new().from_writer(file);
        let csv_err = |source| Error::Csv {
            path: path.to_path_buf(),
            source,
        };
        let mut header: Vec<&str> = self.schema.names().iter().map(String::as_str).collect();
        header.push(&self.target_name);
        w.write_record(&header).map_err(csv_err)?;
        let mut fields = Vec::with_capacity(self.n_cols() + 1);
        for (i, row) in self.features.iter_rows().enumerate() {
            fields.clear();
            for (j, &v) in row.iter().enumerate() {
                fields.push(match self.schema.kinds()[j] {
                    ColumnKind::Numeric => format_real17(v),
                    ColumnKind::Categorical => self.schema.categories(j)[v as usize].clone(),
                });
            }
            fields.push(format_real17(self.target[i]));
            w.write_record(&fields).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }
}

/// Loads an unlabelled table where every column is a feature.
pub fn load_features_csv<P: AsRef<Path>, S: AsRef<str>>(
    path: P,
    categorical: &[S],
) -> Result<(Schema, Matrix)> {
    let (schema, features, _) = load_table(path.as_ref(), None, categorical)?;
    Ok((schema, features))
}

/// Loads query rows against a training schema. Columns are matched by name
/// and reordered to the schema; `ignore` names a column (typically the
/// target) that may be present and is skipped. Categorical labels reuse the
/// schema dictionary; labels never seen in training get fresh codes.
pub fn load_query_csv<P: AsRef<Path>>(path: P, schema: &Schema, ignore: Option<&str>) -> Result<Matrix> {
    let raw = read_raw(path.as_ref())?;
    for name in &raw.header {
        if Some(name.as_str()) != ignore && schema.position(name).is_none() {
            return Err(Error::SchemaMismatch(format!("unexpected query column {name:?}")));
        }
    }
    let mut columns = Vec::with_capacity(schema.len());
    for name in schema.names() {
        let pos = raw
            .header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::SchemaMismatch(format!("query lacks column {name:?}")))?;
        columns.push(pos);
    }
    let mut cells: Vec<Cell> = (0..schema.len())
        .map(|j| match schema.kinds()[j] {
            ColumnKind::Numeric => Cell::Numeric,
            ColumnKind::Categorical => Cell::Categorical(Coder::from_labels(schema.categories(j))),
        })
        .collect();
    parse_columns(&raw, &columns, &mut cells)
}

pub(crate) fn format_real17(v: f64) -> String {
    format!("{v:.16e}")
}
