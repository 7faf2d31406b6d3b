//! Raw tables as read from comma-separated files, and missing-value
//! imputation.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::schema::{Column, ColumnKind, Schema};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Missing,
    Number(f64),
    /// Index into the column's vocabulary.
    Level(usize),
}

impl Cell {
    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }
}

/// Feature cells (class and ignored columns removed) plus class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDataset {
    features: Vec<Column>,
    class_labels: Vec<String>,
    rows: Vec<Vec<Cell>>,
    labels: Vec<usize>,
}

impl RawDataset {
    pub fn new(
        features: Vec<Column>,
        class_labels: Vec<String>,
        rows: Vec<Vec<Cell>>,
        labels: Vec<usize>,
    ) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::Data("row and label counts differ".into()));
        }
        for row in &rows {
            if row.len() != features.len() {
                return Err(Error::Data("row length differs from feature count".into()));
            }
            for (cell, col) in row.iter().zip(&features) {
                let ok = match (&col.kind, cell) {
                    (_, Cell::Missing) => true,
                    (ColumnKind::Continuous, Cell::Number(x)) => x.is_finite(),
                    (ColumnKind::Nominal(vocab), Cell::Level(i)) => *i < vocab.len(),
                    _ => false,
                };
                if !ok {
                    return Err(Error::Data(format!("bad cell {cell:?} in column {}", col.name)));
                }
            }
        }
        if labels.iter().any(|&l| l >= class_labels.len()) {
            return Err(Error::Data("label out of range".into()));
        }
        Ok(RawDataset {
            features,
            class_labels,
            rows,
            labels,
        })
    }

    pub fn features(&self) -> &[Column] {
        &self.features
    }

    pub fn class_labels(&self) -> &[String] {
        &self.class_labels
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn missing_count(&self) -> usize {
        self.rows.iter().flatten().filter(|c| c.is_missing()).count()
    }
}

fn is_missing_marker(s: &str) -> bool {
    s.is_empty() || s == "?"
}

/// Reads a headed comma-separated table. Header names must match the schema
/// column names in order.
pub fn read_table(reader: impl Read, schema: &Schema) -> Result<RawDataset> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = csv.headers()?.clone();
    let columns = schema.columns();
    if header.len() != columns.len() {
        return Err(Error::parse(
            1,
            format!("header has {} columns, schema has {}", header.len(), columns.len()),
        ));
    }
    for (h, col) in header.iter().zip(columns) {
        if h != col.name {
            return Err(Error::Schema(format!("header column {h:?} where schema has {:?}", col.name)));
        }
    }

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (n, record) in csv.records().enumerate() {
        let line = n + 2;
        let record = record?;
        if record.len() != columns.len() {
            return Err(Error::parse(
                line,
                format!("expected {} fields, found {}", columns.len(), record.len()),
            ));
        }
        let mut row = Vec::with_capacity(columns.len());
        for (field, col) in record.iter().zip(columns) {
            match &col.kind {
                ColumnKind::Ignore => {}
                ColumnKind::Class(vocab) => {
                    let label = vocab.iter().position(|v| v == field).ok_or_else(|| {
                        Error::Schema(format!("line {line}: unknown class label {field:?}"))
                    })?;
                    labels.push(label);
                }
                _ if is_missing_marker(field) => row.push(Cell::Missing),
                ColumnKind::Continuous => {
                    let x: f64 = field.parse().map_err(|_| {
                        Error::parse(line, format!("column {}: not a number: {field:?}", col.name))
                    })?;
                    if !x.is_finite() {
                        return Err(Error::parse(line, format!("column {}: non-finite value", col.name)));
                    }
                    row.push(Cell::Number(x));
                }
                ColumnKind::Nominal(vocab) => {
                    let level = vocab.iter().position(|v| v == field).ok_or_else(|| {
                        Error::Schema(format!(
                            "line {line}: value {field:?} not in vocabulary of {}",
                            col.name
                        ))
                    })?;
                    row.push(Cell::Level(level));
                }
            }
        }
        rows.push(row);
    }
    let features = schema.feature_columns().cloned().collect();
    RawDataset::new(features, schema.class_labels().to_vec(), rows, labels)
}

pub fn load_table(path: impl AsRef<Path>, schema: &Schema) -> Result<RawDataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_table(file, schema)
}

/// Replaces missing continuous cells by the column mean and missing nominal
/// cells by the column mode, both taken over every row. Mode ties go to the
/// value listed first in the vocabulary.
pub fn impute_missing(raw: RawDataset) -> Result<RawDataset> {
    let RawDataset {
        features,
        class_labels,
        mut rows,
        labels,
    } = raw;
    for (j, col) in features.iter().enumerate() {
        if rows.iter().all(|r| !r[j].is_missing()) {
            continue;
        }
        let fill = match &col.kind {
            ColumnKind::Continuous => {
                let values: Vec<f64> = rows
                    .iter()
                    .filter_map(|r| match r[j] {
                        Cell::Number(x) => Some(x),
                        _ => None,
                    })
                    .collect();
                if values.is_empty() {
                    return Err(Error::Data(format!("column {} is entirely missing", col.name)));
                }
                Cell::Number(values.iter().sum::<f64>() / values.len() as f64)
            }
            ColumnKind::Nominal(vocab) => {
                let mut counts = vec![0usize; vocab.len()];
                for r in &rows {
                    if let Cell::Level(i) = r[j] {
                        counts[i] += 1;
                    }
                }
                if counts.iter().all(|&c| c == 0) {
                    return Err(Error::Data(format!("column {} is entirely missing", col.name)));
                }
                let mut mode = 0;
                for (i, &c) in counts.iter().enumerate() {
                    if c > counts[mode] {
                        mode = i;
                    }
                }
                Cell::Level(mode)
            }
            ColumnKind::Class(_) | ColumnKind::Ignore => unreachable!("not a feature column"),
        };
        for r in &mut rows {
            if r[j].is_missing() {
                r[j] = fill;
            }
        }
    }
    Ok(RawDataset {
        features,
        class_labels,
        rows,
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema() -> Schema {
        Schema::parse("x,continuous\nc,nominal,a,b\ny,class,p,q\n").unwrap()
    }

    fn column(raw: &RawDataset, j: usize) -> Vec<Cell> {
        raw.rows().iter().map(|r| r[j]).collect()
    }

    #[test]
    fn reads_three_rows() {
        let raw = read_table("x,c,y\n1,a,p\n2,b,q\n3,a,p\n".as_bytes(), &schema()).unwrap();
        assert_eq!(raw.len(), 3);
        assert_eq!(raw.labels(), [0, 1, 0]);
        assert_eq!(raw.rows()[1], [Cell::Number(2.0), Cell::Level(1)]);
        assert_eq!(raw.missing_count(), 0);
    }

    #[test]
    fn question_mark_and_empty_are_missing() {
        let raw = read_table("x,c,y\n?,a,p\n2,,q\n".as_bytes(), &schema()).unwrap();
        assert!(raw.rows()[0][0].is_missing());
        assert!(raw.rows()[1][1].is_missing());
    }

    #[test]
    fn header_mismatch_is_a_parse_error() {
        let err = read_table("x,y\n1,p\n".as_bytes(), &schema()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn ragged_row_is_a_parse_error() {
        let err = read_table("x,c,y\n1,a,p\n2,b\n".as_bytes(), &schema()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn unknown_nominal_value_is_a_schema_error() {
        let err = read_table("x,c,y\n1,z,p\n".as_bytes(), &schema()).unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
        let err = read_table("x,c,y\n1,a,r\n".as_bytes(), &schema()).unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
    }

    #[test]
    fn ignored_columns_are_dropped() {
        let s = Schema::parse("id,ignore\nx,continuous\ny,class,p,q\n").unwrap();
        let raw = read_table("id,x,y\n1000,1.5,q\n".as_bytes(), &s).unwrap();
        assert_eq!(raw.features().len(), 1);
        assert_eq!(raw.rows()[0], [Cell::Number(1.5)]);
    }

    #[test]
    fn mean_imputation() {
        let raw = read_table("x,c,y\n1,a,p\n?,a,q\n3,b,p\n".as_bytes(), &schema()).unwrap();
        let raw = impute_missing(raw).unwrap();
        assert_eq!(
            column(&raw, 0),
            [Cell::Number(1.0), Cell::Number(2.0), Cell::Number(3.0)]
        );
    }

    #[test]
    fn mode_imputation() {
        let raw = read_table("x,c,y\n1,a,p\n1,a,p\n1,b,q\n1,?,q\n".as_bytes(), &schema()).unwrap();
        let raw = impute_missing(raw).unwrap();
        assert_eq!(column(&raw, 1)[3], Cell::Level(0));
    }

    #[test]
    fn mode_tie_goes_to_first_in_vocabulary() {
        let raw = read_table("x,c,y\n1,b,p\n1,a,p\n1,?,q\n".as_bytes(), &schema()).unwrap();
        let raw = impute_missing(raw).unwrap();
        assert_eq!(column(&raw, 1)[2], Cell::Level(0));
    }

    #[test]
    fn fully_missing_column_is_an_error() {
        let raw = read_table("x,c,y\n?,a,p\n?,b,q\n".as_bytes(), &schema()).unwrap();
        assert!(matches!(impute_missing(raw), Err(Error::Data(_))));
    }
}
