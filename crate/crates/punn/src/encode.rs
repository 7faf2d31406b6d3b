//! Nominal-to-indicator encoding and min-max normalization into `[1, 2]`.

use crate::error::{Error, Result};
use crate::schema::ColumnKind;
use crate::table::{Cell, RawDataset};

/// A fully numeric table with integer class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericTable {
    pub feature_names: Vec<String>,
    pub class_labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
}

/// Number of model inputs a raw dataset encodes to: one per continuous
/// column, one per vocabulary value of each nominal column.
pub fn encoded_width(raw: &RawDataset) -> usize {
    raw.features()
        .iter()
        .map(|c| match &c.kind {
            ColumnKind::Nominal(vocab) => vocab.len(),
            _ => 1,
        })
        .sum()
}

/// Expands every nominal column with `V` values into `V` indicator columns.
/// Continuous columns pass through. The table must have no missing cells.
pub fn encode_nominal(raw: &RawDataset) -> Result<NumericTable> {
    let mut feature_names = Vec::with_capacity(encoded_width(raw));
    for col in raw.features() {
        match &col.kind {
            ColumnKind::Nominal(vocab) => {
                feature_names.extend(vocab.iter().map(|v| format!("{}={}", col.name, v)))
            }
            _ => feature_names.push(col.name.clone()),
        }
    }
    let mut rows = Vec::with_capacity(raw.len());
    for (n, row) in raw.rows().iter().enumerate() {
        let mut out = Vec::with_capacity(feature_names.len());
        for (cell, col) in row.iter().zip(raw.features()) {
            match (cell, &col.kind) {
                (Cell::Number(x), _) => out.push(*x),
                (Cell::Level(level), ColumnKind::Nominal(vocab)) => {
                    out.extend((0..vocab.len()).map(|i| if i == *level { 1.0 } else { 0.0 }))
                }
                (Cell::Missing, _) => {
                    return Err(Error::Data(format!(
                        "row {n}: column {} still has a missing value",
                        col.name
                    )))
                }
                (Cell::Level(_), _) => unreachable!("levels only occur in nominal columns"),
            }
        }
        rows.push(out);
    }
    Ok(NumericTable {
        feature_names,
        class_labels: raw.class_labels().to_vec(),
        rows,
        labels: raw.labels().to_vec(),
    })
}

/// Per-feature minimum and maximum of the fitted table.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationParams {
    ranges: Vec<(f64, f64)>,
}

impl NormalizationParams {
    pub fn new(ranges: Vec<(f64, f64)>) -> Result<Self> {
        for &(lo, hi) in &ranges {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Data(format!("bad normalization range [{lo}, {hi}]")));
            }
        }
        Ok(NormalizationParams { ranges })
    }

    pub fn fit(rows: &[Vec<f64>], width: usize) -> Result<Self> {
        let mut ranges = vec![(f64::INFINITY, f64::NEG_INFINITY); width];
        for row in rows {
            if row.len() != width {
                return Err(Error::Data("row length differs from feature count".into()));
            }
            for (range, &x) in ranges.iter_mut().zip(row) {
                if !x.is_finite() {
                    return Err(Error::Data(format!("non-finite value {x}")));
                }
                range.0 = range.0.min(x);
                range.1 = range.1.max(x);
            }
        }
        if rows.is_empty() {
            ranges.fill((0.0, 0.0));
        }
        NormalizationParams::new(ranges)
    }

    pub fn ranges(&self) -> &[(f64, f64)] {
        &self.ranges
    }

    pub fn width(&self) -> usize {
        self.ranges.len()
    }

    /// `1 + (x - min) / (max - min)`; constant features map to 1.
    pub fn apply(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.ranges.len() {
            return Err(Error::Data("row length differs from feature count".into()));
        }
        row.iter()
            .zip(&self.ranges)
            .map(|(&x, &(lo, hi))| {
                if !x.is_finite() {
                    Err(Error::Data(format!("non-finite value {x}")))
                } else if hi == lo {
                    Ok(1.0)
                } else {
                    Ok(1.0 + (x - lo) / (hi - lo))
                }
            })
            .collect()
    }
}

/// Fits the ranges on every row of `rows` and maps them into `[1, 2]`.
pub fn fit_apply_normalization(
    rows: &[Vec<f64>],
    width: usize,
) -> Result<(Vec<Vec<f64>>, NormalizationParams)> {
    let params = NormalizationParams::fit(rows, width)?;
    let out = rows.iter().map(|r| params.apply(r)).collect::<Result<_>>()?;
    Ok((out, params))
}
