use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A labelled pattern matrix ready for training: `N x k` strictly positive
/// inputs (normally in `[1, 2]`) and one class index per pattern. The one-hot
/// target of pattern `i` is implied by `label(i)`.
///
/// The natural logarithm of every component is computed once on
/// construction; the forward pass works on those.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    input_count: usize,
    class_count: usize,
    patterns: Vec<f64>,
    log_patterns: Vec<f64>,
    labels: Vec<usize>,
}

impl Dataset {
    /// `patterns` is row-major with `labels.len()` rows of `input_count`
    /// values each.
    pub fn new(
        input_count: usize,
        class_count: usize,
        patterns: Vec<f64>,
        labels: Vec<usize>,
    ) -> Result<Self> {
        if input_count == 0 {
            return Err(Error::Argument("dataset needs at least one input"));
        }
        if class_count < 2 {
            return Err(Error::Argument("dataset needs at least two classes"));
        }
        if patterns.len() != labels.len() * input_count {
            return Err(Error::Dimension {
                expected: labels.len() * input_count,
                actual: patterns.len(),
            });
        }
        if labels.iter().any(|&y| y >= class_count) {
            return Err(Error::Argument("class label out of range"));
        }
        let log_patterns = patterns
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                if x > 0.0 && x.is_finite() {
                    Ok(libm::log(x))
                } else {
                    Err(Error::Domain {
                        index: i % input_count,
                        value: x,
                    })
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(Dataset {
            input_count,
            class_count,
            patterns,
            log_patterns,
            labels,
        })
    }

    /// Builds a dataset from row vectors.
    pub fn from_rows(class_count: usize, rows: &[Vec<f64>], labels: Vec<usize>) -> Result<Self> {
        let input_count = rows.first().map_or(0, Vec::len);
        if rows.len() != labels.len() {
            return Err(Error::Argument("row and label counts differ"));
        }
        if rows.iter().any(|r| r.len() != input_count) {
            return Err(Error::Argument("ragged pattern rows"));
        }
        let patterns = rows.iter().flatten().copied().collect();
        Dataset::new(input_count, class_count, patterns, labels)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn input_count(&self) -> usize {
        self.input_count
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn pattern(&self, index: usize) -> &[f64] {
        &self.patterns[index * self.input_count..(index + 1) * self.input_count]
    }

    pub fn log_pattern(&self, index: usize) -> &[f64] {
        &self.log_patterns[index * self.input_count..(index + 1) * self.input_count]
    }

    pub fn label(&self, index: usize) -> usize {
        self.labels[index]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Iterates `(log pattern, label)` pairs.
    pub fn log_rows(&self) -> impl Iterator<Item = (&[f64], usize)> + '_ {
        self.log_patterns
            .chunks_exact(self.input_count)
            .zip(self.labels.iter().copied())
    }

    /// Number of patterns in each class.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = alloc::vec![0; self.class_count];
        for &y in &self.labels {
            counts[y] += 1;
        }
        counts
    }

    /// A new dataset holding the rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let k = self.input_count;
        let mut patterns = Vec::with_capacity(indices.len() * k);
        let mut log_patterns = Vec::with_capacity(indices.len() * k);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            patterns.extend_from_slice(self.pattern(i));
            log_patterns.extend_from_slice(self.log_pattern(i));
            labels.push(self.labels[i]);
        }
        Dataset {
            input_count: k,
            class_count: self.class_count,
            patterns,
            log_patterns,
            labels,
        }
    }
}
