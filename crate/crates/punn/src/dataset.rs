//! Preprocessed datasets and their text format.
//!
//! ```text
//! punn-dataset 1
//! inputs <k>
//! classes <L>
//! patterns <N>
//! class <TAB> <label>                   (L lines, index order)
//! feature <TAB> <name> <TAB> <min> <TAB> <max>   (k lines)
//! data
//! <x_1> <TAB> ... <TAB> <x_k> <TAB> <class index>   (N lines)
//! ```
//!
//! Numbers are written in the shortest form that parses back to the same
//! `f64`. A class index of `?` marks an unlabelled row; such files can be
//! read with [`read_patterns`] but not as a [`ProcessedDataset`].

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use punn_core::Dataset;

use crate::encode::{encode_nominal, fit_apply_normalization, NormalizationParams};
use crate::error::{Error, Result};
use crate::table::{impute_missing, RawDataset};

const MAGIC: &str = "punn-dataset";
const VERSION: u32 = 1;

/// Patterns in `[1, 2]^k` with class labels, feature names and the
/// normalization that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessedDataset {
    feature_names: Vec<String>,
    class_labels: Vec<String>,
    normalization: NormalizationParams,
    patterns: Vec<Vec<f64>>,
    labels: Vec<usize>,
}

impl ProcessedDataset {
    pub fn new(
        feature_names: Vec<String>,
        class_labels: Vec<String>,
        normalization: NormalizationParams,
        patterns: Vec<Vec<f64>>,
        labels: Vec<usize>,
    ) -> Result<Self> {
        let k = feature_names.len();
        if normalization.width() != k {
            return Err(Error::Data("normalization width differs from feature count".into()));
        }
        if class_labels.len() < 2 {
            return Err(Error::Data("need at least two classes".into()));
        }
        if patterns.len() != labels.len() {
            return Err(Error::Data("pattern and label counts differ".into()));
        }
        for p in &patterns {
            if p.len() != k {
                return Err(Error::Data("pattern length differs from feature count".into()));
            }
            if p.iter().any(|x| !(1.0..=2.0).contains(x)) {
                return Err(Error::Data("pattern component outside [1, 2]".into()));
            }
        }
        if labels.iter().any(|&l| l >= class_labels.len()) {
            return Err(Error::Data("label out of range".into()));
        }
        Ok(ProcessedDataset {
            feature_names,
            class_labels,
            normalization,
            patterns,
            labels,
        })
    }

    pub fn input_count(&self) -> usize {
        self.feature_names.len()
    }

    pub fn class_count(&self) -> usize {
        self.class_labels.len()
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn class_labels(&self) -> &[String] {
        &self.class_labels
    }

    pub fn normalization(&self) -> &NormalizationParams {
        &self.normalization
    }

    pub fn patterns(&self) -> &[Vec<f64>] {
        &self.patterns
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.class_count()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// One-hot target matrix, `N x L`.
    pub fn targets(&self) -> Vec<Vec<f64>> {
        self.labels
            .iter()
            .map(|&l| (0..self.class_count()).map(|c| if c == l { 1.0 } else { 0.0 }).collect())
            .collect()
    }

    /// Rows at `indices`, in that order, with the same metadata.
    pub fn subset(&self, indices: &[usize]) -> ProcessedDataset {
        ProcessedDataset {
            feature_names: self.feature_names.clone(),
            class_labels: self.class_labels.clone(),
            normalization: self.normalization.clone(),
            patterns: indices.iter().map(|&i| self.patterns[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    pub fn to_dataset(&self) -> Result<Dataset> {
        Ok(Dataset::from_rows(self.class_count(), &self.patterns, self.labels.clone())?)
    }

    pub fn write_to(&self, w: impl Write) -> Result<()> {
        self.check_names()?;
        write_impl(self, w).map_err(|e| Error::io("<dataset>", e))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        self.check_names()?;
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        write_impl(self, BufWriter::new(file)).map_err(|e| Error::io(path, e))
    }

    fn check_names(&self) -> Result<()> {
        for name in self.feature_names.iter().chain(&self.class_labels) {
            if name.contains(['\t', '\n', '\r']) {
                return Err(Error::Data(format!("name {name:?} contains a tab or newline")));
            }
        }
        Ok(())
    }

    pub fn read_from(r: impl Read) -> Result<Self> {
        let parsed = read_patterns(r)?;
        let labels = parsed
            .labels
            .into_iter()
            .enumerate()
            .map(|(i, l)| l.ok_or_else(|| Error::Data(format!("row {i} is unlabelled"))))
            .collect::<Result<_>>()?;
        ProcessedDataset::new(
            parsed.feature_names,
            parsed.class_labels,
            parsed.normalization,
            parsed.patterns,
            labels,
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        ProcessedDataset::read_from(BufReader::new(file))
    }
}

fn write_impl(d: &ProcessedDataset, mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "{MAGIC} {VERSION}")?;
    writeln!(w, "inputs {}", d.input_count())?;
    writeln!(w, "classes {}", d.class_count())?;
    writeln!(w, "patterns {}", d.len())?;
    for label in &d.class_labels {
        writeln!(w, "class\t{label}")?;
    }
    for (name, (lo, hi)) in d.feature_names.iter().zip(d.normalization.ranges()) {
        writeln!(w, "feature\t{name}\t{lo}\t{hi}")?;
    }
    writeln!(w, "data")?;
    for (p, l) in d.patterns.iter().zip(&d.labels) {
        for x in p {
            write!(w, "{x}\t")?;
        }
        writeln!(w, "{l}")?;
    }
    w.flush()
}

/// Contents of a dataset file whose rows may be unlabelled.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternFile {
    pub feature_names: Vec<String>,
    pub class_labels: Vec<String>,
    pub normalization: NormalizationParams,
    pub patterns: Vec<Vec<f64>>,
    pub labels: Vec<Option<usize>>,
}

pub fn read_patterns(r: impl Read) -> Result<PatternFile> {
    let mut lines = BufReader::new(r).lines().enumerate().map(|(n, l)| (n + 1, l));
    let mut next = |what: &str| -> Result<(usize, String)> {
        match lines.next() {
            Some((n, Ok(line))) => Ok((n, line)),
            Some((n, Err(e))) => Err(Error::parse(n, e.to_string())),
            None => Err(Error::parse(0, format!("unexpected end of file, expected {what}"))),
        }
    };

    let (n, line) = next("header")?;
    let version = line
        .strip_prefix(MAGIC)
        .map(str::trim)
        .ok_or_else(|| Error::parse(n, "not a dataset file"))?;
    if version != VERSION.to_string() {
        return Err(Error::parse(n, format!("unsupported version {version}")));
    }
    let k = keyed_count(next("inputs")?, "inputs")?;
    let l = keyed_count(next("classes")?, "classes")?;
    let count = keyed_count(next("patterns")?, "patterns")?;

    let mut class_labels = Vec::with_capacity(l);
    for _ in 0..l {
        let (n, line) = next("class")?;
        let label = line
            .strip_prefix("class\t")
            .ok_or_else(|| Error::parse(n, "expected a class line"))?;
        class_labels.push(label.to_string());
    }
    let mut feature_names = Vec::with_capacity(k);
    let mut ranges = Vec::with_capacity(k);
    for _ in 0..k {
        let (n, line) = next("feature")?;
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 || fields[0] != "feature" {
            return Err(Error::parse(n, "expected feature <name> <min> <max>"));
        }
        feature_names.push(fields[1].to_string());
        ranges.push((parse_f64(n, fields[2])?, parse_f64(n, fields[3])?));
    }
    let (n, line) = next("data")?;
    if line != "data" {
        return Err(Error::parse(n, "expected data"));
    }
    let mut patterns = Vec::with_capacity(count);
    let mut labels = Vec::with_capacity(count);
    for _ in 0..count {
        let (n, line) = next("pattern")?;
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != k + 1 {
            return Err(Error::parse(n, format!("expected {} fields, found {}", k + 1, fields.len())));
        }
        let pattern = fields[..k].iter().map(|f| parse_f64(n, f)).collect::<Result<Vec<_>>>()?;
        let label = match fields[k] {
            "?" => None,
            f => {
                let v: usize = f.parse().map_err(|_| Error::parse(n, format!("bad label {f:?}")))?;
                if v >= l {
                    return Err(Error::parse(n, format!("label {v} out of range")));
                }
                Some(v)
            }
        };
        patterns.push(pattern);
        labels.push(label);
    }
    if let Some((n, Ok(extra))) = lines.next() {
        if !extra.trim().is_empty() {
            return Err(Error::parse(n, "trailing content after the declared patterns"));
        }
    }
    Ok(PatternFile {
        feature_names,
        class_labels,
        normalization: NormalizationParams::new(ranges)?,
        patterns,
        labels,
    })
}

fn keyed_count((n, line): (usize, String), key: &str) -> Result<usize> {
    line.strip_prefix(key)
        .and_then(|rest| rest.trim().parse().ok())
        .ok_or_else(|| Error::parse(n, format!("expected `{key} <count>`")))
}

fn parse_f64(line: usize, s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("not a number: {s:?}")))
}

/// Imputation, indicator encoding and `[1, 2]` normalization, with all
/// statistics taken over the whole table.
pub fn preprocess(raw: RawDataset) -> Result<ProcessedDataset> {
    let raw = impute_missing(raw)?;
    let table = encode_nominal(&raw)?;
    let width = table.feature_names.len();
    let (patterns, normalization) = fit_apply_normalization(&table.rows, width)?;
    ProcessedDataset::new(
        table.feature_names,
        table.class_labels,
        normalization,
        patterns,
        table.labels,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::Schema;
    use crate::table::read_table;

    fn sample() -> ProcessedDataset {
        let s = Schema::parse("x,continuous\nc,nominal,u,v\ny,class,no,yes\n").unwrap();
        let raw = read_table("x,c,y\n0.1,u,no\n?,v,yes\n0.7,?,yes\n1e-3,u,no\n".as_bytes(), &s).unwrap();
        preprocess(raw).unwrap()
    }

    #[test]
    fn pipeline_output_is_in_range() {
        let d = sample();
        assert_eq!(d.input_count(), 3);
        assert_eq!(d.len(), 4);
        assert!(d.patterns().iter().flatten().all(|x| (1.0..=2.0).contains(x)));
        assert_eq!(d.class_counts(), [2, 2]);
        for t in d.targets() {
            assert_eq!(t.iter().sum::<f64>(), 1.0);
        }
    }

    #[test]
    fn text_round_trip_is_exact() {
        let d = sample();
        let mut buf = Vec::new();
        d.write_to(&mut buf).unwrap();
        let back = ProcessedDataset::read_from(buf.as_slice()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn stored_normalization_reproduces_rows() {
        let s = Schema::parse("x,continuous\nz,continuous\ny,class,no,yes\n").unwrap();
        let raw = read_table("x,z,y\n0.3,10,no\n0.1,-4,yes\n0.9,2.5,no\n".as_bytes(), &s).unwrap();
        let raw_rows: Vec<Vec<f64>> = encode_nominal(&raw).unwrap().rows;
        let d = preprocess(raw).unwrap();
        for (raw_row, p) in raw_rows.iter().zip(d.patterns()) {
            assert_eq!(&d.normalization().apply(raw_row).unwrap(), p);
        }
    }

    #[test]
    fn unlabelled_rows() {
        let text = "punn-dataset 1\ninputs 1\nclasses 2\npatterns 2\nclass\ta\nclass\tb\nfeature\tx\t0\t1\ndata\n1.5\t?\n2\t1\n";
        let p = read_patterns(text.as_bytes()).unwrap();
        assert_eq!(p.labels, [None, Some(1)]);
        assert!(ProcessedDataset::read_from(text.as_bytes()).is_err());
    }

    #[test]
    fn malformed_files() {
        assert!(read_patterns("punn-dataset 2\n".as_bytes()).is_err());
        let short = "punn-dataset 1\ninputs 1\nclasses 2\npatterns 2\nclass\ta\nclass\tb\nfeature\tx\t0\t1\ndata\n1.5\t0\n";
        assert!(matches!(read_patterns(short.as_bytes()), Err(Error::Parse { .. })));
        let ragged = "punn-dataset 1\ninputs 1\nclasses 2\npatterns 1\nclass\ta\nclass\tb\nfeature\tx\t0\t1\ndata\n1.5\t1.2\t0\n";
        assert!(matches!(read_patterns(ragged.as_bytes()), Err(Error::Parse { line: 9, .. })));
    }
}
