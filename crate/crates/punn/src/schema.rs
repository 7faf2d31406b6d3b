//! Column schemas: one line per column, `name,kind[,value...]`.
//!
//! Kinds are `continuous`, `nominal` (followed by its vocabulary), `class`
//! (followed by the class labels in index order) and `ignore` (column is read
//! but dropped, e.g. record ids). Blank lines and lines starting with `#` are
//! skipped.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnKind {
    Continuous,
    Nominal(Vec<String>),
    Class(Vec<String>),
    Ignore,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub kind: ColumnKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    columns: Vec<Column>,
    class_index: usize,
}

impl Schema {
    pub fn new(columns: Vec<Column>) -> Result<Self> {
        let mut class_index = None;
        for (i, col) in columns.iter().enumerate() {
            match &col.kind {
                ColumnKind::Class(labels) => {
                    if class_index.replace(i).is_some() {
                        return Err(Error::Schema("more than one class column".into()));
                    }
                    if labels.len() < 2 {
                        return Err(Error::Schema(format!(
                            "class column {} needs at least two labels",
                            col.name
                        )));
                    }
                    check_unique(&col.name, labels)?;
                }
                ColumnKind::Nominal(values) => {
                    if values.is_empty() {
                        return Err(Error::Schema(format!(
                            "nominal column {} has an empty vocabulary",
                            col.name
                        )));
                    }
                    check_unique(&col.name, values)?;
                }
                ColumnKind::Continuous | ColumnKind::Ignore => {}
            }
        }
        let class_index =
            class_index.ok_or_else(|| Error::Schema("no class column".into()))?;
        Ok(Schema {
            columns,
            class_index,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut columns = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split(',').map(str::trim);
            let name = fields.next().unwrap_or_default().to_string();
            let kind = fields.next().unwrap_or_default();
            let values: Vec<String> = fields.map(str::to_string).collect();
            if name.is_empty() {
                return Err(Error::parse(n + 1, "empty column name"));
            }
            let kind = match kind {
                "continuous" => ColumnKind::Continuous,
                "ignore" => ColumnKind::Ignore,
                "nominal" => ColumnKind::Nominal(values.clone()),
                "class" => ColumnKind::Class(values.clone()),
                other => return Err(Error::parse(n + 1, format!("unknown column kind {other:?}"))),
            };
            if !values.is_empty() && matches!(kind, ColumnKind::Continuous | ColumnKind::Ignore) {
                return Err(Error::parse(n + 1, "only nominal and class columns take values"));
            }
            columns.push(Column { name, kind });
        }
        Schema::new(columns)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Schema::parse(&text)
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn class_index(&self) -> usize {
        self.class_index
    }

    pub fn class_labels(&self) -> &[String] {
        match &self.columns[self.class_index].kind {
            ColumnKind::Class(labels) => labels,
            _ => unreachable!("class_index points at the class column"),
        }
    }

    /// Columns that become model inputs: everything except the class column
    /// and ignored columns, in file order.
    pub fn feature_columns(&self) -> impl Iterator<Item = &Column> {
        self.columns
            .iter()
            .filter(|c| !matches!(c.kind, ColumnKind::Class(_) | ColumnKind::Ignore))
    }
}

fn check_unique(column: &str, values: &[String]) -> Result<()> {
    for (i, v) in values.iter().enumerate() {
        if values[..i].contains(v) {
            return Err(Error::Schema(format!("column {column}: duplicate value {v:?}")));
        }
    }
    Ok(())
}
