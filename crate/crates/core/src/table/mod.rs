//! Column-major tables with explicit missing cells.

mod csv_io;
mod schema;

use indexmap::IndexMap;

pub use csv_io::LoadOptions;
pub use schema::{ColumnKind, ColumnRole, ColumnSchema, TableSchema, DEFAULT_NULL_TOKENS};

use crate::error::{Error, Result};

/// Binary class label.
pub type Label = u8;

/// Cell storage for one column. `None` marks a missing cell.
#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    Numeric(Vec<Option<f64>>),
    Categorical(Vec<Option<String>>),
}

impl ColumnData {
    pub fn len(&self) -> usize {
        match self {
            ColumnData::Numeric(v) => v.len(),
            ColumnData::Categorical(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> ColumnKind {
        match self {
            ColumnData::Numeric(_) => ColumnKind::Numeric,
            ColumnData::Categorical(_) => ColumnKind::Categorical,
        }
    }

    pub fn missing_count(&self) -> usize {
        match self {
            ColumnData::Numeric(v) => v.iter().filter(|c| c.is_none()).count(),
            ColumnData::Categorical(v) => v.iter().filter(|c| c.is_none()).count(),
        }
    }

    pub fn is_missing(&self, row: usize) -> bool {
        match self {
            ColumnData::Numeric(v) => v[row].is_none(),
            ColumnData::Categorical(v) => v[row].is_none(),
        }
    }

    pub fn get(&self, row: usize) -> Option<Value<'_>> {
        match self {
            ColumnData::Numeric(v) => v[row].map(Value::Num),
            ColumnData::Categorical(v) => v[row].as_deref().map(Value::Cat),
        }
    }

    pub fn as_numeric(&self) -> Option<&[Option<f64>]> {
        match self {
            ColumnData::Numeric(v) => Some(v),
            ColumnData::Categorical(_) => None,
        }
    }

    pub fn as_categorical(&self) -> Option<&[Option<String>]> {
        match self {
            ColumnData::Categorical(v) => Some(v),
            ColumnData::Numeric(_) => None,
        }
    }

    fn take(&self, rows: &[usize]) -> ColumnData {
        match self {
            ColumnData::Numeric(v) => ColumnData::Numeric(rows.iter().map(|&r| v[r]).collect()),
            ColumnData::Categorical(v) => {
                ColumnData::Categorical(rows.iter().map(|&r| v[r].clone()).collect())
            }
        }
    }
}

/// A borrowed present cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value<'a> {
    Num(f64),
    Cat(&'a str),
}

/// Immutable column-major dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    schema: TableSchema,
    columns: Vec<ColumnData>,
    n_rows: usize,
}

impl Table {
    /// Builds a table, checking column lengths, kinds, and declared
    /// categories against the schema.
    pub fn new(schema: TableSchema, columns: Vec<ColumnData>) -> Result<Self> {
        if columns.len() != schema.len() {
            return Err(Error::InvalidSchema(format!(
                "{} columns supplied for a schema of {}",
                columns.len(),
                schema.len()
            )));
        }
        let n_rows = columns.first().map_or(0, ColumnData::len);
        for (decl, data) in schema.columns().iter().zip(&columns) {
            if data.len() != n_rows {
                return Err(Error::LengthMismatch(data.len(), n_rows));
            }
            if data.kind() != decl.kind {
                return Err(Error::WrongKind {
                    column: decl.name.clone(),
                    expected: decl.kind.as_str(),
                    actual: data.kind().as_str(),
                });
            }
            if let ColumnData::Categorical(cells) = data {
                if !decl.declared_values.is_empty() {
                    for (row, cell) in cells.iter().enumerate() {
                        if let Some(v) = cell {
                            if !decl.declared_values.contains(v) {
                                return Err(Error::UndeclaredCategory {
                                    row,
                                    column: decl.name.clone(),
                                    value: v.clone(),
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(Self {
            schema,
            columns,
            n_rows,
        })
    }

    pub fn schema(&self) -> &TableSchema {
        &self.schema
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> impl Iterator<Item = (&ColumnSchema, &ColumnData)> {
        self.schema.columns().iter().zip(&self.columns)
    }

    pub fn column_names(&self) -> Vec<&str> {
        self.schema.columns().iter().map(|c| c.name.as_str()).collect()
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.schema
            .index_of(name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    pub fn column(&self, name: &str) -> Result<&ColumnData> {
        Ok(&self.columns[self.column_index(name)?])
    }

    pub fn column_at(&self, index: usize) -> &ColumnData {
        &self.columns[index]
    }

    pub fn column_schema(&self, name: &str) -> Result<&ColumnSchema> {
        Ok(&self.schema.columns()[self.column_index(name)?])
    }

    pub fn get(&self, row: usize, column: usize) -> Option<Value<'_>> {
        self.columns[column].get(row)
    }

    /// Numeric column values with no missing cells allowed.
    pub fn numeric_values(&self, name: &str) -> Result<Vec<f64>> {
        let data = self.column(name)?;
        let cells = data.as_numeric().ok_or_else(|| Error::WrongKind {
            column: name.to_string(),
            expected: "numeric",
            actual: "categorical",
        })?;
        cells
            .iter()
            .enumerate()
            .map(|(row, c)| {
                c.ok_or_else(|| Error::MissingValue {
                    column: name.to_string(),
                    row,
                })
            })
            .collect()
    }

    /// Per-column count of missing cells, in schema order.
    pub fn missing_counts(&self) -> IndexMap<String, usize> {
        self.columns()
            .map(|(decl, data)| (decl.name.clone(), data.missing_count()))
            .collect()
    }

    pub fn total_missing(&self) -> usize {
        self.columns.iter().map(ColumnData::missing_count).sum()
    }

    /// New table holding the given rows (repeats allowed), in order.
    pub fn take_rows(&self, rows: &[usize]) -> Table {
        Table {
            schema: self.schema.clone(),
            columns: self.columns.iter().map(|c| c.take(rows)).collect(),
            n_rows: rows.len(),
        }
    }

    /// Rows of `self` followed by rows of `other`; schemas must match.
    pub fn concat(&self, other: &Table) -> Result<Table> {
        if self.schema.columns() != other.schema.columns() {
            return Err(Error::InvalidSchema("cannot concatenate differing schemas".into()));
        }
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| match (a, b) {
                (ColumnData::Numeric(a), ColumnData::Numeric(b)) => {
                    ColumnData::Numeric(a.iter().chain(b).copied().collect())
                }
                (ColumnData::Categorical(a), ColumnData::Categorical(b)) => {
                    ColumnData::Categorical(a.iter().chain(b).cloned().collect())
                }
                _ => unreachable!("schemas are equal"),
            })
            .collect();
        Ok(Table {
            schema: self.schema.clone(),
            columns,
            n_rows: self.n_rows + other.n_rows,
        })
    }

    /// The target column as 0/1 labels.
    pub fn target_labels(&self) -> Result<Vec<Label>> {
        let idx = self
            .schema
            .target_index()
            .ok_or_else(|| Error::InvalidSchema("no target column".into()))?;
        labels_from_column(&self.schema.columns()[idx].name, &self.columns[idx])
    }

    /// Separates modeling features from the binary target. Identifier and
    /// target columns are dropped from the feature table.
    pub fn split_columns(&self) -> Result<(Table, Vec<Label>)> {
        let target = self.target_labels()?;

        let (decls, cols): (Vec<_>, Vec<_>) = self
            .columns()
            .filter(|(decl, _)| decl.role == ColumnRole::Feature)
            .map(|(d, c)| (d.clone(), c.clone()))
            .unzip();
        let schema = TableSchema::without_target(decls)?.with_null_tokens(self.schema.null_tokens().to_vec());
        let features = Table {
            schema,
            columns: cols,
            n_rows: self.n_rows,
        };
        Ok((features, target))
    }

    /// Replaces the schema and storage wholesale; used by transforms that
    /// add or retype columns.
    pub(crate) fn from_parts(schema: TableSchema, columns: Vec<ColumnData>, n_rows: usize) -> Self {
        debug_assert!(columns.iter().all(|c| c.len() == n_rows));
        Self {
            schema,
            columns,
            n_rows,
        }
    }

    pub(crate) fn into_parts(self) -> (TableSchema, Vec<ColumnData>, usize) {
        (self.schema, self.columns, self.n_rows)
    }
}

fn labels_from_column(name: &str, data: &ColumnData) -> Result<Vec<Label>> {
    let cells = data.as_numeric().ok_or_else(|| Error::WrongKind {
        column: name.to_string(),
        expected: "numeric",
        actual: "categorical",
    })?;
    cells
        .iter()
        .enumerate()
        .map(|(row, cell)| match cell {
            None => Err(Error::MissingValue {
                column: name.to_string(),
                row,
            }),
            Some(v) if *v == 0.0 => Ok(0),
            Some(v) if *v == 1.0 => Ok(1),
            Some(v) => Err(Error::NonBinaryTarget { row, value: *v }),
        })
        .collect()
}

/// Class counts `[n0, n1]` of a label slice.
pub fn class_counts(labels: &[Label]) -> [usize; 2] {
    let ones = labels.iter().filter(|&&l| l == 1).count();
    [labels.len() - ones, ones]
}
