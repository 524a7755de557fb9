use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::{ColumnData, ColumnKind, ColumnRole, ColumnSchema, Table, TableSchema};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncodingKind {
    Label,
    OneHot,
}

/// How categories are ordered before codes are assigned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OrderPolicy {
    /// Ascending byte order of the category strings.
    #[default]
    Alphabetical,
    /// Order of the schema's declared values; undeclared categories follow
    /// alphabetically.
    SchemaOrder,
}

impl std::str::FromStr for OrderPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alphabetical" => Ok(OrderPolicy::Alphabetical),
            "schema_order" | "schema-order" => Ok(OrderPolicy::SchemaOrder),
            other => Err(Error::Config(format!("unknown encoding policy {other:?}"))),
        }
    }
}

pub const DEFAULT_ONE_HOT_THRESHOLD: usize = 5;

/// Category layout for one column. For label encoding a category's code is
/// its position in `categories`; for one-hot it is the indicator position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodingMap {
    pub column: String,
    pub kind: EncodingKind,
    pub order_policy: OrderPolicy,
    pub categories: Vec<String>,
}

impl EncodingMap {
    pub fn code(&self, category: &str) -> Option<usize> {
        self.categories.iter().position(|c| c == category)
    }

    pub fn decode(&self, code: usize) -> Option<&str> {
        self.categories.get(code).map(String::as_str)
    }

    /// Names of the columns this map produces.
    pub fn output_columns(&self) -> Vec<String> {
        match self.kind {
            EncodingKind::Label => vec![self.column.clone()],
            EncodingKind::OneHot => self
                .categories
                .iter()
                .map(|c| format!("{}={}", self.column, c))
                .collect(),
        }
    }
}

/// Chooses label or one-hot encoding for a categorical column: label when
/// the number of distinct present values is at most `one_hot_threshold`.
pub fn fit_encoding(
    decl: &ColumnSchema,
    data: &ColumnData,
    policy: OrderPolicy,
    one_hot_threshold: usize,
) -> Result<EncodingMap> {
    let cells = data.as_categorical().ok_or_else(|| Error::WrongKind {
        column: decl.name.clone(),
        expected: "categorical",
        actual: "numeric",
    })?;
    let distinct: BTreeSet<&str> = cells.iter().flatten().map(String::as_str).collect();
    if distinct.is_empty() {
        return Err(Error::UnfittableColumn(decl.name.clone()));
    }
    let categories: Vec<String> = match policy {
        OrderPolicy::Alphabetical => distinct.iter().map(|s| s.to_string()).collect(),
        OrderPolicy::SchemaOrder => {
            let mut ordered: Vec<String> = decl
                .declared_values
                .iter()
                .filter(|d| distinct.contains(d.as_str()))
                .cloned()
                .collect();
            ordered.extend(
                distinct
                    .iter()
                    .filter(|s| !decl.declared_values.iter().any(|d| d == *s))
                    .map(|s| s.to_string()),
            );
            ordered
        }
    };
    let kind = if categories.len() <= one_hot_threshold {
        EncodingKind::Label
    } else {
        EncodingKind::OneHot
    };
    Ok(EncodingMap {
        column: decl.name.clone(),
        kind,
        order_policy: policy,
        categories,
    })
}

/// Fits a map for every categorical feature column.
pub fn fit_encodings(
    table: &Table,
    policy: OrderPolicy,
    one_hot_threshold: usize,
) -> Result<Vec<EncodingMap>> {
    table
        .columns()
        .filter(|(d, _)| d.role == ColumnRole::Feature && d.kind == ColumnKind::Categorical)
        .map(|(d, c)| fit_encoding(d, c, policy, one_hot_threshold))
        .collect()
}

/// Replaces categorical feature columns with numeric codes or indicator
/// blocks. Non-feature columns pass through untouched.
pub fn apply_encoding(table: &Table, maps: &[EncodingMap]) -> Result<Table> {
    let by_name: HashMap<&str, &EncodingMap> = maps.iter().map(|m| (m.column.as_str(), m)).collect();
    let n_rows = table.n_rows();
    let mut decls = Vec::new();
    let mut columns = Vec::new();

    for (decl, data) in table.columns() {
        let cells = match data {
            ColumnData::Categorical(cells) if decl.role == ColumnRole::Feature => cells,
            _ => {
                decls.push(decl.clone());
                columns.push(data.clone());
                continue;
            }
        };
        let map = by_name
            .get(decl.name.as_str())
            .ok_or_else(|| Error::Coverage(decl.name.clone()))?;
        let mut codes = Vec::with_capacity(n_rows);
        for (row, cell) in cells.iter().enumerate() {
            let value = cell.as_deref().ok_or_else(|| Error::MissingValue {
                column: decl.name.clone(),
                row,
            })?;
            codes.push(map.code(value).ok_or_else(|| Error::UnseenCategory {
                column: decl.name.clone(),
                value: value.to_string(),
            })?);
        }
        match map.kind {
            EncodingKind::Label => {
                decls.push(ColumnSchema::numeric(decl.name.clone()));
                columns.push(ColumnData::Numeric(
                    codes.iter().map(|&c| Some(c as f64)).collect(),
                ));
            }
            EncodingKind::OneHot => {
                for (k, name) in map.output_columns().into_iter().enumerate() {
                    decls.push(ColumnSchema::numeric(name));
                    columns.push(ColumnData::Numeric(
                        codes
                            .iter()
                            .map(|&c| Some(if c == k { 1.0 } else { 0.0 }))
                            .collect(),
                    ));
                }
            }
        }
    }

    let schema = rebuild_schema(table.schema(), decls)?;
    Ok(Table::from_parts(schema, columns, n_rows))
}

pub(crate) fn rebuild_schema(original: &TableSchema, decls: Vec<ColumnSchema>) -> Result<TableSchema> {
    let schema = if original.target_index().is_some() {
        TableSchema::new(decls)?
    } else {
        TableSchema::without_target(decls)?
    };
    Ok(schema.with_null_tokens(original.null_tokens().to_vec()))
}
