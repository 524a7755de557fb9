use std::collections::BTreeMap;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::{ColumnData, ColumnRole, Table};

/// Fill value learned for one column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", content = "value", rename_all = "snake_case")]
pub enum ImputeValue {
    Median(f64),
    Mode(String),
}

/// Fill values keyed by column name, in schema order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ImputeStats(pub IndexMap<String, ImputeValue>);

impl ImputeStats {
    pub fn get(&self, column: &str) -> Option<&ImputeValue> {
        self.0.get(column)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Median of the values; even counts average the middle pair.
/// Returns `None` for an empty slice.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    Some(if sorted.len().is_multiple_of(2) {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    } else {
        sorted[mid]
    })
}

/// Most frequent value; ties go to the lexicographically smallest.
pub fn mode<'a, I>(values: I) -> Option<String>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut freq: BTreeMap<&str, usize> = BTreeMap::new();
    for v in values {
        *freq.entry(v).or_default() += 1;
    }
    // BTreeMap iterates in ascending key order, so the first maximum wins.
    let mut best: Option<(&str, usize)> = None;
    for (k, n) in freq {
        if best.is_none_or(|(_, b)| n > b) {
            best = Some((k, n));
        }
    }
    best.map(|(k, _)| k.to_string())
}

/// Learns median (numeric) or mode (categorical) fill values for every
/// feature column.
pub fn fit_impute(table: &Table) -> Result<ImputeStats> {
    let mut stats = IndexMap::new();
    for (decl, data) in table.columns() {
        if decl.role != ColumnRole::Feature {
            continue;
        }
        let value = match data {
            ColumnData::Numeric(cells) => {
                let present: Vec<f64> = cells.iter().flatten().copied().collect();
                ImputeValue::Median(
                    median(&present).ok_or_else(|| Error::UnfittableColumn(decl.name.clone()))?,
                )
            }
            ColumnData::Categorical(cells) => ImputeValue::Mode(
                mode(cells.iter().flatten().map(String::as_str))
                    .ok_or_else(|| Error::UnfittableColumn(decl.name.clone()))?,
            ),
        };
        stats.insert(decl.name.clone(), value);
    }
    Ok(ImputeStats(stats))
}

/// Fills missing feature cells with the fitted values. Present cells and
/// non-feature columns are left as they are.
pub fn apply_impute(table: &Table, stats: &ImputeStats) -> Result<Table> {
    let (schema, columns, n_rows) = table.clone().into_parts();
    let mut out = Vec::with_capacity(columns.len());
    for (decl, data) in schema.columns().iter().zip(columns) {
        if decl.role != ColumnRole::Feature {
            out.push(data);
            continue;
        }
        let fill = stats
            .get(&decl.name)
            .ok_or_else(|| Error::Coverage(decl.name.clone()))?;
        out.push(match (data, fill) {
            (ColumnData::Numeric(cells), ImputeValue::Median(m)) => {
                ColumnData::Numeric(cells.into_iter().map(|c| Some(c.unwrap_or(*m))).collect())
            }
            (ColumnData::Categorical(cells), ImputeValue::Mode(m)) => ColumnData::Categorical(
                cells
                    .into_iter()
                    .map(|c| Some(c.unwrap_or_else(|| m.clone())))
                    .collect(),
            ),
            (data, _) => {
                return Err(Error::WrongKind {
                    column: decl.name.clone(),
                    expected: decl.kind.as_str(),
                    actual: match data.kind() {
                        crate::table::ColumnKind::Numeric => "numeric (mode-imputed)",
                        crate::table::ColumnKind::Categorical => "categorical (median-imputed)",
                    },
                })
            }
        });
    }
    Ok(Table::from_parts(schema, out, n_rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::{ColumnSchema, TableSchema};

    fn table(num: Vec<Option<f64>>, cat: Vec<Option<&str>>) -> Table {
        let n = num.len();
        let schema = TableSchema::new(vec![
            ColumnSchema::numeric("x"),
            ColumnSchema::categorical("c", Vec::<String>::new()),
            ColumnSchema::numeric("target").with_role(ColumnRole::Target),
        ])
        .unwrap();
        Table::new(
            schema,
            vec![
                ColumnData::Numeric(num),
                ColumnData::Categorical(cat.into_iter().map(|c| c.map(String::from)).collect()),
                ColumnData::Numeric(vec![Some(0.0); n]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn median_odd_and_even() {
        assert_eq!(median(&[1.0, 3.0, 5.0]), Some(3.0));
        assert_eq!(median(&[1.0, 2.0, 3.0, 10.0]), Some(2.5));
        assert_eq!(median(&[10.0, 1.0, 3.0, 2.0]), Some(2.5));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn mode_with_missing_and_ties() {
        let t = table(
            vec![Some(1.0), Some(1.0), Some(1.0), Some(1.0)],
            vec![Some("a"), Some("b"), Some("b"), None],
        );
        let stats = fit_impute(&t).unwrap();
        assert_eq!(stats.get("c"), Some(&ImputeValue::Mode("b".into())));
        assert_eq!(mode(["z", "a", "z", "a"]), Some("a".to_string()));
        assert!(stats.get("target").is_none());
    }

    #[test]
    fn fills_with_median() {
        let t = table(vec![Some(1.0), None, Some(5.0)], vec![Some("a"), Some("a"), None]);
        let stats = fit_impute(&t).unwrap();
        assert_eq!(stats.get("x"), Some(&ImputeValue::Median(3.0)));
        let filled = apply_impute(&t, &stats).unwrap();
        assert_eq!(filled.numeric_values("x").unwrap(), vec![1.0, 3.0, 5.0]);
        assert_eq!(filled.total_missing(), 0);
    }

    #[test]
    fn complete_table_is_unchanged() {
        let t = table(vec![Some(1.0), Some(2.0)], vec![Some("a"), Some("b")]);
        let stats = fit_impute(&t).unwrap();
        assert_eq!(apply_impute(&t, &stats).unwrap(), t);
    }

    #[test]
    fn all_missing_column_is_unfittable() {
        let t = table(vec![None, None], vec![Some("a"), Some("b")]);
        match fit_impute(&t) {
            Err(Error::UnfittableColumn(c)) => assert_eq!(c, "x"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn uncovered_column_is_an_error() {
        let t = table(vec![Some(1.0)], vec![Some("a")]);
        let mut stats = fit_impute(&t).unwrap();
        stats.0.shift_remove("c");
        assert!(matches!(apply_impute(&t, &stats), Err(Error::Coverage(c)) if c == "c"));
    }
}
