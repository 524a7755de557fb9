use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::{ColumnData, ColumnRole, Table};

/// Per-column divisors (maximum absolute value seen at fit time, or 1 for
/// an all-zero column).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ScaleFactors(pub IndexMap<String, f64>);

impl ScaleFactors {
    pub fn get(&self, column: &str) -> Option<f64> {
        self.0.get(column).copied()
    }
}

pub fn fit_scale(table: &Table) -> Result<ScaleFactors> {
    let mut factors = IndexMap::new();
    for (decl, data) in table.columns() {
        if decl.role != ColumnRole::Feature {
            continue;
        }
        let cells = match data {
            ColumnData::Numeric(cells) => cells,
            ColumnData::Categorical(_) => {
                return Err(Error::WrongKind {
                    column: decl.name.clone(),
                    expected: "numeric",
                    actual: "categorical",
                })
            }
        };
        let max_abs = cells.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
        let factor = if max_abs > 0.0 && max_abs.is_finite() { max_abs } else { 1.0 };
        factors.insert(decl.name.clone(), factor);
    }
    Ok(ScaleFactors(factors))
}

pub fn apply_scale(table: &Table, factors: &ScaleFactors) -> Result<Table> {
    let (schema, columns, n_rows) = table.clone().into_parts();
    let mut out = Vec::with_capacity(columns.len());
    for (decl, data) in schema.columns().iter().zip(columns) {
        if decl.role != ColumnRole::Feature {
            out.push(data);
            continue;
        }
        let factor = factors
            .get(&decl.name)
            .ok_or_else(|| Error::Coverage(decl.name.clone()))?;
        match data {
            ColumnData::Numeric(cells) => out.push(ColumnData::Numeric(
                cells.into_iter().map(|c| c.map(|v| v / factor)).collect(),
            )),
            ColumnData::Categorical(_) => {
                return Err(Error::WrongKind {
                    column: decl.name.clone(),
                    expected: "numeric",
                    actual: "categorical",
                })
            }
        }
    }
    Ok(Table::from_parts(schema, out, n_rows))
}
