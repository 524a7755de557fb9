//! Logistic-regression baseline and the cross-validated model comparison.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluate::{cross_validate, CvScheme};
use crate::model::ModelSpec;
use crate::table::{ColumnData, Label, Table};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRegConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            epochs: 500,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub features: Vec<String>,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub config: LogRegConfig,
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn dot(w: &[f64], x: &[f64]) -> f64 {
    w.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// Mean binary cross-entropy.
pub fn log_loss(weights: &[f64], bias: f64, rows: &[Vec<f64>], target: &[Label]) -> f64 {
    let n = rows.len() as f64;
    rows.iter()
        .zip(target)
        .map(|(x, &y)| {
            let z = dot(weights, x) + bias;
            softplus(z) - f64::from(y) * z
        })
        .sum::<f64>()
        / n
}

/// Gradient of [`log_loss`] with respect to the weights and the bias.
pub fn log_loss_gradient(
    weights: &[f64],
    bias: f64,
    rows: &[Vec<f64>],
    target: &[Label],
) -> (Vec<f64>, f64) {
    let n = rows.len() as f64;
    let mut gw = vec![0.0; weights.len()];
    let mut gb = 0.0;
    for (x, &y) in rows.iter().zip(target) {
        let err = sigmoid(dot(weights, x) + bias) - f64::from(y);
        for (g, xi) in gw.iter_mut().zip(x) {
            *g += err * xi;
        }
        gb += err;
    }
    gw.iter_mut().for_each(|g| *g /= n);
    (gw, gb / n)
}

/// Row-major copy of an all-numeric, complete, finite table.
pub fn design_matrix(features: &Table) -> Result<Vec<Vec<f64>>> {
    let mut cols = Vec::with_capacity(features.n_columns());
    for (decl, data) in features.columns() {
        let cells = match data {
            ColumnData::Numeric(c) => c,
            ColumnData::Categorical(_) => {
                return Err(Error::WrongKind {
                    column: decl.name.clone(),
                    expected: "numeric",
                    actual: "categorical",
                })
            }
        };
        let mut col = Vec::with_capacity(cells.len());
        for (row, c) in cells.iter().enumerate() {
            let v = c.ok_or_else(|| Error::MissingValue {
                column: decl.name.clone(),
                row,
            })?;
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "non-finite value in column {} at row {row}",
                    decl.name
                )));
            }
            col.push(v);
        }
        cols.push(col);
    }
    Ok((0..features.n_rows())
        .map(|r| cols.iter().map(|c| c[r]).collect())
        .collect())
}

impl LogisticModel {
    /// Full-batch gradient descent from zero weights.
    pub fn fit(features: &Table, target: &[Label], config: LogRegConfig) -> Result<Self> {
        Self::fit_traced(features, target, config).map(|(m, _)| m)
    }

    /// As [`LogisticModel::fit`], also returning the training loss before
    /// each epoch and after the last one.
    pub fn fit_traced(
        features: &Table,
        target: &[Label],
        config: LogRegConfig,
    ) -> Result<(Self, Vec<f64>)> {
        if target.len() != features.n_rows() {
            return Err(Error::LengthMismatch(features.n_rows(), target.len()));
        }
        if target.is_empty() {
            return Err(Error::Empty("logistic regression training set"));
        }
        if let Some(row) = target.iter().position(|&l| l > 1) {
            return Err(Error::NonBinaryTarget {
                row,
                value: target[row] as f64,
            });
        }
        let rows = design_matrix(features)?;
        let mut weights = vec![0.0; features.n_columns()];
        let mut bias = 0.0;
        let mut history = Vec::with_capacity(config.epochs + 1);
        for _ in 0..config.epochs {
            history.push(log_loss(&weights, bias, &rows, target));
            let (gw, gb) = log_loss_gradient(&weights, bias, &rows, target);
            for (w, g) in weights.iter_mut().zip(gw) {
                *w -= config.learning_rate * g;
            }
            bias -= config.learning_rate * gb;
        }
        history.push(log_loss(&weights, bias, &rows, target));
        Ok((
            Self {
                features: features.column_names().into_iter().map(String::from).collect(),
                weights,
                bias,
                config,
            },
            history,
        ))
    }

    /// Probability of class 1 and the label (1 iff probability >= 0.5).
    pub fn predict_row(&self, row: &[f64]) -> Result<(f64, Label)> {
        if row.len() != self.weights.len() {
            return Err(Error::LengthMismatch(self.weights.len(), row.len()));
        }
        let p = sigmoid(dot(&self.weights, row) + self.bias);
        Ok((p, u8::from(p >= 0.5)))
    }

    pub fn predict_proba_table(&self, features: &Table) -> Result<Vec<f64>> {
        let columns = self
            .features
            .iter()
            .map(|name| {
                let data = features.column(name)?;
                data.as_numeric().ok_or_else(|| Error::WrongKind {
                    column: name.clone(),
                    expected: "numeric",
                    actual: "categorical",
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut row = vec![0.0; columns.len()];
        (0..features.n_rows())
            .map(|r| {
                for ((slot, col), name) in row.iter_mut().zip(&columns).zip(&self.features) {
                    *slot = col[r].ok_or_else(|| Error::MissingValue {
                        column: name.clone(),
                        row: r,
                    })?;
                }
                self.predict_row(&row).map(|(p, _)| p)
            })
            .collect()
    }

    pub fn predict_table(&self, features: &Table) -> Result<Vec<Label>> {
        Ok(self
            .predict_proba_table(features)?
            .into_iter()
            .map(|p| u8::from(p >= 0.5))
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub model: String,
    pub accuracy: f64,
}

/// Models ranked by cross-validated accuracy (highest first; ties keep
/// registration order).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub scheme: CvScheme,
    pub seed: u64,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub fn accuracy_of(&self, model: &str) -> Option<f64> {
        self.rows.iter().find(|r| r.model == model).map(|r| r.accuracy)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("model,accuracy\n");
        for r in &self.rows {
            out.push_str(&format!("{},{:.6}\n", r.model, r.accuracy));
        }
        out
    }
}

/// Evaluates every model under the same cross-validation scheme, seed and
/// oversampling setting.
pub fn compare_models(
    features: &Table,
    target: &[Label],
    models: &[ModelSpec],
    scheme: CvScheme,
    seed: u64,
    oversample: bool,
) -> Result<ComparisonTable> {
    if models.is_empty() {
        return Err(Error::InvalidParameter("no models to compare".into()));
    }
    let mut rows = models
        .iter()
        .map(|spec| {
            let cv = cross_validate(spec, features, target, scheme, seed, oversample)?;
            Ok(ComparisonRow {
                model: spec.name().to_string(),
                accuracy: cv.mean_accuracy,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| b.accuracy.total_cmp(&a.accuracy));
    Ok(ComparisonTable { scheme, seed, rows })
}
