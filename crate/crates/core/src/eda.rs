//! Exploratory statistics: class-split category counts, histograms and
//! Pearson correlations.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::{ColumnData, ColumnKind, ColumnRole, Label, Table};

/// Counts split by target class: `[target 0, target 1]`.
pub type ClassSplit = [usize; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryCounts {
    pub category: String,
    pub counts: ClassSplit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoricalDistribution {
    pub column: String,
    pub categories: Vec<CategoryCounts>,
    pub missing: ClassSplit,
}

impl CategoricalDistribution {
    pub fn get(&self, category: &str) -> Option<ClassSplit> {
        self.categories
            .iter()
            .find(|c| c.category == category)
            .map(|c| c.counts)
    }

    /// Sum of every bucket including missing; equals the row count.
    pub fn total(&self) -> usize {
        self.categories.iter().map(|c| c.counts[0] + c.counts[1]).sum::<usize>()
            + self.missing[0]
            + self.missing[1]
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(["category", "target_0", "target_1", "total"])?;
        let rows = self
            .categories
            .iter()
            .map(|c| (c.category.as_str(), c.counts))
            .chain(std::iter::once(("(missing)", self.missing)));
        for (cat, [a, b]) in rows {
            wtr.write_record([cat.to_string(), a.to_string(), b.to_string(), (a + b).to_string()])?;
        }
        csv_finish(wtr)
    }
}

fn check_target(table: &Table, target: &[Label]) -> Result<()> {
    if target.len() != table.n_rows() {
        return Err(Error::LengthMismatch(table.n_rows(), target.len()));
    }
    Ok(())
}

/// Per-category target counts. Categories follow the schema's declared
/// order when present, otherwise ascending order.
pub fn categorical_distribution(
    table: &Table,
    column: &str,
    target: &[Label],
) -> Result<CategoricalDistribution> {
    check_target(table, target)?;
    let decl = table.column_schema(column)?;
    let cells = table.column(column)?.as_categorical().ok_or_else(|| Error::WrongKind {
        column: column.to_string(),
        expected: "categorical",
        actual: "numeric",
    })?;
    let mut counts: IndexMap<&str, ClassSplit> = decl
        .declared_values
        .iter()
        .map(|v| (v.as_str(), [0, 0]))
        .collect();
    let mut missing = [0, 0];
    for (cell, &label) in cells.iter().zip(target) {
        let slot = match cell {
            Some(v) => counts.entry(v.as_str()).or_insert([0, 0]),
            None => &mut missing,
        };
        slot[label as usize] += 1;
    }
    let declared = decl.declared_values.len();
    let mut categories: Vec<CategoryCounts> = counts
        .into_iter()
        .filter(|(_, c)| c[0] + c[1] > 0)
        .map(|(k, c)| CategoryCounts {
            category: k.to_string(),
            counts: c,
        })
        .collect();
    if declared == 0 {
        categories.sort_by(|a, b| a.category.cmp(&b.category));
    }
    Ok(CategoricalDistribution {
        column: decl.name.clone(),
        categories,
        missing,
    })
}

/// Equal-width histogram split by target class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericHistogram {
    pub column: String,
    /// `bins + 1` edges; a constant column has the two equal edges `[c, c]`.
    pub edges: Vec<f64>,
    pub counts: Vec<ClassSplit>,
    pub missing: ClassSplit,
}

impl NumericHistogram {
    pub fn totals(&self) -> Vec<usize> {
        self.counts.iter().map(|c| c[0] + c[1]).collect()
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(["bin_low", "bin_high", "target_0", "target_1", "total"])?;
        for (i, [a, b]) in self.counts.iter().enumerate() {
            wtr.write_record([
                self.edges[i].to_string(),
                self.edges[i + 1].to_string(),
                a.to_string(),
                b.to_string(),
                (a + b).to_string(),
            ])?;
        }
        wtr.write_record([
            "(missing)".into(),
            "(missing)".into(),
            self.missing[0].to_string(),
            self.missing[1].to_string(),
            (self.missing[0] + self.missing[1]).to_string(),
        ])?;
        csv_finish(wtr)
    }
}

/// Bins span `[min, max]` with equal width; the maximum lands in the last
/// bin.
pub fn numeric_distribution(
    table: &Table,
    column: &str,
    target: &[Label],
    n_bins: usize,
) -> Result<NumericHistogram> {
    check_target(table, target)?;
    if n_bins == 0 {
        return Err(Error::InvalidParameter("n_bins must be at least 1".into()));
    }
    let cells = table.column(column)?.as_numeric().ok_or_else(|| Error::WrongKind {
        column: column.to_string(),
        expected: "numeric",
        actual: "categorical",
    })?;
    let (min, max) = cells
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if min > max {
        return Err(Error::UnfittableColumn(column.to_string()));
    }
    let mut missing = [0, 0];
    if min == max {
        let mut counts = [0, 0];
        for (cell, &label) in cells.iter().zip(target) {
            match cell {
                Some(_) => counts[label as usize] += 1,
                None => missing[label as usize] += 1,
            }
        }
        return Ok(NumericHistogram {
            column: column.to_string(),
            edges: vec![min, max],
            counts: vec![counts],
            missing,
        });
    }
    let width = (max - min) / n_bins as f64;
    let mut edges: Vec<f64> = (0..n_bins).map(|i| min + i as f64 * width).collect();
    edges.push(max);
    let mut counts = vec![[0, 0]; n_bins];
    for (cell, &label) in cells.iter().zip(target) {
        match cell {
            Some(v) => {
                let bin = (((v - min) / width).floor() as usize).min(n_bins - 1);
                counts[bin][label as usize] += 1;
            }
            None => missing[label as usize] += 1,
        }
    }
    Ok(NumericHistogram {
        column: column.to_string(),
        edges,
        counts,
        missing,
    })
}

/// Pearson product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(Error::UndefinedCorrelation("fewer than two observations".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("zero variance".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Symmetric matrix of pairwise-complete Pearson coefficients. Undefined
/// entries (constant columns) are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    pub values: Vec<Vec<Option<f64>>>,
}

impl CorrelationMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.labels.iter().position(|l| l == a)?;
        let j = self.labels.iter().position(|l| l == b)?;
        self.values[i][j]
    }

    /// One row of the matrix keyed by column label.
    pub fn row(&self, label: &str) -> Option<IndexMap<String, Option<f64>>> {
        let i = self.labels.iter().position(|l| l == label)?;
        Some(self.labels.iter().cloned().zip(self.values[i].iter().copied()).collect())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        let mut header = vec![String::new()];
        header.extend(self.labels.iter().cloned());
        wtr.write_record(&header)?;
        for (label, row) in self.labels.iter().zip(&self.values) {
            let mut rec = vec![label.clone()];
            rec.extend(row.iter().map(|v| v.map(|x| format!("{x:.6}")).unwrap_or_default()));
            wtr.write_record(&rec)?;
        }
        csv_finish(wtr)
    }
}

fn pairwise_complete(a: &[Option<f64>], b: &[Option<f64>]) -> (Vec<f64>, Vec<f64>) {
    a.iter()
        .zip(b)
        .filter_map(|(x, y)| Some(((*x)?, (*y)?)))
        .unzip()
}

/// Correlations among every numeric column of the table (identifiers and
/// target included).
pub fn correlation_matrix(table: &Table) -> CorrelationMatrix {
    let numeric: Vec<(&str, &[Option<f64>])> = table
        .columns()
        .filter_map(|(d, c)| c.as_numeric().map(|v| (d.name.as_str(), v)))
        .collect();
    let k = numeric.len();
    let mut values = vec![vec![None; k]; k];
    for i in 0..k {
        for j in i..k {
            let (x, y) = pairwise_complete(numeric[i].1, numeric[j].1);
            let r = if i == j {
                pearson(&x, &y).ok().map(|_| 1.0)
            } else {
                pearson(&x, &y).ok()
            };
            values[i][j] = r;
            values[j][i] = r;
        }
    }
    CorrelationMatrix {
        labels: numeric.iter().map(|(n, _)| n.to_string()).collect(),
        values,
    }
}

/// Everything the exploratory pass produces for a labelled table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdaReport {
    pub target: String,
    pub n_rows: usize,
    pub missing: IndexMap<String, usize>,
    pub categorical: Vec<CategoricalDistribution>,
    pub numeric: Vec<NumericHistogram>,
    pub correlation: CorrelationMatrix,
}

pub const DEFAULT_BINS: usize = 10;

pub fn eda_report(table: &Table, n_bins: usize) -> Result<EdaReport> {
    let target = table.target_labels()?;
    let target_name = table.schema().columns()[table.schema().target_index().expect("labelled")]
        .name
        .clone();
    let mut categorical = Vec::new();
    let mut numeric = Vec::new();
    for (decl, data) in table.columns() {
        if decl.role == ColumnRole::Target {
            continue;
        }
        match decl.kind {
            ColumnKind::Categorical => {
                categorical.push(categorical_distribution(table, &decl.name, &target)?)
            }
            ColumnKind::Numeric => {
                if let ColumnData::Numeric(cells) = data {
                    if cells.iter().all(Option::is_none) {
                        continue;
                    }
                }
                numeric.push(numeric_distribution(table, &decl.name, &target, n_bins)?)
            }
        }
    }
    Ok(EdaReport {
        target: target_name,
        n_rows: table.n_rows(),
        missing: table.missing_counts(),
        categorical,
        numeric,
        correlation: correlation_matrix(table),
    })
}

impl EdaReport {
    /// Correlations of each numeric column with the target, the layout of a
    /// single "target" row.
    pub fn target_correlations(&self) -> IndexMap<String, Option<f64>> {
        self.correlation.row(&self.target).unwrap_or_default()
    }

    /// JSON summary: missing counts, the target correlation row and the full
    /// matrix.
    pub fn summary_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Summary<'a> {
            target: &'a str,
            n_rows: usize,
            missing: &'a IndexMap<String, usize>,
            target_correlation: IndexMap<String, Option<f64>>,
            correlation: &'a CorrelationMatrix,
        }
        Ok(serde_json::to_string_pretty(&Summary {
            target: &self.target,
            n_rows: self.n_rows,
            missing: &self.missing,
            target_correlation: self.target_correlations(),
            correlation: &self.correlation,
        })?)
    }

    /// `(file name, contents)` pairs: one CSV per distribution, the
    /// correlation matrix CSV and the JSON summary.
    pub fn files(&self) -> Result<Vec<(String, String)>> {
        let mut out = Vec::new();
        for d in &self.categorical {
            out.push((format!("dist_{}.csv", file_safe(&d.column)), d.to_csv_string()?));
        }
        for h in &self.numeric {
            out.push((format!("hist_{}.csv", file_safe(&h.column)), h.to_csv_string()?));
        }
        out.push(("correlation.csv".into(), self.correlation.to_csv_string()?));
        out.push(("eda_summary.json".into(), self.summary_json()?));
        Ok(out)
    }
}

fn file_safe(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' { c } else { '_' })
        .collect()
}

fn csv_finish(wtr: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = wtr
        .into_inner()
        .map_err(|e| Error::io("<csv buffer>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
