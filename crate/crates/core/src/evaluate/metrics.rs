use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::Label;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    #[serde(rename = "f1-score")]
    pub f1: f64,
    pub support: usize,
}

/// Confusion counts with class 1 as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Confusion {
    pub fn from_labels(y_true: &[Label], y_pred: &[Label]) -> Self {
        let mut c = Confusion::default();
        for (&t, &p) in y_true.iter().zip(y_pred) {
            match (t, p) {
                (1, 1) => c.tp += 1,
                (0, 1) => c.fp += 1,
                (0, 0) => c.tn += 1,
                _ => c.fn_ += 1,
            }
        }
        c
    }

    /// The same counts with class 0 treated as positive.
    pub fn flipped(self) -> Self {
        Confusion {
            tp: self.tn,
            fp: self.fn_,
            tn: self.tp,
            fn_: self.fp,
        }
    }
}

/// Per-class precision/recall/f1/support plus accuracy and averages, laid
/// out like a classification report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    #[serde(rename = "0")]
    pub class_0: ClassMetrics,
    #[serde(rename = "1")]
    pub class_1: ClassMetrics,
    pub accuracy: f64,
    #[serde(rename = "macro avg")]
    pub macro_avg: ClassMetrics,
    #[serde(rename = "weighted avg")]
    pub weighted_avg: ClassMetrics,
    pub confusion: Confusion,
    /// Metrics whose denominator was zero and were reported as 0.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub undefined: Vec<String>,
}

fn ratio(num: usize, den: usize, name: String, undefined: &mut Vec<String>) -> f64 {
    if den == 0 {
        undefined.push(name);
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn class_metrics(c: Confusion, class: u8, undefined: &mut Vec<String>) -> ClassMetrics {
    let precision = ratio(c.tp, c.tp + c.fp, format!("precision[{class}]"), undefined);
    let recall = ratio(c.tp, c.tp + c.fn_, format!("recall[{class}]"), undefined);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    ClassMetrics {
        precision,
        recall,
        f1,
        support: c.tp + c.fn_,
    }
}

pub fn metrics(y_true: &[Label], y_pred: &[Label]) -> Result<EvaluationReport> {
    if y_true.len() != y_pred.len() {
        return Err(Error::LengthMismatch(y_true.len(), y_pred.len()));
    }
    if y_true.is_empty() {
        return Err(Error::Empty("metrics of no predictions"));
    }
    if let Some(row) = y_true.iter().chain(y_pred).position(|&l| l > 1) {
        let v = y_true.iter().chain(y_pred).nth(row).copied().unwrap_or(0);
        return Err(Error::NonBinaryTarget {
            row: row % y_true.len(),
            value: v as f64,
        });
    }
    let confusion = Confusion::from_labels(y_true, y_pred);
    let mut undefined = Vec::new();
    let class_0 = class_metrics(confusion.flipped(), 0, &mut undefined);
    let class_1 = class_metrics(confusion, 1, &mut undefined);
    let total = y_true.len();
    let accuracy = (confusion.tp + confusion.tn) as f64 / total as f64;
    let avg = |w0: f64, w1: f64| ClassMetrics {
        precision: w0 * class_0.precision + w1 * class_1.precision,
        recall: w0 * class_0.recall + w1 * class_1.recall,
        f1: w0 * class_0.f1 + w1 * class_1.f1,
        support: total,
    };
    let macro_avg = avg(0.5, 0.5);
    let weighted_avg = avg(
        class_0.support as f64 / total as f64,
        class_1.support as f64 / total as f64,
    );
    Ok(EvaluationReport {
        class_0,
        class_1,
        accuracy,
        macro_avg,
        weighted_avg,
        confusion,
        undefined,
    })
}

impl EvaluationReport {
    pub fn total(&self) -> usize {
        self.class_0.support + self.class_1.support
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl fmt::Display for EvaluationReport {
    /// Plain-text table: one row per class, then accuracy, macro and
    /// weighted averages.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>12} {:>9} {:>9} {:>9} {:>9}", "", "precision", "recall", "f1-score", "support")?;
        writeln!(f)?;
        for (name, m) in [("0", &self.class_0), ("1", &self.class_1)] {
            writeln!(
                f,
                "{:>12} {:>9.2} {:>9.2} {:>9.2} {:>9}",
                name, m.precision, m.recall, m.f1, m.support
            )?;
        }
        writeln!(f)?;
        writeln!(f, "{:>12} {:>9} {:>9} {:>9.2} {:>9}", "accuracy", "", "", self.accuracy, self.total())?;
        for (name, m) in [("macro avg", &self.macro_avg), ("weighted avg", &self.weighted_avg)] {
            writeln!(
                f,
                "{:>12} {:>9.2} {:>9.2} {:>9.2} {:>9}",
                name, m.precision, m.recall, m.f1, m.support
            )?;
        }
        Ok(())
    }
}
