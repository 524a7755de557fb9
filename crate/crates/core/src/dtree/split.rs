use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::{ColumnData, Label, Table};

/// Gains closer than this are treated as equal.
pub const TIE_TOLERANCE: f64 = 1e-9;
/// A split must gain more than this to be taken.
pub const MIN_GAIN: f64 = 1e-12;

/// Shannon entropy in bits of a class-count vector, with `0 log 0 = 0`.
pub fn entropy(counts: &[usize]) -> Result<f64> {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return Err(Error::Empty("entropy of an empty count vector"));
    }
    Ok(entropy_unchecked(counts, total))
}

pub(crate) fn entropy_unchecked(counts: &[usize], total: usize) -> f64 {
    let n = total as f64;
    let h: f64 = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum();
    // a pure node can come out as -0.0
    h.max(0.0)
}

/// Arithmetic mean used as the binary cut point for numeric columns;
/// rows with value `>= threshold` go to the upper branch.
pub fn numeric_threshold(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty("numeric threshold of no values"));
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SplitKind {
    CategoricalMultiway,
    NumericThreshold { threshold: f64 },
}

/// One child of a candidate split with its class counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    /// Category name, or `">=θ"` / `"<θ"` for numeric splits.
    pub value: String,
    pub counts: [usize; 2],
    pub entropy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitCandidate {
    pub column: String,
    pub kind: SplitKind,
    pub parent_entropy: f64,
    pub conditional_entropy: f64,
    pub information_gain: f64,
    pub branches: Vec<Branch>,
}

impl SplitCandidate {
    /// A numeric split that leaves one side empty, or a categorical column
    /// with a single value at this node.
    pub fn is_degenerate(&self) -> bool {
        self.branches.iter().filter(|b| b.counts[0] + b.counts[1] > 0).count() < 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    #[default]
    FirstInSchemaOrder,
    Random,
}

/// Outcome of split selection: the winner plus every evaluated candidate
/// ranked by gain, so callers can enumerate tied alternatives.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitChoice {
    pub best: SplitCandidate,
    /// Candidates whose gain equals the winner's (winner excluded).
    pub tied_with_best: Vec<SplitCandidate>,
    /// All candidates, descending gain, input order within equal gains.
    pub ranked: Vec<SplitCandidate>,
}

impl SplitChoice {
    /// Groups of two or more positive-gain candidates with equal gain.
    pub fn tie_groups(&self) -> Vec<Vec<&SplitCandidate>> {
        let mut groups: Vec<Vec<&SplitCandidate>> = Vec::new();
        for c in self.ranked.iter().filter(|c| c.information_gain > MIN_GAIN) {
            match groups.last_mut() {
                Some(g) if (g[0].information_gain - c.information_gain).abs() <= TIE_TOLERANCE => g.push(c),
                _ => groups.push(vec![c]),
            }
        }
        groups.retain(|g| g.len() > 1);
        groups
    }
}

/// Column values prepared for split evaluation: numeric values or dense
/// category codes.
#[derive(Debug, Clone)]
pub(crate) enum FeatureColumn {
    Numeric(Vec<f64>),
    Categorical { codes: Vec<usize>, categories: Vec<String> },
}

impl FeatureColumn {
    pub(crate) fn from_data(name: &str, data: &ColumnData) -> Result<Self> {
        let missing = |row| Error::MissingValue {
            column: name.to_string(),
            row,
        };
        match data {
            ColumnData::Numeric(cells) => cells
                .iter()
                .enumerate()
                .map(|(r, c)| c.ok_or_else(|| missing(r)))
                .collect::<Result<Vec<_>>>()
                .map(FeatureColumn::Numeric),
            ColumnData::Categorical(cells) => {
                let values = cells
                    .iter()
                    .enumerate()
                    .map(|(r, c)| c.as_deref().ok_or_else(|| missing(r)))
                    .collect::<Result<Vec<&str>>>()?;
                let mut categories: Vec<String> = values.iter().map(|s| s.to_string()).collect();
                categories.sort();
                categories.dedup();
                let codes = values
                    .iter()
                    .map(|v| categories.binary_search_by(|c| c.as_str().cmp(v)).expect("present"))
                    .collect();
                Ok(FeatureColumn::Categorical { codes, categories })
            }
        }
    }

    pub(crate) fn is_categorical(&self) -> bool {
        matches!(self, FeatureColumn::Categorical { .. })
    }
}

fn branch(value: String, counts: [usize; 2]) -> Branch {
    let total = counts[0] + counts[1];
    Branch {
        value,
        counts,
        entropy: if total == 0 { 0.0 } else { entropy_unchecked(&counts, total) },
    }
}

/// Evaluates splitting `rows` on one column.
pub(crate) fn evaluate(
    name: &str,
    column: &FeatureColumn,
    target: &[Label],
    rows: &[usize],
) -> SplitCandidate {
    let mut parent = [0usize; 2];
    for &r in rows {
        parent[target[r] as usize] += 1;
    }
    let n = rows.len();
    let parent_entropy = entropy_unchecked(&parent, n);

    let (kind, branches) = match column {
        FeatureColumn::Categorical { codes, categories } => {
            let mut counts = vec![[0usize; 2]; categories.len()];
            for &r in rows {
                counts[codes[r]][target[r] as usize] += 1;
            }
            let branches = categories
                .iter()
                .zip(counts)
                .filter(|(_, c)| c[0] + c[1] > 0)
                .map(|(cat, c)| branch(cat.clone(), c))
                .collect();
            (SplitKind::CategoricalMultiway, branches)
        }
        FeatureColumn::Numeric(values) => {
            let threshold = rows.iter().map(|&r| values[r]).sum::<f64>() / n as f64;
            let mut upper = [0usize; 2];
            let mut lower = [0usize; 2];
            for &r in rows {
                if values[r] >= threshold {
                    upper[target[r] as usize] += 1;
                } else {
                    lower[target[r] as usize] += 1;
                }
            }
            (
                SplitKind::NumericThreshold { threshold },
                vec![
                    branch(format!(">={threshold}"), upper),
                    branch(format!("<{threshold}"), lower),
                ],
            )
        }
    };

    let occupied = branches.iter().filter(|b| b.counts[0] + b.counts[1] > 0).count();
    let conditional_entropy = if occupied < 2 {
        parent_entropy
    } else {
        branches
            .iter()
            .map(|b| (b.counts[0] + b.counts[1]) as f64 / n as f64 * b.entropy)
            .sum()
    };
    SplitCandidate {
        column: name.to_string(),
        kind,
        parent_entropy,
        conditional_entropy,
        information_gain: parent_entropy - conditional_entropy,
        branches,
    }
}

/// Picks the maximal-gain candidate, or `None` when nothing gains.
pub(crate) fn choose<R: Rng + ?Sized>(
    mut candidates: Vec<SplitCandidate>,
    tie_policy: TiePolicy,
    rng: &mut R,
) -> Option<SplitChoice> {
    let max = candidates
        .iter()
        .map(|c| c.information_gain)
        .fold(f64::NEG_INFINITY, f64::max);
    if max.is_nan() || max <= MIN_GAIN {
        return None;
    }
    let tied: Vec<usize> = (0..candidates.len())
        .filter(|&i| max - candidates[i].information_gain <= TIE_TOLERANCE)
        .collect();
    let pick = match tie_policy {
        TiePolicy::FirstInSchemaOrder => tied[0],
        TiePolicy::Random if tied.len() > 1 => tied[rng.gen_range(0..tied.len())],
        TiePolicy::Random => tied[0],
    };
    let best = candidates[pick].clone();
    let tied_with_best = tied
        .iter()
        .filter(|&&i| i != pick)
        .map(|&i| candidates[i].clone())
        .collect();
    // stable sort keeps input order among equal gains
    candidates.sort_by(|a, b| b.information_gain.total_cmp(&a.information_gain));
    Some(SplitChoice {
        best,
        tied_with_best,
        ranked: candidates,
    })
}

fn prepare(table: &Table, column: &str, target: &[Label]) -> Result<FeatureColumn> {
    if target.len() != table.n_rows() {
        return Err(Error::LengthMismatch(table.n_rows(), target.len()));
    }
    if table.n_rows() == 0 {
        return Err(Error::Empty("split evaluation on an empty table"));
    }
    FeatureColumn::from_data(column, table.column(column)?)
}

/// Size-weighted entropy of the target after partitioning on `column`
/// (numeric columns are cut at their mean).
pub fn conditional_entropy(table: &Table, column: &str, target: &[Label]) -> Result<SplitCandidate> {
    information_gain(table, column, target)
}

/// Information gain of splitting the whole table on `column`.
pub fn information_gain(table: &Table, column: &str, target: &[Label]) -> Result<SplitCandidate> {
    let prepared = prepare(table, column, target)?;
    let rows: Vec<usize> = (0..table.n_rows()).collect();
    let name = &table.column_schema(column)?.name;
    Ok(evaluate(name, &prepared, target, &rows))
}

/// Best split among `candidates` over the whole table. `Ok(None)` means no
/// candidate has positive gain.
pub fn best_split<R: Rng + ?Sized>(
    table: &Table,
    target: &[Label],
    candidates: &[&str],
    tie_policy: TiePolicy,
    rng: &mut R,
) -> Result<Option<SplitChoice>> {
    if candidates.is_empty() {
        return Err(Error::Empty("best_split needs at least one candidate"));
    }
    let evaluated = candidates
        .iter()
        .map(|c| information_gain(table, c, target))
        .collect::<Result<Vec<_>>>()?;
    Ok(choose(evaluated, tie_policy, rng))
}
