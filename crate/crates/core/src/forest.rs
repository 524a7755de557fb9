//! Bagged ensembles of entropy trees with per-node feature sampling and
//! majority voting.

use indexmap::IndexMap;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dtree::{DecisionTree, FeatureColumn, TiePolicy, TreeParams};
use crate::error::{Error, Result};
use crate::table::{Label, Table};

/// Number of columns drawn at each node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SubsetSize {
    /// `ceil(sqrt(p))`
    #[default]
    Sqrt,
    All,
    Fixed(usize),
}

impl SubsetSize {
    pub fn resolve(self, n_features: usize) -> Result<usize> {
        match self {
            SubsetSize::All => Ok(n_features),
            SubsetSize::Sqrt => Ok(((n_features as f64).sqrt().ceil() as usize).max(1)),
            SubsetSize::Fixed(k) if k == 0 || k > n_features => Err(Error::InvalidParameter(format!(
                "feature subset size {k} outside 1..={n_features}"
            ))),
            SubsetSize::Fixed(k) => Ok(k),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_estimators: usize,
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    pub feature_subset_size: SubsetSize,
    pub bootstrap: bool,
    pub tie_policy: TiePolicy,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_estimators: 100,
            max_depth: None,
            min_samples_leaf: 1,
            feature_subset_size: SubsetSize::Sqrt,
            bootstrap: true,
            tie_policy: TiePolicy::FirstInSchemaOrder,
            seed: 0,
        }
    }
}

impl ForestParams {
    pub fn validate(&self, n_features: usize) -> Result<()> {
        if self.n_estimators == 0 {
            return Err(Error::InvalidParameter("n_estimators must be at least 1".into()));
        }
        self.feature_subset_size.resolve(n_features)?;
        Ok(())
    }
}

/// Row indices drawn uniformly with replacement, as many as there are rows.
pub fn bootstrap_indices<R: Rng + ?Sized>(n_rows: usize, rng: &mut R) -> Vec<usize> {
    (0..n_rows).map(|_| rng.gen_range(0..n_rows)).collect()
}

/// Materialized bootstrap resample of a table and its target.
pub fn bootstrap_sample<R: Rng + ?Sized>(
    table: &Table,
    target: &[Label],
    rng: &mut R,
) -> Result<(Table, Vec<Label>)> {
    if table.n_rows() == 0 {
        return Err(Error::Empty("bootstrap sample of an empty table"));
    }
    if target.len() != table.n_rows() {
        return Err(Error::LengthMismatch(table.n_rows(), target.len()));
    }
    let idx = bootstrap_indices(table.n_rows(), rng);
    let y = idx.iter().map(|&i| target[i]).collect();
    Ok((table.take_rows(&idx), y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Vote {
    pub label: Label,
    /// Trees voting for class 0 and class 1.
    pub tally: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    pub params: ForestParams,
    pub features: Vec<String>,
    pub trees: Vec<DecisionTree>,
    pub feature_importances: IndexMap<String, f64>,
}

impl RandomForest {
    /// Tree `i` is grown from seed `params.seed + i`, so the result does not
    /// depend on how trees are scheduled across threads.
    pub fn fit(features: &Table, target: &[Label], params: ForestParams) -> Result<Self> {
        if target.len() != features.n_rows() {
            return Err(Error::LengthMismatch(features.n_rows(), target.len()));
        }
        if features.n_rows() == 0 {
            return Err(Error::Empty("random forest training set"));
        }
        if let Some(row) = target.iter().position(|&l| l > 1) {
            return Err(Error::NonBinaryTarget {
                row,
                value: target[row] as f64,
            });
        }
        params.validate(features.n_columns())?;
        let subset = params.feature_subset_size.resolve(features.n_columns())?;
        let names: Vec<String> = features.column_names().into_iter().map(String::from).collect();
        let columns = features
            .columns()
            .map(|(d, c)| FeatureColumn::from_data(&d.name, c))
            .collect::<Result<Vec<_>>>()?;
        let n = features.n_rows();

        let trees: Vec<DecisionTree> = (0..params.n_estimators)
            .into_par_iter()
            .map(|i| {
                let seed = params.seed.wrapping_add(i as u64);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let rows = if params.bootstrap {
                    bootstrap_indices(n, &mut rng)
                } else {
                    (0..n).collect()
                };
                let tree_params = TreeParams {
                    max_depth: params.max_depth,
                    min_samples_leaf: params.min_samples_leaf,
                    feature_subset_size: (subset < names.len()).then_some(subset),
                    tie_policy: params.tie_policy,
                    // separate stream from the bootstrap draw
                    seed: rng.gen(),
                };
                DecisionTree::fit_rows(&names, &columns, target, rows, tree_params)
            })
            .collect();

        let feature_importances = importances(&names, &trees);
        Ok(Self {
            params,
            features: names,
            trees,
            feature_importances,
        })
    }

    pub fn predict_bound(&self, table: &Table, binding: &[usize], row: usize) -> Result<Vote> {
        let mut tally = [0usize; 2];
        for tree in &self.trees {
            let p = tree.predict_bound(table, binding, row)?;
            tally[p.label as usize] += 1;
        }
        Ok(Vote {
            label: vote(tally),
            tally,
        })
    }

    pub fn bind(&self, table: &Table) -> Result<Vec<usize>> {
        self.trees[0].bind(table)
    }

    pub fn predict(&self, table: &Table, row: usize) -> Result<Vote> {
        let binding = self.bind(table)?;
        self.predict_bound(table, &binding, row)
    }

    pub fn predict_table(&self, table: &Table) -> Result<Vec<Label>> {
        let binding = self.bind(table)?;
        (0..table.n_rows())
            .into_par_iter()
            .map(|r| self.predict_bound(table, &binding, r).map(|v| v.label))
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Majority of a vote tally; an even split goes to class 0.
pub fn vote(tally: [usize; 2]) -> Label {
    u8::from(tally[1] > tally[0])
}

/// Mean impurity decrease per feature, averaged over trees and normalized
/// to sum to one. When no tree splits at all the zeros are returned as-is.
pub fn importances(names: &[String], trees: &[DecisionTree]) -> IndexMap<String, f64> {
    let mut total = vec![0.0; names.len()];
    for tree in trees {
        for (acc, v) in total.iter_mut().zip(tree.impurity_decrease()) {
            *acc += v;
        }
    }
    let n = trees.len().max(1) as f64;
    total.iter_mut().for_each(|v| *v /= n);
    let sum: f64 = total.iter().sum();
    if sum > 0.0 {
        total.iter_mut().for_each(|v| *v /= sum);
    }
    names.iter().cloned().zip(total).collect()
}
