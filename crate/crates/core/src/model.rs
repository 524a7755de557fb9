//! Model choices behind one interface, for cross-validation, comparison and
//! serialization.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::baselines::{LogRegConfig, LogisticModel};
use crate::dtree::{majority, DecisionTree, TreeParams};
use crate::error::{Error, Result};
use crate::forest::{ForestParams, RandomForest};
use crate::table::{class_counts, Label, Table};

pub trait Classifier {
    fn predict_table(&self, features: &Table) -> Result<Vec<Label>>;
}

impl Classifier for DecisionTree {
    fn predict_table(&self, features: &Table) -> Result<Vec<Label>> {
        DecisionTree::predict_table(self, features)
    }
}

impl Classifier for RandomForest {
    fn predict_table(&self, features: &Table) -> Result<Vec<Label>> {
        RandomForest::predict_table(self, features)
    }
}

impl Classifier for LogisticModel {
    fn predict_table(&self, features: &Table) -> Result<Vec<Label>> {
        LogisticModel::predict_table(self, features)
    }
}

/// A model that always predicts the same class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constant {
    pub label: Label,
}

impl Classifier for Constant {
    fn predict_table(&self, features: &Table) -> Result<Vec<Label>> {
        Ok(vec![self.label; features.n_rows()])
    }
}

/// Which model to train, with its hyper-parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelSpec {
    Forest(ForestParams),
    Tree(TreeParams),
    Logreg(LogRegConfig),
    /// Predicts the training majority class (ties to 0).
    Majority,
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Forest(_) => "forest",
            ModelSpec::Tree(_) => "tree",
            ModelSpec::Logreg(_) => "logreg",
            ModelSpec::Majority => "majority",
        }
    }

    /// Trains on the given data; `seed` replaces the configured seed.
    pub fn fit(&self, features: &Table, target: &[Label], seed: u64) -> Result<FittedModel> {
        Ok(match *self {
            ModelSpec::Forest(p) => {
                FittedModel::Forest(RandomForest::fit(features, target, ForestParams { seed, ..p })?)
            }
            ModelSpec::Tree(p) => {
                FittedModel::Tree(DecisionTree::fit(features, target, TreeParams { seed, ..p })?)
            }
            ModelSpec::Logreg(c) => {
                FittedModel::Logreg(LogisticModel::fit(features, target, LogRegConfig { seed, ..c })?)
            }
            ModelSpec::Majority => {
                if target.is_empty() {
                    return Err(Error::Empty("majority model training set"));
                }
                FittedModel::Constant(Constant {
                    label: majority(class_counts(target)),
                })
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum FittedModel {
    Forest(RandomForest),
    Tree(DecisionTree),
    Logreg(LogisticModel),
    Constant(Constant),
}

impl Classifier for FittedModel {
    fn predict_table(&self, features: &Table) -> Result<Vec<Label>> {
        match self {
            FittedModel::Forest(m) => m.predict_table(features),
            FittedModel::Tree(m) => m.predict_table(features),
            FittedModel::Logreg(m) => m.predict_table(features),
            FittedModel::Constant(m) => m.predict_table(features),
        }
    }
}

impl FittedModel {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}
